//! Acceptance gate: one test per criterion, each printing a PASS line.

use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use polyrep::construct::{
    closed_form_rep, construct_prep, mu_count, prism_lift, projectivize_pointed, pullback_prep,
    pyramid_lift, ClosedFormKind, PRepresentation,
};
use polyrep::hrep::{cube, skew_dodecahedron, standard_simplex, tangent_polygon, unit_square, HPolytope};
use polyrep::lattice::{build_face_lattice, enumerate_vertices, validate_hrep, FaceLattice};
use polyrep::metrics::{choose_exponent, compute_metrics, MetricsBundle, RhoMode};
use polyrep::num::{dyadic_sqrt_lower, norm_sq, rat, ratio, vec_add, vec_scale, Rat, RatVec};
use polyrep::poly::{LinearForm, SparsePoly};
use polyrep::verify::{
    epsilon_vs_one, equivalence_test, member_hrep, member_prep, structural_checks,
    EquivalenceConfig, EvalMode,
};

struct GoldenState {
    h: HPolytope,
    lattice: FaceLattice,
    metrics: MetricsBundle,
    prep: PRepresentation,
}

/// The 3-D example with 12 pentagonal facets, computed once and shared.
fn golden() -> &'static GoldenState {
    static STATE: OnceLock<GoldenState> = OnceLock::new();
    STATE.get_or_init(|| {
        let h = skew_dodecahedron();
        let vertices = enumerate_vertices(&h).unwrap();
        let lattice = build_face_lattice(&h, &vertices);
        let metrics = compute_metrics(&h, &lattice, RhoMode::Dimension).unwrap();
        let prep = construct_prep(&h, RhoMode::Dimension).unwrap();
        GoldenState {
            h,
            lattice,
            metrics,
            prep,
        }
    })
}

/// Deterministic battery of simple polygons: distinct tangent parameters to
/// a circle, 6 to 12 facets.
fn random_polygons() -> Vec<HPolytope> {
    let pool: Vec<(i64, i64)> = vec![
        (0, 1),
        (1, 4),
        (1, 2),
        (1, 1),
        (2, 1),
        (4, 1),
        (-1, 4),
        (-1, 2),
        (-1, 1),
        (-2, 1),
        (-4, 1),
        (3, 2),
        (-3, 2),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut out = Vec::new();
    while out.len() < 5 {
        let m = rng.gen_range(6..=12usize);
        let mut params = pool.clone();
        for i in (1..params.len()).rev() {
            params.swap(i, rng.gen_range(0..=i));
        }
        params.truncate(m);
        // Boundedness requires left- and right-pointing normals; the pool's
        // |p| > |q| entries point left, |p| < |q| right, (1,1)/(-1,1) up/down.
        let has_left = params.iter().any(|&(p, q)| p.abs() > q.abs());
        let has_right = params.iter().any(|&(p, q)| p.abs() < q.abs());
        let has_up = params.iter().any(|&(p, q)| p * q > 0);
        let has_down = params.iter().any(|&(p, q)| p * q < 0);
        if !(has_left && has_right && has_up && has_down) {
            continue;
        }
        let h = tangent_polygon(&params, rng.gen_range(1..=3));
        let vertices = enumerate_vertices(&h).unwrap();
        let report = validate_hrep(&h, &vertices);
        assert!(report.is_valid(), "generated polygon invalid: {:?}", report.issues);
        out.push(h);
    }
    out
}

fn sample_box_point(d: usize, scale: i64, rng: &mut ChaCha8Rng) -> RatVec {
    (0..d)
        .map(|_| ratio(rng.gen_range(-1000 * scale..=1000 * scale), 1000))
        .collect()
}

fn sparse_member(polys: &[SparsePoly], x: &[Rat]) -> bool {
    use num_traits::Signed;
    polys.iter().all(|p| !p.eval(x).is_negative())
}

#[test]
fn criterion_01_golden_structure() {
    let g = golden();
    let report = validate_hrep(&g.h, &g.lattice.vertices);
    assert!(report.is_valid(), "issues: {:?}", report.issues);
    assert_eq!(g.lattice.f_vector(), vec![20, 30, 12]);
    println!("ACCEPTANCE 1 (golden structure: simple, f-vector (20,30,12)): PASS");
}

#[test]
fn criterion_02_golden_metrics() {
    let g = golden();
    let m = &g.metrics;
    let eps2 = m.eps_k_sq[2].as_ref().expect("facet level finite");
    let eps1 = m.eps_k_sq[1].as_ref().expect("edge level finite");
    let eps0 = m.eps_k_sq[0].as_ref().expect("vertex level finite");
    assert!(eps2 > &ratio(1, 100), "eps_2^2 = {eps2}");
    assert!(eps1 > &ratio(9, 2500), "eps_1^2 = {eps1}");
    assert!(eps0 > &ratio(9, 10000), "eps_0^2 = {eps0}");
    // The published choice: eps_bar = 3/100, diameter bound 4, rho = 1/(d+1).
    let p = choose_exponent(12, 3, &ratio(3, 100), &rat(4), RhoMode::Dimension, &m.r_min).unwrap();
    assert_eq!(p, 332);
    println!("ACCEPTANCE 2 (golden metrics: eps bounds, exponent 332): PASS");
}

#[test]
fn criterion_03_golden_polynomials() {
    let g = golden();
    assert_eq!(g.prep.mu, 6);
    assert_eq!(g.prep.polynomial_count(), 6);

    // Facet level: the 12 row forms verbatim.
    let p2 = g.prep.product(2, &[1]).unwrap();
    assert_eq!(p2.factors.len(), 12);
    for ((a, b), f) in g.h.rows.iter().zip(&p2.factors) {
        assert_eq!(*f, LinearForm::facet_form(a, b));
    }

    // Edge level: six unambiguous published factors.
    let p1 = g.prep.product(1, &[1, 1]).unwrap();
    assert_eq!(p1.factors.len(), 30);
    let expected = [
        LinearForm::new(rat(10), vec![rat(-2), rat(-3), rat(-5)]),
        LinearForm::new(rat(10), vec![rat(0), rat(-6), rat(0)]),
        LinearForm::new(rat(11), vec![rat(-6), rat(0), rat(0)]),
        LinearForm::new(rat(9), vec![rat(6), rat(0), rat(0)]),
        LinearForm::new(rat(10), vec![rat(0), rat(0), rat(6)]),
        LinearForm::new(rat(12), vec![rat(0), rat(6), rat(0)]),
    ];
    for want in &expected {
        assert!(p1.factors.contains(want), "missing edge factor {want:?}");
    }

    // Vertex level, weight (1,1,2): one published factor.
    let p0 = g.prep.product(0, &[1, 1, 2]).unwrap();
    assert_eq!(p0.factors.len(), 20);
    let want = LinearForm::new(rat(20), vec![rat(-8), rat(-7), rat(-5)]);
    assert!(p0.factors.contains(&want), "missing vertex factor");

    // First power-sum term: (1/12) * [(1 + 6 x2 + 4 x3) / 11]^664, where the
    // exponent 664 = 2*332 comes from the published rounding eps_bar = 3/100
    // and diameter bound 4 (the pipeline's own eps_bar = 1/64 is tighter and
    // yields a larger exponent).
    let vertices = enumerate_vertices(&g.h).unwrap();
    let (h_shifted, _) = polyrep::metrics::recenter(&g.h, &vertices);
    let mut published = g.metrics.clone();
    published.exponent_p =
        choose_exponent(12, 3, &ratio(3, 100), &rat(4), RhoMode::Dimension, &g.metrics.r_min)
            .unwrap();
    let ep = polyrep::construct::epsilon_poly(&h_shifted, &published).unwrap();
    assert_eq!(ep.weight, ratio(1, 12));
    assert_eq!(ep.two_p, 664);
    assert_eq!(
        ep.term_numerator(0),
        LinearForm::new(rat(1), vec![rat(0), rat(6), rat(4)])
    );
    assert_eq!(ep.term_denominator(0), rat(11));
    // The constructed system shares the terms, differing only in exponent.
    assert_eq!(g.prep.epsilon.weight, ratio(1, 12));
    assert_eq!(g.prep.epsilon.term_numerator(0), ep.term_numerator(0));
    assert_eq!(g.prep.epsilon.term_denominator(0), ep.term_denominator(0));
    println!("ACCEPTANCE 3 (golden polynomial listings): PASS");
}

#[test]
fn criterion_04_golden_equivalence() {
    let g = golden();
    let cfg = EquivalenceConfig {
        seed: 0,
        samples: 10_000,
        eps_bar: g.metrics.eps_bar.clone(),
    };
    let report = equivalence_test(&g.h, &g.prep, &cfg).unwrap();
    assert!(report.total >= 10_000);
    assert_eq!(report.class_counts.len(), 5);
    assert!(
        report.agreed(),
        "disagreements: {:?}",
        &report.disagreements[..report.disagreements.len().min(5)]
    );
    println!(
        "ACCEPTANCE 4 (golden equivalence, {} samples, 0 disagreements): PASS",
        report.total
    );
}

#[test]
fn criterion_05_polygon_equivalence() {
    let mut tested = 0;
    for (i, h) in std::iter::once(unit_square())
        .chain(random_polygons())
        .enumerate()
    {
        let vertices = enumerate_vertices(&h).unwrap();
        let lattice = build_face_lattice(&h, &vertices);
        let metrics = compute_metrics(&h, &lattice, RhoMode::Exact).unwrap();
        let prep = construct_prep(&h, RhoMode::Exact).unwrap();
        assert_eq!(prep.mu, 3);
        assert_eq!(prep.polynomial_count(), 3);
        let cfg = EquivalenceConfig {
            seed: 7 + i as u64,
            samples: 1500,
            eps_bar: metrics.eps_bar.clone(),
        };
        let report = equivalence_test(&h, &prep, &cfg).unwrap();
        assert!(
            report.agreed(),
            "polygon {i} ({} facets): {:?}",
            h.m(),
            &report.disagreements[..report.disagreements.len().min(3)]
        );
        tested += 1;
    }
    println!("ACCEPTANCE 5 ({tested} polygons, mu(2)=3, 0 disagreements): PASS");
}

#[test]
fn criterion_06_closed_forms() {
    for d in 1..=5usize {
        for kind in [ClosedFormKind::Cube, ClosedFormKind::Simplex] {
            let polys = closed_form_rep(kind, d);
            assert_eq!(polys.len(), d);
            let h = match kind {
                ClosedFormKind::Cube => cube(d),
                ClosedFormKind::Simplex => standard_simplex(d),
            };
            let mut rng = ChaCha8Rng::seed_from_u64(100 + d as u64);
            for _ in 0..1000 {
                let x = sample_box_point(d, 2, &mut rng);
                assert_eq!(
                    sparse_member(&polys, &x),
                    h.contains(&x),
                    "kind {kind:?} d={d} at {x:?}"
                );
            }
        }
    }
    println!("ACCEPTANCE 6 (closed forms d=1..5 agree with halfspace systems): PASS");
}

#[test]
fn criterion_07_lifts() {
    let base = closed_form_rep(ClosedFormKind::Cube, 2);

    // Prism [-1,1]^2 x [0,1].
    let prism = prism_lift(&base);
    assert_eq!(prism.len(), 3);
    let prism_h = HPolytope::from_ints(
        3,
        &[
            (&[1, 0, 0], 1),
            (&[-1, 0, 0], 1),
            (&[0, 1, 0], 1),
            (&[0, -1, 0], 1),
            (&[0, 0, 1], 1),
            (&[0, 0, -1], 0),
        ],
    );
    let mut rng = ChaCha8Rng::seed_from_u64(200);
    for _ in 0..1000 {
        let x = sample_box_point(3, 2, &mut rng);
        assert_eq!(sparse_member(&prism, &x), prism_h.contains(&x), "prism at {x:?}");
    }

    // Pyramid over the normalized square base, apex (0,0,1).
    let square_vertices: Vec<RatVec> = vec![
        vec![rat(1), rat(1)],
        vec![rat(1), rat(-1)],
        vec![rat(-1), rat(1)],
        vec![rat(-1), rat(-1)],
    ];
    let (pyramid, map) = pyramid_lift(&base, &square_vertices).unwrap();
    assert_eq!(pyramid.len(), 3);
    let s = &map.scale;
    assert!((s * s * rat(2)) <= rat(1)); // base scaled into the unit ball
    let pyramid_h = HPolytope::new(
        3,
        vec![
            (vec![rat(1), rat(0), s.clone()], s.clone()),
            (vec![rat(-1), rat(0), s.clone()], s.clone()),
            (vec![rat(0), rat(1), s.clone()], s.clone()),
            (vec![rat(0), rat(-1), s.clone()], s.clone()),
            (vec![rat(0), rat(0), rat(-1)], rat(0)),
        ],
    );
    for _ in 0..1000 {
        let x = sample_box_point(3, 2, &mut rng);
        assert_eq!(
            sparse_member(&pyramid, &x),
            pyramid_h.contains(&x),
            "pyramid at {x:?}"
        );
    }
    // Apex membership is exact.
    let apex = vec![rat(0), rat(0), rat(1)];
    assert!(sparse_member(&pyramid, &apex));
    assert!(pyramid_h.contains(&apex));
    assert!(!sparse_member(&pyramid, &vec![rat(0), rat(0), ratio(101, 100)]));
    println!("ACCEPTANCE 7 (prism and pyramid lifts, 3 polynomials each): PASS");
}

#[test]
fn criterion_08_projectivization() {
    for d in [2usize, 3] {
        let rows: Vec<(Vec<i64>, i64)> = (0..d)
            .map(|i| {
                let mut a = vec![0i64; d];
                a[i] = -1;
                (a, 0)
            })
            .collect();
        let row_refs: Vec<(&[i64], i64)> = rows.iter().map(|(a, b)| (a.as_slice(), *b)).collect();
        let orthant = HPolytope::from_ints(d, &row_refs);
        let proj = projectivize_pointed(&orthant, None).unwrap();
        assert_eq!(proj.polytope, standard_simplex(d));
        assert_eq!(proj.c, vec![rat(1); d]);

        let simplex_rep = closed_form_rep(ClosedFormKind::Simplex, d);
        let (pulled, last) = pullback_prep(&simplex_rep, &proj.c).unwrap();
        assert_eq!(last, LinearForm::new(rat(0), proj.c.clone()));

        let member = |x: &[Rat]| {
            use num_traits::Signed;
            !last.eval(x).is_negative() && sparse_member(&pulled, x)
        };
        let mut rng = ChaCha8Rng::seed_from_u64(300 + d as u64);
        for _ in 0..1000 {
            let x = sample_box_point(d, 3, &mut rng);
            assert_eq!(member(&x), orthant.contains(&x), "orthant d={d} at {x:?}");
        }
        // Boundary rays: coordinate axes at several radii, origin included.
        for i in 0..d {
            for t in [rat(0), ratio(1, 2), rat(1), rat(5), rat(50)] {
                let mut x = vec![rat(0); d];
                x[i] = t;
                assert!(member(&x));
                x[i] = -&x[i] - rat(1);
                assert!(!member(&x));
            }
        }
    }
    println!("ACCEPTANCE 8 (orthant projectivization and pullback, d=2,3): PASS");
}

#[test]
fn criterion_09_structural_and_mutations() {
    let g = golden();
    let report = structural_checks(&g.h, &g.lattice, &g.prep);
    assert!(report.passed(), "golden failures: {:?}", report.failures);

    for d in [3usize, 4] {
        let h = cube(d);
        let vertices = enumerate_vertices(&h).unwrap();
        let lattice = build_face_lattice(&h, &vertices);
        let prep = construct_prep(&h, RhoMode::Exact).unwrap();
        let report = structural_checks(&h, &lattice, &prep);
        assert!(report.passed(), "cube({d}) failures: {:?}", report.failures);
    }

    for (i, h) in random_polygons().into_iter().enumerate() {
        let vertices = enumerate_vertices(&h).unwrap();
        let lattice = build_face_lattice(&h, &vertices);
        let prep = construct_prep(&h, RhoMode::Exact).unwrap();
        let report = structural_checks(&h, &lattice, &prep);
        assert!(report.passed(), "polygon {i} failures: {:?}", report.failures);

        // Mutation 1: corrupt one facet constant.
        let mut bad = prep.clone();
        bad.products[0].factors[0].c0 += rat(1);
        assert!(!structural_checks(&h, &lattice, &bad).passed());

        // Mutation 2: drop the vertex-level polynomial; scanning outward
        // past each vertex must surface a membership disagreement.
        let mut dropped = prep.clone();
        dropped.products.retain(|p| p.k != 0);
        let mut found = false;
        'outer: for v in &lattice.vertices {
            // Outward direction: sum of the active facet normals.
            let dir = v
                .facet_set
                .iter()
                .fold(vec![rat(0); 2], |acc, &fi| vec_add(&acc, &h.rows[fi].0));
            for k in 2..24u32 {
                let s = Rat::new(1.into(), (1u64 << k).into());
                let x = vec_add(&v.coords, &vec_scale(&s, &dir));
                if member_hrep(&h, &x).inside {
                    continue;
                }
                assert!(!member_prep(&prep, &x, EvalMode::Guarded).unwrap().inside);
                if member_prep(&dropped, &x, EvalMode::Guarded).unwrap().inside {
                    found = true;
                    break 'outer;
                }
            }
        }
        assert!(found, "dropped polynomial undetected on polygon {i}");
    }
    println!("ACCEPTANCE 9 (structural checks pass; mutations detected): PASS");
}

#[test]
fn criterion_10_counting() {
    assert_eq!(mu_count(2), 3);
    assert_eq!(mu_count(3), 6);
    assert_eq!(mu_count(4), 87);
    assert_eq!(mu_count(5), 1111);
    for d in 2..=6u32 {
        assert!(mu_count(d as usize) < (d as u128).pow(d));
    }
    println!("ACCEPTANCE 10 (polynomial counts 3, 6, 87, 1111, < d^d): PASS");
}

#[test]
fn criterion_11_sublevel_set_behavior() {
    use std::cmp::Ordering;

    let square = unit_square();
    let square_prep = construct_prep(&square, RhoMode::Exact).unwrap();
    for instance in [(golden().h.clone(), &golden().prep), (square, &square_prep)] {
        let (h, prep) = instance;
        let vertices = enumerate_vertices(&h).unwrap();
        for v in &vertices {
            let val = polyrep::verify::eval_epsilon_exact(&prep.epsilon, &v.coords).unwrap();
            assert!(val <= rat(1), "power sum {val} above 1 at vertex");
        }
    }

    // 100 points at exact rational distance >= 2 eps_bar outside golden
    // facets: the power sum must certify > 1.
    let g = golden();
    let two_eps = &g.metrics.eps_bar * rat(2);
    let mut checked = 0;
    'outer: for (fi, (a, _)) in g.h.rows.iter().enumerate() {
        let face = g
            .lattice
            .faces(2)
            .iter()
            .find(|f| f.facet_indices == vec![fi])
            .unwrap();
        let bary = g.lattice.barycenter(face);
        let norm_lower = dyadic_sqrt_lower(&norm_sq(a), 16);
        for mult in 1..=9i64 {
            // Step of exact length >= 2 eps_bar * mult along the normal.
            let s = &two_eps * rat(mult) / &norm_lower;
            let x = vec_add(&bary, &vec_scale(&s, a));
            debug_assert!(&norm_sq(&vec_scale(&s, a)) >= &(&two_eps * rat(mult) * &two_eps * rat(mult)));
            let ord = epsilon_vs_one(&g.prep.epsilon, &x, EvalMode::Guarded).unwrap();
            assert_eq!(ord, Ordering::Greater, "facet {fi}, step {mult}");
            checked += 1;
            if checked == 100 {
                break 'outer;
            }
        }
    }
    assert!(checked >= 100);
    println!("ACCEPTANCE 11 (power sum <= 1 on vertices, > 1 beyond 2 eps_bar): PASS");
}
