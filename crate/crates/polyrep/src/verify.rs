//! Membership oracles for both representations and the sampling harness that
//! checks they agree.
//!
//! Products are evaluated exactly (with a sign-only fast path). The power sum
//! has a guarded float path: each base is computed exactly, pushed through
//! outward-rounded float intervals, and the verdict against 1 is only
//! returned when certified, falling back to the exact rational otherwise.

use std::cmp::Ordering;

use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::construct::PRepresentation;
use crate::error::{Error, Result};
use crate::hrep::HPolytope;
use crate::lattice::{build_face_lattice, enumerate_vertices, FaceLattice};
use crate::num::{
    dyadic_sqrt_upper, norm_sq, pow_rat, rat, ratio, vec_add, vec_scale, Rat, RatVec,
};
use crate::poly::{EpsilonPoly, ProductPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    Exact,
    Guarded,
}

#[derive(Debug, Clone)]
pub struct MembershipVerdict {
    pub inside: bool,
    /// `(polynomial id, exact value)` for each violated inequality.
    pub violated: Vec<(String, Rat)>,
}

pub fn eval_product(pp: &ProductPoly, x: &[Rat]) -> Rat {
    pp.eval(x)
}

pub fn eval_product_sign(pp: &ProductPoly, x: &[Rat]) -> i8 {
    pp.sign(x)
}

/// Exact evaluation refuses beyond roughly this many bits in the powered
/// terms; the guarded path is then the only option.
const MAX_EXACT_BITS: u64 = 10_000_000;

fn exact_bit_estimate(ep: &EpsilonPoly, bases: &[Rat]) -> u64 {
    bases
        .iter()
        .map(|b| ep.two_p * (b.numer().bits() + b.denom().bits() + 1))
        .sum()
}

fn term_bases(ep: &EpsilonPoly, x: &[Rat]) -> Vec<Rat> {
    (0..ep.terms.len()).map(|i| ep.term_base(i, x)).collect()
}

pub fn eval_epsilon_exact(ep: &EpsilonPoly, x: &[Rat]) -> Result<Rat> {
    let bases = term_bases(ep, x);
    if exact_bit_estimate(ep, &bases) > MAX_EXACT_BITS {
        return Err(Error::ResourceGuard(
            "exact power-sum evaluation would exceed the bit budget".to_string(),
        ));
    }
    let mut sum = Rat::zero();
    for b in &bases {
        sum += &ep.weight * pow_rat(b, ep.two_p);
    }
    Ok(sum)
}

/// Outward-rounded interval `[lo, hi]` containing a real value.
#[derive(Debug, Clone, Copy)]
struct Interval {
    lo: f64,
    hi: f64,
}

fn widen(f: f64) -> Interval {
    // Infinities stay put (inf - inf would poison the interval with NaN);
    // NaN propagates and fails every comparison, forcing the exact path.
    if !f.is_finite() {
        return Interval { lo: f, hi: f };
    }
    let m = f.abs() * 1e-12 + 1e-300;
    Interval {
        lo: f - m,
        hi: f + m,
    }
}

/// Guarded comparison of the power sum against 1; `None` when the interval
/// straddles 1 and nothing can be certified.
pub fn epsilon_vs_one_guarded(ep: &EpsilonPoly, x: &[Rat]) -> Option<Ordering> {
    let e = ep.two_p;
    let w = widen(ep.weight.to_f64()?);
    let pow_slack = 1e-9 + (e as f64) * 1e-14;
    let mut lo = 0.0f64;
    let mut hi = 0.0f64;
    for i in 0..ep.terms.len() {
        let b = ep.term_base(i, x).abs();
        let bi = widen(b.to_f64()?);
        let bl = bi.lo.max(0.0);
        let bh = bi.hi.max(0.0);
        let term_lo = bl.powf(e as f64) * (1.0 - pow_slack) * w.lo.max(0.0);
        let term_hi = bh.powf(e as f64) * (1.0 + pow_slack) * w.hi;
        lo += term_lo;
        hi += term_hi;
    }
    let lo = widen(lo).lo;
    let hi = widen(hi).hi;
    if hi < 1.0 {
        Some(Ordering::Less)
    } else if lo > 1.0 {
        Some(Ordering::Greater)
    } else {
        None
    }
}

/// Comparison against 1 with exact semantics: guarded mode certifies via
/// intervals and falls back to the exact rational when uncertain.
pub fn epsilon_vs_one(ep: &EpsilonPoly, x: &[Rat], mode: EvalMode) -> Result<Ordering> {
    if mode == EvalMode::Guarded {
        if let Some(ord) = epsilon_vs_one_guarded(ep, x) {
            return Ok(ord);
        }
    }
    Ok(eval_epsilon_exact(ep, x)?.cmp(&rat(1)))
}

pub fn member_hrep(h: &HPolytope, x: &[Rat]) -> MembershipVerdict {
    let violated: Vec<(String, Rat)> = h
        .violations(x)
        .into_iter()
        .map(|(i, slack)| (format!("row_{i}"), slack))
        .collect();
    MembershipVerdict {
        inside: violated.is_empty(),
        violated,
    }
}

/// Exact membership in the polynomial system: all products over positive-
/// dimensional faces nonnegative, power sum at most 1, all vertex products
/// nonnegative.
pub fn member_prep(prep: &PRepresentation, x: &[Rat], mode: EvalMode) -> Result<MembershipVerdict> {
    let mut violated = Vec::new();
    for pp in prep.products.iter().filter(|p| p.k >= 1) {
        if pp.sign(x) < 0 {
            violated.push((pp.id(), pp.eval(x)));
        }
    }
    if epsilon_vs_one(&prep.epsilon, x, mode)? == Ordering::Greater {
        // The exact value is expensive (and can be out of reach) for huge
        // exponents; a certified verdict needs only a placeholder above 1.
        let value = match mode {
            EvalMode::Exact => eval_epsilon_exact(&prep.epsilon, x).unwrap_or_else(|_| rat(2)),
            EvalMode::Guarded => rat(2),
        };
        violated.push(("p_eps".to_string(), value));
    }
    for pp in prep.products.iter().filter(|p| p.k == 0) {
        if pp.sign(x) < 0 {
            violated.push((pp.id(), pp.eval(x)));
        }
    }
    Ok(MembershipVerdict {
        inside: violated.is_empty(),
        violated,
    })
}

#[derive(Debug, Clone)]
pub struct EquivalenceConfig {
    pub seed: u64,
    /// Total sample budget; the deterministic classes always run in full and
    /// the random classes fill the remainder.
    pub samples: usize,
    /// Step scale for the near-outside class.
    pub eps_bar: Rat,
}

#[derive(Debug, Clone)]
pub struct Disagreement {
    pub index: usize,
    pub class: &'static str,
    pub point: RatVec,
    pub in_hrep: bool,
    pub in_prep: bool,
}

#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    /// `(class name, samples tested)` in execution order.
    pub class_counts: Vec<(&'static str, usize)>,
    pub total: usize,
    pub disagreements: Vec<Disagreement>,
}

impl EquivalenceReport {
    pub fn agreed(&self) -> bool {
        self.disagreements.is_empty()
    }
}

fn bounding_box(lattice: &FaceLattice) -> (RatVec, RatVec) {
    let d = lattice.dim;
    let mut lo = lattice.vertices[0].coords.clone();
    let mut hi = lo.clone();
    for v in &lattice.vertices {
        for j in 0..d {
            if v.coords[j] < lo[j] {
                lo[j] = v.coords[j].clone();
            }
            if v.coords[j] > hi[j] {
                hi[j] = v.coords[j].clone();
            }
        }
    }
    (lo, hi)
}

/// Random convex combination of the vertices with positive integer weights.
fn interior_sample(lattice: &FaceLattice, rng: &mut ChaCha8Rng) -> RatVec {
    let weights: Vec<i64> = lattice
        .vertices
        .iter()
        .map(|_| rng.gen_range(1..=1000))
        .collect();
    let total: i64 = weights.iter().sum();
    let mut x = vec![Rat::zero(); lattice.dim];
    for (w, v) in weights.iter().zip(&lattice.vertices) {
        let w = ratio(*w, total);
        x = vec_add(&x, &vec_scale(&w, &v.coords));
    }
    x
}

/// Uniform dyadic point in the bounding box doubled about its center.
fn box_sample(lo: &[Rat], hi: &[Rat], rng: &mut ChaCha8Rng) -> RatVec {
    lo.iter()
        .zip(hi)
        .map(|(l, h)| {
            let center = (l + h) / rat(2);
            let half_width = h - l; // doubled box: center +- (h - l)
            let k = rng.gen_range(0..=(1u64 << 20)) as i64;
            let t = ratio(2 * k - (1 << 20), 1 << 20); // in [-1, 1]
            center + t * half_width
        })
        .collect()
}

/// Samples both oracles over five point classes and records every
/// disagreement. Fully deterministic for a given seed.
pub fn equivalence_test(
    h: &HPolytope,
    prep: &PRepresentation,
    cfg: &EquivalenceConfig,
) -> Result<EquivalenceReport> {
    let vertices = enumerate_vertices(h)?;
    let lattice = build_face_lattice(h, &vertices);
    let (lo, hi) = bounding_box(&lattice);

    // Deterministic classes.
    let boundary: Vec<RatVec> = lattice.all_faces().map(|f| lattice.barycenter(f)).collect();
    let mut near_outside: Vec<RatVec> = Vec::new();
    let steps = [
        &cfg.eps_bar / rat(4),
        &cfg.eps_bar / rat(2),
        &cfg.eps_bar * rat(2),
        &cfg.eps_bar * rat(4),
    ];
    for face in lattice.all_faces() {
        let bary = lattice.barycenter(face);
        for &fi in &face.facet_indices {
            let a = &h.rows[fi].0;
            let norm_upper = dyadic_sqrt_upper(&norm_sq(a), 16);
            for t in &steps {
                let s = t / &norm_upper;
                near_outside.push(vec_add(&bary, &vec_scale(&s, a)));
            }
        }
    }
    let center: RatVec = lo
        .iter()
        .zip(&hi)
        .map(|(l, u)| (l + u) / rat(2))
        .collect();
    let mut far_outside: Vec<RatVec> = Vec::new();
    for mask in 0..(1u32 << h.dim) {
        let corner: RatVec = (0..h.dim)
            .map(|j| {
                let c = if mask & (1 << j) != 0 { &hi[j] } else { &lo[j] };
                &center[j] + rat(2) * (c - &center[j])
            })
            .collect();
        far_outside.push(corner);
    }

    let fixed = boundary.len() + near_outside.len() + far_outside.len();
    let remaining = cfg.samples.saturating_sub(fixed).max(2);
    let n_interior = remaining / 2;
    let n_random = remaining - n_interior;

    let mut report = EquivalenceReport {
        class_counts: Vec::new(),
        total: 0,
        disagreements: Vec::new(),
    };
    let mut index = 0usize;
    let mut run_class = |name: &'static str,
                         points: &mut dyn Iterator<Item = RatVec>,
                         report: &mut EquivalenceReport|
     -> Result<usize> {
        let mut count = 0;
        for point in points {
            let in_hrep = member_hrep(h, &point).inside;
            let in_prep = member_prep(prep, &point, EvalMode::Guarded)?.inside;
            if in_hrep != in_prep {
                report.disagreements.push(Disagreement {
                    index,
                    class: name,
                    point,
                    in_hrep,
                    in_prep,
                });
            }
            index += 1;
            count += 1;
        }
        Ok(count)
    };

    let mut interior_iter = (0..n_interior).map(|i| {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(i as u64));
        interior_sample(&lattice, &mut rng)
    });
    let n = run_class("interior", &mut interior_iter, &mut report)?;
    report.class_counts.push(("interior", n));

    let n = run_class("boundary", &mut boundary.into_iter(), &mut report)?;
    report.class_counts.push(("boundary", n));

    let n = run_class("near_outside", &mut near_outside.into_iter(), &mut report)?;
    report.class_counts.push(("near_outside", n));

    let n = run_class("far_outside", &mut far_outside.into_iter(), &mut report)?;
    report.class_counts.push(("far_outside", n));

    let base = cfg.seed.wrapping_add(n_interior as u64);
    let mut random_iter = (0..n_random).map(|i| {
        let mut rng = ChaCha8Rng::seed_from_u64(base.wrapping_add(i as u64));
        box_sample(&lo, &hi, &mut rng)
    });
    let n = run_class("random_box", &mut random_iter, &mut report)?;
    report.class_counts.push(("random_box", n));

    report.total = report.class_counts.iter().map(|(_, n)| n).sum();
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct StructuralReport {
    pub failures: Vec<String>,
}

impl StructuralReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Random affine combination of a face's vertices (weights sum to 1, may be
/// negative, so the point ranges over the affine hull).
fn affine_combo(lattice: &FaceLattice, vertex_ids: &[usize], rng: &mut ChaCha8Rng) -> RatVec {
    let mut weights: Vec<i64> = vertex_ids.iter().map(|_| rng.gen_range(-2..=4)).collect();
    if weights.iter().sum::<i64>() == 0 {
        weights[0] += 1;
    }
    let total: i64 = weights.iter().sum();
    let mut x = vec![Rat::zero(); lattice.dim];
    for (&w, &vid) in weights.iter().zip(vertex_ids) {
        let w = ratio(w, total);
        x = vec_add(&x, &vec_scale(&w, &lattice.vertices[vid].coords));
    }
    x
}

/// Structure-level checks of a constructed system against its source:
/// facet factors match the rows verbatim, each face's factor vanishes on the
/// face's affine hull, and the power sum stays at most 1 on every vertex.
pub fn structural_checks(
    h: &HPolytope,
    lattice: &FaceLattice,
    prep: &PRepresentation,
) -> StructuralReport {
    let mut failures = Vec::new();
    let d = h.dim;

    match prep.product(d - 1, &[1]) {
        None => failures.push("missing facet-level product".to_string()),
        Some(top) => {
            if top.factors.len() != h.m() {
                failures.push("facet-level product has wrong factor count".to_string());
            } else {
                for (i, ((a, b), f)) in h.rows.iter().zip(&top.factors).enumerate() {
                    if *f != crate::poly::LinearForm::facet_form(a, b) {
                        failures.push(format!("facet factor {i} differs from its row"));
                    }
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0xA11CE);
    for k in 0..d {
        for pp in prep.products.iter().filter(|p| p.k == k) {
            if pp.factors.len() != lattice.faces(k).len() {
                failures.push(format!("{} factor count differs from face count", pp.id()));
                continue;
            }
            for (face, factor) in lattice.faces(k).iter().zip(&pp.factors) {
                let mut points = vec![lattice.barycenter(face)];
                for _ in 0..3 {
                    points.push(affine_combo(lattice, &face.vertex_ids, &mut rng));
                }
                for x in &points {
                    if !factor.eval(x).is_zero() {
                        failures.push(format!(
                            "{} factor for face {:?} does not vanish on the face",
                            pp.id(),
                            face.facet_indices
                        ));
                        break;
                    }
                }
            }
        }
    }

    for v in &lattice.vertices {
        match epsilon_vs_one(&prep.epsilon, &v.coords, EvalMode::Guarded) {
            Ok(Ordering::Greater) => {
                failures.push(format!("power sum exceeds 1 at vertex {:?}", v.coords));
            }
            Ok(_) => {}
            Err(_) => failures.push("power sum too large to evaluate at a vertex".to_string()),
        }
    }

    StructuralReport { failures }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::construct_prep;
    use crate::hrep::unit_square;
    use crate::metrics::RhoMode;
    use crate::num::ratvec;

    fn square_prep() -> (HPolytope, PRepresentation) {
        let h = unit_square();
        let prep = construct_prep(&h, RhoMode::Exact).unwrap();
        (h, prep)
    }

    #[test]
    fn square_products_and_membership() {
        let (h, prep) = square_prep();
        assert_eq!(prep.polynomial_count(), 3);
        let p1 = prep.product(1, &[1]).unwrap();
        let outside = vec![ratio(3, 2), rat(0)];
        assert_eq!(eval_product(p1, &outside), ratio(-5, 4));
        assert_eq!(eval_product_sign(p1, &outside), -1);

        let origin = ratvec(&[0, 0]);
        assert_eq!(eval_product(p1, &origin), rat(1));
        assert!(member_hrep(&h, &origin).inside);
        assert!(member_prep(&prep, &origin, EvalMode::Exact).unwrap().inside);

        let v = member_hrep(&h, &outside);
        assert!(!v.inside);
        assert_eq!(v.violated[0].0, "row_0");
        let v = member_prep(&prep, &outside, EvalMode::Exact).unwrap();
        assert!(!v.inside);
        assert!(v.violated.iter().any(|(id, _)| id == "p_1,(1)"));
    }

    #[test]
    fn epsilon_at_origin_and_past_facet() {
        let (_, prep) = square_prep();
        assert_eq!(
            eval_epsilon_exact(&prep.epsilon, &ratvec(&[0, 0])).unwrap(),
            rat(0)
        );
        // Just past a facet but inside the sublevel set: products catch it,
        // well past it the power sum must too.
        let far = vec![rat(2), rat(0)];
        assert_eq!(
            epsilon_vs_one(&prep.epsilon, &far, EvalMode::Guarded).unwrap(),
            Ordering::Greater
        );
    }

    #[test]
    fn guarded_agrees_with_exact() {
        let (_, prep) = square_prep();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let x = vec![
                ratio(rng.gen_range(-3000..=3000), 1000),
                ratio(rng.gen_range(-3000..=3000), 1000),
            ];
            if let Some(ord) = epsilon_vs_one_guarded(&prep.epsilon, &x) {
                let exact = eval_epsilon_exact(&prep.epsilon, &x).unwrap();
                assert_eq!(exact.cmp(&rat(1)), ord, "at {x:?}");
            }
        }
    }

    #[test]
    fn vertex_membership_with_zero_factors() {
        let (_, prep) = square_prep();
        let v = ratvec(&[1, 1]);
        assert!(member_prep(&prep, &v, EvalMode::Exact).unwrap().inside);
        for pp in &prep.products {
            assert_eq!(pp.sign(&v), 0, "{} must vanish at a vertex", pp.id());
        }
    }

    #[test]
    fn square_equivalence_all_classes() {
        let (h, prep) = square_prep();
        let cfg = EquivalenceConfig {
            seed: 0,
            samples: 400,
            eps_bar: ratio(1, 2),
        };
        let report = equivalence_test(&h, &prep, &cfg).unwrap();
        assert!(report.agreed(), "disagreements: {:?}", report.disagreements);
        assert_eq!(report.class_counts.len(), 5);
        assert!(report.class_counts.iter().all(|(_, n)| *n > 0));
    }

    #[test]
    fn dropped_vertex_polynomial_is_detected() {
        // Asymmetric pentagon: at the vertex (2, 1) the power sum has slack
        // below 1, so just past that vertex only the vertex-level product
        // objects; dropping it must create a visible disagreement.
        let h = HPolytope::from_ints(
            2,
            &[
                (&[1, 0], 2),
                (&[0, 1], 2),
                (&[-1, 0], 1),
                (&[0, -1], 1),
                (&[1, 1], 3),
            ],
        );
        let full = construct_prep(&h, RhoMode::Exact).unwrap();
        let mut mutated = full.clone();
        mutated.products.retain(|p| p.k != 0);

        let mut found = false;
        for k in 3..24u32 {
            let s = Rat::new(1.into(), (1u64 << k).into());
            let x = vec![rat(2) + &s, rat(1)];
            assert!(!member_hrep(&h, &x).inside);
            assert!(!member_prep(&full, &x, EvalMode::Exact).unwrap().inside);
            if member_prep(&mutated, &x, EvalMode::Exact).unwrap().inside {
                found = true;
                break;
            }
        }
        assert!(found, "mutation never surfaced past the vertex");
    }

    #[test]
    fn structural_checks_pass_and_catch_mutation() {
        let (h, prep) = square_prep();
        let vs = enumerate_vertices(&h).unwrap();
        let lattice = build_face_lattice(&h, &vs);
        let report = structural_checks(&h, &lattice, &prep);
        assert!(report.passed(), "failures: {:?}", report.failures);

        let mut bad = prep.clone();
        bad.products[0].factors[0].c0 += rat(1);
        let report = structural_checks(&h, &lattice, &bad);
        assert!(!report.passed());
    }
}
