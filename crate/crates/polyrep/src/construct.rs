//! Assembly of the polynomial system: weight sets, face support forms,
//! face-product polynomials, the approximating power sum, closed-form cube
//! and simplex descriptions, prism/pyramid lifts, and projectivization of
//! pointed polyhedra.

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::hrep::HPolytope;
use crate::lattice::{build_face_lattice, enumerate_vertices, validate_hrep, Face, FaceLattice};
use crate::linalg::kernel_basis;
use crate::lp::{lp_solve, LpStatus, Sense};
use crate::metrics::{compute_metrics, face_support_vector, MetricsBundle, RhoMode};
use crate::num::{dot, dyadic_sqrt_lower, norm_sq, rat, vec_scale, vec_sub, Rat, RatVec};
use crate::poly::{EpsilonPoly, EpsilonTerm, LinearForm, ProductPoly, SparsePoly, WeightVector};

/// Weight vectors attached to k-faces of a d-polytope: length d-k, entries
/// powers of two. The two top levels and the reduced third level are fixed
/// small sets; below that the full power-of-two grid is used.
pub fn weight_sets(d: usize, k: usize) -> Result<Vec<WeightVector>> {
    if k >= d {
        return Err(Error::Unsupported(format!(
            "face dimension {k} out of range for d={d}"
        )));
    }
    let n = d - k;
    Ok(match n {
        1 => vec![vec![1]],
        2 => vec![vec![1, 1]],
        3 => vec![vec![1, 1, 2], vec![1, 2, 1], vec![2, 1, 1]],
        _ => {
            let max_l = (n - 2) as u32;
            (0..n)
                .map(|_| 0..=max_l)
                .multi_cartesian_product()
                .map(|ls| ls.into_iter().map(|l| 1u64 << l).collect())
                .collect()
        }
    })
}

/// Number of polynomials the construction emits for a simple d-polytope.
pub fn mu_count(d: usize) -> u128 {
    assert!(d >= 2);
    let mut total: u128 = 1; // the approximating polynomial
    for k in 0..d {
        let n = d - k;
        total += match n {
            1 => 1,
            2 => 1,
            3 => 3,
            _ => ((n - 1) as u128).pow(n as u32),
        };
    }
    total
}

/// Supporting-hyperplane form of a face under a weight vector:
/// `(sum w_j b_j) - <sum w_j a_j, x>`, with the support value by the sum
/// formula.
pub fn face_support_form(h: &HPolytope, face: &Face, w: &WeightVector) -> Result<LinearForm> {
    if w.len() != face.facet_indices.len() {
        return Err(Error::DimensionMismatch {
            expected: face.facet_indices.len(),
            got: w.len(),
        });
    }
    let (a, hv) = face_support_vector(h, &face.facet_indices, w);
    Ok(LinearForm::facet_form(&a, &hv))
}

/// Product over all k-faces, factors in lexicographic facet-index order.
pub fn face_product_poly(
    k: usize,
    w: &WeightVector,
    lattice: &FaceLattice,
    h: &HPolytope,
) -> Result<ProductPoly> {
    let factors = lattice
        .faces(k)
        .iter()
        .map(|f| face_support_form(h, f, w))
        .collect::<Result<Vec<_>>>()?;
    Ok(ProductPoly {
        k,
        w: w.clone(),
        factors,
    })
}

/// The structured approximating polynomial from the shifted system and the
/// metric bundle.
pub fn epsilon_poly(h_shifted: &HPolytope, metrics: &MetricsBundle) -> Result<EpsilonPoly> {
    let m = h_shifted.m();
    let mut terms = Vec::with_capacity(m);
    for (i, ((a, b), h_minus)) in h_shifted.rows.iter().zip(&metrics.h_minus).enumerate() {
        if !(b + h_minus).is_positive() {
            return Err(Error::NonpositiveDenominator(i));
        }
        terms.push(EpsilonTerm {
            a: a.clone(),
            b: b.clone(),
            h_minus: h_minus.clone(),
        });
    }
    Ok(EpsilonPoly {
        terms,
        weight: Rat::one() / rat(m as i64),
        two_p: 2 * metrics.exponent_p,
        shift: metrics.shift.clone(),
    })
}

/// The assembled system: all face products (descending face dimension, as
/// they are conventionally listed), the approximating polynomial, and
/// provenance metadata.
#[derive(Debug, Clone)]
pub struct PRepresentation {
    pub dim: usize,
    pub products: Vec<ProductPoly>,
    pub epsilon: EpsilonPoly,
    pub shift: RatVec,
    pub mu: u128,
    pub source_hash: String,
}

impl PRepresentation {
    pub fn polynomial_count(&self) -> usize {
        self.products.len() + 1
    }

    pub fn product(&self, k: usize, w: &[u64]) -> Option<&ProductPoly> {
        self.products.iter().find(|p| p.k == k && p.w == w)
    }
}

/// Full pipeline: validate, build the lattice, derive metrics, emit every
/// face product and the approximating polynomial. All linear factors are in
/// the original frame.
pub fn construct_prep(h: &HPolytope, rho_mode: RhoMode) -> Result<PRepresentation> {
    let vertices = enumerate_vertices(h)?;
    let report = validate_hrep(h, &vertices);
    if !report.is_valid() {
        return Err(Error::InvalidHRep(format!(
            "{} issue(s), first: {:?}",
            report.issues.len(),
            report.issues[0]
        )));
    }
    let lattice = build_face_lattice(h, &vertices);
    let metrics = compute_metrics(h, &lattice, rho_mode)?;
    let (h_shifted, _) = crate::metrics::recenter(h, &vertices);

    let d = h.dim;
    let mut products = Vec::new();
    for k in (0..d).rev() {
        for w in weight_sets(d, k)? {
            products.push(face_product_poly(k, &w, &lattice, h)?);
        }
    }
    let epsilon = epsilon_poly(&h_shifted, &metrics)?;
    let mu = mu_count(d);
    debug_assert_eq!(mu, (products.len() + 1) as u128);
    Ok(PRepresentation {
        dim: d,
        products,
        epsilon,
        shift: metrics.shift.clone(),
        mu,
        source_hash: h.content_hash(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedFormKind {
    Cube,
    Simplex,
}

/// The d closed-form polynomials for the standard cube `[-1,1]^d`
/// (`1 - x_i^2`) or the standard simplex (`x_i (1 - x_i - ... - x_d)`).
pub fn closed_form_rep(kind: ClosedFormKind, d: usize) -> Vec<SparsePoly> {
    assert!(d >= 1);
    match kind {
        ClosedFormKind::Cube => (0..d)
            .map(|i| {
                SparsePoly::constant(d, Rat::one())
                    .add(&SparsePoly::variable(d, i).pow(2).scale(&rat(-1)))
            })
            .collect(),
        ClosedFormKind::Simplex => (0..d)
            .map(|i| {
                let mut tail = SparsePoly::constant(d, Rat::one());
                for j in i..d {
                    tail = tail.add(&SparsePoly::variable(d, j).scale(&rat(-1)));
                }
                SparsePoly::variable(d, i).mul(&tail)
            })
            .collect(),
    }
}

/// Prism over a base: the base polynomials reread in one more variable plus
/// the single factor `x_d (1 - x_d)`.
pub fn prism_lift(prep_q: &[SparsePoly]) -> Vec<SparsePoly> {
    let base_dim = prep_q.first().map_or(0, |p| p.dim);
    let d = base_dim + 1;
    let mut out: Vec<SparsePoly> = prep_q.iter().map(|p| p.embed(d)).collect();
    let xd = SparsePoly::variable(d, d - 1);
    let one_minus = SparsePoly::constant(d, Rat::one()).add(&xd.scale(&rat(-1)));
    out.push(xd.mul(&one_minus));
    out
}

/// Invertible affine normalization used by the pyramid lift: the base is
/// translated by `-translation` and scaled by `scale` to fit in the unit
/// ball.
#[derive(Debug, Clone)]
pub struct PyramidMap {
    pub translation: RatVec,
    pub scale: Rat,
}

impl PyramidMap {
    /// Maps a point of the original base into the normalized frame.
    pub fn apply(&self, x: &[Rat]) -> RatVec {
        vec_scale(&self.scale, &vec_sub(x, &self.translation))
    }
}

/// Pyramid over a base: normalizes the base into the unit ball of the
/// hyperplane `x_d = 0`, homogenizes every base polynomial to the maximal
/// total degree with the factor `1 - x_d`, and appends the cap polynomial
/// `x_d (1 - x_d - x_d (x_1^2 + ... + x_{d-1}^2))`.
pub fn pyramid_lift(
    prep_q: &[SparsePoly],
    base_vertices: &[RatVec],
) -> Result<(Vec<SparsePoly>, PyramidMap)> {
    let base_dim = prep_q
        .first()
        .map(|p| p.dim)
        .ok_or_else(|| Error::Unsupported("empty base representation".to_string()))?;
    if base_vertices.is_empty() {
        return Err(Error::NoVertices);
    }
    let n = rat(base_vertices.len() as i64);
    let mut t = vec![Rat::zero(); base_dim];
    for v in base_vertices {
        for (ti, c) in t.iter_mut().zip(v) {
            *ti += c;
        }
    }
    let t: RatVec = t.into_iter().map(|s| s / &n).collect();
    let max_norm_sq = base_vertices
        .iter()
        .map(|v| norm_sq(&vec_sub(v, &t)))
        .max()
        .unwrap();
    // Rational scale with scale^2 * max_norm_sq <= 1: a dyadic lower bound
    // of the exact (possibly irrational) 1 / max-norm.
    let scale = if max_norm_sq.is_zero() {
        Rat::one()
    } else {
        dyadic_sqrt_lower(&max_norm_sq.recip(), 16)
    };
    if !scale.is_positive() {
        return Err(Error::Unsupported(
            "base too large to normalize at the configured precision".to_string(),
        ));
    }
    let map = PyramidMap {
        translation: t.clone(),
        scale: scale.clone(),
    };

    // q_j(x) = p_j(t + x / scale), so that { q_j >= 0 } is the normalized base.
    let inv = scale.recip();
    let subs: Vec<SparsePoly> = (0..base_dim)
        .map(|i| {
            SparsePoly::constant(base_dim, t[i].clone())
                .add(&SparsePoly::variable(base_dim, i).scale(&inv))
        })
        .collect();
    let normalized: Vec<SparsePoly> = prep_q.iter().map(|p| p.substitute(&subs)).collect();

    let d = base_dim + 1;
    let max_deg = normalized.iter().map(|p| p.total_degree()).max().unwrap();
    let lin = SparsePoly::constant(d, Rat::one())
        .add(&SparsePoly::variable(d, d - 1).scale(&rat(-1)));
    let mut out = Vec::with_capacity(prep_q.len() + 1);
    for q in &normalized {
        out.push(homogenize_to(&q.embed(d), &lin, max_deg));
    }
    let xd = SparsePoly::variable(d, d - 1);
    let mut sumsq = SparsePoly::zero(d);
    for i in 0..base_dim {
        sumsq = sumsq.add(&SparsePoly::variable(d, i).pow(2));
    }
    let cap = xd.mul(
        &SparsePoly::constant(d, Rat::one())
            .add(&xd.scale(&rat(-1)))
            .add(&xd.mul(&sumsq).scale(&rat(-1))),
    );
    out.push(cap);
    Ok((out, map))
}

/// Monomial-wise homogenization to a prescribed degree.
fn homogenize_to(p: &SparsePoly, lin: &SparsePoly, deg: u32) -> SparsePoly {
    assert!(deg >= p.total_degree());
    let mut out = SparsePoly::zero(p.dim);
    for (e, c) in &p.terms {
        let t: u32 = e.iter().sum();
        let mut term = SparsePoly::zero(p.dim);
        term.add_term(e.clone(), c.clone());
        out = out.add(&term.mul(&lin.pow(deg - t)));
    }
    out
}

const EXPANSION_MAX_DEGREE: u32 = 64;
const EXPANSION_MAX_MONOMIALS: usize = 1_000_000;

/// Expands a factored product under the degree/size guard.
pub fn expand_product(pp: &ProductPoly, dim: usize) -> Result<SparsePoly> {
    if pp.factors.len() as u32 > EXPANSION_MAX_DEGREE {
        return Err(Error::ResourceGuard(format!(
            "product degree {} exceeds the expansion guard",
            pp.factors.len()
        )));
    }
    let mut acc = SparsePoly::constant(dim, Rat::one());
    for f in &pp.factors {
        acc = acc.mul(&SparsePoly::from_linear_form(dim, f));
        if acc.terms.len() > EXPANSION_MAX_MONOMIALS {
            return Err(Error::ResourceGuard(
                "monomial count exceeds the expansion guard".to_string(),
            ));
        }
    }
    Ok(acc)
}

/// Result of making a pointed polyhedron bounded by a projective map.
#[derive(Debug, Clone)]
pub struct Projectivization {
    /// H-representation of the closure of the image, a polytope.
    pub polytope: HPolytope,
    /// The direction of the map `x -> x / (<c,x> + 1)` (vertex at origin).
    pub c: RatVec,
    /// The vertex that was translated to the origin.
    pub vertex: RatVec,
}

/// Projectivizes a pointed unbounded polyhedron: translates a simple vertex
/// to the origin, reads the vertex cone's extreme rays, solves `<c, r_j> = 1`
/// and maps the system through `x -> x / (<c,x> + 1)`.
pub fn projectivize_pointed(h: &HPolytope, vertex_choice: Option<usize>) -> Result<Projectivization> {
    let d = h.dim;
    let normals = h.normals();
    if !kernel_basis(&normals, d).is_empty() {
        return Err(Error::NonPointed);
    }
    let mut bounded = true;
    'outer: for j in 0..d {
        for sign in [1i64, -1] {
            let mut obj = vec![Rat::zero(); d];
            obj[j] = rat(sign);
            if lp_solve(&obj, &normals, &h.rhs(), Sense::Max).status == LpStatus::Unbounded {
                bounded = false;
                break 'outer;
            }
        }
    }
    if bounded {
        return Err(Error::BoundedInput);
    }

    let vertices = enumerate_vertices(h)?;
    let v = &vertices[vertex_choice.unwrap_or(0)];
    if v.facet_set.len() != d {
        return Err(Error::NonSimpleVertexChoice(v.coords.clone()));
    }
    let shifted = h.translated(&v.coords);

    // Extreme rays of the vertex cone: one per (d-1)-subset of the active
    // normals, oriented into the cone by the left-out row.
    let active: Vec<RatVec> = v.facet_set.iter().map(|&i| normals[i].clone()).collect();
    let mut rays: Vec<RatVec> = Vec::with_capacity(d);
    for left_out in 0..d {
        let sub: Vec<RatVec> = (0..d)
            .filter(|&i| i != left_out)
            .map(|i| active[i].clone())
            .collect();
        let kernel = kernel_basis(&sub, d);
        if kernel.len() != 1 {
            return Err(Error::NonSimpleVertexChoice(v.coords.clone()));
        }
        let mut r = kernel.into_iter().next().unwrap();
        let s = dot(&active[left_out], &r);
        if s.is_zero() {
            return Err(Error::NonSimpleVertexChoice(v.coords.clone()));
        }
        if s.is_positive() {
            r = r.iter().map(|x| -x).collect();
        }
        rays.push(r);
    }
    let c = crate::linalg::solve_square_system(&rays, &vec![Rat::one(); d])
        .ok_or(Error::NonPointed)?;

    // Sanity: c is strictly positive on every other vertex (translated) and
    // on every extreme ray of the recession cone.
    for other in &vertices {
        let x = vec_sub(&other.coords, &v.coords);
        if !crate::num::is_zero_vec(&x) && !dot(&c, &x).is_positive() {
            return Err(Error::Unsupported(
                "projective direction not positive on all vertices".to_string(),
            ));
        }
    }
    for r in recession_cone_rays(h)? {
        if !dot(&c, &r).is_positive() {
            return Err(Error::Unsupported(
                "projective direction not positive on a recession ray".to_string(),
            ));
        }
    }

    // Row <a_i, x> <= b_i pulls through the map to <a_i + b_i c, y> <= b_i.
    let mut rows: Vec<(RatVec, Rat)> = shifted
        .rows
        .iter()
        .map(|(a, b)| {
            let row: RatVec = a.iter().zip(&c).map(|(ai, ci)| ai + b * ci).collect();
            (row, b.clone())
        })
        .collect();
    rows.push((c.clone(), Rat::one()));
    Ok(Projectivization {
        polytope: HPolytope::new(d, rows),
        c,
        vertex: v.coords.clone(),
    })
}

/// Extreme rays of `{x : A x <= 0}` by (d-1)-subset enumeration.
fn recession_cone_rays(h: &HPolytope) -> Result<Vec<RatVec>> {
    let d = h.dim;
    let normals = h.normals();
    let mut rays: Vec<RatVec> = Vec::new();
    if d == 1 {
        // Subsets are empty; the cone is an interval of directions.
        for cand in [vec![Rat::one()], vec![-Rat::one()]] {
            if normals.iter().all(|a| !dot(a, &cand).is_positive()) {
                rays.push(cand);
            }
        }
        return Ok(rays);
    }
    for subset in (0..h.m()).combinations(d - 1) {
        let rows: Vec<RatVec> = subset.iter().map(|&i| normals[i].clone()).collect();
        let kernel = kernel_basis(&rows, d);
        if kernel.len() != 1 {
            continue;
        }
        let r = kernel.into_iter().next().unwrap();
        for cand in [r.clone(), r.iter().map(|x| -x).collect::<RatVec>()] {
            if normals.iter().all(|a| !dot(a, &cand).is_positive())
                && !rays.contains(&cand)
            {
                rays.push(cand);
            }
        }
    }
    Ok(rays)
}

/// Pulls a polynomial description of the projective image back to the
/// original polyhedron: each polynomial is homogenized with `<c,x> + 1`,
/// and the final inequality `<c,x> >= 0` is appended.
pub fn pullback_prep(
    prep: &[SparsePoly],
    c: &RatVec,
) -> Result<(Vec<SparsePoly>, LinearForm)> {
    let d = c.len();
    let mut lin = SparsePoly::constant(d, Rat::one());
    for (i, ci) in c.iter().enumerate() {
        lin = lin.add(&SparsePoly::variable(d, i).scale(ci));
    }
    let mut out = Vec::with_capacity(prep.len());
    for p in prep {
        if p.total_degree() > EXPANSION_MAX_DEGREE {
            return Err(Error::ResourceGuard(format!(
                "degree {} exceeds the pullback expansion guard",
                p.total_degree()
            )));
        }
        out.push(p.homogenize_with(&lin));
    }
    Ok((out, LinearForm::new(Rat::zero(), c.clone())))
}
