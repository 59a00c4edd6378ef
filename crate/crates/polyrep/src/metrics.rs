//! Metric ingredients of the construction: support values, diameter,
//! recentering, wedge distances, the per-dimension minima, and the exponent
//! of the approximating polynomial.
//!
//! The wedge distance is computed by enumerating face pairs (faces of the
//! polytope against faces of the two-halfspace wedge), solving the
//! equality-constrained least-squares system on each pair of affine hulls,
//! and keeping only candidates feasible in both sets. Every step is exact.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::hrep::HPolytope;
use crate::lattice::{support_value, FaceLattice, Vertex};
use crate::linalg::{kernel_basis, solve_general};
use crate::lp::lp_feasible_point;
use crate::num::{
    dot, dyadic_sqrt_upper, norm_sq, pow_rat, rat, ratio, vec_add, vec_neg, vec_scale, vec_sub,
    Rat, RatVec,
};
use crate::poly::WeightVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RhoMode {
    /// `rho = 1/(d+1)`; only justified when the interior point is central
    /// enough, which is verified against `r_min`.
    Dimension,
    /// `rho = r_min`, valid for any interior origin.
    Exact,
}

/// Two outer halfspaces `<a,x> >= h_a`, `<b,x> >= h_b`.
#[derive(Debug, Clone)]
pub struct Wedge {
    pub a: RatVec,
    pub h_a: Rat,
    pub b: RatVec,
    pub h_b: Rat,
}

/// All metric data feeding the approximating polynomial.
#[derive(Debug, Clone)]
pub struct MetricsBundle {
    /// Interior point (vertex barycenter) moved to the origin.
    pub shift: RatVec,
    /// `h(-a^i)` in the shifted frame, per row.
    pub h_minus: Vec<Rat>,
    pub diam_sq: Rat,
    /// Dyadic rational with `diam_upper^2 >= diam_sq`.
    pub diam_upper: Rat,
    /// `min_i b_i / (b_i + h(-a^i))` in the shifted frame.
    pub r_min: Rat,
    /// Squared per-dimension minima; `None` encodes "no positive finite
    /// wedge distance at this level".
    pub eps_k_sq: Vec<Option<Rat>>,
    pub eps_bar: Rat,
    pub exponent_p: u64,
    pub rho_mode: RhoMode,
}

/// `t = vertex barycenter`; returns the translated system (all rhs strictly
/// positive) and `t`.
pub fn recenter(h: &HPolytope, vertices: &[Vertex]) -> (HPolytope, RatVec) {
    let n = rat(vertices.len() as i64);
    let mut t = vec![Rat::zero(); h.dim];
    for v in vertices {
        for (ti, c) in t.iter_mut().zip(&v.coords) {
            *ti += c;
        }
    }
    let t: RatVec = t.into_iter().map(|s| s / &n).collect();
    let shifted = h.translated(&t);
    debug_assert!(shifted.rows.iter().all(|(_, b)| b.is_positive()));
    (shifted, t)
}

/// Exact max squared distance over vertex pairs, plus a dyadic upper bound
/// on the diameter itself.
pub fn diameter_sq(vertices: &[Vertex]) -> (Rat, Rat) {
    assert!(vertices.len() >= 2);
    let mut best = Rat::zero();
    for (i, v) in vertices.iter().enumerate() {
        for w in &vertices[i + 1..] {
            let d = norm_sq(&vec_sub(&v.coords, &w.coords));
            if d > best {
                best = d;
            }
        }
    }
    let upper = dyadic_sqrt_upper(&best, 16);
    (best, upper)
}

/// Affine-hull parametrization of a candidate set: a point on the hull and a
/// basis of its direction space.
#[derive(Debug, Clone)]
struct AffinePiece {
    point: RatVec,
    basis: Vec<RatVec>,
}

/// Precomputed face parametrizations of `P`, shared across many wedge
/// distance queries.
pub struct WedgeCtx<'a> {
    h: &'a HPolytope,
    pieces: Vec<AffinePiece>,
}

impl<'a> WedgeCtx<'a> {
    pub fn new(h: &'a HPolytope, lattice: &FaceLattice) -> Self {
        let d = h.dim;
        let mut pieces = Vec::new();
        // P itself: the whole space around the vertex barycenter.
        let full_basis: Vec<RatVec> = (0..d)
            .map(|i| {
                let mut e = vec![Rat::zero(); d];
                e[i] = Rat::one();
                e
            })
            .collect();
        let centroid = {
            let n = rat(lattice.vertices.len() as i64);
            let mut s = vec![Rat::zero(); d];
            for v in &lattice.vertices {
                for (si, c) in s.iter_mut().zip(&v.coords) {
                    *si += c;
                }
            }
            s.into_iter().map(|x| x / &n).collect()
        };
        pieces.push(AffinePiece {
            point: centroid,
            basis: full_basis,
        });
        for face in lattice.all_faces() {
            let eq_rows: Vec<RatVec> = face
                .facet_indices
                .iter()
                .map(|&i| h.rows[i].0.clone())
                .collect();
            pieces.push(AffinePiece {
                point: lattice.barycenter(face),
                basis: kernel_basis(&eq_rows, d),
            });
        }
        Self { h, pieces }
    }

    fn wedge_pieces(&self, w: &Wedge, inside_point: RatVec) -> Vec<AffinePiece> {
        let d = self.h.dim;
        let mut out = Vec::with_capacity(4);
        let full_basis: Vec<RatVec> = (0..d)
            .map(|i| {
                let mut e = vec![Rat::zero(); d];
                e[i] = Rat::one();
                e
            })
            .collect();
        out.push(AffinePiece {
            point: inside_point,
            basis: full_basis,
        });
        for (normal, h_val) in [(&w.a, &w.h_a), (&w.b, &w.h_b)] {
            if let Some(point) = solve_general(&[normal.clone()], &[h_val.clone()]) {
                out.push(AffinePiece {
                    point,
                    basis: kernel_basis(&[normal.clone()], d),
                });
            }
        }
        // The (d-2)-ridge, when the two hyperplanes actually meet.
        let rows = vec![w.a.clone(), w.b.clone()];
        if let Some(point) = solve_general(&rows, &[w.h_a.clone(), w.h_b.clone()]) {
            out.push(AffinePiece {
                point,
                basis: kernel_basis(&rows, d),
            });
        }
        out
    }

    fn in_wedge(&self, w: &Wedge, y: &[Rat]) -> bool {
        dot(&w.a, y) >= w.h_a && dot(&w.b, y) >= w.h_b
    }

    /// Squared distance between `P` and the wedge: `Some(0)` when they meet,
    /// `None` when the wedge is empty, otherwise the exact positive minimum.
    pub fn distance_sq(&self, w: &Wedge) -> Option<Rat> {
        let d = self.h.dim;
        // Wedge feasibility: U = { -a.y <= -h_a, -b.y <= -h_b }.
        let u_rows = vec![vec_neg(&w.a), vec_neg(&w.b)];
        let u_rhs = vec![-w.h_a.clone(), -w.h_b.clone()];
        let Some(u_point) = lp_feasible_point(&u_rows, &u_rhs) else {
            return None;
        };
        // P intersected with U.
        let mut both_rows: Vec<RatVec> = self.h.normals();
        both_rows.extend(u_rows.iter().cloned());
        let mut both_rhs = self.h.rhs();
        both_rhs.extend(u_rhs.iter().cloned());
        if lp_feasible_point(&both_rows, &both_rhs).is_some() {
            return Some(Rat::zero());
        }

        let wedge_pieces = self.wedge_pieces(w, u_point);
        let mut best: Option<Rat> = None;
        for p_piece in &self.pieces {
            for u_piece in &wedge_pieces {
                let candidate = closest_pair(p_piece, u_piece, d);
                let Some((x, y)) = candidate else { continue };
                if !self.h.contains(&x) || !self.in_wedge(w, &y) {
                    continue;
                }
                let val = norm_sq(&vec_sub(&x, &y));
                if best.as_ref().is_none_or(|b| val < *b) {
                    best = Some(val);
                }
            }
        }
        Some(best.expect("disjoint nonempty sets must yield a feasible closest pair"))
    }
}

/// Minimizes `|x - y|^2` over two affine sets via the normal equations of
/// the joint parametrization; returns one minimizing pair.
fn closest_pair(p1: &AffinePiece, p2: &AffinePiece, d: usize) -> Option<(RatVec, RatVec)> {
    let n1 = p1.basis.len();
    let n2 = p2.basis.len();
    let w0 = vec_sub(&p1.point, &p2.point);
    if n1 + n2 == 0 {
        return Some((p1.point.clone(), p2.point.clone()));
    }
    // Columns of N: p1 basis then negated p2 basis.
    let mut cols: Vec<RatVec> = p1.basis.clone();
    cols.extend(p2.basis.iter().map(|v| vec_neg(v)));
    let n = cols.len();
    let mut gram = vec![vec![Rat::zero(); n]; n];
    let mut rhs = vec![Rat::zero(); n];
    for i in 0..n {
        for j in i..n {
            let g = dot(&cols[i], &cols[j]);
            gram[j][i] = g.clone();
            gram[i][j] = g;
        }
        rhs[i] = -dot(&cols[i], &w0);
    }
    let u = solve_general(&gram, &rhs)?;
    let mut x = p1.point.clone();
    for (s, b) in u[..n1].iter().zip(&p1.basis) {
        x = vec_add(&x, &vec_scale(s, b));
    }
    let mut y = p2.point.clone();
    for (t, b) in u[n1..].iter().zip(&p2.basis) {
        y = vec_add(&y, &vec_scale(t, b));
    }
    debug_assert_eq!(x.len(), d);
    Some((x, y))
}

/// Convenience single-shot wedge distance.
pub fn wedge_distance_sq(h: &HPolytope, lattice: &FaceLattice, w: &Wedge) -> Option<Rat> {
    WedgeCtx::new(h, lattice).distance_sq(w)
}

type Pt = (Rat, Rat);

fn cross(o: &Pt, a: &Pt, b: &Pt) -> Rat {
    (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
}

/// Convex hull by monotone chain, counterclockwise, no repeated endpoint.
/// Collinear inputs degenerate to one or two points.
fn convex_hull(mut pts: Vec<Pt>) -> Vec<Pt> {
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let chain = |iter: &mut dyn Iterator<Item = &Pt>| {
        let mut out: Vec<Pt> = Vec::new();
        for p in iter {
            while out.len() >= 2 && !cross(&out[out.len() - 2], &out[out.len() - 1], p).is_positive()
            {
                out.pop();
            }
            out.push(p.clone());
        }
        out.pop();
        out
    };
    let mut hull = chain(&mut pts.iter());
    hull.extend(chain(&mut pts.iter().rev()));
    hull
}

/// Minimum of coordinate `coord` over `hull` intersected with the halfplane
/// `c1 u1 + c2 u2 <= 0`; `None` when the intersection is empty.
fn clipped_min_coord(hull: &[Pt], c1: &Rat, c2: &Rat, coord: usize) -> Option<Rat> {
    let val = |p: &Pt| c1 * &p.0 + c2 * &p.1;
    let pick = |p: &Pt| if coord == 0 { p.0.clone() } else { p.1.clone() };
    let mut best: Option<Rat> = None;
    let update = |x: Rat, best: &mut Option<Rat>| {
        if best.as_ref().is_none_or(|b| x < *b) {
            *best = Some(x);
        }
    };
    for p in hull {
        if !val(p).is_positive() {
            update(pick(p), &mut best);
        }
    }
    for i in 0..hull.len() {
        if hull.len() < 2 {
            break;
        }
        let p = &hull[i];
        let q = &hull[(i + 1) % hull.len()];
        let (vp, vq) = (val(p), val(q));
        if vp.is_positive() != vq.is_positive() {
            let t = &vp / (&vp - &vq);
            let x = (&p.0 + &t * (&q.0 - &p.0), &p.1 + &t * (&q.1 - &p.1));
            update(pick(&x), &mut best);
        }
    }
    best
}

/// Minimum of `u^T G^{-1} u` over the hull boundary, `G` positive definite.
fn ridge_min(hull: &[Pt], g11: &Rat, g12: &Rat, g22: &Rat, det: &Rat) -> Rat {
    // Bilinear form det * <u, v>_{G^{-1}}.
    let form = |u: &Pt, v: &Pt| {
        g22 * &u.0 * &v.0 - g12 * (&u.0 * &v.1 + &u.1 * &v.0) + g11 * &u.1 * &v.1
    };
    let mut best = form(&hull[0], &hull[0]);
    for p in &hull[1..] {
        let f = form(p, p);
        if f < best {
            best = f;
        }
    }
    for i in 0..hull.len() {
        if hull.len() < 2 {
            break;
        }
        let p = &hull[i];
        let q = &hull[(i + 1) % hull.len()];
        let dir = (&q.0 - &p.0, &q.1 - &p.1);
        let a2 = form(&dir, &dir);
        let a1 = form(p, &dir);
        // Interior minimizer t = -a1/a2 of a2 t^2 + 2 a1 t + f(p) on the edge.
        if a2.is_positive() && a1.is_negative() && -&a1 < a2 {
            let t = -&a1 / &a2;
            let x = (&p.0 + &t * &dir.0, &p.1 + &t * &dir.1);
            let f = form(&x, &x);
            if f < best {
                best = f;
            }
        }
    }
    best / det
}

/// Wedge distance for the special case driving the per-level minima: both
/// halfspaces are supporting halfspaces of `P`, so the slack map
/// `x -> (h_a - <a,x>, h_b - <b,x>)` sends `P` onto a polygon in the
/// nonnegative quadrant and the three closest-pair cases (each wedge facet
/// and the ridge) collapse to planar computations on that polygon.
/// `slack_a`/`slack_b` are the per-vertex slacks. Same result contract as
/// `WedgeCtx::distance_sq`.
fn supporting_wedge_distance_sq(
    a: &[Rat],
    b: &[Rat],
    slack_a: &[Rat],
    slack_b: &[Rat],
) -> Option<Rat> {
    debug_assert!(slack_a.iter().chain(slack_b).all(|s| !s.is_negative()));
    // The wedge meets P exactly when some vertex lies on both hyperplanes.
    if slack_a.iter().zip(slack_b).any(|(s, t)| s.is_zero() && t.is_zero()) {
        return Some(Rat::zero());
    }
    let g11 = norm_sq(a);
    let g22 = norm_sq(b);
    let g12 = dot(a, b);
    debug_assert!(g11.is_positive() && g22.is_positive());
    let det = &g11 * &g22 - &g12 * &g12;
    if det.is_zero() && g12.is_negative() {
        // Anti-parallel supporting halfspaces never overlap.
        return None;
    }
    let hull = convex_hull(slack_a.iter().cloned().zip(slack_b.iter().cloned()).collect());
    let mut best: Option<Rat> = None;
    // Closest point on the a-facet: the foot along `a` must stay on the
    // b-side, which in slack coordinates reads g11 u2 - g12 u1 <= 0.
    if let Some(m) = clipped_min_coord(&hull, &-&g12, &g11, 0) {
        best = Some(&m * &m / &g11);
    }
    if let Some(m) = clipped_min_coord(&hull, &g22, &-&g12, 1) {
        let c = &m * &m / &g22;
        if best.as_ref().is_none_or(|x| c < *x) {
            best = Some(c);
        }
    }
    if det.is_positive() {
        let c = ridge_min(&hull, &g11, &g12, &g22, &det);
        if best.as_ref().is_none_or(|x| c < *x) {
            best = Some(c);
        }
    }
    let best = best.expect("nonempty wedge disjoint from P attains its distance");
    debug_assert!(best.is_positive());
    Some(best)
}

/// Support vector of a face under a weight vector, with its support value by
/// the sum formula (no LP needed: the face lies in all involved facets).
pub fn face_support_vector(h: &HPolytope, facet_indices: &[usize], w: &WeightVector) -> (RatVec, Rat) {
    assert_eq!(facet_indices.len(), w.len());
    let mut a = vec![Rat::zero(); h.dim];
    let mut hv = Rat::zero();
    for (&idx, &wj) in facet_indices.iter().zip(w) {
        let wj = rat(wj as i64);
        let (ai, bi) = &h.rows[idx];
        for (acc, c) in a.iter_mut().zip(ai) {
            *acc += &wj * c;
        }
        hv += &wj * bi;
    }
    (a, hv)
}

/// Minimum positive finite squared wedge distance over all distinct pairs of
/// k-faces and all weights; `None` when no pair produces one.
pub fn face_epsilon_sq(
    h: &HPolytope,
    lattice: &FaceLattice,
    k: usize,
    weights: &[WeightVector],
) -> Option<Rat> {
    let faces = lattice.faces(k);
    let mut best: Option<Rat> = None;
    for w in weights {
        let supports: Vec<(RatVec, Rat)> = faces
            .iter()
            .map(|f| face_support_vector(h, &f.facet_indices, w))
            .collect();
        // Per-face slack of every vertex; zero exactly on the face itself.
        let slacks: Vec<Vec<Rat>> = supports
            .iter()
            .map(|(a, hv)| {
                lattice
                    .vertices
                    .iter()
                    .map(|v| hv - dot(a, &v.coords))
                    .collect()
            })
            .collect();
        for i in 0..faces.len() {
            for j in i + 1..faces.len() {
                let Some(dist) = supporting_wedge_distance_sq(
                    &supports[i].0,
                    &supports[j].0,
                    &slacks[i],
                    &slacks[j],
                ) else {
                    continue; // empty wedge
                };
                if dist.is_zero() {
                    continue;
                }
                if best.as_ref().is_none_or(|b| dist < *b) {
                    best = Some(dist);
                }
            }
        }
    }
    best
}

/// A rational `q` with `q^2 <= (min finite eps_k_sq) / 4`, found by halving
/// from 1; returns 1 when every level is infinite (vacuous constraint).
pub fn choose_eps_bar(eps_k_sq: &[Option<Rat>]) -> Rat {
    let Some(min_sq) = eps_k_sq.iter().flatten().min() else {
        return Rat::one();
    };
    let target = min_sq / rat(4);
    let mut q = Rat::one();
    while &q * &q > target {
        q /= rat(2);
    }
    q
}

const MAX_EXPONENT: u64 = 1 << 40;

/// Least integer `p >= 1` with `(1 + 2 eps_bar rho / diam_upper)^(2p) > m`,
/// decided by exact rational powering.
pub fn choose_exponent(
    m: usize,
    d: usize,
    eps_bar: &Rat,
    diam_upper: &Rat,
    rho_mode: RhoMode,
    r_min: &Rat,
) -> Result<u64> {
    assert!(eps_bar.is_positive() && diam_upper.is_positive() && m >= 1);
    let rho = match rho_mode {
        RhoMode::Exact => r_min.clone(),
        RhoMode::Dimension => {
            let rho = ratio(1, (d + 1) as i64);
            if *r_min < rho {
                return Err(Error::RhoDimensionUnjustified);
            }
            rho
        }
    };
    let base = Rat::one() + rat(2) * eps_bar * rho / diam_upper;
    let m_rat = rat(m as i64);
    let exceeds = |p: u64| pow_rat(&base, 2 * p) > m_rat;
    if exceeds(1) {
        return Ok(1);
    }
    let mut hi = 2u64;
    while !exceeds(hi) {
        hi *= 2;
        if hi > MAX_EXPONENT {
            return Err(Error::ResourceGuard(
                "approximating exponent exceeds the supported range".to_string(),
            ));
        }
    }
    let mut lo = hi / 2; // exceeds(lo) is false
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if exceeds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Weight sets are defined in `construct`; re-imported here only for the
/// epsilon levels.
pub fn compute_metrics(
    h: &HPolytope,
    lattice: &FaceLattice,
    rho_mode: RhoMode,
) -> Result<MetricsBundle> {
    let d = h.dim;
    let vertices = &lattice.vertices;
    let (shifted, shift) = recenter(h, vertices);
    let shifted_vertices: Vec<Vertex> = vertices
        .iter()
        .map(|v| Vertex {
            coords: vec_sub(&v.coords, &shift),
            facet_set: v.facet_set.clone(),
        })
        .collect();
    let h_minus: Vec<Rat> = shifted
        .rows
        .iter()
        .map(|(a, _)| support_value(&shifted_vertices, &vec_neg(a)))
        .collect();
    let r_min = shifted
        .rows
        .iter()
        .zip(&h_minus)
        .map(|((_, b), hm)| b / (b + hm))
        .min()
        .expect("nonempty row list");
    assert!(r_min.is_positive() && r_min < Rat::one());

    let (diam_sq, diam_upper) = diameter_sq(vertices);

    let mut eps_k_sq = Vec::with_capacity(d);
    for k in 0..d {
        let weights = crate::construct::weight_sets(d, k)?;
        eps_k_sq.push(face_epsilon_sq(h, lattice, k, &weights));
    }
    let eps_bar = choose_eps_bar(&eps_k_sq);
    let exponent_p = choose_exponent(h.m(), d, &eps_bar, &diam_upper, rho_mode, &r_min)?;

    Ok(MetricsBundle {
        shift,
        h_minus,
        diam_sq,
        diam_upper,
        r_min,
        eps_k_sq,
        eps_bar,
        exponent_p,
        rho_mode,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hrep::unit_square;
    use crate::lattice::{build_face_lattice, enumerate_vertices};
    use crate::num::ratvec;

    fn square_ctx() -> (HPolytope, FaceLattice) {
        let h = unit_square();
        let vs = enumerate_vertices(&h).unwrap();
        let lattice = build_face_lattice(&h, &vs);
        (h, lattice)
    }

    #[test]
    fn support_values_on_square() {
        let h = unit_square();
        let vs = enumerate_vertices(&h).unwrap();
        assert_eq!(support_value(&vs, &ratvec(&[1, 1])), rat(2));
        assert_eq!(support_value(&vs, &ratvec(&[0, 0])), rat(0));
    }

    #[test]
    fn recenter_square() {
        let h = unit_square();
        let vs = enumerate_vertices(&h).unwrap();
        let (shifted, t) = recenter(&h, &vs);
        assert_eq!(t, ratvec(&[0, 0]));
        assert_eq!(shifted, h);

        // Translated square recovers the centered rows.
        let moved = HPolytope::from_ints(
            2,
            &[(&[1, 0], 6), (&[-1, 0], -4), (&[0, 1], 6), (&[0, -1], -4)],
        );
        let vs = enumerate_vertices(&moved).unwrap();
        let (shifted, t) = recenter(&moved, &vs);
        assert_eq!(t, ratvec(&[5, 5]));
        assert_eq!(shifted, unit_square());
    }

    #[test]
    fn square_diameter() {
        let h = unit_square();
        let vs = enumerate_vertices(&h).unwrap();
        let (d_sq, upper) = diameter_sq(&vs);
        assert_eq!(d_sq, rat(8));
        assert!(&upper * &upper >= d_sq);
        assert!(upper < ratio(28285, 10000));
    }

    #[test]
    fn wedge_adjacent_facets_touch() {
        let (h, lattice) = square_ctx();
        let w = Wedge {
            a: ratvec(&[1, 0]),
            h_a: rat(1),
            b: ratvec(&[0, 1]),
            h_b: rat(1),
        };
        assert_eq!(wedge_distance_sq(&h, &lattice, &w), Some(rat(0)));
    }

    #[test]
    fn wedge_vertex_vectors_distance_one() {
        let (h, lattice) = square_ctx();
        let w = Wedge {
            a: ratvec(&[1, 1]),
            h_a: rat(2),
            b: ratvec(&[1, -1]),
            h_b: rat(2),
        };
        // Closest pair (1,0) <-> (2,0).
        assert_eq!(wedge_distance_sq(&h, &lattice, &w), Some(rat(1)));
    }

    #[test]
    fn wedge_opposite_facets_empty() {
        let (h, lattice) = square_ctx();
        let w = Wedge {
            a: ratvec(&[1, 0]),
            h_a: rat(1),
            b: ratvec(&[-1, 0]),
            h_b: rat(1),
        };
        assert_eq!(wedge_distance_sq(&h, &lattice, &w), None);
    }

    #[test]
    fn square_epsilon_levels() {
        let (h, lattice) = square_ctx();
        let w0 = crate::construct::weight_sets(2, 0).unwrap();
        let w1 = crate::construct::weight_sets(2, 1).unwrap();
        assert_eq!(face_epsilon_sq(&h, &lattice, 0, &w0), Some(rat(1)));
        assert_eq!(face_epsilon_sq(&h, &lattice, 1, &w1), None);
    }

    #[test]
    fn supporting_fast_path_matches_reference() {
        // Asymmetric pentagon: every distinct pair of faces at every level,
        // checked against the face-pair enumeration.
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
        let vs = crate::lattice::enumerate_vertices(&h).unwrap();
        let lattice = build_face_lattice(&h, &vs);
        let ctx = WedgeCtx::new(&h, &lattice);
        for k in 0..2 {
            let faces = lattice.faces(k);
            for w in crate::construct::weight_sets(2, k).unwrap() {
                let supports: Vec<(RatVec, Rat)> = faces
                    .iter()
                    .map(|f| face_support_vector(&h, &f.facet_indices, &w))
                    .collect();
                let slacks: Vec<Vec<Rat>> = supports
                    .iter()
                    .map(|(a, hv)| {
                        lattice
                            .vertices
                            .iter()
                            .map(|v| hv - dot(a, &v.coords))
                            .collect()
                    })
                    .collect();
                for i in 0..faces.len() {
                    for j in i + 1..faces.len() {
                        let fast = supporting_wedge_distance_sq(
                            &supports[i].0,
                            &supports[j].0,
                            &slacks[i],
                            &slacks[j],
                        );
                        let wedge = Wedge {
                            a: supports[i].0.clone(),
                            h_a: supports[i].1.clone(),
                            b: supports[j].0.clone(),
                            h_b: supports[j].1.clone(),
                        };
                        assert_eq!(fast, ctx.distance_sq(&wedge), "k={k} pair ({i},{j})");
                    }
                }
            }
        }
    }

    #[test]
    fn eps_bar_choices() {
        assert_eq!(choose_eps_bar(&[Some(rat(1)), None]), ratio(1, 2));
        assert_eq!(choose_eps_bar(&[None, None]), rat(1));
    }

    #[test]
    fn paper_exponent() {
        // m=12, d=3, eps_bar=3/100, diam_upper=4, rho=1/(d+1) -> 332.
        let p = choose_exponent(
            12,
            3,
            &ratio(3, 100),
            &rat(4),
            RhoMode::Dimension,
            &ratio(1, 2),
        )
        .unwrap();
        assert_eq!(p, 332);
    }

    #[test]
    fn exponent_trivial_and_minimal() {
        assert_eq!(
            choose_exponent(1, 2, &ratio(1, 2), &rat(3), RhoMode::Exact, &ratio(1, 3)).unwrap(),
            1
        );
        // Minimality: (1 + 2 eps rho / D)^(2(p-1)) <= m < (...)^(2p).
        let eps = ratio(1, 2);
        let d_up = ratio(23, 8);
        let r_min = ratio(1, 2);
        let p = choose_exponent(4, 2, &eps, &d_up, RhoMode::Dimension, &r_min).unwrap();
        let base = Rat::one() + rat(2) * &eps * ratio(1, 3) / &d_up;
        assert!(pow_rat(&base, 2 * p) > rat(4));
        assert!(pow_rat(&base, 2 * (p - 1)) <= rat(4));
    }
}
