//! Halfspace representations: `<a^i, x> <= b_i` with exact rational entries.

use sha2::{Digest, Sha256};

use crate::num::{dot, format_rat, Rat, RatVec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HPolytope {
    pub dim: usize,
    pub rows: Vec<(RatVec, Rat)>,
}

impl HPolytope {
    pub fn new(dim: usize, rows: Vec<(RatVec, Rat)>) -> Self {
        for (a, _) in &rows {
            assert_eq!(a.len(), dim);
        }
        Self { dim, rows }
    }

    pub fn from_ints(dim: usize, rows: &[(&[i64], i64)]) -> Self {
        let rows = rows
            .iter()
            .map(|(a, b)| (crate::num::ratvec(a), crate::num::rat(*b)))
            .collect();
        Self::new(dim, rows)
    }

    pub fn m(&self) -> usize {
        self.rows.len()
    }

    pub fn normals(&self) -> Vec<RatVec> {
        self.rows.iter().map(|(a, _)| a.clone()).collect()
    }

    pub fn rhs(&self) -> Vec<Rat> {
        self.rows.iter().map(|(_, b)| b.clone()).collect()
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.rows.iter().all(|(a, b)| dot(a, x) <= *b)
    }

    /// Indices of rows violated at `x`, with the exact slack `b - <a, x>`.
    pub fn violations(&self, x: &[Rat]) -> Vec<(usize, Rat)> {
        self.rows
            .iter()
            .enumerate()
            .filter_map(|(i, (a, b))| {
                let slack = b - dot(a, x);
                if slack < Rat::from_integer(0.into()) {
                    Some((i, slack))
                } else {
                    None
                }
            })
            .collect()
    }

    /// Row indices active at `x` (exact equality).
    pub fn active_rows(&self, x: &[Rat]) -> Vec<usize> {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, (a, b))| dot(a, x) == *b)
            .map(|(i, _)| i)
            .collect()
    }

    /// The same system translated so that `t` becomes the origin.
    pub fn translated(&self, t: &[Rat]) -> HPolytope {
        let rows = self
            .rows
            .iter()
            .map(|(a, b)| (a.clone(), b - dot(a, t)))
            .collect();
        HPolytope::new(self.dim, rows)
    }

    /// Stable content hash, used as provenance metadata.
    pub fn content_hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(format!("{} {}\n", self.dim, self.m()));
        for (a, b) in &self.rows {
            for c in a {
                hasher.update(format_rat(c));
                hasher.update(" ");
            }
            hasher.update(format_rat(b));
            hasher.update("\n");
        }
        let digest = hasher.finalize();
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// The unit square `[-1,1]^2`; used throughout the test suites.
pub fn unit_square() -> HPolytope {
    HPolytope::from_ints(
        2,
        &[
            (&[1, 0], 1),
            (&[-1, 0], 1),
            (&[0, 1], 1),
            (&[0, -1], 1),
        ],
    )
}

/// The cube `[-1,1]^d`.
pub fn cube(d: usize) -> HPolytope {
    let mut rows = Vec::new();
    for i in 0..d {
        let mut a = vec![0i64; d];
        a[i] = 1;
        rows.push((crate::num::ratvec(&a), crate::num::rat(1)));
        a[i] = -1;
        rows.push((crate::num::ratvec(&a), crate::num::rat(1)));
    }
    HPolytope::new(d, rows)
}

/// The standard simplex `{x >= 0, x_1 + ... + x_d <= 1}`.
pub fn standard_simplex(d: usize) -> HPolytope {
    let mut rows = Vec::new();
    for i in 0..d {
        let mut a = vec![0i64; d];
        a[i] = -1;
        rows.push((crate::num::ratvec(&a), crate::num::rat(0)));
    }
    rows.push((vec![crate::num::rat(1); d], crate::num::rat(1)));
    HPolytope::new(d, rows)
}

/// Polygon circumscribing the circle of radius `r`, one facet per tangent
/// direction parameter `t = p/q`: row `(q^2 - p^2, 2pq) . x <= r (q^2 + p^2)`.
/// Distinct parameters give distinct tangent lines, and no three tangents of
/// a circle meet in a point, so the polygon is simple and irredundant by
/// construction (bounded provided the directions positively span the plane).
pub fn tangent_polygon(params: &[(i64, i64)], r: i64) -> HPolytope {
    let rows = params
        .iter()
        .map(|&(p, q)| {
            assert!(q != 0);
            (
                crate::num::ratvec(&[q * q - p * p, 2 * p * q]),
                crate::num::rat(r * (q * q + p * p)),
            )
        })
        .collect();
    HPolytope::new(2, rows)
}

/// The skew dodecahedron worked through at the end of the construction:
/// 12 pentagonal facets, 30 edges, 20 vertices.
pub fn skew_dodecahedron() -> HPolytope {
    HPolytope::from_ints(
        3,
        &[
            (&[0, 3, 2], 5),
            (&[0, -3, 2], 6),
            (&[2, 0, 3], 5),
            (&[2, 0, -3], 4),
            (&[3, 2, 0], 5),
            (&[-3, 2, 0], 5),
            (&[0, -3, -2], 6),
            (&[0, 3, -2], 5),
            (&[-2, 0, -3], 6),
            (&[-2, 0, 3], 5),
            (&[-3, -2, 0], 4),
            (&[3, -2, 0], 6),
        ],
    )
}
