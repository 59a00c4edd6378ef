//! Vertex enumeration, H-representation validation, and the face lattice of
//! a simple polytope.
//!
//! Vertices come from brute-force enumeration of d-subsets of rows; this is
//! exponential but exact, and the guard rails below keep it at desk scale.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::hrep::HPolytope;
use crate::linalg::{rank, solve_square_system};
use crate::lp::{lp_solve, LpStatus, Sense};
use crate::num::{dot, vec_sub, Rat, RatVec};

pub const MAX_DIM: usize = 8;
pub const MAX_SUBSETS: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub coords: RatVec,
    /// Sorted indices of all rows active at this vertex.
    pub facet_set: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub k: usize,
    /// Strictly increasing indices of all facets containing the face.
    pub facet_indices: Vec<usize>,
    /// Indices into the lattice's vertex list, sorted.
    pub vertex_ids: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct FaceLattice {
    pub dim: usize,
    /// `faces_by_dim[k]` lists the k-faces, k = 0 .. d-1, in lexicographic
    /// order of their facet index lists.
    pub faces_by_dim: Vec<Vec<Face>>,
    pub vertices: Vec<Vertex>,
}

impl FaceLattice {
    pub fn f_vector(&self) -> Vec<usize> {
        self.faces_by_dim.iter().map(|f| f.len()).collect()
    }

    pub fn faces(&self, k: usize) -> &[Face] {
        &self.faces_by_dim[k]
    }

    /// All faces of every dimension plus the polytope itself is often the
    /// iteration a caller wants; this yields just the proper faces.
    pub fn all_faces(&self) -> impl Iterator<Item = &Face> {
        self.faces_by_dim.iter().flatten()
    }

    pub fn barycenter(&self, face: &Face) -> RatVec {
        let n = Rat::from_integer((face.vertex_ids.len() as i64).into());
        let mut sum = vec![Rat::zero(); self.dim];
        for &vid in &face.vertex_ids {
            for (s, c) in sum.iter_mut().zip(&self.vertices[vid].coords) {
                *s += c;
            }
        }
        sum.into_iter().map(|s| s / &n).collect()
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k.min(n - k) {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > MAX_SUBSETS {
            return acc;
        }
    }
    acc
}

fn check_guards(h: &HPolytope) -> Result<()> {
    if h.dim > MAX_DIM {
        return Err(Error::ResourceGuard(format!(
            "dimension {} exceeds the supported maximum {}",
            h.dim, MAX_DIM
        )));
    }
    if binomial(h.m(), h.dim) > MAX_SUBSETS {
        return Err(Error::ResourceGuard(format!(
            "C({}, {}) row subsets exceed the enumeration limit",
            h.m(),
            h.dim
        )));
    }
    Ok(())
}

/// Brute-force vertex enumeration: solve every invertible d-subset of rows,
/// keep the feasible solutions, and attach exact active sets.
pub fn enumerate_vertices(h: &HPolytope) -> Result<Vec<Vertex>> {
    check_guards(h)?;
    let d = h.dim;
    let mut seen: BTreeMap<Vec<String>, Vertex> = BTreeMap::new();
    for subset in (0..h.m()).combinations(d) {
        let mat: Vec<RatVec> = subset.iter().map(|&i| h.rows[i].0.clone()).collect();
        let rhs: Vec<Rat> = subset.iter().map(|&i| h.rows[i].1.clone()).collect();
        let Some(x) = solve_square_system(&mat, &rhs) else {
            continue;
        };
        if !h.contains(&x) {
            continue;
        }
        let key: Vec<String> = x.iter().map(crate::num::format_rat).collect();
        seen.entry(key).or_insert_with(|| Vertex {
            facet_set: h.active_rows(&x),
            coords: x,
        });
    }
    let vertices: Vec<Vertex> = seen.into_values().collect();
    if vertices.is_empty() {
        return Err(Error::NoVertices);
    }
    Ok(vertices)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidationIssue {
    /// The feasible set is unbounded along this ray.
    UnboundedDirection(RatVec),
    /// Dropping this row does not enlarge the feasible set.
    RedundantRow(usize),
    /// A vertex lying in more than `d` facets.
    NonSimpleVertex { coords: RatVec, active: Vec<usize> },
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Checks boundedness, irredundancy, and simplicity, listing every violation
/// with a witness.
pub fn validate_hrep(h: &HPolytope, vertices: &[Vertex]) -> ValidationReport {
    let mut issues = Vec::new();
    let normals = h.normals();
    let rhs = h.rhs();

    // Boundedness: +/- every coordinate direction must attain a finite max.
    'outer: for j in 0..h.dim {
        for sign in [1i64, -1] {
            let mut obj = vec![Rat::zero(); h.dim];
            obj[j] = Rat::from_integer(sign.into());
            let res = lp_solve(&obj, &normals, &rhs, Sense::Max);
            if res.status == LpStatus::Unbounded {
                issues.push(ValidationIssue::UnboundedDirection(res.witness.unwrap()));
                break 'outer;
            }
        }
    }

    // Irredundancy: maximize <a^i, x> over the other rows. The objective is
    // clamped by keeping row i relaxed to b_i + 1, so the LP stays bounded.
    // If the optimum does not exceed b_i, deleting row i changes nothing.
    for i in 0..h.m() {
        let mut a: Vec<RatVec> = Vec::with_capacity(h.m());
        let mut b: Vec<Rat> = Vec::with_capacity(h.m());
        for j in 0..h.m() {
            a.push(normals[j].clone());
            if j == i {
                b.push(&rhs[j] + Rat::from_integer(1.into()));
            } else {
                b.push(rhs[j].clone());
            }
        }
        let res = lp_solve(&normals[i], &a, &b, Sense::Max);
        if res.status == LpStatus::Optimal && res.optimum.unwrap() <= rhs[i] {
            issues.push(ValidationIssue::RedundantRow(i));
        }
    }

    // Simplicity: every vertex in exactly d facets.
    for v in vertices {
        if v.facet_set.len() != h.dim {
            issues.push(ValidationIssue::NonSimpleVertex {
                coords: v.coords.clone(),
                active: v.facet_set.clone(),
            });
        }
    }

    ValidationReport { issues }
}

/// Builds all k-faces of a validated simple polytope. Every (d-k)-subset of
/// a vertex's facet set spans a k-face at that vertex, so the lattice falls
/// out of the vertex active sets directly.
pub fn build_face_lattice(h: &HPolytope, vertices: &[Vertex]) -> FaceLattice {
    let d = h.dim;
    let mut faces_by_dim = Vec::with_capacity(d);
    for k in 0..d {
        let size = d - k;
        let mut sets: BTreeSet<Vec<usize>> = BTreeSet::new();
        for v in vertices {
            for subset in v.facet_set.iter().copied().combinations(size) {
                sets.insert(subset);
            }
        }
        let faces = sets
            .into_iter()
            .map(|facet_indices| {
                let vertex_ids: Vec<usize> = vertices
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| facet_indices.iter().all(|i| v.facet_set.contains(i)))
                    .map(|(id, _)| id)
                    .collect();
                Face {
                    k,
                    facet_indices,
                    vertex_ids,
                }
            })
            .collect();
        faces_by_dim.push(faces);
    }
    FaceLattice {
        dim: d,
        faces_by_dim,
        vertices: vertices.to_vec(),
    }
}

/// Exact affine rank of a face's vertex set (dimension of its affine hull).
pub fn affine_dim(lattice: &FaceLattice, face: &Face) -> usize {
    let v0 = &lattice.vertices[face.vertex_ids[0]].coords;
    let diffs: Vec<RatVec> = face.vertex_ids[1..]
        .iter()
        .map(|&id| vec_sub(&lattice.vertices[id].coords, v0))
        .collect();
    rank(&diffs)
}

/// Support value `h(u) = max <u, v>` over the vertex list.
pub fn support_value(vertices: &[Vertex], u: &[Rat]) -> Rat {
    vertices
        .iter()
        .map(|v| dot(u, &v.coords))
        .max()
        .expect("nonempty vertex list")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hrep::{cube, skew_dodecahedron, standard_simplex, unit_square};
    use crate::num::{rat, ratvec};

    #[test]
    fn square_vertices() {
        let h = unit_square();
        let vs = enumerate_vertices(&h).unwrap();
        assert_eq!(vs.len(), 4);
        for v in &vs {
            assert_eq!(v.facet_set.len(), 2);
            for c in &v.coords {
                assert!(c == &rat(1) || c == &rat(-1));
            }
        }
    }

    #[test]
    fn simplex_vertices() {
        let h = standard_simplex(3);
        let vs = enumerate_vertices(&h).unwrap();
        assert_eq!(vs.len(), 4);
    }

    #[test]
    fn dodecahedron_counts() {
        let h = skew_dodecahedron();
        let vs = enumerate_vertices(&h).unwrap();
        assert_eq!(vs.len(), 20);
        let report = validate_hrep(&h, &vs);
        assert!(report.is_valid(), "issues: {:?}", report.issues);
        let lattice = build_face_lattice(&h, &vs);
        assert_eq!(lattice.f_vector(), vec![20, 30, 12]);
    }

    #[test]
    fn crosspolytope_is_not_simple() {
        let h = HPolytope::from_ints(
            3,
            &[
                (&[1, 1, 1], 1),
                (&[1, 1, -1], 1),
                (&[1, -1, 1], 1),
                (&[1, -1, -1], 1),
                (&[-1, 1, 1], 1),
                (&[-1, 1, -1], 1),
                (&[-1, -1, 1], 1),
                (&[-1, -1, -1], 1),
            ],
        );
        let vs = enumerate_vertices(&h).unwrap();
        let report = validate_hrep(&h, &vs);
        let witness = report.issues.iter().find_map(|i| match i {
            ValidationIssue::NonSimpleVertex { coords, active } => Some((coords, active)),
            _ => None,
        });
        let (coords, active) = witness.expect("crosspolytope must fail simplicity");
        assert_eq!(active.len(), 4);
        assert_eq!(crate::num::norm_sq(coords), rat(1));
    }

    #[test]
    fn duplicate_row_is_redundant() {
        let mut h = unit_square();
        h.rows.push((ratvec(&[1, 0]), rat(2)));
        let vs = enumerate_vertices(&h).unwrap();
        let report = validate_hrep(&h, &vs);
        assert!(report
            .issues
            .contains(&ValidationIssue::RedundantRow(4)));
    }

    #[test]
    fn unbounded_input_reports_ray() {
        let h = HPolytope::from_ints(2, &[(&[-1, 0], 0), (&[0, -1], 0)]);
        let vs = enumerate_vertices(&h).unwrap();
        let report = validate_hrep(&h, &vs);
        assert!(report
            .issues
            .iter()
            .any(|i| matches!(i, ValidationIssue::UnboundedDirection(_))));
    }

    #[test]
    fn cube_f_vectors() {
        let h = cube(3);
        let vs = enumerate_vertices(&h).unwrap();
        let lattice = build_face_lattice(&h, &vs);
        assert_eq!(lattice.f_vector(), vec![8, 12, 6]);

        let sq = unit_square();
        let vs = enumerate_vertices(&sq).unwrap();
        let lattice = build_face_lattice(&sq, &vs);
        assert_eq!(lattice.f_vector(), vec![4, 4]);
    }

    #[test]
    fn euler_relation_and_face_spans() {
        for (h, d) in [(skew_dodecahedron(), 3usize), (cube(3), 3), (unit_square(), 2)] {
            let vs = enumerate_vertices(&h).unwrap();
            let lattice = build_face_lattice(&h, &vs);
            let mut euler: i64 = 0;
            for (k, fk) in lattice.f_vector().iter().enumerate() {
                euler += if k % 2 == 0 { *fk as i64 } else { -(*fk as i64) };
            }
            let expected = 1 - if d % 2 == 0 { 1 } else { -1 };
            assert_eq!(euler, expected);
            for face in lattice.all_faces() {
                assert_eq!(affine_dim(&lattice, face), face.k);
                if face.k >= 1 {
                    assert!(face.vertex_ids.len() >= 2);
                }
            }
            // Each facet index appears at every dimension level.
            for k in 0..d {
                for i in 0..h.m() {
                    assert!(
                        lattice
                            .faces(k)
                            .iter()
                            .any(|f| f.facet_indices.contains(&i)),
                        "facet {i} missing at level {k}"
                    );
                }
            }
        }
    }

    #[test]
    fn simple_vertex_face_counts() {
        // Every vertex of a simple d-polytope lies in C(d, d-k) k-faces.
        let h = skew_dodecahedron();
        let vs = enumerate_vertices(&h).unwrap();
        let lattice = build_face_lattice(&h, &vs);
        for vid in 0..vs.len() {
            for k in 0..3 {
                let count = lattice
                    .faces(k)
                    .iter()
                    .filter(|f| f.vertex_ids.contains(&vid))
                    .count();
                assert_eq!(count as u128, binomial(3, 3 - k));
            }
        }
    }

    #[test]
    fn resource_guards() {
        let h = HPolytope::new(9, vec![]);
        assert!(matches!(
            enumerate_vertices(&h),
            Err(Error::ResourceGuard(_))
        ));
    }
}
