//! Dense exact linear algebra over the rationals.
//!
//! All systems here are desk scale (a handful of rows and columns), so plain
//! fraction-free-enough Gaussian elimination with first-nonzero pivoting is
//! both exact and fast.

use num_traits::Zero;

use crate::num::{Rat, RatVec};

/// Reduced row echelon form in place. Returns the pivot column of each pivot
/// row, in order.
fn rref(rows: &mut [RatVec]) -> Vec<usize> {
    let nrows = rows.len();
    let ncols = if nrows == 0 { 0 } else { rows[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r][c..].iter_mut() {
            *x *= &inv;
        }
        for i in 0..nrows {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in c..ncols {
                    let t = &f * &rows[r][j];
                    rows[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(matrix: &[RatVec]) -> usize {
    let mut work: Vec<RatVec> = matrix.to_vec();
    rref(&mut work).len()
}

/// Exact solution of the square system `M x = rhs`, or `None` when `M` is
/// singular.
pub fn solve_square_system(matrix: &[RatVec], rhs: &[Rat]) -> Option<RatVec> {
    let n = matrix.len();
    assert!(matrix.iter().all(|row| row.len() == n), "matrix not square");
    assert_eq!(rhs.len(), n);
    let mut work: Vec<RatVec> = matrix
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = rref(&mut work);
    // Singular when fewer than n pivots land in the coefficient columns
    // (a pivot in the augmented rhs column signals inconsistency).
    if pivots.len() < n || pivots.iter().any(|&c| c == n) {
        return None;
    }
    Some(work.into_iter().map(|mut row| row.pop().unwrap()).collect())
}

/// A particular solution of `A x = rhs`, or `None` when the system is
/// inconsistent. `A` may be rectangular or rank deficient; free variables
/// are set to zero.
pub fn solve_general(matrix: &[RatVec], rhs: &[Rat]) -> Option<RatVec> {
    assert_eq!(matrix.len(), rhs.len());
    let ncols = matrix.first().map_or(0, |r| r.len());
    let mut work: Vec<RatVec> = matrix
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = rref(&mut work);
    // Inconsistent iff some pivot landed in the rhs column.
    if pivots.iter().any(|&c| c == ncols) {
        return None;
    }
    let mut x = vec![Rat::zero(); ncols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = work[i][ncols].clone();
    }
    Some(x)
}

/// Exact basis of the kernel `{x : A x = 0}`; empty when `A` has full column
/// rank.
pub fn kernel_basis(matrix: &[RatVec], dim: usize) -> Vec<RatVec> {
    let mut work: Vec<RatVec> = matrix.to_vec();
    for row in &work {
        assert_eq!(row.len(), dim);
    }
    let pivots = rref(&mut work);
    let pivot_set: Vec<bool> = {
        let mut s = vec![false; dim];
        for &c in &pivots {
            s[c] = true;
        }
        s
    };
    let mut basis = Vec::new();
    for free in 0..dim {
        if pivot_set[free] {
            continue;
        }
        let mut v = vec![Rat::zero(); dim];
        v[free] = Rat::from_integer(1.into());
        for (i, &c) in pivots.iter().enumerate() {
            v[c] = -work[i][free].clone();
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{dot, rat, ratio, ratvec};

    #[test]
    fn identity_system() {
        let m = vec![ratvec(&[1, 0]), ratvec(&[0, 1])];
        let x = solve_square_system(&m, &ratvec(&[1, 2])).unwrap();
        assert_eq!(x, ratvec(&[1, 2]));
    }

    #[test]
    fn hand_eliminated_system() {
        // rows (3,2),(-3,2), rhs (5,5) -> (0, 5/2)
        let m = vec![ratvec(&[3, 2]), ratvec(&[-3, 2])];
        let rhs = ratvec(&[5, 5]);
        let x = solve_square_system(&m, &rhs).unwrap();
        assert_eq!(x, vec![rat(0), ratio(5, 2)]);
        // cross-check by substitution
        for (row, b) in m.iter().zip(&rhs) {
            assert_eq!(dot(row, &x), *b);
        }
    }

    #[test]
    fn singular_system() {
        let m = vec![ratvec(&[1, 1]), ratvec(&[2, 2])];
        assert!(solve_square_system(&m, &ratvec(&[1, 5])).is_none());
        assert!(solve_square_system(&m, &ratvec(&[0, 0])).is_none());
    }

    #[test]
    fn kernel_of_identity_is_trivial() {
        let m = vec![ratvec(&[1, 0]), ratvec(&[0, 1])];
        assert!(kernel_basis(&m, 2).is_empty());
    }

    #[test]
    fn kernel_of_coordinate_row() {
        let m = vec![ratvec(&[1, 0, 0])];
        let basis = kernel_basis(&m, 3);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            assert!(v[0].is_zero());
        }
        assert_eq!(rank(&basis), 2);
    }

    #[test]
    fn general_solve_underdetermined() {
        let m = vec![ratvec(&[1, 1, 0])];
        let x = solve_general(&m, &ratvec(&[3])).unwrap();
        assert_eq!(dot(&m[0], &x), rat(3));
    }

    #[test]
    fn general_solve_inconsistent() {
        let m = vec![ratvec(&[1, 1]), ratvec(&[2, 2])];
        assert!(solve_general(&m, &ratvec(&[1, 3])).is_none());
    }
}
