//! Exact two-phase simplex over the rationals.
//!
//! Inputs are systems `A x <= b` with free variables; internally the solver
//! splits `x = u - v`, adds slacks, and runs Bland's rule throughout, so every
//! run is deterministic and cycle free. Performance is irrelevant at the
//! problem sizes this crate handles.

use num_traits::{Signed, Zero};

use crate::num::{dot, Rat, RatVec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Unbounded,
    Infeasible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Max,
    Min,
}

/// Outcome of an exact LP solve. When optimal, `witness` is an optimal point
/// and `optimum` its objective value; when unbounded, `witness` is a ray `r`
/// with `A r <= 0` along which the objective improves.
#[derive(Debug, Clone)]
pub struct LpResult {
    pub status: LpStatus,
    pub optimum: Option<Rat>,
    pub witness: Option<RatVec>,
}

struct Tableau {
    dim: usize,
    ncols: usize,
    art_start: usize,
    rows: Vec<RatVec>, // each row: ncols coefficients then rhs
    basis: Vec<usize>,
    obj: RatVec, // reduced costs
    objval: Rat,
}

impl Tableau {
    fn rhs(&self, r: usize) -> &Rat {
        &self.rows[r][self.ncols]
    }

    fn set_costs(&mut self, costs: &[Rat]) {
        self.objval = Rat::zero();
        self.obj = costs.to_vec();
        for r in 0..self.rows.len() {
            let cb = costs[self.basis[r]].clone();
            if cb.is_zero() {
                continue;
            }
            for j in 0..self.ncols {
                let t = &cb * &self.rows[r][j];
                self.obj[j] -= t;
            }
            self.objval += &cb * self.rhs(r);
        }
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let inv = self.rows[r][j].recip();
        for x in self.rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][j].is_zero() {
                continue;
            }
            let f = self.rows[i][j].clone();
            for c in 0..=self.ncols {
                let t = &f * &self.rows[r][c];
                self.rows[i][c] -= t;
            }
        }
        let f = self.obj[j].clone();
        if !f.is_zero() {
            for c in 0..self.ncols {
                let t = &f * &self.rows[r][c];
                self.obj[c] -= t;
            }
            self.objval += &f * self.rhs(r);
        }
        self.basis[r] = j;
    }

    /// Runs simplex with Bland's rule on the current cost row.
    /// `allow(j)` gates entering columns. Returns the entering column on
    /// unboundedness.
    fn run<F: Fn(usize) -> bool>(&mut self, allow: F) -> Option<usize> {
        loop {
            let Some(j) = (0..self.ncols).find(|&j| allow(j) && self.obj[j].is_positive()) else {
                return None;
            };
            let mut leave: Option<usize> = None;
            for r in 0..self.rows.len() {
                if !self.rows[r][j].is_positive() {
                    continue;
                }
                let better = match leave {
                    None => true,
                    Some(lr) => {
                        let lhs = self.rhs(r) * &self.rows[lr][j];
                        let rhs = self.rhs(lr) * &self.rows[r][j];
                        lhs < rhs || (lhs == rhs && self.basis[r] < self.basis[lr])
                    }
                };
                if better {
                    leave = Some(r);
                }
            }
            match leave {
                Some(r) => self.pivot(r, j),
                None => return Some(j),
            }
        }
    }

    /// Maps a tableau variable to its coefficient in `x`-space:
    /// `u_k -> (k, +1)`, `v_k -> (k, -1)`, slack/artificial -> none.
    fn x_component(&self, var: usize) -> Option<(usize, i64)> {
        if var < self.dim {
            Some((var, 1))
        } else if var < 2 * self.dim {
            Some((var - self.dim, -1))
        } else {
            None
        }
    }

    fn current_point(&self) -> RatVec {
        let mut x = vec![Rat::zero(); self.dim];
        for (r, &bv) in self.basis.iter().enumerate() {
            if let Some((k, s)) = self.x_component(bv) {
                if s > 0 {
                    x[k] += self.rhs(r);
                } else {
                    x[k] -= self.rhs(r);
                }
            }
        }
        x
    }

    fn ray_for(&self, entering: usize) -> RatVec {
        let mut ray = vec![Rat::zero(); self.dim];
        if let Some((k, s)) = self.x_component(entering) {
            ray[k] += Rat::from_integer(s.into());
        }
        for (r, &bv) in self.basis.iter().enumerate() {
            if let Some((k, s)) = self.x_component(bv) {
                let delta = -self.rows[r][entering].clone();
                if s > 0 {
                    ray[k] += delta;
                } else {
                    ray[k] -= delta;
                }
            }
        }
        ray
    }
}

/// Exact LP: optimize `objective . x` subject to `A x <= b` over free `x`.
pub fn lp_solve(objective: &[Rat], a: &[RatVec], b: &[Rat], sense: Sense) -> LpResult {
    let m = a.len();
    assert_eq!(b.len(), m);
    let d = objective.len();
    for row in a {
        assert_eq!(row.len(), d);
    }

    // Columns: u (d), v (d), slacks (m), artificials (one per negated row).
    let negated: Vec<bool> = b.iter().map(|bi| bi.is_negative()).collect();
    let n_art = negated.iter().filter(|&&x| x).count();
    let art_start = 2 * d + m;
    let ncols = art_start + n_art;

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut art_idx = 0;
    for i in 0..m {
        let sign = if negated[i] { -1i64 } else { 1 };
        let sgn = Rat::from_integer(sign.into());
        let mut row = vec![Rat::zero(); ncols + 1];
        for k in 0..d {
            row[k] = &sgn * &a[i][k];
            row[d + k] = -&row[k];
        }
        row[2 * d + i] = sgn.clone();
        row[ncols] = &sgn * &b[i];
        if negated[i] {
            row[art_start + art_idx] = Rat::from_integer(1.into());
            basis.push(art_start + art_idx);
            art_idx += 1;
        } else {
            basis.push(2 * d + i);
        }
        rows.push(row);
    }

    let mut t = Tableau {
        dim: d,
        ncols,
        art_start,
        rows,
        basis,
        obj: Vec::new(),
        objval: Rat::zero(),
    };

    // Phase 1: maximize minus the sum of artificials. Bounded above by zero,
    // so this cannot be unbounded.
    if n_art > 0 {
        let mut costs = vec![Rat::zero(); ncols];
        for c in art_start..ncols {
            costs[c] = -Rat::from_integer(1.into());
        }
        t.set_costs(&costs);
        let unbounded = t.run(|_| true);
        debug_assert!(unbounded.is_none());
        if t.objval.is_negative() {
            return LpResult {
                status: LpStatus::Infeasible,
                optimum: None,
                witness: None,
            };
        }
        // Drive remaining (zero-valued) artificials out of the basis.
        for r in 0..t.rows.len() {
            if t.basis[r] >= t.art_start {
                if let Some(j) = (0..t.art_start).find(|&j| !t.rows[r][j].is_zero()) {
                    t.pivot(r, j);
                }
                // An all-zero row is redundant; its artificial stays basic
                // at value zero and is simply never entered again.
            }
        }
    }

    // Phase 2.
    let mut costs = vec![Rat::zero(); ncols];
    for k in 0..d {
        let c = match sense {
            Sense::Max => objective[k].clone(),
            Sense::Min => -objective[k].clone(),
        };
        costs[k] = c.clone();
        costs[d + k] = -c;
    }
    t.set_costs(&costs);
    let art_start_col = t.art_start;
    if let Some(entering) = t.run(|j| j < art_start_col) {
        return LpResult {
            status: LpStatus::Unbounded,
            optimum: None,
            witness: Some(t.ray_for(entering)),
        };
    }

    let x = t.current_point();
    let optimum = match sense {
        Sense::Max => t.objval.clone(),
        Sense::Min => -t.objval.clone(),
    };
    debug_assert_eq!(dot(objective, &x), optimum);
    LpResult {
        status: LpStatus::Optimal,
        optimum: Some(optimum),
        witness: Some(x),
    }
}

/// Feasibility of `A x <= b`: an exact feasible point, or `None`.
pub fn lp_feasible_point(a: &[RatVec], b: &[Rat]) -> Option<RatVec> {
    let d = a.first().map_or(0, |r| r.len());
    let res = lp_solve(&vec![Rat::zero(); d], a, b, Sense::Max);
    match res.status {
        LpStatus::Infeasible => None,
        _ => res.witness,
    }
}
