//! Polynomial containers: affine forms, factored products, the structured
//! power-sum approximating polynomial, and expanded sparse polynomials.
//!
//! Product and power-sum polynomials stay factored/structured; the power-sum
//! exponents reach the hundreds, so expansion is neither feasible nor needed
//! for evaluation.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::num::{dot, format_rat, pow_rat, vec_sub, Rat, RatVec};

/// Affine functional `c0 + <coeffs, x>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearForm {
    pub c0: Rat,
    pub coeffs: RatVec,
}

impl LinearForm {
    pub fn new(c0: Rat, coeffs: RatVec) -> Self {
        Self { c0, coeffs }
    }

    /// The facet form `b - <a, x>`.
    pub fn facet_form(a: &[Rat], b: &Rat) -> Self {
        Self {
            c0: b.clone(),
            coeffs: a.iter().map(|c| -c).collect(),
        }
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        &self.c0 + dot(&self.coeffs, x)
    }

    /// `(10-2x1-3x2-5x3)` style rendering: constant first, then signed terms
    /// in variable order, unit coefficients elided.
    pub fn text(&self) -> String {
        let mut s = String::from("(");
        s.push_str(&format_rat(&self.c0));
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            s.push(if c.is_negative() { '-' } else { '+' });
            let a = c.abs();
            if !a.is_one() {
                s.push_str(&format_rat(&a));
            }
            s.push_str(&format!("x{}", i + 1));
        }
        s.push(')');
        s
    }
}

/// Weight vectors: positive integers, each a power of two.
pub type WeightVector = Vec<u64>;

/// Product of one supporting-hyperplane form per k-face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductPoly {
    pub k: usize,
    pub w: WeightVector,
    pub factors: Vec<LinearForm>,
}

impl ProductPoly {
    pub fn eval(&self, x: &[Rat]) -> Rat {
        self.factors.iter().map(|f| f.eval(x)).product()
    }

    /// Sign without multiplying out: counts zero and negative factors.
    pub fn sign(&self, x: &[Rat]) -> i8 {
        let mut negatives = 0usize;
        for f in &self.factors {
            let v = f.eval(x);
            if v.is_zero() {
                return 0;
            }
            if v.is_negative() {
                negatives += 1;
            }
        }
        if negatives % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn id(&self) -> String {
        let w = self
            .w
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(",");
        format!("p_{},({})", self.k, w)
    }
}

/// One normalized facet functional of the approximating polynomial, stored
/// in the shifted frame (interior point at the origin).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsilonTerm {
    pub a: RatVec,
    /// `h(a)` in the shifted frame (the shifted rhs).
    pub b: Rat,
    /// `h(-a)` in the shifted frame.
    pub h_minus: Rat,
}

/// Structured power sum `sum (1/m) v_i(x)^{2p}` with
/// `v_i(x) = (2<a^i,x> - b_i + h(-a^i)) / (b_i + h(-a^i))` evaluated in the
/// shifted frame `x -> x - t`. The translation cancels inside each `v_i`, so
/// the polynomial is frame independent; the shift is kept as provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsilonPoly {
    pub terms: Vec<EpsilonTerm>,
    /// `1/m`.
    pub weight: Rat,
    pub two_p: u64,
    pub shift: RatVec,
}

impl EpsilonPoly {
    /// The base `v_i` of term `i` at `x` (original frame).
    pub fn term_base(&self, i: usize, x: &[Rat]) -> Rat {
        let t = &self.terms[i];
        let shifted = vec_sub(x, &self.shift);
        let num = Rat::from_integer(2.into()) * dot(&t.a, &shifted) - &t.b + &t.h_minus;
        let den = &t.b + &t.h_minus;
        num / den
    }

    /// Numerator of `v_i` as a linear form in the original frame.
    pub fn term_numerator(&self, i: usize) -> LinearForm {
        let t = &self.terms[i];
        let two = Rat::from_integer(2.into());
        let coeffs: RatVec = t.a.iter().map(|c| &two * c).collect();
        let c0 = -&t.b + &t.h_minus - dot(&coeffs, &self.shift);
        LinearForm::new(c0, coeffs)
    }

    /// Denominator of `v_i` (shift invariant).
    pub fn term_denominator(&self, i: usize) -> Rat {
        let t = &self.terms[i];
        &t.b + &t.h_minus
    }

    pub fn eval_exact(&self, x: &[Rat]) -> Rat {
        let mut sum = Rat::zero();
        for i in 0..self.terms.len() {
            let base = self.term_base(i, x);
            sum += &self.weight * pow_rat(&base, self.two_p);
        }
        sum
    }
}

/// Expanded multivariate polynomial: exponent vector -> coefficient, zero
/// coefficients never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparsePoly {
    pub dim: usize,
    pub terms: BTreeMap<Vec<u32>, Rat>,
}

impl SparsePoly {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Rat) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(vec![0; dim], c);
        p
    }

    pub fn variable(dim: usize, i: usize) -> Self {
        let mut e = vec![0u32; dim];
        e[i] = 1;
        let mut p = Self::zero(dim);
        p.add_term(e, Rat::one());
        p
    }

    pub fn from_linear_form(dim: usize, lf: &LinearForm) -> Self {
        assert_eq!(lf.coeffs.len(), dim);
        let mut p = Self::zero(dim);
        p.add_term(vec![0; dim], lf.c0.clone());
        for (i, c) in lf.coeffs.iter().enumerate() {
            let mut e = vec![0u32; dim];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn add_term(&mut self, expo: Vec<u32>, coeff: Rat) {
        assert_eq!(expo.len(), self.dim);
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&expo) {
            Some(c) => {
                *c += coeff;
                if c.is_zero() {
                    self.terms.remove(&expo);
                }
            }
            None => {
                self.terms.insert(expo, coeff);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = Self::zero(self.dim);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, s: &Rat) -> Self {
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), s * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::constant(self.dim, Rat::one());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        assert_eq!(x.len(), self.dim);
        let mut sum = Rat::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (xi, &ei) in x.iter().zip(e) {
                if ei > 0 {
                    term *= pow_rat(xi, ei as u64);
                }
            }
            sum += term;
        }
        sum
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum())
            .max()
            .unwrap_or(0)
    }

    /// Substitutes each variable by the given polynomial (all in the target
    /// dimension).
    pub fn substitute(&self, subs: &[SparsePoly]) -> SparsePoly {
        assert_eq!(subs.len(), self.dim);
        let target = subs.first().map_or(self.dim, |p| p.dim);
        let mut out = SparsePoly::zero(target);
        for (e, c) in &self.terms {
            let mut term = SparsePoly::constant(target, c.clone());
            for (i, &ei) in e.iter().enumerate() {
                if ei > 0 {
                    term = term.mul(&subs[i].pow(ei));
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Embeds into a larger variable count (new variables unused).
    pub fn embed(&self, dim: usize) -> SparsePoly {
        assert!(dim >= self.dim);
        let mut out = SparsePoly::zero(dim);
        for (e, c) in &self.terms {
            let mut expo = e.clone();
            expo.resize(dim, 0);
            out.add_term(expo, c.clone());
        }
        out
    }

    /// `sum_alpha c_alpha x^alpha lin^(deg - |alpha|)` where `deg` is this
    /// polynomial's total degree: the monomial-wise homogenization used by
    /// pyramid lifts and projective pullbacks.
    pub fn homogenize_with(&self, lin: &SparsePoly) -> SparsePoly {
        assert_eq!(self.dim, lin.dim);
        let deg = self.total_degree();
        let mut out = SparsePoly::zero(self.dim);
        for (e, c) in &self.terms {
            let t: u32 = e.iter().sum();
            let mut term = SparsePoly::zero(self.dim);
            term.add_term(e.clone(), c.clone());
            out = out.add(&term.mul(&lin.pow(deg - t)));
        }
        out
    }

    pub fn text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (e, c) in &self.terms {
            let mut part = format_rat(c);
            for (i, &ei) in e.iter().enumerate() {
                if ei == 1 {
                    part.push_str(&format!("*x{}", i + 1));
                } else if ei > 1 {
                    part.push_str(&format!("*x{}^{}", i + 1, ei));
                }
            }
            parts.push(part);
        }
        parts.join(" + ")
    }
}
