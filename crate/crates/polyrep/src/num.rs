//! Exact rational scalars and vectors.
//!
//! Every quantity in the pipeline is a `Rat` (arbitrary-precision rational,
//! always reduced, denominator positive). No floating point enters any
//! computation that decides membership or structure; floats appear only in
//! the guarded evaluation path of `verify`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;
pub type RatVec = Vec<Rat>;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn ratvec(entries: &[i64]) -> RatVec {
    entries.iter().map(|&n| rat(n)).collect()
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm_sq(a: &[Rat]) -> Rat {
    dot(a, a)
}

pub fn vec_add(a: &[Rat], b: &[Rat]) -> RatVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Rat], b: &[Rat]) -> RatVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(s: &Rat, a: &[Rat]) -> RatVec {
    a.iter().map(|x| s * x).collect()
}

pub fn vec_neg(a: &[Rat]) -> RatVec {
    a.iter().map(|x| -x).collect()
}

pub fn zeros(d: usize) -> RatVec {
    vec![Rat::zero(); d]
}

pub fn is_zero_vec(a: &[Rat]) -> bool {
    a.iter().all(|x| x.is_zero())
}

/// Least integer `n >= 0` with `n^2 * den >= num` (both nonnegative).
fn ceil_sqrt_ratio(num: &BigInt, den: &BigInt) -> BigInt {
    debug_assert!(!num.is_negative() && den.is_positive());
    let mut n = (num / den).sqrt();
    while &(&n * &n) * den < *num {
        n += 1;
    }
    n
}

/// Greatest integer `n >= 0` with `n^2 * den <= num`.
fn floor_sqrt_ratio(num: &BigInt, den: &BigInt) -> BigInt {
    debug_assert!(!num.is_negative() && den.is_positive());
    let mut n = (num / den).sqrt() + 1;
    while &(&n * &n) * den > *num {
        n -= 1;
    }
    n
}

/// Least dyadic rational `n / 2^bits` whose square is `>= x` (`x >= 0`).
pub fn dyadic_sqrt_upper(x: &Rat, bits: u32) -> Rat {
    let scale = BigInt::one() << (2 * bits);
    let n = ceil_sqrt_ratio(&(x.numer() * &scale), x.denom());
    Rat::new(n, BigInt::one() << bits)
}

/// Greatest dyadic rational `n / 2^bits` whose square is `<= x` (`x >= 0`).
pub fn dyadic_sqrt_lower(x: &Rat, bits: u32) -> Rat {
    let scale = BigInt::one() << (2 * bits);
    let n = floor_sqrt_ratio(&(x.numer() * &scale), x.denom());
    Rat::new(n, BigInt::one() << bits)
}

/// Exact `x^e` by repeated squaring.
pub fn pow_rat(x: &Rat, e: u64) -> Rat {
    let mut result = Rat::one();
    let mut base = x.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result *= &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    result
}

/// Parses an exact rational: an optionally signed integer or `p/q`.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let num: BigInt = num_str
        .parse()
        .map_err(|_| format!("invalid integer `{num_str}`"))?;
    match den_str {
        None => Ok(Rat::from_integer(num)),
        Some(d) => {
            let den: BigInt = d.parse().map_err(|_| format!("invalid integer `{d}`"))?;
            if den.is_zero() {
                return Err("zero denominator".to_string());
            }
            Ok(Rat::new(num, den))
        }
    }
}

/// Formats a rational as `p` or `p/q`.
pub fn format_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3", "-7", "5/3", "-22/7", "0"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
        assert_eq!(parse_rat("4/6").unwrap(), ratio(2, 3));
        assert!(parse_rat("1/0").unwrap_err().contains("zero denominator"));
        assert!(parse_rat("abc").is_err());
    }

    #[test]
    fn dyadic_sqrt_bounds() {
        let two = rat(2);
        let up = dyadic_sqrt_upper(&two, 16);
        let lo = dyadic_sqrt_lower(&two, 16);
        assert!(&up * &up >= two);
        assert!(&lo * &lo <= two);
        assert!(&up - &lo <= ratio(1, 65536));

        // Perfect squares resolve exactly.
        assert_eq!(dyadic_sqrt_upper(&rat(9), 16), rat(3));
        assert_eq!(dyadic_sqrt_lower(&rat(9), 16), rat(3));
    }

    #[test]
    fn pow_by_squaring() {
        assert_eq!(pow_rat(&ratio(3, 2), 5), ratio(243, 32));
        assert_eq!(pow_rat(&rat(7), 0), rat(1));
    }
}
