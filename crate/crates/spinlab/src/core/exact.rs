//! Exact rational scalars and small arithmetic helpers.
//!
//! Every moment, Kirchhoff value and inequality certificate in this crate is
//! an [`ExactScalar`]: an arbitrary-precision fraction kept in canonical
//! reduced form with a positive denominator (the `num-rational` invariants).

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

pub type ExactScalar = num_rational::BigRational;

pub fn rat_i64(n: i64) -> ExactScalar {
    ExactScalar::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> ExactScalar {
    ExactScalar::new(BigInt::from(n), BigInt::from(d))
}

/// Formats as `p/q`, or just `p` when the denominator is one.
pub fn format_ratio(x: &ExactScalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p`, `p/q` or a plain integer literal.
pub fn parse_ratio(s: &str) -> Result<ExactScalar> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::BadInput(format!("not an integer: {t:?}")))
    };
    match s.split_once('/') {
        None => Ok(ExactScalar::from_integer(parse_int(s)?)),
        Some((p, q)) => {
            let den = parse_int(q)?;
            if den.is_zero() {
                return Err(Error::BadInput(format!("zero denominator in {s:?}")));
            }
            Ok(ExactScalar::new(parse_int(p)?, den))
        }
    }
}

/// Decimal expansion with `digits` places after the point, truncated toward
/// zero. Presentation only; exact values stay rational.
pub fn decimal_string(x: &ExactScalar, digits: u32) -> String {
    let neg = x.is_negative();
    let a = x.abs();
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = (a.numer() * &scale) / a.denom();
    let (int_part, frac_part) = (&scaled / &scale, &scaled % &scale);
    let mut frac = frac_part.to_string();
    while (frac.len() as u32) < digits {
        frac.insert(0, '0');
    }
    let sign = if neg && !scaled.is_zero() { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac}")
    }
}

pub fn to_f64(x: &ExactScalar) -> f64 {
    // Good enough for reporting; exact paths never round-trip through this.
    x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
}

/// (d-1)!! for even d >= 0: the number of perfect matchings of d points.
pub fn double_factorial_odd(d: u64) -> BigInt {
    debug_assert!(d % 2 == 0);
    let mut acc = BigInt::one();
    let mut k = 1u64;
    while k + 1 <= d {
        acc *= BigInt::from(k);
        k += 2;
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// N(N+2)(N+4)...(N+2k-2): the k-step even rising product.
pub fn rising_even(n: u32, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(n as u64 + 2 * i);
    }
    acc
}

/// N(N+1)(N+2)...(N+k-1).
pub fn rising(n: u32, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(n as u64 + i);
    }
    acc
}

/// Integer power with negative exponents allowed.
pub fn pow_i(x: &ExactScalar, e: i64) -> ExactScalar {
    x.pow(e as i32)
}

pub fn big_to_rat(n: BigInt) -> ExactScalar {
    ExactScalar::from_integer(n)
}

/// Truncated-square-root check helper: returns true if n is a perfect square.
pub fn is_perfect_square(n: &BigInt) -> bool {
    if n.sign() == Sign::Minus {
        return false;
    }
    let r = n.sqrt();
    &(&r * &r) == n
}
