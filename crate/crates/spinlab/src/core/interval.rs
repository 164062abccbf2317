//! Certified interval arithmetic.
//!
//! Endpoints are exact rationals, so ring operations introduce no rounding
//! at all; width enters only through square roots and the pi constant, both
//! of which round outward at a configurable precision (`prec` bits of
//! relative accuracy, well past 50 decimal digits at the 256-bit default).
//! The enclosure invariant is therefore unconditional: the true value always
//! lies in [lo, hi].

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::sync::Mutex;

use crate::core::exact::{decimal_string, ExactScalar};
use crate::{Error, Result};

pub const DEFAULT_PREC: u32 = 256;

#[derive(Clone, Debug, PartialEq)]
pub struct IntervalScalar {
    lo: ExactScalar,
    hi: ExactScalar,
}

/// Sign of an interval quantity, as far as the enclosure can tell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignVerdict {
    Positive,
    Negative,
    Zero,
    Unknown,
}

impl IntervalScalar {
    pub fn new(lo: ExactScalar, hi: ExactScalar) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        IntervalScalar { lo, hi }
    }

    pub fn point(x: ExactScalar) -> Self {
        IntervalScalar { lo: x.clone(), hi: x }
    }

    pub fn zero() -> Self {
        Self::point(ExactScalar::zero())
    }

    pub fn lo(&self) -> &ExactScalar {
        &self.lo
    }

    pub fn hi(&self) -> &ExactScalar {
        &self.hi
    }

    pub fn width(&self) -> ExactScalar {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &ExactScalar) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn add(&self, other: &Self) -> Self {
        IntervalScalar {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        IntervalScalar {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }

    pub fn neg(&self) -> Self {
        IntervalScalar {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let cands = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = cands.iter().min().unwrap().clone();
        let hi = cands.iter().max().unwrap().clone();
        IntervalScalar { lo, hi }
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        if c.is_negative() {
            IntervalScalar {
                lo: &self.hi * c,
                hi: &self.lo * c,
            }
        } else {
            IntervalScalar {
                lo: &self.lo * c,
                hi: &self.hi * c,
            }
        }
    }

    /// Reciprocal; the interval must not straddle zero.
    pub fn recip(&self) -> Result<Self> {
        if self.lo.is_negative() != self.hi.is_negative() || self.lo.is_zero() || self.hi.is_zero()
        {
            return Err(Error::BadInput("reciprocal of interval containing zero".into()));
        }
        Ok(IntervalScalar {
            lo: self.hi.recip(),
            hi: self.lo.recip(),
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn pow_u(&self, e: u32) -> Self {
        let mut acc = IntervalScalar::point(ExactScalar::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Outward-rounded square root; the enclosure must be nonnegative-capable
    /// (hi >= 0). A slightly negative lo from prior rounding clamps to zero.
    pub fn sqrt(&self, prec: u32) -> Result<Self> {
        if self.hi.is_negative() {
            return Err(Error::NegativeSqrt);
        }
        let lo = if self.lo.is_negative() {
            ExactScalar::zero()
        } else {
            sqrt_rational_down(&self.lo, prec)
        };
        let hi = sqrt_rational_up(&self.hi, prec);
        Ok(IntervalScalar { lo, hi })
    }

    pub fn sign(&self) -> SignVerdict {
        if self.lo.is_zero() && self.hi.is_zero() {
            SignVerdict::Zero
        } else if self.lo.is_positive() {
            SignVerdict::Positive
        } else if self.hi.is_negative() {
            SignVerdict::Negative
        } else {
            SignVerdict::Unknown
        }
    }

    /// Decimal rendering of both endpoints, truncated to `digits` places.
    pub fn to_decimal(&self, digits: u32) -> (String, String) {
        (decimal_string(&self.lo, digits), decimal_string(&self.hi, digits))
    }
}

/// Largest dyadic p/2^prec-grid value <= sqrt(x), after rescaling x into
/// [1, 4) by an even power of two so that prec is a relative accuracy.
fn sqrt_rational_down(x: &ExactScalar, prec: u32) -> ExactScalar {
    sqrt_rational_dir(x, prec, false)
}

fn sqrt_rational_up(x: &ExactScalar, prec: u32) -> ExactScalar {
    sqrt_rational_dir(x, prec, true)
}

fn sqrt_rational_dir(x: &ExactScalar, prec: u32, round_up: bool) -> ExactScalar {
    debug_assert!(!x.is_negative());
    if x.is_zero() {
        return ExactScalar::zero();
    }
    // Normalize: x = m * 4^e with m in [1, 4); sqrt(x) = sqrt(m) * 2^e.
    let mut num = x.numer().clone();
    let mut den = x.denom().clone();
    let mut e2: i64 = 0; // power of 2 in the result
    while num < den {
        num *= 4;
        e2 -= 1;
    }
    while num >= &den * 4 {
        den *= 4;
        e2 += 1;
    }
    // sqrt(num/den) enclosed via floor/ceil of sqrt(num * den) / den.
    let scale = BigInt::one() << (2 * prec);
    let t = (&num * &den * &scale).sqrt(); // floor sqrt
    let root = if round_up {
        let exact = &t * &t == &num * &den * &scale;
        if exact {
            t
        } else {
            t + 1
        }
    } else {
        t
    };
    let base = ExactScalar::new(root, den * (BigInt::one() << prec));
    shift2(base, e2)
}

fn shift2(x: ExactScalar, e2: i64) -> ExactScalar {
    if e2 >= 0 {
        x * ExactScalar::from_integer(BigInt::one() << (e2 as u32))
    } else {
        x / ExactScalar::from_integer(BigInt::one() << ((-e2) as u32))
    }
}

/// Enclosure of pi at roughly `prec` bits, memoized per precision.
///
/// Machin: pi = 16 atan(1/5) - 4 atan(1/239); the alternating atan series is
/// summed in fixed point with floor division, with an explicit ulp budget
/// plus first-omitted-term bound folded into the returned endpoints.
pub fn pi_interval(prec: u32) -> IntervalScalar {
    static CACHE: Lazy<Mutex<HashMap<u32, IntervalScalar>>> = Lazy::new(Default::default);
    if let Some(v) = CACHE.lock().unwrap().get(&prec) {
        return v.clone();
    }
    let guard = prec + 24;
    let (a5_lo, a5_hi) = atan_inv_fixed(5, guard);
    let (a239_lo, a239_hi) = atan_inv_fixed(239, guard);
    let lo_num = 16 * a5_lo - 4 * a239_hi;
    let hi_num = 16 * a5_hi - 4 * a239_lo;
    let den = BigInt::one() << guard;
    let out = IntervalScalar::new(
        ExactScalar::new(lo_num, den.clone()),
        ExactScalar::new(hi_num, den),
    );
    CACHE.lock().unwrap().insert(prec, out.clone());
    out
}

/// Fixed-point enclosure of atan(1/x) * 2^bits as integer bounds.
fn atan_inv_fixed(x: u64, bits: u32) -> (BigInt, BigInt) {
    let one = BigInt::one() << bits;
    let x = BigInt::from(x);
    let xx = &x * &x;
    let mut term_den = x.clone(); // x^(2i+1)
    let mut acc = BigInt::zero();
    let mut i = 0u64;
    let mut ulps = BigInt::zero();
    loop {
        let term = &one / (&term_den * BigInt::from(2 * i + 1)); // floor
        if term.is_zero() {
            break;
        }
        if i % 2 == 0 {
            acc += &term;
        } else {
            acc -= &term;
        }
        ulps += 1u32;
        term_den *= &xx;
        i += 1;
    }
    // Each floor division underestimates by < 1 ulp; the truncated tail is
    // below the first omitted term, already < 1 ulp when the loop exits.
    let slack = ulps + 2u32;
    (acc.clone() - &slack, acc + slack)
}

/// Enclosure of sqrt(2).
pub fn sqrt2_interval(prec: u32) -> IntervalScalar {
    IntervalScalar::point(ExactScalar::from_integer(BigInt::from(2)))
        .sqrt(prec)
        .expect("sqrt of 2")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::exact::{parse_ratio, rat, rat_i64};
    use proptest::prelude::*;

    #[test]
    fn ring_ops_are_exact() {
        let a = IntervalScalar::new(rat(1, 3), rat(1, 2));
        let b = IntervalScalar::new(rat(-1, 4), rat(2, 1));
        let s = a.add(&b);
        assert_eq!(s.lo(), &rat(1, 12));
        assert_eq!(s.hi(), &rat(5, 2));
        let m = a.mul(&b);
        assert_eq!(m.lo(), &rat(-1, 8));
        assert_eq!(m.hi(), &rat(1, 1));
    }

    #[test]
    fn sqrt_encloses_tightly() {
        let x = IntervalScalar::point(rat_i64(2));
        let r = x.sqrt(128).unwrap();
        assert!(r.lo() < r.hi());
        assert!(r.lo() * r.lo() <= rat_i64(2));
        assert!(r.hi() * r.hi() >= rat_i64(2));
        assert!(r.width() < rat(1, i64::MAX)); // far below any f64 ulp
        // Perfect squares give exact-ish enclosures containing the root.
        let nine = IntervalScalar::point(rat_i64(9)).sqrt(64).unwrap();
        assert!(nine.contains(&rat_i64(3)));
    }

    #[test]
    fn pi_matches_reference_digits() {
        let pi = pi_interval(192);
        let lo_ref =
            parse_ratio("31415926535897932384626433832795028841971693993751/10000000000000000000000000000000000000000000000000")
                .unwrap();
        let hi_ref =
            parse_ratio("31415926535897932384626433832795028841971693993752/10000000000000000000000000000000000000000000000000")
                .unwrap();
        assert!(pi.lo() > &lo_ref && pi.hi() < &hi_ref, "pi enclosure drifted");
    }

    #[test]
    fn sign_verdicts() {
        assert_eq!(IntervalScalar::new(rat(1, 9), rat(1, 2)).sign(), SignVerdict::Positive);
        assert_eq!(IntervalScalar::new(rat(-3, 2), rat(-1, 7)).sign(), SignVerdict::Negative);
        assert_eq!(IntervalScalar::new(rat(-1, 9), rat(1, 9)).sign(), SignVerdict::Unknown);
        assert_eq!(IntervalScalar::zero().sign(), SignVerdict::Zero);
    }

    #[test]
    fn recip_rejects_zero_straddle() {
        assert!(IntervalScalar::new(rat(-1, 2), rat(1, 2)).recip().is_err());
        let r = IntervalScalar::new(rat(1, 2), rat(2, 1)).recip().unwrap();
        assert_eq!(r.lo(), &rat(1, 2));
        assert_eq!(r.hi(), &rat(2, 1));
    }

    proptest! {
        // sqrt enclosure property on random positive rationals.
        #[test]
        fn sqrt_enclosure(n in 1u64..10_000, d in 1u64..10_000) {
            let x = rat(n as i64, d as i64);
            let r = IntervalScalar::point(x.clone()).sqrt(96).unwrap();
            prop_assert!(r.lo() * r.lo() <= x);
            prop_assert!(r.hi() * r.hi() >= x);
            prop_assert!(!r.lo().is_negative());
        }
    }
}
