//! Exact scalars: unbounded integers and always-reduced rationals.
//!
//! `Integer` and `Rational` are the `num` crate types. `BigRational` keeps
//! its denominator strictly positive and `gcd(|num|, den) = 1` after every
//! operation, so structural equality is numeric equality.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::sync::atomic::{AtomicUsize, Ordering};

pub type Integer = BigInt;
pub type Rational = BigRational;

/// Default cap on the number of series terms used for enclosures of e.
pub const DEFAULT_PRECISION_CAP: usize = 10_000;

static PRECISION_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_PRECISION_CAP);

/// Current process-wide precision cap for adaptive floors and sign checks.
pub fn precision_cap() -> usize {
    PRECISION_CAP.load(Ordering::Relaxed)
}

/// Overrides the process-wide precision cap. Values below 1 are clamped to 1.
pub fn set_precision_cap(cap: usize) {
    PRECISION_CAP.store(cap.max(1), Ordering::Relaxed);
}

/// `n!` computed exactly.
pub fn factorial(n: u32) -> Integer {
    (2..=n).fold(Integer::one(), |acc, k| acc * k)
}

/// The binomial coefficient `C(n, k)`, zero when `k < 0` or `k > n`.
pub fn binomial(n: u32, k: i64) -> Integer {
    if k < 0 || k > i64::from(n) {
        return Integer::zero();
    }
    let k = k as u32;
    let k = k.min(n - k);
    // Each partial product C(n, i) is an integer, so the division is exact.
    let mut acc = Integer::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(Integer::from(num), Integer::from(den))
}

pub fn int_to_rational(n: &Integer) -> Rational {
    Rational::from_integer(n.clone())
}

/// Floor toward negative infinity.
pub fn floor_rational(q: &Rational) -> Integer {
    q.numer().div_floor(q.denom())
}

/// Returns the integer value of `q`, or `Error::NonIntegral` if it has a fractional part.
pub fn certify_integral(q: &Rational) -> crate::Result<Integer> {
    if q.is_integer() {
        Ok(q.to_integer())
    } else {
        Err(crate::Error::NonIntegral(q.to_string()))
    }
}

/// `(-1)^k` as an `Integer`.
pub fn sign_power(k: u32) -> Integer {
    if k.is_multiple_of(2) {
        Integer::one()
    } else {
        -Integer::one()
    }
}

/// Number of decimal digits of `|n|` (at least 1). Rounded up from the bit length.
pub fn decimal_digits(n: &Integer) -> usize {
    let bits = n.abs().bits();
    if bits == 0 {
        return 1;
    }
    ((bits as f64) * std::f64::consts::LOG10_2).ceil() as usize + 1
}
