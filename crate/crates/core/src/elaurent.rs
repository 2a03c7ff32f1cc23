//! Exact numbers of the form `a + b·e + c·e⁻¹` with rational coefficients.
//!
//! Since 1, e and 1/e are linearly independent over the rationals,
//! coefficient equality is number equality. Floors, nearest integers and
//! signs of irrational values are decided by evaluating on rational
//! enclosures of e with an increasing number of series terms.

use crate::error::{Error, Result};
use crate::exact::{decimal_digits, floor_rational, precision_cap, Integer, Rational};
use crate::interval::{with_enclosures, Interval};
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// `a + b·e + c·e⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ELaurent {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

impl ELaurent {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Self {
        ELaurent { a, b, c }
    }

    pub fn zero() -> Self {
        ELaurent::from_rational(Rational::zero())
    }

    pub fn from_rational(a: Rational) -> Self {
        ELaurent {
            a,
            b: Rational::zero(),
            c: Rational::zero(),
        }
    }

    pub fn from_integer(n: Integer) -> Self {
        ELaurent::from_rational(Rational::from_integer(n))
    }

    /// The constant e.
    pub fn e() -> Self {
        ELaurent {
            a: Rational::zero(),
            b: Rational::one(),
            c: Rational::zero(),
        }
    }

    /// `q · e`.
    pub fn e_times(q: Rational) -> Self {
        ELaurent {
            a: Rational::zero(),
            b: q,
            c: Rational::zero(),
        }
    }

    /// `q / e`.
    pub fn over_e(q: Rational) -> Self {
        ELaurent {
            a: Rational::zero(),
            b: Rational::zero(),
            c: q,
        }
    }

    /// `n / e` for an integer numerator, e.g. `n!/e`.
    pub fn int_over_e(n: Integer) -> Self {
        ELaurent::over_e(Rational::from_integer(n))
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero() && self.c.is_zero()
    }

    pub fn scale(&self, q: &Rational) -> Self {
        ELaurent {
            a: &self.a * q,
            b: &self.b * q,
            c: &self.c * q,
        }
    }

    /// Multiplication by e. Defined only when the e-coefficient is zero,
    /// since e² lies outside the span of {1, e, 1/e}.
    pub fn times_e(&self) -> Option<Self> {
        if !self.b.is_zero() {
            return None;
        }
        Some(ELaurent {
            a: self.c.clone(),
            b: self.a.clone(),
            c: Rational::zero(),
        })
    }

    /// Division by e. Defined only when the 1/e-coefficient is zero.
    pub fn over_e_of(&self) -> Option<Self> {
        if !self.c.is_zero() {
            return None;
        }
        Some(ELaurent {
            a: self.b.clone(),
            b: Rational::zero(),
            c: self.a.clone(),
        })
    }

    fn max_numerator_digits(&self) -> usize {
        [&self.a, &self.b, &self.c]
            .iter()
            .map(|q| decimal_digits(q.numer()))
            .max()
            .unwrap_or(1)
    }

    /// Starting number of series terms for adaptive evaluation.
    pub fn initial_terms(&self) -> usize {
        self.max_numerator_digits().max(32)
    }
}

impl Add for &ELaurent {
    type Output = ELaurent;
    fn add(self, rhs: &ELaurent) -> ELaurent {
        ELaurent {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
            c: &self.c + &rhs.c,
        }
    }
}

impl Add for ELaurent {
    type Output = ELaurent;
    fn add(self, rhs: ELaurent) -> ELaurent {
        &self + &rhs
    }
}

impl Sub for &ELaurent {
    type Output = ELaurent;
    fn sub(self, rhs: &ELaurent) -> ELaurent {
        ELaurent {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
            c: &self.c - &rhs.c,
        }
    }
}

impl Sub for ELaurent {
    type Output = ELaurent;
    fn sub(self, rhs: ELaurent) -> ELaurent {
        &self - &rhs
    }
}

impl Neg for &ELaurent {
    type Output = ELaurent;
    fn neg(self) -> ELaurent {
        ELaurent {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
        }
    }
}

impl Mul<&Rational> for &ELaurent {
    type Output = ELaurent;
    fn mul(self, q: &Rational) -> ELaurent {
        self.scale(q)
    }
}

impl Mul<&Integer> for &ELaurent {
    type Output = ELaurent;
    fn mul(self, n: &Integer) -> ELaurent {
        self.scale(&Rational::from_integer(n.clone()))
    }
}

impl fmt::Display for ELaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.a.is_zero() {
            parts.push(self.a.to_string());
        }
        if !self.b.is_zero() {
            parts.push(format!("{}*e", self.b));
        }
        if !self.c.is_zero() {
            parts.push(format!("{}/e", self.c));
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&parts.join(" + ").replace("+ -", "- "))
    }
}

/// Conservative enclosure of `x` using `terms` series terms for e.
///
/// Panics if `terms == 0`.
pub fn el_eval(x: &ELaurent, terms: usize) -> Interval {
    let base = Interval::point(x.a.clone());
    if x.is_rational() {
        return base;
    }
    with_enclosures(terms, |e, e_inv| {
        let mut acc = base;
        if !x.b.is_zero() {
            acc = &acc + &e.scale(&x.b);
        }
        if !x.c.is_zero() {
            acc = &acc + &e_inv.scale(&x.c);
        }
        acc
    })
}

/// Evaluates `x` on a doubling schedule of series terms until `decided`
/// returns a value, or fails once the cap is passed.
fn refine<T>(x: &ELaurent, cap: usize, decided: impl Fn(&Interval) -> Option<T>) -> Result<T> {
    let mut terms = x.initial_terms();
    loop {
        if terms > cap {
            return Err(Error::PrecisionExhausted { cap });
        }
        if let Some(v) = decided(&el_eval(x, terms)) {
            return Ok(v);
        }
        terms = terms.saturating_mul(2);
    }
}

/// `⌊x⌋` with the process-wide precision cap.
pub fn el_floor(x: &ELaurent) -> Result<Integer> {
    el_floor_capped(x, precision_cap())
}

pub fn el_floor_capped(x: &ELaurent, cap: usize) -> Result<Integer> {
    if x.is_rational() {
        return Ok(floor_rational(&x.a));
    }
    refine(x, cap, |iv| {
        let lo = floor_rational(iv.lo());
        (lo == floor_rational(iv.hi())).then_some(lo)
    })
}

/// Nearest integer to `x`, computed as `⌊x + 1/2⌋`; exact halves round up.
pub fn el_nearest(x: &ELaurent) -> Result<Integer> {
    el_nearest_capped(x, precision_cap())
}

pub fn el_nearest_capped(x: &ELaurent, cap: usize) -> Result<Integer> {
    let half = ELaurent::from_rational(Rational::new(Integer::one(), Integer::from(2)));
    el_floor_capped(&(x + &half), cap)
}

/// Certified sign of `x`. Irrational values are never zero, so refinement
/// always terminates for them below a large enough cap.
pub fn el_sign(x: &ELaurent) -> Result<Ordering> {
    el_sign_capped(x, precision_cap())
}

pub fn el_sign_capped(x: &ELaurent, cap: usize) -> Result<Ordering> {
    if x.is_rational() {
        return Ok(x.a.cmp(&Rational::zero()));
    }
    refine(x, cap, |iv| {
        if iv.lo().is_positive() {
            Some(Ordering::Greater)
        } else if iv.hi().is_negative() {
            Some(Ordering::Less)
        } else {
            None
        }
    })
}

/// Midpoint of the enclosure at 64 terms, as `f64`.
pub fn el_to_f64(x: &ELaurent) -> f64 {
    el_eval(x, 64).to_f64_midpoint()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{factorial, rational};

    fn int(n: i64) -> Rational {
        rational(n, 1)
    }

    /// Integers `(lo, hi)` with `lo <= e * 10^digits <= hi`, via truncated
    /// integer division per series term. Independent of the interval code.
    fn e_scaled(digits: u32) -> (Integer, Integer) {
        let scale = Integer::from(10).pow(digits);
        let mut term = scale.clone();
        let mut sum = Integer::zero();
        let mut k = 0u32;
        while !term.is_zero() {
            sum += &term;
            k += 1;
            term /= k;
        }
        // each of the k truncations loses < 1; the dropped tail is < 1
        let hi = &sum + Integer::from(k + 1);
        (sum, hi)
    }

    /// floor(c / e) for positive integer c, decided from a scaled decimal
    /// approximation of e with an explicit error bracket.
    fn floor_over_e_oracle(c: &Integer) -> Integer {
        let digits = 40 + decimal_digits(c) as u32;
        let scale = Integer::from(10).pow(digits);
        let (e_lo, e_hi) = e_scaled(digits);
        let a = (c * &scale) / &e_hi;
        let b = (c * &scale) / &e_lo;
        assert_eq!(a, b, "oracle bracket too wide");
        a
    }

    #[test]
    fn rational_fast_path() {
        let x = ELaurent::from_rational(rational(7, 2));
        assert_eq!(el_floor(&x).unwrap(), Integer::from(3));
        let y = ELaurent::from_rational(rational(-7, 2));
        assert_eq!(el_floor(&y).unwrap(), Integer::from(-4));
    }

    #[test]
    fn floor_120_over_e() {
        let x = ELaurent::over_e(int(120));
        assert_eq!(floor_over_e_oracle(&Integer::from(120)), Integer::from(44));
        assert_eq!(el_floor(&x).unwrap(), Integer::from(44));
    }

    #[test]
    fn floor_2_over_e() {
        assert_eq!(
            el_floor(&ELaurent::over_e(int(2))).unwrap(),
            Integer::zero()
        );
    }

    #[test]
    fn nearest_examples() {
        assert_eq!(
            el_nearest(&ELaurent::over_e(int(2))).unwrap(),
            Integer::from(1)
        );
        assert_eq!(
            el_nearest(&ELaurent::from_rational(rational(5, 2))).unwrap(),
            Integer::from(3)
        );
        assert_eq!(
            el_nearest(&ELaurent::from_rational(rational(-5, 2))).unwrap(),
            Integer::from(-2)
        );
        assert_eq!(
            el_nearest(&ELaurent::over_e(int(24))).unwrap(),
            Integer::from(9)
        );
    }

    #[test]
    fn floors_of_factorials_over_e_match_oracle() {
        for n in 1..=60u32 {
            let c = factorial(n);
            assert_eq!(
                el_floor(&ELaurent::int_over_e(c.clone())).unwrap(),
                floor_over_e_oracle(&c),
                "n = {n}"
            );
        }
    }

    #[test]
    fn eval_of_rational_is_a_point() {
        let iv = el_eval(&ELaurent::from_rational(int(1)), 7);
        assert_eq!(iv.lo(), &int(1));
        assert!(iv.width().is_zero());
    }

    #[test]
    fn eval_of_e_is_the_enclosure() {
        let iv = el_eval(&ELaurent::e(), 3);
        assert_eq!(iv.lo(), &rational(8, 3));
        assert_eq!(iv.hi(), &rational(49, 18));
    }

    #[test]
    fn eval_e_plus_inverse() {
        let x = ELaurent::new(int(0), int(1), int(1));
        let iv = el_eval(&x, 20);
        assert!(iv.width() < Rational::new(Integer::one(), Integer::from(10).pow(15)));
        // e + 1/e = 3.08616126963048...; bracket from the scaled-decimal oracle
        let digits = 30u32;
        let scale = Integer::from(10).pow(digits);
        let (e_lo, e_hi) = e_scaled(digits);
        let lower =
            Rational::new(e_lo.clone(), scale.clone()) + Rational::new(scale.clone(), e_hi.clone());
        let upper = Rational::new(e_hi, scale.clone()) + Rational::new(scale, e_lo);
        assert!(iv.lo() <= &upper && &lower <= iv.hi());
        assert!((iv.to_f64_midpoint() - 3.086161269630488).abs() < 1e-14);
    }

    #[test]
    fn precision_cap_is_enforced() {
        let x = ELaurent::int_over_e(factorial(100));
        assert_eq!(
            el_floor_capped(&x, 16),
            Err(Error::PrecisionExhausted { cap: 16 })
        );
    }

    #[test]
    fn times_e_requires_zero_e_coefficient() {
        let x = ELaurent::new(int(2), int(0), int(3));
        assert_eq!(x.times_e().unwrap(), ELaurent::new(int(3), int(2), int(0)));
        assert!(ELaurent::e().times_e().is_none());
        assert_eq!(
            ELaurent::e().over_e_of().unwrap(),
            ELaurent::from_rational(int(1))
        );
    }

    #[test]
    fn sign_certification() {
        // 6/e - 2 ~ 0.2073
        let x = ELaurent::new(int(-2), int(0), int(6));
        assert_eq!(el_sign(&x).unwrap(), Ordering::Greater);
        assert_eq!(el_sign(&-&x).unwrap(), Ordering::Less);
        assert_eq!(el_sign(&ELaurent::zero()).unwrap(), Ordering::Equal);
    }

    #[test]
    fn display_renders_exact_coefficients() {
        assert_eq!(ELaurent::zero().to_string(), "0");
        assert_eq!(
            ELaurent::new(int(-2), int(1), int(0)).to_string(),
            "-2 + 1*e"
        );
        assert_eq!(
            ELaurent::new(rational(1, 2), int(-3), int(5)).to_string(),
            "1/2 - 3*e + 5/e"
        );
    }
}
