//! Closed rational intervals and rigorous enclosures of e and 1/e.

use crate::exact::{Integer, Rational};
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

/// A closed interval `[lo, hi]` with rational endpoints, `lo <= hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    /// Builds `[lo, hi]`, swapping the endpoints if they are given out of order.
    pub fn new(lo: Rational, hi: Rational) -> Self {
        if lo <= hi {
            Interval { lo, hi }
        } else {
            Interval { lo: hi, hi: lo }
        }
    }

    pub fn point(q: Rational) -> Self {
        Interval {
            lo: q.clone(),
            hi: q,
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Integer::from(2)
    }

    pub fn contains(&self, q: &Rational) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    /// True when `q` lies in the open interior.
    pub fn contains_strictly(&self, q: &Rational) -> bool {
        &self.lo < q && q < &self.hi
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// Multiplication by an exact rational.
    pub fn scale(&self, q: &Rational) -> Interval {
        if q.is_negative() {
            Interval {
                lo: &self.hi * q,
                hi: &self.lo * q,
            }
        } else {
            Interval {
                lo: &self.lo * q,
                hi: &self.hi * q,
            }
        }
    }

    /// Reciprocal of an interval that excludes zero.
    pub fn recip(&self) -> Option<Interval> {
        if self.contains(&Rational::zero()) {
            return None;
        }
        Some(Interval {
            lo: self.hi.recip(),
            hi: self.lo.recip(),
        })
    }

    pub fn to_f64_midpoint(&self) -> f64 {
        rational_to_f64(&self.midpoint())
    }
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, rhs: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &rhs.lo,
            hi: &self.hi + &rhs.hi,
        }
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, rhs: &Interval) -> Interval {
        Interval {
            lo: &self.lo - &rhs.hi,
            hi: &self.hi - &rhs.lo,
        }
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Nearest-ish `f64` for a rational whose parts may overflow `f64` on their own.
pub fn rational_to_f64(q: &Rational) -> f64 {
    let (num, den) = (q.numer(), q.denom());
    let shift = num.bits().max(den.bits()).saturating_sub(900);
    let n = num_traits::ToPrimitive::to_f64(&(num >> shift)).unwrap_or(f64::NAN);
    let d = num_traits::ToPrimitive::to_f64(&(den >> shift)).unwrap_or(f64::NAN);
    n / d
}

#[derive(Clone)]
struct EPair {
    e: Interval,
    e_inv: Interval,
}

fn cache() -> &'static Mutex<HashMap<usize, Arc<EPair>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<EPair>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn compute_e(terms: usize) -> Interval {
    // sum_{k=0..K} K!/k! accumulated from the top term down
    let mut term = Integer::one();
    let mut numer = Integer::one();
    for k in (1..=terms).rev() {
        term *= k;
        numer += &term;
    }
    // term == K!
    let lo = Rational::new(numer, term.clone());
    let remainder = Rational::new(Integer::one(), term * terms);
    let hi = &lo + remainder;
    Interval { lo, hi }
}

fn pair(terms: usize) -> Arc<EPair> {
    assert!(terms >= 1, "e enclosure needs at least one series term");
    if let Some(p) = cache().lock().unwrap().get(&terms) {
        return Arc::clone(p);
    }
    let e = compute_e(terms);
    let e_inv = e.recip().expect("e enclosure is positive");
    let p = Arc::new(EPair { e, e_inv });
    cache()
        .lock()
        .unwrap()
        .entry(terms)
        .or_insert_with(|| Arc::clone(&p));
    p
}

/// `[s_K, s_K + 1/(K!·K)]` where `s_K = sum_{k=0..K} 1/k!`. Contains e strictly.
///
/// Panics if `terms == 0`.
pub fn e_enclosure(terms: usize) -> Interval {
    pair(terms).e.clone()
}

/// `[1/hi, 1/lo]` of [`e_enclosure`].
pub fn e_inv_enclosure(terms: usize) -> Interval {
    pair(terms).e_inv.clone()
}

pub(crate) fn with_enclosures<T>(terms: usize, f: impl FnOnce(&Interval, &Interval) -> T) -> T {
    let p = pair(terms);
    f(&p.e, &p.e_inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{factorial, rational};

    #[test]
    fn k1_is_two_to_three() {
        let iv = e_enclosure(1);
        assert_eq!(iv.lo(), &rational(2, 1));
        assert_eq!(iv.hi(), &rational(3, 1));
    }

    #[test]
    fn k3_partial_sum() {
        // 1 + 1 + 1/2 + 1/6 = 8/3; remainder 1/(6*3) = 1/18
        let iv = e_enclosure(3);
        assert_eq!(iv.lo(), &rational(8, 3));
        assert_eq!(iv.hi(), &(rational(8, 3) + rational(1, 18)));
        assert_eq!(iv.hi(), &rational(49, 18));
    }

    #[test]
    fn k10_width() {
        assert_eq!(e_enclosure(10).width(), rational(1, 36288000));
        let expected = Rational::new(Integer::one(), factorial(10) * 10);
        assert_eq!(e_enclosure(10).width(), expected);
    }

    #[test]
    fn enclosures_nest() {
        for k in 1..60 {
            let a = e_enclosure(k);
            let b = e_enclosure(k + 1);
            assert!(a.lo() < b.lo(), "lower bounds strictly increase at {k}");
            assert!(b.lo() <= b.hi());
            assert!(b.hi() < a.hi(), "upper bounds decrease at {k}");
        }
    }

    #[test]
    fn contains_known_decimal_expansion() {
        // e = 2.71828182845904523536028747135266249775724709369995...
        let lo = Rational::new(
            "271828182845904523536028747135266249775724709369995"
                .parse()
                .unwrap(),
            Integer::from(10).pow(50),
        );
        let hi = &lo + Rational::new(Integer::one(), Integer::from(10).pow(50));
        let iv = e_enclosure(60);
        assert!(iv.lo() < &hi && &lo < iv.hi());
        assert!(iv.width() < Rational::new(Integer::one(), Integer::from(10).pow(70)));
    }

    #[test]
    fn reciprocal_swaps_endpoints() {
        let e = e_enclosure(5);
        let inv = e_inv_enclosure(5);
        assert_eq!(inv.lo(), &e.hi().recip());
        assert_eq!(inv.hi(), &e.lo().recip());
        assert!(Interval::new(rational(-1, 1), rational(1, 1))
            .recip()
            .is_none());
    }

    #[test]
    fn scale_by_negative_flips() {
        let iv = Interval::new(rational(1, 1), rational(2, 1));
        let s = iv.scale(&rational(-3, 1));
        assert_eq!(s.lo(), &rational(-6, 1));
        assert_eq!(s.hi(), &rational(-3, 1));
    }
}
