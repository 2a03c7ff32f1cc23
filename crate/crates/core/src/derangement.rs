//! Derangement numbers D(n), the partial sums S_p = Σ n·D(n), and the
//! permutation-generation cost A_N, each by an independent code path.

use crate::elaurent::{el_floor, el_nearest, ELaurent};
use crate::error::{Error, Result};
use crate::exact::{certify_integral, factorial, sign_power, Integer, Rational};
use num_traits::{One, Zero};
use std::sync::{OnceLock, RwLock};

/// Which formula produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Inclusion-exclusion sum `n! Σ (-1)^i / i!`.
    Sum,
    /// `D(n) = (n-1)(D(n-1) + D(n-2))`.
    PairRecurrence,
    /// `D(n) = n D(n-1) + (-1)^n`.
    SignedRecurrence,
    /// `⌊(n! + 1)/e⌋`.
    FloorFormula,
    /// `‖n!/e‖`.
    NearestFormula,
    /// Fixed seeds `D(0) = 1`, `D(1) = 0`.
    Seed,
}

impl Method {
    pub const ALL_FORMULAS: [Method; 5] = [
        Method::Sum,
        Method::PairRecurrence,
        Method::SignedRecurrence,
        Method::FloorFormula,
        Method::NearestFormula,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Sum => "sum",
            Method::PairRecurrence => "pair",
            Method::SignedRecurrence => "signed",
            Method::FloorFormula => "floor",
            Method::NearestFormula => "nearest",
            Method::Seed => "seed",
        }
    }

    /// Computes D(n) with this method alone.
    pub fn derangements(self, n: u32) -> Result<Integer> {
        match self {
            Method::Sum => d_sum(n),
            Method::PairRecurrence => Ok(d_pair_recurrence(n)),
            Method::SignedRecurrence => Ok(d_signed_recurrence(n)),
            Method::FloorFormula => d_floor_formula(n),
            Method::NearestFormula => d_nearest_formula(n),
            Method::Seed => match n {
                0 => Ok(Integer::one()),
                1 => Ok(Integer::zero()),
                _ => Err(Error::Precondition(format!("no seed value for n = {n}"))),
            },
        }
    }
}

/// `n! Σ_{i=0..n} (-1)^i / i!`, summed as exact rationals.
pub fn d_sum(n: u32) -> Result<Integer> {
    let n_fact = factorial(n);
    let mut sum = Rational::zero();
    let mut i_fact = Integer::one();
    for i in 0..=n {
        if i > 0 {
            i_fact *= i;
        }
        sum += Rational::new(sign_power(i), i_fact.clone());
    }
    certify_integral(&(sum * Rational::from_integer(n_fact)))
}

pub fn d_pair_recurrence(n: u32) -> Integer {
    let (mut prev, mut cur) = (Integer::one(), Integer::zero());
    if n == 0 {
        return prev;
    }
    for k in 2..=n {
        let next = (&prev + &cur) * (k - 1);
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

pub fn d_signed_recurrence(n: u32) -> Integer {
    (1..=n).fold(Integer::one(), |d, k| d * k + sign_power(k))
}

/// `⌊(n! + 1)/e⌋` exactly as written. Equals D(n) for n ≥ 1; at n = 0 it
/// gives `⌊2/e⌋ = 0` whereas D(0) = 1.
pub fn d_floor_formula(n: u32) -> Result<Integer> {
    el_floor(&ELaurent::int_over_e(factorial(n) + 1))
}

/// `‖n!/e‖`, defined for n ≥ 1.
pub fn d_nearest_formula(n: u32) -> Result<Integer> {
    if n == 0 {
        return Err(Error::Precondition(
            "nearest-integer formula requires n >= 1".into(),
        ));
    }
    el_nearest(&ELaurent::int_over_e(factorial(n)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableEntry {
    pub value: Integer,
    pub method: Method,
}

/// Memoized D(n) for a contiguous range `0..len`.
///
/// Entries beyond the seeds are produced by the table's method and checked
/// against the pair recurrence as they are inserted.
#[derive(Debug, Clone)]
pub struct DerangementTable {
    method: Method,
    entries: Vec<TableEntry>,
}

impl Default for DerangementTable {
    fn default() -> Self {
        DerangementTable::new(Method::SignedRecurrence)
    }
}

impl DerangementTable {
    pub fn new(method: Method) -> Self {
        let seeds = [Integer::one(), Integer::zero()]
            .into_iter()
            .map(|value| TableEntry {
                value,
                method: Method::Seed,
            })
            .collect();
        DerangementTable {
            method,
            entries: seeds,
        }
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, n: u32) -> Option<&Integer> {
        self.entries.get(n as usize).map(|e| &e.value)
    }

    pub fn entry(&self, n: u32) -> Option<&TableEntry> {
        self.entries.get(n as usize)
    }

    fn next_value(&self, n: u32) -> Result<Integer> {
        let last = &self.entries[n as usize - 1].value;
        match self.method {
            Method::SignedRecurrence | Method::Seed => Ok(last * n + sign_power(n)),
            Method::PairRecurrence => {
                let before = &self.entries[n as usize - 2].value;
                Ok((last + before) * (n - 1))
            }
            other => other.derangements(n),
        }
    }

    /// Fills the table up to and including `n`.
    pub fn extend_to(&mut self, n: u32) -> Result<()> {
        while self.entries.len() <= n as usize {
            let k = self.entries.len() as u32;
            let value = self.next_value(k)?;
            let pair = (&self.entries[k as usize - 1].value + &self.entries[k as usize - 2].value)
                * (k - 1);
            if value != pair {
                return Err(Error::TableInconsistent(k as usize));
            }
            self.entries.push(TableEntry {
                value,
                method: self.method,
            });
        }
        Ok(())
    }

    pub fn value(&mut self, n: u32) -> Result<Integer> {
        self.extend_to(n)?;
        Ok(self.entries[n as usize].value.clone())
    }

    /// Checks both recurrences on every cached entry.
    pub fn check_invariants(&self) -> Result<()> {
        if self.get(0) != Some(&Integer::one()) || self.get(1) != Some(&Integer::zero()) {
            return Err(Error::TableInconsistent(0));
        }
        for n in 2..self.entries.len() {
            let d = &self.entries[n].value;
            let d1 = &self.entries[n - 1].value;
            let d2 = &self.entries[n - 2].value;
            if *d != (d1 + d2) * (n - 1) || *d != d1 * n + sign_power(n as u32) {
                return Err(Error::TableInconsistent(n));
            }
        }
        Ok(())
    }
}

fn shared() -> &'static RwLock<DerangementTable> {
    static TABLE: OnceLock<RwLock<DerangementTable>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(DerangementTable::default()))
}

/// D(n) from the process-wide table, populating it on demand.
pub fn derangements(n: u32) -> Integer {
    if let Some(v) = shared().read().unwrap().get(n) {
        return v.clone();
    }
    let mut table = shared().write().unwrap();
    // The signed recurrence and pair recurrence agree, so this cannot fail.
    table
        .value(n)
        .expect("recurrence-backed table is self-consistent")
}

/// Ensures the shared table covers `0..=n`.
pub fn prefill(n: u32) {
    derangements(n);
}

/// `S_p = Σ_{n=0..p} n·D(n)`.
pub fn sum_rule_lhs(p: u32) -> Integer {
    prefill(p);
    let table = shared().read().unwrap();
    (1..=p).fold(Integer::zero(), |acc, n| {
        acc + table.get(n).expect("prefilled") * n
    })
}

/// `⌊(p+1)!/e⌋`.
pub fn sum_rule_rhs(p: u32) -> Result<Integer> {
    el_floor(&ELaurent::int_over_e(factorial(p + 1)))
}

/// `A_1 = 0`, `A_N = N·A_{N-1} + (N - 1 if N odd else 0)`.
pub fn a_recurrence(n: u32) -> Result<Integer> {
    if n == 0 {
        return Err(Error::Precondition("A_N is defined for N >= 1".into()));
    }
    Ok((2..=n).fold(Integer::zero(), |a, k| {
        let extra = if k % 2 == 1 { k - 1 } else { 0 };
        a * k + extra
    }))
}

/// `N! Σ_{k=2..N} (-1)^k / k!` in exact rationals.
///
/// This coincides with D(N): it matches `a_recurrence` and `⌊N!/e⌋` only
/// for odd N (and N = 1), and exceeds them by one for even N.
pub fn a_closed_form(n: u32) -> Result<Integer> {
    if n == 0 {
        return Err(Error::Precondition("A_N is defined for N >= 1".into()));
    }
    let mut sum = Rational::zero();
    let mut k_fact = Integer::one();
    for k in 1..=n {
        k_fact *= k;
        if k >= 2 {
            sum += Rational::new(sign_power(k), k_fact.clone());
        }
    }
    certify_integral(&(sum * Rational::from_integer(factorial(n))))
}

/// `⌊N!/e⌋`.
pub fn a_floor_formula(n: u32) -> Result<Integer> {
    el_floor(&ELaurent::int_over_e(factorial(n)))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Fixed-point-free permutations of 0..n by backtracking, independent of
    /// the Heap enumerator.
    fn brute(n: usize) -> u64 {
        fn go(pos: usize, n: usize, used: &mut Vec<bool>) -> u64 {
            if pos == n {
                return 1;
            }
            let mut total = 0;
            for v in 0..n {
                if v != pos && !used[v] {
                    used[v] = true;
                    total += go(pos + 1, n, used);
                    used[v] = false;
                }
            }
            total
        }
        go(0, n, &mut vec![false; n])
    }

    fn int(n: i64) -> Integer {
        Integer::from(n)
    }

    #[test]
    fn brute_oracle_values() {
        let counts: Vec<u64> = (0..=7).map(brute).collect();
        assert_eq!(counts, vec![1, 0, 1, 2, 9, 44, 265, 1854]);
    }

    #[test]
    fn d_sum_examples() {
        assert_eq!(d_sum(0).unwrap(), int(1));
        assert_eq!(d_sum(2).unwrap(), int(1));
        assert_eq!(d_sum(5).unwrap(), int(brute(5) as i64));
    }

    #[test]
    fn pair_recurrence_examples() {
        assert_eq!(d_pair_recurrence(0), int(1));
        assert_eq!(d_pair_recurrence(1), int(0));
        assert_eq!(d_pair_recurrence(2), int(1));
        assert_eq!(d_pair_recurrence(6), int(brute(6) as i64));
    }

    #[test]
    fn signed_recurrence_examples() {
        assert_eq!(d_signed_recurrence(1), int(0));
        assert_eq!(d_signed_recurrence(3), int(brute(3) as i64));
        assert_eq!(d_signed_recurrence(4), int(brute(4) as i64));
    }

    #[test]
    fn floor_formula_examples() {
        assert_eq!(d_floor_formula(1).unwrap(), int(0));
        assert_eq!(d_floor_formula(2).unwrap(), int(1));
        assert_eq!(d_floor_formula(9).unwrap(), d_sum(9).unwrap());
        assert_eq!(d_floor_formula(9).unwrap(), int(133496));
    }

    #[test]
    fn floor_formula_differs_from_d0() {
        assert_eq!(d_floor_formula(0).unwrap(), int(0));
        assert_eq!(d_sum(0).unwrap(), int(1));
    }

    #[test]
    fn nearest_formula_examples() {
        assert_eq!(d_nearest_formula(1).unwrap(), int(0));
        assert_eq!(d_nearest_formula(2).unwrap(), int(1));
        assert_eq!(d_nearest_formula(5).unwrap(), int(brute(5) as i64));
        assert!(matches!(d_nearest_formula(0), Err(Error::Precondition(_))));
    }

    #[test]
    fn sum_rule_examples() {
        assert_eq!(sum_rule_lhs(0), int(0));
        assert_eq!(sum_rule_lhs(2), int(2));
        let by_brute: u64 = (0..=4).map(|n| n as u64 * brute(n)).sum();
        assert_eq!(by_brute, 44);
        assert_eq!(sum_rule_lhs(4), int(44));
        assert_eq!(sum_rule_rhs(0).unwrap(), int(0));
        assert_eq!(sum_rule_rhs(2).unwrap(), int(2));
        assert_eq!(sum_rule_rhs(4).unwrap(), int(44));
    }

    #[test]
    fn a_recurrence_examples() {
        assert_eq!(a_recurrence(1).unwrap(), int(0));
        assert_eq!(a_recurrence(3).unwrap(), int(2));
        assert_eq!(a_recurrence(5).unwrap(), int(44));
        assert!(a_recurrence(0).is_err());
    }

    #[test]
    fn a_closed_form_examples() {
        assert_eq!(a_closed_form(1).unwrap(), int(0));
        // 2!·(1/2!) = 1 while ⌊2/e⌋ = 0
        assert_eq!(a_closed_form(2).unwrap(), int(1));
        assert_eq!(a_floor_formula(2).unwrap(), int(0));
        // 24·(1/2 - 1/6 + 1/24) = 12 - 4 + 1 = 9, one more than ⌊24/e⌋ = 8
        assert_eq!(a_closed_form(4).unwrap(), int(9));
        assert_eq!(a_floor_formula(4).unwrap(), int(8));
        assert_eq!(a_recurrence(4).unwrap(), int(8));
    }

    #[test]
    fn a_closed_form_matches_floor_exactly_for_odd_n() {
        for n in 1..=60u32 {
            let closed = a_closed_form(n).unwrap();
            let rec = a_recurrence(n).unwrap();
            assert_eq!(
                rec,
                a_floor_formula(n).unwrap(),
                "recurrence vs floor at {n}"
            );
            if n % 2 == 1 {
                assert_eq!(closed, rec, "N = {n}");
            } else {
                assert_eq!(closed, rec + 1, "N = {n}");
            }
        }
    }

    #[test]
    fn table_invariants_hold_for_each_method() {
        for method in [
            Method::SignedRecurrence,
            Method::PairRecurrence,
            Method::Sum,
            Method::FloorFormula,
        ] {
            let mut t = DerangementTable::new(method);
            t.extend_to(40).unwrap();
            t.check_invariants().unwrap();
            assert_eq!(t.entry(0).unwrap().method, Method::Seed);
            assert_eq!(t.entry(7).unwrap().method, method);
            assert_eq!(t.get(7), Some(&int(1854)));
        }
    }

    #[test]
    fn table_rejects_inconsistent_method() {
        let mut t = DerangementTable::default();
        t.extend_to(5).unwrap();
        t.entries[4].value += 1;
        assert_eq!(t.check_invariants(), Err(Error::TableInconsistent(4)));
        assert_eq!(t.extend_to(6), Err(Error::TableInconsistent(6)));
    }

    #[test]
    fn monotone_growth() {
        // D(n+1) - n·D(n) = D(n) + (-1)^(n+1), which is zero at n = 2
        assert_eq!(derangements(3), derangements(2) * 2u32);
        for n in 3..200u32 {
            assert!(derangements(n + 1) > derangements(n) * n, "n = {n}");
        }
    }

    #[test]
    fn methods_agree_on_wide_range() {
        for n in 1..=120u32 {
            let expected = derangements(n);
            for m in Method::ALL_FORMULAS {
                assert_eq!(m.derangements(n).unwrap(), expected, "{} at {n}", m.name());
            }
        }
    }
}
