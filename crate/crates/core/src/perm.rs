//! Brute-force ground truth: Heap's interchange enumeration of all
//! permutations, fixed-point counting, and enumerated D(n) and S_p.

use crate::error::{Error, Result};
use crate::exact::Integer;
use std::fmt;

/// Largest n enumerated by default (12! ≈ 4.8·10⁸ permutations).
pub const DEFAULT_ENUMERATION_CAP: usize = 12;

/// Largest p accepted by [`brute_sum_rule`].
pub const SUM_RULE_CAP: usize = 10;

/// A bijection of `0..n`, stored as its image sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn fixed_point_count(&self) -> usize {
        fixed_point_count(self)
    }

    /// Positions at which `self` and `other` differ.
    pub fn differing_positions(&self, other: &Permutation) -> Vec<usize> {
        self.0
            .iter()
            .zip(&other.0)
            .enumerate()
            .filter(|(_, (a, b))| a != b)
            .map(|(i, _)| i)
            .collect()
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(mapping: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; mapping.len()];
        for &v in &mapping {
            if v >= mapping.len() || std::mem::replace(&mut seen[v], true) {
                return Err(Error::Precondition(format!(
                    "{mapping:?} is not a permutation of 0..{}",
                    mapping.len()
                )));
            }
        }
        Ok(Permutation(mapping))
    }
}

/// One-based, e.g. `(2 1 4 3)`.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| (v + 1).to_string()).collect();
        write!(f, "({})", parts.join(" "))
    }
}

pub fn fixed_point_count(sigma: &Permutation) -> usize {
    sigma.0.iter().enumerate().filter(|&(i, &v)| i == v).count()
}

/// Iterative Heap's algorithm. Yields `n!` permutations starting from the
/// identity; consecutive items differ by one transposition.
#[derive(Debug, Clone)]
pub struct HeapPermutations {
    current: Vec<usize>,
    counters: Vec<usize>,
    index: usize,
    started: bool,
    done: bool,
    swaps: u64,
}

impl HeapPermutations {
    fn new(n: usize) -> Self {
        HeapPermutations {
            current: (0..n).collect(),
            counters: vec![0; n],
            index: 1,
            started: false,
            done: false,
            swaps: 0,
        }
    }

    /// Transpositions performed so far.
    pub fn swaps(&self) -> u64 {
        self.swaps
    }
}

impl Iterator for HeapPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(Permutation(self.current.clone()));
        }
        let n = self.current.len();
        while self.index < n {
            let i = self.index;
            if self.counters[i] < i {
                let j = if i.is_multiple_of(2) { 0 } else { self.counters[i] };
                self.current.swap(j, i);
                self.swaps += 1;
                self.counters[i] += 1;
                self.index = 1;
                return Some(Permutation(self.current.clone()));
            }
            self.counters[i] = 0;
            self.index += 1;
        }
        self.done = true;
        None
    }
}

/// All permutations of `0..n` under the default cap.
pub fn heap_permutations(n: usize) -> Result<HeapPermutations> {
    heap_permutations_capped(n, DEFAULT_ENUMERATION_CAP)
}

pub fn heap_permutations_capped(n: usize, cap: usize) -> Result<HeapPermutations> {
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    Ok(HeapPermutations::new(n))
}

/// Number of fixed-point-free permutations, by full enumeration.
pub fn brute_derangement_count(n: usize) -> Result<Integer> {
    brute_derangement_count_capped(n, DEFAULT_ENUMERATION_CAP)
}

pub fn brute_derangement_count_capped(n: usize, cap: usize) -> Result<Integer> {
    let count = heap_permutations_capped(n, cap)?
        .filter(|p| fixed_point_count(p) == 0)
        .count();
    Ok(Integer::from(count))
}

/// `Σ_{n=0..p} n · brute_derangement_count(n)`, for `p <= 10`.
pub fn brute_sum_rule(p: usize) -> Result<Integer> {
    if p > SUM_RULE_CAP {
        return Err(Error::CapExceeded {
            n: p,
            cap: SUM_RULE_CAP,
        });
    }
    (0..=p).try_fold(Integer::from(0), |acc, n| {
        Ok(acc + brute_derangement_count(n)? * n)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn perm(v: &[usize]) -> Permutation {
        Permutation::try_from(v.to_vec()).unwrap()
    }

    #[test]
    fn fixed_points() {
        assert_eq!(fixed_point_count(&Permutation::identity(4)), 4);
        assert_eq!(fixed_point_count(&perm(&[1, 0, 3, 2])), 0);
        assert_eq!(fixed_point_count(&perm(&[0, 2, 1])), 1);
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::try_from(vec![0, 0, 1]).is_err());
        assert!(Permutation::try_from(vec![0, 3, 1]).is_err());
        assert!(Permutation::try_from(vec![]).is_ok());
    }

    #[test]
    fn empty_permutation() {
        let all: Vec<_> = heap_permutations(0).unwrap().collect();
        assert_eq!(all, vec![Permutation::identity(0)]);
    }

    #[test]
    fn three_elements() {
        let mut it = heap_permutations(3).unwrap();
        let all: Vec<_> = it.by_ref().collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all.iter().collect::<HashSet<_>>().len(), 6);
        assert_eq!(it.swaps(), 5);
    }

    #[test]
    fn completeness_and_minimal_change() {
        for n in 0..=8usize {
            let mut it = heap_permutations(n).unwrap();
            let all: Vec<_> = it.by_ref().collect();
            let expected: usize = (1..=n).product();
            assert_eq!(all.len(), expected, "n = {n}");
            let seen: HashSet<_> = all.iter().collect();
            assert_eq!(seen.len(), expected, "n = {n}");
            for p in &all {
                let mut sorted = p.as_slice().to_vec();
                sorted.sort_unstable();
                assert_eq!(sorted, (0..n).collect::<Vec<_>>());
            }
            for w in all.windows(2) {
                assert_eq!(w[0].differing_positions(&w[1]).len(), 2, "n = {n}");
            }
            assert_eq!(it.swaps(), expected.saturating_sub(1) as u64);
        }
    }

    #[test]
    fn eight_elements_count() {
        assert_eq!(heap_permutations(8).unwrap().count(), 40320);
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(
            heap_permutations(13).unwrap_err(),
            Error::CapExceeded { n: 13, cap: 12 }
        );
        assert!(heap_permutations_capped(5, 4).is_err());
        assert!(brute_sum_rule(11).is_err());
    }

    #[test]
    fn brute_counts() {
        let counts: Vec<_> = (0..=7)
            .map(|n| brute_derangement_count(n).unwrap())
            .collect();
        let expected: Vec<Integer> = [1, 0, 1, 2, 9, 44, 265, 1854]
            .into_iter()
            .map(Integer::from)
            .collect();
        assert_eq!(counts, expected);
    }

    #[test]
    fn brute_sums() {
        assert_eq!(brute_sum_rule(0).unwrap(), Integer::from(0));
        assert_eq!(brute_sum_rule(2).unwrap(), Integer::from(2));
        assert_eq!(brute_sum_rule(5).unwrap(), Integer::from(264));
    }

    #[test]
    fn displays_one_based() {
        assert_eq!(perm(&[1, 0, 2]).to_string(), "(2 1 3)");
    }
}
