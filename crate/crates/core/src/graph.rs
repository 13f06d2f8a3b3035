//! Explicit functional graphs: ground truth for the cycle arithmetic.
//!
//! A finite dynamical system is a map `next: [0, size) -> [0, size)`. These
//! routines build, combine and decompose such maps state by state. They are
//! slow on purpose and share no code path with [`crate::algebra`] beyond the
//! final [`CycleSet`] they report.

use std::time::Instant;

use thiserror::Error;

use crate::algebra::{CycleSet, SolutionSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("state {state} maps to {target}, outside a graph of {size} states")]
    OutOfRange {
        state: usize,
        target: usize,
        size: usize,
    },
    #[error(
        "cycle graphs need a positive period and count, got period {period} and count {count}"
    )]
    InvalidCycle { period: usize, count: usize },
    #[error("state count overflow")]
    Overflow,
}

/// A total next-state map over `0..size`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FunctionGraph {
    next: Vec<usize>,
}

impl FunctionGraph {
    pub fn new(next: Vec<usize>) -> Result<Self, GraphError> {
        let size = next.len();
        if let Some((state, &target)) = next.iter().enumerate().find(|(_, &t)| t >= size) {
            return Err(GraphError::OutOfRange {
                state,
                target,
                size,
            });
        }
        Ok(FunctionGraph { next })
    }

    pub fn empty() -> Self {
        FunctionGraph::default()
    }

    /// `count` disjoint cycles of length `period`; cycle `c` uses states
    /// `c*period .. (c+1)*period`.
    pub fn cycles(period: usize, count: usize) -> Result<Self, GraphError> {
        if period == 0 || count == 0 {
            return Err(GraphError::InvalidCycle { period, count });
        }
        let size = period.checked_mul(count).ok_or(GraphError::Overflow)?;
        let next = (0..size)
            .map(|s| {
                let base = s - s % period;
                base + (s - base + 1) % period
            })
            .collect();
        Ok(FunctionGraph { next })
    }

    /// The disjoint union of cycles described by `set`.
    pub fn from_cycle_set(set: &CycleSet) -> Result<Self, GraphError> {
        set.components()
            .iter()
            .try_fold(FunctionGraph::empty(), |g, c| {
                let period = usize::try_from(c.period).map_err(|_| GraphError::Overflow)?;
                let count = usize::try_from(c.count).map_err(|_| GraphError::Overflow)?;
                Ok(g.sum(&FunctionGraph::cycles(period, count)?))
            })
    }

    pub fn size(&self) -> usize {
        self.next.len()
    }

    pub fn next(&self, state: usize) -> usize {
        self.next[state]
    }

    /// Disjoint union; states of `other` are shifted by `self.size()`.
    pub fn sum(&self, other: &FunctionGraph) -> FunctionGraph {
        let offset = self.size();
        let mut next = self.next.clone();
        next.extend(other.next.iter().map(|&t| t + offset));
        FunctionGraph { next }
    }

    /// Cartesian product `(x, y) -> (f(x), g(y))`, state `(x, y)` at index `x * other.size() + y`.
    pub fn product(&self, other: &FunctionGraph) -> Result<FunctionGraph, GraphError> {
        let width = other.size();
        let size = self.size().checked_mul(width).ok_or(GraphError::Overflow)?;
        let mut next = Vec::with_capacity(size);
        for x in 0..self.size() {
            for y in 0..width {
                next.push(self.next[x] * width + other.next[y]);
            }
        }
        Ok(FunctionGraph { next })
    }

    pub fn is_bijective(&self) -> bool {
        let mut hit = vec![false; self.size()];
        for &t in &self.next {
            if std::mem::replace(&mut hit[t], true) {
                return false;
            }
        }
        true
    }

    /// Periods of all cycles; transient states are ignored.
    pub fn cycle_structure(&self) -> CycleSet {
        if self.is_bijective() {
            self.permutation_cycles()
        } else {
            self.periodic_orbits()
        }
    }

    fn permutation_cycles(&self) -> CycleSet {
        let mut seen = vec![false; self.size()];
        let mut lengths = Vec::new();
        for start in 0..self.size() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut s = start;
            while !seen[s] {
                seen[s] = true;
                s = self.next[s];
                len += 1;
            }
            lengths.push((len, 1));
        }
        CycleSet::canonicalize(lengths).expect("cycle lengths are positive")
    }

    fn periodic_orbits(&self) -> CycleSet {
        const NEW: u8 = 0;
        const ACTIVE: u8 = 1;
        const DONE: u8 = 2;
        let mut state = vec![NEW; self.size()];
        let mut lengths = Vec::new();
        let mut path = Vec::new();
        for start in 0..self.size() {
            if state[start] != NEW {
                continue;
            }
            path.clear();
            let mut s = start;
            while state[s] == NEW {
                state[s] = ACTIVE;
                path.push(s);
                s = self.next[s];
            }
            if state[s] == ACTIVE {
                let pos = path
                    .iter()
                    .position(|&v| v == s)
                    .expect("active state is on the path");
                lengths.push(((path.len() - pos) as u64, 1));
            }
            for &v in &path {
                state[v] = DONE;
            }
        }
        CycleSet::canonicalize(lengths).expect("cycle lengths are positive")
    }
}

/// All `X` with `C(p,1) * X = C(q,n)`, by exhaustive search.
///
/// Candidate periods are the divisors `s` of `q` with `lcm(p,s) = q`; each
/// copy of `C(s,1)` yields `gcd(p,s)` cycles, so its count is at most
/// `n / gcd(p,s)`. Every count vector in that box is assembled and checked
/// by multiplying it out. The box has `prod (n / gcd(p,s) + 1)` points, which
/// stays below a few million for `n, q <= 30`.
pub fn brute_force_simple_solutions(p: u64, n: u64, q: u64) -> SolutionSet {
    brute_force_until(p, n, q, None).expect("no deadline given")
}

/// As [`brute_force_simple_solutions`], giving up with `None` once `deadline` passes.
pub fn brute_force_until(p: u64, n: u64, q: u64, deadline: Option<Instant>) -> Option<SolutionSet> {
    assert!(p > 0 && n > 0 && q > 0, "parameters must be positive");
    let target = CycleSet::cycles(q, n).expect("q > 0");
    let coefficient = CycleSet::cycles(p, 1).expect("p > 0");
    let candidates: Vec<u64> = (1..=q)
        .filter(|s| q.is_multiple_of(*s))
        .filter(|&s| num_integer::lcm(p, s) == q)
        .collect();
    let bounds: Vec<u64> = candidates
        .iter()
        .map(|&s| n / num_integer::gcd(p, s))
        .collect();

    let mut solutions = SolutionSet::new();
    let mut counts = vec![0u64; candidates.len()];
    let mut steps = 0u64;
    loop {
        let x = CycleSet::canonicalize(candidates.iter().copied().zip(counts.iter().copied()))
            .expect("candidate periods are positive");
        if coefficient.multiply(&x).ok().as_ref() == Some(&target) {
            solutions.insert(x);
        }
        steps += 1;
        if steps.is_multiple_of(4096) && deadline.is_some_and(|d| Instant::now() >= d) {
            return None;
        }
        let mut i = 0;
        while i < counts.len() {
            if counts[i] < bounds[i] {
                counts[i] += 1;
                break;
            }
            counts[i] = 0;
            i += 1;
        }
        if i == counts.len() {
            return Some(solutions);
        }
    }
}

/// Number of count vectors [`brute_force_simple_solutions`] examines.
pub fn brute_force_search_size(p: u64, n: u64, q: u64) -> u128 {
    (1..=q)
        .filter(|s| q.is_multiple_of(*s) && num_integer::lcm(p, *s) == q)
        .map(|s| u128::from(n / num_integer::gcd(p, s)) + 1)
        .product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cs(raw: &[(u64, u64)]) -> CycleSet {
        CycleSet::canonicalize(raw.iter().copied()).unwrap()
    }

    fn one_two_three() -> FunctionGraph {
        FunctionGraph::cycles(1, 1)
            .unwrap()
            .sum(&FunctionGraph::cycles(2, 1).unwrap())
            .sum(&FunctionGraph::cycles(3, 1).unwrap())
    }

    #[test]
    fn cycle_graph_shapes() {
        let loop1 = FunctionGraph::cycles(1, 1).unwrap();
        assert_eq!(loop1.size(), 1);
        assert_eq!(loop1.next(0), 0);
        let tri = FunctionGraph::cycles(3, 1).unwrap();
        assert_eq!((tri.next(0), tri.next(1), tri.next(2)), (1, 2, 0));
        let pairs = FunctionGraph::cycles(2, 3).unwrap();
        assert_eq!(pairs.size(), 6);
        assert_eq!(pairs.cycle_structure(), cs(&[(2, 3)]));
        assert!(FunctionGraph::cycles(0, 1).is_err());
        assert!(FunctionGraph::cycles(2, 0).is_err());
    }

    #[test]
    fn out_of_range_target_is_rejected() {
        assert_eq!(
            FunctionGraph::new(vec![0, 5]),
            Err(GraphError::OutOfRange {
                state: 1,
                target: 5,
                size: 2
            })
        );
    }

    #[test]
    fn sums() {
        let g = FunctionGraph::cycles(1, 1)
            .unwrap()
            .sum(&FunctionGraph::cycles(2, 1).unwrap());
        assert_eq!(g.size(), 3);
        assert_eq!(g.cycle_structure(), cs(&[(1, 1), (2, 1)]));
        let tri = FunctionGraph::cycles(3, 1).unwrap();
        assert_eq!(tri.sum(&FunctionGraph::empty()), tri);
        assert_eq!(
            one_two_three().cycle_structure(),
            cs(&[(1, 1), (2, 1), (3, 1)])
        );
    }

    #[test]
    fn products() {
        let c = |p| FunctionGraph::cycles(p, 1).unwrap();
        let g = c(2).product(&c(3)).unwrap();
        assert_eq!(g.size(), 6);
        assert_eq!(g.cycle_structure(), cs(&[(6, 1)]));
        let g = c(2).product(&c(4)).unwrap();
        assert_eq!(g.size(), 8);
        assert_eq!(g.cycle_structure(), cs(&[(4, 2)]));
        assert_eq!(
            one_two_three().product(&c(1)).unwrap().cycle_structure(),
            one_two_three().cycle_structure()
        );
        assert_eq!(
            c(6).product(&c(6)).unwrap().cycle_structure(),
            cs(&[(6, 6)])
        );
    }

    #[test]
    fn empty_graph_has_no_cycles() {
        assert!(FunctionGraph::empty().cycle_structure().is_empty());
    }

    #[test]
    fn transients_are_skipped() {
        // 0 -> 1 -> 2 -> 1, 3 -> 3, 4 -> 0
        let g = FunctionGraph::new(vec![1, 2, 1, 3, 0]).unwrap();
        assert!(!g.is_bijective());
        assert_eq!(g.cycle_structure(), cs(&[(1, 1), (2, 1)]));
    }

    #[test]
    fn brute_force_reference_cases() {
        assert_eq!(brute_force_simple_solutions(6, 6, 6).len(), 8);
        assert!(brute_force_simple_solutions(2, 5, 4).is_empty());
        let t3 = brute_force_simple_solutions(2, 12, 6);
        let expected: SolutionSet = [
            cs(&[(3, 4), (6, 4)]),
            cs(&[(3, 12)]),
            cs(&[(6, 6)]),
            cs(&[(3, 6), (6, 3)]),
            cs(&[(6, 2), (3, 8)]),
            cs(&[(3, 2), (6, 5)]),
            cs(&[(6, 1), (3, 10)]),
        ]
        .into_iter()
        .collect();
        assert_eq!(t3, expected);
    }

    #[test]
    fn brute_force_respects_deadline() {
        let past = Instant::now();
        assert!(brute_force_until(12, 60, 12, Some(past)).is_none());
        assert_eq!(brute_force_search_size(6, 6, 6), 7 * 4 * 3 * 2);
    }
}
