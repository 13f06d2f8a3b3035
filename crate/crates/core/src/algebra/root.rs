use super::{AlgebraError, CycleSet, SolutionSet};

/// Default number of candidate roots examined before giving up.
pub const DEFAULT_ROOT_BUDGET: u64 = 1_000_000;

impl CycleSet {
    /// Every `r` with `r^exp == self`, searched exhaustively.
    ///
    /// A cycle of period `p` in `r` yields `C(p, p^(exp-1))` in `r^exp`, so every
    /// period of `r` is a period of `self`, and `m` copies of it force at least
    /// `m^exp * p^(exp-1)` cycles of that period. Candidates are the count
    /// vectors inside those bounds with at most `self.cycle_count()` cycles.
    /// Each power evaluation is charged against `budget`.
    pub fn nth_root(&self, exp: u32, budget: u64) -> Result<SolutionSet, AlgebraError> {
        if exp == 0 {
            return Err(AlgebraError::InvalidExponent);
        }
        if exp == 1 || self.is_empty() {
            return Ok([self.clone()].into_iter().collect());
        }

        let periods: Vec<u64> = self.periods().collect();
        let bounds: Vec<u64> = self
            .components()
            .iter()
            .map(|c| max_root_count(c.period, c.count, exp))
            .collect();
        let max_cycles = self.cycle_count();

        let mut roots = SolutionSet::new();
        let mut counts = vec![0u64; periods.len()];
        let mut spent = 0u64;
        loop {
            // odometer step
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
                break;
            }
            let total: u128 = counts.iter().map(|&c| u128::from(c)).sum();
            if total > max_cycles {
                continue;
            }
            spent += 1;
            if spent > budget {
                return Err(AlgebraError::BudgetExhausted { budget });
            }
            let candidate =
                CycleSet::canonicalize(periods.iter().copied().zip(counts.iter().copied()))?;
            match candidate.power(exp) {
                Ok(value) if &value == self => {
                    roots.insert(candidate);
                }
                Ok(_) | Err(AlgebraError::Overflow) => {}
                Err(e) => return Err(e),
            }
        }
        Ok(roots)
    }
}

/// Largest `m` with `m^exp * period^(exp-1) <= count`.
fn max_root_count(period: u64, count: u64, exp: u32) -> u64 {
    let floor = u128::from(period).saturating_pow(exp - 1);
    let fits = |m: u64| {
        u128::from(m)
            .checked_pow(exp)
            .and_then(|v| v.checked_mul(floor))
            .is_some_and(|v| v <= u128::from(count))
    };
    let (mut lo, mut hi) = (0u64, count);
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cs(raw: &[(u64, u64)]) -> CycleSet {
        CycleSet::canonicalize(raw.iter().copied()).unwrap()
    }

    fn roots(v: &CycleSet, n: u32) -> Vec<CycleSet> {
        v.nth_root(n, DEFAULT_ROOT_BUDGET)
            .unwrap()
            .into_iter()
            .collect()
    }

    #[test]
    fn square_root_recovers_base() {
        assert_eq!(
            roots(&cs(&[(1, 1), (2, 4)]), 2),
            vec![cs(&[(1, 1), (2, 1)])]
        );
    }

    #[test]
    fn first_root_is_identity() {
        let s = cs(&[(3, 2), (5, 7)]);
        assert_eq!(roots(&s, 1), vec![s]);
    }

    #[test]
    fn lone_two_cycle_has_no_square_root() {
        assert!(roots(&cs(&[(2, 1)]), 2).is_empty());
    }

    #[test]
    fn empty_and_unit_roots() {
        assert_eq!(roots(&CycleSet::empty(), 3), vec![CycleSet::empty()]);
        assert_eq!(roots(&CycleSet::one(), 4), vec![CycleSet::one()]);
    }

    #[test]
    fn zero_exponent_is_rejected() {
        assert_eq!(
            CycleSet::one().nth_root(0, 10),
            Err(AlgebraError::InvalidExponent)
        );
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let v = cs(&[(1, 100), (2, 400), (3, 900)]);
        assert_eq!(
            v.nth_root(2, 5),
            Err(AlgebraError::BudgetExhausted { budget: 5 })
        );
    }

    #[test]
    fn count_bound() {
        assert_eq!(max_root_count(2, 4, 2), 1);
        assert_eq!(max_root_count(2, 1, 2), 0);
        assert_eq!(max_root_count(1, 27, 3), 3);
        assert_eq!(max_root_count(3, 7, 1), 7);
    }
}
