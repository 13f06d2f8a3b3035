use std::collections::BTreeMap;

use super::arith::{binomial, checked_lcm, multinomial};
use super::{AlgebraError, CycleSet};

/// Largest number of compositions [`CycleSet::power_closed_form`] will enumerate.
pub const MAX_CLOSED_FORM_TERMS: u128 = 1 << 16;

impl CycleSet {
    /// `self^exp`, by the closed form when it has at most
    /// [`MAX_CLOSED_FORM_TERMS`] terms and by square-and-multiply otherwise.
    pub fn power(&self, exp: u32) -> Result<CycleSet, AlgebraError> {
        match self.power_closed_form(exp) {
            Err(AlgebraError::ExpansionTooLarge { .. }) => self.power_by_squaring(exp),
            other => other,
        }
    }

    /// `self^exp` by the multinomial closed form.
    ///
    /// The system is expanded into single cycles `C(p_1,1) + ... + C(p_m,1)`.
    /// Each pure power contributes `C(p_i, p_i^(exp-1))`; every other
    /// composition `k_1 + ... + k_m = exp` contributes
    /// `multinomial(exp; k) * C(l, (prod p_t) / l * prod p_t^(k_t - 1))` where
    /// the products and `l = lcm` range over the indices with `k_t != 0`.
    /// For two active indices `(prod p_t) / l` is their gcd.
    ///
    /// The number of compositions is `binom(exp + m - 1, m - 1)`; above
    /// [`MAX_CLOSED_FORM_TERMS`] this returns `ExpansionTooLarge`.
    pub fn power_closed_form(&self, exp: u32) -> Result<CycleSet, AlgebraError> {
        if exp == 0 {
            return Ok(CycleSet::one());
        }
        if exp == 1 || self.is_empty() {
            return Ok(self.clone());
        }

        let m = self.cycle_count();
        let terms = u64::try_from(m - 1)
            .ok()
            .and_then(|k| binomial(u64::from(exp) + k, k))
            .unwrap_or(u128::MAX);
        if terms > MAX_CLOSED_FORM_TERMS {
            return Err(AlgebraError::ExpansionTooLarge { terms });
        }
        let expanded: Vec<u64> = self
            .components()
            .iter()
            .flat_map(|c| std::iter::repeat_n(c.period, c.count as usize))
            .collect();
        let mut acc: BTreeMap<u64, u128> = BTreeMap::new();
        let mut push = |period: u64, count: u128| -> Result<(), AlgebraError> {
            let slot = acc.entry(period).or_insert(0);
            *slot = slot.checked_add(count).ok_or(AlgebraError::Overflow)?;
            Ok(())
        };

        for &p in &expanded {
            push(
                p,
                u128::from(p)
                    .checked_pow(exp - 1)
                    .ok_or(AlgebraError::Overflow)?,
            )?;
        }

        let mut ks = vec![0u32; expanded.len()];
        let mut compositions = WeakCompositions::new(exp, expanded.len());
        while compositions.next_into(&mut ks) {
            if ks.contains(&exp) {
                continue;
            }
            let coefficient = multinomial(&ks).ok_or(AlgebraError::Overflow)?;
            let (period, count) = mixed_term(&expanded, &ks)?;
            push(
                period,
                coefficient
                    .checked_mul(count)
                    .ok_or(AlgebraError::Overflow)?,
            )?;
        }

        let raw = acc
            .into_iter()
            .map(|(p, c)| {
                u64::try_from(c)
                    .map(|c| (p, c))
                    .map_err(|_| AlgebraError::Overflow)
            })
            .collect::<Result<Vec<_>, _>>()?;
        CycleSet::canonicalize(raw)
    }

    fn power_by_squaring(&self, mut exp: u32) -> Result<CycleSet, AlgebraError> {
        let mut base = self.clone();
        let mut acc = CycleSet::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.multiply(&base)?;
            }
            exp >>= 1;
            if exp > 0 {
                base = base.multiply(&base)?;
            }
        }
        Ok(acc)
    }
}

/// Period and cycle count of `prod_t C(p_t,1)^k_t` over the indices with `k_t != 0`.
fn mixed_term(periods: &[u64], ks: &[u32]) -> Result<(u64, u128), AlgebraError> {
    let mut lcm = 1u64;
    let mut states: u128 = 1;
    for (&p, &k) in periods.iter().zip(ks) {
        if k == 0 {
            continue;
        }
        lcm = checked_lcm(lcm, p)?;
        states = u128::from(p)
            .checked_pow(k)
            .and_then(|s| states.checked_mul(s))
            .ok_or(AlgebraError::Overflow)?;
    }
    Ok((lcm, states / u128::from(lcm)))
}

/// Lexicographic enumeration of the weak compositions of `total` into `parts` parts.
pub(crate) struct WeakCompositions {
    total: u32,
    current: Vec<u32>,
    started: bool,
    done: bool,
}

impl WeakCompositions {
    pub(crate) fn new(total: u32, parts: usize) -> Self {
        let mut current = vec![0; parts];
        let done = parts == 0 && total > 0;
        if let Some(last) = current.last_mut() {
            *last = total;
        }
        WeakCompositions {
            total,
            current,
            started: false,
            done,
        }
    }

    /// Writes the next composition into `out`; returns false when exhausted.
    pub(crate) fn next_into(&mut self, out: &mut [u32]) -> bool {
        if self.done {
            return false;
        }
        if !self.started {
            self.started = true;
            out.copy_from_slice(&self.current);
            return true;
        }
        let n = self.current.len();
        // the rightmost nonzero entry left of the tail moves one unit left
        let Some(pivot) = (0..n.saturating_sub(1))
            .rev()
            .find(|&i| self.current[i + 1..].iter().any(|&v| v > 0))
        else {
            self.done = true;
            return false;
        };
        let tail: u32 = self.current[pivot + 1..].iter().sum();
        self.current[pivot] += 1;
        for v in &mut self.current[pivot + 1..] {
            *v = 0;
        }
        self.current[n - 1] = tail - 1;
        debug_assert_eq!(self.current.iter().sum::<u32>(), self.total);
        out.copy_from_slice(&self.current);
        true
    }
}
