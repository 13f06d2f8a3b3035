use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

use super::arith::{checked_lcm, gcd};
use super::AlgebraError;

/// `count` cycles of period `period`, the `C(period,count)` block of a system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Component {
    pub period: u64,
    pub count: u64,
}

/// The periodic part of a finite dynamical system: a multiset of cycles.
///
/// Entries are kept sorted by ascending period with exactly one entry per
/// period and a nonzero count, so structural equality is multiset equality.
/// The empty set is the additive identity and `C(1,1)` the multiplicative one.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleSet {
    entries: Vec<Component>,
}

impl CycleSet {
    pub fn empty() -> Self {
        CycleSet::default()
    }

    /// The single fixed point `C(1,1)`.
    pub fn one() -> Self {
        CycleSet {
            entries: vec![Component {
                period: 1,
                count: 1,
            }],
        }
    }

    /// `count` cycles of length `period`. A zero count gives the empty set.
    pub fn cycles(period: u64, count: u64) -> Result<Self, AlgebraError> {
        Self::canonicalize([(period, count)])
    }

    /// Merges equal periods, drops zero counts and sorts by period.
    pub fn canonicalize<I>(raw: I) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = (u64, u64)>,
    {
        let mut merged: BTreeMap<u64, u64> = BTreeMap::new();
        for (period, count) in raw {
            if period == 0 {
                return Err(AlgebraError::InvalidComponent { period });
            }
            if count == 0 {
                continue;
            }
            let slot = merged.entry(period).or_insert(0);
            *slot = slot.checked_add(count).ok_or(AlgebraError::Overflow)?;
        }
        Ok(Self::from_sorted_map(merged))
    }

    fn from_sorted_map(map: BTreeMap<u64, u64>) -> Self {
        CycleSet {
            entries: map
                .into_iter()
                .filter(|&(_, count)| count > 0)
                .map(|(period, count)| Component { period, count })
                .collect(),
        }
    }

    pub fn components(&self) -> &[Component] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of distinct periods.
    pub fn distinct_periods(&self) -> usize {
        self.entries.len()
    }

    /// Total number of cycles, counted with multiplicity.
    pub fn cycle_count(&self) -> u128 {
        self.entries.iter().map(|c| u128::from(c.count)).sum()
    }

    /// Total number of states in the periodic part.
    pub fn state_count(&self) -> u128 {
        self.entries
            .iter()
            .map(|c| u128::from(c.period) * u128::from(c.count))
            .sum()
    }

    pub fn periods(&self) -> impl Iterator<Item = u64> + '_ {
        self.entries.iter().map(|c| c.period)
    }

    pub fn count_of(&self, period: u64) -> u64 {
        self.entries
            .binary_search_by_key(&period, |c| c.period)
            .map(|i| self.entries[i].count)
            .unwrap_or(0)
    }

    /// Disjoint union.
    pub fn checked_add(&self, other: &CycleSet) -> Result<CycleSet, AlgebraError> {
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.entries, &other.entries);
        while i < a.len() && j < b.len() {
            match a[i].period.cmp(&b[j].period) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let count = a[i]
                        .count
                        .checked_add(b[j].count)
                        .ok_or(AlgebraError::Overflow)?;
                    out.push(Component {
                        period: a[i].period,
                        count,
                    });
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Ok(CycleSet { entries: out })
    }

    /// Synchronous product, extended bilinearly from
    /// `C(p,m) * C(q,n) = C(lcm(p,q), m*n*gcd(p,q))`.
    pub fn multiply(&self, other: &CycleSet) -> Result<CycleSet, AlgebraError> {
        let mut acc: BTreeMap<u64, u64> = BTreeMap::new();
        for a in &self.entries {
            for b in &other.entries {
                let period = checked_lcm(a.period, b.period)?;
                let count = a
                    .count
                    .checked_mul(b.count)
                    .and_then(|c| c.checked_mul(gcd(a.period, b.period)))
                    .ok_or(AlgebraError::Overflow)?;
                let slot = acc.entry(period).or_insert(0);
                *slot = slot.checked_add(count).ok_or(AlgebraError::Overflow)?;
            }
        }
        Ok(Self::from_sorted_map(acc))
    }

    /// `k` disjoint copies of the system.
    pub fn scale(&self, k: u64) -> Result<CycleSet, AlgebraError> {
        if k == 0 {
            return Ok(CycleSet::empty());
        }
        let entries = self
            .entries
            .iter()
            .map(|c| {
                c.count
                    .checked_mul(k)
                    .map(|count| Component {
                        period: c.period,
                        count,
                    })
                    .ok_or(AlgebraError::Overflow)
            })
            .collect::<Result<_, _>>()?;
        Ok(CycleSet { entries })
    }

    /// True when every cycle of `self` also occurs in `other`.
    pub fn is_submultiset_of(&self, other: &CycleSet) -> bool {
        self.entries
            .iter()
            .all(|c| other.count_of(c.period) >= c.count)
    }

    /// Multiset difference `self - other`, `None` unless `other` is contained in `self`.
    pub fn checked_sub(&self, other: &CycleSet) -> Option<CycleSet> {
        if !other.is_submultiset_of(self) {
            return None;
        }
        let entries = self
            .entries
            .iter()
            .filter_map(|c| {
                let count = c.count - other.count_of(c.period);
                (count > 0).then_some(Component {
                    period: c.period,
                    count,
                })
            })
            .collect();
        Some(CycleSet { entries })
    }
}

impl Add<&CycleSet> for &CycleSet {
    type Output = CycleSet;

    /// Panics on multiplicity overflow; use [`CycleSet::checked_add`] to handle it.
    fn add(self, rhs: &CycleSet) -> CycleSet {
        self.checked_add(rhs).expect("cycle multiplicity overflow")
    }
}

impl Add for CycleSet {
    type Output = CycleSet;

    fn add(self, rhs: CycleSet) -> CycleSet {
        &self + &rhs
    }
}

impl fmt::Display for CycleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return f.write_str("0");
        }
        for (i, c) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "C({},{})", c.period, c.count)?;
        }
        Ok(())
    }
}

impl Serialize for CycleSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.entries.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CycleSet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = Vec::<Component>::deserialize(deserializer)?;
        CycleSet::canonicalize(raw.into_iter().map(|c| (c.period, c.count)))
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cs(raw: &[(u64, u64)]) -> CycleSet {
        CycleSet::canonicalize(raw.iter().copied()).unwrap()
    }

    fn pairs(s: &CycleSet) -> Vec<(u64, u64)> {
        s.components().iter().map(|c| (c.period, c.count)).collect()
    }

    #[test]
    fn canonicalize_merges_equal_periods() {
        assert_eq!(pairs(&cs(&[(2, 1), (2, 1)])), vec![(2, 2)]);
        assert!(cs(&[]).is_empty());
        assert_eq!(pairs(&cs(&[(3, 2), (1, 1), (3, 1)])), vec![(1, 1), (3, 3)]);
        assert_eq!(pairs(&cs(&[(4, 0), (5, 2)])), vec![(5, 2)]);
    }

    #[test]
    fn canonicalize_rejects_zero_period() {
        assert_eq!(
            CycleSet::canonicalize([(0, 1)]),
            Err(AlgebraError::InvalidComponent { period: 0 })
        );
    }

    #[test]
    fn add_is_multiset_union() {
        assert_eq!(
            pairs(&(&cs(&[(2, 2)]) + &cs(&[(2, 1), (5, 1)]))),
            vec![(2, 3), (5, 1)]
        );
        let s = cs(&[(3, 4), (7, 1)]);
        assert_eq!(&s + &CycleSet::empty(), s);
        let mixed = cs(&[(1, 1)]) + cs(&[(2, 1)]) + cs(&[(3, 1)]);
        assert_eq!(pairs(&mixed), vec![(1, 1), (2, 1), (3, 1)]);
    }

    #[test]
    fn multiply_follows_gcd_lcm_rule() {
        let m = |a: &[(u64, u64)], b: &[(u64, u64)]| pairs(&cs(a).multiply(&cs(b)).unwrap());
        assert_eq!(m(&[(2, 1)], &[(3, 1)]), vec![(6, 1)]);
        assert_eq!(m(&[(2, 2)], &[(4, 3)]), vec![(4, 12)]);
        assert_eq!(m(&[(1, 1)], &[(5, 4)]), vec![(5, 4)]);
        assert_eq!(m(&[(6, 1)], &[(3, 1)]), vec![(6, 3)]);
        assert!(cs(&[(4, 2)])
            .multiply(&CycleSet::empty())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn multiply_reports_overflow() {
        let big = cs(&[(2, u64::MAX / 2)]);
        assert_eq!(big.multiply(&cs(&[(2, 3)])), Err(AlgebraError::Overflow));
        let coprime = cs(&[(u64::MAX, 1)]);
        assert_eq!(
            coprime.multiply(&cs(&[(2, 1)])),
            Err(AlgebraError::Overflow)
        );
    }

    #[test]
    fn scale_replicates_components() {
        assert_eq!(pairs(&cs(&[(2, 1)]).scale(3).unwrap()), vec![(2, 3)]);
        let s = cs(&[(2, 2), (9, 1)]);
        assert_eq!(s.scale(1).unwrap(), s);
        assert!(cs(&[(7, 5)]).scale(0).unwrap().is_empty());
    }

    #[test]
    fn display_uses_ascii_notation() {
        assert_eq!(cs(&[(5, 1), (2, 3)]).to_string(), "C(2,3) + C(5,1)");
        assert_eq!(CycleSet::empty().to_string(), "0");
    }

    #[test]
    fn submultiset_and_difference() {
        let big = cs(&[(2, 3), (5, 1)]);
        let small = cs(&[(2, 1)]);
        assert!(small.is_submultiset_of(&big));
        assert_eq!(
            pairs(&big.checked_sub(&small).unwrap()),
            vec![(2, 2), (5, 1)]
        );
        assert_eq!(big.checked_sub(&cs(&[(3, 1)])), None);
    }
}
