use std::collections::btree_set;
use std::collections::BTreeSet;

use super::CycleSet;

/// A deduplicated set of systems, iterated in canonical order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SolutionSet(BTreeSet<CycleSet>);

impl SolutionSet {
    pub fn new() -> Self {
        SolutionSet::default()
    }

    pub fn insert(&mut self, value: CycleSet) -> bool {
        self.0.insert(value)
    }

    pub fn contains(&self, value: &CycleSet) -> bool {
        self.0.contains(value)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> btree_set::Iter<'_, CycleSet> {
        self.0.iter()
    }

    pub fn union(&self, other: &SolutionSet) -> SolutionSet {
        SolutionSet(self.0.union(&other.0).cloned().collect())
    }

    pub fn intersection(&self, other: &SolutionSet) -> SolutionSet {
        SolutionSet(self.0.intersection(&other.0).cloned().collect())
    }

    pub fn retain(&mut self, f: impl FnMut(&CycleSet) -> bool) {
        self.0.retain(f)
    }

    /// `{a + b : a in self, b in other}`; empty as soon as either side is.
    pub fn sum_product(&self, other: &SolutionSet) -> SolutionSet {
        let mut out = BTreeSet::new();
        for a in &self.0 {
            for b in &other.0 {
                out.insert(a + b);
            }
        }
        SolutionSet(out)
    }
}

impl FromIterator<CycleSet> for SolutionSet {
    fn from_iter<I: IntoIterator<Item = CycleSet>>(iter: I) -> Self {
        SolutionSet(iter.into_iter().collect())
    }
}

impl Extend<CycleSet> for SolutionSet {
    fn extend<I: IntoIterator<Item = CycleSet>>(&mut self, iter: I) {
        self.0.extend(iter)
    }
}

impl IntoIterator for SolutionSet {
    type Item = CycleSet;
    type IntoIter = btree_set::IntoIter<CycleSet>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a> IntoIterator for &'a SolutionSet {
    type Item = &'a CycleSet;
    type IntoIter = btree_set::Iter<'a, CycleSet>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}
