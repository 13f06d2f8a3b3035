//! Change-making over divisor coin systems.

use std::fmt;

use serde::Serialize;

/// Distinct positive coin values, largest first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoinSet(Vec<u64>);

impl CoinSet {
    /// Sorts descending and removes duplicates and zeros.
    pub fn new(mut coins: Vec<u64>) -> Self {
        coins.retain(|&c| c > 0);
        coins.sort_unstable_by(|a, b| b.cmp(a));
        coins.dedup();
        CoinSet(coins)
    }

    pub fn coins(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, coin: u64) -> bool {
        self.0.contains(&coin)
    }

    /// The same coins with `coin` removed.
    pub fn without(&self, coin: u64) -> CoinSet {
        CoinSet(self.0.iter().copied().filter(|&c| c != coin).collect())
    }
}

/// A multiset of parts, stored in descending order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Partition(Vec<u64>);

impl Partition {
    pub fn new(mut parts: Vec<u64>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn parts(&self) -> &[u64] {
        &self.0
    }

    pub fn amount(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("]")
    }
}

/// All divisors of `q`, largest first.
pub fn divisors(q: u64) -> CoinSet {
    assert!(q > 0, "divisors of zero");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= q {
        if q.is_multiple_of(d) {
            small.push(d);
            if d != q / d {
                large.push(q / d);
            }
        }
        d += 1;
    }
    large.extend(small.into_iter().rev());
    CoinSet(large)
}

/// Minimum-cardinality way to pay `amount` with `coins`.
///
/// Exact dynamic program; greedy change-making is not optimal for every
/// divisor set. Among optimal partitions the lexicographically greatest
/// (descending parts) is returned. `None` when `amount` cannot be paid.
pub fn mcda(amount: u64, coins: &CoinSet) -> Option<Partition> {
    let amount = usize::try_from(amount).ok()?;
    let cs: Vec<usize> = coins
        .0
        .iter()
        .filter_map(|&c| usize::try_from(c).ok())
        .collect();
    if cs.is_empty() {
        return None;
    }
    // fewest[i][a]: fewest coins for `a` using cs[i..] (all coins <= cs[i])
    let k = cs.len();
    let mut fewest = vec![vec![u32::MAX; amount + 1]; k + 1];
    fewest[k][0] = 0;
    for i in (0..k).rev() {
        fewest[i][0] = 0;
        for a in 1..=amount {
            let skip = fewest[i + 1][a];
            let take = if cs[i] <= a && fewest[i][a - cs[i]] != u32::MAX {
                fewest[i][a - cs[i]] + 1
            } else {
                u32::MAX
            };
            fewest[i][a] = skip.min(take);
        }
    }
    if fewest[0][amount] == u32::MAX {
        return None;
    }
    let mut parts = Vec::with_capacity(fewest[0][amount] as usize);
    let (mut a, mut i) = (amount, 0);
    while a > 0 {
        let need = fewest[i][a];
        let j = (i..k)
            .find(|&j| {
                cs[j] <= a && fewest[j][a - cs[j]] != u32::MAX && fewest[j][a - cs[j]] + 1 == need
            })
            .expect("optimal table admits a reconstruction");
        parts.push(cs[j] as u64);
        a -= cs[j];
        i = j;
    }
    Some(Partition(parts))
}

/// Every multiset of `coins` summing to `amount`, descending-lexicographic.
pub fn all_partitions(amount: u64, coins: &CoinSet) -> Vec<Partition> {
    fn go(rest: u64, coins: &[u64], current: &mut Vec<u64>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(current.clone()));
            return;
        }
        for (i, &c) in coins.iter().enumerate() {
            if c <= rest {
                current.push(c);
                go(rest - c, &coins[i..], current, out);
                current.pop();
            }
        }
    }
    let mut out = Vec::new();
    if amount > 0 {
        go(amount, &coins.0, &mut Vec::new(), &mut out);
    }
    out
}

/// Number of partitions of `amount` into `coins`, by the classic counting recurrence.
pub fn count_partitions(amount: u64, coins: &CoinSet) -> u128 {
    let amount = amount as usize;
    let mut ways = vec![0u128; amount + 1];
    ways[0] = 1;
    for &c in &coins.0 {
        let c = c as usize;
        for a in c..=amount {
            ways[a] += ways[a - c];
        }
    }
    if amount == 0 {
        0
    } else {
        ways[amount]
    }
}
