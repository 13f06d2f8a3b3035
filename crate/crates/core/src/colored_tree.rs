//! Enumeration of all solutions of `C(p,1) * X = C(q,n)` with a colored
//! decomposition tree.
//!
//! Node `m` stands for the node equation `C(p,1) * X = C(q,m)`. A cycle of
//! period `s` in `X` contributes `gcd(p,s)` cycles of period `lcm(p,s)`, so a
//! solution of the node equation is a multiset of node weights `w` summing to
//! `m`, where weight `w` is realised by the single cycle `C(q*w/p, 1)` (the
//! node solution of `w`). The tree splits every value into smaller divisors of
//! `q`: first with the optimal change-making split, then with every partition
//! that refining the existing splits cannot reach. Each split carries its own
//! color. Aggregation walks the values upwards, sums the children's solution
//! sets within a color and unions across colors.
//!
//! The table is keyed by value, so a value that occurs several times in the
//! drawn tree is stored and solved once.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::arith::{checked_lcm, gcd};
use crate::algebra::{CycleSet, SolutionSet};
use crate::decomposition::{all_partitions, divisors, mcda, CoinSet, Partition};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("parameter {name} must be positive")]
    InvalidParameter { name: &'static str },
    #[error("deadline exceeded")]
    DeadlineExceeded,
}

pub type ColorId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitOrigin {
    /// Found by change-making.
    Mcda,
    /// Added because no existing split refined to it.
    Completion,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Split {
    pub color: ColorId,
    pub parts: Partition,
    pub origin: SplitOrigin,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeNode {
    pub value: u64,
    pub splits: Vec<Split>,
    pub node_solution: Option<CycleSet>,
    /// Filled in by [`ColoredTree::aggregate`].
    pub subtree_solutions: SolutionSet,
}

impl TreeNode {
    fn new(value: u64) -> Self {
        TreeNode {
            value,
            splits: Vec::new(),
            node_solution: None,
            subtree_solutions: SolutionSet::new(),
        }
    }
}

/// One row of the node table, in the layout `Node | Splits | Node solution | Subtree solutions set`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub node: u64,
    pub splits: Vec<Partition>,
    pub node_solution: Option<CycleSet>,
    pub subtree_solutions: SolutionSet,
}

/// The single-cycle solution `C((q/p)*m, 1)` of `C(p,1) * X = C(q,m)`, if it exists.
pub fn node_solution(p: u64, q: u64, m: u64) -> Option<CycleSet> {
    if p == 0 || !q.is_multiple_of(p) {
        return None;
    }
    let s = (q / p).checked_mul(m)?;
    if s == 0 || gcd(p, s) != m || checked_lcm(p, s).ok()? != q {
        return None;
    }
    CycleSet::cycles(s, 1).ok()
}

/// True iff `C(p,1) * x = C(q,n)`.
pub fn verify_simple_solution(p: u64, n: u64, q: u64, x: &CycleSet) -> bool {
    let (Ok(coefficient), Ok(target)) = (CycleSet::cycles(p, 1), CycleSet::cycles(q, n)) else {
        return false;
    };
    coefficient.multiply(x).is_ok_and(|lhs| lhs == target)
}

/// All solutions of `C(p,1) * X = C(q,n)`.
pub fn solve_simple(p: u64, n: u64, q: u64) -> Result<SolutionSet, SolverError> {
    let mut tree = ColoredTree::build(p, n, q)?;
    Ok(tree.aggregate())
}

#[derive(Clone, Debug)]
pub struct ColoredTree {
    p: u64,
    n: u64,
    q: u64,
    coins: CoinSet,
    nodes: BTreeMap<u64, TreeNode>,
    /// Owning value of each color.
    colors: Vec<u64>,
    deadline: Option<Instant>,
    aggregated: bool,
}

/// Counts over the coin indices of [`ColoredTree::coins`].
type CountVector = Vec<u32>;

impl ColoredTree {
    pub fn build(p: u64, n: u64, q: u64) -> Result<Self, SolverError> {
        Self::build_until(p, n, q, None)
    }

    /// Builds the tree, aborting with [`SolverError::DeadlineExceeded`] once `deadline` passes.
    pub fn build_until(
        p: u64,
        n: u64,
        q: u64,
        deadline: Option<Instant>,
    ) -> Result<Self, SolverError> {
        for (name, v) in [("p", p), ("n", n), ("q", q)] {
            if v == 0 {
                return Err(SolverError::InvalidParameter { name });
            }
        }
        let mut tree = ColoredTree {
            p,
            n,
            q,
            coins: divisors(q),
            nodes: BTreeMap::new(),
            colors: Vec::new(),
            deadline,
            aggregated: false,
        };
        tree.expand(n);
        let mut represented = HashMap::new();
        tree.complete(n, &mut represented)?;
        for node in tree.nodes.values_mut() {
            node.node_solution = node_solution(p, q, node.value);
        }
        Ok(tree)
    }

    pub fn params(&self) -> (u64, u64, u64) {
        (self.p, self.n, self.q)
    }

    pub fn root(&self) -> &TreeNode {
        &self.nodes[&self.n]
    }

    pub fn node(&self, value: u64) -> Option<&TreeNode> {
        self.nodes.get(&value)
    }

    /// Nodes in increasing value order.
    pub fn nodes(&self) -> impl Iterator<Item = &TreeNode> {
        self.nodes.values()
    }

    pub fn color_count(&self) -> usize {
        self.colors.len()
    }

    /// Value whose split carries `color`.
    pub fn color_owner(&self, color: ColorId) -> Option<u64> {
        self.colors.get(color).copied()
    }

    pub fn divisors(&self) -> &CoinSet {
        &self.coins
    }

    /// Splits each newly seen value with change-making, breadth first.
    fn expand(&mut self, start: u64) {
        let mut queue = VecDeque::from([start]);
        while let Some(m) = queue.pop_front() {
            if self.nodes.contains_key(&m) {
                continue;
            }
            let mut node = TreeNode::new(m);
            if m > 1 {
                if let Some(parts) = mcda(m, &self.coins.without(m)) {
                    let distinct: BTreeSet<u64> = parts.parts().iter().copied().collect();
                    queue.extend(distinct.into_iter().rev());
                    node.splits.push(Split {
                        color: self.register_color(m),
                        parts,
                        origin: SplitOrigin::Mcda,
                    });
                }
            }
            self.nodes.insert(m, node);
        }
    }

    fn register_color(&mut self, owner: u64) -> ColorId {
        self.colors.push(owner);
        self.colors.len() - 1
    }

    fn check_deadline(&self) -> Result<(), SolverError> {
        match self.deadline {
            Some(d) if Instant::now() >= d => Err(SolverError::DeadlineExceeded),
            _ => Ok(()),
        }
    }

    fn coin_index(&self, coin: u64) -> usize {
        self.coins
            .coins()
            .iter()
            .position(|&c| c == coin)
            .expect("split parts are divisors of q")
    }

    fn unit(&self, coin: u64) -> CountVector {
        let mut v = vec![0; self.coins.len()];
        v[self.coin_index(coin)] = 1;
        v
    }

    fn count_vector(&self, partition: &Partition) -> CountVector {
        let mut v = vec![0; self.coins.len()];
        for &part in partition.parts() {
            v[self.coin_index(part)] += 1;
        }
        v
    }

    /// Makes every partition of `m` (into divisors other than `m`) reachable
    /// from the splits of `m`, after doing the same for all smaller values it
    /// splits into. `represented[m]` ends up holding those reachable partitions.
    fn complete(
        &mut self,
        m: u64,
        represented: &mut HashMap<u64, HashSet<CountVector>>,
    ) -> Result<(), SolverError> {
        if represented.contains_key(&m) {
            return Ok(());
        }
        self.check_deadline()?;
        let children: BTreeSet<u64> = self.nodes[&m]
            .splits
            .iter()
            .flat_map(|s| s.parts.parts().iter().copied())
            .collect();
        for &child in &children {
            self.complete(child, represented)?;
        }

        let mut reachable = HashSet::new();
        for split in self.nodes[&m].splits.clone() {
            reachable.extend(self.refinements(&split.parts, represented));
        }
        for partition in all_partitions(m, &self.coins.without(m)) {
            if reachable.contains(&self.count_vector(&partition)) {
                continue;
            }
            let color = self.register_color(m);
            for &part in partition.parts() {
                self.expand(part);
            }
            for &part in partition.parts() {
                self.complete(part, represented)?;
            }
            reachable.extend(self.refinements(&partition, represented));
            self.nodes
                .get_mut(&m)
                .expect("node exists")
                .splits
                .push(Split {
                    color,
                    parts: partition,
                    origin: SplitOrigin::Completion,
                });
        }
        represented.insert(m, reachable);
        Ok(())
    }

    /// Partitions obtained from `split` by keeping or recursively refining each part.
    fn refinements(
        &self,
        split: &Partition,
        represented: &HashMap<u64, HashSet<CountVector>>,
    ) -> HashSet<CountVector> {
        let mut acc: HashSet<CountVector> = HashSet::from([vec![0; self.coins.len()]]);
        for &part in split.parts() {
            let options: Vec<CountVector> = std::iter::once(self.unit(part))
                .chain(represented[&part].iter().cloned())
                .collect();
            acc = acc
                .iter()
                .flat_map(|a| options.iter().map(move |o| add_counts(a, o)))
                .collect();
        }
        acc
    }

    /// Fills every node's subtree solutions, smallest value first, and returns the root's.
    pub fn aggregate(&mut self) -> SolutionSet {
        self.aggregate_until()
            .expect("aggregation without a deadline cannot time out")
    }

    /// [`ColoredTree::aggregate`] honouring the build deadline.
    pub fn aggregate_until(&mut self) -> Result<SolutionSet, SolverError> {
        if !self.aggregated {
            let mut solved: HashMap<u64, Vec<CountVector>> = HashMap::new();
            for (&m, node) in &self.nodes {
                self.check_deadline()?;
                let mut set: HashSet<CountVector> = HashSet::new();
                if node.node_solution.is_some() {
                    set.insert(self.unit(m));
                }
                for split in &node.splits {
                    let mut acc: HashSet<CountVector> = HashSet::from([vec![0; self.coins.len()]]);
                    for part in split.parts.parts() {
                        let child = &solved[part];
                        acc = acc
                            .iter()
                            .flat_map(|a| child.iter().map(move |c| add_counts(a, c)))
                            .collect();
                        if acc.is_empty() {
                            break;
                        }
                    }
                    set.extend(acc);
                }
                solved.insert(m, set.into_iter().collect());
            }
            let converted: Vec<(u64, SolutionSet)> = solved
                .iter()
                .map(|(&m, vs)| (m, vs.iter().map(|v| self.to_cycle_set(v)).collect()))
                .collect();
            for (m, set) in converted {
                self.nodes
                    .get_mut(&m)
                    .expect("node exists")
                    .subtree_solutions = set;
            }
            self.aggregated = true;
        }
        Ok(self.root().subtree_solutions.clone())
    }

    fn to_cycle_set(&self, counts: &CountVector) -> CycleSet {
        let raw = self
            .coins
            .coins()
            .iter()
            .zip(counts)
            .filter(|(_, &c)| c > 0)
            .map(|(&w, &c)| (self.q / self.p * w, u64::from(c)));
        CycleSet::canonicalize(raw).expect("solution periods are positive")
    }

    /// Nodes of the drawn tree: the root plus one node per part of every split,
    /// with every occurrence of a value expanded again.
    pub fn count_nodes(&self) -> u128 {
        let mut memo: HashMap<u64, u128> = HashMap::new();
        for (&m, node) in &self.nodes {
            let below: u128 = node
                .splits
                .iter()
                .flat_map(|s| s.parts.parts())
                .map(|part| memo[part])
                .fold(0u128, |acc, c| acc.saturating_add(c));
            memo.insert(m, below.saturating_add(1));
        }
        memo[&self.n]
    }

    /// Longest root-to-leaf path, in edges.
    pub fn depth(&self) -> usize {
        let mut memo: HashMap<u64, usize> = HashMap::new();
        for (&m, node) in &self.nodes {
            let d = node
                .splits
                .iter()
                .flat_map(|s| s.parts.parts())
                .map(|part| memo[part] + 1)
                .max()
                .unwrap_or(0);
            memo.insert(m, d);
        }
        memo[&self.n]
    }

    /// Node table, largest value first.
    pub fn table(&self) -> Vec<TableRow> {
        self.nodes
            .values()
            .rev()
            .map(|node| TableRow {
                node: node.value,
                splits: node.splits.iter().map(|s| s.parts.clone()).collect(),
                node_solution: node.node_solution.clone(),
                subtree_solutions: node.subtree_solutions.clone(),
            })
            .collect()
    }
}

fn add_counts(a: &[u32], b: &[u32]) -> CountVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cs(raw: &[(u64, u64)]) -> CycleSet {
        CycleSet::canonicalize(raw.iter().copied()).unwrap()
    }

    fn set(items: &[&[(u64, u64)]]) -> SolutionSet {
        items.iter().map(|s| cs(s)).collect()
    }

    fn splits_of(tree: &ColoredTree) -> Vec<(u64, Vec<Vec<u64>>)> {
        tree.table()
            .into_iter()
            .map(|r| {
                (
                    r.node,
                    r.splits.iter().map(|p| p.parts().to_vec()).collect(),
                )
            })
            .collect()
    }

    #[test]
    fn node_solutions() {
        assert_eq!(node_solution(6, 6, 3), Some(cs(&[(3, 1)])));
        assert_eq!(node_solution(2, 4, 2), Some(cs(&[(4, 1)])));
        assert_eq!(node_solution(2, 4, 1), None);
        assert_eq!(node_solution(2, 6, 2), Some(cs(&[(6, 1)])));
        assert_eq!(node_solution(2, 6, 1), Some(cs(&[(3, 1)])));
        assert_eq!(node_solution(4, 6, 1), None);
    }

    #[test]
    fn splits_for_p6_n6_q6() {
        let tree = ColoredTree::build(6, 6, 6).unwrap();
        assert_eq!(
            splits_of(&tree),
            vec![
                (6, vec![vec![3, 3], vec![2, 2, 2]]),
                (3, vec![vec![2, 1]]),
                (2, vec![vec![1, 1]]),
                (1, vec![]),
            ]
        );
        let root = tree.root();
        assert_eq!(root.splits[0].origin, SplitOrigin::Mcda);
        assert_eq!(root.splits[1].origin, SplitOrigin::Completion);
        assert_ne!(root.splits[0].color, root.splits[1].color);
    }

    #[test]
    fn splits_for_p2_n5_q4() {
        let tree = ColoredTree::build(2, 5, 4).unwrap();
        assert_eq!(
            splits_of(&tree),
            vec![
                (5, vec![vec![4, 1]]),
                (4, vec![vec![2, 2]]),
                (2, vec![vec![1, 1]]),
                (1, vec![])
            ]
        );
    }

    #[test]
    fn splits_for_p2_n12_q6() {
        let tree = ColoredTree::build(2, 12, 6).unwrap();
        assert_eq!(
            splits_of(&tree),
            vec![
                (12, vec![vec![6, 6]]),
                (6, vec![vec![3, 3], vec![2, 2, 2]]),
                (3, vec![vec![2, 1]]),
                (2, vec![vec![1, 1]]),
                (1, vec![]),
            ]
        );
    }

    #[test]
    fn rows_for_p6_n6_q6() {
        let mut tree = ColoredTree::build(6, 6, 6).unwrap();
        let root = tree.aggregate();
        assert_eq!(root.len(), 8);
        assert_eq!(
            tree.node(3).unwrap().subtree_solutions,
            set(&[&[(3, 1)], &[(1, 1), (2, 1)], &[(1, 3)]])
        );
        assert_eq!(
            tree.node(2).unwrap().subtree_solutions,
            set(&[&[(1, 2)], &[(2, 1)]])
        );
        assert_eq!(tree.node(1).unwrap().subtree_solutions, set(&[&[(1, 1)]]));
        for m in [1, 2, 3, 6] {
            assert_eq!(tree.node(m).unwrap().node_solution, Some(cs(&[(m, 1)])));
        }
    }

    #[test]
    fn rows_for_p2_n5_q4() {
        let mut tree = ColoredTree::build(2, 5, 4).unwrap();
        assert!(tree.aggregate().is_empty());
        let row = |m| tree.node(m).unwrap().clone();
        assert_eq!(row(2).node_solution, Some(cs(&[(4, 1)])));
        assert_eq!(row(2).subtree_solutions, set(&[&[(4, 1)]]));
        assert_eq!(row(4).node_solution, None);
        assert_eq!(row(4).subtree_solutions, set(&[&[(4, 2)]]));
        assert!(row(1).subtree_solutions.is_empty());
        assert!(row(5).subtree_solutions.is_empty());
    }

    #[test]
    fn rows_for_p2_n12_q6() {
        let mut tree = ColoredTree::build(2, 12, 6).unwrap();
        assert_eq!(tree.aggregate().len(), 7);
        let row = |m| tree.node(m).unwrap().subtree_solutions.clone();
        assert_eq!(
            row(6),
            set(&[&[(3, 6)], &[(6, 2), (3, 2)], &[(3, 4), (6, 1)], &[(6, 3)]])
        );
        assert_eq!(row(3), set(&[&[(3, 3)], &[(6, 1), (3, 1)]]));
        assert_eq!(row(2), set(&[&[(6, 1)], &[(3, 2)]]));
        assert_eq!(row(1), set(&[&[(3, 1)]]));
    }

    #[test]
    fn node_counts_of_drawn_trees() {
        assert_eq!(ColoredTree::build(6, 6, 6).unwrap().count_nodes(), 20);
        assert_eq!(ColoredTree::build(2, 5, 4).unwrap().count_nodes(), 9);
        assert_eq!(ColoredTree::build(3, 1, 7).unwrap().count_nodes(), 1);
    }

    #[test]
    fn depth_is_bounded_by_divisor_count() {
        for q in 1..=12 {
            for n in 1..=12 {
                let tree = ColoredTree::build(q, n, q).unwrap();
                assert!(tree.depth() <= tree.divisors().len());
            }
        }
    }

    #[test]
    fn simple_solutions() {
        assert_eq!(solve_simple(3, 1, 3).unwrap(), set(&[&[(1, 1)]]));
        assert!(solve_simple(4, 3, 6).unwrap().is_empty());
        assert_eq!(
            solve_simple(0, 1, 1),
            Err(SolverError::InvalidParameter { name: "p" })
        );
    }

    #[test]
    fn verification() {
        assert!(verify_simple_solution(6, 6, 6, &cs(&[(3, 2)])));
        assert!(!verify_simple_solution(6, 6, 6, &cs(&[(5, 1)])));
        assert!(verify_simple_solution(2, 12, 6, &cs(&[(6, 6)])));
    }

    #[test]
    fn every_color_has_one_owner() {
        let tree = ColoredTree::build(2, 12, 6).unwrap();
        let mut seen = HashSet::new();
        for node in tree.nodes() {
            for split in &node.splits {
                assert!(seen.insert(split.color));
                assert_eq!(tree.color_owner(split.color), Some(node.value));
            }
        }
        assert_eq!(seen.len(), tree.color_count());
    }

    #[test]
    fn deadline_in_the_past_aborts() {
        let past = Instant::now();
        assert_eq!(
            ColoredTree::build_until(12, 30, 12, Some(past)).unwrap_err(),
            SolverError::DeadlineExceeded
        );
    }
}
