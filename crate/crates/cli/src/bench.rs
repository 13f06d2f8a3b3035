//! Node-count sweeps and colored-tree versus brute-force timings.

use std::fmt;
use std::io::Write;
use std::time::{Duration, Instant};

use ddsx_core::graph::brute_force_until;
use ddsx_core::{ColoredTree, SolutionSet};
use rayon::prelude::*;

pub const CSV_HEADER: [&str; 7] = [
    "p",
    "n",
    "q",
    "node_count",
    "colored_tree_ms",
    "brute_force_ms",
    "solution_count",
];

/// Warm-up runs excluded from a timing.
const WARMUP: usize = 1;
/// Timed runs; the median is reported.
const REPEATS: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Timing {
    Millis(f64),
    Timeout,
}

impl Timing {
    pub fn millis(&self) -> Option<f64> {
        match self {
            Timing::Millis(ms) => Some(*ms),
            Timing::Timeout => None,
        }
    }
}

impl fmt::Display for Timing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Timing::Millis(ms) => write!(f, "{ms:.4}"),
            Timing::Timeout => f.write_str("timeout"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub p: u64,
    pub n: u64,
    pub q: u64,
    pub node_count: Option<u128>,
    pub colored_tree_ms: Option<Timing>,
    pub brute_force_ms: Option<Timing>,
    pub solution_count: Option<usize>,
}

impl BenchRecord {
    fn new(p: u64, n: u64, q: u64) -> Self {
        BenchRecord {
            p,
            n,
            q,
            node_count: None,
            colored_tree_ms: None,
            brute_force_ms: None,
            solution_count: None,
        }
    }

    fn csv_fields(&self) -> [String; 7] {
        fn opt<T: ToString>(v: &Option<T>) -> String {
            v.as_ref().map(T::to_string).unwrap_or_default()
        }
        [
            self.p.to_string(),
            self.n.to_string(),
            self.q.to_string(),
            opt(&self.node_count),
            opt(&self.colored_tree_ms),
            opt(&self.brute_force_ms),
            opt(&self.solution_count),
        ]
    }
}

/// The two solvers disagreed, or a case was given a zero parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BenchError {
    InvalidRange,
    Mismatch { p: u64, n: u64, q: u64 },
}

impl fmt::Display for BenchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BenchError::InvalidRange => f.write_str("ranges must be at least 1"),
            BenchError::Mismatch { p, n, q } => {
                write!(
                    f,
                    "colored tree and brute force disagree at p={p} n={n} q={q}"
                )
            }
        }
    }
}

impl std::error::Error for BenchError {}

pub fn write_csv<W: Write>(records: &[BenchRecord], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record(r.csv_fields())?;
    }
    w.flush()?;
    Ok(())
}

/// Node counts of the colored tree for every `1 <= n <= n_max`, `1 <= q <= q_max`, with `p = q`.
pub fn run_node_sweep(n_max: u64, q_max: u64) -> Result<Vec<BenchRecord>, BenchError> {
    if n_max == 0 || q_max == 0 {
        return Err(BenchError::InvalidRange);
    }
    let mut out = Vec::new();
    for n in 1..=n_max {
        for q in 1..=q_max {
            let tree = ColoredTree::build(q, n, q).expect("parameters are positive");
            let mut r = BenchRecord::new(q, n, q);
            r.node_count = Some(tree.count_nodes());
            out.push(r);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug)]
pub struct TimeOptions {
    /// Per-run limit for either solver.
    pub timeout: Duration,
    /// Cases measured concurrently; 1 keeps timings free of contention.
    pub jobs: usize,
}

impl Default for TimeOptions {
    fn default() -> Self {
        TimeOptions {
            timeout: Duration::from_secs(10),
            jobs: 1,
        }
    }
}

/// Times both solvers for every `1 <= n, p <= max` with `q = p` and checks
/// that they return the same set whenever both finish.
pub fn run_time_comparison(max: u64, opts: TimeOptions) -> Result<Vec<BenchRecord>, BenchError> {
    if max == 0 {
        return Err(BenchError::InvalidRange);
    }
    let cases: Vec<(u64, u64)> = (1..=max)
        .flat_map(|n| (1..=max).map(move |p| (p, n)))
        .collect();
    let measure = |&(p, n): &(u64, u64)| time_case(p, n, p, opts.timeout);
    let results: Vec<Result<BenchRecord, BenchError>> = if opts.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .expect("thread pool");
        pool.install(|| cases.par_iter().map(measure).collect())
    } else {
        cases.iter().map(measure).collect()
    };
    results.into_iter().collect()
}

fn time_case(p: u64, n: u64, q: u64, timeout: Duration) -> Result<BenchRecord, BenchError> {
    let mut r = BenchRecord::new(p, n, q);
    let tree = timed(timeout, |deadline| {
        let mut tree = ColoredTree::build_until(p, n, q, Some(deadline)).ok()?;
        let set = tree.aggregate_until().ok()?;
        Some((tree, set))
    });
    let brute = timed(timeout, |deadline| {
        brute_force_until(p, n, q, Some(deadline))
    });

    r.colored_tree_ms = Some(tree.0);
    r.brute_force_ms = Some(brute.0);
    if let Some((t, set)) = &tree.1 {
        r.node_count = Some(t.count_nodes());
        r.solution_count = Some(set.len());
    }
    if let (Some((_, a)), Some(b)) = (&tree.1, &brute.1) {
        if a != b {
            return Err(BenchError::Mismatch { p, n, q });
        }
    }
    if r.solution_count.is_none() {
        r.solution_count = brute.1.as_ref().map(SolutionSet::len);
    }
    Ok(r)
}

/// Median wall-clock time of [`REPEATS`] runs after [`WARMUP`] discarded ones,
/// plus the last result. A run returning `None` counts as a timeout.
fn timed<T>(timeout: Duration, mut f: impl FnMut(Instant) -> Option<T>) -> (Timing, Option<T>) {
    let mut samples = Vec::with_capacity(REPEATS);
    let mut last = None;
    for i in 0..WARMUP + REPEATS {
        let start = Instant::now();
        let Some(v) = f(start + timeout) else {
            return (Timing::Timeout, None);
        };
        let elapsed = start.elapsed();
        if i >= WARMUP {
            samples.push(elapsed.as_secs_f64() * 1e3);
        }
        last = Some(v);
    }
    samples.sort_by(f64::total_cmp);
    (Timing::Millis(samples[REPEATS / 2]), last)
}
