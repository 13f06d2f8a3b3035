use std::collections::{BTreeSet, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::iter::{ParallelBridge, ParallelIterator};
use serde::Serialize;

use super::distribute::{cells, Cell, Distribution, Distributions};
use super::equation::verify_assignment;
use super::{Assignment, Equation, EquationError};
use crate::algebra::{CycleSet, SolutionSet, DEFAULT_ROOT_BUDGET};
use crate::colored_tree::solve_simple;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    /// Drop assignments giving some variable the empty system.
    pub forbid_empty: bool,
    /// Candidate budget for each root extraction.
    pub root_budget: u64,
    /// Worker threads for distributions; 0 or 1 runs on the calling thread.
    pub jobs: usize,
    /// Stop working on a distribution as soon as one variable has no candidate.
    /// Turn off to make every distribution request all of its simple equations.
    pub short_circuit: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            forbid_empty: false,
            root_budget: DEFAULT_ROOT_BUDGET,
            jobs: 1,
            short_circuit: true,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    /// Distributions of the right-hand side examined.
    pub distributions: u64,
    /// Simple equations requested, counting repeats.
    pub simple_invocations: u64,
    /// Distinct simple equations actually solved.
    pub simple_solved: u64,
    /// Verified assignments before deduplication.
    pub raw_derivations: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveReport {
    pub assignments: BTreeSet<Assignment>,
    pub stats: SolveStats,
}

/// All assignments solving `eq`.
///
/// Every distribution of the right-hand cycles over the coefficient cycles
/// turns into one simple equation `C(p,1) * Y = C(q,k)` per cell and period.
/// A cell's solutions are the sums of its per-period solutions, since each
/// cycle of `Y` lands in exactly one right-hand period. A variable must solve
/// all of its cells at once, so its candidates are the intersection over its
/// cells; the assignments are the product over variables. Simple equations
/// are memoised by `(p, k, q)` for the whole run.
pub fn solve_equation(eq: &Equation, opts: &SolveOptions) -> Result<SolveReport, EquationError> {
    let run = Run::new(eq, opts);
    let distributions = Distributions::new(eq)?;
    let found: Vec<Vec<Assignment>> = if opts.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .expect("thread pool");
        pool.install(|| {
            distributions
                .par_bridge()
                .map(|d| run.distribution(&d))
                .collect::<Result<_, _>>()
        })?
    } else {
        distributions
            .map(|d| run.distribution(&d))
            .collect::<Result<_, _>>()?
    };

    let mut stats = run.stats();
    stats.raw_derivations = found.iter().map(|v| v.len() as u64).sum();
    Ok(SolveReport {
        assignments: found.into_iter().flatten().collect(),
        stats,
    })
}

type SimpleCache = Mutex<HashMap<(u64, u32, u64), Arc<OnceLock<SolutionSet>>>>;

struct Run<'a> {
    eq: &'a Equation,
    opts: &'a SolveOptions,
    cells: Vec<Cell>,
    simple: SimpleCache,
    roots: Mutex<HashMap<(CycleSet, u32), SolutionSet>>,
    distributions: AtomicU64,
    invocations: AtomicU64,
    solved: AtomicU64,
}

impl<'a> Run<'a> {
    fn new(eq: &'a Equation, opts: &'a SolveOptions) -> Self {
        Run {
            eq,
            opts,
            cells: cells(eq),
            simple: Mutex::new(HashMap::new()),
            roots: Mutex::new(HashMap::new()),
            distributions: AtomicU64::new(0),
            invocations: AtomicU64::new(0),
            solved: AtomicU64::new(0),
        }
    }

    fn stats(&self) -> SolveStats {
        SolveStats {
            distributions: self.distributions.load(Ordering::Relaxed),
            simple_invocations: self.invocations.load(Ordering::Relaxed),
            simple_solved: self.solved.load(Ordering::Relaxed),
            raw_derivations: 0,
        }
    }

    fn simple(&self, p: u64, n: u32, q: u64) -> SolutionSet {
        self.invocations.fetch_add(1, Ordering::Relaxed);
        let slot = {
            let mut memo = self.simple.lock().expect("memo lock");
            Arc::clone(memo.entry((p, n, q)).or_default())
        };
        slot.get_or_init(|| {
            self.solved.fetch_add(1, Ordering::Relaxed);
            solve_simple(p, u64::from(n), q).expect("cell parameters are positive")
        })
        .clone()
    }

    fn roots(&self, value: &CycleSet, exp: u32) -> Result<SolutionSet, EquationError> {
        let key = (value.clone(), exp);
        if let Some(hit) = self.roots.lock().expect("root lock").get(&key) {
            return Ok(hit.clone());
        }
        let found = value.nth_root(exp, self.opts.root_budget)?;
        self.roots
            .lock()
            .expect("root lock")
            .insert(key, found.clone());
        Ok(found)
    }

    fn distribution(&self, d: &Distribution) -> Result<Vec<Assignment>, EquationError> {
        self.distributions.fetch_add(1, Ordering::Relaxed);
        let rhs = self.eq.rhs().components();
        let terms = self.eq.terms();
        let mut candidates: Vec<Option<SolutionSet>> = vec![None; terms.len()];
        let mut dead = false;

        for (c, cell) in self.cells.iter().enumerate() {
            let mut cell_solutions: SolutionSet = [CycleSet::empty()].into_iter().collect();
            for (j, target) in rhs.iter().enumerate().take(d.period_count()) {
                let n = d.count(c, j);
                if n == 0 {
                    continue;
                }
                let sols = self.simple(cell.period, n, target.period);
                cell_solutions = cell_solutions.sum_product(&sols);
                if cell_solutions.is_empty() && self.opts.short_circuit {
                    break;
                }
            }
            let slot = &mut candidates[cell.term];
            let merged = match slot.take() {
                None => cell_solutions,
                Some(prev) => prev.intersection(&cell_solutions),
            };
            dead |= merged.is_empty();
            *slot = Some(merged);
            if dead && self.opts.short_circuit {
                return Ok(Vec::new());
            }
        }
        if dead {
            return Ok(Vec::new());
        }

        // per variable: (value of X_i^w_i, its roots)
        let mut options: Vec<Vec<(CycleSet, Vec<CycleSet>)>> = Vec::with_capacity(terms.len());
        for (term, set) in terms.iter().zip(candidates) {
            let set = set.expect("every term owns at least one cell");
            let mut opts = Vec::new();
            for value in set {
                if self.opts.forbid_empty && value.is_empty() {
                    continue;
                }
                if term.exponent > 1 {
                    let roots = self.roots(&value, term.exponent)?;
                    if roots.is_empty() {
                        continue;
                    }
                    opts.push((value, roots.into_iter().collect()));
                } else {
                    opts.push((value, Vec::new()));
                }
            }
            if opts.is_empty() {
                return Ok(Vec::new());
            }
            options.push(opts);
        }

        let mut out = vec![Assignment::default()];
        for (term, opts) in terms.iter().zip(&options) {
            let mut next = Vec::with_capacity(out.len() * opts.len());
            for partial in &out {
                for (value, roots) in opts {
                    let mut a = partial.clone();
                    a.values.insert(term.var, value.clone());
                    if term.exponent > 1 {
                        a.roots.insert(term.var, roots.clone());
                    }
                    next.push(a);
                }
            }
            out = next;
        }
        let mut verified = Vec::with_capacity(out.len());
        for a in out {
            let ok = verify_assignment(self.eq, &a)?;
            debug_assert!(ok, "contraction produced a non-solution");
            if ok {
                verified.push(a);
            }
        }
        Ok(verified)
    }
}
