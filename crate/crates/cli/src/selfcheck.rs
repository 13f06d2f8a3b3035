use std::collections::BTreeSet;

use ddsx_core::lang::expand_bases;
use ddsx_core::pipeline::brute_force_equation;
use ddsx_core::{
    brute_force_simple_solutions, solve_equation, solve_simple, CycleSet, Equation, SolveOptions,
    Term, VarId,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Report {
    pub cases: usize,
    pub mismatches: usize,
    pub failures: Vec<String>,
}

impl Report {
    pub fn summary(&self) -> String {
        let mut s = format!(
            "checked {} cases, {} mismatches\n",
            self.cases, self.mismatches
        );
        for f in &self.failures {
            s.push_str(f);
            s.push('\n');
        }
        s
    }
}

/// Alternates random simple equations (checked against brute force) with
/// random small equations (checked against exhaustive assignment search).
pub fn run(seed: u64, cases: usize) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = Report {
        cases,
        mismatches: 0,
        failures: Vec::new(),
    };
    for i in 0..cases {
        let failure = if i % 2 == 0 {
            let (p, n, q) = (
                rng.gen_range(1..=12),
                rng.gen_range(1..=10),
                rng.gen_range(1..=12),
            );
            let fast = solve_simple(p, n, q).expect("parameters are positive");
            (fast != brute_force_simple_solutions(p, n, q))
                .then(|| format!("mismatch: solve-simple --p {p} --n {n} --q {q}"))
        } else {
            let eq = random_equation(&mut rng);
            let report =
                solve_equation(&eq, &SolveOptions::default()).expect("small equations solve");
            let found: BTreeSet<_> = expand_bases(&eq, &report.assignments).into_iter().collect();
            let expected = brute_force_equation(&eq).expect("small equations enumerate");
            (found != expected).then(|| format!("mismatch: solve \"{eq}\""))
        };
        if let Some(f) = failure {
            report.mismatches += 1;
            report.failures.push(f);
        }
    }
    report
}

fn random_system(rng: &mut ChaCha8Rng, parts: usize, max_period: u64, max_count: u64) -> CycleSet {
    let raw: Vec<(u64, u64)> = (0..parts)
        .map(|_| (rng.gen_range(1..=max_period), rng.gen_range(1..=max_count)))
        .collect();
    CycleSet::canonicalize(raw).expect("periods are positive")
}

fn random_equation(rng: &mut ChaCha8Rng) -> Equation {
    let vars = rng.gen_range(1..=2);
    let terms = (1..=vars)
        .map(|v| {
            let parts = rng.gen_range(1..=2);
            let coeff = random_system(rng, parts, 6, 1);
            Term::new(coeff, VarId(v), rng.gen_range(1..=2))
        })
        .collect();
    let parts = rng.gen_range(1..=3);
    let rhs = random_system(rng, parts, 6, 2);
    Equation::new(terms, rhs).expect("terms and rhs are nonempty")
}
