//! `ddsx`: evaluate, solve and verify equations over cycle systems.
//!
//! [`run`] is the whole program; `main` only forwards the process arguments
//! and exit code. Output is assembled in memory and written once the command
//! has succeeded, so a failing command never leaves partial output behind.

pub mod bench;
mod selfcheck;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ddsx_core::lang::{self, Format, LangError};
use ddsx_core::pipeline::{distribution_count, verify_assignment, EquationError};
use ddsx_core::{
    solve_equation, z_bounds, AlgebraError, Assignment, ColoredTree, CycleSet, Equation,
    SolveOptions, VarId, DEFAULT_ROOT_BUDGET,
};

pub const ROOT_BUDGET_ENV: &str = "DDSX_ROOT_BUDGET";

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO_SOLUTION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVALID: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "ddsx",
    version,
    about = "Equations over the cycle semiring of finite dynamical systems"
)]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Write the output to this file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Text => Format::Text,
            OutputFormat::Json => Format::Json,
            OutputFormat::Csv => Format::Csv,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate an expression such as "(C(2,1) + 1) * C(3,1)^2".
    Eval { expr: String },
    /// Solve C(p,1) * X = C(q,n) with the colored tree.
    SolveSimple {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        q: u64,
        /// Also print the node table.
        #[arg(long)]
        trace_table: bool,
    },
    /// Enumerate all solutions of an equation, given as text or JSON.
    Solve {
        equation: String,
        /// Reject solutions giving some variable the empty system.
        #[arg(long)]
        forbid_empty: bool,
        #[command(flatten)]
        budget: BudgetArg,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Print solver statistics to standard error.
        #[arg(long)]
        verbose: bool,
    },
    /// Check an assignment of base values, e.g. --assign "X1=C(2,1);X2=0".
    Verify {
        equation: String,
        #[arg(long)]
        assign: String,
    },
    /// All systems whose W-th power is SYSTEM.
    Root {
        #[arg(long)]
        power: u32,
        system: String,
        #[command(flatten)]
        budget: BudgetArg,
    },
    /// Number of distributions and bounds on the simple equations solved.
    Bounds { equation: String },
    /// Benchmarks; output is always CSV.
    #[command(subcommand)]
    Bench(BenchCommand),
    /// Seeded random comparison of the solvers against exhaustive search.
    Selfcheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        cases: usize,
    },
}

#[derive(Debug, Args)]
pub struct BudgetArg {
    /// Candidate budget for each root extraction.
    #[arg(long)]
    pub root_budget: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum BenchCommand {
    /// Colored-tree node counts with p = q.
    Nodes {
        #[arg(long, default_value_t = 20)]
        n_max: u64,
        #[arg(long, default_value_t = 20)]
        q_max: u64,
    },
    /// Colored tree against brute force with p = q.
    Time {
        #[arg(long, default_value_t = 20)]
        max: u64,
        #[arg(long, default_value_t = 10_000)]
        timeout_ms: u64,
        /// Cases measured concurrently.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Invalid(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Invalid(_) => EXIT_INVALID,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Invalid(m) => m,
        }
    }
}

impl From<LangError> for CliError {
    fn from(e: LangError) -> Self {
        if e.is_invalid_value() {
            CliError::Invalid(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

impl From<EquationError> for CliError {
    fn from(e: EquationError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

struct Output {
    body: String,
    note: String,
    code: i32,
}

impl Output {
    fn ok(body: String) -> Self {
        Output {
            body,
            note: String::new(),
            code: EXIT_OK,
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match CliConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    match execute(&config) {
        Ok(output) => {
            if let Err(e) = emit(&config, &output.body, stdout) {
                let _ = writeln!(stderr, "error: {e}");
                return EXIT_USAGE;
            }
            let _ = write!(stderr, "{}", output.note);
            output.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message());
            e.code()
        }
    }
}

fn emit(config: &CliConfig, body: &str, stdout: &mut dyn Write) -> std::io::Result<()> {
    match &config.out {
        Some(path) => std::fs::write(path, body),
        None => stdout.write_all(body.as_bytes()),
    }
}

fn execute(config: &CliConfig) -> Result<Output, CliError> {
    let format = Format::from(config.format);
    match &config.command {
        Command::Eval { expr } => {
            let value = lang::parse_expr(expr)?;
            Ok(Output::ok(print_value(&value, format)))
        }
        Command::SolveSimple {
            p,
            n,
            q,
            trace_table,
        } => solve_simple(*p, *n, *q, *trace_table, format),
        Command::Solve {
            equation,
            forbid_empty,
            budget,
            jobs,
            verbose,
        } => {
            let eq = parse_equation_input(equation)?;
            if *jobs == 0 {
                return Err(CliError::Invalid("--jobs must be at least 1".into()));
            }
            let opts = SolveOptions {
                forbid_empty: *forbid_empty,
                root_budget: root_budget(budget)?,
                jobs: *jobs,
                ..SolveOptions::default()
            };
            solve(&eq, &opts, *verbose, format)
        }
        Command::Verify { equation, assign } => {
            let eq = parse_equation_input(equation)?;
            let bases = lang::parse_assignment(assign)?;
            verify(&eq, &bases, format)
        }
        Command::Root {
            power,
            system,
            budget,
        } => {
            if *power == 0 {
                return Err(CliError::Invalid("--power must be at least 1".into()));
            }
            let value = lang::parse_system(system)?;
            let roots = value.nth_root(*power, root_budget(budget)?)?;
            let mut out = Output::ok(lang::print_solution_set(&roots, format));
            if roots.is_empty() {
                out.note = "no solutions\n".into();
                out.code = EXIT_NO_SOLUTION;
            }
            Ok(out)
        }
        Command::Bounds { equation } => {
            let eq = parse_equation_input(equation)?;
            Ok(Output::ok(bounds(&eq, format)?))
        }
        Command::Bench(cmd) => run_bench(cmd),
        Command::Selfcheck { seed, cases } => {
            let report = selfcheck::run(*seed, *cases);
            let mut out = Output::ok(report.summary());
            if report.mismatches > 0 {
                out.code = EXIT_NO_SOLUTION;
            }
            Ok(out)
        }
    }
}

fn parse_equation_input(text: &str) -> Result<Equation, CliError> {
    let parsed = if text.trim_start().starts_with('{') {
        lang::parse_equation_json(text)
    } else {
        lang::parse_equation(text)
    };
    Ok(parsed?)
}

fn root_budget(arg: &BudgetArg) -> Result<u64, CliError> {
    let budget = match (arg.root_budget, std::env::var(ROOT_BUDGET_ENV)) {
        (Some(b), _) => b,
        (None, Ok(raw)) => raw.trim().parse().map_err(|_| {
            CliError::Invalid(format!(
                "{ROOT_BUDGET_ENV} must be a positive integer, got {raw:?}"
            ))
        })?,
        (None, Err(_)) => DEFAULT_ROOT_BUDGET,
    };
    if budget == 0 {
        return Err(CliError::Invalid("root budget must be at least 1".into()));
    }
    Ok(budget)
}

fn print_value(value: &CycleSet, format: Format) -> String {
    match format {
        Format::Text => format!("{value}\n"),
        Format::Json => format!(
            "{}\n",
            serde_json::to_string(value).expect("systems serialize")
        ),
        Format::Csv => {
            let mut s = String::from("period,count\n");
            for c in value.components() {
                let _ = writeln!(s, "{},{}", c.period, c.count);
            }
            s
        }
    }
}

fn solve_simple(p: u64, n: u64, q: u64, trace: bool, format: Format) -> Result<Output, CliError> {
    for (name, v) in [("p", p), ("n", n), ("q", q)] {
        if v == 0 {
            return Err(CliError::Invalid(format!("--{name} must be at least 1")));
        }
    }
    let mut tree = ColoredTree::build(p, n, q).map_err(|e| CliError::Invalid(e.to_string()))?;
    let set = tree.aggregate();
    let solutions = lang::print_solution_set(&set, format);
    let body = if !trace {
        solutions
    } else {
        let table = lang::print_table(&tree.table(), format);
        match format {
            Format::Json => {
                let all: Vec<&CycleSet> = set.iter().collect();
                let all = serde_json::to_string(&all).expect("systems serialize");
                format!(
                    "{{\"table\": {}, \"solutions\": {all}}}\n",
                    table.trim_end()
                )
            }
            Format::Text | Format::Csv => format!("{table}\n{solutions}"),
        }
    };
    let mut out = Output::ok(body);
    if set.is_empty() {
        out.note = "no solutions\n".into();
        out.code = EXIT_NO_SOLUTION;
    }
    Ok(out)
}

fn solve(
    eq: &Equation,
    opts: &SolveOptions,
    verbose: bool,
    format: Format,
) -> Result<Output, CliError> {
    let report = solve_equation(eq, opts).map_err(|e| match e {
        EquationError::Algebra(AlgebraError::BudgetExhausted { budget }) => CliError::Invalid(format!(
            "root search gave up after {budget} candidates; raise --root-budget or {ROOT_BUDGET_ENV}"
        )),
        other => other.into(),
    })?;
    let mut out = Output::ok(lang::print_assignments(eq, &report.assignments, format));
    if verbose {
        let s = &report.stats;
        let b = z_bounds(eq)?;
        out.note = format!(
            "distributions: {}\nsimple equations requested: {}\nsimple equations solved: {}\nraw derivations: {}\nbounds: [{}, {}]\n",
            s.distributions, s.simple_invocations, s.simple_solved, s.raw_derivations, b.lower, b.upper
        );
    }
    if report.assignments.is_empty() {
        out.note.push_str("no solutions\n");
        out.code = EXIT_NO_SOLUTION;
    }
    Ok(out)
}

fn verify(
    eq: &Equation,
    bases: &BTreeMap<VarId, CycleSet>,
    format: Format,
) -> Result<Output, CliError> {
    let known: Vec<VarId> = eq.variables().collect();
    if let Some(extra) = bases.keys().find(|v| !known.contains(v)) {
        return Err(CliError::Invalid(format!(
            "{extra} does not occur in the equation"
        )));
    }
    let assignment = Assignment::from_bases(eq, bases)?;
    let valid = verify_assignment(eq, &assignment)?;
    let body = match format {
        Format::Text => format!("{valid}\n"),
        Format::Json => format!("{{\"valid\": {valid}}}\n"),
        Format::Csv => format!("valid\n{valid}\n"),
    };
    let mut out = Output::ok(body);
    if !valid {
        out.code = EXIT_NO_SOLUTION;
    }
    Ok(out)
}

fn bounds(eq: &Equation, format: Format) -> Result<String, CliError> {
    let d = distribution_count(eq)?;
    let b = z_bounds(eq)?;
    Ok(match format {
        Format::Text => format!(
            "distributions: {d}\nlower: {}\nupper: {}\n",
            b.lower, b.upper
        ),
        Format::Json => format!(
            "{{\"distributions\": {d}, \"lower\": {}, \"upper\": {}}}\n",
            b.lower, b.upper
        ),
        Format::Csv => format!("distributions,lower,upper\n{d},{},{}\n", b.lower, b.upper),
    })
}

fn run_bench(cmd: &BenchCommand) -> Result<Output, CliError> {
    let records = match cmd {
        BenchCommand::Nodes { n_max, q_max } => bench::run_node_sweep(*n_max, *q_max),
        BenchCommand::Time {
            max,
            timeout_ms,
            jobs,
        } => {
            if *jobs == 0 {
                return Err(CliError::Invalid("--jobs must be at least 1".into()));
            }
            let opts = bench::TimeOptions {
                timeout: Duration::from_millis(*timeout_ms),
                jobs: *jobs,
            };
            match bench::run_time_comparison(*max, opts) {
                Err(e @ bench::BenchError::Mismatch { .. }) => {
                    return Ok(Output {
                        body: String::new(),
                        note: format!("{e}\n"),
                        code: EXIT_NO_SOLUTION,
                    })
                }
                other => other,
            }
        }
    }
    .map_err(|e| CliError::Invalid(e.to_string()))?;
    let mut buf = Vec::new();
    bench::write_csv(&records, &mut buf).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(Output::ok(
        String::from_utf8(buf).expect("CSV output is UTF-8"),
    ))
}
