use std::process::Command;

use ddsx::{run, EXIT_INVALID, EXIT_NO_SOLUTION, EXIT_OK, EXIT_USAGE};
use ddsx_core::lang::{
    parse_assignment, parse_equation, parse_solution_set, parse_solution_set_json,
};
use ddsx_core::{solve_simple, SolutionSet};

fn ddsx(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("ddsx").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn solve_simple_lists_solutions() {
    let (code, out, _) = ddsx(&["solve-simple", "--p", "6", "--n", "6", "--q", "6"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(
        parse_solution_set(&out).unwrap(),
        solve_simple(6, 6, 6).unwrap()
    );
    assert_eq!(out.lines().count(), 8);
}

#[test]
fn empty_solution_set_exits_one() {
    let (code, out, err) = ddsx(&["solve-simple", "--p", "2", "--n", "5", "--q", "4"]);
    assert_eq!(code, EXIT_NO_SOLUTION);
    assert!(out.is_empty());
    assert!(err.contains("no solutions"));
}

#[test]
fn eval_multiplies() {
    let (code, out, _) = ddsx(&["eval", "C(2,1) * C(3,1)"]);
    assert_eq!((code, out.as_str()), (EXIT_OK, "C(6,1)\n"));
    let (_, json, _) = ddsx(&["eval", "C(2,3)", "--format", "json"]);
    assert_eq!(json, "[{\"period\":2,\"count\":3}]\n");
    let (_, csv, _) = ddsx(&["--format", "csv", "eval", "C(2,3) + 1"]);
    assert_eq!(csv, "period,count\n1,1\n2,3\n");
}

#[test]
fn trace_table_has_the_node_layout() {
    let (code, out, _) = ddsx(&[
        "solve-simple",
        "--p",
        "2",
        "--n",
        "12",
        "--q",
        "6",
        "--trace-table",
    ]);
    assert_eq!(code, EXIT_OK);
    let mut lines = out.lines();
    assert_eq!(
        lines.next(),
        Some("Node | Splits | Node solution | Subtree solutions set")
    );
    assert!(out.contains("\n6 | {[3,3], [2,2,2]} | {} | "));
    assert!(out.contains("\n1 | {} | C(3,1) | {C(3,1)}\n"));
}

#[test]
fn json_output_round_trips() {
    let (_, out, _) = ddsx(&[
        "solve-simple",
        "--p",
        "2",
        "--n",
        "12",
        "--q",
        "6",
        "--format",
        "json",
    ]);
    assert_eq!(
        parse_solution_set_json(&out).unwrap(),
        solve_simple(2, 12, 6).unwrap()
    );
    let (_, empty, _) = ddsx(&[
        "solve-simple",
        "--p",
        "2",
        "--n",
        "5",
        "--q",
        "4",
        "--format",
        "json",
    ]);
    assert_eq!(empty, "{\"solutions\": []}\n");
}

#[test]
fn solve_prints_verifiable_assignments() {
    let eq_text = "(C(2,1) + C(3,1)) * X1 + (C(4,1)) * X2^2 = C(4,5) + C(12,2)";
    let (code, out, _) = ddsx(&["solve", eq_text]);
    assert_eq!(code, EXIT_OK);
    let eq = parse_equation(eq_text).unwrap();
    for line in out.lines() {
        let bases = parse_assignment(line).unwrap();
        assert_eq!(eq.evaluate_bases(&bases).unwrap(), *eq.rhs());
        let (vcode, vout, _) = ddsx(&["verify", eq_text, "--assign", line]);
        assert_eq!((vcode, vout.as_str()), (EXIT_OK, "true\n"));
    }
}

#[test]
fn solve_is_identical_across_job_counts() {
    let eq = "(C(1,1) + C(2,1)) * X1 + (C(3,1)) * X2 = C(2,2) + C(6,2) + C(3,1)";
    let (c1, one, _) = ddsx(&["solve", eq]);
    let (c4, four, _) = ddsx(&["solve", eq, "--jobs", "4"]);
    assert_eq!(c1, c4);
    assert_eq!(one, four);
}

#[test]
fn solve_accepts_json_equations() {
    let json = r#"{"terms":[{"coeff":[{"period":2,"count":1}],"var":"X1","exp":1}],"rhs":[{"period":2,"count":2}]}"#;
    let (code, out, _) = ddsx(&["solve", json]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "X1 = C(1,2)\nX1 = C(2,1)\n");
}

#[test]
fn solve_verbose_reports_statistics() {
    let (code, _, err) = ddsx(&["solve", "(C(2,1)) * X1 = C(2,2)", "--verbose"]);
    assert_eq!(code, EXIT_OK);
    assert!(err.contains("distributions: 1"));
    assert!(err.contains("bounds: [1, 1]"));
}

#[test]
fn verify_rejects_wrong_assignments() {
    let (code, out, _) = ddsx(&["verify", "(C(2,1)) * X1 = C(2,2)", "--assign", "X1=C(3,1)"]);
    assert_eq!((code, out.as_str()), (EXIT_NO_SOLUTION, "false\n"));
    let (code, _, err) = ddsx(&["verify", "(C(2,1)) * X1 = C(2,2)", "--assign", "X2=C(3,1)"]);
    assert_eq!(code, EXIT_INVALID, "{err}");
}

#[test]
fn root_and_bounds() {
    let (code, out, _) = ddsx(&["root", "--power", "2", "C(1,1) + C(2,4)"]);
    assert_eq!((code, out.as_str()), (EXIT_OK, "C(1,1) + C(2,1)\n"));
    let (code, _, _) = ddsx(&["root", "--power", "2", "C(2,1)"]);
    assert_eq!(code, EXIT_NO_SOLUTION);
    let (code, out, _) = ddsx(&["bounds", "(C(2,1)) * X1 + (C(3,1)) * X2 = C(2,2) + C(3,1)"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "distributions: 6\nlower: 12\nupper: 24\n");
}

#[test]
fn root_budget_flag_is_honoured() {
    let (code, _, err) = ddsx(&[
        "root",
        "--power",
        "2",
        "C(1,1) + C(2,40)",
        "--root-budget",
        "1",
    ]);
    assert_eq!(code, EXIT_INVALID, "{err}");
    let (code, _, _) = ddsx(&["root", "--power", "2", "C(1,1)", "--root-budget", "0"]);
    assert_eq!(code, EXIT_INVALID);
}

#[test]
fn usage_and_parameter_errors() {
    let cases: &[(&[&str], i32)] = &[
        (
            &["solve-simple", "--p", "0", "--n", "1", "--q", "1"],
            EXIT_INVALID,
        ),
        (
            &["solve-simple", "--p", "x", "--n", "1", "--q", "1"],
            EXIT_USAGE,
        ),
        (
            &["solve-simple", "--p", "-3", "--n", "1", "--q", "1"],
            EXIT_USAGE,
        ),
        (&["solve-simple", "--p", "2", "--n", "1"], EXIT_USAGE),
        (&["eval", "C(2,"], EXIT_USAGE),
        (&["eval", "C(0,2)"], EXIT_INVALID),
        (&["eval", "C(2,1)", "--format", "xml"], EXIT_USAGE),
        (&["solve", "(C(2,1)) * X1^0 = C(2,2)"], EXIT_INVALID),
        (&["solve", "(C(2,1)) * X1 = 0"], EXIT_INVALID),
        (
            &["solve", "(C(2,1)) * X1 = C(2,2)", "--jobs", "0"],
            EXIT_INVALID,
        ),
        (&["bounds", "X1 = C(2,2)"], EXIT_USAGE),
        (&["nonsense"], EXIT_USAGE),
        (&[], EXIT_USAGE),
    ];
    for (args, expected) in cases {
        let (code, out, err) = ddsx(args);
        assert_eq!(code, *expected, "{args:?}: {err}");
        assert!(out.is_empty(), "{args:?} wrote {out:?}");
        assert!(!err.is_empty());
    }
}

#[test]
fn help_goes_to_stdout() {
    let (code, out, _) = ddsx(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("solve-simple"));
}

#[test]
fn out_flag_writes_a_file() {
    let dir = std::env::temp_dir().join(format!("ddsx-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("nodes.csv");
    let (code, out, _) = ddsx(&[
        "bench",
        "nodes",
        "--n-max",
        "3",
        "--q-max",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("p,n,q,node_count,colored_tree_ms,brute_force_ms,solution_count\n"));
    assert_eq!(csv.lines().count(), 10);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn bench_time_emits_both_timings() {
    let (code, out, _) = ddsx(&["bench", "time", "--max", "3"]);
    assert_eq!(code, EXIT_OK);
    for line in out.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 7);
        assert!(fields[4].parse::<f64>().unwrap() >= 0.0);
        assert!(fields[5].parse::<f64>().unwrap() >= 0.0);
    }
}

#[test]
fn selfcheck_is_reproducible() {
    let (code, a, _) = ddsx(&["selfcheck", "--seed", "3", "--cases", "40"]);
    let (_, b, _) = ddsx(&["selfcheck", "--seed", "3", "--cases", "40"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(a, b);
    assert_eq!(a, "checked 40 cases, 0 mismatches\n");
}

#[test]
fn binary_reads_root_budget_from_environment() {
    let bin = env!("CARGO_BIN_EXE_ddsx");
    let starved = Command::new(bin)
        .args(["root", "--power", "2", "C(1,1) + C(2,40)"])
        .env("DDSX_ROOT_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(starved.status.code(), Some(EXIT_INVALID));
    assert!(starved.stdout.is_empty());
    let bad = Command::new(bin)
        .args(["root", "--power", "2", "C(1,1)"])
        .env("DDSX_ROOT_BUDGET", "lots")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_INVALID));
    let fine = Command::new(bin)
        .args(["root", "--power", "2", "C(1,1) + C(2,4)"])
        .env("DDSX_ROOT_BUDGET", "1000")
        .output()
        .unwrap();
    assert_eq!(fine.status.code(), Some(EXIT_OK));
    assert_eq!(String::from_utf8(fine.stdout).unwrap(), "C(1,1) + C(2,1)\n");
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = [
        "solve-simple",
        "--p",
        "3",
        "--n",
        "9",
        "--q",
        "6",
        "--trace-table",
        "--format",
        "csv",
    ];
    let first = ddsx(&args);
    for _ in 0..3 {
        assert_eq!(ddsx(&args), first);
    }
    let set: SolutionSet = solve_simple(3, 9, 6).unwrap();
    assert!(first.1.contains(&format!(
        "solution,system\n1,\"{}\"",
        set.iter().next().unwrap()
    )));
}
