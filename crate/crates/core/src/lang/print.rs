use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;

use crate::algebra::{CycleSet, SolutionSet};
use crate::colored_tree::TableRow;
use crate::pipeline::{Assignment, Equation, VarId};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

pub fn print_system(s: &CycleSet) -> String {
    s.to_string()
}

pub fn print_equation(eq: &Equation) -> String {
    eq.to_string()
}

pub fn print_equation_json(eq: &Equation) -> String {
    serde_json::to_string(eq).expect("equations serialize")
}

/// Text: one system per line in canonical order. JSON: `{"solutions": [...]}`.
/// CSV: `solution,system` with 1-based solution numbers.
pub fn print_solution_set(s: &SolutionSet, format: Format) -> String {
    match format {
        Format::Text => s.iter().map(|x| format!("{x}\n")).collect(),
        Format::Json => {
            let body: Vec<&CycleSet> = s.iter().collect();
            format!(
                "{{\"solutions\": {}}}\n",
                serde_json::to_string(&body).expect("systems serialize")
            )
        }
        Format::Csv => csv_rows(
            &["solution", "system"],
            s.iter()
                .enumerate()
                .map(|(i, x)| vec![(i + 1).to_string(), x.to_string()]),
        ),
    }
}

/// `X1 = C(2,1); X2 = 0`, readable by `parse_assignment`.
pub fn print_bases(bases: &BTreeMap<VarId, CycleSet>) -> String {
    let parts: Vec<String> = bases.iter().map(|(v, s)| format!("{v} = {s}")).collect();
    parts.join("; ")
}

/// Every base assignment `x_i` described by the solutions: variables with an
/// exponent above one range over their reported roots.
pub fn expand_bases(
    eq: &Equation,
    assignments: &BTreeSet<Assignment>,
) -> Vec<BTreeMap<VarId, CycleSet>> {
    let mut out = BTreeSet::new();
    for a in assignments {
        let mut partial = vec![BTreeMap::new()];
        for term in eq.terms() {
            let choices: Vec<&CycleSet> = if term.exponent == 1 {
                a.values.get(&term.var).into_iter().collect()
            } else {
                a.roots.get(&term.var).into_iter().flatten().collect()
            };
            partial = partial
                .into_iter()
                .flat_map(|m| {
                    choices.iter().map(move |c| {
                        let mut m = m.clone();
                        m.insert(term.var, (*c).clone());
                        m
                    })
                })
                .collect();
        }
        out.extend(partial);
    }
    out.into_iter().collect()
}

/// Solutions of an equation as base assignments, one per line in text.
pub fn print_assignments(
    eq: &Equation,
    assignments: &BTreeSet<Assignment>,
    format: Format,
) -> String {
    let bases = expand_bases(eq, assignments);
    match format {
        Format::Text => bases
            .iter()
            .map(|b| format!("{}\n", print_bases(b)))
            .collect(),
        Format::Json => {
            let body = serde_json::to_string(&bases).expect("assignments serialize");
            format!("{{\"solutions\": {body}}}\n")
        }
        Format::Csv => csv_rows(
            &["solution", "variable", "system"],
            bases.iter().enumerate().flat_map(|(i, b)| {
                b.iter()
                    .map(move |(v, s)| vec![(i + 1).to_string(), v.to_string(), s.to_string()])
            }),
        ),
    }
}

/// Node table with columns `Node | Splits | Node solution | Subtree solutions set`.
pub fn print_table(rows: &[TableRow], format: Format) -> String {
    match format {
        Format::Text => {
            let mut out = String::from("Node | Splits | Node solution | Subtree solutions set\n");
            for r in rows {
                let cells = table_cells(r);
                let _ = writeln!(out, "{}", cells.join(" | "));
            }
            out
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Row<'a> {
                node: u64,
                splits: Vec<&'a [u64]>,
                node_solution: Option<&'a CycleSet>,
                subtree_solutions: Vec<&'a CycleSet>,
            }
            let body: Vec<Row<'_>> = rows
                .iter()
                .map(|r| Row {
                    node: r.node,
                    splits: r.splits.iter().map(|s| s.parts()).collect(),
                    node_solution: r.node_solution.as_ref(),
                    subtree_solutions: r.subtree_solutions.iter().collect(),
                })
                .collect();
            format!(
                "{}\n",
                serde_json::to_string(&body).expect("rows serialize")
            )
        }
        Format::Csv => csv_rows(
            &["node", "splits", "node_solution", "subtree_solutions"],
            rows.iter().map(table_cells),
        ),
    }
}

fn table_cells(r: &TableRow) -> Vec<String> {
    let splits: Vec<String> = r.splits.iter().map(|s| s.to_string()).collect();
    let subtree: Vec<String> = r.subtree_solutions.iter().map(|s| s.to_string()).collect();
    vec![
        r.node.to_string(),
        format!("{{{}}}", splits.join(", ")),
        r.node_solution
            .as_ref()
            .map_or_else(|| "{}".to_string(), |s| s.to_string()),
        format!("{{{}}}", subtree.join("; ")),
    ]
}

fn csv_rows(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}
