use ddsx_core::lang::{
    parse_assignment, parse_equation, parse_equation_json, parse_solution_set,
    parse_solution_set_json, parse_system, print_bases, print_equation, print_equation_json,
    print_solution_set, Format,
};
use ddsx_core::{CycleSet, Equation, SolutionSet, Term, VarId};
use proptest::prelude::*;

fn system() -> impl Strategy<Value = CycleSet> {
    prop::collection::vec((1u64..=1000, 1u64..=50), 0..=5)
        .prop_map(|raw| CycleSet::canonicalize(raw).unwrap())
}

fn nonempty_system() -> impl Strategy<Value = CycleSet> {
    system().prop_filter("nonempty", |s| !s.is_empty())
}

fn equation() -> impl Strategy<Value = Equation> {
    (
        prop::collection::vec((nonempty_system(), 1u32..=9, 1u32..=4), 1..=4),
        nonempty_system(),
    )
        .prop_map(|(terms, rhs)| {
            let terms = terms
                .into_iter()
                .map(|(c, v, w)| Term::new(c, VarId(v), w))
                .collect::<Vec<_>>();
            // a variable keeps the first exponent it was given
            let mut seen = std::collections::BTreeMap::new();
            let terms = terms
                .into_iter()
                .map(|t| {
                    let w = *seen.entry(t.var).or_insert(t.exponent);
                    Term::new(t.coefficient, t.var, w)
                })
                .collect();
            Equation::new(terms, rhs).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn systems_round_trip(s in system()) {
        let text = s.to_string();
        prop_assert_eq!(parse_system(&text).unwrap(), s.clone());
        prop_assert_eq!(parse_system(&text).unwrap().to_string(), text);
    }

    #[test]
    fn equations_round_trip(eq in equation()) {
        prop_assert_eq!(parse_equation(&print_equation(&eq)).unwrap(), eq.clone());
        prop_assert_eq!(parse_equation_json(&print_equation_json(&eq)).unwrap(), eq);
    }

    #[test]
    fn solution_sets_round_trip(v in prop::collection::vec(system(), 0..6)) {
        let s: SolutionSet = v.into_iter().collect();
        prop_assert_eq!(parse_solution_set(&print_solution_set(&s, Format::Text)).unwrap(), s.clone());
        prop_assert_eq!(parse_solution_set_json(&print_solution_set(&s, Format::Json)).unwrap(), s);
    }

    #[test]
    fn assignments_round_trip(v in prop::collection::btree_map(1u32..20, system(), 1..4)) {
        let bases = v.into_iter().map(|(k, s)| (VarId(k), s)).collect();
        prop_assert_eq!(parse_assignment(&print_bases(&bases)).unwrap(), bases);
    }

    #[test]
    fn whitespace_is_insignificant(s in nonempty_system()) {
        let spaced = s.to_string().replace(',', " ,\t").replace('(', "( \n ");
        prop_assert_eq!(parse_system(&spaced).unwrap(), s);
    }

    #[test]
    fn arbitrary_text_never_panics(text in "[C0-9X(),+*^=; \\n]{0,40}") {
        let _ = parse_system(&text);
        let _ = parse_equation(&text);
        let _ = parse_assignment(&text);
        let _ = parse_solution_set(&text);
    }

    #[test]
    fn dropped_characters_are_rejected(eq in equation(), cut in any::<prop::sample::Index>()) {
        let text = print_equation(&eq);
        let at = cut.index(text.len());
        let c = text.as_bytes()[at];
        // removing a structural character always breaks the grammar
        prop_assume!(matches!(c, b'(' | b')' | b',' | b'*' | b'=' | b'C' | b'X'));
        let mutated = format!("{}{}", &text[..at], &text[at + 1..]);
        prop_assert!(parse_equation(&mutated).is_err(), "{}", mutated);
    }
}
