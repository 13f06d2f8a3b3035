use std::collections::{BTreeMap, BTreeSet};

use super::{Equation, EquationError, VarId};
use crate::algebra::CycleSet;
use crate::decomposition::divisors;

/// Every base assignment solving `eq`, by exhaustive search.
///
/// Each cycle of `x` yields at least one cycle of `A * x^w`, whose period is
/// a multiple of the cycle's own; so `x` ranges over the multisets of divisors
/// of right-hand periods with at most `|B|` cycles. Powers are taken by
/// repeated multiplication. Exponential in `|B|`; meant for small equations.
pub fn brute_force_equation(
    eq: &Equation,
) -> Result<BTreeSet<BTreeMap<VarId, CycleSet>>, EquationError> {
    let rhs = eq.rhs();
    let periods: Vec<u64> = rhs
        .periods()
        .flat_map(|q| divisors(q).coins().to_vec())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let max_cycles = u64::try_from(rhs.cycle_count()).unwrap_or(u64::MAX);

    // per variable: (x, A * x^w) with the product fitting inside the rhs
    let mut options: Vec<(VarId, Vec<(CycleSet, CycleSet)>)> = Vec::new();
    for term in eq.terms() {
        let mut fits = Vec::new();
        let mut counts = vec![0u64; periods.len()];
        loop {
            let x = CycleSet::canonicalize(periods.iter().copied().zip(counts.iter().copied()))?;
            let mut value = CycleSet::one();
            for _ in 0..term.exponent {
                value = value.multiply(&x)?;
            }
            let contribution = term.coefficient.multiply(&value)?;
            if contribution.is_submultiset_of(rhs) {
                fits.push((x, contribution));
            }
            if !next_bounded(&mut counts, max_cycles) {
                break;
            }
        }
        options.push((term.var, fits));
    }

    let mut out = BTreeSet::new();
    search(
        &options,
        rhs,
        &CycleSet::empty(),
        &mut BTreeMap::new(),
        &mut out,
    )?;
    Ok(out)
}

/// Odometer over count vectors with total at most `max`.
fn next_bounded(counts: &mut [u64], max: u64) -> bool {
    let mut total: u64 = counts.iter().sum();
    for c in counts.iter_mut() {
        if total < max {
            *c += 1;
            return true;
        }
        total -= *c;
        *c = 0;
    }
    false
}

fn search(
    options: &[(VarId, Vec<(CycleSet, CycleSet)>)],
    rhs: &CycleSet,
    partial: &CycleSet,
    chosen: &mut BTreeMap<VarId, CycleSet>,
    out: &mut BTreeSet<BTreeMap<VarId, CycleSet>>,
) -> Result<(), EquationError> {
    let Some(((var, fits), rest)) = options.split_first() else {
        if partial == rhs {
            out.insert(chosen.clone());
        }
        return Ok(());
    };
    for (x, contribution) in fits {
        let sum = partial.checked_add(contribution)?;
        if !sum.is_submultiset_of(rhs) {
            continue;
        }
        chosen.insert(*var, x.clone());
        search(rest, rhs, &sum, chosen, out)?;
    }
    chosen.remove(var);
    Ok(())
}
