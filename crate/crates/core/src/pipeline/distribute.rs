use serde::Serialize;

use super::{Equation, EquationError};
use crate::algebra::arith::binomial;
use crate::algebra::{AlgebraError, WeakCompositions};

/// One coefficient cycle `C(period,1)` of the term at index `term`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cell {
    pub term: usize,
    pub period: u64,
}

/// Coefficient cycles in peeling order: by term (hence variable), then period.
pub fn cells(eq: &Equation) -> Vec<Cell> {
    eq.terms()
        .iter()
        .enumerate()
        .flat_map(|(term, t)| {
            t.coefficient.components().iter().flat_map(move |c| {
                std::iter::repeat_n(
                    Cell {
                        term,
                        period: c.period,
                    },
                    c.count as usize,
                )
            })
        })
        .collect()
}

/// How many right-hand cycles of each period every cell must produce.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distribution {
    /// `per_period[j][c]`: cycles of the `j`-th right-hand period assigned to cell `c`.
    per_period: Vec<Vec<u32>>,
}

impl Distribution {
    pub fn count(&self, cell: usize, period_index: usize) -> u32 {
        self.per_period[period_index][cell]
    }

    pub fn period_count(&self) -> usize {
        self.per_period.len()
    }
}

/// Lazy stars-and-bars enumeration: every way to share each right-hand
/// period's cycles among the cells.
pub struct Distributions {
    cells: usize,
    totals: Vec<u32>,
    generators: Vec<WeakCompositions>,
    current: Vec<Vec<u32>>,
    started: bool,
    done: bool,
}

impl Distributions {
    pub fn new(eq: &Equation) -> Result<Self, EquationError> {
        let cells = cells(eq).len();
        let totals = eq
            .rhs()
            .components()
            .iter()
            .map(|c| u32::try_from(c.count).map_err(|_| AlgebraError::Overflow))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Distributions {
            cells,
            generators: totals
                .iter()
                .map(|&t| WeakCompositions::new(t, cells))
                .collect(),
            current: vec![vec![0; cells]; totals.len()],
            totals,
            started: false,
            done: false,
        })
    }
}

impl Iterator for Distributions {
    type Item = Distribution;

    fn next(&mut self) -> Option<Distribution> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            for (g, slot) in self.generators.iter_mut().zip(self.current.iter_mut()) {
                if !g.next_into(slot) {
                    self.done = true;
                    return None;
                }
            }
        } else {
            let mut j = self.generators.len();
            loop {
                if j == 0 {
                    self.done = true;
                    return None;
                }
                j -= 1;
                if self.generators[j].next_into(&mut self.current[j]) {
                    break;
                }
                self.generators[j] = WeakCompositions::new(self.totals[j], self.cells);
                self.generators[j].next_into(&mut self.current[j]);
            }
        }
        Some(Distribution {
            per_period: self.current.clone(),
        })
    }
}

/// Bounds on the number of simple equations the contraction solves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SolveBounds {
    pub lower: u128,
    pub upper: u128,
}

/// Number of distributions: `prod_j binom(n_j + S - 1, S - 1)` for `S` cells.
pub fn distribution_count(eq: &Equation) -> Result<u128, EquationError> {
    let cells = eq.coefficient_cycles();
    let cells = u64::try_from(cells).map_err(|_| AlgebraError::Overflow)?;
    eq.rhs().components().iter().try_fold(1u128, |acc, c| {
        let ways = binomial(c.count + cells - 1, cells - 1).ok_or(AlgebraError::Overflow)?;
        Ok(acc.checked_mul(ways).ok_or(AlgebraError::Overflow)?)
    })
}

/// `lower = D * m` and `upper = lower * S`, with `D` distributions, `m`
/// distinct right-hand periods and `S` coefficient cycles.
pub fn z_bounds(eq: &Equation) -> Result<SolveBounds, EquationError> {
    let periods = eq.rhs().distinct_periods() as u128;
    let lower = distribution_count(eq)?
        .checked_mul(periods)
        .ok_or(AlgebraError::Overflow)?;
    let upper = lower
        .checked_mul(eq.coefficient_cycles())
        .ok_or(AlgebraError::Overflow)?;
    Ok(SolveBounds { lower, upper })
}
