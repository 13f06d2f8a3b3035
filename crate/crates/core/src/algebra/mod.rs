//! Value semantics of systems reduced to their cycles.

pub(crate) mod arith;
mod cycle_set;
mod power;
mod root;
mod solution;

pub use cycle_set::{Component, CycleSet};
pub use power::MAX_CLOSED_FORM_TERMS;
pub use root::DEFAULT_ROOT_BUDGET;
pub use solution::SolutionSet;

pub(crate) use power::WeakCompositions;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("invalid component: period must be positive, got {period}")]
    InvalidComponent { period: u64 },
    #[error("arithmetic overflow in cycle multiplicities or periods")]
    Overflow,
    #[error("root exponent must be at least 1")]
    InvalidExponent,
    #[error("root search budget of {budget} candidates exhausted")]
    BudgetExhausted { budget: u64 },
    #[error("power closed form would enumerate {terms} terms")]
    ExpansionTooLarge { terms: u128 },
}
