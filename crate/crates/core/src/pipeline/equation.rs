use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, CycleSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquationError {
    #[error("an equation needs at least one term")]
    NoTerms,
    #[error("coefficient of {var} is the empty system")]
    EmptyCoefficient { var: VarId },
    #[error("exponent of {var} must be at least 1")]
    ZeroExponent { var: VarId },
    #[error("{var} appears with exponents {first} and {second}")]
    ConflictingExponents { var: VarId, first: u32, second: u32 },
    #[error("right-hand side is the empty system")]
    EmptyRhs,
    #[error("assignment has no value for {var}")]
    MissingVariable { var: VarId },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Variable `X<index>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub u32);

impl Serialize for VarId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for VarId {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        raw.strip_prefix('X')
            .filter(|digits| digits.bytes().all(|b| b.is_ascii_digit()))
            .and_then(|digits| digits.parse().ok())
            .map(VarId)
            .ok_or_else(|| serde::de::Error::custom(format!("invalid variable name {raw:?}")))
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X{}", self.0)
    }
}

/// `coefficient * var^exponent`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Term {
    #[serde(rename = "coeff")]
    pub coefficient: CycleSet,
    pub var: VarId,
    #[serde(rename = "exp")]
    pub exponent: u32,
}

impl Term {
    pub fn new(coefficient: CycleSet, var: VarId, exponent: u32) -> Self {
        Term {
            coefficient,
            var,
            exponent,
        }
    }
}

/// `sum_i A_i * X_i^w_i = B` with one term per variable, ordered by variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Equation {
    terms: Vec<Term>,
    rhs: CycleSet,
}

impl Equation {
    /// Validates and folds the terms; repeated variables have their coefficients summed.
    pub fn new(terms: Vec<Term>, rhs: CycleSet) -> Result<Self, EquationError> {
        if terms.is_empty() {
            return Err(EquationError::NoTerms);
        }
        if rhs.is_empty() {
            return Err(EquationError::EmptyRhs);
        }
        let mut folded: BTreeMap<VarId, Term> = BTreeMap::new();
        for term in terms {
            if term.exponent == 0 {
                return Err(EquationError::ZeroExponent { var: term.var });
            }
            match folded.get_mut(&term.var) {
                Some(existing) if existing.exponent != term.exponent => {
                    return Err(EquationError::ConflictingExponents {
                        var: term.var,
                        first: existing.exponent,
                        second: term.exponent,
                    });
                }
                Some(existing) => {
                    existing.coefficient = existing.coefficient.checked_add(&term.coefficient)?;
                }
                None => {
                    folded.insert(term.var, term);
                }
            }
        }
        if let Some(t) = folded.values().find(|t| t.coefficient.is_empty()) {
            return Err(EquationError::EmptyCoefficient { var: t.var });
        }
        Ok(Equation {
            terms: folded.into_values().collect(),
            rhs,
        })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn rhs(&self) -> &CycleSet {
        &self.rhs
    }

    pub fn variables(&self) -> impl Iterator<Item = VarId> + '_ {
        self.terms.iter().map(|t| t.var)
    }

    /// Total number of single cycles over all coefficients.
    pub fn coefficient_cycles(&self) -> u128 {
        self.terms.iter().map(|t| t.coefficient.cycle_count()).sum()
    }

    /// Left-hand side evaluated at the given values of `X_i^w_i`.
    pub fn evaluate_powers(
        &self,
        values: &BTreeMap<VarId, CycleSet>,
    ) -> Result<CycleSet, EquationError> {
        let mut total = CycleSet::empty();
        for term in &self.terms {
            let value = values
                .get(&term.var)
                .ok_or(EquationError::MissingVariable { var: term.var })?;
            total = total.checked_add(&term.coefficient.multiply(value)?)?;
        }
        Ok(total)
    }

    /// Left-hand side evaluated at base values `x_i`, raising each to its exponent.
    pub fn evaluate_bases(
        &self,
        bases: &BTreeMap<VarId, CycleSet>,
    ) -> Result<CycleSet, EquationError> {
        let mut total = CycleSet::empty();
        for term in &self.terms {
            let base = bases
                .get(&term.var)
                .ok_or(EquationError::MissingVariable { var: term.var })?;
            let value = base.power(term.exponent)?;
            total = total.checked_add(&term.coefficient.multiply(&value)?)?;
        }
        Ok(total)
    }
}

impl<'de> Deserialize<'de> for Equation {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            terms: Vec<Term>,
            rhs: CycleSet,
        }
        let raw = Raw::deserialize(deserializer)?;
        Equation::new(raw.terms, raw.rhs).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, term) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({}) * {}", term.coefficient, term.var)?;
            if term.exponent != 1 {
                write!(f, "^{}", term.exponent)?;
            }
        }
        write!(f, " = {}", self.rhs)
    }
}

/// A solution: the value of every `X_i^w_i`, plus the base values `x_i`
/// for variables raised to a power above one.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Assignment {
    pub values: BTreeMap<VarId, CycleSet>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub roots: BTreeMap<VarId, Vec<CycleSet>>,
}

impl Assignment {
    /// Builds the assignment from base values, computing each `x_i^w_i`.
    pub fn from_bases(
        eq: &Equation,
        bases: &BTreeMap<VarId, CycleSet>,
    ) -> Result<Self, EquationError> {
        let mut out = Assignment::default();
        for term in eq.terms() {
            let base = bases
                .get(&term.var)
                .ok_or(EquationError::MissingVariable { var: term.var })?;
            out.values.insert(term.var, base.power(term.exponent)?);
            if term.exponent > 1 {
                out.roots.insert(term.var, vec![base.clone()]);
            }
        }
        Ok(out)
    }
}

/// True iff the left-hand side evaluated at `a` equals the right-hand side and
/// every reported root raised to its exponent gives the reported value.
pub fn verify_assignment(eq: &Equation, a: &Assignment) -> Result<bool, EquationError> {
    if eq.evaluate_powers(&a.values)? != *eq.rhs() {
        return Ok(false);
    }
    for term in eq.terms() {
        let Some(roots) = a.roots.get(&term.var) else {
            continue;
        };
        let value = &a.values[&term.var];
        for root in roots {
            if root.power(term.exponent)? != *value {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
