//! Arithmetic and equation solving over the periodic part of finite discrete
//! dynamical systems.
//!
//! A system restricted to its strongly connected components is a multiset of
//! cycles, written `C(p,n)` for `n` cycles of period `p`. Under disjoint union
//! and synchronous product these multisets form a commutative semiring
//! ([`CycleSet`]). On top of it the crate provides:
//!
//! * [`graph`]: explicit functional graphs used as ground truth,
//! * [`decomposition`]: change-making and restricted partitions over divisor coins,
//! * [`colored_tree`]: complete enumeration of the solutions of `C(p,1) * X = C(q,n)`,
//! * [`pipeline`]: linear equations `sum_i A_i * X_i^w_i = B` reduced to the simple shape,
//! * [`lang`]: the text notation, parsers and serializers.

pub mod algebra;
pub mod colored_tree;
pub mod decomposition;
pub mod graph;
pub mod lang;
pub mod pipeline;

pub use algebra::{AlgebraError, CycleSet, SolutionSet, DEFAULT_ROOT_BUDGET};
pub use colored_tree::{solve_simple, verify_simple_solution, ColoredTree};
pub use graph::{brute_force_simple_solutions, FunctionGraph};
pub use pipeline::{solve_equation, z_bounds, Assignment, Equation, SolveOptions, Term, VarId};
