//! Linear equations over cycle systems, reduced to simple equations.

mod distribute;
mod equation;
mod oracle;
mod solve;

pub use distribute::{
    cells, distribution_count, z_bounds, Cell, Distribution, Distributions, SolveBounds,
};
pub use equation::{verify_assignment, Assignment, Equation, EquationError, Term, VarId};
pub use oracle::brute_force_equation;
pub use solve::{solve_equation, SolveOptions, SolveReport, SolveStats};
