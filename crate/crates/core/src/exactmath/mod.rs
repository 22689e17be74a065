//! Exact rational and integer arithmetic: LP feasibility, relative-interior
//! points, Hermite normal form, integer feasibility.

pub mod integer;
pub mod lp;
pub mod rational;
mod simplex;

pub use integer::{hermite, hnf, integer_solve, Hermite, IntMatrix, IntegerSystem};
pub use lp::{
    lp_feasible, lp_maximize, relative_interior_point, relative_interior_point_with,
    InteriorStrategy, LinearRow, LpError, LpProblem, VarLabel,
};
pub use rational::{common_denominator, ParseRationalError, Rational};
