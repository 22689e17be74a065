//! Matrices with eventually constant columns, the minion of skeletal pairs,
//! its bounded subminions, tie-breaking and the map into polymorphisms.

mod element;
mod matrix;
mod tiebreak;
mod xi;

pub use element::{enumerate_c_d, random_c_d, MinionElement, MinorMap};
pub use matrix::EvcMatrix;
pub use tiebreak::{tiebreak, tiebreak_from, Tiebreak};
pub use xi::{regime_n, sigma_hat, xi_blocks, xi_map, XiFunction};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MinionError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("matrix {0} is not skeletal")]
    NotSkeletal(usize),
    #[error("not a minion element: {0}")]
    NotInMinion(String),
    #[error("tie-breaking stalled at iteration {iteration}: every step creates a new tie")]
    NoAdmissibleStep { iteration: usize },
    #[error("outside the regime: {0}")]
    Regime(String),
    #[error("enumeration exceeds budget of {0}")]
    TooLarge(usize),
}
