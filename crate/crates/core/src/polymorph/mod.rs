//! Finite operations, polymorphism checks, ties and H-symmetry.

mod check;
mod examples;
mod function;
mod ties;

pub use check::{
    check_symmetry_class, enumerate_polymorphisms, is_polymorphism, polymorphism_violation,
    SymmetryClass,
};
pub use examples::{
    aip_polymorphism, example_polymorphism, example_template, example_tie_matrix,
    ExamplePolymorphism,
};
pub use function::{FiniteFunction, Operation};
pub use ties::{
    first_h_asymmetry, is_h_symmetric, is_h_tieless, is_tie_matrix, is_tieless,
    multiplicity_vector, tie_count, TieMatrix,
};

/// Refusal threshold for tables and relation powers.
pub const DEFAULT_BUDGET: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("{what} too large: exceeds budget of {budget}")]
    TooLarge { what: &'static str, budget: usize },
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("not a tie matrix: entries must be nonnegative and columns tieless")]
    NotATieMatrix,
}
