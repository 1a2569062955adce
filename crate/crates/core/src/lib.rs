//! Computations in the mod p Steenrod algebra acting on the cohomology of
//! elementary abelian p-groups, together with gap-based non-realizability
//! checks for unstable modules.

pub mod admissible;
pub mod binomial;
pub mod bv;
pub mod error;
pub mod exchange;
pub mod expr;
pub mod linalg;
pub mod milnor;
pub mod obstruct;
pub mod odd;
pub mod span;
pub mod suites;

pub use error::{Error, Result};
