//! Exact computations on graded nilpotent Lie algebras attached to marked
//! Dynkin diagrams, and a rule-based rigidity classifier.

pub mod algebra;
pub mod classify;
pub mod error;
pub mod free_lie;
pub mod json;
pub mod linalg;
pub mod models;
pub mod nilpotent;
pub mod parabolic;
pub mod prolongation;
pub mod rational;
pub mod root_system;
pub mod selftest;
pub mod serre;
pub mod splitting;

pub use algebra::GradedLieAlgebra;
pub use error::{Error, Result};
pub use free_lie::{FreeElement, Presentation};
pub use nilpotent::{nilpotent_quotient, nilpotent_quotient_truncated};
pub use parabolic::MarkedDiagram;
pub use root_system::{Root, RootSystem, TypeLetter};
