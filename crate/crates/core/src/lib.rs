//! Symbolic mod-p Dyer-Lashof operations on graded-commutative `F_p`-algebras.

pub mod classify;
pub mod config;
pub mod error;
pub mod fp;
pub mod graded;
pub mod linalg;
pub mod op_expr;
pub mod steenrod;
pub mod r_algebra;
pub mod scenario;
pub mod unstable;

pub use error::{Error, Result};
pub use fp::{FpScalar, Prime};
