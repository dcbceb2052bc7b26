//! Verification engine for ℤ-linearized finite categories and the covering,
//! sheaf, quotient and parametrization structures built on them.
//!
//! Every value is immutable once constructed and every check is a pure
//! function returning a serializable report. Heavy enumerations run through
//! [`par`], which uses rayon when the `parallel` feature is enabled.

pub mod blur;
pub mod error;
pub mod fincat;
pub mod fingerprint;
pub mod fixtures;
pub mod modular;
pub mod par;
pub mod sheaf;
pub mod site;
pub mod verdict;
pub mod zlin;

pub use error::{Error, Result};
pub use verdict::Verdict;
