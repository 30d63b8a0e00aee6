//! Exact homological algebra over prime fields.
//!
//! The crate builds group algebras and algebras given by structure constants,
//! resolves modules over them, and computes derived tensor products, Tor,
//! relative differentials, truncated free products and derived localizations
//! at idempotents. Everything is exact arithmetic in F_p.

pub mod acceptance;
pub mod algebra;
pub mod battery;
pub mod complex;
pub mod derived;
pub mod error;
pub mod freeprod;
pub mod fp;
pub mod group;
pub mod idempotent;
pub mod localization;
pub mod module;
pub mod proj;
pub mod resolution;
pub mod structure;

pub use algebra::{Algebra, AlgebraMap};
pub use complex::{AComplex, ChainMap};
pub use error::{Error, Result};
pub use fp::{FpMatrix, Subspace};
pub use group::GroupTable;
pub use idempotent::Idempotent;
pub use module::{Bimodule, Module};
