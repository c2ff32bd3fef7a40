//! Exact computations with vector bundles on chains and cycles of projective
//! lines: splitting types on P¹, the weighted matrix problem for chains, band
//! data on cycles, their cohomology, Cohen–Macaulay module enumeration over
//! simple elliptic, cusp and Q-cusp singularities, and explicit wildness
//! gadgets.
//!
//! All arithmetic is exact, over Q or a prime field chosen at run time.

pub mod band;
pub mod chain;
pub mod cmmod;
pub mod cohom;
pub mod error;
pub mod field;
pub mod laurent;
pub mod linalg;
pub mod wild;

pub use error::{Error, Result};
pub use field::{Field, FieldElem};
pub use linalg::Matrix;
