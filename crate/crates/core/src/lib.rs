//! Exact computations with finite-dimensional algebras given by structure
//! constants: twisted tensor products, Brzeziński crossed products and their
//! mirror version, and two-sided crossed products `A ▷ V ◁ C` built from maps
//! `R1`, `R2`, `R3`, `E`.
//!
//! All arithmetic is exact over `Q` or `F_p`. Every axiom is checked on basis
//! tuples, which suffices by multilinearity, and every failure carries the
//! lexicographically smallest witness.
#![no_std]

extern crate alloc;

pub mod algebra;
pub mod constructions;
pub mod crossed;
pub mod error;
pub mod fixtures;
pub mod linalg;
pub mod report;
pub mod scalar;
pub mod search;
pub mod tensor;
pub mod twosided;

pub use algebra::{is_algebra_map, ordinary_tensor, Coalgebra, FinAlgebra, PointedSpace};
pub use error::{Error, Result};
pub use report::{Condition, Report, Witness};
pub use scalar::{Field, Scalar};
pub use tensor::{compose, flip, tensor, TensorMap, TensorShape};
