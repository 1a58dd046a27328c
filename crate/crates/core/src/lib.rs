//! Pairing ground states of the attractive Hubbard model, their phase
//! stiffness and overlaps, and the circuit and qubit quantities built on them.

// `!(x > 0.0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circuit;
pub mod error;
pub mod fock;
pub mod gaussian;
pub mod lattice;
pub mod linalg;
pub mod meanfield;
pub mod phase;
pub mod qubit;
pub mod tridiag;
pub mod verify;

pub use error::{Error, Result};
