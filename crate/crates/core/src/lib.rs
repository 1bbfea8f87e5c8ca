//! Exact desk-scale simulation of entropically secure quantum encryption.
//!
//! The crate computes quantum conditional min-entropy by semidefinite
//! optimisation, implements the delta-biased Pauli cipher and the
//! XOR-universal cipher, and measures the indistinguishability distance and
//! key-length bounds these ciphers are supposed to satisfy.

pub mod bits;
pub mod cipher;
pub mod cli;
pub mod error;
pub mod gf2;
pub mod harness;
pub mod linalg;
pub mod minentropy;
pub mod pauli;
pub mod tol;

pub use bits::{symplectic_dot, BitString};
pub use error::{Error, Result};
pub use linalg::{DensityOperator, HermitianOperator, Layout};
