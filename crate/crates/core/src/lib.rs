//! Computational workbench for Brauer algebras `Br_d(δ)`, the level-2
//! cyclotomic VW-algebra in a seminormal matrix model, and the isomorphism
//! between `Br_d(δ)` and an idempotent truncation of the latter.
//!
//! The crate is organised bottom up:
//!
//! * [`numeric`] scalars: rationals, integer polynomials, complex floats.
//! * [`diagram`] and [`algebra`]: diagrams, their products and relations.
//! * [`cellular`]: cell modules, Gram matrices, decomposition numbers.
//! * [`tableau`], [`seminormal`], [`truncation`]: the seminormal model and
//!   the truncated images of the Brauer generators.
//! * [`kl`]: parabolic Kazhdan-Lusztig polynomials of type `(D_n, A_{n-1})`.

pub mod algebra;
pub mod cache;
pub mod cellular;
pub mod diagram;
pub mod kl;
pub mod linalg;
pub mod numeric;
pub mod report;
pub mod seminormal;
pub mod tableau;
pub mod truncation;

#[cfg(doctest)]
mod book;

pub use rug::{Integer, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("index {index} outside {lo}..={hi}")]
    IndexOutOfRange { index: usize, lo: usize, hi: usize },
    #[error("size guard exceeded: {0}")]
    SizeGuard(String),
    #[error("scalar mode mismatch")]
    ModeMismatch,
    #[error("degenerate parameters: {0}")]
    Degenerate(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("i/o: {0}")]
    Io(String),
}
