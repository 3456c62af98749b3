//! Exact symbolic engine for conformally equivariant quantization on flat
//! pseudo-Euclidean space.

pub mod cli;
pub mod codec;
pub mod curved;
pub mod diff_op;
pub mod endo;
pub mod error;
pub mod harmonic;
pub mod invariants;
pub mod jet;
pub mod lie;
pub mod linalg;
pub mod poly;
pub mod quantizer;
pub mod resonance;
pub mod scalar;
pub mod star;
pub mod verify;

pub use diff_op::OperatorSymbol;
pub use endo::EndoOperator;
pub use error::{Error, Result};
pub use poly::{Monomial, Signature, SymbolPolynomial, VarKind, Weights, MAX_N};
pub use scalar::{Coefficient, Gaussian, Rational};
