//! Exact verification of differential-operator identities for the
//! `(g, K)`-modules `M^±_m` of `O(p, q)`.
//!
//! Everything is computed over `Q(i)` with no floating point. Formal power
//! series are handled as total-degree truncations that carry the degree up to
//! which they are exact.

pub mod arith;
pub mod cli;
pub mod error;
pub mod gkmodule;
pub mod liealg;
pub mod linalg;
pub mod poly;
pub mod symsq;
pub mod weyl;

pub use arith::GaussianRational;
pub use error::{Error, Result};
pub use gkmodule::{KType, ModuleParams, Sign, TruncatedElement};
pub use liealg::{EnvelopingElement, Flavor, Generator, LieElement, Signature};
pub use poly::{Block, Monomial, MultiPoly, VariableSpace};
pub use symsq::SymSquareTensor;
pub use weyl::WeylOperator;
