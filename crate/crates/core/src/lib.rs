//! Loewy-theoretic invariants of local rings, computed exactly over prime fields.

pub mod certify;
pub mod error;
pub mod graded;
pub mod harness;
pub mod koszul;
pub mod linalg;
pub mod localring;
pub mod oracle;
pub mod resolve;
pub mod ring_core;
pub mod stdbasis;
pub mod util;

pub use error::{Error, Result};
pub use ring_core::{Model, Monomial, MonomialOrder, Polynomial, PrimeField, RingSpec, Scalar};
