//! Divergence-graded formal variational calculus.
//!
//! Local functionals are written as `∫ θ^(J) f^<J>` where `θ^(J) = D_J θ`
//! is a derivative of the characteristic function of the integration
//! domain. Only *formal* divergences (total derivatives of θ-carrying
//! densities) are discarded, so boundary contributions survive every
//! operation. On top of that calculus this crate builds graded
//! differential operators and their adjoints, functional forms and
//! multivectors, the Schouten–Nijenhuis bracket, Poisson brackets with
//! surface terms, and a decision procedure for Hamiltonian operators.
//!
//! Everything is exact rational arithmetic; every operation is a pure
//! function of immutable values.

pub mod exec;
pub mod frontend;
pub mod graded;
pub mod jet;
pub mod linalg;
pub mod operators;
pub mod poisson;
pub mod random;
pub mod tensors;

mod error;
mod space;

pub use error::Error;
pub use space::Space;

/// Exact coefficient type used throughout.
pub type Rational = num_rational::BigRational;

/// `(-1)^k` as a rational.
pub fn sign(k: u32) -> Rational {
    Rational::from_integer(if k.is_multiple_of(2) { 1 } else { -1 }.into())
}

/// Shorthand for a small rational `p/q`.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}
