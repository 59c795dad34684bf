//! Jet-space primitives: multi-indices, differential polynomials, total
//! and Fréchet derivatives, higher Eulerian operators.

mod calculus;
mod derivs;
mod multiindex;
mod poly;

pub use calculus::{
    euler_lagrange, euler_reconstruction, frechet_apply, frechet_derivative, higher_euler,
    higher_euler_all, is_classical_divergence, second_frechet, total_derivative, OperatorRow,
    SecondFrechet,
};
pub use derivs::{Derivatives, TotalDerivative};
pub use multiindex::{multi_binomial, MultiIndex};
pub use poly::{DiffPolynomial, JetVar, Monomial};
