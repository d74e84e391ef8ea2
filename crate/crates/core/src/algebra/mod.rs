//! Exact-arithmetic kernel: rationals, univariate polynomials, rational
//! functions, truncated half-integer series, sparse multivariate polynomials,
//! 2×2 matrices and structured linear solvers.

mod halfseries;
mod mat2;
mod multipoly;
mod rational;
mod ratfunc;
mod solvers;
mod unipoly;

pub use halfseries::HalfSeries;
pub use mat2::{Coeff, Mat2};
pub use multipoly::{varset, MultiPoly, VarSet};
pub use rational::Rat;
pub use ratfunc::RatFunc;
pub use solvers::{
    dense_rank, dense_solve, toeplitz_lower_solve, toeplitz_unit_inverse_coeffs, vandermonde_solve,
};
pub use unipoly::UniPoly;
