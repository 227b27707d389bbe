//! Exact arithmetic kernel: arbitrary-precision rationals, integer
//! polynomials, resultants and discriminants, square tests, and bounded
//! integer factorization.

mod factor;
mod poly;
mod rational;
mod resultant;

pub use factor::{factor_partial, is_probable_prime, FactorBudget, PartialFactorization};
pub use poly::{is_square_poly, poly_sqrt_rational, squarefree_and_gcd_tools, IntPoly, PolyOverT};
pub use rational::{is_square_int, is_square_rational, parse_rational, rational_to_string, RationalValue};
pub use resultant::{discriminant_oracle, resultant, resultant_forms};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("operation is undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("operation is undefined for zero input")]
    ZeroInput,
}
