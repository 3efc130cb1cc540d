//! Exact arithmetic: prime fields, rationals, quadratic fields, and
//! quadratic-character symbols.

mod gauss;
pub mod poly;
pub mod prime;
mod quad;
pub mod rational;
mod symbols;

pub use gauss::{gauss_sum_square, GaussSquare};
pub use poly::{FpPoly, QPoly};
pub use prime::{is_prime, PrimeField, PrimeFieldElement};
pub use quad::{is_squarefree, QuadFieldElement};
pub use rational::{parse_rational, BigRational};
pub use symbols::{kronecker_prime, legendre_big, legendre_kronecker, primitive_root};
