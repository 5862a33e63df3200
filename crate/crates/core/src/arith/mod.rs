//! Exact arithmetic: rationals, quadratic characters, Bernoulli numbers.

mod bernoulli;
mod binomial;
mod discriminant;
mod kronecker;
mod rational;
mod sieve;

pub use bernoulli::{
    bernoulli_numbers, bernoulli_polynomial, dirichlet_l_nonpositive, generalized_bernoulli,
};
pub use binomial::{binomial, binomial_twice_top, half_binomial};
pub use discriminant::{
    factorizations, is_odd_fundamental, DiscriminantFactorization, OddFundamentalDiscriminant,
};
pub use kronecker::kronecker_symbol;
pub use rational::Rational;
pub use sieve::{divisors_of, PrimeSieve};
