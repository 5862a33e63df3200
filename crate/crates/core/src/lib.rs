//! Exact q-expansions for twisted Eisenstein series, Rankin–Cohen brackets and
//! the `D`-th Shimura lift, with the linear algebra needed to test spanning
//! and independence of the resulting generators.
//!
//! Every coefficient is an exact rational. Nothing here uses floating point.

pub mod arith;
pub mod brackets;
pub mod eisenstein;
pub mod error;
pub mod lifts;
pub mod qseries;
pub mod spanning;

pub use arith::{
    dirichlet_l_nonpositive, factorizations, generalized_bernoulli, half_binomial,
    is_odd_fundamental, kronecker_symbol, DiscriminantFactorization, OddFundamentalDiscriminant,
    Rational,
};
pub use brackets::{c_polynomial, check_lemma22, e_polynomial, rankin_cohen, HalfWeight};
pub use eisenstein::{eisenstein_g, eisenstein_g4d, eisenstein_gkd, sigma, theta, TwistedSigma};
pub use error::{Error, Result};
pub use lifts::{
    f_coefficient, f_coefficients, f_generator_series, g_coefficients_at, g_generator_series,
    lifted_g_coefficient, lifted_g_coefficients, shimura_lift, verify_theorem1,
    verify_theorem1_with, GeneratorSpec, LiftReport, VerifyOptions,
};
pub use qseries::QSeries;
pub use spanning::{
    conjecture_matrix, conjecture_sweep, determinant, dim_cusp_level1, f_rank_check, rank,
    EntrySource, RankCheck, RationalMatrix, SweepRecord,
};
