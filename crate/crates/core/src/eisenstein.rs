//! Theta and the twisted Eisenstein series `G_{k,D₁,D₂}`, `G_{k,D}`, `G_{k,4D}`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{
    dirichlet_l_nonpositive, kronecker_symbol, DiscriminantFactorization,
    OddFundamentalDiscriminant, Rational,
};
use crate::error::{Error, Result};
use crate::qseries::QSeries;

/// `θ(z) = Σ_{n∈ℤ} q^{n²}` to the given precision.
pub fn theta(prec: usize) -> QSeries {
    assert!(prec >= 1, "precision must be positive");
    let mut coeffs = vec![Rational::zero(); prec];
    coeffs[0] = Rational::one();
    let two = Rational::from(2);
    let mut n = 1usize;
    while n * n < prec {
        coeffs[n * n] = two.clone();
        n += 1;
    }
    QSeries::new(1, coeffs).expect("nonempty")
}

/// The twisted divisor sum
/// `σ_{k-1,D₁,D₂}(n) = Σ_{d₁d₂=n} χ_{D₁}(d₁) χ_{D₂}(d₂) d₁^{k-1}` for `n > 0`,
/// with constant term `L_D(1-k)/2` when `D₂ = 1` and `0` otherwise.
#[derive(Clone, Debug)]
pub struct TwistedSigma {
    k: u32,
    fac: DiscriminantFactorization,
    constant: Rational,
}

impl TwistedSigma {
    pub fn new(k: u32, fac: DiscriminantFactorization) -> Result<Self> {
        let fac = DiscriminantFactorization::new(fac.d1, fac.d2)?;
        if k < 2 {
            return Err(Error::InvalidArgument(format!("sigma needs k >= 2, got {k}")));
        }
        let constant = if fac.d2 == 1 {
            let d = OddFundamentalDiscriminant::new(fac.d1)?;
            dirichlet_l_nonpositive(d, 1 - k as i64)? / Rational::from(2)
        } else {
            Rational::zero()
        };
        Ok(TwistedSigma { k, fac, constant })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn factorization(&self) -> DiscriminantFactorization {
        self.fac
    }

    /// `σ(0)`.
    pub fn constant(&self) -> &Rational {
        &self.constant
    }

    /// Local factor at `p^v`: `Σ_{i+j=v} χ₁(p)^i χ₂(p)^j p^{i(k-1)}`.
    pub fn local_factor(&self, p: u64, v: u32) -> BigInt {
        let c1 = kronecker_symbol(self.fac.d1, p as i64);
        let c2 = kronecker_symbol(self.fac.d2, p as i64);
        let pk = num_traits::pow(BigInt::from(p), (self.k - 1) as usize);
        let mut acc = BigInt::zero();
        let mut term_p = BigInt::one();
        for i in 0..=v {
            let sign = pow_sign(c1, i) * pow_sign(c2, v - i);
            if sign != 0 {
                if sign > 0 {
                    acc += &term_p;
                } else {
                    acc -= &term_p;
                }
            }
            term_p *= &pk;
        }
        acc
    }

    /// `σ(n)` for `n >= 1` from the prime factorization of `n`.
    pub fn from_factors(&self, factors: &[(u64, u32)]) -> BigInt {
        factors
            .iter()
            .fold(BigInt::one(), |acc, &(p, v)| acc * self.local_factor(p, v))
    }

    /// `σ(n)` as a rational, including the constant term at `n = 0`.
    pub fn value(&self, n: u64) -> Rational {
        if n == 0 {
            return self.constant.clone();
        }
        Rational::from(self.value_by_divisors(n))
    }

    /// Direct divisor enumeration, for `n >= 1`.
    pub fn value_by_divisors(&self, n: u64) -> BigInt {
        assert!(n >= 1);
        let mut acc = BigInt::zero();
        for d1 in (1..=n).filter(|d| n.is_multiple_of(*d)) {
            let c = kronecker_symbol(self.fac.d1, d1 as i64)
                * kronecker_symbol(self.fac.d2, (n / d1) as i64);
            if c != 0 {
                let t = num_traits::pow(BigInt::from(d1), (self.k - 1) as usize);
                if c > 0 {
                    acc += t;
                } else {
                    acc -= t;
                }
            }
        }
        acc
    }

    /// `σ(1), …, σ(len-1)` by a divisor sieve, with `σ(0)` in front.
    pub fn table(&self, len: usize) -> Vec<Rational> {
        let mut ints = vec![BigInt::zero(); len];
        let chi2: Vec<i32> = (0..len)
            .map(|n| kronecker_symbol(self.fac.d2, n as i64))
            .collect();
        for d1 in 1..len {
            let c1 = kronecker_symbol(self.fac.d1, d1 as i64);
            if c1 == 0 {
                continue;
            }
            let pw = num_traits::pow(BigInt::from(d1), (self.k - 1) as usize);
            for d2 in 1..=(len - 1) / d1 {
                let c = c1 * chi2[d2];
                if c > 0 {
                    ints[d1 * d2] += &pw;
                } else if c < 0 {
                    ints[d1 * d2] -= &pw;
                }
            }
        }
        let mut out: Vec<Rational> = ints.into_iter().map(Rational::from).collect();
        if let Some(first) = out.first_mut() {
            *first = self.constant.clone();
        }
        out
    }
}

fn pow_sign(c: i32, e: u32) -> i32 {
    if e == 0 {
        1
    } else if c == 0 {
        0
    } else if c == -1 && e % 2 == 1 {
        -1
    } else {
        1
    }
}

/// Free-function form: `σ_{k-1,D₁,D₂}(n)`.
pub fn sigma(k: u32, d1: i64, d2: i64, n: u64) -> Result<Rational> {
    Ok(TwistedSigma::new(k, DiscriminantFactorization::new(d1, d2)?)?.value(n))
}

/// `G_{k,D₁,D₂} = Σ_{n≥0} σ_{k-1,D₁,D₂}(n) q^n`, weight `k`.
pub fn eisenstein_g(k: u32, d1: i64, d2: i64, prec: usize) -> Result<QSeries> {
    if k < 3 {
        return Err(Error::InvalidArgument(format!("Eisenstein series need k >= 3, got {k}")));
    }
    if prec == 0 {
        return Err(Error::InvalidArgument("precision must be positive".into()));
    }
    let sigma = TwistedSigma::new(k, DiscriminantFactorization::new(d1, d2)?)?;
    QSeries::new(2 * k as i64, sigma.table(prec))
}

/// `G_{k,D} = G_{k,D,1}`.
pub fn eisenstein_gkd(k: u32, d: OddFundamentalDiscriminant, prec: usize) -> Result<QSeries> {
    eisenstein_g(k, d.value(), 1, prec)
}

/// `G_{k,4D}(z) = G_{k,D}(4z) − 2^{−k} χ_D(2) G_{k,D}(2z)`.
pub fn eisenstein_g4d(k: u32, d: OddFundamentalDiscriminant, prec: usize) -> Result<QSeries> {
    if prec == 0 {
        return Err(Error::InvalidArgument("precision must be positive".into()));
    }
    let base = eisenstein_gkd(k, d, prec / 2 + 1)?;
    let four = base.clone().truncate((prec - 1).div_ceil(4) + 1).dilate(4).truncate(prec);
    let two = base.dilate(2).truncate(prec);
    let c = Rational::new(d.chi(2), BigInt::from(2).pow(k));
    four.sub(&two.scale(&c))
}

/// Evaluates `σ` at many arguments given their factorizations, caching local factors.
pub(crate) struct SigmaCache<'a> {
    sigma: &'a TwistedSigma,
    local: HashMap<(u64, u32), BigInt>,
}

impl<'a> SigmaCache<'a> {
    pub fn new(sigma: &'a TwistedSigma) -> Self {
        SigmaCache {
            sigma,
            local: HashMap::new(),
        }
    }

    pub fn eval(&mut self, factors: &[(u64, u32)]) -> BigInt {
        let mut acc = BigInt::one();
        for &(p, v) in factors {
            if v == 0 {
                continue;
            }
            let sigma = self.sigma;
            let f = self
                .local
                .entry((p, v))
                .or_insert_with(|| sigma.local_factor(p, v));
            if f.is_zero() {
                return BigInt::zero();
            }
            acc *= &*f;
        }
        acc
    }
}
