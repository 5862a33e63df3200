//! Rankin–Cohen brackets and the polynomial kernels that appear in the
//! closed-form coefficients of the generators.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{binomial, binomial_twice_top, half_binomial, Rational};
use crate::error::{Error, Result};
use crate::qseries::QSeries;

/// A weight in `½ℤ`, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HalfWeight {
    twice: i64,
}

impl HalfWeight {
    pub fn from_twice(twice: i64) -> Result<Self> {
        if twice < 1 {
            return Err(Error::InvalidArgument(format!("weight {twice}/2 must be positive")));
        }
        Ok(HalfWeight { twice })
    }

    pub fn integral(k: i64) -> Result<Self> {
        Self::from_twice(2 * k)
    }

    pub fn twice(self) -> i64 {
        self.twice
    }

    pub fn of(series: &QSeries) -> Result<Self> {
        Self::from_twice(series.weight_times_two())
    }
}

/// `[f, g]_e = Σ_{r=0}^{e} (−1)^r C(e+a−1, e−r) C(e+b−1, r) f^{(r)} g^{(e−r)}`.
///
/// Binomials with a half-integral top are evaluated exactly. The result has
/// weight `a + b + 2e` and the smaller of the two precisions.
pub fn rankin_cohen(f: &QSeries, a: HalfWeight, g: &QSeries, b: HalfWeight, e: u32) -> Result<QSeries> {
    rankin_cohen_then_u(f, a, g, b, e, 1)
}

/// `U_m([f, g]_e)`, computing only the coefficients at multiples of `m`.
pub(crate) fn rankin_cohen_then_u(
    f: &QSeries,
    a: HalfWeight,
    g: &QSeries,
    b: HalfWeight,
    e: u32,
    m: usize,
) -> Result<QSeries> {
    if f.weight_times_two() != a.twice() {
        return Err(Error::WeightMismatch {
            left: f.weight_times_two(),
            right: a.twice(),
        });
    }
    if g.weight_times_two() != b.twice() {
        return Err(Error::WeightMismatch {
            left: g.weight_times_two(),
            right: b.twice(),
        });
    }
    let prec = f.prec().min(g.prec());
    let f = f.clone().truncate(prec);
    let g = g.clone().truncate(prec);
    let e64 = e as i64;
    let out_weight = a.twice() + b.twice() + 4 * e64;
    let mut acc = QSeries::zero(out_weight, prec.div_ceil(m));
    for r in 0..=e {
        let ca = binomial_twice_top(2 * e64 + a.twice() - 2, (e - r) as u64);
        let cb = binomial_twice_top(2 * e64 + b.twice() - 2, r as u64);
        let mut c = ca * cb;
        if r % 2 == 1 {
            c = -c;
        }
        if c.is_zero() {
            continue;
        }
        let term = f
            .normalized_derivative(r)
            .mul_then_u(&g.normalized_derivative(e - r), m)
            .with_weight(out_weight)
            .scale(&c);
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// `C_{e,a₁,a₂} = Σ_{r=0}^{2e} (−1)^r a₁^r a₂^{2e−r} C(2e+k−1, 2e−r) C(2e+k−1, r)`.
#[derive(Clone, Debug)]
pub struct CKernel {
    weights: Vec<BigInt>,
}

impl CKernel {
    pub fn new(k: u32, e: u32) -> Self {
        let top = 2 * e as i64 + k as i64 - 1;
        let weights = (0..=2 * e as u64)
            .map(|r| {
                let w = binomial(top, 2 * e as u64 - r) * binomial(top, r);
                if r % 2 == 1 {
                    -w
                } else {
                    w
                }
            })
            .collect();
        CKernel { weights }
    }

    pub fn eval(&self, a1: u64, a2: u64) -> BigInt {
        homogeneous_eval(&self.weights, &BigInt::from(a1), &BigInt::from(a2))
    }
}

/// `E(a₁,a₂) = Σ_{r=0}^{e} (−1)^r C(e+k−1, e−r) C(e−½, r) 4^r (a₁a₂)^r (a₂−a₁)^{2(e−r)}`,
/// held as integer weights over a common denominator.
#[derive(Clone, Debug)]
pub struct EKernel {
    weights: Vec<BigInt>,
    denom: BigInt,
}

impl EKernel {
    pub fn new(k: u32, e: u32) -> Self {
        let e64 = e as u64;
        let raw: Vec<Rational> = (0..=e64)
            .map(|r| {
                let w = Rational::from(binomial(e as i64 + k as i64 - 1, e64 - r))
                    * half_binomial(e64, r)
                    * Rational::from(BigInt::from(4).pow(r as u32));
                if r % 2 == 1 {
                    -w
                } else {
                    w
                }
            })
            .collect();
        let denom = raw
            .iter()
            .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
        let weights = raw
            .iter()
            .map(|w| w.numer() * (&denom / w.denom()))
            .collect();
        EKernel { weights, denom }
    }

    /// Numerator of `E(a₁,a₂)` over [`EKernel::denom`].
    pub fn eval_scaled(&self, a1: u64, a2: u64) -> BigInt {
        let prod = BigInt::from(a1) * BigInt::from(a2);
        let diff = BigInt::from(a2 as i128 - a1 as i128);
        let diff2 = &diff * &diff;
        // Σ w_r · prod^r · diff2^{e−r}
        homogeneous_eval(&self.weights, &prod, &diff2)
    }

    pub fn denom(&self) -> &BigInt {
        &self.denom
    }

    pub fn eval(&self, a1: u64, a2: u64) -> Rational {
        Rational::new(self.eval_scaled(a1, a2), self.denom.clone())
    }
}

/// `Σ_r w_r x^r y^{n−r}` with `n = len−1` and `0⁰ = 1`.
fn homogeneous_eval(weights: &[BigInt], x: &BigInt, y: &BigInt) -> BigInt {
    let n = weights.len() - 1;
    if x.is_zero() {
        return &weights[0] * num_traits::pow(y.clone(), n);
    }
    if y.is_zero() {
        return &weights[n] * num_traits::pow(x.clone(), n);
    }
    let mut acc = BigInt::zero();
    let mut ypow = BigInt::one();
    let mut terms: Vec<BigInt> = Vec::with_capacity(n + 1);
    for _ in 0..=n {
        terms.push(ypow.clone());
        ypow *= y;
    }
    let mut xpow = BigInt::one();
    for (r, w) in weights.iter().enumerate() {
        if !w.is_zero() {
            acc += w * &xpow * &terms[n - r];
        }
        xpow *= x;
    }
    acc
}

/// `C_{e,a₁,a₂}` for `k >= 4`.
pub fn c_polynomial(k: u32, e: u32, a1: u64, a2: u64) -> Rational {
    Rational::from(CKernel::new(k, e).eval(a1, a2))
}

/// `E(a₁,a₂)` for `k >= 4`.
pub fn e_polynomial(k: u32, e: u32, a1: u64, a2: u64) -> Rational {
    EKernel::new(k, e).eval(a1, a2)
}

/// Checks the binomial identity
/// `C(k+e−1,e)·C(k+2e−1,2e−R)·C(k+2e−1,R) = C(k+2e−1,2e)·Σ_{r≤R} 4^r C(k+e−1,e−r) C(e−½,r) C(2e−2r,R−r)`
/// exactly.
pub fn check_lemma22(k: u32, e: u32, big_r: u32) -> bool {
    assert!(big_r <= e);
    let (k, e, big_r) = (k as i64, e as i64, big_r as i64);
    let top = k + 2 * e - 1;
    let lhs = Rational::from(
        binomial(k + e - 1, e as u64) * binomial(top, (2 * e - big_r) as u64) * binomial(top, big_r as u64),
    );
    let sum: Rational = (0..=big_r)
        .map(|r| {
            Rational::from(BigInt::from(4).pow(r as u32) * binomial(k + e - 1, (e - r) as u64))
                * half_binomial(e as u64, r as u64)
                * Rational::from(binomial(2 * e - 2 * r, (big_r - r) as u64))
        })
        .sum();
    lhs == Rational::from(binomial(top, 2 * e as u64)) * sum
}
