//! Truncated q-expansions over exact rationals.
//!
//! A [`QSeries`] knows the coefficients of `q^0 .. q^{prec-1}` exactly and
//! nothing beyond. Every operation states how it propagates precision, and
//! comparisons only ever look at coefficients both sides know.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::Rational;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QSeries {
    weight_times_two: i64,
    coeffs: Vec<Rational>,
}

/// Outcome of comparing two series on their shared window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesComparison {
    pub compared: usize,
    pub mismatches: Vec<usize>,
}

impl SeriesComparison {
    pub fn agrees(&self) -> bool {
        self.mismatches.is_empty()
    }
}

impl QSeries {
    pub fn new(weight_times_two: i64, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("series precision must be positive".into()));
        }
        if weight_times_two < 0 {
            return Err(Error::InvalidArgument(format!(
                "negative weight {weight_times_two}/2"
            )));
        }
        Ok(QSeries {
            weight_times_two,
            coeffs,
        })
    }

    pub fn from_integers(weight_times_two: i64, coeffs: &[i64]) -> Result<Self> {
        Self::new(weight_times_two, coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    pub fn zero(weight_times_two: i64, prec: usize) -> Self {
        assert!(prec >= 1);
        QSeries {
            weight_times_two,
            coeffs: vec![Rational::zero(); prec],
        }
    }

    /// `c·q^n` known to the given precision.
    pub fn monomial(weight_times_two: i64, n: usize, c: Rational, prec: usize) -> Self {
        let mut s = Self::zero(weight_times_two, prec);
        if n < prec {
            s.coeffs[n] = c;
        }
        s
    }

    pub fn weight_times_two(&self) -> i64 {
        self.weight_times_two
    }

    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// Coefficient of `q^n`; `None` past the known window.
    pub fn coeff(&self, n: usize) -> Option<&Rational> {
        self.coeffs.get(n)
    }

    pub fn with_weight(mut self, weight_times_two: i64) -> Self {
        self.weight_times_two = weight_times_two;
        self
    }

    /// Keep at most `prec` coefficients.
    pub fn truncate(mut self, prec: usize) -> Self {
        assert!(prec >= 1);
        self.coeffs.truncate(prec);
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    pub fn add(&self, other: &QSeries) -> Result<QSeries> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &QSeries) -> Result<QSeries> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &QSeries, f: impl Fn(&Rational, &Rational) -> Rational) -> Result<QSeries> {
        if self.weight_times_two != other.weight_times_two {
            return Err(Error::WeightMismatch {
                left: self.weight_times_two,
                right: other.weight_times_two,
            });
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| f(a, b))
            .collect();
        Ok(QSeries {
            weight_times_two: self.weight_times_two,
            coeffs,
        })
    }

    pub fn scale(&self, c: &Rational) -> QSeries {
        QSeries {
            weight_times_two: self.weight_times_two,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Truncated Cauchy product. Weights add; precision is the smaller of the two.
    ///
    /// Both factors are scaled to integers by the lcm of their denominators so
    /// the inner loop is pure bigint arithmetic. The sum for each output index
    /// runs over the nonzero coefficients of the sparser factor, which keeps
    /// products against theta-like series cheap.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        self.mul_then_u(other, 1)
    }

    /// `U_m(self · other)` without forming the coefficients that `U_m` drops.
    pub(crate) fn mul_then_u(&self, other: &QSeries, m: usize) -> QSeries {
        assert!(m >= 1, "U_m needs m >= 1");
        let prec = self.prec().min(other.prec());
        let (fa, da) = integer_coeffs(&self.coeffs[..prec]);
        let (fb, db) = integer_coeffs(&other.coeffs[..prec]);
        let nz_a: Vec<usize> = (0..prec).filter(|&i| !fa[i].is_zero()).collect();
        let nz_b: Vec<usize> = (0..prec).filter(|&i| !fb[i].is_zero()).collect();
        let (sparse_idx, sparse, dense) = if nz_a.len() <= nz_b.len() {
            (nz_a, &fa, &fb)
        } else {
            (nz_b, &fb, &fa)
        };
        let den = da * db;
        let coeffs = (0..prec.div_ceil(m))
            .into_par_iter()
            .map(|n| m * n)
            .map(|n| {
                let mut acc = BigInt::zero();
                for &i in sparse_idx.iter().take_while(|&&i| i <= n) {
                    let other = &dense[n - i];
                    if !other.is_zero() {
                        acc += &sparse[i] * other;
                    }
                }
                Rational::new(acc, den.clone())
            })
            .collect();
        QSeries {
            weight_times_two: self.weight_times_two + other.weight_times_two,
            coeffs,
        }
    }

    /// `(2πi)^{-r} d^r/dz^r`: the coefficient of `q^n` is multiplied by `n^r`.
    /// Weight metadata is left alone.
    pub fn normalized_derivative(&self, r: u32) -> QSeries {
        if r == 0 {
            return self.clone();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, a)| {
                if a.is_zero() {
                    Rational::zero()
                } else {
                    a * Rational::from(num_traits::pow(BigInt::from(n), r as usize))
                }
            })
            .collect();
        QSeries {
            weight_times_two: self.weight_times_two,
            coeffs,
        }
    }

    /// `f(mz)`: the coefficient `a(n)` moves to `q^{mn}`.
    /// Precision becomes `m·(prec-1)+1`.
    pub fn dilate(&self, m: usize) -> QSeries {
        assert!(m >= 1, "dilation factor must be positive");
        let prec = m * (self.prec() - 1) + 1;
        let mut coeffs = vec![Rational::zero(); prec];
        for (n, a) in self.coeffs.iter().enumerate() {
            coeffs[m * n] = a.clone();
        }
        QSeries {
            weight_times_two: self.weight_times_two,
            coeffs,
        }
    }

    /// `U_m`: the coefficient of `q^n` becomes `a(mn)`.
    /// Precision becomes `ceil(prec/m)`.
    pub fn u_operator(&self, m: usize) -> QSeries {
        assert!(m >= 1, "U_m needs m >= 1");
        let prec = self.prec().div_ceil(m);
        let coeffs = (0..prec).map(|n| self.coeffs[m * n].clone()).collect();
        QSeries {
            weight_times_two: self.weight_times_two,
            coeffs,
        }
    }

    /// Indices `n < prec` with `(-1)^ℓ n ≡ 2,3 (mod 4)` and nonzero coefficient.
    pub fn plus_space_violations(&self, ell: u64) -> Result<Vec<usize>> {
        let expected = 2 * ell as i64 + 1;
        if self.weight_times_two != expected {
            return Err(Error::WeightMismatch {
                left: self.weight_times_two,
                right: expected,
            });
        }
        let sign: i64 = if ell.is_multiple_of(2) { 1 } else { -1 };
        Ok(self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(n, a)| {
                let r = (sign * *n as i64).rem_euclid(4);
                (r == 2 || r == 3) && !a.is_zero()
            })
            .map(|(n, _)| n)
            .collect())
    }

    /// Compares coefficients up to the shorter precision. Weights are not compared.
    pub fn compare(&self, other: &QSeries) -> SeriesComparison {
        let compared = self.prec().min(other.prec());
        let mismatches = (0..compared)
            .filter(|&n| self.coeffs[n] != other.coeffs[n])
            .collect();
        SeriesComparison {
            compared,
            mismatches,
        }
    }
}

/// Scales a slice of rationals to integers: returns `(c_i·L, L)` with `L` the
/// lcm of the denominators.
fn integer_coeffs(coeffs: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let l = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| if c.denom().is_one() { acc } else { acc.lcm(c.denom()) });
    let ints = coeffs
        .iter()
        .map(|c| {
            if c.denom().is_one() {
                c.numer() * &l
            } else {
                c.numer() * (&l / c.denom())
            }
        })
        .collect();
    (ints, l)
}

#[derive(Serialize, Deserialize)]
struct QSeriesJson {
    weight_times_two: i64,
    prec: usize,
    coeffs: Vec<Rational>,
}

impl Serialize for QSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        QSeriesJson {
            weight_times_two: self.weight_times_two,
            prec: self.prec(),
            coeffs: self.coeffs.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = QSeriesJson::deserialize(deserializer)?;
        if raw.prec != raw.coeffs.len() {
            return Err(serde::de::Error::custom(format!(
                "prec {} does not match {} coefficients",
                raw.prec,
                raw.coeffs.len()
            )));
        }
        QSeries::new(raw.weight_times_two, raw.coeffs).map_err(serde::de::Error::custom)
    }
}
