use serde::{Deserialize, Serialize};

use super::kronecker::kronecker_symbol;
use crate::error::{Error, Result};

fn is_squarefree(n: u64) -> bool {
    let mut n = n;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

/// True iff `d = 1`, or `d` is odd, squarefree and `d ≡ 1 (mod 4)`.
pub fn is_odd_fundamental(d: i64) -> bool {
    if d == 1 {
        return true;
    }
    d != 0 && d % 2 != 0 && d.rem_euclid(4) == 1 && is_squarefree(d.unsigned_abs())
}

/// An odd fundamental discriminant `D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub struct OddFundamentalDiscriminant(i64);

impl OddFundamentalDiscriminant {
    pub fn new(d: i64) -> Result<Self> {
        if is_odd_fundamental(d) {
            Ok(Self(d))
        } else {
            Err(Error::InvalidDiscriminant(d))
        }
    }

    pub const ONE: Self = Self(1);

    pub fn value(self) -> i64 {
        self.0
    }

    pub fn abs(self) -> u64 {
        self.0.unsigned_abs()
    }

    /// `χ_D(n)`.
    pub fn chi(self, n: i64) -> i32 {
        kronecker_symbol(self.0, n)
    }

    /// Every way to write `D = D₁·D₂` with both factors odd fundamental
    /// discriminants, one per positive divisor of `|D|`, sorted by `|D₁|`.
    pub fn factorizations(self) -> Vec<DiscriminantFactorization> {
        let abs = self.abs();
        (1..=abs)
            .filter(|m| abs.is_multiple_of(*m))
            .map(|m| {
                let m = m as i64;
                let d1 = if m % 4 == 1 { m } else { -m };
                DiscriminantFactorization {
                    d1,
                    d2: self.0 / d1,
                }
            })
            .collect()
    }
}

impl TryFrom<i64> for OddFundamentalDiscriminant {
    type Error = Error;
    fn try_from(d: i64) -> Result<Self> {
        Self::new(d)
    }
}

impl From<OddFundamentalDiscriminant> for i64 {
    fn from(d: OddFundamentalDiscriminant) -> i64 {
        d.0
    }
}

impl std::fmt::Display for OddFundamentalDiscriminant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `D = D₁·D₂` with coprime odd fundamental factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DiscriminantFactorization {
    pub d1: i64,
    pub d2: i64,
}

impl DiscriminantFactorization {
    pub fn new(d1: i64, d2: i64) -> Result<Self> {
        if is_odd_fundamental(d1)
            && is_odd_fundamental(d2)
            && gcd(d1.unsigned_abs(), d2.unsigned_abs()) == 1
        {
            Ok(Self { d1, d2 })
        } else {
            Err(Error::InvalidFactorization { d1, d2 })
        }
    }

    pub fn product(self) -> i64 {
        self.d1 * self.d2
    }

    pub fn d1_abs(self) -> u64 {
        self.d1.unsigned_abs()
    }

    pub fn d2_abs(self) -> u64 {
        self.d2.unsigned_abs()
    }
}

/// Free-function form of [`OddFundamentalDiscriminant::factorizations`].
pub fn factorizations(d: OddFundamentalDiscriminant) -> Vec<DiscriminantFactorization> {
    d.factorizations()
}
