//! Bernoulli numbers, generalized Bernoulli numbers `B_{n,χ_D}` and the
//! values `L_D(1-n) = -B_{n,χ_D}/n`.

use num_bigint::BigInt;

use super::binomial::binomial;
use super::discriminant::OddFundamentalDiscriminant;
use super::rational::Rational;
use crate::error::{Error, Result};

/// `B_0..=B_n` with the convention `B_1 = -1/2`.
pub fn bernoulli_numbers(n: usize) -> Vec<Rational> {
    let mut b = Vec::with_capacity(n + 1);
    b.push(Rational::one());
    for m in 1..=n {
        // Σ_{j<=m} C(m+1, j) B_j = 0
        let s: Rational = (0..m)
            .map(|j| Rational::from(binomial(m as i64 + 1, j as u64)) * &b[j])
            .sum();
        b.push(-s / Rational::from(m as u64 + 1));
    }
    b
}

/// Evaluates the Bernoulli polynomial `B_n(x) = Σ C(n,j) B_j x^{n-j}`.
pub fn bernoulli_polynomial(n: usize, x: &Rational, numbers: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    let mut xp = Rational::one();
    for j in (0..=n).rev() {
        acc += Rational::from(binomial(n as i64, j as u64)) * &numbers[j] * &xp;
        xp *= x;
    }
    acc
}

/// `B_{n,χ_D} = f^{n-1} Σ_{a=1}^{f} χ_D(a) B_n(a/f)` with `f = |D|`.
pub fn generalized_bernoulli(n: usize, d: OddFundamentalDiscriminant) -> Rational {
    assert!(n >= 1, "generalized Bernoulli numbers are indexed from 1");
    let f = d.abs();
    let numbers = bernoulli_numbers(n);
    let fr = Rational::from(f);
    let sum: Rational = (1..=f)
        .filter_map(|a| {
            let c = d.chi(a as i64);
            (c != 0).then(|| {
                let x = Rational::new(BigInt::from(a), BigInt::from(f));
                let v = bernoulli_polynomial(n, &x, &numbers);
                if c > 0 {
                    v
                } else {
                    -v
                }
            })
        })
        .sum();
    sum * fr.pow(n as i32 - 1)
}

/// `L_D(s)` at `s = 1 - n <= 0`.
pub fn dirichlet_l_nonpositive(d: OddFundamentalDiscriminant, s: i64) -> Result<Rational> {
    if s > 0 {
        return Err(Error::InvalidArgument(format!(
            "L_D(s) is only available at s <= 0, got s = {s}"
        )));
    }
    let n = (1 - s) as usize;
    Ok(-generalized_bernoulli(n, d) / Rational::from(n as u64))
}
