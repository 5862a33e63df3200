use num_bigint::BigInt;
use num_traits::One;

use super::rational::Rational;

/// `C(n, r)` for any integer top, via the falling factorial `n(n-1)…(n-r+1)/r!`.
pub fn binomial(n: i64, r: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..r as i64 {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C(t/2, r)` for a top given as twice its value, so half-integral tops stay
/// exact.
pub fn binomial_twice_top(top_twice: i64, r: u64) -> Rational {
    if top_twice % 2 == 0 {
        return Rational::from(binomial(top_twice / 2, r));
    }
    // Π_{i<r} (t - 2i) / (2^r r!)
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..r as i64 {
        num *= top_twice - 2 * i;
        den *= 2 * (i + 1);
    }
    Rational::new(num, den)
}

/// `C(e - 1/2, r)`.
pub fn half_binomial(e: u64, r: u64) -> Rational {
    binomial_twice_top(2 * e as i64 - 1, r)
}
