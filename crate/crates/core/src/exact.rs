//! Exact integer and rational combinatorics. No floating point in here;
//! everything downstream stays rational until logarithm time.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::Error;

/// Arbitrary-precision signed integer.
pub type ExactInteger = BigInt;

/// Arbitrary-precision fraction, always in lowest terms with a positive
/// denominator (maintained by `BigRational` itself).
pub type ExactRational = BigRational;

/// Binomial coefficient C(n, r). Out-of-range `r` (negative or above `n`)
/// yields 0, so inclusion-exclusion sums need no special-casing.
pub fn binomial(n: u64, r: i64) -> ExactInteger {
    if r < 0 || r as u64 > n {
        return ExactInteger::zero();
    }
    let r = (r as u64).min(n - r as u64);
    let mut acc = ExactInteger::one();
    for i in 0..r {
        acc = acc * ExactInteger::from(n - i) / ExactInteger::from(i + 1);
    }
    acc
}

/// Multinomial coefficient n! / (parts_0! · parts_1! · ...).
/// The parts must sum to `n`.
pub fn multinomial(n: u64, parts: &[u64]) -> Result<ExactInteger, Error> {
    let total: u64 = parts.iter().sum();
    if total != n {
        return Err(Error::InvalidInput(format!(
            "multinomial parts sum to {total}, expected {n}"
        )));
    }
    let mut acc = ExactInteger::one();
    let mut remaining = n;
    for &part in parts {
        acc *= binomial(remaining, part as i64);
        remaining -= part;
    }
    Ok(acc)
}

/// Exact e-th power of a rational, reduced.
pub fn rational_pow(base: &ExactRational, e: u32) -> ExactRational {
    if e == 0 {
        return ExactRational::one();
    }
    // binary exponentiation keeps intermediate sizes down
    let mut result = ExactRational::one();
    let mut sq = base.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result *= &sq;
        }
        e >>= 1;
        if e > 0 {
            sq = &sq * &sq;
        }
    }
    result
}

/// Natural log of a positive big integer, usable far beyond the f64 range.
pub fn big_ln(x: &ExactInteger) -> f64 {
    use num_traits::ToPrimitive;
    debug_assert!(x > &ExactInteger::zero());
    let bits = x.bits();
    if bits <= 52 {
        return (x.to_f64().unwrap()).ln();
    }
    // keep the top 52 bits as a mantissa, account for the shift
    let shift = bits - 52;
    let top = (x >> shift).to_f64().unwrap();
    top.ln() + (shift as f64) * std::f64::consts::LN_2
}

/// Natural log of a positive rational.
pub fn rational_ln(x: &ExactRational) -> f64 {
    big_ln(x.numer()) - big_ln(x.denom())
}

/// High-precision rational lower approximation of Euler's number e,
/// via the truncated series sum 1/i!. With 40 terms the error is below
/// 1/40! ≈ 1.2e-48, enough to settle any borderline LLL comparison we
/// can actually encounter.
pub fn euler_e_approx() -> ExactRational {
    let mut sum = ExactRational::zero();
    let mut fact = ExactInteger::one();
    for i in 0u32..=40 {
        if i > 0 {
            fact *= ExactInteger::from(i);
        }
        sum += ExactRational::new(ExactInteger::one(), fact.clone());
    }
    sum
}
