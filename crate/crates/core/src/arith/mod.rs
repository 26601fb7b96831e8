//! Exact integer, rational, polynomial and matrix arithmetic.

pub mod factor;
pub mod kronecker;
pub mod matrix;
pub mod poly;
pub mod resultant;
pub mod sturm;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

pub use factor::{divisors, factorize, is_prime, prime_power};
pub use kronecker::{kronecker_i64, kronecker_symbol};
pub use matrix::{det_int, RatMatrix};
pub use poly::{IntPoly, RatPoly};
pub use resultant::{discriminant, resultant};
pub use sturm::{sturm_count, RealPoint, SturmSequence};

pub type Integer = BigInt;
pub type Rational = BigRational;

/// Nearest-ish `f64` of a big integer; saturates to infinity past the `f64` range.
pub fn to_f64(n: &BigInt) -> f64 {
    n.to_f64().unwrap_or(if n.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

/// `f64` value of a rational, accurate even when numerator and denominator overflow.
pub fn rat_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let (n, d) = (r.numer(), r.denom());
    let shift = n.bits() as i64 - d.bits() as i64;
    // bring the quotient into [2^60, 2^62) before dividing
    let scaled: BigInt = if shift < 61 {
        (n << (61 - shift) as usize) / d
    } else {
        n / (d << (shift - 61) as usize)
    };
    to_f64(&scaled) * 2f64.powi((shift - 61) as i32)
}

/// Floor of the square root of a non-negative integer.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative(), "isqrt of a negative integer");
    n.sqrt()
}

pub fn is_square(n: &BigInt) -> bool {
    !n.is_negative() && {
        let s = n.sqrt();
        &s * &s == *n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_to_float() {
        let r = BigRational::new(1.into(), 3.into());
        assert!((rat_to_f64(&r) - 1.0 / 3.0).abs() < 1e-16);
        let big = BigRational::new(BigInt::from(7) << 400usize, BigInt::from(3) << 398usize);
        assert!((rat_to_f64(&big) - 28.0 / 3.0).abs() < 1e-14);
        assert_eq!(rat_to_f64(&BigRational::new((-5).into(), 2.into())), -2.5);
    }

    #[test]
    fn squares() {
        assert!(is_square(&BigInt::from(529)));
        assert!(!is_square(&BigInt::from(92)));
        assert!(!is_square(&BigInt::from(-4)));
        assert_eq!(isqrt(&BigInt::from(99)), BigInt::from(9));
    }
}
