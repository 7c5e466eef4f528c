//! Exact rational scalars for the symbolic kernel.
//!
//! `Rational` is an arbitrary-precision fraction kept in canonical form
//! (reduced, positive denominator, zero as 0/1) by the backing type.

use num_bigint::BigInt;
pub use num_rational::BigRational as Rational;

/// Integer as an exact rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exact fraction `num/den`. Panics when `den == 0`.
pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Nearest double; rationals used here are well within range.
pub fn to_f64(r: &Rational) -> f64 {
    num_traits::ToPrimitive::to_f64(r).expect("rational out of f64 range")
}
