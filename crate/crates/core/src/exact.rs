//! Exact integer and rational helpers shared by the analysis modules.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub type Rational = BigRational;

/// `num / den` as an exact rational. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Binomial coefficient with the convention C(n, k) = 0 outside 0 <= k <= n.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Binomial coefficient as u64, for counting quantities known to be small.
pub fn binomial_u64(n: u64, k: u64) -> u64 {
    binomial(n as i64, k as i64)
        .to_u64()
        .expect("binomial coefficient exceeds u64")
}

/// Exact quotient `a / b` when `b` divides `a`, otherwise `None`.
pub fn exact_div(a: &BigInt, b: &BigInt) -> Option<BigInt> {
    if b.is_zero() {
        return None;
    }
    let (q, r) = a.div_rem(b);
    r.is_zero().then_some(q)
}

pub fn floor(x: &Rational) -> BigInt {
    x.numer().div_floor(x.denom())
}

pub fn ceil(x: &Rational) -> BigInt {
    -((-x).numer().div_floor(x.denom()))
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// A rational rendered as a `{num, den}` pair plus a float convenience field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
    pub float: f64,
}

impl From<&Rational> for RationalJson {
    fn from(x: &Rational) -> Self {
        RationalJson {
            num: x.numer().to_string(),
            den: x.denom().to_string(),
            float: to_f64(x),
        }
    }
}

/// `floor((a + sqrt(radicand)) / b)` for `b > 0` and `radicand >= 0`, computed
/// without floating point. Uses floor(floor(y)/b) = floor(y/b) for integer b.
pub fn floor_shifted_sqrt_div(a: i128, radicand: i128, b: i128) -> i128 {
    assert!(b > 0 && radicand >= 0);
    let s = (radicand as u128).isqrt() as i128;
    Integer::div_floor(&(a + s), &b)
}
