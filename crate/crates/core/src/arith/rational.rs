//! Helpers around `num_rational::BigRational`.

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, Zero};

pub use num_rational::BigRational;

use crate::error::{Error, Result};

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"`, `"-p/q"` or an integer.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("malformed rational '{s}'"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in '{s}'")));
    }
    Ok(BigRational::new(num, den))
}

/// Exact integer square root of a non-negative integer, if it is a square.
pub fn int_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Square root in Q, if `q` is a rational square.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    let n = int_sqrt(q.numer())?;
    let d = int_sqrt(q.denom())?;
    Some(BigRational::new(n, d))
}

/// If `n` is `±2^k`, returns `k`.
pub fn power_of_two(n: &BigInt) -> Option<u64> {
    if n.is_zero() {
        return None;
    }
    let k = n.trailing_zeros()?;
    (n.magnitude() >> k).is_one().then_some(k)
}

/// Image of `q` in F_p; `None` when `p` divides the denominator.
pub fn reduce_mod(q: &BigRational, p: u64) -> Option<u64> {
    use num_integer::Integer;
    use num_traits::ToPrimitive;
    let pb = BigInt::from(p);
    let den = q.denom().mod_floor(&pb).to_u64()?;
    let inv = super::prime::inv_mod(den, p)?;
    let num = q.numer().mod_floor(&pb).to_u64()?;
    Some(super::prime::mul_mod(num, inv, p))
}

pub fn sign_of(q: &BigRational) -> Sign {
    q.numer().sign()
}
