//! Imaginary quadratic orders, reduced forms, class numbers, and the class
//! number ratio of an order and its suborder of prime index.

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{is_prime, kronecker_prime};
use crate::error::{Error, Result};

/// An order in an imaginary quadratic field, given by its discriminant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QuadOrder {
    pub discriminant: i64,
    pub fundamental: bool,
    pub conductor: u64,
    pub units: u32,
}

fn is_valid_discriminant(d: i64) -> bool {
    d < 0 && matches!(d.rem_euclid(4), 0 | 1)
}

impl QuadOrder {
    pub fn new(d: i64) -> Result<Self> {
        if !is_valid_discriminant(d) {
            return Err(Error::InvalidDiscriminant(d));
        }
        // largest f with d / f^2 still a discriminant
        let mut conductor = 1u64;
        let mut f = 2i64;
        while f * f <= -d {
            if d % (f * f) == 0 && is_valid_discriminant(d / (f * f)) {
                conductor = f as u64;
            }
            f += 1;
        }
        let units = match d {
            -3 => 6,
            -4 => 4,
            _ => 2,
        };
        Ok(QuadOrder {
            discriminant: d,
            fundamental: conductor == 1,
            conductor,
            units,
        })
    }

    pub fn fundamental_discriminant(&self) -> i64 {
        self.discriminant / (self.conductor * self.conductor) as i64
    }
}

/// `a x^2 + b xy + c y^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ReducedForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl ReducedForm {
    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    /// Reduced and primitive.
    pub fn is_valid(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        let g = num_integer::gcd(num_integer::gcd(a, b), c);
        b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c)) && g == 1
    }
}

/// Primitive reduced forms of discriminant `d`, sorted.
pub fn reduced_forms(d: i64) -> Result<Vec<ReducedForm>> {
    if !is_valid_discriminant(d) {
        return Err(Error::InvalidDiscriminant(d));
    }
    let amax = ((-d) as f64 / 3.0).sqrt() as i64 + 1;
    let mut forms: Vec<ReducedForm> = (1..=amax)
        .into_par_iter()
        .flat_map_iter(|a| {
            let parity = d.rem_euclid(2);
            (-a..=a).filter_map(move |b| {
                if b.rem_euclid(2) != parity {
                    return None;
                }
                let num = b * b - d;
                if num % (4 * a) != 0 {
                    return None;
                }
                let f = ReducedForm { a, b, c: num / (4 * a) };
                f.is_valid().then_some(f)
            })
        })
        .collect();
    forms.sort_unstable();
    Ok(forms)
}

pub fn class_number(d: i64) -> Result<u64> {
    Ok(reduced_forms(d)?.len() as u64)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RatioCheck {
    pub predicted: String,
    pub direct: String,
    pub agree: bool,
}

/// Compares `h(D0 ell^2)/h(D0)` with `(ell - (D0|ell)) / [O* : O'*]` for a
/// fundamental `D0`.
pub fn ratio_check(d0: i64, ell: u64) -> Result<RatioCheck> {
    if !is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    let order = QuadOrder::new(d0)?;
    if !order.fundamental {
        return Err(Error::Precondition(format!("{d0} is not a fundamental discriminant")));
    }
    let d1 = (ell as i64)
        .checked_mul(ell as i64)
        .and_then(|l2| d0.checked_mul(l2))
        .ok_or_else(|| Error::OutOfRange(format!("{d0} * {ell}^2 overflows")))?;
    let sub = QuadOrder::new(d1)?;
    let index = (order.units / sub.units) as i64;
    let kr = kronecker_prime(d0, ell)? as i64;
    let predicted = Ratio::new(ell as i64 - kr, index);
    let direct = Ratio::new(class_number(d1)? as i64, class_number(d0)? as i64);
    Ok(RatioCheck {
        predicted: predicted.to_string(),
        direct: direct.to_string(),
        agree: predicted == direct,
    })
}

/// Whether the smallest possible ratio `(ell - 1)/3` already exceeds 2.
pub fn exceptional_cm_contradiction(ell: u64) -> Result<bool> {
    if !is_prime(ell) || ell <= 7 || ell % 4 != 3 {
        return Err(Error::Precondition(format!(
            "ell = {ell} must be a prime above 7 with ell = 3 mod 4"
        )));
    }
    Ok(Ratio::new(ell as i64 - 1, 3) > Ratio::from_integer(2))
}
