use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::prime::factor_u64;
use super::rational::{rational_sqrt, BigRational};
use crate::error::{Error, Result};

/// `a + b·sqrt(d)` in Q(sqrt d), `d` squarefree and not 0 or 1.
///
/// Arithmetic operators panic when the two operands live in different fields;
/// callers that accept user input check `same_field` first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadFieldElement {
    a: BigRational,
    b: BigRational,
    d: i64,
}

pub fn is_squarefree(d: i64) -> bool {
    d != 0 && factor_u64(d.unsigned_abs()).iter().all(|&(_, e)| e == 1)
}

impl QuadFieldElement {
    pub fn new(a: BigRational, b: BigRational, d: i64) -> Result<Self> {
        if d == 1 || !is_squarefree(d) {
            return Err(Error::Precondition(format!("Q(sqrt {d}) needs squarefree d != 0, 1")));
        }
        Ok(QuadFieldElement { a, b, d })
    }

    pub fn from_rational(a: BigRational, d: i64) -> Result<Self> {
        Self::new(a, BigRational::zero(), d)
    }

    /// The Gaussian rational `a + b i`.
    pub fn gaussian(a: BigRational, b: BigRational) -> Self {
        QuadFieldElement { a, b, d: -1 }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn irrational_part(&self) -> &BigRational {
        &self.b
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn same_field(&self, other: &Self) -> bool {
        self.d == other.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn scalar(&self, q: BigRational) -> Self {
        QuadFieldElement {
            a: q,
            b: BigRational::zero(),
            d: self.d,
        }
    }

    pub fn conj(&self) -> Self {
        QuadFieldElement {
            a: self.a.clone(),
            b: -&self.b,
            d: self.d,
        }
    }

    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - BigRational::from_integer(self.d.into()) * &self.b * &self.b
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        let c = self.conj();
        Some(QuadFieldElement {
            a: c.a / &n,
            b: c.b / &n,
            d: self.d,
        })
    }

    /// A square root in the same field, if one exists.
    pub fn sqrt(&self) -> Option<Self> {
        let d = BigRational::from_integer(self.d.into());
        if self.b.is_zero() {
            if let Some(s) = rational_sqrt(&self.a) {
                return Some(self.scalar(s));
            }
            // a = d t^2
            return rational_sqrt(&(&self.a / &d)).map(|t| QuadFieldElement {
                a: BigRational::zero(),
                b: t,
                d: self.d,
            });
        }
        // (s + t√d)^2 = s^2 + d t^2 + 2 s t √d; s^2 = (a ± sqrt(N)) / 2
        let root_norm = rational_sqrt(&self.norm())?;
        let two = BigRational::from_integer(2.into());
        for cand in [(&self.a + &root_norm) / &two, (&self.a - &root_norm) / &two] {
            if cand.is_zero() || cand.is_negative() {
                continue;
            }
            if let Some(s) = rational_sqrt(&cand) {
                let t = &self.b / (&two * &s);
                let r = QuadFieldElement {
                    a: s,
                    b: t,
                    d: self.d,
                };
                if &(&r * &r) == self {
                    return Some(r);
                }
            }
        }
        None
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = self.scalar(BigRational::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    fn check(&self, o: &Self) {
        assert_eq!(self.d, o.d, "quadratic field mismatch");
    }
}

impl fmt::Display for QuadFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let unit = if self.d == -1 {
            "i".to_string()
        } else {
            format!("sqrt({})", self.d)
        };
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "({})*{unit}", self.b),
            (false, false) => write!(f, "{} + ({})*{unit}", self.a, self.b),
        }
    }
}

impl fmt::Debug for QuadFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'a> Add<&'a QuadFieldElement> for &'a QuadFieldElement {
    type Output = QuadFieldElement;
    fn add(self, o: &QuadFieldElement) -> QuadFieldElement {
        self.check(o);
        QuadFieldElement {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
            d: self.d,
        }
    }
}

impl<'a> Sub<&'a QuadFieldElement> for &'a QuadFieldElement {
    type Output = QuadFieldElement;
    fn sub(self, o: &QuadFieldElement) -> QuadFieldElement {
        self.check(o);
        QuadFieldElement {
            a: &self.a - &o.a,
            b: &self.b - &o.b,
            d: self.d,
        }
    }
}

impl<'a> Mul<&'a QuadFieldElement> for &'a QuadFieldElement {
    type Output = QuadFieldElement;
    fn mul(self, o: &QuadFieldElement) -> QuadFieldElement {
        self.check(o);
        let d = BigRational::from_integer(self.d.into());
        QuadFieldElement {
            a: &self.a * &o.a + d * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
            d: self.d,
        }
    }
}

impl<'a> Div<&'a QuadFieldElement> for &'a QuadFieldElement {
    type Output = QuadFieldElement;
    fn div(self, o: &QuadFieldElement) -> QuadFieldElement {
        self * &o.inv().expect("division by zero in quadratic field")
    }
}

impl Neg for &QuadFieldElement {
    type Output = QuadFieldElement;
    fn neg(self) -> QuadFieldElement {
        QuadFieldElement {
            a: -&self.a,
            b: -&self.b,
            d: self.d,
        }
    }
}
