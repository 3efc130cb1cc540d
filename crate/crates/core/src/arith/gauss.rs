//! Quadratic Gauss sums in double-double (about 106-bit mantissa) arithmetic.

use std::ops::{Add, Mul, Sub};

use super::prime::is_prime;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default)]
struct Dd {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd { hi: s, lo: b - (s - a) }
}

impl Dd {
    const TWO_PI: Dd = Dd {
        hi: 6.283_185_307_179_586,
        lo: 2.449_293_598_294_706_4e-16,
    };

    fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    fn div_f64(self, d: f64) -> Self {
        let q1 = self.hi / d;
        let p = q1 * d;
        let e = q1.mul_add(d, -p);
        let r = (self.hi - p - e + self.lo) / d;
        quick_two_sum(q1, r)
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        quick_two_sum(s, e + self.lo + o.lo)
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + Dd { hi: -o.hi, lo: -o.lo }
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        quick_two_sum(p, e + self.hi * o.lo + self.lo * o.hi)
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct Cdd {
    re: Dd,
    im: Dd,
}

impl Cdd {
    fn mul(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }

    fn add(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re + o.re,
            im: self.im + o.im,
        }
    }
}

/// cos and sin of `theta` by Taylor series; accurate for |theta| <= 2.2.
fn cos_sin(theta: Dd) -> (Dd, Dd) {
    let mut cos = Dd::from_f64(1.0);
    let mut sin = theta;
    let t2 = theta * theta;
    let mut term_c = Dd::from_f64(1.0);
    let mut term_s = theta;
    let mut k = 1.0f64;
    loop {
        term_c = (term_c * t2).div_f64(-(k * (k + 1.0)));
        term_s = (term_s * t2).div_f64(-((k + 1.0) * (k + 2.0)));
        cos = cos + term_c;
        sin = sin + term_s;
        k += 2.0;
        if term_c.hi.abs() < 1e-36 && term_s.hi.abs() < 1e-36 {
            break;
        }
    }
    (cos, sin)
}

/// The square of the quadratic Gauss sum `g = sum_n exp(2 pi i n^2 / ell)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussSquare {
    pub re: f64,
    pub im: f64,
}

/// Evaluates `g^2` for an odd prime `ell <= 200`.
pub fn gauss_sum_square(ell: u64) -> Result<GaussSquare> {
    if ell % 2 == 0 || !is_prime(ell) || ell > 200 {
        return Err(Error::OutOfRange(format!(
            "Gauss sum needs an odd prime <= 200, got {ell}"
        )));
    }
    let (c, s) = cos_sin(Dd::TWO_PI.div_f64(ell as f64));
    let zeta = Cdd { re: c, im: s };
    let mut powers = Vec::with_capacity(ell as usize);
    let mut z = Cdd {
        re: Dd::from_f64(1.0),
        im: Dd::default(),
    };
    for _ in 0..ell {
        powers.push(z);
        z = z.mul(zeta);
    }
    let g = (0..ell).fold(Cdd::default(), |acc, n| acc.add(powers[(n * n % ell) as usize]));
    let g2 = g.mul(g);
    Ok(GaussSquare {
        re: g2.re.to_f64(),
        im: g2.im.to_f64(),
    })
}
