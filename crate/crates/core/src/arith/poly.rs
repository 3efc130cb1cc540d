//! Univariate polynomials over Q and over F_p.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::prime::{add_mod, inv_mod, is_prime, mul_mod, sub_mod};
use super::rational::{parse_rational, reduce_mod, BigRational};
use crate::error::{Error, Result};

/// Polynomial with rational coefficients, stored lowest degree first and
/// trimmed so the last coefficient is nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    c: Vec<BigRational>,
}

impl QPoly {
    pub fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        QPoly { c }
    }

    /// From coefficients listed highest degree first.
    pub fn from_high(mut c: Vec<BigRational>) -> Self {
        c.reverse();
        QPoly::new(c)
    }

    /// From integer coefficients listed lowest degree first.
    pub fn from_ints(c: &[i64]) -> Self {
        QPoly::new(c.iter().map(|&v| BigRational::from_integer(v.into())).collect())
    }

    /// Parses comma-separated rationals, highest degree first.
    pub fn parse_high(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()?;
        Ok(QPoly::from_high(coeffs))
    }

    pub fn zero() -> Self {
        QPoly { c: Vec::new() }
    }

    pub fn constant(q: BigRational) -> Self {
        QPoly::new(vec![q])
    }

    pub fn x() -> Self {
        QPoly::from_ints(&[0, 1])
    }

    /// `x - r`
    pub fn linear(r: &BigRational) -> Self {
        QPoly::new(vec![-r.clone(), BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.c.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.c.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        QPoly::new(self.c.iter().map(|a| a * q).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().recip())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = QPoly::constant(BigRational::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        QPoly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * BigRational::from_integer(i.into()))
                .collect(),
        )
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        let dd = d.degree().expect("polynomial division by zero");
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (QPoly::zero(), self.clone());
        }
        let lead_inv = d.leading().recip();
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let t = &r[k + dd] * &lead_inv;
            if !t.is_zero() {
                for (i, di) in d.c.iter().enumerate() {
                    r[k + i] -= &t * di;
                }
            }
            q[k] = t;
        }
        r.truncate(dd);
        (QPoly::new(q), QPoly::new(r))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Discriminant of a quadratic or cubic; `None` for other degrees.
    pub fn discriminant(&self) -> Option<BigRational> {
        let n = |v: i64| BigRational::from_integer(v.into());
        match self.degree()? {
            2 => {
                let (c, b, a) = (&self.c[0], &self.c[1], &self.c[2]);
                Some(b * b - n(4) * a * c)
            }
            3 => {
                let (d, c, b, a) = (&self.c[0], &self.c[1], &self.c[2], &self.c[3]);
                let abcd = a * b * c * d;
                Some(
                    b * b * c * c - n(4) * a * c * c * c - n(4) * b * b * b * d - n(27) * a * a * d * d
                        + n(18) * abcd,
                )
            }
            _ => None,
        }
    }

    /// Integer coefficients of a primitive integer multiple (positive leading
    /// coefficient), lowest degree first.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let lcm = self
            .c
            .iter()
            .fold(BigInt::one(), |acc, a| acc.lcm(a.denom()));
        let ints: Vec<BigInt> = self.c.iter().map(|a| (a * &lcm).to_integer()).collect();
        let mut content = ints.iter().fold(BigInt::zero(), |g, a| g.gcd(a));
        if content.is_zero() {
            return ints;
        }
        if ints.last().is_some_and(|a| a.is_negative()) {
            content = -content;
        }
        ints.into_iter().map(|a| a / &content).collect()
    }

    /// Reduction mod `p`; `None` if `p` divides some denominator.
    pub fn reduce(&self, p: u64) -> Option<FpPoly> {
        let c = self
            .c
            .iter()
            .map(|a| reduce_mod(a, p))
            .collect::<Option<Vec<u64>>>()?;
        Some(FpPoly::new(c, p))
    }

    /// All rational roots, with multiplicity, sorted ascending.
    ///
    /// Roots of the squarefree part are found mod a prime where it stays
    /// squarefree, Hensel-lifted past the bound given by the constant and
    /// leading coefficients, reconstructed, and checked by substitution.
    pub fn rational_roots(&self) -> Vec<BigRational> {
        assert!(!self.is_zero(), "rational_roots of the zero polynomial");
        let mut f = self.clone();
        let mut out = Vec::new();
        while f.c[0].is_zero() {
            out.push(BigRational::zero());
            f = QPoly::new(f.c[1..].to_vec());
        }
        if f.degree().unwrap_or(0) == 0 {
            return out;
        }
        let g = f.div_rem(&f.gcd(&f.derivative())).0;
        let ints = g.primitive_integer();
        let bound_num = ints[0].abs();
        let bound_den = ints.last().unwrap().abs();
        let target = BigInt::from(2) * &bound_num * &bound_den;
        let mut p = 1009u64;
        let (p, gp) = loop {
            p += 2;
            if !is_prime(p) || (&bound_den % p).is_zero() {
                continue;
            }
            let gp = FpPoly::from_ints(&ints, p);
            if gp.gcd(&gp.derivative()).degree() == Some(0) {
                break (p, gp);
            }
        };
        let zi: Vec<BigRational> = ints.iter().map(|a| BigRational::from_integer(a.clone())).collect();
        let gz = QPoly::new(zi);
        let mut found = Vec::new();
        for r0 in gp.roots() {
            let Some(r) = hensel_lift(&ints, r0, p, &target) else {
                continue;
            };
            if let Some(q) = reconstruct(&r.0, &r.1, &bound_num, &bound_den) {
                if gz.eval(&q).is_zero() {
                    found.push(q);
                }
            }
        }
        for q in found {
            let lin = QPoly::linear(&q);
            let mut h = f.clone();
            loop {
                let (quo, rem) = h.div_rem(&lin);
                if !rem.is_zero() {
                    break;
                }
                out.push(q.clone());
                h = quo;
            }
        }
        out.sort();
        out
    }
}

fn eval_int(c: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for a in c.iter().rev() {
        acc = (acc * x + a).mod_floor(m);
    }
    acc
}

/// Newton iteration from a simple root mod `p` until the modulus exceeds
/// `target`. Returns `(root, modulus)`.
fn hensel_lift(c: &[BigInt], r0: u64, p: u64, target: &BigInt) -> Option<(BigInt, BigInt)> {
    let dc: Vec<BigInt> = c
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, a)| a * BigInt::from(i))
        .collect();
    let mut m = BigInt::from(p);
    let mut r = BigInt::from(r0);
    while &m <= target {
        m = &m * &m;
        let fr = eval_int(c, &r, &m);
        let dr = eval_int(&dc, &r, &m);
        let inv = dr.modinv(&m)?;
        r = (&r - fr * inv).mod_floor(&m);
    }
    Some((r, m))
}

/// The fraction `a/b` with `|a| <= na`, `0 < b <= nb` congruent to `r` mod
/// `m`, if one exists (unique when `m > 2 na nb`).
fn reconstruct(r: &BigInt, m: &BigInt, na: &BigInt, nb: &BigInt) -> Option<BigRational> {
    let (mut r0, mut r1) = (m.clone(), r.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while &r1 > na {
        let q = &r0 / &r1;
        (r0, r1) = (r1.clone(), &r0 - &q * &r1);
        (t0, t1) = (t1.clone(), &t0 - &q * &t1);
    }
    if t1.is_zero() || &t1.abs() > nb {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let (sign, mag) = if a.is_negative() { ("-", -a) } else { ("+", a.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let show = i == 0 || !mag.is_one();
            match (show, i) {
                (true, 0) => write!(f, "{mag}")?,
                (true, 1) => write!(f, "{mag}*X")?,
                (true, _) => write!(f, "{mag}*X^{i}")?,
                (false, 1) => write!(f, "X")?,
                (false, _) => write!(f, "X^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPoly({self})")
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, o: &QPoly) -> QPoly {
        let n = self.c.len().max(o.c.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, o: &QPoly) -> QPoly {
        let n = self.c.len().max(o.c.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly::new(self.c.iter().map(|a| -a).collect())
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }
}

/// Polynomial over F_p (`p` prime below 2^63), lowest degree first, trimmed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FpPoly {
    c: Vec<u64>,
    p: u64,
}

impl FpPoly {
    pub fn new(mut c: Vec<u64>, p: u64) -> Self {
        for a in c.iter_mut() {
            *a %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { c, p }
    }

    pub fn from_ints(c: &[BigInt], p: u64) -> Self {
        let pb = BigInt::from(p);
        FpPoly::new(c.iter().map(|a| a.mod_floor(&pb).to_u64().unwrap()).collect(), p)
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let mut acc = 0;
        for &a in self.c.iter().rev() {
            acc = add_mod(mul_mod(acc, x, self.p), a, self.p);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let p = self.p;
        FpPoly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &a)| mul_mod(a, i as u64 % p, p))
                .collect(),
            p,
        )
    }

    fn monic(mut self) -> Self {
        if let Some(&lead) = self.c.last() {
            let inv = inv_mod(lead, self.p).unwrap();
            for a in self.c.iter_mut() {
                *a = mul_mod(*a, inv, self.p);
            }
        }
        self
    }

    pub fn rem(&self, d: &FpPoly) -> FpPoly {
        let p = self.p;
        let dd = d.degree().expect("polynomial division by zero");
        let mut r = self.c.clone();
        let inv = inv_mod(*d.c.last().unwrap(), p).unwrap();
        while r.len() > dd {
            let k = r.len() - 1 - dd;
            let t = mul_mod(*r.last().unwrap(), inv, p);
            if t != 0 {
                for (i, &di) in d.c.iter().enumerate() {
                    r[k + i] = sub_mod(r[k + i], mul_mod(t, di, p), p);
                }
            }
            r.pop();
            while r.last() == Some(&0) {
                r.pop();
            }
        }
        FpPoly::new(r, p)
    }

    /// Quotient of long division by `d`.
    pub fn div(&self, d: &FpPoly) -> FpPoly {
        let p = self.p;
        let dd = d.degree().expect("polynomial division by zero");
        let mut r = self.c.clone();
        if r.len() <= dd {
            return FpPoly::new(Vec::new(), p);
        }
        let mut q = vec![0u64; r.len() - dd];
        let inv = inv_mod(*d.c.last().unwrap(), p).unwrap();
        while r.len() > dd {
            let k = r.len() - 1 - dd;
            let t = mul_mod(*r.last().unwrap(), inv, p);
            q[k] = t;
            for (i, &di) in d.c.iter().enumerate() {
                r[k + i] = sub_mod(r[k + i], mul_mod(t, di, p), p);
            }
            r.pop();
        }
        FpPoly::new(q, p)
    }

    pub fn mul(&self, o: &FpPoly) -> FpPoly {
        let p = self.p;
        if self.is_zero() || o.is_zero() {
            return FpPoly::new(Vec::new(), p);
        }
        let mut out = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                out[i + j] = add_mod(out[i + j], mul_mod(a, b, p), p);
            }
        }
        FpPoly::new(out, p)
    }

    pub fn sub(&self, o: &FpPoly) -> FpPoly {
        let n = self.c.len().max(o.c.len());
        let g = |v: &[u64], i: usize| v.get(i).copied().unwrap_or(0);
        FpPoly::new((0..n).map(|i| sub_mod(g(&self.c, i), g(&o.c, i), self.p)).collect(), self.p)
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, o: &FpPoly) -> FpPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `X^e mod self` by repeated squaring.
    pub fn x_pow_mod(&self, mut e: u64) -> FpPoly {
        let p = self.p;
        let mut base = FpPoly::new(vec![0, 1], p).rem(self);
        let mut acc = FpPoly::new(vec![1], p).rem(self);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(self);
            }
            base = base.mul(&base).rem(self);
            e >>= 1;
        }
        acc
    }

    /// Number of distinct roots in F_p, as the degree of gcd(X^p - X, f).
    /// The zero polynomial has `p` roots.
    pub fn distinct_root_count(&self) -> u64 {
        match self.degree() {
            None => self.p,
            Some(0) => 0,
            Some(_) => {
                let xp = self.x_pow_mod(self.p);
                let g = xp.sub(&FpPoly::new(vec![0, 1], self.p)).gcd(self);
                g.degree().unwrap_or(0) as u64
            }
        }
    }

    /// Linear factors in F_p[X] counted with multiplicity. Each pass strips
    /// one copy of every distinct root.
    pub fn linear_factor_count(&self) -> u64 {
        if self.is_zero() {
            return self.p;
        }
        let x = FpPoly::new(vec![0, 1], self.p);
        let mut f = self.clone();
        let mut total = 0;
        while f.degree().unwrap_or(0) > 0 {
            let g = f.x_pow_mod(self.p).sub(&x).gcd(&f);
            let k = g.degree().unwrap_or(0);
            if k == 0 {
                break;
            }
            total += k as u64;
            f = f.div(&g);
        }
        total
    }

    /// Distinct roots by exhaustive evaluation; for small `p`.
    pub fn roots(&self) -> Vec<u64> {
        (0..self.p).filter(|&x| self.eval(x) == 0).collect()
    }
}

/// Checks `p` is usable as an F_p modulus here.
pub fn check_fp_modulus(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p >= 1 << 63 {
        return Err(Error::OutOfRange(format!("p = {p} exceeds 2^63")));
    }
    Ok(())
}
