//! Elliptic curves over Q, the genus one quartic `-7y^2 = q(x)`, and the
//! rational maps relating them to the j-line.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::prime::factor_u64;
use crate::arith::rational::{int, rational_sqrt};
use crate::arith::{parse_rational, BigRational, QPoly, QuadFieldElement};
use crate::error::{Error, Result};

/// Field elements the point checks accept: rationals, or elements of one
/// quadratic field.
pub trait Coord: Clone + PartialEq + fmt::Display {
    /// `q` embedded in the field of `self`.
    fn embed(&self, q: BigRational) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Option<Self>;
    fn vanishes(&self) -> bool;
    fn is_square(&self) -> bool;
    fn same_field(&self, o: &Self) -> bool;

    fn scale(&self, k: i64) -> Self {
        self.mul(&self.embed(int(k)))
    }
}

impl Coord for BigRational {
    fn embed(&self, q: BigRational) -> Self {
        q
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Option<Self> {
        (!Zero::is_zero(o)).then(|| self / o)
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_square(&self) -> bool {
        rational_sqrt(self).is_some()
    }
    fn same_field(&self, _: &Self) -> bool {
        true
    }
}

impl Coord for QuadFieldElement {
    fn embed(&self, q: BigRational) -> Self {
        QuadFieldElement::from_rational(q, self.d()).expect("field of an existing element")
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Option<Self> {
        o.inv().map(|i| self * &i)
    }
    fn vanishes(&self) -> bool {
        QuadFieldElement::is_zero(self)
    }
    fn is_square(&self) -> bool {
        self.sqrt().is_some()
    }
    fn same_field(&self, o: &Self) -> bool {
        QuadFieldElement::same_field(self, o)
    }
}

/// `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` with nonzero discriminant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassCurve {
    pub a1: BigRational,
    pub a2: BigRational,
    pub a3: BigRational,
    pub a4: BigRational,
    pub a6: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariants {
    pub c4: BigRational,
    pub c6: BigRational,
    pub discriminant: BigRational,
    pub j: BigRational,
}

impl WeierstrassCurve {
    pub fn new(a: [BigRational; 5]) -> Result<Self> {
        let [a1, a2, a3, a4, a6] = a;
        let e = WeierstrassCurve { a1, a2, a3, a4, a6 };
        if e.discriminant().is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(e)
    }

    pub fn from_ints(a: [i64; 5]) -> Result<Self> {
        WeierstrassCurve::new(a.map(int))
    }

    /// Parses `"a1,a2,a3,a4,a6"`, each an integer or `p/q`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 5 {
            return Err(Error::Parse(format!(
                "expected five comma-separated coefficients, got {}",
                parts.len()
            )));
        }
        let a: Vec<BigRational> = parts.into_iter().map(parse_rational).collect::<Result<_>>()?;
        WeierstrassCurve::new(a.try_into().unwrap())
    }

    /// `y^2 + xy = x^3 - x^2 - 107x - 379`, j = 2268945/128.
    pub fn counterexample() -> Self {
        WeierstrassCurve::from_ints([1, -1, 0, -107, -379]).unwrap()
    }

    /// `y^2 + xy = x^3 - x^2 - 107x + 552`, conductor 49.
    pub fn curve_49a3() -> Self {
        WeierstrassCurve::from_ints([1, -1, 0, -107, 552]).unwrap()
    }

    pub fn coefficients(&self) -> [&BigRational; 5] {
        [&self.a1, &self.a2, &self.a3, &self.a4, &self.a6]
    }

    pub fn b2(&self) -> BigRational {
        &self.a1 * &self.a1 + int(4) * &self.a2
    }

    pub fn b4(&self) -> BigRational {
        int(2) * &self.a4 + &self.a1 * &self.a3
    }

    pub fn b6(&self) -> BigRational {
        &self.a3 * &self.a3 + int(4) * &self.a6
    }

    pub fn b8(&self) -> BigRational {
        let b4 = self.b4();
        (self.b2() * self.b6() - &b4 * &b4) / int(4)
    }

    pub fn discriminant(&self) -> BigRational {
        let (b2, b4, b6, b8) = (self.b2(), self.b4(), self.b6(), self.b8());
        -(&b2 * &b2 * &b8) - int(8) * &b4 * &b4 * &b4 - int(27) * &b6 * &b6 + int(9) * &b2 * &b4 * &b6
    }

    pub fn c4(&self) -> BigRational {
        let b2 = self.b2();
        &b2 * &b2 - int(24) * self.b4()
    }

    pub fn c6(&self) -> BigRational {
        let (b2, b4, b6) = (self.b2(), self.b4(), self.b6());
        -(&b2 * &b2 * &b2) + int(36) * &b2 * &b4 - int(216) * b6
    }

    pub fn invariants(&self) -> Invariants {
        let (c4, c6, discriminant) = (self.c4(), self.c6(), self.discriminant());
        let j = &c4 * &c4 * &c4 / &discriminant;
        Invariants {
            c4,
            c6,
            discriminant,
            j,
        }
    }

    pub fn j_invariant(&self) -> BigRational {
        self.invariants().j
    }

    pub fn is_integral(&self) -> bool {
        self.coefficients().iter().all(|a| a.is_integer())
    }

    /// `lhs - rhs` of the Weierstrass equation at `(x, y)`.
    fn residual<T: Coord>(&self, x: &T, y: &T) -> T {
        let a = |q: &BigRational| x.embed(q.clone());
        let lhs = y.mul(y).add(&a(&self.a1).mul(x).mul(y)).add(&a(&self.a3).mul(y));
        let x2 = x.mul(x);
        let rhs = x2.mul(x).add(&a(&self.a2).mul(&x2)).add(&a(&self.a4).mul(x)).add(&a(&self.a6));
        lhs.sub(&rhs)
    }

    pub fn contains<T: Coord>(&self, x: &T, y: &T) -> Result<bool> {
        if !x.same_field(y) {
            return Err(Error::MixedFields);
        }
        Ok(self.residual(x, y).vanishes())
    }

    /// `p` divides a coefficient denominator.
    pub fn denominator_collision(&self, p: u64) -> bool {
        self.coefficients().iter().any(|a| (a.denom() % p).is_zero())
    }

    /// Whether `p` divides the numerator of the discriminant of this model.
    pub fn bad_at(&self, p: u64) -> bool {
        (self.discriminant().numer() % p).is_zero()
    }
}

impl fmt::Display for WeierstrassCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{},{},{}]", self.a1, self.a2, self.a3, self.a4, self.a6)
    }
}

pub fn invariants(e: &WeierstrassCurve) -> Invariants {
    e.invariants()
}

/// Primes dividing the discriminant of the given integral model.
pub fn bad_primes(e: &WeierstrassCurve) -> Result<Vec<u64>> {
    if !e.is_integral() {
        return Err(Error::NonIntegral);
    }
    factor_integer(&e.discriminant().to_integer().abs())
}

/// Distinct prime factors: trial division below 10^7, then Pollard rho once
/// the cofactor fits in 64 bits.
pub fn factor_integer(n: &BigInt) -> Result<Vec<u64>> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return Err(Error::Unfactored("0".into()));
    }
    let mut d = 2u64;
    while d < 10_000_000 {
        if let Some(small) = n.to_u64() {
            out.extend(factor_u64(small).into_iter().map(|(p, _)| p));
            out.sort_unstable();
            out.dedup();
            return Ok(out);
        }
        if (&n % d).is_zero() {
            out.push(d);
            while (&n % d).is_zero() {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n.is_one() {
        return Ok(out);
    }
    Err(Error::Unfactored(n.to_string()))
}

/// x-coordinates of the rational points of order 2.
pub fn two_torsion_x(e: &WeierstrassCurve) -> Vec<BigRational> {
    let f = QPoly::new(vec![e.b6(), int(2) * e.b4(), e.b2(), int(4)]);
    let mut roots = f.rational_roots();
    roots.dedup();
    roots
}

/// The y-coordinate of the 2-torsion point above `x`.
pub fn two_torsion_y(e: &WeierstrassCurve, x: &BigRational) -> BigRational {
    -(&e.a1 * x + &e.a3) / int(2)
}

/// Quotient of integer polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMap {
    pub numerator: QPoly,
    pub denominator: QPoly,
}

impl RationalMap {
    pub fn new(numerator: QPoly, denominator: QPoly) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::Precondition("zero denominator polynomial".into()));
        }
        Ok(RationalMap {
            numerator,
            denominator,
        })
    }

    pub fn eval(&self, x: &BigRational) -> Result<BigRational> {
        let den = self.denominator.eval(x);
        if den.is_zero() {
            return Err(Error::Pole(x.to_string()));
        }
        Ok(self.numerator.eval(x) / den)
    }
}

/// The degree-56 map from the x-line of the quartic to the j-line.
pub fn map_f() -> RationalMap {
    let p = QPoly::from_ints;
    let num = [
        p(&[-3, 1]).pow(3),
        p(&[-2, 1]),
        p(&[-5, 1, 1]).pow(3),
        p(&[2, 1, 1]).pow(3),
        p(&[1, 3, 2, -3, 1]).pow(3),
    ]
    .iter()
    .fold(p(&[-1]), |acc, f| &acc * f);
    let den = p(&[1, -1, -2, 1]).pow(7);
    RationalMap::new(num, den).unwrap()
}

pub fn eval_map_f(x: &BigRational) -> Result<BigRational> {
    map_f().eval(x)
}

/// `-7 y^2 = x^4 + 2x^3 - 9x^2 - 10x - 3`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QuarticModel;

impl QuarticModel {
    pub const Q_COEFFS: [i64; 5] = [-3, -10, -9, 2, 1];
    pub const TWIST: i64 = -7;

    pub fn q<T: Coord>(&self, x: &T) -> T {
        let mut acc = x.embed(BigRational::zero());
        for &c in Self::Q_COEFFS.iter().rev() {
            acc = acc.mul(x).add(&x.embed(int(c)));
        }
        acc
    }

    pub fn contains<T: Coord>(&self, x: &T, y: &T) -> Result<bool> {
        if !x.same_field(y) {
            return Err(Error::MixedFields);
        }
        Ok(y.mul(y).scale(Self::TWIST) == self.q(x))
    }
}

pub fn quartic_point_check<T: Coord>(x: &T, y: &T) -> Result<bool> {
    QuarticModel.contains(x, y)
}

/// Image of a point of 49a3 on the quartic's x-line, and whether
/// `q(x)/(-7)` is a square in the coordinate field.
pub fn map_49a3_to_quartic_x<T: Coord>(u: &T, v: &T) -> Result<(T, bool)> {
    if !u.same_field(v) {
        return Err(Error::MixedFields);
    }
    if !WeierstrassCurve::curve_49a3().contains(u, v)? {
        return Err(Error::Precondition(format!("({u}, {v}) is not on 49a3")));
    }
    let num = u.scale(3).sub(v).add(&u.embed(int(42)));
    let den = u.add(&v.scale(2));
    let x = num
        .div(&den)
        .ok_or_else(|| Error::DegeneratePoint(u.to_string(), v.to_string()))?;
    let y2 = QuarticModel.q(&x).div(&x.embed(int(QuarticModel::TWIST))).unwrap();
    Ok((x, y2.is_square()))
}
