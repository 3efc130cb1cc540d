//! The quadratic extension F_{ell^2} and lines of P^1(F_{ell^2}), used to
//! locate eigenlines of elements that have no eigenvector over F_ell.

use std::fmt;

use super::{inv_small, GL2Element};
use crate::arith::prime::sqrt_mod;

/// `a + b·theta` where `theta^2 = c1·theta + c0` is irreducible over F_ell.
///
/// For odd `ell` the modulus is `theta^2 = delta` with `delta` the smallest
/// non-residue; for `ell = 2` it is `theta^2 = theta + 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp2 {
    ell: u32,
    a: u32,
    b: u32,
}

fn min_poly(ell: u32) -> (u32, u32) {
    if ell == 2 {
        (1, 1)
    } else {
        (0, smallest_nonresidue(ell))
    }
}

pub(crate) fn smallest_nonresidue(ell: u32) -> u32 {
    (2..ell)
        .find(|&v| sqrt_mod(v as u64, ell as u64).is_none())
        .expect("odd prime has a non-residue")
}

impl Fp2 {
    pub fn new(ell: u32, a: u32, b: u32) -> Self {
        Fp2 { ell, a: a % ell, b: b % ell }
    }

    pub fn from_base(ell: u32, a: u32) -> Self {
        Self::new(ell, a, 0)
    }

    pub fn parts(&self) -> (u32, u32) {
        (self.a, self.b)
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn in_base_field(&self) -> bool {
        self.b == 0
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.ell, self.a + o.a, self.b + o.b)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(self.ell, self.a + self.ell - o.a, self.b + self.ell - o.b)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let l = self.ell as u64;
        let (c1, c0) = min_poly(self.ell);
        let (a, b, c, d) = (self.a as u64, self.b as u64, o.a as u64, o.b as u64);
        let bd = b * d % l;
        Fp2 {
            ell: self.ell,
            a: ((a * c + bd * c0 as u64) % l) as u32,
            b: ((a * d + b * c + bd * c1 as u64) % l) as u32,
        }
    }

    /// Image under Frobenius: `theta -> c1 - theta`.
    pub fn conj(&self) -> Self {
        let (c1, _) = min_poly(self.ell);
        let l = self.ell;
        Self::new(l, self.a + self.b * c1, (l - self.b) % l)
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let norm = self.mul(&self.conj());
        debug_assert!(norm.in_base_field());
        let ni = inv_small(norm.a, self.ell);
        Some(self.conj().mul(&Fp2::from_base(self.ell, ni)))
    }

    /// Roots in F_{ell^2} of `x^2 - t x + n` with `t, n` in F_ell.
    pub fn quadratic_roots(ell: u32, t: u32, n: u32) -> Vec<Fp2> {
        if ell == 2 {
            let mut out = Vec::new();
            for a in 0..2 {
                for b in 0..2 {
                    let x = Fp2::new(2, a, b);
                    let v = x.mul(&x).sub(&x.mul(&Fp2::from_base(2, t))).add(&Fp2::from_base(2, n));
                    if v.is_zero() {
                        out.push(x);
                    }
                }
            }
            return out;
        }
        let l = ell as u64;
        let disc = ((t as u64 * t as u64 + 4 * (l - n as u64)) % l) as u32;
        let half = inv_small(2, ell);
        let root = match sqrt_mod(disc as u64, l) {
            Some(r) => Fp2::from_base(ell, r as u32),
            None => {
                let (_, delta) = min_poly(ell);
                let q = (disc as u64 * inv_small(delta, ell) as u64 % l) as u32;
                let s = sqrt_mod(q as u64, l).expect("disc/delta is a square") as u32;
                Fp2::new(ell, 0, s)
            }
        };
        let tt = Fp2::from_base(ell, t);
        let h = Fp2::from_base(ell, half);
        let r1 = tt.add(&root).mul(&h);
        let r2 = tt.sub(&root).mul(&h);
        if r1 == r2 {
            vec![r1]
        } else {
            vec![r1, r2]
        }
    }
}

impl fmt::Debug for Fp2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}θ", self.a, self.b)
    }
}

/// A point of P^1(F_{ell^2}) in normal form `[1:t]` or `[0:1]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Line2 {
    Affine(Fp2),
    Infinity,
}

impl Line2 {
    pub fn from_vector(x: Fp2, y: Fp2) -> Option<Self> {
        if x.is_zero() {
            return (!y.is_zero()).then_some(Line2::Infinity);
        }
        Some(Line2::Affine(y.mul(&x.inv()?)))
    }

    /// True when the line is defined over F_ell.
    pub fn is_rational(&self) -> bool {
        match self {
            Line2::Infinity => true,
            Line2::Affine(t) => t.in_base_field(),
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            Line2::Infinity => Line2::Infinity,
            Line2::Affine(t) => Line2::Affine(t.conj()),
        }
    }

    pub fn image(&self, g: &GL2Element) -> Self {
        let l = g.modulus() as u32;
        let [a, b, c, d] = g.raw_entries().map(|v| Fp2::from_base(l, v));
        let (x, y) = match self {
            Line2::Infinity => (Fp2::from_base(l, 0), Fp2::from_base(l, 1)),
            Line2::Affine(t) => (Fp2::from_base(l, 1), *t),
        };
        Line2::from_vector(a.mul(&x).add(&b.mul(&y)), c.mul(&x).add(&d.mul(&y)))
            .expect("invertible matrix maps lines to lines")
    }
}

/// Eigenlines of `g` over F_{ell^2}; `None` for scalar matrices.
pub fn eigenlines(g: &GL2Element) -> Option<Vec<Line2>> {
    if g.is_scalar() {
        return None;
    }
    let l = g.modulus() as u32;
    let [a, b, c, d] = g.raw_entries();
    let roots = Fp2::quadratic_roots(l, g.trace(), g.det());
    let fa = Fp2::from_base(l, a);
    let fb = Fp2::from_base(l, b);
    let fc = Fp2::from_base(l, c);
    let fd = Fp2::from_base(l, d);
    let mut lines: Vec<Line2> = roots
        .iter()
        .map(|lam| {
            if b != 0 {
                Line2::from_vector(fb, lam.sub(&fa)).expect("b != 0")
            } else if *lam == fd && a != d {
                Line2::Infinity
            } else if a != d {
                // c x + (d - lambda) y = 0 with lambda = a
                Line2::from_vector(fa.sub(&fd), fc).expect("a != d")
            } else {
                // lower unipotent: only the axis x = 0
                Line2::Infinity
            }
        })
        .collect();
    lines.sort();
    lines.dedup();
    Some(lines)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms_small() {
        for ell in [2u32, 3, 5, 7] {
            let elems: Vec<Fp2> = (0..ell).flat_map(|a| (0..ell).map(move |b| Fp2::new(ell, a, b))).collect();
            for x in &elems {
                if let Some(xi) = x.inv() {
                    assert_eq!(x.mul(&xi), Fp2::from_base(ell, 1));
                } else {
                    assert!(x.is_zero());
                }
                // Frobenius is x^ell
                let mut p = Fp2::from_base(ell, 1);
                for _ in 0..ell {
                    p = p.mul(x);
                }
                assert_eq!(p, x.conj());
            }
        }
    }

    #[test]
    fn eigenlines_are_fixed() {
        for ell in [2u64, 3, 5, 7] {
            for g in GL2Element::all(ell) {
                if let Some(lines) = eigenlines(&g) {
                    for line in lines {
                        assert_eq!(line.image(&g), line, "{g:?}");
                    }
                }
            }
        }
    }
}
