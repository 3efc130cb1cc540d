//! 2x2 invertible matrices over F_ell and their action on the projective
//! line Omega = P^1(F_ell).

mod cartan;
mod fp2;

use std::fmt;

use crate::arith::{is_prime, PrimeField, PrimeFieldElement};
use crate::error::{Error, Result};

pub use cartan::{cartan, normalizer_of_cartan, CartanKind, CartanSpec};
pub use fp2::{eigenlines, Fp2, Line2};

/// An element of GL_2(F_ell), entries stored row-major as `[a, b, c, d]`.
///
/// The derived ordering is row-major lexicographic on the entries.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GL2Element {
    ell: u32,
    m: [u32; 4],
}

impl GL2Element {
    pub fn new(ell: u64, a: u64, b: u64, c: u64, d: u64) -> Result<Self> {
        if !is_prime(ell) || ell >= 1 << 16 {
            return Err(Error::OutOfRange(format!("GL2 modulus must be a prime below 2^16, got {ell}")));
        }
        let l = ell as u32;
        let m = [a, b, c, d].map(|x| (x % ell) as u32);
        let g = GL2Element { ell: l, m };
        if g.det() == 0 {
            return Err(Error::Precondition(format!("singular matrix {g:?}")));
        }
        Ok(g)
    }

    /// Builds from signed entries, reducing mod `ell`.
    pub fn from_i64(ell: u64, e: [i64; 4]) -> Result<Self> {
        let r = |x: i64| x.rem_euclid(ell as i64) as u64;
        Self::new(ell, r(e[0]), r(e[1]), r(e[2]), r(e[3]))
    }

    /// Unchecked constructor for internal loops; caller guarantees det != 0.
    #[inline]
    pub(crate) fn raw(ell: u32, m: [u32; 4]) -> Self {
        GL2Element { ell, m }
    }

    pub fn identity(ell: u64) -> Self {
        Self::scalar(ell, 1)
    }

    pub fn scalar(ell: u64, s: u64) -> Self {
        let s = (s % ell) as u32;
        GL2Element {
            ell: ell as u32,
            m: [s, 0, 0, s],
        }
    }

    pub fn diag(ell: u64, x: u64, y: u64) -> Result<Self> {
        Self::new(ell, x, 0, 0, y)
    }

    pub fn antidiag(ell: u64, upper: u64, lower: u64) -> Result<Self> {
        Self::new(ell, 0, upper, lower, 0)
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.ell as u64
    }

    #[inline]
    pub fn raw_entries(&self) -> [u32; 4] {
        self.m
    }

    pub fn entries(&self) -> [PrimeFieldElement; 4] {
        let f = PrimeField::new(self.ell as u64).expect("modulus checked at construction");
        self.m.map(|x| f.elem(x as u64))
    }

    #[inline]
    pub fn det(&self) -> u32 {
        let l = self.ell as u64;
        let [a, b, c, d] = self.m.map(|x| x as u64);
        ((a * d % l + l - b * c % l) % l) as u32
    }

    #[inline]
    pub fn trace(&self) -> u32 {
        (self.m[0] + self.m[3]) % self.ell
    }

    #[inline]
    pub fn mul(&self, o: &Self) -> Self {
        debug_assert_eq!(self.ell, o.ell);
        let l = self.ell as u64;
        let [a, b, c, d] = self.m.map(|x| x as u64);
        let [e, f, g, h] = o.m.map(|x| x as u64);
        GL2Element {
            ell: self.ell,
            m: [
                ((a * e + b * g) % l) as u32,
                ((a * f + b * h) % l) as u32,
                ((c * e + d * g) % l) as u32,
                ((c * f + d * h) % l) as u32,
            ],
        }
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        if self.ell != o.ell {
            return Err(Error::ModulusMismatch(self.ell as u64, o.ell as u64));
        }
        Ok(self.mul(o))
    }

    pub fn inv(&self) -> Self {
        let l = self.ell;
        let di = inv_small(self.det(), l);
        let [a, b, c, d] = self.m;
        let s = |x: u32| ((x as u64 * di as u64) % l as u64) as u32;
        GL2Element {
            ell: l,
            m: [s(d), s((l - b) % l), s((l - c) % l), s(a)],
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::identity(self.ell as u64);
        let mut base = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn conjugate_by(&self, x: &Self) -> Self {
        x.mul(self).mul(&x.inv())
    }

    pub fn is_identity(&self) -> bool {
        self.m == [1, 0, 0, 1]
    }

    pub fn is_scalar(&self) -> bool {
        self.m[1] == 0 && self.m[2] == 0 && self.m[0] == self.m[3]
    }

    /// Order in GL_2(F_ell).
    pub fn order(&self) -> u64 {
        let mut x = *self;
        let mut k = 1;
        while !x.is_identity() {
            x = x.mul(self);
            k += 1;
        }
        k
    }

    /// Order of the image in PGL_2(F_ell).
    pub fn projective_order(&self) -> u64 {
        let mut x = *self;
        let mut k = 1;
        while !x.is_scalar() {
            x = x.mul(self);
            k += 1;
        }
        k
    }

    /// Canonical lift of the PGL_2 image: scaled so the first nonzero entry
    /// in row-major order is 1.
    pub fn projective_canonical(&self) -> Self {
        let first = *self.m.iter().find(|&&x| x != 0).expect("invertible matrix is nonzero");
        let s = inv_small(first, self.ell);
        let l = self.ell as u64;
        GL2Element {
            ell: self.ell,
            m: self.m.map(|x| ((x as u64 * s as u64) % l) as u32),
        }
    }

    /// Dense index in `0..ell^4`, monotone in the row-major ordering.
    #[inline]
    pub fn code(&self) -> u32 {
        let l = self.ell;
        ((self.m[0] * l + self.m[1]) * l + self.m[2]) * l + self.m[3]
    }

    pub fn from_code(ell: u32, code: u32) -> Self {
        let mut c = code;
        let d = c % ell;
        c /= ell;
        let cc = c % ell;
        c /= ell;
        let b = c % ell;
        let a = c / ell;
        GL2Element { ell, m: [a, b, cc, d] }
    }

    /// Every element of GL_2(F_ell) in row-major order.
    pub fn all(ell: u64) -> Vec<Self> {
        let l = ell as u32;
        (0..l.pow(4))
            .map(|c| Self::from_code(l, c))
            .filter(|g| g.det() != 0)
            .collect()
    }

    /// The permutation of Omega induced by this matrix, indexed by `ProjPoint::index`.
    pub fn permutation(&self) -> Vec<u32> {
        ProjPoint::all(self.ell as u64)
            .map(|p| act_unchecked(self, p).index())
            .collect()
    }

    /// Lines of Omega fixed by this element.
    pub fn fixed_lines(&self) -> Vec<ProjPoint> {
        ProjPoint::all(self.ell as u64)
            .filter(|&p| act_unchecked(self, p) == p)
            .collect()
    }
}

pub(crate) fn inv_small(x: u32, l: u32) -> u32 {
    crate::arith::prime::inv_mod(x as u64, l as u64).expect("nonzero residue mod prime") as u32
}

impl fmt::Debug for GL2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.m;
        write!(f, "[[{a},{b}],[{c},{d}]]")
    }
}

impl fmt::Display for GL2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A point of P^1(F_ell) in normal form `[1:t]` or `[0:1]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    ell: u32,
    // t in 0..ell for [1:t]; ell for [0:1]
    t: u32,
}

impl ProjPoint {
    /// The line through `(x, y)`; `None` for the zero vector.
    pub fn from_vector(ell: u64, x: u64, y: u64) -> Option<Self> {
        let l = ell as u32;
        let (x, y) = ((x % ell) as u32, (y % ell) as u32);
        if x == 0 && y == 0 {
            return None;
        }
        Some(Self::normalize(l, x, y))
    }

    #[inline]
    fn normalize(l: u32, x: u32, y: u32) -> Self {
        if x == 0 {
            ProjPoint { ell: l, t: l }
        } else {
            let t = (y as u64 * inv_small(x, l) as u64 % l as u64) as u32;
            ProjPoint { ell: l, t }
        }
    }

    pub fn infinity(ell: u64) -> Self {
        ProjPoint { ell: ell as u32, t: ell as u32 }
    }

    pub fn affine(ell: u64, t: u64) -> Self {
        ProjPoint { ell: ell as u32, t: (t % ell) as u32 }
    }

    pub fn all(ell: u64) -> impl Iterator<Item = ProjPoint> {
        let l = ell as u32;
        (0..=l).map(move |t| ProjPoint { ell: l, t })
    }

    pub fn modulus(&self) -> u64 {
        self.ell as u64
    }

    /// Index in `0..=ell`: `t` for `[1:t]`, `ell` for `[0:1]`.
    #[inline]
    pub fn index(&self) -> u32 {
        self.t
    }

    /// Normalized coordinates `(x, y)`.
    pub fn coords(&self) -> (u32, u32) {
        if self.t == self.ell {
            (0, 1)
        } else {
            (1, self.t)
        }
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (x, y) = self.coords();
        write!(f, "[{x}:{y}]")
    }
}

#[inline]
pub(crate) fn act_unchecked(g: &GL2Element, p: ProjPoint) -> ProjPoint {
    let l = g.ell as u64;
    let (x, y) = p.coords();
    let (x, y) = (x as u64, y as u64);
    let [a, b, c, d] = g.m.map(|v| v as u64);
    ProjPoint::normalize(g.ell, ((a * x + b * y) % l) as u32, ((c * x + d * y) % l) as u32)
}

/// Image of the line `p` under `g`.
pub fn act(g: &GL2Element, p: &ProjPoint) -> Result<ProjPoint> {
    if g.ell != p.ell {
        return Err(Error::ModulusMismatch(g.ell as u64, p.ell as u64));
    }
    Ok(act_unchecked(g, *p))
}

/// Cycle data of the permutation an element induces on Omega.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementActionProfile {
    /// Order of the image in PGL_2.
    pub r: u64,
    /// Number of fixed lines.
    pub k: usize,
    /// Number of orbits.
    pub s: usize,
    pub sigma: i8,
    /// Sorted ascending.
    pub orbit_sizes: Vec<usize>,
}

impl ElementActionProfile {
    /// Checks `k in {0,1,2,ell+1}`, that orbit sizes sum to `ell+1`, and that
    /// every non-trivial orbit has size `r`.
    pub fn is_consistent(&self, ell: u64) -> bool {
        let n = ell as usize + 1;
        let ones = self.orbit_sizes.iter().filter(|&&x| x == 1).count();
        (matches!(self.k, 0..=2) || self.k == n)
            && self.orbit_sizes.iter().sum::<usize>() == n
            && ones == self.k
            && self.s == self.orbit_sizes.len()
            && self.orbit_sizes.iter().all(|&x| x == 1 || x as u64 == self.r)
    }
}

pub fn action_profile(g: &GL2Element) -> ElementActionProfile {
    let perm = g.permutation();
    let n = perm.len();
    let mut seen = vec![false; n];
    let mut orbit_sizes = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i] as usize;
            len += 1;
        }
        orbit_sizes.push(len);
    }
    orbit_sizes.sort_unstable();
    let s = orbit_sizes.len();
    let k = orbit_sizes.iter().filter(|&&x| x == 1).count();
    let sigma = if (n - s) % 2 == 0 { 1 } else { -1 };
    ElementActionProfile {
        r: g.projective_order(),
        k,
        s,
        sigma,
        orbit_sizes,
    }
}

/// Orbits of a set of matrices acting on Omega, each sorted, in order of
/// their smallest member.
pub fn orbits(gens: &[GL2Element], ell: u64) -> Vec<Vec<ProjPoint>> {
    let n = ell as usize + 1;
    let perms: Vec<Vec<u32>> = gens.iter().map(|g| g.permutation()).collect();
    let mut label = vec![usize::MAX; n];
    let mut out: Vec<Vec<ProjPoint>> = Vec::new();
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        label[start] = id;
        let mut stack = vec![start];
        let mut members = vec![start];
        while let Some(i) = stack.pop() {
            for p in &perms {
                let j = p[i] as usize;
                if label[j] == usize::MAX {
                    label[j] = id;
                    stack.push(j);
                    members.push(j);
                }
            }
        }
        members.sort_unstable();
        out.push(
            members
                .into_iter()
                .map(|t| ProjPoint { ell: ell as u32, t: t as u32 })
                .collect(),
        );
    }
    out
}
