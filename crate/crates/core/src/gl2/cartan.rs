use std::collections::HashSet;

use serde::Serialize;

use super::fp2::{eigenlines, smallest_nonresidue};
use super::GL2Element;
use crate::arith::{is_prime, PrimeField, PrimeFieldElement};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CartanKind {
    Split,
    Nonsplit,
}

/// A Cartan subgroup: the standard split or nonsplit copy conjugated by
/// `conjugator` (elements are `x c x^-1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanSpec {
    pub kind: CartanKind,
    pub delta: Option<PrimeFieldElement>,
    pub conjugator: GL2Element,
}

impl CartanSpec {
    /// The standard copy; `delta` defaults to the smallest non-residue.
    pub fn standard(kind: CartanKind, ell: u64, delta: Option<u64>) -> Result<Self> {
        let field = PrimeField::new(ell)?;
        if ell >= 1 << 8 {
            return Err(Error::OutOfRange(format!("Cartan subgroups supported for ell < 256, got {ell}")));
        }
        let delta = match (kind, delta) {
            (CartanKind::Split, _) => None,
            (CartanKind::Nonsplit, Some(_)) if ell == 2 => {
                return Err(Error::Precondition(
                    "the nonsplit Cartan of GL2(F_2) takes no delta".into(),
                ))
            }
            (CartanKind::Nonsplit, None) if ell == 2 => None,
            (CartanKind::Nonsplit, Some(d)) => {
                let d = field.elem(d);
                if d.is_square() {
                    return Err(Error::DeltaIsResidue(d.value(), ell));
                }
                Some(d)
            }
            (CartanKind::Nonsplit, None) => Some(field.elem(smallest_nonresidue(ell as u32) as u64)),
        };
        Ok(CartanSpec {
            kind,
            delta,
            conjugator: GL2Element::identity(ell),
        })
    }

    pub fn conjugated(&self, x: &GL2Element) -> Self {
        CartanSpec {
            conjugator: x.mul(&self.conjugator),
            ..self.clone()
        }
    }

    pub fn modulus(&self) -> u64 {
        self.conjugator.modulus()
    }

    pub fn order(&self) -> usize {
        let l = self.modulus() as usize;
        match self.kind {
            CartanKind::Split => (l - 1) * (l - 1),
            CartanKind::Nonsplit => l * l - 1,
        }
    }

    fn standard_elements(&self) -> Vec<GL2Element> {
        let ell = self.modulus();
        let l = ell as u32;
        let mut out = Vec::with_capacity(self.order());
        match (self.kind, self.delta) {
            (CartanKind::Split, _) => {
                for x in 1..l {
                    for y in 1..l {
                        out.push(GL2Element::raw(l, [x, 0, 0, y]));
                    }
                }
            }
            (CartanKind::Nonsplit, None) => {
                // ell = 2: the unique subgroup of order 3
                out.push(GL2Element::raw(2, [1, 0, 0, 1]));
                out.push(GL2Element::raw(2, [0, 1, 1, 1]));
                out.push(GL2Element::raw(2, [1, 1, 1, 0]));
            }
            (CartanKind::Nonsplit, Some(delta)) => {
                let dv = delta.value() as u32;
                for x in 0..l {
                    for y in 0..l {
                        if x == 0 && y == 0 {
                            continue;
                        }
                        out.push(GL2Element::raw(l, [x, dv * y % l, y, x]));
                    }
                }
            }
        }
        out
    }

    fn standard_normalizer(&self) -> Vec<GL2Element> {
        let ell = self.modulus();
        let l = ell as u32;
        let c = self.standard_elements();
        let w = match self.kind {
            CartanKind::Split => GL2Element::raw(l, [0, 1, 1, 0]),
            CartanKind::Nonsplit if ell == 2 => GL2Element::raw(2, [0, 1, 1, 0]),
            // conjugation x + y sqrt(delta) -> x - y sqrt(delta)
            CartanKind::Nonsplit => GL2Element::raw(l, [1, 0, 0, l - 1]),
        };
        let mut out: Vec<GL2Element> = c.iter().copied().chain(c.iter().map(|g| g.mul(&w))).collect();
        out.sort();
        out.dedup();
        out
    }

    /// Element set, sorted row-major.
    pub fn elements(&self) -> Vec<GL2Element> {
        let x = self.conjugator;
        let xi = x.inv();
        let mut out: Vec<GL2Element> = self
            .standard_elements()
            .iter()
            .map(|g| x.mul(g).mul(&xi))
            .collect();
        out.sort();
        out
    }

    /// Elements of the normalizer, sorted row-major.
    pub fn normalizer_elements(&self) -> Vec<GL2Element> {
        let x = self.conjugator;
        let xi = x.inv();
        let mut out: Vec<GL2Element> = self
            .standard_normalizer()
            .iter()
            .map(|g| x.mul(g).mul(&xi))
            .collect();
        out.sort();
        out
    }
}

/// The standard split or nonsplit Cartan subgroup as an explicit element set.
pub fn cartan(kind: CartanKind, ell: u64, delta: Option<u64>) -> Result<Vec<GL2Element>> {
    Ok(CartanSpec::standard(kind, ell, delta)?.elements())
}

fn validate_cartan(c: &[GL2Element]) -> Result<u64> {
    let first = c.first().ok_or_else(|| Error::NotCartan("empty set".into()))?;
    let ell = first.modulus();
    if c.iter().any(|g| g.modulus() != ell) {
        return Err(Error::NotCartan("mixed moduli".into()));
    }
    let l = ell as usize;
    if c.len() != (l - 1) * (l - 1) && c.len() != l * l - 1 {
        return Err(Error::NotCartan(format!("order {} is neither (l-1)^2 nor l^2-1", c.len())));
    }
    let set: HashSet<GL2Element> = c.iter().copied().collect();
    if set.len() != c.len() {
        return Err(Error::NotCartan("repeated elements".into()));
    }
    if (1..ell).any(|s| !set.contains(&GL2Element::scalar(ell, s))) {
        return Err(Error::NotCartan("missing scalar matrices".into()));
    }
    for g in c {
        for h in c {
            let gh = g.mul(h);
            if gh != h.mul(g) {
                return Err(Error::NotCartan("not abelian".into()));
            }
            if !set.contains(&gh) {
                return Err(Error::NotCartan("not closed under products".into()));
            }
        }
    }
    Ok(ell)
}

/// Normalizer of a Cartan subgroup inside GL_2(F_ell).
///
/// Any element of `c` with two distinct eigenlines determines the pair of
/// lines `c` preserves, and `x` normalizes `c` iff `x r x^-1` lies in `c` for
/// such a regular `r`. The split Cartan of GL_2(F_2) is trivial and has no
/// regular element; its normalizer is taken as the stabilizer of the axes.
pub fn normalizer_of_cartan(c: &[GL2Element]) -> Result<Vec<GL2Element>> {
    let ell = validate_cartan(c)?;
    if !is_prime(ell) || ell >= 1 << 8 {
        return Err(Error::OutOfRange(format!("normalizer supported for ell < 256, got {ell}")));
    }
    let regular = c
        .iter()
        .find(|g| eigenlines(g).is_some_and(|lines| lines.len() == 2));
    let Some(r) = regular else {
        return Ok(vec![GL2Element::identity(2), GL2Element::raw(2, [0, 1, 1, 0])]);
    };
    let set: HashSet<GL2Element> = c.iter().copied().collect();
    let out: Vec<GL2Element> = GL2Element::all(ell)
        .into_iter()
        .filter(|x| set.contains(&r.conjugate_by(x)))
        .collect();
    if out.len() != 2 * c.len() {
        return Err(Error::NotCartan(format!(
            "normalizer has order {}, expected {}",
            out.len(),
            2 * c.len()
        )));
    }
    Ok(out)
}
