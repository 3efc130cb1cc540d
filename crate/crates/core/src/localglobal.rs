//! Classification of semisimple subgroups of GL_2(F_ell) by their projective
//! image, the exceptional-subgroup checker, and the construction of groups
//! that fix a line elementwise but not globally.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{is_prime, primitive_root};
use crate::error::{Error, Result};
use crate::gl2::{self, CartanKind, CartanSpec, GL2Element, Line2};
use crate::subgroups::{enumerate_subgroups, Subgroup};

/// Isomorphism type of the image in PGL_2(F_ell).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ImageStructure {
    Cyclic(usize),
    /// Dihedral group of the given order `2n`.
    Dihedral(usize),
    A4,
    S4,
    A5,
}

impl ImageStructure {
    pub fn order(&self) -> usize {
        match *self {
            ImageStructure::Cyclic(m) | ImageStructure::Dihedral(m) => m,
            ImageStructure::A4 => 12,
            ImageStructure::S4 => 24,
            ImageStructure::A5 => 60,
        }
    }

    /// `n` for a dihedral group of order `2n`.
    pub fn dihedral_n(&self) -> Option<usize> {
        match *self {
            ImageStructure::Dihedral(m) => Some(m / 2),
            _ => None,
        }
    }
}

impl fmt::Display for ImageStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ImageStructure::Cyclic(m) => write!(f, "cyclic of order {m}"),
            ImageStructure::Dihedral(m) => write!(f, "dihedral of order {m}"),
            ImageStructure::A4 => write!(f, "A4"),
            ImageStructure::S4 => write!(f, "S4"),
            ImageStructure::A5 => write!(f, "A5"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ExceptionalType {
    A4,
    S4,
    A5,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ClassificationCase {
    CartanContained,
    NormalizerNotCartan,
    Exceptional(ExceptionalType),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationResult {
    pub case: ClassificationCase,
    pub projective_image_structure: ImageStructure,
    /// Witness for the first two cases: the group lies in `cartan.elements()`
    /// (resp. `cartan.normalizer_elements()`).
    pub cartan: Option<CartanSpec>,
}

/// The image of `g` in PGL_2 as sorted canonical lifts.
pub fn projective_image(g: &Subgroup) -> Vec<GL2Element> {
    g.projective_image()
}

/// Recognizes the isomorphism type of a subgroup of PGL_2(F_ell) given as
/// canonical lifts.
pub fn image_structure(h: &[GL2Element]) -> Result<ImageStructure> {
    let m = h.len();
    let orders: Vec<u64> = h.iter().map(|x| x.projective_order()).collect();
    if orders.iter().any(|&r| r as usize == m) {
        return Ok(ImageStructure::Cyclic(m));
    }
    let order_set: BTreeSet<u64> = orders.iter().copied().collect();
    if m % 2 == 0 {
        let n = m / 2;
        for (r, &ord) in h.iter().zip(&orders) {
            if ord as usize != n {
                continue;
            }
            let mut rot: BTreeSet<GL2Element> = BTreeSet::new();
            let mut x = GL2Element::identity(r.modulus());
            for _ in 0..n {
                rot.insert(x.projective_canonical());
                x = x.mul(r);
            }
            let reflections_ok = h
                .iter()
                .zip(&orders)
                .all(|(y, &o)| rot.contains(y) || o == 2);
            if reflections_ok {
                return Ok(ImageStructure::Dihedral(m));
            }
        }
    }
    let set = |v: &[u64]| v.iter().copied().collect::<BTreeSet<u64>>();
    match m {
        12 if order_set == set(&[1, 2, 3]) => Ok(ImageStructure::A4),
        24 if order_set == set(&[1, 2, 3, 4]) => Ok(ImageStructure::S4),
        60 if order_set == set(&[1, 2, 3, 5]) => Ok(ImageStructure::A5),
        _ => Err(Error::Unclassified(format!(
            "projective image of order {m} with element orders {order_set:?}"
        ))),
    }
}

/// Vector spanning a line of P^1(F_ell) given as a rational `Line2`.
fn rational_vector(line: &Line2) -> (u32, u32) {
    match line {
        Line2::Infinity => (0, 1),
        Line2::Affine(t) => (1, t.parts().0),
    }
}

fn cartan_for_pair(ell: u64, pair: (Line2, Line2)) -> Option<CartanSpec> {
    let l = ell as u32;
    let (a, b) = pair;
    if a.is_rational() && b.is_rational() {
        let (x1, y1) = rational_vector(&a);
        let (x2, y2) = rational_vector(&b);
        let x = GL2Element::new(ell, x1 as u64, x2 as u64, y1 as u64, y2 as u64).ok()?;
        let spec = CartanSpec::standard(CartanKind::Split, ell, None).ok()?;
        return Some(spec.conjugated(&x));
    }
    if a.is_rational() || b != a.conj() {
        return None;
    }
    let spec = CartanSpec::standard(CartanKind::Nonsplit, ell, None).ok()?;
    let reference = spec
        .elements()
        .iter()
        .find_map(|g| gl2::eigenlines(g).filter(|v| v.len() == 2).map(|v| v[0]))?;
    let (Line2::Affine(tau), Line2::Affine(t)) = (reference, a) else {
        return None;
    };
    let (tau0, tau1) = tau.parts();
    let (t0, t1) = t.parts();
    // x (1, tau) = (1, t) with x e1 = (1, u2), x e2 = (0, w2)
    let w2 = (t1 as u64 * gl2::inv_small(tau1, l) as u64 % ell) as u32;
    let u2 = ((t0 as u64 + ell * ell - tau0 as u64 * w2 as u64 % ell) % ell) as u32;
    let x = GL2Element::new(ell, 1, 0, u2 as u64, w2 as u64).ok()?;
    Some(spec.conjugated(&x))
}

fn is_subset(g: &Subgroup, sorted: &[GL2Element]) -> bool {
    g.elements().iter().all(|x| sorted.binary_search(x).is_ok())
}

/// Candidate eigenline pairs of the non-scalar elements of `g`.
fn candidate_pairs(g: &Subgroup) -> Vec<(Line2, Line2)> {
    let mut pairs: BTreeSet<(Line2, Line2)> = BTreeSet::new();
    for x in g.elements() {
        if let Some(lines) = gl2::eigenlines(x) {
            if lines.len() == 2 {
                pairs.insert((lines[0], lines[1]));
            }
        }
    }
    pairs.into_iter().collect()
}

/// Finds a Cartan subgroup containing `g` (or whose normalizer contains `g`),
/// preferring split. Candidates come from eigenline pairs of elements of `g`.
pub fn find_cartan_containment(g: &Subgroup, normalizer: bool) -> Option<CartanSpec> {
    let ell = g.modulus();
    if g.elements().iter().all(|x| x.is_scalar()) {
        return CartanSpec::standard(CartanKind::Split, ell, None).ok();
    }
    let specs: Vec<CartanSpec> = candidate_pairs(g)
        .into_iter()
        .filter_map(|pair| cartan_for_pair(ell, pair))
        .collect();
    for kind in [CartanKind::Split, CartanKind::Nonsplit] {
        for spec in specs.iter().filter(|s| s.kind == kind) {
            let set = if normalizer {
                spec.normalizer_elements()
            } else {
                spec.elements()
            };
            if is_subset(g, &set) {
                return Some(spec.clone());
            }
        }
    }
    None
}

/// Exhaustive conjugator scan: some `x` with `g` inside `x S x^-1`, where `S`
/// is the standard Cartan of `kind` (or its normalizer).
pub fn find_cartan_containment_brute(g: &Subgroup, kind: CartanKind, normalizer: bool) -> Option<CartanSpec> {
    let ell = g.modulus();
    let spec = CartanSpec::standard(kind, ell, None).ok()?;
    let target = if normalizer {
        spec.normalizer_elements()
    } else {
        spec.elements()
    };
    GL2Element::all(ell).into_iter().find_map(|x| {
        let xi = x.inv();
        g.elements()
            .iter()
            .all(|h| target.binary_search(&xi.mul(h).mul(&x)).is_ok())
            .then(|| spec.conjugated(&x))
    })
}

/// Sorts a group of order prime to ell into one of the three cases.
pub fn classify(g: &Subgroup) -> Result<ClassificationResult> {
    let ell = g.modulus();
    if g.order() as u64 % ell == 0 {
        return Err(Error::NotSemisimple {
            order: g.order(),
            ell,
        });
    }
    let structure = image_structure(&g.projective_image())?;
    let brute_ok = ell <= 7;
    let contained = find_cartan_containment(g, false).or_else(|| {
        brute_ok
            .then(|| {
                [CartanKind::Split, CartanKind::Nonsplit]
                    .into_iter()
                    .find_map(|k| find_cartan_containment_brute(g, k, false))
            })
            .flatten()
    });
    let (case, cartan) = if let Some(c) = contained {
        (ClassificationCase::CartanContained, Some(c))
    } else if let Some(c) = find_cartan_containment(g, true).or_else(|| {
        brute_ok
            .then(|| {
                [CartanKind::Split, CartanKind::Nonsplit]
                    .into_iter()
                    .find_map(|k| find_cartan_containment_brute(g, k, true))
            })
            .flatten()
    }) {
        (ClassificationCase::NormalizerNotCartan, Some(c))
    } else {
        let t = match structure {
            ImageStructure::A4 => ExceptionalType::A4,
            ImageStructure::S4 => ExceptionalType::S4,
            ImageStructure::A5 => ExceptionalType::A5,
            other => {
                return Err(Error::Unclassified(format!(
                    "{other} image but no Cartan or normalizer containment"
                )))
            }
        };
        (ClassificationCase::Exceptional(t), None)
    };
    let consistent = matches!(
        (case, structure),
        (ClassificationCase::CartanContained, ImageStructure::Cyclic(_))
            | (ClassificationCase::NormalizerNotCartan, ImageStructure::Dihedral(_))
            | (ClassificationCase::Exceptional(_), _)
    );
    if !consistent {
        return Err(Error::Unclassified(format!("case {case:?} with {structure} image")));
    }
    Ok(ClassificationResult {
        case,
        projective_image_structure: structure,
        cartan,
    })
}

/// Sign of the permutation `g` induces on Omega.
fn sigma(g: &GL2Element) -> i8 {
    gl2::action_profile(g).sigma
}

/// Lines fixed by every element of `g`.
pub fn common_fixed_lines(g: &Subgroup) -> usize {
    let gens: Vec<GL2Element> = if g.generators().is_empty() {
        g.elements().to_vec()
    } else {
        g.generators().to_vec()
    };
    gl2::ProjPoint::all(g.modulus())
        .filter(|p| gens.iter().all(|x| gl2::act(x, p).map(|q| q == *p).unwrap_or(false)))
        .count()
}

/// Every element fixes a line, no line is fixed by the whole group, and the
/// image is not inside the kernel of the sign character.
pub fn lemma1_hypothesis(g: &Subgroup) -> bool {
    g.elements().iter().all(|x| !x.fixed_lines().is_empty())
        && common_fixed_lines(g) == 0
        && g.elements().iter().any(|x| sigma(x) == -1)
}

/// Orbit sizes of the group on Omega, sorted ascending.
pub fn orbit_sizes(g: &Subgroup) -> Vec<usize> {
    let gens: Vec<GL2Element> = if g.generators().is_empty() {
        g.elements().to_vec()
    } else {
        g.generators().to_vec()
    };
    let mut sizes: Vec<usize> = gl2::orbits(&gens, g.modulus()).iter().map(|o| o.len()).collect();
    sizes.sort_unstable();
    sizes
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub ell: u64,
    pub order: usize,
    pub generators: Vec<String>,
    pub hypothesis_met: bool,
    /// Half the order of the dihedral projective image (0 if not dihedral).
    pub n: usize,
    pub cartan_kind: Option<CartanKind>,
    pub proper_containment: bool,
    pub ell_mod_4: u64,
    pub has_orbit_of_size_2: bool,
    pub orbit_sizes: Vec<usize>,
    /// Every non-identity projective element fixes exactly two lines.
    pub nontrivial_fix_two: bool,
    pub classification_error: Option<String>,
}

impl LemmaReport {
    pub fn build(g: &Subgroup) -> Self {
        let ell = g.modulus();
        let hypothesis_met = lemma1_hypothesis(g);
        let classified = classify(g);
        let (n, cartan_kind, proper_containment, classification_error) = match &classified {
            Ok(c) => {
                let n = c.projective_image_structure.dihedral_n().unwrap_or(0);
                match (&c.case, &c.cartan) {
                    (ClassificationCase::NormalizerNotCartan, Some(spec)) => {
                        let proper = g.order() < 2 * spec.order();
                        (n, Some(spec.kind), proper, None)
                    }
                    _ => (n, None, false, None),
                }
            }
            Err(e) => (0, None, false, Some(e.to_string())),
        };
        let orbit_sizes = orbit_sizes(g);
        let nontrivial_fix_two = g
            .elements()
            .iter()
            .filter(|x| !x.is_scalar())
            .all(|x| x.fixed_lines().len() == 2);
        LemmaReport {
            ell,
            order: g.order(),
            generators: g.generators().iter().map(|x| x.to_string()).collect(),
            hypothesis_met,
            n,
            cartan_kind,
            proper_containment,
            ell_mod_4: ell % 4,
            has_orbit_of_size_2: orbit_sizes.contains(&2),
            orbit_sizes,
            nontrivial_fix_two,
            classification_error,
        }
    }

    /// Conclusions that fail; empty when the report is consistent.
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if !self.hypothesis_met {
            return v;
        }
        if let Some(e) = &self.classification_error {
            v.push(format!("classification failed: {e}"));
        }
        let half = (self.ell - 1) / 2;
        if !(self.n > 1 && self.n % 2 == 1 && half as usize % self.n.max(1) == 0) {
            v.push(format!("image is not dihedral of order 2n with n > 1 odd dividing {half} (n = {})", self.n));
        }
        if self.cartan_kind != Some(CartanKind::Split) {
            v.push(format!("not in the normalizer of a split Cartan ({:?})", self.cartan_kind));
        }
        if !self.proper_containment {
            v.push("containment in the normalizer is not proper".into());
        }
        if self.ell_mod_4 != 3 {
            v.push(format!("ell = {} is not 3 mod 4", self.ell));
        }
        if !self.has_orbit_of_size_2 {
            v.push(format!("no orbit of size 2 (orbits {:?})", self.orbit_sizes));
        }
        if !self.nontrivial_fix_two {
            v.push("some non-trivial element does not fix exactly two lines".into());
        }
        v
    }

    pub fn conclusions_hold(&self) -> bool {
        self.violations().is_empty()
    }
}

/// Runs the hypothesis over every conjugacy class of subgroups and reports
/// on those that satisfy it.
pub fn lemma1_verify(ell: u64, expensive: bool) -> Result<Vec<LemmaReport>> {
    let classes = enumerate_subgroups(ell, expensive)?;
    let mut reports: Vec<(usize, LemmaReport)> = classes
        .par_iter()
        .enumerate()
        .filter(|(_, c)| lemma1_hypothesis(&c.rep))
        .map(|(i, c)| (i, LemmaReport::build(&c.rep)))
        .collect();
    reports.sort_by_key(|(i, _)| *i);
    Ok(reports.into_iter().map(|(_, r)| r).collect())
}

/// Summary of a full classification pass over all semisimple classes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ClassificationCensus {
    pub semisimple_classes: usize,
    pub by_case: BTreeMap<String, usize>,
    pub failures: Vec<String>,
}

pub fn classification_census(ell: u64, expensive: bool) -> Result<ClassificationCensus> {
    let classes = enumerate_subgroups(ell, expensive)?;
    let results: Vec<(String, Result<ClassificationResult>)> = classes
        .par_iter()
        .filter(|c| c.rep.order() as u64 % ell != 0)
        .map(|c| (format!("{:?}", c.rep), classify(&c.rep)))
        .collect();
    let mut census = ClassificationCensus {
        semisimple_classes: results.len(),
        ..Default::default()
    };
    for (name, r) in results {
        match r {
            Ok(c) => {
                let key = match c.case {
                    ClassificationCase::CartanContained => "cartan".to_string(),
                    ClassificationCase::NormalizerNotCartan => "normalizer".to_string(),
                    ClassificationCase::Exceptional(t) => format!("{t:?}"),
                };
                *census.by_case.entry(key).or_default() += 1;
            }
            Err(e) => census.failures.push(format!("{name}: {e}")),
        }
    }
    Ok(census)
}

/// The group of matrices `diag(a^i, a^j)` and `antidiag(a^i, a^j)` with
/// `i = j mod (ell-1)/n`, `a` the smallest primitive root.
///
/// Requires `ell > 3` prime with `ell = 3 mod 4`, and `n >= 3` odd dividing
/// `(ell-1)/2`; `n = (ell-1)/2` is the same-parity construction.
pub fn construct_prop3_group(ell: u64, n: u64) -> Result<Subgroup> {
    let fail = |what: &str| Err(Error::Precondition(what.to_string()));
    if !is_prime(ell) {
        return fail(&format!("ell = {ell} is not prime"));
    }
    if ell <= 3 {
        return fail(&format!("ell = {ell} must exceed 3"));
    }
    if ell % 4 != 3 {
        return fail(&format!("ell = {ell} is not 3 mod 4"));
    }
    if n < 3 || n % 2 == 0 {
        return fail(&format!("n = {n} must be odd and at least 3"));
    }
    if ((ell - 1) / 2) % n != 0 {
        return fail(&format!("n = {n} does not divide (ell-1)/2 = {}", (ell - 1) / 2));
    }
    let d = (ell - 1) / n;
    let alpha = primitive_root(ell)?;
    let pw: Vec<u64> = (0..ell - 1).map(|i| alpha.pow(i).value()).collect();
    let mut elements = Vec::with_capacity((2 * (ell - 1) * (ell - 1) / d) as usize);
    for i in 0..ell - 1 {
        for j in (i % d..ell - 1).step_by(d as usize) {
            elements.push(GL2Element::diag(ell, pw[i as usize], pw[j as usize])?);
            elements.push(GL2Element::antidiag(ell, pw[i as usize], pw[j as usize])?);
        }
    }
    elements.sort_unstable();
    let generators = vec![
        GL2Element::scalar(ell, pw[1]),
        GL2Element::diag(ell, 1, pw[d as usize])?,
        GL2Element::antidiag(ell, 1, 1)?,
    ];
    Ok(Subgroup::from_parts(ell, elements, generators))
}

/// The properties the constructed group must have.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Prop3Check {
    pub order: usize,
    pub det_surjective: bool,
    pub min_fixed_lines: usize,
    pub common_fixed_lines: usize,
    pub image: ImageStructure,
    pub orbit_sizes: Vec<usize>,
}

impl Prop3Check {
    pub fn passes(&self, n: u64) -> bool {
        self.det_surjective
            && self.min_fixed_lines >= 2
            && self.common_fixed_lines == 0
            && self.image == ImageStructure::Dihedral(2 * n as usize)
    }
}

pub fn prop3_check(g: &Subgroup) -> Result<Prop3Check> {
    let ell = g.modulus();
    let dets: BTreeSet<u32> = g.elements().iter().map(|x| x.det()).collect();
    Ok(Prop3Check {
        order: g.order(),
        det_surjective: dets.len() as u64 == ell - 1,
        min_fixed_lines: g
            .elements()
            .iter()
            .map(|x| x.fixed_lines().len())
            .min()
            .unwrap_or(0),
        common_fixed_lines: common_fixed_lines(g),
        image: image_structure(&g.projective_image())?,
        orbit_sizes: orbit_sizes(g),
    })
}
