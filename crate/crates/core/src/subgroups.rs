//! Explicit subgroups of GL_2(F_ell): closure, conjugacy, and enumeration of
//! all subgroups up to conjugacy for small ell.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;

use rayon::prelude::*;

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::gl2::GL2Element;

/// Largest modulus for which element sets are tracked as dense bitsets.
const MAX_DENSE_ELL: u64 = 13;

/// Dense bitset over element codes `0..ell^4`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub(crate) struct Bits(Box<[u64]>);

impl Bits {
    fn new(ell: u64) -> Self {
        let n = (ell as usize).pow(4);
        Bits(vec![0u64; n.div_ceil(64)].into_boxed_slice())
    }

    #[inline]
    fn insert(&mut self, i: u32) -> bool {
        let (w, b) = ((i / 64) as usize, i % 64);
        let fresh = self.0[w] & (1 << b) == 0;
        self.0[w] |= 1 << b;
        fresh
    }

    #[inline]
    fn contains(&self, i: u32) -> bool {
        self.0[(i / 64) as usize] & (1 << (i % 64)) != 0
    }

    fn from_elements(ell: u64, elems: &[GL2Element]) -> Self {
        let mut b = Bits::new(ell);
        for g in elems {
            b.insert(g.code());
        }
        b
    }
}

/// A subgroup of GL_2(F_ell) given by its sorted element set and generators.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    ell: u64,
    elements: Vec<GL2Element>,
    generators: Vec<GL2Element>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup(ell={}, order={}, gens={:?})", self.ell, self.order(), self.generators)
    }
}

fn check_modulus(ell: u64) -> Result<()> {
    if !is_prime(ell) || ell > MAX_DENSE_ELL * 4 {
        return Err(Error::OutOfRange(format!(
            "subgroup machinery supports primes up to {}, got {ell}",
            MAX_DENSE_ELL * 4
        )));
    }
    Ok(())
}

/// Breadth-first saturation of the generators, starting from the identity.
fn saturate(ell: u64, gens: &[GL2Element]) -> Vec<GL2Element> {
    let id = GL2Element::identity(ell);
    let mut elems = vec![id];
    let mut seen: HashSet<GL2Element>;
    if ell <= MAX_DENSE_ELL {
        let mut bits = Bits::new(ell);
        bits.insert(id.code());
        let mut i = 0;
        while i < elems.len() {
            let e = elems[i];
            for g in gens {
                let p = e.mul(g);
                if bits.insert(p.code()) {
                    elems.push(p);
                }
            }
            i += 1;
        }
    } else {
        seen = HashSet::from([id]);
        let mut i = 0;
        while i < elems.len() {
            let e = elems[i];
            for g in gens {
                let p = e.mul(g);
                if seen.insert(p) {
                    elems.push(p);
                }
            }
            i += 1;
        }
    }
    elems.sort_unstable();
    elems
}

/// The subgroup generated by `gens`; the empty set generates the trivial group.
pub fn closure(ell: u64, gens: &[GL2Element]) -> Result<Subgroup> {
    check_modulus(ell)?;
    if let Some(g) = gens.iter().find(|g| g.modulus() != ell) {
        return Err(Error::ModulusMismatch(ell, g.modulus()));
    }
    Ok(Subgroup {
        ell,
        elements: saturate(ell, gens),
        generators: gens.to_vec(),
    })
}

/// Order of GL_2(F_ell).
pub fn gl2_order(ell: u64) -> u64 {
    (ell * ell - 1) * (ell * ell - ell)
}

/// Invariants that every conjugate shares; used to reject before searching.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubgroupInvariants {
    pub order: usize,
    pub element_orders: BTreeMap<u64, usize>,
    pub abelian: bool,
    pub det_image: usize,
}

impl Subgroup {
    pub fn modulus(&self) -> u64 {
        self.ell
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Elements sorted row-major.
    pub fn elements(&self) -> &[GL2Element] {
        &self.elements
    }

    pub fn generators(&self) -> &[GL2Element] {
        &self.generators
    }

    /// Wraps an already closed, sorted element set.
    pub(crate) fn from_parts(ell: u64, elements: Vec<GL2Element>, generators: Vec<GL2Element>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        Subgroup {
            ell,
            elements,
            generators,
        }
    }

    pub fn trivial(ell: u64) -> Self {
        Subgroup {
            ell,
            elements: vec![GL2Element::identity(ell)],
            generators: Vec::new(),
        }
    }

    pub fn contains(&self, g: &GL2Element) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|g| other.contains(g))
    }

    /// Checks identity, product and inverse closure, and that the generators
    /// generate exactly the element set.
    pub fn verify_invariants(&self) -> bool {
        let id = GL2Element::identity(self.ell);
        if !self.contains(&id) {
            return false;
        }
        let closed = self
            .elements
            .iter()
            .all(|a| self.contains(&a.inv()) && self.elements.iter().all(|b| self.contains(&a.mul(b))));
        closed && saturate(self.ell, &self.generators) == self.elements
    }

    pub fn is_abelian(&self) -> bool {
        let gens: &[GL2Element] = if self.generators.is_empty() {
            &self.elements
        } else {
            &self.generators
        };
        gens.iter().all(|a| gens.iter().all(|b| a.mul(b) == b.mul(a)))
    }

    pub fn invariants(&self) -> SubgroupInvariants {
        let mut element_orders = BTreeMap::new();
        for g in &self.elements {
            *element_orders.entry(g.order()).or_insert(0) += 1;
        }
        let dets: HashSet<u32> = self.elements.iter().map(|g| g.det()).collect();
        SubgroupInvariants {
            order: self.order(),
            element_orders,
            abelian: self.is_abelian(),
            det_image: dets.len(),
        }
    }

    /// `x G x^-1`, with conjugated generators.
    pub fn conjugate(&self, x: &GL2Element) -> Subgroup {
        let xi = x.inv();
        let conj = |g: &GL2Element| x.mul(g).mul(&xi);
        let mut elements: Vec<GL2Element> = self.elements.iter().map(conj).collect();
        elements.sort_unstable();
        Subgroup {
            ell: self.ell,
            elements,
            generators: self.generators.iter().map(conj).collect(),
        }
    }

    /// Representatives `x` of the left cosets `x G` in GL_2(F_ell); conjugation
    /// by any element of one coset gives the same subgroup.
    fn left_coset_reps(&self) -> Vec<GL2Element> {
        let mut marked: HashSet<GL2Element> = HashSet::new();
        let mut reps = Vec::new();
        for x in GL2Element::all(self.ell) {
            if marked.contains(&x) {
                continue;
            }
            reps.push(x);
            for g in &self.elements {
                marked.insert(x.mul(g));
            }
        }
        reps
    }

    /// The distinct conjugates of this subgroup paired with a conjugator.
    pub fn conjugates(&self) -> Vec<(GL2Element, Vec<GL2Element>)> {
        let mut seen: HashSet<Vec<GL2Element>> = HashSet::new();
        let mut out = Vec::new();
        for x in self.left_coset_reps() {
            let c = self.conjugate(&x).elements;
            if seen.insert(c.clone()) {
                out.push((x, c));
            }
        }
        out
    }

    /// Lexicographically least element set among all conjugates.
    pub fn conjugacy_key(&self) -> ConjugacyKey {
        let min = self
            .conjugates()
            .into_iter()
            .map(|(_, c)| c)
            .min()
            .expect("at least the subgroup itself");
        ConjugacyKey(min)
    }

    /// The projective image in PGL_2(F_ell) as sorted canonical lifts.
    pub fn projective_image(&self) -> Vec<GL2Element> {
        let mut h: Vec<GL2Element> = self.elements.iter().map(|g| g.projective_canonical()).collect();
        h.sort_unstable();
        h.dedup();
        h
    }
}

/// Canonical form of a conjugacy class of subgroups.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConjugacyKey(pub Vec<GL2Element>);

/// True iff `x g1 x^-1 = g2` for some `x` in GL_2(F_ell).
pub fn are_conjugate(g1: &Subgroup, g2: &Subgroup) -> Result<bool> {
    if g1.ell != g2.ell {
        return Err(Error::ModulusMismatch(g1.ell, g2.ell));
    }
    if g1.order() != g2.order() {
        return Ok(false);
    }
    if g1.invariants() != g2.invariants() {
        return Ok(false);
    }
    Ok(g1
        .left_coset_reps()
        .into_iter()
        .any(|x| g1.conjugate(&x).elements == g2.elements))
}

/// One conjugacy class of subgroups.
#[derive(Clone, Debug)]
pub struct SubgroupClass {
    /// The conjugate whose element set is the conjugacy key.
    pub rep: Subgroup,
    /// Number of subgroups in the class, `[GL_2 : N(rep)]`.
    pub class_size: usize,
}

impl SubgroupClass {
    pub fn key(&self) -> ConjugacyKey {
        ConjugacyKey(self.rep.elements.clone())
    }
}

/// Which primes may be enumerated; 11 requires opting in.
pub fn check_enumerable(ell: u64, expensive: bool) -> Result<()> {
    match ell {
        2 | 3 | 5 | 7 => Ok(()),
        11 if expensive => Ok(()),
        11 => Err(Error::OutOfRange(
            "enumeration for ell = 11 is expensive; pass the expensive flag".into(),
        )),
        _ => Err(Error::OutOfRange(format!(
            "subgroup enumeration supports ell in {{2, 3, 5, 7}} (11 opt-in), got {ell}"
        ))),
    }
}

/// Pick at most three generators for `elems`, greedily.
fn small_generating_set(ell: u64, elems: &[GL2Element]) -> Vec<GL2Element> {
    let target = elems.len();
    if target == 1 {
        return Vec::new();
    }
    let mut gens: Vec<GL2Element> = Vec::new();
    let mut current: Vec<GL2Element> = vec![GL2Element::identity(ell)];
    while current.len() < target {
        let cur_bits = Bits::from_elements(ell, &current);
        let mut handled = Bits::new(ell);
        let mut best: Option<(usize, GL2Element)> = None;
        for g in elems {
            if cur_bits.contains(g.code()) || handled.contains(g.code()) {
                continue;
            }
            // <current, g> = <current, c g> for c in current
            for c in &current {
                handled.insert(c.mul(g).code());
            }
            let mut trial = gens.clone();
            trial.push(*g);
            let size = saturate(ell, &trial).len();
            if best.is_none_or(|(s, _)| size > s) {
                best = Some((size, *g));
            }
            if size == target {
                break;
            }
        }
        let (_, g) = best.expect("a proper subgroup misses some element");
        gens.push(g);
        current = saturate(ell, &gens);
    }
    gens
}

struct Registry {
    ell: u64,
    seen: HashSet<Bits>,
    classes: Vec<SubgroupClass>,
}

impl Registry {
    /// Records the class of `elems` unless already present; returns the new
    /// representative.
    fn register(&mut self, elems: Vec<GL2Element>) -> Option<Subgroup> {
        let bits = Bits::from_elements(self.ell, &elems);
        if self.seen.contains(&bits) {
            return None;
        }
        let gens = small_generating_set(self.ell, &elems);
        assert!(gens.len() <= 3, "subgroup of order {} needed {} generators", elems.len(), gens.len());
        let sub = Subgroup {
            ell: self.ell,
            elements: elems,
            generators: gens,
        };
        let conjugates = sub.conjugates();
        let class_size = conjugates.len();
        let (x, _) = conjugates
            .iter()
            .min_by(|a, b| a.1.cmp(&b.1))
            .expect("nonempty")
            .clone();
        for (_, c) in conjugates {
            self.seen.insert(Bits::from_elements(self.ell, &c));
        }
        let rep = sub.conjugate(&x);
        self.classes.push(SubgroupClass {
            rep: rep.clone(),
            class_size,
        });
        Some(rep)
    }
}

/// One representative per conjugacy class of subgroups of GL_2(F_ell), sorted
/// by (order, conjugacy key).
///
/// Starting from the trivial group, every class representative is extended
/// by one element per right coset, closed, and deduplicated against the set
/// of all conjugates of known classes, until no new class appears.
pub fn enumerate_subgroups(ell: u64, expensive: bool) -> Result<Vec<SubgroupClass>> {
    check_enumerable(ell, expensive)?;
    let all = GL2Element::all(ell);
    let mut reg = Registry {
        ell,
        seen: HashSet::new(),
        classes: Vec::new(),
    };
    let mut queue: VecDeque<Subgroup> = VecDeque::new();
    queue.extend(reg.register(vec![GL2Element::identity(ell)]));
    while let Some(h) = queue.pop_front() {
        // one extension element per right coset h g
        let mut handled = Bits::from_elements(ell, &h.elements);
        let mut reps = Vec::new();
        for g in &all {
            if handled.contains(g.code()) {
                continue;
            }
            reps.push(*g);
            for x in &h.elements {
                handled.insert(x.mul(g).code());
            }
        }
        let seen = &reg.seen;
        let found: Vec<Vec<GL2Element>> = reps
            .par_iter()
            .filter_map(|g| {
                let mut gens = h.generators.clone();
                gens.push(*g);
                let k = saturate(ell, &gens);
                (!seen.contains(&Bits::from_elements(ell, &k))).then_some(k)
            })
            .collect();
        let mut fresh: HashMap<Bits, Vec<GL2Element>> = HashMap::new();
        let mut order = Vec::new();
        for k in found {
            let b = Bits::from_elements(ell, &k);
            if !fresh.contains_key(&b) {
                order.push(b.clone());
                fresh.insert(b, k);
            }
        }
        for b in order {
            if let Some(rep) = reg.register(fresh.remove(&b).expect("present")) {
                queue.push_back(rep);
            }
        }
    }
    let mut classes = reg.classes;
    classes.sort_by(|a, b| (a.rep.order(), &a.rep.elements).cmp(&(b.rep.order(), &b.rep.elements)));
    Ok(classes)
}
