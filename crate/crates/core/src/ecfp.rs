//! Reduction of curves mod p, point counting, and the local criterion for an
//! isogeny of prime degree.

use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::prime::{add_mod, inv_mod, mul_mod, pow_mod, sqrt_mod, sub_mod};
use crate::arith::rational::reduce_mod;
use crate::arith::{is_prime, PrimeField};
use crate::ecq::WeierstrassCurve;
use crate::error::{Error, Result};

/// Largest prime counted by enumeration when the method is automatic.
pub const NAIVE_LIMIT: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LocalData {
    pub p: u64,
    pub good: bool,
    pub count: Option<u64>,
    pub a_p: Option<i64>,
    pub supersingular: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountMethod {
    /// Enumeration up to `NAIVE_LIMIT`, baby-step giant-step above.
    Auto,
    Naive,
    Bsgs,
}

/// Coefficients of a reduced curve in completed-square form
/// `(2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6`.
#[derive(Clone, Copy, Debug)]
struct Reduced {
    p: u64,
    b2: u64,
    b4: u64,
    b6: u64,
}

fn reduce(e: &WeierstrassCurve, p: u64) -> Result<Option<Reduced>> {
    if p == 2 {
        return Err(Error::CharacteristicTwo);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p >= 1 << 62 {
        return Err(Error::OutOfRange(format!("p = {p} exceeds 2^62")));
    }
    if e.denominator_collision(p) {
        return Err(Error::DenominatorCollision(p));
    }
    let disc = reduce_mod(&e.discriminant(), p).expect("denominators checked");
    if disc == 0 {
        return Ok(None);
    }
    let r = |q| reduce_mod(&q, p).expect("denominators checked");
    Ok(Some(Reduced {
        p,
        b2: r(e.b2()),
        b4: r(e.b4()),
        b6: r(e.b6()),
    }))
}

/// `#E(F_p)` by summing Legendre symbols of the completed square.
fn count_naive(r: &Reduced) -> u64 {
    let p = r.p;
    let mut is_sq = vec![false; p as usize];
    for y in 0..p.div_ceil(2) {
        is_sq[mul_mod(y, y, p) as usize] = true;
    }
    let (b2, b4x2, b6) = (r.b2, add_mod(r.b4, r.b4, p), r.b6);
    let mut count = 1u64;
    for x in 0..p {
        // 4x^3 + b2 x^2 + 2 b4 x + b6 by Horner
        let g = add_mod(mul_mod(add_mod(mul_mod(add_mod(mul_mod(4 % p, x, p), b2, p), x, p), b4x2, p), x, p), b6, p);
        count += match g {
            0 => 1,
            _ if is_sq[g as usize] => 2,
            _ => 0,
        };
    }
    count
}

/// Affine point of `y^2 = x^3 + a2 x^2 + a4 x + a6` or the point at infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Pt {
    Inf,
    A(u64, u64),
}

#[derive(Clone, Copy, Debug)]
struct Short {
    p: u64,
    a2: u64,
    a4: u64,
    a6: u64,
}

impl Short {
    fn neg(&self, q: Pt) -> Pt {
        match q {
            Pt::Inf => Pt::Inf,
            Pt::A(x, y) => Pt::A(x, sub_mod(0, y, self.p)),
        }
    }

    fn add(&self, s: Pt, t: Pt) -> Pt {
        let p = self.p;
        let (x1, y1, x2, y2) = match (s, t) {
            (Pt::Inf, o) | (o, Pt::Inf) => return o,
            (Pt::A(x1, y1), Pt::A(x2, y2)) => (x1, y1, x2, y2),
        };
        let lambda = if x1 == x2 {
            if add_mod(y1, y2, p) == 0 {
                return Pt::Inf;
            }
            let num = add_mod(
                add_mod(mul_mod(3 % p, mul_mod(x1, x1, p), p), mul_mod(add_mod(self.a2, self.a2, p), x1, p), p),
                self.a4,
                p,
            );
            mul_mod(num, inv_mod(add_mod(y1, y1, p), p).unwrap(), p)
        } else {
            mul_mod(sub_mod(y2, y1, p), inv_mod(sub_mod(x2, x1, p), p).unwrap(), p)
        };
        let x3 = sub_mod(sub_mod(sub_mod(mul_mod(lambda, lambda, p), self.a2, p), x1, p), x2, p);
        let y3 = sub_mod(mul_mod(lambda, sub_mod(x1, x3, p), p), y1, p);
        Pt::A(x3, y3)
    }

    fn mul(&self, mut k: u64, q: Pt) -> Pt {
        let mut acc = Pt::Inf;
        let mut base = q;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            k >>= 1;
        }
        acc
    }

    /// A random point; the identity if none turns up, which happens when the
    /// curve has no affine points over a tiny field.
    fn random_point(&self, rng: &mut ChaCha8Rng) -> Pt {
        let p = self.p;
        for _ in 0..256 {
            let x = rng.gen_range(0..p);
            let rhs = add_mod(mul_mod(add_mod(mul_mod(add_mod(x, self.a2, p), x, p), self.a4, p), x, p), self.a6, p);
            if let Some(y) = sqrt_mod(rhs, p) {
                let y = if rng.gen::<bool>() { y } else { sub_mod(0, y, p) };
                return Pt::A(x, y);
            }
        }
        Pt::Inf
    }

    /// Order of the subgroup generated by `gens`, by closure.
    fn span_order(&self, gens: &[Pt]) -> usize {
        let mut seen: HashSet<Pt> = HashSet::from([Pt::Inf]);
        let mut frontier = vec![Pt::Inf];
        while let Some(s) = frontier.pop() {
            for &g in gens {
                let t = self.add(s, g);
                if seen.insert(t) {
                    frontier.push(t);
                }
            }
        }
        seen.len()
    }

    /// Exact order of `q`, given that it divides some integer in `[lo, hi]`.
    fn order_in_interval(&self, q: Pt, lo: u64, hi: u64) -> Option<u64> {
        let width = hi - lo;
        let m = (width as f64).sqrt() as u64 + 1;
        let mut baby: HashMap<Pt, u64> = HashMap::with_capacity(m as usize);
        let mut cur = Pt::Inf;
        for j in 0..m {
            baby.entry(cur).or_insert(j);
            cur = self.add(cur, q);
        }
        let giant = self.mul(m, q);
        let mut t = self.mul(lo, q);
        let mut n0 = None;
        for i in 0..=m {
            if let Some(&k) = baby.get(&self.neg(t)) {
                n0 = Some(lo + i * m + k);
                break;
            }
            t = self.add(t, giant);
        }
        let mut ord = n0?;
        for (l, _) in crate::arith::prime::factor_u64(ord) {
            while ord % l == 0 && self.mul(ord / l, q) == Pt::Inf {
                ord /= l;
            }
        }
        Some(ord)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / num_integer::gcd(a, b) * b
}

/// Hasse interval `[p + 1 - 2 sqrt p, p + 1 + 2 sqrt p]`.
pub fn hasse_interval(p: u64) -> (u64, u64) {
    let s = (4 * p as u128) as f64;
    let mut w = s.sqrt() as u64;
    while (w as u128 + 1) * (w as u128 + 1) <= 4 * p as u128 {
        w += 1;
    }
    while w as u128 * w as u128 > 4 * p as u128 {
        w -= 1;
    }
    (p + 1 - w, p + 1 + w)
}

/// Baby-step giant-step count on the completed-square model, with orders of points on
/// the quadratic twist constraining `2p + 2 - N`. `None` if random points
/// leave more than one candidate.
fn count_bsgs(r: &Reduced, seed: u64) -> Option<u64> {
    let p = r.p;
    // y^2 = x^3 + (b2/4) x^2 + (b4/2) x + b6/4
    let (i2, i4) = (inv_mod(2, p)?, inv_mod(4, p)?);
    let e = Short {
        p,
        a2: mul_mod(r.b2, i4, p),
        a4: mul_mod(r.b4, i2, p),
        a6: mul_mod(r.b6, i4, p),
    };
    let d = PrimeField::new(p).ok()?.smallest_nonresidue()?.value();
    let d2 = mul_mod(d, d, p);
    let tw = Short {
        p,
        a2: mul_mod(e.a2, d, p),
        a4: mul_mod(e.a4, d2, p),
        a6: mul_mod(e.a6, mul_mod(d2, d, p), p),
    };
    let (lo, hi) = hasse_interval(p);
    let (tlo, thi) = (2 * p + 2 - hi, 2 * p + 2 - lo);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p.rotate_left(17));
    let (mut l, mut lt) = (1u64, 1u64);
    let (mut pts, mut tpts) = (Vec::new(), Vec::new());
    let unique = |l: u64, lt: u64| {
        let first = lo.div_ceil(l) * l;
        let mut candidates = (first..=hi)
            .step_by(l as usize)
            .filter(|n| (2 * p + 2 - n) % lt == 0);
        match (candidates.next(), candidates.next()) {
            (Some(n), None) => Some(n),
            _ => None,
        }
    };
    for round in 0..48 {
        if round % 2 == 0 {
            let q = e.random_point(&mut rng);
            l = lcm(l, e.order_in_interval(q, lo, hi)?);
            pts.push(q);
        } else {
            let q = tw.random_point(&mut rng);
            lt = lcm(lt, tw.order_in_interval(q, tlo, thi)?);
            tpts.push(q);
        }
        if let Some(n) = unique(l, lt) {
            return Some(n);
        }
    }
    // Small p: orders alone may not separate the candidates, but the
    // subgroups generated by the sampled points have orders dividing N and
    // 2p + 2 - N.
    if p < 1 << 10 {
        let h = e.span_order(&pts) as u64;
        let ht = tw.span_order(&tpts) as u64;
        return unique(lcm(l, h), lcm(lt, ht));
    }
    None
}

fn local_data(p: u64, count: u64) -> LocalData {
    let a_p = p as i64 + 1 - count as i64;
    LocalData {
        p,
        good: true,
        count: Some(count),
        a_p: Some(a_p),
        supersingular: a_p.rem_euclid(p as i64) == 0,
    }
}

fn bad_data(p: u64) -> LocalData {
    LocalData {
        p,
        good: false,
        count: None,
        a_p: None,
        supersingular: false,
    }
}

/// Reduction type and, for good reduction, `#E(F_p)` and `a_p`.
pub fn reduce_and_count(e: &WeierstrassCurve, p: u64) -> Result<LocalData> {
    reduce_and_count_with(e, p, CountMethod::Auto, 0)
}

/// As `reduce_and_count`; `Bsgs` returns an error if the candidates stay
/// ambiguous, `Auto` falls back to enumeration.
pub fn reduce_and_count_with(e: &WeierstrassCurve, p: u64, method: CountMethod, seed: u64) -> Result<LocalData> {
    let Some(r) = reduce(e, p)? else {
        return Ok(bad_data(p));
    };
    let count = match method {
        CountMethod::Naive => count_naive(&r),
        CountMethod::Auto if p <= NAIVE_LIMIT => count_naive(&r),
        CountMethod::Auto => count_bsgs(&r, seed).unwrap_or_else(|| count_naive(&r)),
        CountMethod::Bsgs => count_bsgs(&r, seed)
            .ok_or_else(|| Error::Precondition(format!("point orders leave the count ambiguous at p = {p}")))?,
    };
    Ok(local_data(p, count))
}

/// Whether `x^2 - a_p x + p` has a root mod `ell`, i.e. Frobenius fixes a
/// line of `E[ell]`.
pub fn local_isogeny_admitted(d: &LocalData, ell: u64) -> Result<bool> {
    if !is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    let Some(a) = d.a_p.filter(|_| d.good) else {
        return Err(Error::BadReduction(d.p));
    };
    if d.p == ell {
        return Err(Error::Precondition(format!("p = ell = {ell}")));
    }
    let a = a.rem_euclid(ell as i64) as u64;
    let p = d.p % ell;
    if ell == 2 {
        return Ok((0..2).any(|x| (x * x + a * x + p) % 2 == 0));
    }
    let disc = sub_mod(mul_mod(a, a, ell), mul_mod(4, p, ell), ell);
    Ok(disc == 0 || pow_mod(disc, (ell - 1) / 2, ell) == 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanEntry {
    pub p: u64,
    pub a_p: i64,
    pub admitted: bool,
    pub supersingular: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub ell: u64,
    pub bound: u64,
    pub entries: Vec<ScanEntry>,
    pub bad: Vec<u64>,
    /// 2 and `ell` are not scanned.
    pub skipped: Vec<u64>,
}

impl ScanReport {
    pub fn failing(&self) -> Vec<u64> {
        self.entries.iter().filter(|e| !e.admitted).map(|e| e.p).collect()
    }

    pub fn all_admit(&self) -> bool {
        self.entries.iter().all(|e| e.admitted)
    }
}

/// Local criterion at every good prime `3 <= p <= bound`, `p != ell`.
pub fn local_scan(e: &WeierstrassCurve, ell: u64, bound: u64) -> Result<ScanReport> {
    local_scan_with(e, ell, bound, 0)
}

/// As [`local_scan`], with `seed` driving the randomized count above the naive limit.
pub fn local_scan_with(e: &WeierstrassCurve, ell: u64, bound: u64, seed: u64) -> Result<ScanReport> {
    if !is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    if bound < 3 {
        return Err(Error::Precondition(format!("bound {bound} is below 3")));
    }
    let primes: Vec<u64> = (3..=bound).filter(|&p| is_prime(p) && p != ell).collect();
    let results: Vec<Result<LocalData>> = primes
        .par_iter()
        .map(|&p| {
            if e.denominator_collision(p) {
                return Ok(bad_data(p));
            }
            reduce_and_count_with(e, p, CountMethod::Auto, seed)
        })
        .collect();
    let mut report = ScanReport {
        ell,
        bound,
        skipped: [2, ell].into_iter().filter(|&q| q <= bound).collect(),
        ..Default::default()
    };
    report.skipped.sort_unstable();
    report.skipped.dedup();
    for r in results {
        let d = r?;
        if !d.good {
            report.bad.push(d.p);
            continue;
        }
        report.entries.push(ScanEntry {
            p: d.p,
            a_p: d.a_p.unwrap(),
            admitted: local_isogeny_admitted(&d, ell)?,
            supersingular: d.supersingular,
        });
    }
    Ok(report)
}

/// j-invariant of `e` reduced mod `p` (which must be good).
pub fn j_mod_p(e: &WeierstrassCurve, p: u64) -> Option<u64> {
    reduce_mod(&e.j_invariant(), p)
}
