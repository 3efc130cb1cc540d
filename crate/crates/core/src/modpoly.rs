//! Classical modular polynomials read from data files, their specializations
//! at a j-invariant, and factorization certificates.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::rational::{int, int_sqrt, power_of_two, reduce_mod};
use crate::arith::{is_prime, BigRational, FpPoly, PrimeFieldElement, QPoly};
use crate::error::{Error, Result};

/// `Phi_N(X, Y)`, stored as the coefficients `c_{ij}` with `i >= j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularPolynomial {
    level: u64,
    coeffs: BTreeMap<(u32, u32), BigInt>,
}

impl ModularPolynomial {
    /// Builds and validates from the upper-triangular coefficients.
    pub fn new(level: u64, coeffs: BTreeMap<(u32, u32), BigInt>) -> Result<Self> {
        let m = ModularPolynomial { level, coeffs };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        let bad = |s: String| Err(Error::InvalidModPoly(s));
        if let Some((&(i, j), _)) = self.coeffs.iter().find(|(&(i, j), _)| j > i) {
            return bad(format!("entry ({i}, {j}) has i < j"));
        }
        let deg = self.degree_x();
        if is_prime(self.level) && deg as u64 != self.level + 1 {
            return bad(format!("X-degree {deg}, expected {}", self.level + 1));
        }
        let lead = self.coeff(deg, 0);
        if !lead.is_one() {
            return bad(format!("coefficient of X^{deg} is {lead}, not 1"));
        }
        if (1..=deg).any(|j| !self.coeff(deg, j).is_zero()) {
            return bad(format!("X^{deg} has a coefficient involving Y"));
        }
        Ok(())
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn degree_x(&self) -> u32 {
        self.coeffs.keys().map(|&(i, _)| i).max().unwrap_or(0)
    }

    /// Coefficient of `X^i Y^j`.
    pub fn coeff(&self, i: u32, j: u32) -> BigInt {
        let key = if i >= j { (i, j) } else { (j, i) };
        self.coeffs.get(&key).cloned().unwrap_or_else(BigInt::zero)
    }

    /// All `(i, j, c)` with `c != 0`, both triangles.
    fn terms(&self) -> impl Iterator<Item = (u32, u32, &BigInt)> {
        self.coeffs.iter().flat_map(|(&(i, j), c)| {
            let mirror = (i != j).then_some((j, i, c));
            std::iter::once((i, j, c)).chain(mirror)
        })
    }

    pub fn eval(&self, x: &BigRational, y: &BigRational) -> BigRational {
        evaluate_at_j(self, y).eval(x)
    }

    /// `Phi_N(X, j)` reduced mod `p`.
    pub fn evaluate_mod_p(&self, j: u64, p: u64) -> FpPoly {
        let deg = self.degree_x() as usize;
        let pb = BigInt::from(p);
        let mut jpow = vec![1u64 % p; deg + 1];
        for k in 1..=deg {
            jpow[k] = crate::arith::prime::mul_mod(jpow[k - 1], j % p, p);
        }
        let mut out = vec![0u64; deg + 1];
        for (i, jj, c) in self.terms() {
            let cm = reduce_mod(&BigRational::from_integer(c % &pb), p).unwrap();
            let t = crate::arith::prime::mul_mod(cm, jpow[jj as usize], p);
            out[i as usize] = crate::arith::prime::add_mod(out[i as usize], t, p);
        }
        FpPoly::new(out, p)
    }
}

/// Parses the text format; `origin` names the source in error messages.
pub fn parse_modpoly(text: &str, origin: &Path) -> Result<ModularPolynomial> {
    let err = |line: usize, msg: String| Error::FileParse {
        path: origin.to_path_buf(),
        line,
        msg,
    };
    let mut level = None;
    let mut coeffs = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let Some(n) = level else {
            match fields.as_slice() {
                ["level", n] => {
                    let n: u64 = n.parse().map_err(|_| err(lineno, format!("bad level '{n}'")))?;
                    if n < 2 {
                        return Err(err(lineno, format!("level {n} is below 2")));
                    }
                    level = Some(n);
                    continue;
                }
                _ => return Err(err(lineno, "expected 'level N' before coefficients".into())),
            }
        };
        let [i, j, c] = fields.as_slice() else {
            return Err(err(lineno, format!("expected 'i j c', got {} fields", fields.len())));
        };
        let i: u32 = i.parse().map_err(|_| err(lineno, format!("bad exponent '{i}'")))?;
        let j: u32 = j.parse().map_err(|_| err(lineno, format!("bad exponent '{j}'")))?;
        let c: BigInt = c.parse().map_err(|_| err(lineno, format!("bad coefficient '{c}'")))?;
        if i < j {
            return Err(err(lineno, format!("exponents ({i}, {j}) must satisfy i >= j")));
        }
        if i as u64 > 2 * n + 2 {
            return Err(err(lineno, format!("exponent {i} is too large for level {n}")));
        }
        if coeffs.insert((i, j), c).is_some() {
            return Err(err(lineno, format!("duplicate entry ({i}, {j})")));
        }
    }
    let level = level.ok_or_else(|| err(0, "missing 'level N' line".into()))?;
    coeffs.retain(|_, c: &mut BigInt| !c.is_zero());
    ModularPolynomial::new(level, coeffs)
}

pub fn load_modpoly(path: impl AsRef<Path>) -> Result<ModularPolynomial> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_modpoly(&text, path)
}

/// Path of the shipped `phiN.txt` inside `data_dir`.
pub fn modpoly_path(data_dir: &Path, level: u64) -> PathBuf {
    data_dir.join(format!("phi{level}.txt"))
}

/// `Phi_N(X, j)` as a polynomial in `X`.
pub fn evaluate_at_j(m: &ModularPolynomial, j: &BigRational) -> QPoly {
    let deg = m.degree_x() as usize;
    let mut jpow = vec![BigRational::one(); deg + 1];
    for k in 1..=deg {
        jpow[k] = &jpow[k - 1] * j;
    }
    let mut out = vec![BigRational::zero(); deg + 1];
    for (i, jj, c) in m.terms() {
        out[i as usize] += &jpow[jj as usize] * BigRational::from_integer(c.clone());
    }
    QPoly::new(out)
}

/// Rational roots of `f` with multiplicity (the linear factors over Q).
pub fn rational_linear_factors(f: &QPoly) -> Vec<BigRational> {
    f.rational_roots()
}

/// Distinct roots in F_p of `Phi_N(X, j)`.
pub fn fp_root_count(m: &ModularPolynomial, j: PrimeFieldElement) -> Result<u64> {
    let p = j.modulus();
    if m.level() % p == 0 {
        return Err(Error::Precondition(format!("p = {p} divides the level {}", m.level())));
    }
    crate::arith::poly::check_fp_modulus(p)?;
    Ok(m.evaluate_mod_p(j.value(), p).distinct_root_count())
}

/// Linear factors of `Phi_N(X, j)` over F_p, counted with multiplicity.
pub fn fp_linear_factor_count(m: &ModularPolynomial, j: PrimeFieldElement) -> Result<u64> {
    let p = j.modulus();
    if m.level() % p == 0 {
        return Err(Error::Precondition(format!("p = {p} divides the level {}", m.level())));
    }
    crate::arith::poly::check_fp_modulus(p)?;
    Ok(m.evaluate_mod_p(j.value(), p).linear_factor_count())
}

/// Claimed factorization of `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationCertificate {
    pub target: QPoly,
    pub factors: Vec<QPoly>,
}

impl FactorizationCertificate {
    /// Reads factors, one per non-comment line, highest degree first.
    pub fn load(target: QPoly, path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut factors = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let f = QPoly::parse_high(line).map_err(|e| Error::FileParse {
                path: path.to_path_buf(),
                line: idx + 1,
                msg: e.to_string(),
            })?;
            factors.push(f);
        }
        Ok(FactorizationCertificate { target, factors })
    }
}

/// `D = -7 a^2 / 4^b` with the smallest admissible `b >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SevenShape {
    pub a: String,
    pub b: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiscriminantReport {
    pub factor: usize,
    pub degree: usize,
    pub discriminant: String,
    pub shape: Option<SevenShape>,
    /// No rational roots (so irreducible, for degree 2 or 3).
    pub irreducible: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateReport {
    pub product_matches: bool,
    pub mismatch: Option<String>,
    pub discriminants: Vec<DiscriminantReport>,
}

impl CertificateReport {
    pub fn all_shapes_match(&self) -> bool {
        self.discriminants.iter().all(|d| d.shape.is_some())
    }
}

/// Writes `d` as `-7 a^2 / 4^b` if possible.
pub fn seven_shape(d: &BigRational) -> Option<SevenShape> {
    let q = -d / int(7);
    if !q.is_positive() {
        return None;
    }
    let e = power_of_two(q.denom())?;
    let n = q.numer();
    let b = e.div_ceil(2).max(1);
    let scaled = n << (2 * b - e);
    let a = int_sqrt(&scaled)?;
    Some(SevenShape { a: a.to_string(), b })
}

pub fn verify_certificate(c: &FactorizationCertificate) -> CertificateReport {
    let product = c
        .factors
        .iter()
        .fold(QPoly::constant(BigRational::one()), |acc, f| &acc * f);
    let mismatch = (product != c.target).then(|| {
        let n = product.coeffs().len().max(c.target.coeffs().len());
        let k = (0..n)
            .rev()
            .find(|&k| product.coeff(k) != c.target.coeff(k))
            .unwrap_or(0);
        format!(
            "coefficient of X^{k}: product {} vs target {}",
            product.coeff(k),
            c.target.coeff(k)
        )
    });
    let discriminants = c
        .factors
        .iter()
        .enumerate()
        .filter_map(|(idx, f)| {
            let d = f.discriminant()?;
            Some(DiscriminantReport {
                factor: idx,
                degree: f.degree().unwrap_or(0),
                shape: seven_shape(&d),
                discriminant: d.to_string(),
                irreducible: f.rational_roots().is_empty(),
            })
        })
        .collect();
    CertificateReport {
        product_matches: mismatch.is_none(),
        mismatch,
        discriminants,
    }
}
