use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} must be an odd prime")]
    EvenModulus(u64),
    #[error("the multiplicative group of F_2 is trivial; no generator is needed")]
    TrivialUnitGroup,
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("out of supported range: {0}")]
    OutOfRange(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("delta = {0} is a quadratic residue mod {1}")]
    DeltaIsResidue(u64, u64),
    #[error("not a Cartan subgroup: {0}")]
    NotCartan(String),
    #[error("group order {order} is divisible by {ell}; not semisimple")]
    NotSemisimple { order: usize, ell: u64 },
    #[error("classification failed: {0}")]
    Unclassified(String),
    #[error("singular curve (discriminant zero)")]
    SingularCurve,
    #[error("curve model is not integral")]
    NonIntegral,
    #[error("could not factor {0}")]
    Unfactored(String),
    #[error("pole of rational map at x = {0}")]
    Pole(String),
    #[error("coordinates lie in different fields")]
    MixedFields,
    #[error("degenerate point: denominator u + 2v vanishes at ({0}, {1})")]
    DegeneratePoint(String, String),
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("p = 2 is not supported")]
    CharacteristicTwo,
    #[error("bad reduction at p = {0}")]
    BadReduction(u64),
    #[error("p = {0} divides a coefficient denominator")]
    DenominatorCollision(u64),
    #[error("invalid discriminant {0}")]
    InvalidDiscriminant(i64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{path}:{line}: {msg}")]
    FileParse { path: PathBuf, line: usize, msg: String },
    #[error("invalid modular polynomial: {0}")]
    InvalidModPoly(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
