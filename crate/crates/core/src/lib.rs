//! Mechanical verification of the group theory and arithmetic behind the
//! local-global principle for rational isogenies of prime degree.

pub mod arith;
pub mod classno;
pub mod cli;
pub mod ecfp;
pub mod ecq;
pub mod error;
pub mod gl2;
pub mod localglobal;
pub mod modpoly;
pub mod subgroups;

pub use error::{Error, Result};
