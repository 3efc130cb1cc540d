use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::prime::{factor_u64, is_prime, pow_mod, reduce_i64, PrimeField, PrimeFieldElement};
use crate::error::{Error, Result};

fn check_odd_prime(m: u64) -> Result<()> {
    if m % 2 == 0 {
        return Err(Error::EvenModulus(m));
    }
    if !is_prime(m) {
        return Err(Error::NotPrime(m));
    }
    Ok(())
}

fn euler(a: u64, m: u64) -> i8 {
    match pow_mod(a, (m - 1) / 2, m) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// Legendre symbol `(a|m)` for an odd prime `m`.
pub fn legendre_kronecker(a: i64, m: u64) -> Result<i8> {
    check_odd_prime(m)?;
    Ok(euler(reduce_i64(a, m), m))
}

/// Legendre symbol for an arbitrary-precision numerator.
pub fn legendre_big(a: &BigInt, m: u64) -> Result<i8> {
    check_odd_prime(m)?;
    let r = (a % BigInt::from(m) + BigInt::from(m)) % BigInt::from(m);
    Ok(euler(r.to_u64().expect("reduced residue fits"), m))
}

/// Kronecker symbol `(d|p)` for a prime `p`, including `p = 2`.
pub fn kronecker_prime(d: i64, p: u64) -> Result<i8> {
    if p == 2 {
        return Ok(match d.rem_euclid(8) {
            0 | 2 | 4 | 6 => 0,
            1 | 7 => 1,
            _ => -1,
        });
    }
    legendre_kronecker(d, p)
}

/// Smallest positive generator of F_m^*.
pub fn primitive_root(m: u64) -> Result<PrimeFieldElement> {
    if m == 2 {
        return Err(Error::TrivialUnitGroup);
    }
    let field = PrimeField::new(m)?;
    let qs: Vec<u64> = factor_u64(m - 1).into_iter().map(|(q, _)| q).collect();
    let g = (2..m)
        .find(|&g| qs.iter().all(|&q| pow_mod(g, (m - 1) / q, m) != 1))
        .expect("prime field has a generator");
    Ok(field.elem(g))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn squares(m: u64) -> Vec<u64> {
        (1..m).map(|x| x * x % m).collect()
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre_kronecker(-7, 7).unwrap(), 0);
        assert_eq!(legendre_kronecker(3, 7).unwrap(), -1);
        // squares mod 3 are {1}; -4 = 2 mod 3
        assert!(!squares(3).contains(&2));
        assert_eq!(legendre_kronecker(-4, 3).unwrap(), -1);
    }

    #[test]
    fn legendre_rejects_bad_moduli() {
        assert!(matches!(legendre_kronecker(1, 8), Err(Error::EvenModulus(8))));
        assert!(matches!(legendre_kronecker(1, 2), Err(Error::EvenModulus(2))));
        assert!(matches!(legendre_kronecker(1, 15), Err(Error::NotPrime(15))));
    }

    #[test]
    fn legendre_matches_square_enumeration() {
        for m in [3u64, 5, 7, 11, 13, 101] {
            let sq = squares(m);
            for a in -50i64..50 {
                let r = a.rem_euclid(m as i64) as u64;
                let expect = if r == 0 {
                    0
                } else if sq.contains(&r) {
                    1
                } else {
                    -1
                };
                assert_eq!(legendre_kronecker(a, m).unwrap(), expect);
                assert_eq!(legendre_big(&BigInt::from(a), m).unwrap(), expect);
            }
        }
    }

    #[test]
    fn kronecker_at_two() {
        assert_eq!(kronecker_prime(-7, 2).unwrap(), 1);
        assert_eq!(kronecker_prime(-3, 2).unwrap(), -1);
        assert_eq!(kronecker_prime(-4, 2).unwrap(), 0);
    }

    #[test]
    fn primitive_root_examples() {
        // powers of 3 mod 7: 3, 2, 6, 4, 5, 1
        let mut x = 1;
        let powers: Vec<u64> = (0..6).map(|_| { x = x * 3 % 7; x }).collect();
        assert_eq!(powers, vec![3, 2, 6, 4, 5, 1]);
        assert_eq!(primitive_root(7).unwrap().value(), 3);
        assert_eq!(primitive_root(3).unwrap().value(), 2);
        assert_eq!(primitive_root(5).unwrap().value(), 2);
        assert!(matches!(primitive_root(2), Err(Error::TrivialUnitGroup)));
        assert!(matches!(primitive_root(9), Err(Error::NotPrime(9))));
    }

    #[test]
    fn primitive_root_is_smallest_generator() {
        for m in [11u64, 13, 17, 19, 23, 41, 43, 71, 191] {
            let g = primitive_root(m).unwrap().value();
            let order = |a: u64| (1..m).find(|&k| pow_mod(a, k, m) == 1).unwrap();
            assert_eq!(order(g), m - 1);
            assert!((2..g).all(|a| order(a) < m - 1));
        }
    }
}
