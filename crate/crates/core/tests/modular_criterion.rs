//! How the Frobenius criterion relates to roots of Phi_l(X, j) mod p.
//! At ordinary primes they are equivalent. At supersingular primes a root can
//! appear without a rational isogeny, but only as a repeated root.

use std::path::PathBuf;

use isoverify::arith::{is_prime, FpPoly, PrimeField};
use isoverify::ecfp::{j_mod_p, local_isogeny_admitted, reduce_and_count};
use isoverify::ecq::WeierstrassCurve;
use isoverify::modpoly::{fp_linear_factor_count, fp_root_count, load_modpoly, modpoly_path};
use proptest::prelude::*;

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")
}

/// Roots of `f` in F_p of multiplicity one.
fn simple_roots(f: &FpPoly) -> usize {
    let p = f.modulus();
    f.roots()
        .into_iter()
        .filter(|&r| f.div(&FpPoly::new(vec![(p - r) % p, 1], p)).eval(r) != 0)
        .count()
}

#[test]
fn supersingular_root_without_isogeny() {
    // a_23 = 0 and x^2 + 23 is irreducible mod 5, yet Phi_5(X, j) mod 23 has
    // roots: the whole supersingular locus {0, 1728, 19} lies in F_23
    let e = WeierstrassCurve::from_ints([-18, 13, 19, 22, -4]).unwrap();
    let d = reduce_and_count(&e, 23).unwrap();
    assert_eq!(d.a_p, Some(0));
    assert!(!local_isogeny_admitted(&d, 5).unwrap());
    let phi5 = load_modpoly(modpoly_path(&data_dir(), 5)).unwrap();
    let jp = j_mod_p(&e, 23).unwrap();
    assert_eq!(jp, 19);
    let m = phi5.evaluate_mod_p(jp, 23);
    assert_eq!(m.roots(), vec![0, 3, 19]);
    let f = PrimeField::new(23).unwrap().elem(jp);
    assert_eq!(fp_root_count(&phi5, f).unwrap(), 3);
    assert_eq!(fp_linear_factor_count(&phi5, f).unwrap(), 6);
    assert_eq!(simple_roots(&m), 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn frobenius_and_roots(a in prop::array::uniform5(-40i64..=40)) {
        let Ok(e) = WeierstrassCurve::from_ints(a) else { return Ok(()) };
        let polys: Vec<_> = [2u64, 3, 5, 7]
            .iter()
            .map(|&l| (l, load_modpoly(modpoly_path(&data_dir(), l)).unwrap()))
            .collect();
        for p in (5..=300u64).filter(|&p| is_prime(p)) {
            let d = reduce_and_count(&e, p).unwrap();
            if !d.good {
                continue;
            }
            let jp = j_mod_p(&e, p).unwrap();
            if jp == 0 || jp == 1728 % p {
                continue;
            }
            let f = PrimeField::new(p).unwrap().elem(jp);
            for (l, m) in &polys {
                if p == *l {
                    continue;
                }
                let frob = local_isogeny_admitted(&d, *l).unwrap();
                let roots = fp_root_count(m, f).unwrap();
                if frob {
                    prop_assert!(roots > 0, "{} p={} l={}", e, p, l);
                }
                if !d.supersingular {
                    prop_assert_eq!(frob, roots > 0, "{} p={} l={}", e, p, l);
                } else if roots > 0 && !frob {
                    prop_assert_eq!(simple_roots(&m.evaluate_mod_p(jp, p)), 0, "{} p={} l={}", e, p, l);
                }
            }
        }
    }
}
