use num_integer::Integer;
use num_traits::One;
use proptest::prelude::*;

use pqfourier::companion::{
    companion_matrix, diagonalize, gauge_b, nabla, nabla_hat, object_of, Convention,
};
use pqfourier::{Cyclotomic, Exponent, Series};

fn coprime_pairs(max: u32) -> Vec<(u32, u32)> {
    (1..=max)
        .flat_map(|p| (1..=max).map(move |q| (p, q)))
        .filter(|(p, q)| p.gcd(q) == 1)
        .collect()
}

#[test]
fn companion_reduces_monomials() {
    for (p, q) in coprime_pairs(7) {
        let m = companion_matrix(p, q).unwrap();
        let xp = Series::monomial('z', Cyclotomic::one(), Exponent::from(p as i64));
        for i in 0..p as usize {
            let mut row = Series::zero('z');
            for j in 0..p as usize {
                let entry = m.get(i, j).clone().with_var('z');
                let at = if entry.is_exact_zero() {
                    entry
                } else {
                    entry.compose(&xp).unwrap()
                };
                let zj = Series::monomial('z', Cyclotomic::one(), Exponent::from(j as i64));
                row = row.add(&at.mul(&zj).unwrap()).unwrap();
            }
            let expect = Series::monomial(
                'z',
                Cyclotomic::one(),
                Exponent::from((q as usize + i) as i64),
            );
            assert_eq!(row, expect, "M({p},{q}) row {i}");
        }
    }
}

#[test]
fn companion_block_shape() {
    for (p, q) in coprime_pairs(7) {
        let m = companion_matrix(p, q).unwrap();
        let (s, r) = (q / p, q % p);
        let n = p as usize;
        let degree_in_column = |j: usize| {
            (0..n)
                .find_map(|i| m.get(i, j).leading().map(|(e, _)| e.to_integer()))
                .expect("every column has one entry")
        };
        let high = (0..n)
            .filter(|&j| degree_in_column(j) == s as i64 + 1)
            .count();
        let low = (0..n).filter(|&j| degree_in_column(j) == s as i64).count();
        assert_eq!((high, low), (r as usize, n - r as usize), "M({p},{q})");
    }
}

#[test]
fn gauge_b_is_conjugated_companion() {
    for (p, q) in coprime_pairs(5) {
        let b = gauge_b(p, q).unwrap();
        let m = companion_matrix(p, q).unwrap();
        for i in 0..p as usize {
            for j in 0..p as usize {
                if i == j {
                    continue;
                }
                let expect = if m.get(i, j).is_exact_zero() {
                    Series::zero('z')
                } else {
                    let deg = m.get(i, j).leading().unwrap().0.to_integer();
                    Series::monomial(
                        'z',
                        Cyclotomic::one(),
                        Exponent::from(deg * p as i64 + j as i64 - i as i64),
                    )
                };
                assert_eq!(b.get(i, j), &expect);
            }
        }
    }
}

#[test]
fn diagonalization_residual_vanishes() {
    for (p, q) in coprime_pairs(4) {
        for mc in [nabla(p, q).unwrap(), nabla_hat(p, q).unwrap()] {
            let d = diagonalize(&mc, None).unwrap();
            assert!(
                d.verify().unwrap(),
                "({p},{q}) residual {}",
                d.residual().unwrap()
            );
        }
    }
}

#[test]
fn companion_classes_are_irreducible() {
    for (p, q) in coprime_pairs(4) {
        let o = object_of(&nabla(p, q).unwrap(), Convention::Dual).unwrap();
        assert_eq!(o.len(), 1, "({p},{q}): {o}");
        let f = &o.components()[0].factor;
        assert_eq!(f.ramification(), p);
        assert!(f.is_irreducible());
        assert_eq!(f.slope(), Exponent::new((p + q) as i64, p as i64));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn more_terms_agree(p in 1u32..=4, q in 1u32..=4, extra in 1i64..6) {
        prop_assume!(p.gcd(&q) == 1);
        let mc = nabla(p, q).unwrap();
        let base = diagonalize(&mc, None).unwrap();
        let longer = diagonalize(&mc, Some(base.terms + extra)).unwrap();
        for (a, b) in base.gammas.iter().zip(&longer.gammas) {
            prop_assert!(a.agrees_with(b));
        }
    }
}
