//! Strategies and property checks shared by the property suites and the
//! acceptance runner.
#![allow(dead_code)]

use num_integer::Integer;
use num_traits::One;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use pqfourier::connection::{ConnectionAtInfinity, ExponentialFactor};
use pqfourier::fourier::{fourier_connection_at_infinity, fourier_factor, slope_law_holds};
use pqfourier::series::comp_inverse;
use pqfourier::{Cyclotomic, Exponent, Field, Series};

pub fn rational() -> impl Strategy<Value = Cyclotomic> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Cyclotomic::from_ratio(n, d))
}

pub fn nonzero_rational() -> impl Strategy<Value = Cyclotomic> {
    (prop_oneof![-6i64..=-1, 1i64..=6], 1i64..=4).prop_map(|(n, d)| Cyclotomic::from_ratio(n, d))
}

/// Rational multiples of small roots of unity.
pub fn cyclotomic() -> impl Strategy<Value = Cyclotomic> {
    (
        rational(),
        prop::sample::select(vec![1u32, 2, 3, 4, 6]),
        0i64..6,
    )
        .prop_map(|(q, n, k)| (q * Cyclotomic::root_of_unity(n, k)).simplify())
}

/// A series in `t` with ramification 1..=3, exponents in `[-4/r, 8/r)`,
/// sometimes truncated.
pub fn series() -> impl Strategy<Value = Series> {
    (
        1u32..=3,
        prop::collection::vec((-4i64..8, cyclotomic()), 0..6),
        prop::option::of(4i64..10),
    )
        .prop_map(|(r, terms, trunc)| Series::from_terms('t', r, terms, trunc))
}

/// Exact series of nonnegative order, for the derivative and product laws.
pub fn exact_series() -> impl Strategy<Value = Series> {
    (
        1u32..=3,
        prop::collection::vec((-3i64..6, rational()), 0..5),
    )
        .prop_map(|(r, terms)| Series::from_terms('t', r, terms, None))
}

/// Known-term count of the inputs to [`comp_inverse`].
pub const INVERSE_TERMS: i64 = 8;

/// `u = a·t^{m/r}(1 + …) + O(t^{(m+N)/r})` with a leading coefficient
/// whose roots stay cyclotomic.
pub fn invertible_series() -> impl Strategy<Value = Series> {
    (
        1u32..=3,
        1i64..=3,
        prop::sample::select(vec![1i64, -1, 2]),
        prop::collection::vec(rational(), (INVERSE_TERMS - 1) as usize),
    )
        .prop_map(|(r, m, base, rest)| {
            let lead = Cyclotomic::from_int(base).powi(m).unwrap();
            let mut terms = vec![(m, lead)];
            terms.extend(
                rest.into_iter()
                    .enumerate()
                    .map(|(j, c)| (m + 1 + j as i64, c)),
            );
            Series::from_terms('t', r, terms, Some(m + INVERSE_TERMS))
        })
}

/// A canonical factor with ramification up to 4 and slope up to 3.
pub fn factor() -> impl Strategy<Value = ExponentialFactor> {
    (
        1u32..=4,
        prop::collection::vec((-12i64..=0, cyclotomic()), 0..5),
    )
        .prop_map(|(r, terms)| {
            let r_i = r as i64;
            let terms = terms.into_iter().filter(|(k, _)| *k >= -3 * r_i);
            ExponentialFactor::new(Series::from_terms('ζ', r, terms, None)).unwrap()
        })
}

/// Canonical irreducible factors of slope > 1 whose leading coefficient is
/// a root of unity, so the dual coordinate inverts over cyclotomics.
pub fn admissible_factor() -> impl Strategy<Value = ExponentialFactor> {
    (
        1u32..=4,
        1i64..=12,
        prop::sample::select(vec![(1u32, 0i64), (2, 1), (3, 1), (4, 1)]),
        prop::collection::vec(rational(), 0..4),
    )
        .prop_filter_map(
            "needs slope > 1 with coprime leading numerator",
            |(r, k0, (n, j), rest)| {
                let r_i = r as i64;
                let lead = -(r_i + k0);
                if lead.gcd(&r_i) != 1 {
                    return None;
                }
                let mut terms = vec![(lead, Cyclotomic::root_of_unity(n, j))];
                // lower-order terms between the leading one and the constant
                let span = -lead;
                for (i, c) in rest.into_iter().enumerate() {
                    terms.push((lead + 1 + (i as i64 * 3) % span, c));
                }
                ExponentialFactor::new(Series::from_terms('ζ', r, terms, None)).ok()
            },
        )
}

fn fail(msg: String) -> TestCaseError {
    TestCaseError::fail(msg)
}

/// `u ∘ v = s` and `v ∘ u = t` on every term both sides determine, with
/// `u ∘ v` known up to the requested precision.
pub fn check_inverse_round_trip(u: &Series) -> Result<(), TestCaseError> {
    let m = (u.order().unwrap().unwrap() * Exponent::from(u.ramification() as i64)).to_integer();
    let precision = Exponent::one() + Exponent::new(INVERSE_TERMS, m);
    let inv = comp_inverse(u, 's', precision).map_err(|e| fail(e.to_string()))?;
    let left = inv.left(u).map_err(|e| fail(e.to_string()))?;
    let s = Series::variable('s');
    prop_assert!(left.agrees_with(&s), "u∘v = {left}");
    prop_assert!(
        left.truncation().is_none_or(|t| t >= precision),
        "u∘v = {left} is not known to s^{precision}"
    );
    let right = inv.right().map_err(|e| fail(e.to_string()))?;
    prop_assert!(right.agrees_with(&Series::variable('t')), "v∘u = {right}");
    prop_assert!(right.truncation().is_some_and(|t| t > Exponent::one()));
    Ok(())
}

/// Slope, ramification and irregularity laws plus agreement of the
/// factor-level and connection-level transforms.
pub fn check_fourier_laws(e: &ExponentialFactor) -> Result<(), TestCaseError> {
    let out = fourier_factor(e).map_err(|err| fail(format!("{e}: {err}")))?;
    prop_assert!(slope_law_holds(e, &out), "{e} ↦ {out}");
    prop_assert!(out.is_irreducible());
    prop_assert!(out.series().is_exact());
    let p = e.ramification() as i64;
    let s = e.irregularity();
    prop_assert_eq!(out.slope(), s / (s - Exponent::from(p)));
    prop_assert_eq!(out.irregularity(), s);
    let c = ConnectionAtInfinity::from_zeta('x', e.series().neg());
    let via = fourier_connection_at_infinity(&c)
        .and_then(|img| img.to_factor())
        .map_err(|err| fail(format!("{e}: {err}")))?;
    prop_assert!(via.iso_equal(&out).unwrap().is_some(), "{via} vs {out}");
    Ok(())
}

/// Idempotence of canonical forms and the equivalence-relation laws of
/// `iso_equal`, exercised through random twists.
pub fn check_canonical_laws(e: &ExponentialFactor, k: i64, l: i64) -> Result<(), TestCaseError> {
    let again = e.canonicalize().unwrap();
    prop_assert_eq!(&again, e);
    let r = e.ramification() as i64;
    let a = e.twist(k).unwrap();
    let b = a.twist(l).unwrap();
    // reflexive
    prop_assert_eq!(e.iso_equal(e).unwrap(), Some(0));
    // twist indices compose additively modulo r
    let ka = e.iso_equal(&a).unwrap();
    let ab = a.iso_equal(&b).unwrap();
    let eb = e.iso_equal(&b).unwrap();
    prop_assert!(ka.is_some() && ab.is_some() && eb.is_some());
    // symmetric
    prop_assert!(a.iso_equal(e).unwrap().is_some());
    prop_assert!(b.iso_equal(&a).unwrap().is_some());
    let direct = e.twist(k + l).unwrap();
    prop_assert_eq!(&direct, &b);
    prop_assert_eq!(e.twist(r).unwrap(), e.clone());
    // invariants
    prop_assert_eq!(a.slope(), e.slope());
    prop_assert_eq!(a.is_irreducible(), e.is_irreducible());
    prop_assert_eq!(a.ramification(), e.ramification());
    Ok(())
}
