mod common;

use common::*;
use proptest::prelude::*;

use num_traits::One;
use pqfourier::diffop::DifferentialOperator;

use pqfourier::{Cyclotomic, Series};

fn operator() -> impl Strategy<Value = DifferentialOperator<Cyclotomic>> {
    prop::collection::vec(exact_series(), 1..=3)
        .prop_map(|cs| DifferentialOperator::new('t', cs.into_iter().enumerate()).unwrap())
}

fn first_order() -> impl Strategy<Value = DifferentialOperator<Cyclotomic>> {
    (exact_series(), exact_series())
        .prop_map(|(a, b)| DifferentialOperator::first_order(a, b).unwrap())
}

/// `t^k + c t^{k+1} + O(t^{k+6})` with `k ≥ 1`, a valid substitution.
fn substitution(var: char) -> impl Strategy<Value = Series> {
    (1i64..=2, rational()).prop_map(move |(k, c)| {
        Series::from_terms(var, 1, [(k, Cyclotomic::one()), (k + 1, c)], Some(k + 6))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn composition_is_associative(a in operator(), b in operator(), c in operator()) {
        let lhs = a.compose(&b).unwrap().compose(&c).unwrap();
        let rhs = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn composition_distributes(a in operator(), b in operator(), c in operator()) {
        let lhs = a.compose(&b.add(&c).unwrap()).unwrap();
        let rhs = a.compose(&b).unwrap().add(&a.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn conjugation_inverts(op in first_order(), lambda in exact_series(), mu in exact_series()) {
        let there = op.conjugate_by_log_derivative(&lambda).unwrap();
        let back = there.conjugate_by_log_derivative(&lambda.neg()).unwrap();
        prop_assert_eq!(&back, &op);
        // conjugations compose additively in the log-derivative
        let two = there.conjugate_by_log_derivative(&mu).unwrap();
        let once = op.conjugate_by_log_derivative(&lambda.add(&mu).unwrap()).unwrap();
        prop_assert_eq!(two, once);
    }

    #[test]
    fn changes_of_variable_compose(op in first_order(), phi in substitution('s'), psi in substitution('u')) {
        // t = φ(s), then s = ψ(u), against t = φ(ψ(u)) directly
        let stepwise = op.change_variable(&phi).unwrap().change_variable(&psi).unwrap();
        let direct = op.change_variable(&phi.compose(&psi).unwrap()).unwrap();
        prop_assert!(stepwise.agrees_with(&direct), "{} vs {}", stepwise, direct);
    }
}
