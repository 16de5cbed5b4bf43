//! Ordinal arithmetic against the coefficient-vector oracle.

mod common;

use common::Cnf;
use ordcolor::{Kind, Ordinal};
use proptest::prelude::*;

fn cnf() -> impl Strategy<Value = Cnf> {
    prop::collection::vec(prop_oneof![Just(0u64), 1u64..6], 0..6).prop_map(Cnf::new)
}

proptest! {
    #[test]
    fn comparison_matches_coefficient_order(a in cnf(), b in cnf()) {
        prop_assert_eq!(a.to_ordinal().cmp(&b.to_ordinal()), a.cmp(&b));
    }

    #[test]
    fn conversion_round_trips(a in cnf()) {
        prop_assert_eq!(Cnf::from_ordinal(&a.to_ordinal()), a);
    }

    #[test]
    fn text_round_trips(a in cnf()) {
        let o = a.to_ordinal();
        prop_assert_eq!(Ordinal::parse(&o.to_string()).unwrap(), o);
    }

    #[test]
    fn classification_and_neighbours(a in cnf()) {
        let o = a.to_ordinal();
        let kind = if a.is_zero() { Kind::Zero } else if a.is_limit() { Kind::Limit } else { Kind::Successor };
        prop_assert_eq!(o.classify(), kind);
        prop_assert_eq!(Cnf::from_ordinal(&o.succ()), a.succ());
        prop_assert_eq!(o.pred().map(|p| Cnf::from_ordinal(&p)), a.pred());
        prop_assert_eq!(o.finite_part(), a.coeff(0));
    }

    #[test]
    fn add_nat_matches(a in cnf(), k in 0u64..20) {
        let mut expected = a.0.clone();
        if k > 0 {
            if expected.is_empty() { expected.push(0); }
            expected[0] += k;
        }
        prop_assert_eq!(Cnf::from_ordinal(&a.to_ordinal().add_nat(k)), Cnf::new(expected));
    }

    #[test]
    fn mul_nat_scales_the_leading_coefficient(a in cnf(), k in 0u64..6) {
        let expected = if k == 0 || a.is_zero() {
            Cnf::default()
        } else {
            let mut c = a.0.clone();
            *c.last_mut().unwrap() *= k;
            Cnf::new(c)
        };
        prop_assert_eq!(Cnf::from_ordinal(&a.to_ordinal().mul_nat(k)), expected);
    }

    #[test]
    fn fundamental_sequences_match(a in cnf(), n in 1u64..30) {
        prop_assume!(a.is_limit());
        let o = a.to_ordinal();
        prop_assert_eq!(Cnf::from_ordinal(&o.fund_seq(n).unwrap()), a.fund(n));
        prop_assert!(o.fund_seq(n).unwrap() < o.fund_seq(n + 1).unwrap());
        prop_assert!(o.fund_seq(n).unwrap() < o);
    }

    #[test]
    fn set_sup_is_predecessor_or_self(a in cnf()) {
        let expected = a.pred().unwrap_or_else(|| a.clone());
        prop_assert_eq!(Cnf::from_ordinal(&a.to_ordinal().set_sup()), expected);
    }
}

#[test]
fn fundamental_sequence_of_omega_to_the_omega() {
    let top = Ordinal::parse("w^w").unwrap();
    assert_eq!(top.fund_seq(3).unwrap(), Ordinal::parse("w^3").unwrap());
    assert!(top.fund_seq(0).is_err());
    assert!(Ordinal::parse("w+1").unwrap().fund_seq(1).is_err());
}
