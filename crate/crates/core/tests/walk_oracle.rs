//! Walks, `λ₂` and `ρ` under the fundamental provider against the
//! ladder-scanning oracle.

mod common;

use common::{random_cnf_pair, Cnf, LadderWalks, RhoOracle};
use ordcolor::sample::rng_for;
use ordcolor::walks::{lambda2, landing, rho2, walk, Rho};
use ordcolor::{Ordinal, Provider};
use proptest::prelude::*;

fn to_cnf(v: &[Ordinal]) -> Vec<Cnf> {
    v.iter().map(Cnf::from_ordinal).collect()
}

#[test]
fn traces_and_lambda2_match_the_oracle() {
    let p = Provider::fundamental();
    let mut rng = rng_for(71, 0);
    for _ in 0..3000 {
        let (a, b) = random_cnf_pair(&mut rng, 4, 4);
        let (alpha, beta) = (a.to_ordinal(), b.to_ordinal());
        let trace = walk(&p, &alpha, &beta).unwrap();
        assert_eq!(to_cnf(trace.steps()), LadderWalks::trace(&a, &b), "{alpha} < {beta}");
        assert_eq!(rho2(&p, &alpha, &beta).unwrap(), trace.len());
        assert_eq!(Cnf::from_ordinal(&lambda2(&p, &alpha, &beta).unwrap()), LadderWalks::lambda2(&a, &b));
        // canonical ladders have no accumulation points below their top
        assert_eq!(landing(&p, &alpha, &beta).unwrap(), alpha);
    }
}

#[test]
fn rho_matches_the_recursive_oracle() {
    let rho = Rho::new(Provider::fundamental());
    let mut oracle = RhoOracle::default();
    let mut rng = rng_for(72, 0);
    for _ in 0..1500 {
        let (a, b) = random_cnf_pair(&mut rng, 2, 3);
        let got = rho.eval(&a.to_ordinal(), &b.to_ordinal()).unwrap();
        assert_eq!(got, Ordinal::nat(oracle.eval(&a, &b)), "ρ({:?}, {:?})", a, b);
    }
}

#[test]
fn rho_values_on_small_pairs() {
    // frozen from RhoOracle
    let mut oracle = RhoOracle::default();
    let cases = [
        (Cnf::nat(3), Cnf::new(vec![0, 1]), 2),
        (Cnf::nat(1), Cnf::new(vec![0, 1]), 0),
        (Cnf::nat(5), Cnf::new(vec![0, 0, 1]), 4),
        (Cnf::new(vec![1, 1]), Cnf::new(vec![0, 2]), 0),
    ];
    let rho = Rho::new(Provider::fundamental());
    for (a, b, expected) in cases {
        assert_eq!(oracle.eval(&a, &b), expected);
        assert_eq!(rho.eval(&a.to_ordinal(), &b.to_ordinal()).unwrap(), Ordinal::nat(expected));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn traces_decrease_and_end_on_alpha(seed in any::<u64>()) {
        let p = Provider::fundamental();
        let (a, b) = random_cnf_pair(&mut rng_for(seed, 0), 5, 5);
        let (alpha, beta) = (a.to_ordinal(), b.to_ordinal());
        let trace = walk(&p, &alpha, &beta).unwrap();
        prop_assert_eq!(trace.steps()[0].clone(), beta);
        prop_assert!(trace.steps().windows(2).all(|w| w[0] > w[1]));
        prop_assert!(trace.steps().iter().all(|s| *s > alpha));
        prop_assert_eq!(ordcolor::CSequence::cseq(&p, trace.last()).min_above(&alpha), Some(alpha.clone()));
    }

    #[test]
    fn rho_is_subadditive(seed in any::<u64>()) {
        let mut rng = rng_for(seed, 1);
        let mut pts = [common::random_cnf(&mut rng, 2, 3), common::random_cnf(&mut rng, 2, 3), common::random_cnf(&mut rng, 2, 3)];
        pts.sort();
        prop_assume!(pts[0] < pts[1] && pts[1] < pts[2]);
        let mut oracle = RhoOracle::default();
        let ab = oracle.eval(&pts[0], &pts[1]);
        let ac = oracle.eval(&pts[0], &pts[2]);
        let bc = oracle.eval(&pts[1], &pts[2]);
        prop_assert!(ac <= ab.max(bc));
        prop_assert!(ab <= ac.max(bc));
    }

    #[test]
    fn rho_bounds_each_trace_otp(seed in any::<u64>()) {
        let p = Provider::fundamental();
        let (a, b) = random_cnf_pair(&mut rng_for(seed, 2), 3, 3);
        let (alpha, beta) = (a.to_ordinal(), b.to_ordinal());
        let r = Rho::new(&p).eval(&alpha, &beta).unwrap();
        for eta in walk(&p, &alpha, &beta).unwrap().steps() {
            prop_assert!(ordcolor::CSequence::cseq(&p, eta).otp_below(&alpha) <= r);
        }
    }
}
