//! Cube colorings against recomputation from the branches and a recursive `ρ`.

mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use common::{Cnf, RhoOracle};
use ordcolor::branches::BranchFamily;
use ordcolor::cube::{
    square_bracket_check, square_bracket_check_plain, u_check, ChCase, CubeColoring, CubeVariant, FiberInjection,
};
use ordcolor::oscillation::osc3;
use ordcolor::sample::{random_increasing, rng_for, OrdinalShape};
use ordcolor::{Ordinal, Provider};
use proptest::prelude::*;

const SHAPE: OrdinalShape = OrdinalShape {
    max_exponent: 2,
    max_coefficient: 3,
    density: 0.6,
};

fn cube(variant: CubeVariant, seed: u64, size: usize) -> CubeColoring {
    let family = Arc::new(BranchFamily::random(&mut rng_for(seed, 0), 2, 6, size).unwrap());
    let points = random_increasing(&mut rng_for(seed, 1), SHAPE, size);
    CubeColoring::new(variant, family, points, Provider::fundamental(), seed, 6).unwrap()
}

fn split(f: &[u8], g: &[u8]) -> usize {
    (0..f.len()).find(|&k| f[k] != g[k]).unwrap_or(f.len())
}

fn pick3(seed: u64, size: usize) -> [usize; 3] {
    let mut v = rand::seq::index::sample(&mut rng_for(seed, 2), size, 3).into_vec();
    v.sort_unstable();
    [v[0], v[1], v[2]]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn color_ignores_argument_order(seed in any::<u64>()) {
        for variant in [CubeVariant::Stability, CubeVariant::Ch, CubeVariant::Mixed] {
            let c = cube(variant, seed, 10);
            let [i, j, k] = pick3(seed, 10);
            let p = c.points();
            let base = c.color3(&p[i], &p[j], &p[k]).unwrap();
            prop_assert_eq!(c.color3(&p[k], &p[i], &p[j]).unwrap(), base.clone());
            prop_assert_eq!(c.color3(&p[j], &p[k], &p[i]).unwrap(), base);
        }
    }

    #[test]
    fn ch_cases_follow_the_branches(seed in any::<u64>()) {
        let c = cube(CubeVariant::Ch, seed, 12);
        let [i, j, k] = pick3(seed, 12);
        let b = c.family().branches();
        let (ab, bc) = (split(&b[i], &b[j]), split(&b[j], &b[k]));
        let expected = if ab < bc {
            ChCase::SplitBelow
        } else if ab == bc {
            ChCase::SplitEqual
        } else if b[i][ab] < b[j][ab] {
            ChCase::SplitAboveAscending
        } else {
            ChCase::SplitAboveDescending
        };
        let p = c.points();
        prop_assert_eq!(c.ch_case(&p[i], &p[j], &p[k]).unwrap(), expected);
    }

    #[test]
    fn stability_middle_case_is_zero(seed in any::<u64>()) {
        let c = cube(CubeVariant::Stability, seed, 12);
        let [i, j, k] = pick3(seed, 12);
        let b = c.family().branches();
        let (lo, hi) = if b[i] < b[j] { (i, j) } else { (j, i) };
        // max point sits lexicographically between the other two
        if b[lo] < b[k] && b[k] < b[hi] {
            let p = c.points();
            prop_assert_eq!(c.color3(&p[i], &p[j], &p[k]).unwrap(), Ordinal::zero());
        }
    }

    #[test]
    fn stability_search_matches_recomputation(seed in any::<u64>()) {
        let c = cube(CubeVariant::Stability, seed, 10)
            .with_fiber_injection(FiberInjection::from_fn(|z, e| (z.finite_part() * 7 + e.finite_part()) % 11))
            .with_search_cap(64);
        let [i, j, k] = pick3(seed, 10);
        let p = c.points();
        let b = c.family().branches();
        let cnf: Vec<Cnf> = [i, j, k].iter().map(|&x| Cnf::from_ordinal(&p[x])).collect();
        let mut rho = RhoOracle::default();
        let lower = rho.eval(&cnf[0], &cnf[1]);
        let key = rho.eval(&cnf[1], &cnf[2]);
        let threshold = split(&b[i], &b[j]).max(split(&b[i], &b[k])).max(split(&b[j], &b[k])) as u64;
        let expected = (lower..lower + 64).find(|z| (z * 7 + key) % 11 <= threshold).map(Ordinal::nat);
        prop_assert_eq!(c.z_min_stability(&p[i], &p[j], &p[k]).unwrap(), expected);
    }

    #[test]
    fn mixed_uses_oscillation_when_splitting_rises(seed in any::<u64>()) {
        let c = cube(CubeVariant::Mixed, seed, 10);
        let [i, j, k] = pick3(seed, 10);
        let p = c.points();
        let b = c.family().branches();
        let osc = osc3(&Provider::fundamental(), &p[i], &p[j], &p[k]).unwrap();
        let value = c.mixed_d(&p[i], &p[j], &p[k]).unwrap();
        if osc > 0 && split(&b[i], &b[j]) < split(&b[j], &b[k]) {
            prop_assert_eq!(value, osc as u64 - 1);
        } else {
            prop_assert_eq!(value, c.c_omega(&p[i], &p[j], &p[k]).unwrap());
        }
    }
}

#[test]
fn ch_ascending_case_applies_the_pair_coloring() {
    let pair = Arc::new(|x: &Ordinal, y: &Ordinal| Ordinal::nat(x.finite_part() * 100 + y.finite_part()));
    let family = Arc::new(BranchFamily::from_strings(&["0000", "0100", "1000"]).unwrap());
    let points = vec![Ordinal::nat(1), Ordinal::nat(2), Ordinal::nat(3)];
    let c = CubeColoring::new(CubeVariant::Ch, family, points, Provider::fundamental(), 0, 4)
        .unwrap()
        .with_pair_coloring(pair);
    let (a, b, d) = (Ordinal::nat(1), Ordinal::nat(2), Ordinal::nat(3));
    assert_eq!(c.ch_case(&a, &b, &d).unwrap(), ChCase::SplitAboveAscending);
    // Δ(0000,0100) = 1; ϱ(1,3) = 0 since the walk 3 → 2 → 1 meets nothing below 1
    assert_eq!(c.color3(&a, &b, &d).unwrap(), Ordinal::nat(100));
}

#[test]
fn rectangular_check_counts_crossing_tuples() {
    let a: Vec<u32> = vec![1, 4, 6, 9];
    let b: Vec<u32> = vec![2, 3, 10];
    let colors: BTreeSet<u32> = (0..3).collect();
    let r = square_bracket_check(|t: &[u32]| t.iter().sum::<u32>() % 3, &a, &b, 3, &colors).unwrap();
    // C(7,3) − C(4,3) − C(3,3)
    assert_eq!(r.tuples_examined, 35 - 4 - 1);
    assert!(r.missing.is_empty());
    for (k, t) in &r.witnesses {
        assert_eq!(t.iter().sum::<u32>() % 3, *k);
    }
    assert!(square_bracket_check(|_: &[u32]| 0u32, &a, &[4], 2, &colors).is_err());
    let plain = square_bracket_check_plain(|_: &[u32]| 0u32, &a, 2, &colors);
    assert_eq!(plain.tuples_examined, 6);
    assert_eq!(plain.missing, vec![1, 2]);
}

#[test]
fn u_check_finds_the_largest_compatible_subfamily() {
    // c(x,y) = |x − y|; sets are compatible when all cross distances exceed τ
    let family: Vec<Vec<i64>> = vec![vec![0, 1], vec![3], vec![10, 11], vec![12], vec![30]];
    let c = |x: &i64, y: &i64| (x - y).abs();
    // brute force over subsets
    let mut best = 0;
    for mask in 0u32..(1 << family.len()) {
        let members: Vec<usize> = (0..family.len()).filter(|i| mask >> i & 1 == 1).collect();
        let ok = members.iter().all(|&i| {
            members.iter().all(|&j| i == j || family[i].iter().all(|x| family[j].iter().all(|y| c(x, y) > 1)))
        });
        if ok {
            best = best.max(members.len());
        }
    }
    let found = u_check(c, &family, &1, 1).unwrap().unwrap();
    assert_eq!(found.len(), best);
    assert_eq!(u_check(c, &family, &1, best + 1).unwrap(), None);
    assert!(u_check(c, &[vec![1], vec![1, 2]], &0, 1).is_err());
}
