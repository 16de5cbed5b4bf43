//! Magma laws: the well-behaved inclusions, implementation counts and the
//! JSON encoding.

use std::collections::BTreeSet;

use ordcolor::magma::{fs_n, implementations, left_fold, op_apply, parse_word, Magma, MagmaElement, MagmaKind, StandardMagma};
use ordcolor::sample::rng_for;
use proptest::prelude::*;

const KINDS: [MagmaKind; 3] = [MagmaKind::FreeAbelian, MagmaKind::FreeGroup, MagmaKind::Qvec];

fn support(x: &MagmaElement) -> BTreeSet<usize> {
    x.support().into_iter().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn products_respect_both_inclusions(seed in any::<u64>(), kind in 0usize..3) {
        let magma = StandardMagma::new(KINDS[kind], 12).unwrap();
        let mut rng = rng_for(seed, 0);
        let x = magma.sample_element(&mut rng, 4);
        let y = magma.sample_element(&mut rng, 4);
        let (sx, sy, sxy) = (support(&x), support(&y), support(&magma.op(&x, &y).unwrap()));
        prop_assert!(sx.symmetric_difference(&sy).all(|g| sxy.contains(g)));
        prop_assert!(sxy.is_subset(&sx.union(&sy).copied().collect()));
    }

    #[test]
    fn json_round_trips(seed in any::<u64>(), kind in 0usize..3) {
        let magma = StandardMagma::new(KINDS[kind], 30).unwrap();
        let x = magma.sample_element(&mut rng_for(seed, 1), 5);
        prop_assert_eq!(MagmaElement::from_json(KINDS[kind], &x.to_json()).unwrap(), x);
    }

    #[test]
    fn free_abelian_products_agree(seed in any::<u64>()) {
        let magma = StandardMagma::new(MagmaKind::FreeAbelian, 10).unwrap();
        let xs = magma.sample_distinct(&mut rng_for(seed, 2), 4, 3);
        let refs: Vec<&MagmaElement> = xs.iter().collect();
        let all = implementations(&magma, &refs).unwrap();
        prop_assert_eq!(all, vec![left_fold(&magma, &refs).unwrap()]);
    }

    #[test]
    fn qvec_product_is_commutative(seed in any::<u64>()) {
        let magma = StandardMagma::new(MagmaKind::Qvec, 10).unwrap();
        let xs = magma.sample_distinct(&mut rng_for(seed, 3), 2, 3);
        prop_assert_eq!(magma.op(&xs[0], &xs[1]).unwrap(), magma.op(&xs[1], &xs[0]).unwrap());
    }
}

#[test]
fn free_group_implementations_are_the_orderings() {
    let magma = StandardMagma::new(MagmaKind::FreeGroup, 3).unwrap();
    let xs = [parse_word("a").unwrap(), parse_word("b").unwrap(), parse_word("c").unwrap()];
    let refs: Vec<&MagmaElement> = xs.iter().collect();
    // associative, so one value per ordering of three distinct letters
    assert_eq!(implementations(&magma, &refs).unwrap().len(), 6);
}

#[test]
fn qvec_implementations_of_unit_vectors() {
    let magma = StandardMagma::new(MagmaKind::Qvec, 3).unwrap();
    let xs: Vec<MagmaElement> = (0..3).map(|g| MagmaElement::qvec_ratios([(g, 1, 1)])).collect();
    let refs: Vec<&MagmaElement> = xs.iter().collect();
    let values: BTreeSet<Vec<(usize, i64)>> = implementations(&magma, &refs)
        .unwrap()
        .iter()
        .map(|v| match v {
            MagmaElement::Qvec(p) => p.iter().map(|(g, c)| (*g, c.to_integer().try_into().unwrap())).collect(),
            _ => unreachable!(),
        })
        .collect();
    // ||e0 − e1| − e2| = ||e0 − e2| − e1| = e0 − e1 − e2 and ||e1 − e2| − e0| = e0 − e1 + e2
    let expected: BTreeSet<Vec<(usize, i64)>> =
        [vec![(0, 1), (1, -1), (2, -1)], vec![(0, 1), (1, -1), (2, 1)]].into_iter().collect();
    assert_eq!(values, expected);
}

#[test]
fn fs_n_enumerates_every_tuple() {
    let magma = StandardMagma::new(MagmaKind::FreeGroup, 6).unwrap();
    let xs = magma.sample_distinct(&mut rng_for(4, 0), 5, 2);
    let entries = fs_n(&magma, &xs, 3).unwrap();
    assert_eq!(entries.len(), 10);
    assert!(fs_n(&magma, &xs, 5).is_err());
    assert!(fs_n(&magma, &[xs[0].clone(), xs[0].clone()], 2).is_err());
}

#[test]
fn mismatched_variants_are_rejected() {
    let a = MagmaElement::free_abelian([(0, 1)]);
    let b = parse_word("a").unwrap();
    assert!(op_apply(&a, &b).is_err());
}
