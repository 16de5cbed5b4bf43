//! Branch families: splitting levels, the Sierpiński coloring and family
//! separation, against direct recomputation on the branch strings.

use std::collections::BTreeSet;

use ordcolor::branches::{
    delta_coloring, find_splitters, separate_families, sierpinski_color, subtree_threshold, BranchFamily,
};
use ordcolor::sample::rng_for;
use proptest::prelude::*;
use rand::seq::SliceRandom;

fn split(f: &[u8], g: &[u8]) -> usize {
    (0..f.len()).find(|&k| f[k] != g[k]).unwrap_or(f.len())
}

fn family(seed: u64, size: usize, depth: usize) -> BranchFamily {
    BranchFamily::random(&mut rng_for(seed, 0), 2, depth, size).unwrap()
}

proptest! {
    #[test]
    fn colorings_match_the_strings(seed in any::<u64>()) {
        let f = family(seed, 12, 6);
        let b = f.branches();
        for i in 0..12 {
            for j in i + 1..12 {
                prop_assert_eq!(delta_coloring(&f, i, j).unwrap(), split(&b[i], &b[j]));
                prop_assert_eq!(delta_coloring(&f, j, i).unwrap(), split(&b[i], &b[j]));
                prop_assert_eq!(sierpinski_color(&f, i, j).unwrap(), u8::from(b[i] < b[j]));
            }
        }
        prop_assert!(sierpinski_color(&f, 3, 3).is_err());
    }

    #[test]
    fn nodes_split_their_extensions_above_their_depth(seed in any::<u64>()) {
        let f = family(seed, 16, 5);
        let b = f.branches();
        for tau in 0..4 {
            for i in 0..16 {
                for j in 0..16 {
                    if i != j && b[i][..=tau] == b[j][..=tau] {
                        prop_assert!(delta_coloring(&f, i, j).unwrap() > tau);
                    }
                }
            }
        }
    }

    #[test]
    fn separation_witnesses_verify(seed in any::<u64>(), floor in 1usize..4) {
        let f = family(seed, 14, 5);
        let mut idx: Vec<usize> = (0..14).collect();
        idx.shuffle(&mut rng_for(seed, 1));
        let (a, b) = idx.split_at(7);
        if let Some(w) = separate_families(&f, a, b, floor).unwrap() {
            prop_assert!(w.verify(&f, floor));
            prop_assert!(w.left.iter().all(|i| a.contains(i)));
            prop_assert!(w.right.iter().all(|i| b.contains(i)));
        }
    }

    #[test]
    fn splitters_match_counting(seed in any::<u64>(), floor in 1usize..5) {
        let f = family(seed, 10, 4);
        let b = f.branches();
        let members: Vec<usize> = (0..10).collect();
        let got = find_splitters(&f, &members, 1, floor).unwrap();
        let mut expected = Vec::new();
        for x in 0..10 {
            let positions: Vec<usize> = (0..4)
                .filter(|&d| b[x][d] == 1 && (0..10).filter(|&y| y != x && split(&b[x], &b[y]) == d).count() >= floor)
                .collect();
            if !positions.is_empty() {
                expected.push((x, positions));
            }
        }
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn thresholds_match_counting(seed in any::<u64>(), tau in 1usize..6) {
        let f = family(seed, 9, 4);
        let b = f.branches();
        let members: Vec<usize> = (0..9).collect();
        let got = subtree_threshold(&f, &members, tau).unwrap();
        let mut expected = BTreeSet::new();
        for x in b {
            for len in 0..=4 {
                let t = &x[..len];
                if b.iter().filter(|y| y.starts_with(t)).count() >= tau {
                    expected.insert(t.to_vec());
                }
            }
        }
        prop_assert_eq!(got, expected);
    }
}

#[test]
fn planted_separation() {
    // A extends 00, B extends 01
    let texts: Vec<String> = (0..16u32).map(|k| format!("0{}{:03b}", k / 8, k % 8)).collect();
    let f = BranchFamily::from_strings(&texts).unwrap();
    let a: Vec<usize> = (0..8).collect();
    let b: Vec<usize> = (8..16).collect();
    let w = separate_families(&f, &a, &b, 8).unwrap().unwrap();
    assert_eq!(w.node, vec![0]);
    assert_eq!((w.left_symbol, w.right_symbol), (0, 1));
    assert_eq!(w.left, a);
    assert_eq!(w.right, b);
    assert!(separate_families(&f, &a, &b, 9).unwrap().is_none());
}
