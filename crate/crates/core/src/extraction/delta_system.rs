//! Finite sunflower search.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

/// Which search produced a [`DeltaSystem`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMethod {
    Exact,
    Greedy,
}

/// A sub-family whose members pairwise intersect in `root`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaSystem<T: Ord> {
    pub root: BTreeSet<T>,
    /// Positions in the input family.
    pub petals: Vec<usize>,
    pub head_tail_tail: bool,
    pub method: SearchMethod,
}

impl<T: Ord + Clone> DeltaSystem<T> {
    /// Checks the root, the common petal size and, when flagged, the
    /// head-tail-tail ordering against `family`.
    pub fn verify(&self, family: &[BTreeSet<T>]) -> bool {
        let Some(sets) = self
            .petals
            .iter()
            .map(|&i| family.get(i))
            .collect::<Option<Vec<_>>>()
        else {
            return false;
        };
        let mut seen = BTreeSet::new();
        if !self.petals.iter().all(|i| seen.insert(*i)) {
            return false;
        }
        let tails: Vec<BTreeSet<T>> = sets.iter().map(|s| *s - &self.root).collect();
        let size = tails.first().map_or(0, BTreeSet::len);
        if size == 0 || tails.iter().any(|t| t.len() != size) {
            return false;
        }
        for (a, sa) in sets.iter().enumerate() {
            for sb in &sets[a + 1..] {
                if sa.intersection(sb).cloned().collect::<BTreeSet<T>>() != self.root {
                    return false;
                }
            }
        }
        if self.head_tail_tail {
            let root_max = self.root.last();
            for (a, t) in tails.iter().enumerate() {
                if root_max.is_some_and(|m| t.first().expect("nonempty") <= m) {
                    return false;
                }
                if a + 1 < tails.len() && t.last() >= tails[a + 1].first() {
                    return false;
                }
            }
        }
        true
    }
}

/// Families at most this large are searched exactly.
pub const EXACT_FAMILY_LIMIT: usize = 12;
/// Families whose sets are at most this large are searched exactly.
pub const EXACT_SET_LIMIT: usize = 3;
/// Node budget of one exact search.
pub const EXACT_NODE_BUDGET: u64 = 1_000_000;

/// Finds `want` members forming a Δ-system with nonempty petals of one
/// common size; with `head_tail_tail` the root lies below every petal and
/// petals are pairwise order-separated, listed in increasing order.
///
/// Exact for families of at most [`EXACT_FAMILY_LIMIT`] sets or sets of at
/// most [`EXACT_SET_LIMIT`] elements; otherwise, or when the exact node
/// budget runs out, a greedy descent that grows the root by the most common
/// element. `want < 2` yields `None`.
pub fn find_delta_system<T: Ord + Clone>(
    family: &[BTreeSet<T>],
    want: usize,
    head_tail_tail: bool,
) -> Option<DeltaSystem<T>> {
    if want < 2 || family.len() < want {
        return None;
    }
    let exact = family.len() <= EXACT_FAMILY_LIMIT
        || family.iter().all(|s| s.len() <= EXACT_SET_LIMIT);
    let found = if exact {
        match exact_search(family, want, head_tail_tail) {
            Exact::Found(root, petals) => Some((root, petals, SearchMethod::Exact)),
            Exact::Absent => None,
            Exact::OutOfBudget => greedy_search(family, want, head_tail_tail)
                .map(|(r, p)| (r, p, SearchMethod::Greedy)),
        }
    } else {
        greedy_search(family, want, head_tail_tail).map(|(r, p)| (r, p, SearchMethod::Greedy))
    };
    let (root, mut petals, method) = found?;
    if head_tail_tail {
        petals.sort_by(|&a, &b| {
            let ta = family[a].iter().find(|x| !root.contains(*x));
            let tb = family[b].iter().find(|x| !root.contains(*x));
            ta.cmp(&tb)
        });
    } else {
        petals.sort_unstable();
    }
    let system = DeltaSystem {
        root,
        petals,
        head_tail_tail,
        method,
    };
    debug_assert!(system.verify(family));
    Some(system)
}

enum Exact<T> {
    Found(BTreeSet<T>, Vec<usize>),
    Absent,
    OutOfBudget,
}

/// Candidates containing `root`, grouped by petal size.
fn groups<T: Ord + Clone>(
    family: &[BTreeSet<T>],
    root: &BTreeSet<T>,
    head_tail_tail: bool,
) -> BTreeMap<usize, Vec<(usize, BTreeSet<T>)>> {
    let mut out: BTreeMap<usize, Vec<(usize, BTreeSet<T>)>> = BTreeMap::new();
    for (i, s) in family.iter().enumerate() {
        if !root.is_subset(s) || s.len() == root.len() {
            continue;
        }
        let tail: BTreeSet<T> = s - root;
        if head_tail_tail && root.last().is_some_and(|m| tail.first().expect("nonempty") <= m) {
            continue;
        }
        out.entry(tail.len()).or_default().push((i, tail));
    }
    out
}

fn exact_search<T: Ord + Clone>(
    family: &[BTreeSet<T>],
    want: usize,
    head_tail_tail: bool,
) -> Exact<T> {
    let mut roots: BTreeSet<BTreeSet<T>> = BTreeSet::new();
    for (a, sa) in family.iter().enumerate() {
        for sb in &family[a + 1..] {
            roots.insert(sa.intersection(sb).cloned().collect());
        }
    }
    let mut budget = EXACT_NODE_BUDGET;
    let mut exhausted = false;
    for root in roots {
        for (_, candidates) in groups(family, &root, head_tail_tail) {
            if candidates.len() < want {
                continue;
            }
            let picked = if head_tail_tail {
                interval_packing(&candidates, want)
            } else {
                let mut chosen = Vec::new();
                match disjoint_dfs(&candidates, 0, want, &mut chosen, &mut budget) {
                    Some(true) => Some(chosen.iter().map(|&k| candidates[k].0).collect()),
                    Some(false) => None,
                    None => {
                        exhausted = true;
                        None
                    }
                }
            };
            if let Some(petals) = picked {
                return Exact::Found(root, petals);
            }
        }
    }
    if exhausted {
        Exact::OutOfBudget
    } else {
        Exact::Absent
    }
}

/// Earliest-end interval scheduling; optimal for pairwise order-separation.
fn interval_packing<T: Ord + Clone>(candidates: &[(usize, BTreeSet<T>)], want: usize) -> Option<Vec<usize>> {
    let mut order: Vec<&(usize, BTreeSet<T>)> = candidates.iter().collect();
    order.sort_by(|a, b| (a.1.last(), a.0).cmp(&(b.1.last(), b.0)));
    let mut picked = Vec::new();
    let mut last_end: Option<&T> = None;
    for (i, tail) in order {
        if last_end.is_none_or(|end| tail.first().expect("nonempty") > end) {
            picked.push(*i);
            last_end = tail.last();
            if picked.len() == want {
                return Some(picked);
            }
        }
    }
    None
}

/// `Some(true)` on success, `Some(false)` when absent, `None` out of budget.
fn disjoint_dfs<T: Ord>(
    candidates: &[(usize, BTreeSet<T>)],
    start: usize,
    want: usize,
    chosen: &mut Vec<usize>,
    budget: &mut u64,
) -> Option<bool> {
    if chosen.len() == want {
        return Some(true);
    }
    if candidates.len() - start < want - chosen.len() {
        return Some(false);
    }
    for k in start..candidates.len() {
        if *budget == 0 {
            return None;
        }
        *budget -= 1;
        let tail = &candidates[k].1;
        if chosen.iter().all(|&c| candidates[c].1.is_disjoint(tail)) {
            chosen.push(k);
            match disjoint_dfs(candidates, k + 1, want, chosen, budget) {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {}
            }
            chosen.pop();
        }
    }
    Some(false)
}

fn greedy_search<T: Ord + Clone>(
    family: &[BTreeSet<T>],
    want: usize,
    head_tail_tail: bool,
) -> Option<(BTreeSet<T>, Vec<usize>)> {
    let mut root: BTreeSet<T> = BTreeSet::new();
    loop {
        let grouped = groups(family, &root, head_tail_tail);
        for candidates in grouped.values() {
            let picked = if head_tail_tail {
                interval_packing(candidates, want)
            } else {
                greedy_packing(candidates, want)
            };
            if let Some(petals) = picked {
                return Some((root, petals));
            }
        }
        let mut counts: BTreeMap<&T, usize> = BTreeMap::new();
        for s in family.iter().filter(|s| root.is_subset(s)) {
            for x in s.iter().filter(|x| !root.contains(*x)) {
                *counts.entry(x).or_default() += 1;
            }
        }
        let best = counts.values().copied().max()?;
        if best < want {
            return None;
        }
        let next = counts
            .into_iter()
            .find(|&(_, c)| c == best)
            .map(|(x, _)| x.clone())
            .expect("a key attains the maximum");
        root.insert(next);
    }
}

fn greedy_packing<T: Ord>(candidates: &[(usize, BTreeSet<T>)], want: usize) -> Option<Vec<usize>> {
    let mut picked: Vec<&(usize, BTreeSet<T>)> = Vec::new();
    for c in candidates {
        if picked.iter().all(|p| p.1.is_disjoint(&c.1)) {
            picked.push(c);
            if picked.len() == want {
                return Some(picked.iter().map(|p| p.0).collect());
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(sets: &[&[u64]]) -> Vec<BTreeSet<u64>> {
        sets.iter().map(|s| s.iter().copied().collect()).collect()
    }

    #[test]
    fn common_root() {
        let f = fam(&[&[1, 2], &[1, 3], &[1, 4]]);
        let d = find_delta_system(&f, 3, true).unwrap();
        assert_eq!(d.root, [1].into_iter().collect());
        assert_eq!(d.petals, vec![0, 1, 2]);
        assert_eq!(d.method, SearchMethod::Exact);
    }

    #[test]
    fn disjoint_singletons_have_empty_root() {
        let f = fam(&[&[5], &[2], &[9], &[7]]);
        let d = find_delta_system(&f, 3, true).unwrap();
        assert!(d.root.is_empty());
        assert_eq!(d.petals, vec![1, 0, 3]);
        assert!(d.verify(&f));
    }

    #[test]
    fn triangle_has_no_system() {
        let f = fam(&[&[1, 2], &[2, 3], &[1, 3]]);
        assert_eq!(find_delta_system(&f, 3, false), None);
        assert!(find_delta_system(&f, 2, false).is_some());
    }

    #[test]
    fn head_tail_tail_needs_ordered_petals() {
        let f = fam(&[&[1, 4], &[2, 3]]);
        assert!(find_delta_system(&f, 2, false).is_some());
        assert_eq!(find_delta_system(&f, 2, true), None);
    }

    #[test]
    fn greedy_path_on_large_families() {
        let mut f: Vec<BTreeSet<u64>> = (0..20).map(|i| [0, 1, 100 + 2 * i, 101 + 2 * i].into_iter().collect()).collect();
        f.push([0, 1, 100, 102].into_iter().collect());
        let d = find_delta_system(&f, 15, true).unwrap();
        assert_eq!(d.method, SearchMethod::Greedy);
        assert_eq!(d.root, [0, 1].into_iter().collect());
        assert!(d.verify(&f));
    }
}
