//! Planted families on which the extraction claim can be checked exactly.
//!
//! Each fixture has a root `r` and sets `x_γ = r ⊎ y_γ` with `|y_γ| = σ`.
//! The branch of `y_γ(j)` starts with a node `t_j` of length 3 shared by
//! all `γ` (distinct per `j`), continues with zeros up to `dom(s_j)`, then
//! carries the side symbol (0 on `Γ₀`, 1 on `Γ₁`) and the bits of `γ`.
//! Root branches start with nodes unused by every `t_j`, so all pairs inside
//! `r ∪ y_γ` split before depth 3.

use std::sync::Arc;

use crate::branches::BranchFamily;

/// Common branch depth.
pub const FIXTURE_DEPTH: usize = 8;
/// Length of the shared nodes `t_j`.
const SHARED: usize = 3;
const ROOT_SIZE: usize = 2;

/// Where the root indices sit relative to the petals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootPlacement {
    Absent,
    Front,
    Back,
}

/// One planted family with its claimed extraction target.
#[derive(Clone, Debug)]
pub struct ExtractionFixture {
    pub family: Arc<BranchFamily>,
    pub sigma: usize,
    /// Number of `γ`, all of which lie in `Γ₀ ∪ Γ₁`.
    pub gammas: usize,
    /// `true` for members of `Γ₁`.
    pub side: Vec<bool>,
    /// `dom(s_j)` for each `j < σ`.
    pub split_depth: Vec<usize>,
    pub root: Vec<usize>,
    base: usize,
}

impl ExtractionFixture {
    fn build(sigma: usize, side: Vec<bool>, split_depth: Vec<usize>, placement: RootPlacement) -> Self {
        let gammas = side.len();
        let petal_count = sigma * gammas;
        let (base, root): (usize, Vec<usize>) = match placement {
            RootPlacement::Absent => (0, Vec::new()),
            RootPlacement::Front => (ROOT_SIZE, (0..ROOT_SIZE).collect()),
            RootPlacement::Back => (0, (petal_count..petal_count + ROOT_SIZE).collect()),
        };
        let mut branches = vec![Vec::new(); petal_count + root.len()];
        for (k, &idx) in root.iter().enumerate() {
            let mut b = bits(7 - k, SHARED);
            b.resize(FIXTURE_DEPTH, 0);
            branches[idx] = b;
        }
        for j in 0..sigma {
            for (gamma, &on_right) in side.iter().enumerate() {
                let mut b = bits(j, SHARED);
                b.resize(split_depth[j], 0);
                b.push(u8::from(on_right));
                b.extend(bits(gamma, 3));
                b.resize(FIXTURE_DEPTH, 0);
                branches[base + j * gammas + gamma] = b;
            }
        }
        let family = BranchFamily::new(2, branches).expect("fixture branches are distinct");
        ExtractionFixture {
            family: Arc::new(family),
            sigma,
            gammas,
            side,
            split_depth,
            root,
            base,
        }
    }

    /// `y_γ(j)`.
    pub fn y(&self, gamma: usize, j: usize) -> usize {
        self.base + j * self.gammas + gamma
    }

    /// `x_γ = r ∪ y_γ`, increasing.
    pub fn x(&self, gamma: usize) -> Vec<usize> {
        let mut out = self.root.clone();
        out.extend((0..self.sigma).map(|j| self.y(gamma, j)));
        out.sort_unstable();
        out
    }

    /// `j* = min{j : dom(s_j) = max dom(s_·)}`.
    pub fn j_star(&self) -> usize {
        let deepest = *self.split_depth.iter().max().expect("σ ≥ 1");
        self.split_depth.iter().position(|&d| d == deepest).expect("max attained")
    }

    /// Increasing tuples of `γ` that meet both sides.
    pub fn cross_tuples(&self, arity: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        self.collect_tuples(arity, 0, &mut current, &mut out);
        out
    }

    fn collect_tuples(&self, arity: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == arity {
            let left = current.iter().any(|&g| !self.side[g]);
            let right = current.iter().any(|&g| self.side[g]);
            if left && right {
                out.push(current.clone());
            }
            return;
        }
        for g in start..self.gammas {
            current.push(g);
            self.collect_tuples(arity, g + 1, current, out);
            current.pop();
        }
    }

    /// Every `z` with `⋃ y_γ ⊆ z ⊆ ⋃ x_γ` over `γ` in the tuple, that is
    /// the petals together with any part of the root, with the claimed value
    /// `⟨y_γ(j*) : γ ∈ tuple⟩`. For pairs these are exactly the sets between
    /// `x_γ △ x_γ′` and `x_γ ∪ x_γ′`.
    pub fn admissible_sets(&self, tuple: &[usize]) -> (Vec<usize>, Vec<Vec<usize>>) {
        let js = self.j_star();
        let target: Vec<usize> = tuple.iter().map(|&g| self.y(g, js)).collect();
        let petals: Vec<usize> = tuple
            .iter()
            .flat_map(|&g| (0..self.sigma).map(move |j| (g, j)))
            .map(|(g, j)| self.y(g, j))
            .collect();
        let mut sets = Vec::with_capacity(1 << self.root.len());
        for mask in 0u32..(1 << self.root.len()) {
            let mut z = petals.clone();
            z.extend(self.root.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &i)| i));
            z.sort_unstable();
            sets.push(z);
        }
        (target, sets)
    }
}

fn bits(value: usize, width: usize) -> Vec<u8> {
    (0..width).rev().map(|k| (value >> k & 1) as u8).collect()
}

/// Every fixture with `1 ≤ σ ≤ max_sigma`, `2 ≤ |Γ₀ ∪ Γ₁| ≤ max_gammas`,
/// each two-sided split of the `γ`, each choice of `dom(s_j) ∈ {3, 4}` and
/// each root placement.
pub fn extraction_fixtures(max_sigma: usize, max_gammas: usize) -> Vec<ExtractionFixture> {
    assert!(max_gammas <= 8, "γ is encoded in three bits");
    assert!(max_sigma <= 6, "t_j is encoded in three bits below the root nodes");
    let mut out = Vec::new();
    for sigma in 1..=max_sigma {
        for gammas in 2..=max_gammas {
            for mask in 1..(1u32 << gammas) - 1 {
                let side: Vec<bool> = (0..gammas).map(|g| mask >> g & 1 == 1).collect();
                for depths in 0..(1u32 << sigma) {
                    let split_depth: Vec<usize> = (0..sigma).map(|j| SHARED + (depths >> j & 1) as usize).collect();
                    for placement in [RootPlacement::Absent, RootPlacement::Front, RootPlacement::Back] {
                        out.push(ExtractionFixture::build(sigma, side.clone(), split_depth.clone(), placement));
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extraction::ExtractionMap;

    #[test]
    fn fixture_layout() {
        let f = ExtractionFixture::build(2, vec![false, true, true], vec![3, 4], RootPlacement::Front);
        assert_eq!(f.family.len(), 8);
        assert_eq!(f.x(1), vec![0, 1, 3, 6]);
        assert_eq!(f.j_star(), 1);
        assert_eq!(f.cross_tuples(2), vec![vec![0, 1], vec![0, 2]]);
        assert_eq!(f.family.delta_unchecked(f.y(0, 1), f.y(1, 1)), 4);
        assert_eq!(f.family.delta_unchecked(f.y(0, 0), f.y(1, 0)), 3);
        let (target, sets) = f.admissible_sets(&[0, 2]);
        assert_eq!(target, vec![5, 7]);
        assert_eq!(sets.len(), 4);
        assert_eq!(sets[0], vec![2, 4, 5, 7]);
        assert_eq!(sets[3], vec![0, 1, 2, 4, 5, 7]);
    }

    #[test]
    fn claim_holds_on_a_small_fixture() {
        let f = ExtractionFixture::build(2, vec![true, false, true], vec![4, 4], RootPlacement::Back);
        let map = ExtractionMap::new(f.family.clone(), 2).unwrap();
        for tuple in f.cross_tuples(2) {
            let (target, sets) = f.admissible_sets(&tuple);
            for z in sets {
                assert_eq!(map.extract(&z).unwrap(), target);
            }
        }
    }
}
