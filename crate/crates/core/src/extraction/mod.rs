//! Extraction maps and the finite-set colorings composed from them.
//!
//! An [`ExtractionMap`] picks from a finite index set `z` the pair (or
//! triple) whose branches split latest, with ties going to the
//! lexicographically least tuple. [`compose_d`] colors `z` through such a
//! map; [`s2_direct_d`] is the direct coloring read off consecutive pairs.

mod delta_system;
pub mod fixtures;

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use crate::branches::BranchFamily;
use crate::error::{Error, Result};

pub use delta_system::{
    find_delta_system, DeltaSystem, SearchMethod, EXACT_FAMILY_LIMIT, EXACT_NODE_BUDGET,
    EXACT_SET_LIMIT,
};

/// Families up to this size get a precomputed `Δ` table.
pub const DELTA_TABLE_LIMIT: usize = 4096;

/// How non-singleton `M_z*` is resolved.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieBreak {
    #[default]
    LexLeast,
}

/// `e : [κ]^{<ω} → ⁿκ` for `n ∈ {2, 3}` over a branch family.
#[derive(Clone, Debug)]
pub struct ExtractionMap {
    family: Arc<BranchFamily>,
    arity: usize,
    tie_break: TieBreak,
    table: Option<Arc<Vec<u16>>>,
}

impl ExtractionMap {
    pub fn new(family: Arc<BranchFamily>, arity: usize) -> Result<Self> {
        if !(2..=3).contains(&arity) {
            return Err(Error::Precondition(format!("extraction arity must be 2 or 3, got {arity}")));
        }
        let n = family.len();
        let table = (n <= DELTA_TABLE_LIMIT && family.depth() <= usize::from(u16::MAX)).then(|| {
            let mut t = vec![0u16; n * n];
            for a in 0..n {
                for b in a + 1..n {
                    let d = family.delta_unchecked(a, b) as u16;
                    t[a * n + b] = d;
                    t[b * n + a] = d;
                }
            }
            Arc::new(t)
        });
        Ok(ExtractionMap {
            family,
            arity,
            tie_break: TieBreak::LexLeast,
            table,
        })
    }

    pub fn family(&self) -> &Arc<BranchFamily> {
        &self.family
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn tie_break(&self) -> TieBreak {
        self.tie_break
    }

    #[inline]
    fn delta(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => usize::from(t[a * self.family.len() + b]),
            None => self.family.delta_unchecked(a, b),
        }
    }

    fn normalize(&self, z: &[usize], at_least: usize) -> Result<Vec<usize>> {
        let set: BTreeSet<usize> = z.iter().copied().collect();
        if let Some(&index) = set.iter().find(|&&i| i >= self.family.len()) {
            return Err(Error::IndexOutOfRange {
                index,
                size: self.family.len(),
            });
        }
        if set.len() < at_least {
            return Err(Error::Precondition(format!(
                "extraction needs at least {at_least} indices, got {}",
                set.len()
            )));
        }
        Ok(set.into_iter().collect())
    }

    /// `(M_z, M_z*)`: the pairs of `z` with maximal `Δ`, and those among
    /// them with least first coordinate.
    pub fn mz_pairs(&self, z: &[usize]) -> Result<(Vec<(usize, usize)>, Vec<(usize, usize)>)> {
        let z = self.normalize(z, 2)?;
        let mut best = 0;
        let mut argmax = Vec::new();
        for (k, &a) in z.iter().enumerate() {
            for &b in &z[k + 1..] {
                let d = self.delta(a, b);
                if d > best || argmax.is_empty() {
                    best = d;
                    argmax.clear();
                }
                if d == best {
                    argmax.push((a, b));
                }
            }
        }
        let first = argmax[0].0;
        let starred = argmax.iter().copied().filter(|p| p.0 == first).collect();
        Ok((argmax, starred))
    }

    /// The lexicographically least pair of `M_z*`.
    pub fn e2(&self, z: &[usize]) -> Result<(usize, usize)> {
        let z = self.normalize(z, 2)?;
        Ok(self.e2_sorted(&z))
    }

    fn e2_sorted(&self, z: &[usize]) -> (usize, usize) {
        let mut best = (z[0], z[1]);
        let mut best_delta = self.delta(z[0], z[1]);
        for (k, &a) in z.iter().enumerate() {
            for &b in &z[k + 1..] {
                let d = self.delta(a, b);
                if d > best_delta {
                    best_delta = d;
                    best = (a, b);
                }
            }
        }
        best
    }

    /// `(M_z, M_z*)` for triples ranked by `Δ₂`, the least pairwise `Δ`.
    pub fn mz_triples(
        &self,
        z: &[usize],
    ) -> Result<(Vec<(usize, usize, usize)>, Vec<(usize, usize, usize)>)> {
        let z = self.normalize(z, 3)?;
        let mut best = 0;
        let mut argmax = Vec::new();
        for (i, &a) in z.iter().enumerate() {
            for (j, &b) in z.iter().enumerate().skip(i + 1) {
                for &c in &z[j + 1..] {
                    let d = self.delta(a, b).min(self.delta(a, c)).min(self.delta(b, c));
                    if d > best || argmax.is_empty() {
                        best = d;
                        argmax.clear();
                    }
                    if d == best {
                        argmax.push((a, b, c));
                    }
                }
            }
        }
        let first = argmax[0].0;
        let starred = argmax.iter().copied().filter(|t| t.0 == first).collect();
        Ok((argmax, starred))
    }

    /// The lexicographically least triple of `M_z*`.
    pub fn e3(&self, z: &[usize]) -> Result<(usize, usize, usize)> {
        let z = self.normalize(z, 3)?;
        Ok(self.e3_sorted(&z))
    }

    fn e3_sorted(&self, z: &[usize]) -> (usize, usize, usize) {
        let mut best = (z[0], z[1], z[2]);
        let mut best_delta = self.delta(z[0], z[1]).min(self.delta(z[0], z[2])).min(self.delta(z[1], z[2]));
        for (i, &a) in z.iter().enumerate() {
            for (j, &b) in z.iter().enumerate().skip(i + 1) {
                let ab = self.delta(a, b);
                if ab <= best_delta {
                    continue;
                }
                for &c in &z[j + 1..] {
                    let d = ab.min(self.delta(a, c)).min(self.delta(b, c));
                    if d > best_delta {
                        best_delta = d;
                        best = (a, b, c);
                    }
                }
            }
        }
        best
    }

    /// `e(z)` as a strictly increasing index list of length `arity`.
    pub fn extract(&self, z: &[usize]) -> Result<Vec<usize>> {
        let z = self.normalize(z, self.arity)?;
        Ok(self.extract_sorted(&z))
    }

    /// [`ExtractionMap::extract`] on a strictly increasing, in-range `z`
    /// with at least `arity` members.
    pub fn extract_sorted(&self, z: &[usize]) -> Vec<usize> {
        debug_assert!(z.windows(2).all(|w| w[0] < w[1]) && z.len() >= self.arity);
        match self.arity {
            2 => {
                let (a, b) = self.e2_sorted(z);
                vec![a, b]
            }
            _ => {
                let (a, b, c) = self.e3_sorted(z);
                vec![a, b, c]
            }
        }
    }
}

/// `d = c ∘ e`; sets below the map's arity get `K::default()`.
pub fn compose_d<K, C>(coloring: C, map: &ExtractionMap, z: &[usize]) -> Result<K>
where
    K: Default,
    C: Fn(&[usize]) -> K,
{
    let distinct: BTreeSet<usize> = z.iter().copied().collect();
    if distinct.len() < map.arity() {
        return Ok(K::default());
    }
    Ok(coloring(&map.extract(z)?))
}

/// The direct coloring: `c₀` at the consecutive pair `(α_j, α_{j+1})` of
/// the increasing enumeration of `z` where `c₁` is maximal, least `j` on
/// ties; sets of fewer than two points get `K::default()`.
pub fn s2_direct_d<T, K, C0, C1>(c0: C0, c1: C1, z: &[T]) -> K
where
    T: Ord,
    K: Default,
    C0: Fn(&T, &T) -> K,
    C1: Fn(&T, &T) -> u64,
{
    let sorted: BTreeSet<&T> = z.iter().collect();
    let points: Vec<&T> = sorted.into_iter().collect();
    match consecutive_argmax(&points, &c1) {
        Some(j) => c0(points[j], points[j + 1]),
        None => K::default(),
    }
}

/// `j_z`: least index of a maximal `c₁` value on consecutive pairs.
pub fn consecutive_argmax<T, C1: Fn(&T, &T) -> u64>(points: &[&T], c1: &C1) -> Option<usize> {
    let mut best: Option<(usize, u64)> = None;
    for (j, w) in points.windows(2).enumerate() {
        let v = c1(w[0], w[1]);
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((j, v));
        }
    }
    best.map(|(j, _)| j)
}

/// Pinned-union evaluation relating an `S_n` coloring to `S_{n+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftEvaluation<K> {
    /// `a_j ∪ x` for each given member.
    pub lifted: Vec<BTreeSet<u64>>,
    /// `a′_0 △ ⋃_{0<j<n} a′_j`.
    pub lifted_lower: BTreeSet<u64>,
    /// `⋃_{j<n} a′_j`.
    pub lifted_upper: BTreeSet<u64>,
    /// `a_0 △ ⋃_{0<j≤n} a_j` with `a_n = x`.
    pub lower: BTreeSet<u64>,
    /// `⋃_{j≤n} a_j` with `a_n = x`.
    pub upper: BTreeSet<u64>,
    /// `lifted_lower ⊆ lower` and `lifted_upper = upper`.
    pub chain_holds: bool,
    /// `d(lower)`.
    pub at_lower: K,
    /// `d(upper)`.
    pub at_upper: K,
}

fn symmetric_over_rest(sets: &[BTreeSet<u64>]) -> BTreeSet<u64> {
    let rest: BTreeSet<u64> = sets[1..].iter().flatten().copied().collect();
    sets[0].symmetric_difference(&rest).copied().collect()
}

/// Pins `x`, lifts each `a_j` to `a_j ∪ x` and evaluates `d` at both ends
/// of the widened interval `a_0 △ ⋃_{0<j≤n} a_j ⊆ z ⊆ ⋃_{j≤n} a_j`, after
/// checking that it contains the lifted interval.
pub fn sn_monotone_lift<K, D>(d: D, pinned: &BTreeSet<u64>, members: &[BTreeSet<u64>]) -> Result<LiftEvaluation<K>>
where
    D: Fn(&BTreeSet<u64>) -> K,
{
    if members.len() < 2 {
        return Err(Error::Precondition(format!(
            "the lift needs at least two members, got {}",
            members.len()
        )));
    }
    if members.iter().any(|a| a == pinned) {
        return Err(Error::Precondition("members must differ from the pinned set".into()));
    }
    let lifted: Vec<BTreeSet<u64>> = members.iter().map(|a| a | pinned).collect();
    let lifted_lower = symmetric_over_rest(&lifted);
    let lifted_upper: BTreeSet<u64> = lifted.iter().flatten().copied().collect();
    let mut extended = members.to_vec();
    extended.push(pinned.clone());
    let lower = symmetric_over_rest(&extended);
    let upper: BTreeSet<u64> = extended.iter().flatten().copied().collect();
    let chain_holds = lifted_lower.is_subset(&lower) && lifted_upper == upper;
    Ok(LiftEvaluation {
        at_lower: d(&lower),
        at_upper: d(&upper),
        lifted,
        lifted_lower,
        lifted_upper,
        lower,
        upper,
        chain_holds,
    })
}
