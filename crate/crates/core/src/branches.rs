//! Fixed-depth branch families over a finite alphabet.
//!
//! A [`BranchFamily`] is an injective list of sequences of one common length
//! `D` over `{0, …, m−1}`, indexed by position. It supplies the splitting
//! level `Δ`, the lexicographic order, the Δ-coloring, the Sierpiński
//! coloring, the family-separation pigeonhole and the splitter search.
//!
//! Families serialize as JSON arrays of symbol strings, one character per
//! symbol (`0`–`9` then `a`–`z`).

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported alphabet.
pub const MAX_ALPHABET: u8 = 36;

/// First position where `f` and `g` differ, or the shorter length when one
/// extends the other.
pub fn delta(f: &[u8], g: &[u8]) -> usize {
    f.iter()
        .zip(g)
        .position(|(a, b)| a != b)
        .unwrap_or(f.len().min(g.len()))
}

/// `f <_lex g`: `f(Δ) < g(Δ)` at `Δ = Δ(f,g)`.
pub fn lex_less(f: &[u8], g: &[u8]) -> Result<bool> {
    let d = delta(f, g);
    if d == f.len() || d == g.len() {
        return Err(Error::Precondition(
            "lexicographic comparison of a sequence with its own extension".into(),
        ));
    }
    Ok(f[d] < g[d])
}

fn symbol_char(s: u8) -> char {
    char::from_digit(u32::from(s), 36).expect("symbol below 36")
}

fn char_symbol(c: char) -> Option<u8> {
    c.to_digit(36).map(|d| d as u8)
}

/// Renders a sequence as a symbol string.
pub fn render(seq: &[u8]) -> String {
    seq.iter().map(|&s| symbol_char(s)).collect()
}

/// Parses a symbol string.
pub fn parse_branch(text: &str) -> Result<Vec<u8>> {
    text.chars()
        .map(|c| {
            char_symbol(c.to_ascii_lowercase())
                .ok_or_else(|| Error::InvalidFamily(format!("bad symbol '{c}' in \"{text}\"")))
        })
        .collect()
}

/// An injective family of equal-length sequences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchFamily {
    depth: usize,
    alphabet: u8,
    branches: Vec<Vec<u8>>,
}

impl BranchFamily {
    /// Validates uniform depth, injectivity and the alphabet bound.
    pub fn new(alphabet: u8, branches: Vec<Vec<u8>>) -> Result<Self> {
        if !(2..=MAX_ALPHABET).contains(&alphabet) {
            return Err(Error::InvalidFamily(format!(
                "alphabet size must lie in 2..={MAX_ALPHABET}, got {alphabet}"
            )));
        }
        let depth = branches.first().map_or(0, Vec::len);
        let mut seen = HashSet::new();
        for b in &branches {
            if b.len() != depth {
                return Err(Error::InvalidFamily(format!(
                    "branch {} has length {}, expected {depth}",
                    render(b),
                    b.len()
                )));
            }
            if let Some(&s) = b.iter().find(|&&s| s >= alphabet) {
                return Err(Error::InvalidFamily(format!(
                    "symbol {s} outside alphabet of size {alphabet}"
                )));
            }
            if !seen.insert(b.as_slice()) {
                return Err(Error::InvalidFamily(format!("duplicate branch {}", render(b))));
            }
        }
        Ok(BranchFamily {
            depth,
            alphabet,
            branches,
        })
    }

    /// Builds a family from symbol strings, inferring the alphabet.
    pub fn from_strings<S: AsRef<str>>(texts: &[S]) -> Result<Self> {
        let branches = texts
            .iter()
            .map(|t| parse_branch(t.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        let alphabet = branches.iter().flatten().copied().max().map_or(2, |m| (m + 1).max(2));
        Self::new(alphabet, branches)
    }

    /// All `m^depth` sequences in lexicographic order.
    pub fn complete(alphabet: u8, depth: usize) -> Result<Self> {
        let mut branches = vec![Vec::new()];
        for _ in 0..depth {
            branches = branches
                .into_iter()
                .flat_map(|b: Vec<u8>| {
                    (0..alphabet).map(move |s| {
                        let mut next = b.clone();
                        next.push(s);
                        next
                    })
                })
                .collect();
        }
        Self::new(alphabet, branches)
    }

    /// `size` distinct random sequences of length `depth`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, alphabet: u8, depth: usize, size: usize) -> Result<Self> {
        let capacity = (alphabet as f64).powi(depth as i32);
        if (size as f64) > capacity {
            return Err(Error::InvalidFamily(format!(
                "cannot draw {size} distinct branches of depth {depth} over {alphabet} symbols"
            )));
        }
        let mut seen = HashSet::new();
        let mut branches = Vec::with_capacity(size);
        while branches.len() < size {
            let b: Vec<u8> = (0..depth).map(|_| rng.gen_range(0..alphabet)).collect();
            if seen.insert(b.clone()) {
                branches.push(b);
            }
        }
        Self::new(alphabet, branches)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidFamily(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("string arrays serialize")
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn alphabet(&self) -> u8 {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.branches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }

    pub fn branches(&self) -> &[Vec<u8>] {
        &self.branches
    }

    pub fn branch(&self, index: usize) -> Result<&[u8]> {
        self.branches
            .get(index)
            .map(Vec::as_slice)
            .ok_or(Error::IndexOutOfRange {
                index,
                size: self.branches.len(),
            })
    }

    /// `Δ(b_ξ, b_ξ′)` without validation; panics on a bad index.
    pub fn delta_unchecked(&self, a: usize, b: usize) -> usize {
        delta(&self.branches[a], &self.branches[b])
    }

    /// `b_ξ <_lex b_ξ′` for distinct indices; panics on a bad index.
    pub fn lex_less_unchecked(&self, a: usize, b: usize) -> bool {
        let (f, g) = (&self.branches[a], &self.branches[b]);
        let d = delta(f, g);
        f[d] < g[d]
    }

    fn check(&self, indices: &[usize]) -> Result<()> {
        match indices.iter().find(|&&i| i >= self.len()) {
            Some(&index) => Err(Error::IndexOutOfRange {
                index,
                size: self.len(),
            }),
            None => Ok(()),
        }
    }
}

impl Serialize for BranchFamily {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.branches.iter().map(|b| render(b)))
    }
}

impl<'de> Deserialize<'de> for BranchFamily {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        BranchFamily::from_strings(&texts).map_err(serde::de::Error::custom)
    }
}

/// `c(ξ,ξ′) = Δ(b_ξ, b_ξ′)`.
pub fn delta_coloring(family: &BranchFamily, a: usize, b: usize) -> Result<usize> {
    family.check(&[a, b])?;
    if a == b {
        return Err(Error::Precondition(format!("Δ-coloring needs distinct indices, got {a} twice")));
    }
    Ok(family.delta_unchecked(a, b))
}

/// 1 iff `b_ξ <_lex b_ξ′`, for `ξ < ξ′`.
pub fn sierpinski_color(family: &BranchFamily, a: usize, b: usize) -> Result<u8> {
    family.check(&[a, b])?;
    if a >= b {
        return Err(Error::Order(format!("Sierpiński coloring needs {a} < {b}")));
    }
    Ok(u8::from(family.lex_less_unchecked(a, b)))
}

/// How a [`SeparationWitness`] was found.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeparationMethod {
    /// Modal splitting level, then modal prefix pair, over paired members.
    Pigeonhole,
    /// Scan of every node and symbol pair, used when the pigeonhole misses.
    Exhaustive,
}

/// A node `s` and symbols `i ≠ i′` separating two selections.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparationWitness {
    pub node: Vec<u8>,
    pub left_symbol: u8,
    pub right_symbol: u8,
    /// Members of `A` extending `s⌢⟨i⟩`.
    pub left: Vec<usize>,
    /// Members of `B` extending `s⌢⟨i′⟩`.
    pub right: Vec<usize>,
    pub method: SeparationMethod,
}

impl SeparationWitness {
    /// Checks the witness invariants against `family`.
    pub fn verify(&self, family: &BranchFamily, floor: usize) -> bool {
        let extends = |idx: &usize, sym: u8| {
            family.branches.get(*idx).is_some_and(|b| {
                b.len() > self.node.len() && b.starts_with(&self.node) && b[self.node.len()] == sym
            })
        };
        self.left_symbol != self.right_symbol
            && self.left.len() >= floor
            && self.right.len() >= floor
            && self.left.iter().all(|i| extends(i, self.left_symbol))
            && self.right.iter().all(|i| extends(i, self.right_symbol))
    }
}

fn select(family: &BranchFamily, members: &[usize], node: &[u8], sym: u8) -> Vec<usize> {
    members
        .iter()
        .copied()
        .filter(|&i| {
            let b = &family.branches[i];
            b.starts_with(node) && b[node.len()] == sym
        })
        .collect()
}

/// Finds `s` and `i ≠ i′` with at least `floor` members of `A` extending
/// `s⌢⟨i⟩` and at least `floor` members of `B` extending `s⌢⟨i′⟩`.
///
/// First runs the pigeonhole: pair `a_j` with `b_j`, take the modal
/// `δ_j = Δ(a_j,b_j)+1`, then the modal prefix pair
/// `(a_j↾δ, b_j↾δ) = (s⌢⟨i⟩, s⌢⟨i′⟩)`. Members shared by `A` and `B` are
/// dealt out alternately before pairing. If that candidate misses the floor,
/// every node and symbol pair is scanned instead.
pub fn separate_families(
    family: &BranchFamily,
    a: &[usize],
    b: &[usize],
    floor: usize,
) -> Result<Option<SeparationWitness>> {
    family.check(a)?;
    family.check(b)?;
    let a_set: BTreeSet<usize> = a.iter().copied().collect();
    let b_set: BTreeSet<usize> = b.iter().copied().collect();
    let shared: Vec<usize> = a_set.intersection(&b_set).copied().collect();
    let mut left: Vec<usize> = a_set.difference(&b_set).copied().collect();
    let mut right: Vec<usize> = b_set.difference(&a_set).copied().collect();
    for (k, &i) in shared.iter().enumerate() {
        if k % 2 == 0 {
            left.push(i);
        } else {
            right.push(i);
        }
    }
    left.sort_unstable();
    right.sort_unstable();

    let pairs: Vec<(usize, usize)> = left.iter().copied().zip(right.iter().copied()).collect();
    if !pairs.is_empty() {
        let mut by_level: BTreeMap<usize, usize> = BTreeMap::new();
        for &(x, y) in &pairs {
            *by_level.entry(family.delta_unchecked(x, y) + 1).or_default() += 1;
        }
        let level = modal(&by_level);
        let mut by_prefix: BTreeMap<(Vec<u8>, Vec<u8>), usize> = BTreeMap::new();
        for &(x, y) in &pairs {
            if family.delta_unchecked(x, y) + 1 == level {
                let key = (family.branches[x][..level].to_vec(), family.branches[y][..level].to_vec());
                *by_prefix.entry(key).or_default() += 1;
            }
        }
        let (left_prefix, right_prefix) = modal(&by_prefix);
        let node = left_prefix[..level - 1].to_vec();
        let (i, i2) = (left_prefix[level - 1], right_prefix[level - 1]);
        let witness = SeparationWitness {
            left: select(family, a, &node, i),
            right: select(family, b, &node, i2),
            node,
            left_symbol: i,
            right_symbol: i2,
            method: SeparationMethod::Pigeonhole,
        };
        if witness.verify(family, floor) {
            return Ok(Some(witness));
        }
    }

    let nodes: BTreeSet<&[u8]> = a
        .iter()
        .chain(b)
        .flat_map(|&i| (0..family.depth).map(move |len| &family.branches[i][..len]))
        .collect();
    for node in nodes {
        for i in 0..family.alphabet {
            let left = select_prefix(family, a, node, i);
            if left.len() < floor {
                continue;
            }
            for i2 in (0..family.alphabet).filter(|&s| s != i) {
                let right = select_prefix(family, b, node, i2);
                if right.len() >= floor {
                    let witness = SeparationWitness {
                        node: node.to_vec(),
                        left_symbol: i,
                        right_symbol: i2,
                        left,
                        right,
                        method: SeparationMethod::Exhaustive,
                    };
                    debug_assert!(witness.verify(family, floor));
                    return Ok(Some(witness));
                }
            }
        }
    }
    Ok(None)
}

fn select_prefix(family: &BranchFamily, members: &[usize], node: &[u8], sym: u8) -> Vec<usize> {
    let mut out = select(family, members, node, sym);
    out.sort_unstable();
    out.dedup();
    out
}

/// Most frequent key; ties go to the least key.
fn modal<K: Ord + Clone>(counts: &BTreeMap<K, usize>) -> K {
    let best = counts.values().copied().max().expect("nonempty counts");
    counts
        .iter()
        .find(|(_, &c)| c == best)
        .map(|(k, _)| k.clone())
        .expect("a key attains the maximum")
}

/// Every `x ∈ X` with the positions `δ` where `x(δ) = i` and
/// `|{y ∈ X : Δ(x,y) = δ}| ≥ floor`; members with no such `δ` are omitted.
pub fn find_splitters(
    family: &BranchFamily,
    members: &[usize],
    symbol: u8,
    floor: usize,
) -> Result<Vec<(usize, Vec<usize>)>> {
    family.check(members)?;
    let mut out = Vec::new();
    for &x in members {
        let mut counts = vec![0usize; family.depth];
        for &y in members {
            if y != x {
                let d = family.delta_unchecked(x, y);
                if d < family.depth {
                    counts[d] += 1;
                }
            }
        }
        let positions: Vec<usize> = (0..family.depth)
            .filter(|&d| family.branches[x][d] == symbol && counts[d] >= floor)
            .collect();
        if !positions.is_empty() {
            out.push((x, positions));
        }
    }
    Ok(out)
}

/// Default threshold `⌈|B|/2⌉`.
pub fn default_threshold(size: usize) -> usize {
    size.div_ceil(2)
}

/// Every prefix `t` (including the empty one) extended by at least `τ`
/// members of `B`.
pub fn subtree_threshold(
    family: &BranchFamily,
    members: &[usize],
    threshold: usize,
) -> Result<BTreeSet<Vec<u8>>> {
    family.check(members)?;
    if threshold == 0 {
        return Err(Error::Precondition("threshold must be at least 1".into()));
    }
    let mut counts: BTreeMap<&[u8], usize> = BTreeMap::new();
    let distinct: BTreeSet<usize> = members.iter().copied().collect();
    for &i in &distinct {
        for len in 0..=family.depth {
            *counts.entry(&family.branches[i][..len]).or_default() += 1;
        }
    }
    Ok(counts
        .into_iter()
        .filter(|&(_, c)| c >= threshold)
        .map(|(t, _)| t.to_vec())
        .collect())
}
