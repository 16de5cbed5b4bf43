//! Symbolic closed sets of ordinals.
//!
//! A [`ClosedSet`] is a finite union of order-separated blocks, each either a
//! single point or a *ladder* `{top[n] : n ≥ from}` built from the canonical
//! fundamental sequence of a limit `top`, or else the full interval
//! `{γ : 0 < γ < β}`. Every query is answered lazily, so infinite sets cost
//! nothing to hold. Ladder searches use exponential then binary search on `n`.

use std::fmt;

use crate::error::{Error, Result};
use crate::ordinal::Ordinal;

/// How the set was built.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SetKind {
    Finite,
    Fundamental,
    Full,
    Table,
}

/// A maximal order-convex piece of the representation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Block {
    Point(Ordinal),
    /// `{top.fund_seq(n) : n ≥ from}`; `top` itself is not a member.
    Ladder { top: Ordinal, from: u64 },
}

impl Block {
    pub fn ladder(top: Ordinal) -> Self {
        Block::Ladder { top, from: 1 }
    }

    /// Least element of the block.
    pub fn start(&self) -> Ordinal {
        match self {
            Block::Point(p) => p.clone(),
            Block::Ladder { top, from } => ladder_elem(top, *from),
        }
    }

    /// Supremum of the block.
    pub fn end(&self) -> &Ordinal {
        match self {
            Block::Point(p) => p,
            Block::Ladder { top, .. } => top,
        }
    }
}

/// A closed subset of its bound, held symbolically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClosedSet {
    kind: SetKind,
    bound: Ordinal,
    // unused for `SetKind::Full`
    blocks: Vec<Block>,
}

fn ladder_elem(top: &Ordinal, n: u64) -> Ordinal {
    top.fund_seq(n).expect("ladder tops are limits and n ≥ 1")
}

/// Least `n ≥ from` with `top[n] ≥ target`; `None` when `target ≥ top`.
fn ladder_index_at_least(top: &Ordinal, from: u64, target: &Ordinal) -> Option<u64> {
    if target >= top {
        return None;
    }
    if ladder_elem(top, from) >= *target {
        return Some(from);
    }
    let (mut lo, mut hi) = (from, from);
    while ladder_elem(top, hi) < *target {
        lo = hi;
        hi = hi.checked_mul(2).expect("ladder index overflows u64");
    }
    // invariant: top[lo] < target <= top[hi]
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ladder_elem(top, mid) < *target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(hi)
}

impl ClosedSet {
    pub fn empty() -> Self {
        ClosedSet {
            kind: SetKind::Finite,
            bound: Ordinal::zero(),
            blocks: Vec::new(),
        }
    }

    /// A finite set; its bound is `max + 1` (0 when empty).
    pub fn finite(points: impl IntoIterator<Item = Ordinal>) -> Self {
        let mut points: Vec<Ordinal> = points.into_iter().collect();
        points.sort();
        points.dedup();
        let bound = points.last().map(Ordinal::succ).unwrap_or_default();
        ClosedSet {
            kind: SetKind::Finite,
            bound,
            blocks: points.into_iter().map(Block::Point).collect(),
        }
    }

    /// Finite set of naturals.
    pub fn from_naturals(points: impl IntoIterator<Item = u64>) -> Self {
        Self::finite(points.into_iter().map(Ordinal::nat))
    }

    /// `{β[n] : n ≥ 1}` for a limit `β`.
    pub fn fundamental(beta: &Ordinal) -> Result<Self> {
        if !beta.is_limit() {
            return Err(Error::NotLimit(beta.to_string()));
        }
        Ok(ClosedSet {
            kind: SetKind::Fundamental,
            bound: beta.clone(),
            blocks: vec![Block::ladder(beta.clone())],
        })
    }

    /// `{γ : 0 < γ < β}`.
    pub fn full(beta: &Ordinal) -> Self {
        ClosedSet {
            kind: SetKind::Full,
            bound: beta.clone(),
            blocks: Vec::new(),
        }
    }

    /// A finite union of points and ladders, closed in `bound`.
    ///
    /// Ladder tops lying below `bound` are added as points. Blocks must not
    /// interleave, every element must lie below `bound`, and the supremum must
    /// equal `sup(bound)`.
    pub fn table(bound: &Ordinal, blocks: impl IntoIterator<Item = Block>) -> Result<Self> {
        let mut ladders = Vec::new();
        let mut points = Vec::new();
        for block in blocks {
            match block {
                Block::Point(p) => {
                    if p >= *bound {
                        return Err(Error::InvalidSet(format!("point {p} is not below {bound}")));
                    }
                    points.push(p);
                }
                Block::Ladder { top, from } => {
                    if !top.is_limit() || from == 0 || top > *bound {
                        return Err(Error::InvalidSet(format!(
                            "ladder below {top} from {from} is invalid under bound {bound}"
                        )));
                    }
                    if top < *bound {
                        points.push(top.clone());
                    }
                    ladders.push((top, from));
                }
            }
        }
        points.retain(|p| {
            !ladders.iter().any(|(top, from)| {
                ladder_index_at_least(top, *from, p).is_some_and(|n| ladder_elem(top, n) == *p)
            })
        });
        points.sort();
        points.dedup();
        let mut blocks: Vec<Block> = points.into_iter().map(Block::Point).collect();
        blocks.extend(ladders.into_iter().map(|(top, from)| Block::Ladder { top, from }));
        blocks.sort_by_key(Block::start);
        for pair in blocks.windows(2) {
            if pair[0].end() > &pair[1].start() {
                return Err(Error::InvalidSet(format!(
                    "blocks {:?} and {:?} interleave",
                    pair[0], pair[1]
                )));
            }
        }
        let set = ClosedSet {
            kind: SetKind::Table,
            bound: bound.clone(),
            blocks,
        };
        if set.sup() != bound.set_sup() {
            return Err(Error::InvalidSet(format!(
                "supremum {} differs from sup({bound})",
                set.sup()
            )));
        }
        Ok(set)
    }

    pub fn kind(&self) -> SetKind {
        self.kind
    }

    pub fn bound(&self) -> &Ordinal {
        &self.bound
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn is_empty(&self) -> bool {
        match self.kind {
            SetKind::Full => self.bound <= Ordinal::one(),
            _ => self.blocks.is_empty(),
        }
    }

    pub fn contains(&self, gamma: &Ordinal) -> bool {
        if self.kind == SetKind::Full {
            return !gamma.is_zero() && gamma < &self.bound;
        }
        self.blocks.iter().any(|b| match b {
            Block::Point(p) => p == gamma,
            Block::Ladder { top, from } => ladder_index_at_least(top, *from, gamma)
                .is_some_and(|n| ladder_elem(top, n) == *gamma),
        })
    }

    /// `min(S ∖ γ)`, the least element `≥ γ`.
    pub fn min_above(&self, gamma: &Ordinal) -> Option<Ordinal> {
        if self.kind == SetKind::Full {
            let candidate = if gamma.is_zero() { Ordinal::one() } else { gamma.clone() };
            return (candidate < self.bound).then_some(candidate);
        }
        self.blocks.iter().find_map(|b| match b {
            Block::Point(p) => (p >= gamma).then(|| p.clone()),
            Block::Ladder { top, from } => {
                ladder_index_at_least(top, *from, gamma).map(|n| ladder_elem(top, n))
            }
        })
    }

    /// `sup(S ∩ γ)`; 0 when `S ∩ γ` is empty.
    pub fn sup_below(&self, gamma: &Ordinal) -> Ordinal {
        if self.kind == SetKind::Full {
            return std::cmp::min(gamma, &self.bound).set_sup();
        }
        let mut sup = Ordinal::zero();
        for b in &self.blocks {
            match b {
                Block::Point(p) => {
                    if p >= gamma {
                        break;
                    }
                    sup = p.clone();
                }
                Block::Ladder { top, from } => {
                    if b.start() >= *gamma {
                        break;
                    }
                    match ladder_index_at_least(top, *from, gamma) {
                        None => sup = top.clone(),
                        Some(n) => {
                            sup = ladder_elem(top, n - 1);
                            break;
                        }
                    }
                }
            }
        }
        sup
    }

    /// Order type of `S ∩ γ`.
    pub fn otp_below(&self, gamma: &Ordinal) -> Ordinal {
        if self.kind == SetKind::Full {
            let m = std::cmp::min(gamma, &self.bound);
            return match m.as_finite() {
                Some(k) => Ordinal::nat(k.saturating_sub(1)),
                None => m.clone(),
            };
        }
        let mut otp = Ordinal::zero();
        for b in &self.blocks {
            match b {
                Block::Point(p) => {
                    if p >= gamma {
                        break;
                    }
                    otp = otp.add_nat(1);
                }
                Block::Ladder { top, from } => match ladder_index_at_least(top, *from, gamma) {
                    None => otp = &otp + &Ordinal::omega(),
                    Some(n) => {
                        otp = otp.add_nat(n - from);
                        break;
                    }
                },
            }
        }
        otp
    }

    /// `γ ∈ acc(S)`: `sup(S ∩ γ) = γ > 0`.
    pub fn acc_contains(&self, gamma: &Ordinal) -> bool {
        !gamma.is_zero() && self.sup_below(gamma) == *gamma
    }

    /// Supremum of the whole set.
    pub fn sup(&self) -> Ordinal {
        match self.kind {
            SetKind::Full => self.bound.set_sup(),
            _ => self.blocks.last().map(|b| b.end().clone()).unwrap_or_default(),
        }
    }

    /// Largest element, if one exists.
    pub fn max(&self) -> Option<Ordinal> {
        match self.kind {
            SetKind::Full => self.bound.pred().filter(|p| !p.is_zero()),
            _ => match self.blocks.last()? {
                Block::Point(p) => Some(p.clone()),
                Block::Ladder { .. } => None,
            },
        }
    }

    /// The elements in `[lo, hi)` in increasing order, or `None` when there
    /// are infinitely many.
    pub fn elements_in(&self, lo: &Ordinal, hi: &Ordinal) -> Option<Vec<Ordinal>> {
        if lo >= hi {
            return Some(Vec::new());
        }
        if self.kind == SetKind::Full {
            let lo = std::cmp::max(lo.clone(), Ordinal::one());
            let hi = std::cmp::min(hi, &self.bound);
            if lo >= *hi {
                return Some(Vec::new());
            }
            let k = Ordinal::finite_distance(&lo, hi)?;
            return Some((0..k).map(|i| lo.add_nat(i)).collect());
        }
        let mut out = Vec::new();
        for b in &self.blocks {
            match b {
                Block::Point(p) => {
                    if p >= hi {
                        break;
                    }
                    if p >= lo {
                        out.push(p.clone());
                    }
                }
                Block::Ladder { top, from } => {
                    if b.start() >= *hi {
                        break;
                    }
                    if top <= lo {
                        continue;
                    }
                    let first = ladder_index_at_least(top, *from, lo).expect("lo is below top");
                    let last = ladder_index_at_least(top, *from, hi)?;
                    out.extend((first..last).map(|n| ladder_elem(top, n)));
                }
            }
        }
        Some(out)
    }

    /// The elements below `γ`, or `None` when there are infinitely many.
    pub fn elements_below(&self, gamma: &Ordinal) -> Option<Vec<Ordinal>> {
        self.elements_in(&Ordinal::zero(), gamma)
    }
}

impl fmt::Display for ClosedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.kind == SetKind::Full {
            return write!(f, "(0, {})", self.bound);
        }
        f.write_str("{")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            match b {
                Block::Point(p) => write!(f, "{p}")?,
                Block::Ladder { top, from } => write!(f, "{top}[n≥{from}]")?,
            }
        }
        f.write_str("}")
    }
}
