//! Oscillation of one set against another, and the three-dimensional
//! oscillation `osc̄` built on walks.
//!
//! For disjoint `y` and `z`, the *y-convex* pieces of `z` are the part of `z`
//! below `min y`, the part above `max y`, and the parts strictly between
//! consecutive elements of `y`. `Osc_ε(x,y)` is the list of nonempty
//! y-convex pieces of `x ∖ ε` when `y ∩ x ⊆ ε`, and empty otherwise.
//!
//! Pieces are found by walking cut points: from the least remaining element
//! of `x` jump to the next element of `y`, so symbolic sets with finitely
//! many pieces are handled without enumerating `x`.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::closed_set::ClosedSet;
use crate::cseq::CSequence;
use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::walks::walk;

/// Iteration ceiling for cut-point walks over symbolic sets.
pub const MAX_CUTS: usize = 1 << 20;

/// One side of a convex piece.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Cut {
    Unbounded,
    At(Ordinal),
}

/// `{ζ ∈ x ∖ ε : lower < ζ < upper}`, known to be nonempty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvexPiece {
    pub lower: Cut,
    pub upper: Cut,
    /// Least element of the piece.
    pub first: Ordinal,
}

impl ConvexPiece {
    /// Membership of `ζ` given the `x` and `ε` the piece was cut from.
    pub fn contains(&self, x: &ClosedSet, eps: &Ordinal, zeta: &Ordinal) -> bool {
        let above = match &self.lower {
            Cut::Unbounded => true,
            Cut::At(a) => zeta > a,
        };
        let below = match &self.upper {
            Cut::Unbounded => true,
            Cut::At(b) => zeta < b,
        };
        above && below && zeta >= eps && x.contains(zeta)
    }
}

/// `Osc_ε(x,y)` together with whether the guard `y ∩ x ⊆ ε` held.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OscResult {
    pub guard: bool,
    pub pieces: Vec<ConvexPiece>,
}

impl OscResult {
    /// `osc_ε(x,y)`; 0 when the guard fails.
    pub fn count(&self) -> usize {
        self.pieces.len()
    }
}

/// Whether `x` and `y` share an element `≥ ε`, by leapfrogging min-above queries.
fn meet_above(x: &ClosedSet, y: &ClosedSet, eps: &Ordinal) -> Result<bool> {
    let mut a = x.min_above(eps);
    for _ in 0..MAX_CUTS {
        let Some(av) = a else { return Ok(false) };
        let Some(bv) = y.min_above(&av) else { return Ok(false) };
        if bv == av {
            return Ok(true);
        }
        a = x.min_above(&bv);
    }
    Err(Error::NotEnumerable(format!(
        "intersection of {x} and {y} above {eps} exceeds {MAX_CUTS} probes"
    )))
}

/// `Osc_ε(x,y)`.
pub fn osc_pieces(x: &ClosedSet, y: &ClosedSet, eps: &Ordinal) -> Result<OscResult> {
    if meet_above(x, y, eps)? {
        return Ok(OscResult {
            guard: false,
            pieces: Vec::new(),
        });
    }
    let mut pieces = Vec::new();
    let Some(y_min) = y.min_above(&Ordinal::zero()) else {
        return Ok(OscResult {
            guard: true,
            pieces,
        });
    };
    let y_max = y.max();
    let mut lo = eps.clone();
    while let Some(first) = x.min_above(&lo) {
        if pieces.len() >= MAX_CUTS {
            return Err(Error::NotEnumerable(format!(
                "more than {MAX_CUTS} pieces of {x} against {y}"
            )));
        }
        match y.min_above(&first) {
            Some(upper) => {
                let lower = if y_min < upper {
                    Cut::At(y.sup_below(&upper))
                } else {
                    Cut::Unbounded
                };
                pieces.push(ConvexPiece {
                    lower,
                    upper: Cut::At(upper.clone()),
                    first,
                });
                // `upper` is in y and at or above ε, so not in x
                lo = upper;
            }
            None => {
                if let Some(m) = &y_max {
                    pieces.push(ConvexPiece {
                        lower: Cut::At(m.clone()),
                        upper: Cut::Unbounded,
                        first,
                    });
                }
                break;
            }
        }
    }
    Ok(OscResult {
        guard: true,
        pieces,
    })
}

fn require_increasing(alpha: &Ordinal, beta: &Ordinal, gamma: &Ordinal) -> Result<()> {
    if !(alpha < beta && beta < gamma) {
        return Err(Error::Order(format!("expected {alpha} < {beta} < {gamma}")));
    }
    Ok(())
}

/// `χ(α,β,γ) = max{k : Tr(α,γ)(k) = Tr(β,γ)(k)}`.
pub fn chi<P: CSequence + ?Sized>(
    p: &P,
    alpha: &Ordinal,
    beta: &Ordinal,
    gamma: &Ordinal,
) -> Result<usize> {
    require_increasing(alpha, beta, gamma)?;
    let to_alpha = walk(p, alpha, gamma)?;
    let to_beta = walk(p, beta, gamma)?;
    let horizon = to_alpha.len().max(to_beta.len());
    Ok((0..=horizon)
        .filter(|&k| to_alpha.at(k) == to_beta.at(k))
        .max()
        .expect("both walks start at γ"))
}

/// `osc̄(α,β,γ) = osc_α(C_{Tr(α,β)(χ)}, C_{Tr(α,γ)(χ)})` with `χ = χ(α,β,γ)`.
pub fn osc3<P: CSequence + ?Sized>(
    p: &P,
    alpha: &Ordinal,
    beta: &Ordinal,
    gamma: &Ordinal,
) -> Result<usize> {
    let k = chi(p, alpha, beta, gamma)?;
    let left = walk(p, alpha, beta)?;
    let right = walk(p, alpha, gamma)?;
    let x = p.cseq(left.at(k));
    let y = p.cseq(right.at(k));
    Ok(osc_pieces(&x, &y, alpha)?.count())
}

/// The image `χ``[A]³` by exhaustion.
pub fn stability_sample<P: CSequence + ?Sized>(p: &P, set: &[Ordinal]) -> Result<BTreeSet<usize>> {
    let mut points = set.to_vec();
    points.sort();
    points.dedup();
    if points.len() < 3 {
        return Err(Error::Precondition(format!(
            "stability sampling needs at least 3 distinct points, got {}",
            points.len()
        )));
    }
    let mut image = BTreeSet::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            for k in j + 1..points.len() {
                image.insert(chi(p, &points[i], &points[j], &points[k])?);
            }
        }
    }
    Ok(image)
}

/// A pair `α < β` and an `ε` with `osc_ε(C_α, C_β) = n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OscWitness {
    pub alpha: Ordinal,
    pub beta: Ordinal,
    pub eps: Ordinal,
}

/// First `(α, β, ε)` in lexicographic order with `α < β` from `Γ`, `ε ∈ E`
/// and `osc_ε(C_α, C_β) = n`.
///
/// For `n ≥ 1` a witness satisfies `C_α ∩ C_β ⊆ ε`; for `n = 0` a failed
/// guard also counts, since the oscillation is then empty.
pub fn osc_witness_search<P: CSequence + ?Sized>(
    p: &P,
    gammas: &[Ordinal],
    eps_set: &[Ordinal],
    n: usize,
) -> Result<Option<OscWitness>> {
    let mut gammas = gammas.to_vec();
    gammas.sort();
    gammas.dedup();
    let mut eps_set = eps_set.to_vec();
    eps_set.sort();
    eps_set.dedup();
    let pairs: Vec<(usize, usize)> = (0..gammas.len())
        .flat_map(|i| (i + 1..gammas.len()).map(move |j| (i, j)))
        .collect();
    pairs
        .par_iter()
        .map(|&(i, j)| -> Result<Option<OscWitness>> {
            let (alpha, beta) = (&gammas[i], &gammas[j]);
            let x = p.cseq(alpha);
            let y = p.cseq(beta);
            for eps in &eps_set {
                if osc_pieces(&x, &y, eps)?.count() == n {
                    return Ok(Some(OscWitness {
                        alpha: alpha.clone(),
                        beta: beta.clone(),
                        eps: eps.clone(),
                    }));
                }
            }
            Ok(None)
        })
        .find_map_first(|r| r.transpose())
        .transpose()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_set::Block;
    use crate::cseq::Provider;

    fn o(s: &str) -> Ordinal {
        Ordinal::parse(s).unwrap()
    }

    fn nats(xs: &[u64]) -> ClosedSet {
        ClosedSet::from_naturals(xs.iter().copied())
    }

    #[test]
    fn pieces_between_cut_points() {
        let r = osc_pieces(&nats(&[1, 3, 5]), &nats(&[2, 4]), &Ordinal::zero()).unwrap();
        assert!(r.guard);
        let firsts: Vec<Ordinal> = r.pieces.iter().map(|p| p.first.clone()).collect();
        assert_eq!(firsts, vec![Ordinal::nat(1), Ordinal::nat(3), Ordinal::nat(5)]);
        assert_eq!(r.pieces[0].lower, Cut::Unbounded);
        assert_eq!(r.pieces[1].lower, Cut::At(Ordinal::nat(2)));
        assert_eq!(r.pieces[2].upper, Cut::Unbounded);
    }

    #[test]
    fn failed_guard_gives_no_pieces() {
        let r = osc_pieces(&nats(&[1, 2]), &nats(&[2, 5]), &Ordinal::zero()).unwrap();
        assert!(!r.guard);
        assert_eq!(r.count(), 0);
        let r = osc_pieces(&nats(&[1, 2]), &nats(&[2, 5]), &Ordinal::nat(3)).unwrap();
        assert!(r.guard);
    }

    #[test]
    fn eps_drops_low_points() {
        let r = osc_pieces(&nats(&[1, 3]), &nats(&[2, 4]), &Ordinal::nat(3)).unwrap();
        assert_eq!(r.count(), 1);
        assert_eq!(r.pieces[0].first, Ordinal::nat(3));
    }

    #[test]
    fn symbolic_ladders() {
        let x = ClosedSet::fundamental(&o("w*2")).unwrap();
        let y = ClosedSet::finite([o("w + 3"), o("w + 10")]);
        let r = osc_pieces(&x, &y, &o("w")).unwrap();
        assert!(!r.guard);
        let y = ClosedSet::finite([o("w + 3"), o("w*2 + 1")]);
        let r = osc_pieces(&x, &y, &o("w + 5")).unwrap();
        assert_eq!(r.count(), 1);
        assert_eq!(r.pieces[0].first, o("w + 5"));
        assert!(r.pieces[0].contains(&x, &o("w + 5"), &o("w + 900")));
    }

    #[test]
    fn chi_examples() {
        let p = Provider::fundamental();
        assert_eq!(chi(&p, &o("w + 1"), &o("w + 2"), &o("w*2")).unwrap(), 0);
        assert_eq!(chi(&p, &o("w + 1"), &o("w + 2"), &o("w^2")).unwrap(), 1);
        assert_eq!(chi(&p, &o("w*3"), &o("w*3 + 1"), &o("w*3 + 2")).unwrap(), 1);
        assert!(matches!(
            chi(&p, &o("w + 2"), &o("w + 1"), &o("w^2")),
            Err(Error::Order(_))
        ));
    }

    #[test]
    fn osc3_example() {
        let p = Provider::fundamental();
        assert_eq!(osc3(&p, &o("w + 1"), &o("w + 2"), &o("w^2")).unwrap(), 0);
    }

    #[test]
    fn stability_examples() {
        let p = Provider::fundamental();
        let a = [o("w + 1"), o("w + 2"), o("w^2")];
        assert_eq!(stability_sample(&p, &a).unwrap(), BTreeSet::from([1]));
        assert!(stability_sample(&p, &a[..2]).is_err());
    }

    #[test]
    fn witness_search_on_planted_table() {
        // C_{w*3} = {w*2} ∪ {w*2+n}: C_{w*2} = {w+n} lies in the single piece below w*2
        let entry =
            ClosedSet::table(&o("w*3"), [Block::Point(o("w*2")), Block::ladder(o("w*3"))]).unwrap();
        let p = Provider::fundamental().with_entry(o("w*3"), entry).unwrap();
        let gammas = [o("w*3"), o("w*2")];
        let eps = [o("w + 5")];
        let w = osc_witness_search(&p, &gammas, &eps, 1).unwrap().unwrap();
        assert_eq!((w.alpha, w.beta, w.eps), (o("w*2"), o("w*3"), o("w + 5")));
        assert_eq!(osc_witness_search(&p, &gammas, &eps, 2).unwrap(), None);
        let w = osc_witness_search(&p, &[o("w + 5"), o("w*3")], &eps, 0).unwrap().unwrap();
        assert_eq!(w.alpha, o("w + 5"));
    }
}
