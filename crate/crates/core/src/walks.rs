//! Walks from `β` down to `α` along a C-sequence.
//!
//! The walk steps `β₀ = β`, `β_{i+1} = min(C_{β_i} ∖ α)` until it reaches `α`.
//! [`WalkTrace`] keeps the points strictly above `α`; its length is `ρ₂(α,β)`
//! and the full sequence `Tr(α,β)` is the trace followed by `α` forever.

use dashmap::DashMap;
use serde::Serialize;

use crate::cseq::CSequence;
use crate::error::{Error, Result};
use crate::ordinal::Ordinal;

/// The descending points of one walk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WalkTrace {
    source: Ordinal,
    target: Ordinal,
    steps: Vec<Ordinal>,
}

impl WalkTrace {
    /// `α`, where the walk ends.
    pub fn source(&self) -> &Ordinal {
        &self.source
    }

    /// `β`, where the walk starts.
    pub fn target(&self) -> &Ordinal {
        &self.target
    }

    /// `tr(α,β)`: the points visited strictly above `α`.
    pub fn steps(&self) -> &[Ordinal] {
        &self.steps
    }

    /// `ρ₂(α,β)`.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `Tr(α,β)(k)`; constantly `α` past the end of the trace.
    pub fn at(&self, k: usize) -> &Ordinal {
        self.steps.get(k).unwrap_or(&self.source)
    }

    /// `min(im tr(α,β))`, the last point visited above `α`.
    pub fn last(&self) -> &Ordinal {
        self.steps.last().expect("traces of α < β are nonempty")
    }

    pub fn contains(&self, x: &Ordinal) -> bool {
        self.steps.contains(x)
    }
}

fn stalled(at: &Ordinal, target: &Ordinal, reason: &str) -> Error {
    Error::WalkStalled {
        at: at.to_string(),
        target: target.to_string(),
        reason: reason.into(),
    }
}

fn require_below(alpha: &Ordinal, beta: &Ordinal) -> Result<()> {
    if alpha >= beta {
        return Err(Error::Order(format!("expected {alpha} < {beta}")));
    }
    Ok(())
}

/// The walk from `β` down to `α`.
pub fn walk<P: CSequence + ?Sized>(p: &P, alpha: &Ordinal, beta: &Ordinal) -> Result<WalkTrace> {
    require_below(alpha, beta)?;
    p.check_universe(beta)?;
    let mut steps = vec![beta.clone()];
    loop {
        let current = steps.last().expect("nonempty");
        let next = p
            .cseq(current)
            .min_above(alpha)
            .ok_or_else(|| stalled(current, alpha, "C-set has no element at or above the target"))?;
        if next >= *current {
            return Err(stalled(current, alpha, "C-set element is not below the current point"));
        }
        if next < *alpha {
            return Err(stalled(current, alpha, "C-set query answered below the target"));
        }
        if next == *alpha {
            break;
        }
        steps.push(next);
    }
    Ok(WalkTrace {
        source: alpha.clone(),
        target: beta.clone(),
        steps,
    })
}

/// `ρ₂(α,β)`, with `ρ₂(α,α) = 0`.
pub fn rho2<P: CSequence + ?Sized>(p: &P, alpha: &Ordinal, beta: &Ordinal) -> Result<usize> {
    if alpha == beta {
        return Ok(0);
    }
    Ok(walk(p, alpha, beta)?.len())
}

/// `λ₂(α,β) = sup(α ∩ {sup(C_η ∩ α) : η ∈ im tr(α,β)})`; 0 when `α = 0`.
pub fn lambda2<P: CSequence + ?Sized>(p: &P, alpha: &Ordinal, beta: &Ordinal) -> Result<Ordinal> {
    let trace = walk(p, alpha, beta)?;
    Ok(lambda2_of(p, &trace))
}

fn lambda2_of<P: CSequence + ?Sized>(p: &P, trace: &WalkTrace) -> Ordinal {
    let alpha = trace.source();
    trace
        .steps()
        .iter()
        .map(|eta| p.cseq(eta).sup_below(alpha))
        .filter(|s| s < alpha)
        .max()
        .unwrap_or_default()
}

/// The landing ordinal `Λ(α,β)`: `η = min(im tr(α,β))` if `α ∈ acc(C_η)`,
/// otherwise `α`.
pub fn landing<P: CSequence + ?Sized>(p: &P, alpha: &Ordinal, beta: &Ordinal) -> Result<Ordinal> {
    let trace = walk(p, alpha, beta)?;
    let eta = trace.last();
    Ok(if p.cseq(eta).acc_contains(alpha) {
        eta.clone()
    } else {
        alpha.clone()
    })
}

/// Memoised `ρ` over one provider.
///
/// `ρ(α,β)` is the maximum of `otp(C_β ∩ α)`, of `ρ(α, min(C_β ∖ α))` when
/// that minimum exceeds `α`, and of `ρ(ξ,α)` over `ξ ∈ C_β ∩ α` with
/// `ξ > λ₂(α,β)`; `ρ(α,α) = 0`.
pub struct Rho<P> {
    provider: P,
    memo: DashMap<(Ordinal, Ordinal), Ordinal>,
}

impl<P: CSequence> Rho<P> {
    pub fn new(provider: P) -> Self {
        Rho {
            provider,
            memo: DashMap::new(),
        }
    }

    pub fn provider(&self) -> &P {
        &self.provider
    }

    /// Number of memoised pairs.
    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    pub fn eval(&self, alpha: &Ordinal, beta: &Ordinal) -> Result<Ordinal> {
        if alpha == beta {
            return Ok(Ordinal::zero());
        }
        require_below(alpha, beta)?;
        if let Some(v) = self.memo.get(&(alpha.clone(), beta.clone())) {
            return Ok(v.clone());
        }
        let p = &self.provider;
        let trace = walk(p, alpha, beta)?;
        // bottom-up along the trace: each suffix is the walk from its head
        let mut below: Option<Ordinal> = None;
        let mut shadow = Ordinal::zero();
        for eta in trace.steps().iter().rev() {
            let c_eta = p.cseq(eta);
            let s = c_eta.sup_below(alpha);
            if s < *alpha && s > shadow {
                shadow = s;
            }
            let key = (alpha.clone(), eta.clone());
            if let Some(v) = self.memo.get(&key) {
                below = Some(v.clone());
                continue;
            }
            let mut best = c_eta.otp_below(alpha);
            if let Some(b) = below.take() {
                best = best.max(b);
            }
            let floor = shadow.succ();
            let xis = c_eta.elements_in(&floor, alpha).ok_or_else(|| {
                Error::NotEnumerable(format!(
                    "C_{eta} ∩ [{floor}, {alpha}) is infinite under provider {}",
                    p.name()
                ))
            })?;
            for xi in &xis {
                best = best.max(self.eval(xi, alpha)?);
            }
            self.memo.insert(key, best.clone());
            below = Some(best);
        }
        Ok(below.expect("traces are nonempty"))
    }
}

/// `ρ(α,β)` with a throwaway memo.
pub fn rho<P: CSequence + ?Sized>(p: &P, alpha: &Ordinal, beta: &Ordinal) -> Result<Ordinal> {
    Rho::new(p).eval(alpha, beta)
}

/// Outcome of [`check_concatenation`], with the traces it compared.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConcatenationRecord {
    pub landing: Ordinal,
    pub lambda2: Ordinal,
    pub trace_eps_beta: Vec<Ordinal>,
    pub trace_landing_beta: Vec<Ordinal>,
    pub trace_eps_landing: Vec<Ordinal>,
    /// `tr(ε,β) = tr(Λ,β) ⌢ tr(ε,Λ)`.
    pub concatenates: bool,
    /// `tr(ε,β)` end-extends `tr(α,β)`.
    pub end_extends: bool,
    /// `α ∈ im tr(ε,β)`.
    pub alpha_in_trace: bool,
    /// `α ∈ acc(C_η)` for `η = min(im tr(α,β))`.
    pub alpha_accumulates: bool,
}

impl ConcatenationRecord {
    /// End-extension together with one of the two alternatives.
    pub fn dichotomy(&self) -> bool {
        self.end_extends && (self.alpha_in_trace || self.alpha_accumulates)
    }

    pub fn holds(&self) -> bool {
        self.concatenates && self.dichotomy()
    }
}

/// Checks `tr(ε,β) = tr(Λ(α,β),β) ⌢ tr(ε,Λ(α,β))` and the end-extension
/// dichotomy, for `λ₂(α,β) < ε < α < β`.
pub fn check_concatenation<P: CSequence + ?Sized>(
    p: &P,
    alpha: &Ordinal,
    beta: &Ordinal,
    eps: &Ordinal,
) -> Result<ConcatenationRecord> {
    let trace_alpha = walk(p, alpha, beta)?;
    let lambda2 = lambda2_of(p, &trace_alpha);
    if !(lambda2 < *eps && eps < alpha) {
        return Err(Error::Precondition(format!(
            "need λ₂(α,β) = {lambda2} < ε = {eps} < α = {alpha}"
        )));
    }
    let eta = trace_alpha.last().clone();
    let alpha_accumulates = p.cseq(&eta).acc_contains(alpha);
    let landing = if alpha_accumulates { eta } else { alpha.clone() };

    let trace_eps_beta = walk(p, eps, beta)?.steps().to_vec();
    let trace_landing_beta = if landing == *beta {
        Vec::new()
    } else {
        walk(p, &landing, beta)?.steps().to_vec()
    };
    let trace_eps_landing = walk(p, eps, &landing)?.steps().to_vec();

    let joined: Vec<&Ordinal> = trace_landing_beta.iter().chain(&trace_eps_landing).collect();
    let concatenates = trace_eps_beta.iter().collect::<Vec<_>>() == joined;
    let end_extends = trace_eps_beta.starts_with(trace_alpha.steps());
    let alpha_in_trace = trace_eps_beta.contains(alpha);
    Ok(ConcatenationRecord {
        landing,
        lambda2,
        trace_eps_beta,
        trace_landing_beta,
        trace_eps_landing,
        concatenates,
        end_extends,
        alpha_in_trace,
        alpha_accumulates,
    })
}
