//! Named property suites over random or enumerated cases.
//!
//! Each suite draws up to `budget` cases from `rng_for(seed, 0)`, skips
//! cases outside its preconditions and stops at the first failure, which is
//! then shrunk greedily: a candidate replaces the counterexample whenever it
//! still fails.

use std::collections::BTreeMap;
use std::fmt::Debug;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::branches::{separate_families, sierpinski_color, BranchFamily};
use crate::closed_set::{Block, ClosedSet};
use crate::cseq::{CSequence, Provider, ProviderMode};
use crate::error::{Error, Result};
use crate::extraction::fixtures::extraction_fixtures;
use crate::extraction::{s2_direct_d, ExtractionMap};
use crate::magma::{well_behaved_check, MagmaKind, StandardMagma};
use crate::ordinal::Ordinal;
use crate::oscillation::{chi, osc_pieces};
use crate::sample::{random_limit, random_ordinal, random_pair, random_triple, rng_for, OrdinalShape};
use crate::walks::{check_concatenation, lambda2, landing, rho2, walk, Rho};

/// Known suite ids.
pub const SUITES: [&str; 12] = [
    "ordinal-arith",
    "cseq-queries",
    "walks-mechanics",
    "walks-concat",
    "landing",
    "rho-contract",
    "osc-oracle",
    "chi-landing",
    "extraction-claim",
    "s2-direct",
    "sierpinski",
    "well-behaved",
];

const MAX_SHRINK_STEPS: usize = 10_000;

/// A failing case after shrinking.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub case: String,
    pub reason: String,
    pub shrink_steps: usize,
}

/// Outcome of [`run_invariant_suite`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub budget: u64,
    pub seed: u64,
    pub provider: String,
    /// Cases whose property was checked.
    pub checked: u64,
    /// Cases outside the suite's preconditions.
    pub skipped: u64,
    pub passed: bool,
    pub counterexample: Option<Counterexample>,
    /// Suite-specific counters.
    pub tally: BTreeMap<String, u64>,
}

enum Verdict {
    Pass,
    Skip,
    Fail(String),
}

fn fail_on<T>(r: Result<T>) -> std::result::Result<T, Verdict> {
    r.map_err(|e| Verdict::Fail(format!("unexpected error: {e}")))
}

macro_rules! attempt {
    ($e:expr) => {
        match fail_on($e) {
            Ok(v) => v,
            Err(v) => return v,
        }
    };
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Verdict::Fail(format!($($fmt)+));
        }
    };
}

struct Outcome {
    checked: u64,
    skipped: u64,
    counterexample: Option<Counterexample>,
}

/// Runs `check` on generated cases; `generate` returning `None` ends the run.
fn run_property<C: Clone + Debug>(
    budget: u64,
    rng: &mut ChaCha8Rng,
    mut generate: impl FnMut(&mut ChaCha8Rng, u64) -> Option<C>,
    check: impl Fn(&C) -> Verdict,
    shrink: impl Fn(&C) -> Vec<C>,
) -> Outcome {
    let mut out = Outcome {
        checked: 0,
        skipped: 0,
        counterexample: None,
    };
    for i in 0..budget {
        let Some(case) = generate(rng, i) else { break };
        match check(&case) {
            Verdict::Pass => out.checked += 1,
            Verdict::Skip => out.skipped += 1,
            Verdict::Fail(reason) => {
                out.checked += 1;
                let (case, reason, steps) = minimize(case, reason, &check, &shrink);
                out.counterexample = Some(Counterexample {
                    case: format!("{case:?}"),
                    reason,
                    shrink_steps: steps,
                });
                break;
            }
        }
    }
    out
}

fn minimize<C: Clone>(
    mut case: C,
    mut reason: String,
    check: &impl Fn(&C) -> Verdict,
    shrink: &impl Fn(&C) -> Vec<C>,
) -> (C, String, usize) {
    let mut steps = 0;
    'outer: while steps < MAX_SHRINK_STEPS {
        for candidate in shrink(&case) {
            if let Verdict::Fail(r) = check(&candidate) {
                case = candidate;
                reason = r;
                steps += 1;
                continue 'outer;
            }
        }
        break;
    }
    (case, reason, steps)
}

fn no_shrink<C>(_: &C) -> Vec<C> {
    Vec::new()
}

/// Smaller ordinals: a term dropped, a coefficient lowered or an exponent
/// shrunk.
fn shrink_ordinal(x: &Ordinal) -> Vec<Ordinal> {
    let terms: Vec<(Ordinal, u64)> = x.terms().iter().map(|t| (t.exponent.clone(), t.coefficient)).collect();
    let mut out = Vec::new();
    for i in 0..terms.len() {
        let mut dropped = terms.clone();
        dropped.remove(i);
        out.extend(Ordinal::from_terms(dropped).ok());
        if terms[i].1 > 1 {
            let mut lowered = terms.clone();
            lowered[i].1 -= 1;
            out.extend(Ordinal::from_terms(lowered).ok());
        }
        for e in shrink_ordinal(&terms[i].0) {
            let mut smaller = terms.clone();
            smaller[i].0 = e;
            out.extend(Ordinal::from_terms(smaller).ok());
        }
    }
    out.retain(|y| y < x);
    out
}

fn shrink_ordinals(v: &[Ordinal]) -> Vec<Vec<Ordinal>> {
    let mut out = Vec::new();
    for i in 0..v.len() {
        for s in shrink_ordinal(&v[i]) {
            let mut w = v.to_vec();
            w[i] = s;
            out.push(w);
        }
    }
    out
}

/// Runs suite `id` under the fundamental provider.
pub fn run_invariant_suite(id: &str, budget: u64, seed: u64) -> Result<SuiteReport> {
    run_invariant_suite_with(id, budget, seed, &Provider::fundamental())
}

/// Runs suite `id`; walk-based suites use `provider`.
pub fn run_invariant_suite_with(id: &str, budget: u64, seed: u64, provider: &dyn CSequence) -> Result<SuiteReport> {
    let mut rng = rng_for(seed, 0);
    let mut tally = BTreeMap::new();
    let outcome = match id {
        "ordinal-arith" => ordinal_arith(budget, &mut rng),
        "cseq-queries" => cseq_queries(budget, &mut rng),
        "walks-mechanics" => walks_mechanics(budget, &mut rng, provider),
        "walks-concat" => walks_concat(budget, &mut rng, provider),
        "landing" => landing_contract(budget, &mut rng, provider, &mut tally),
        "rho-contract" => rho_contract(budget, &mut rng, provider),
        "osc-oracle" => osc_oracle(budget, &mut rng),
        "chi-landing" => chi_landing(budget, &mut rng),
        "extraction-claim" => extraction_claim(budget, &mut rng, &mut tally),
        "s2-direct" => s2_direct(budget, &mut rng),
        "sierpinski" => sierpinski(budget, &mut rng, &mut tally),
        "well-behaved" => well_behaved(budget, seed)?,
        other => return Err(Error::UnknownSuite(other.to_string())),
    };
    Ok(SuiteReport {
        suite: id.to_string(),
        budget,
        seed,
        provider: provider.name(),
        checked: outcome.checked,
        skipped: outcome.skipped,
        passed: outcome.counterexample.is_none(),
        counterexample: outcome.counterexample,
        tally,
    })
}

fn shape() -> OrdinalShape {
    OrdinalShape::default()
}

fn ordinal_arith(budget: u64, rng: &mut ChaCha8Rng) -> Outcome {
    let check = |v: &Vec<Ordinal>| {
        let (a, b, c) = (&v[0], &v[1], &v[2]);
        ensure!(&(a + b) + c == a + &(b + c), "addition is not associative");
        ensure!(a.cmp(b) == b.cmp(a).reverse(), "comparison is not antisymmetric");
        ensure!(!(a <= b && b <= c) || a <= c, "comparison is not transitive");
        ensure!((a + &Ordinal::one()).is_successor(), "a + 1 is not a successor");
        ensure!(a <= &(a + b) && b <= &(a + b), "addition is not monotone");
        ensure!(Ordinal::parse(&a.to_string()).ok().as_ref() == Some(a), "printing does not round-trip");
        if a.is_limit() {
            let seq: Vec<Ordinal> = (1..=4).map(|n| a.fund_seq(n).expect("limit")).collect();
            ensure!(seq.windows(2).all(|w| w[0] < w[1]) && seq[3] < *a, "fundamental sequence is not increasing below a");
            if b < a {
                ensure!(
                    (1..=1000).any(|n| a.fund_seq(n).expect("limit") > *b),
                    "fundamental sequence of a stays below b"
                );
            }
        }
        Verdict::Pass
    };
    let generate = |rng: &mut ChaCha8Rng, i: u64| {
        let a = if i % 3 == 0 { random_limit(rng, shape()) } else { random_ordinal(rng, shape()) };
        Some(vec![a, random_ordinal(rng, shape()), random_ordinal(rng, shape())])
    };
    run_property(budget, rng, generate, check, |v| shrink_ordinals(v))
}

/// Elements of `C_β ∩ γ` listed from the definition, when finite.
fn listed_cseq(mode: ProviderMode, beta: &Ordinal, gamma: &Ordinal) -> Option<Vec<Ordinal>> {
    if let Some(p) = beta.pred() {
        return Some(if p < *gamma { vec![p] } else { Vec::new() });
    }
    if beta.is_zero() {
        return Some(Vec::new());
    }
    match mode {
        ProviderMode::Fundamental => {
            if gamma >= beta {
                return None;
            }
            Some(
                (1..)
                    .map(|n| beta.fund_seq(n).expect("limit"))
                    .take_while(|x| x < gamma)
                    .collect(),
            )
        }
        ProviderMode::Full => {
            let top = gamma.as_finite()?;
            Some((1..top).map(Ordinal::nat).filter(|x| x < beta).collect())
        }
    }
}

fn cseq_queries(budget: u64, rng: &mut ChaCha8Rng) -> Outcome {
    let check = |case: &(ProviderMode, Vec<Ordinal>)| {
        let (mode, v) = case;
        let (beta, gamma) = (&v[0], &v[1]);
        let Some(listed) = listed_cseq(*mode, beta, gamma) else {
            return Verdict::Skip;
        };
        let set = Provider::new(*mode).cseq(beta);
        ensure!(set.otp_below(gamma) == Ordinal::nat(listed.len() as u64), "otp_below disagrees with {listed:?}");
        let sup = listed.last().cloned().unwrap_or_default();
        ensure!(set.sup_below(gamma) == sup, "sup_below {} differs from {sup}", set.sup_below(gamma));
        for x in &listed {
            ensure!(set.contains(x), "{x} missing");
            ensure!(set.min_above(x).as_ref() == Some(x), "min_above({x}) is not {x}");
        }
        for w in listed.windows(2) {
            ensure!(set.min_above(&w[0].succ()).as_ref() == Some(&w[1]), "min_above skips past {}", w[1]);
        }
        if let Some(m) = set.min_above(gamma) {
            ensure!(m >= *gamma, "min_above({gamma}) = {m} lies below it");
        }
        Verdict::Pass
    };
    let generate = |rng: &mut ChaCha8Rng, i: u64| {
        let mode = if i % 2 == 0 { ProviderMode::Fundamental } else { ProviderMode::Full };
        let beta = if i % 4 < 2 { random_limit(rng, shape()) } else { random_ordinal(rng, shape()) };
        let gamma = if mode == ProviderMode::Full {
            Ordinal::nat(rng.gen_range(0..40))
        } else {
            random_ordinal(rng, shape())
        };
        Some((mode, vec![beta, gamma]))
    };
    let shrink = |case: &(ProviderMode, Vec<Ordinal>)| {
        shrink_ordinals(&case.1).into_iter().map(|v| (case.0, v)).collect()
    };
    run_property(budget, rng, generate, check, shrink)
}

fn walks_mechanics(budget: u64, rng: &mut ChaCha8Rng, p: &dyn CSequence) -> Outcome {
    let check = |v: &Vec<Ordinal>| {
        let (alpha, beta) = (&v[0], &v[1]);
        if alpha >= beta {
            return Verdict::Skip;
        }
        let trace = attempt!(walk(p, alpha, beta));
        let steps = trace.steps();
        ensure!(steps[0] == *beta, "trace does not start at β");
        ensure!(steps.windows(2).all(|w| w[0] > w[1]), "trace is not strictly decreasing: {steps:?}");
        ensure!(steps.iter().all(|s| s > alpha), "trace reaches α early: {steps:?}");
        let last = p.cseq(trace.last());
        ensure!(last.min_above(alpha).as_ref() == Some(alpha), "final C-set does not meet α");
        ensure!(attempt!(rho2(p, alpha, beta)) == steps.len(), "ρ₂ differs from the trace length");
        Verdict::Pass
    };
    let generate = |rng: &mut ChaCha8Rng, _| {
        let (a, b) = random_pair(rng, shape());
        Some(vec![a, b])
    };
    run_property(budget, rng, generate, check, |v| shrink_ordinals(v))
}

fn walks_concat(budget: u64, rng: &mut ChaCha8Rng, p: &dyn CSequence) -> Outcome {
    // case order (ε, α, β)
    let check = |v: &Vec<Ordinal>| {
        let (eps, alpha, beta) = (&v[0], &v[1], &v[2]);
        if !(alpha < beta) {
            return Verdict::Skip;
        }
        let l2 = attempt!(lambda2(p, alpha, beta));
        if !(l2 < *eps && eps < alpha) {
            return Verdict::Skip;
        }
        let rec = attempt!(check_concatenation(p, alpha, beta, eps));
        ensure!(rec.concatenates, "tr(ε,β) is not tr(Λ,β) followed by tr(ε,Λ): {rec:?}");
        ensure!(rec.dichotomy(), "end-extension dichotomy fails: {rec:?}");
        Verdict::Pass
    };
    let generate = |rng: &mut ChaCha8Rng, _| {
        for _ in 0..1000 {
            let (alpha, beta) = random_pair(rng, shape());
            let Ok(l2) = lambda2(p, &alpha, &beta) else {
                return Some(vec![alpha.clone(), alpha, beta]);
            };
            let mut options: Vec<Ordinal> = (1..=4).map(|k| l2.add_nat(k)).collect();
            for _ in 0..4 {
                options.push(&l2 + &random_ordinal(rng, shape()));
            }
            options.retain(|e| *e > l2 && *e < alpha);
            if !options.is_empty() {
                let eps = options[rng.gen_range(0..options.len())].clone();
                return Some(vec![eps, alpha, beta]);
            }
        }
        None
    };
    run_property(budget, rng, generate, check, |v| shrink_ordinals(v))
}

/// A configuration where the walk from `γ` to `δ` lands above `δ`, with
/// `α < β < δ` separated by a point of `C_{Λ(δ,γ)}`.
#[derive(Clone, Debug)]
pub struct LandingFixture {
    pub provider: Provider,
    pub alpha: Ordinal,
    pub beta: Ordinal,
    pub delta: Ordinal,
    pub gamma: Ordinal,
}

/// Table-provider fixtures: `C_η = ladder(δ) ∪ {δ} ∪ {η[n] : n > j}` for
/// `η = ω²·m`, `δ = ω²·(m−1) + ω·j`, and `γ = η + k`; `α < β` range over
/// `δ[n] + t` with a ladder point in `[α, β)`.
pub fn landing_fixtures() -> Vec<LandingFixture> {
    let w2 = Ordinal::omega_pow(Ordinal::nat(2));
    let w = Ordinal::omega();
    let mut out = Vec::new();
    for m in 1..=3u64 {
        for j in 0..=3u64 {
            let delta = &w2.mul_nat(m - 1) + &w.mul_nat(j);
            if delta.is_zero() {
                continue;
            }
            let eta = w2.mul_nat(m);
            let entry = ClosedSet::table(
                &eta,
                [Block::ladder(delta.clone()), Block::Ladder { top: eta.clone(), from: j + 1 }],
            )
            .expect("fixture entry is a valid table");
            let provider = Provider::fundamental().with_entry(eta.clone(), entry.clone()).expect("cofinal entry");
            let mut points: Vec<Ordinal> = (1..=4)
                .flat_map(|n| {
                    let base = delta.fund_seq(n).expect("limit");
                    (0..=2).map(move |t| base.add_nat(t))
                })
                .filter(|x| *x < delta)
                .collect();
            points.sort();
            points.dedup();
            for k in 1..=3 {
                let gamma = eta.add_nat(k);
                for (i, alpha) in points.iter().enumerate() {
                    for beta in &points[i + 1..] {
                        if entry.min_above(alpha).is_some_and(|x| x < *beta) {
                            out.push(LandingFixture {
                                provider: provider.clone(),
                                alpha: alpha.clone(),
                                beta: beta.clone(),
                                delta: delta.clone(),
                                gamma: gamma.clone(),
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
struct LandingCase {
    fixture: Option<usize>,
    alpha: Ordinal,
    beta: Ordinal,
}

fn landing_contract(
    budget: u64,
    rng: &mut ChaCha8Rng,
    p: &dyn CSequence,
    tally: &mut BTreeMap<String, u64>,
) -> Outcome {
    let fixtures = landing_fixtures();
    let moved = std::cell::Cell::new(0u64);
    let check = |case: &LandingCase| {
        let provider: &dyn CSequence = match case.fixture {
            Some(i) => &fixtures[i].provider,
            None => p,
        };
        if case.alpha >= case.beta {
            return Verdict::Skip;
        }
        let lam = attempt!(landing(provider, &case.alpha, &case.beta));
        let shadow = provider.cseq(&lam).sup_below(&case.alpha);
        ensure!(
            shadow == case.alpha.set_sup(),
            "sup(C_Λ ∩ α) = {shadow} differs from sup(α) = {} with Λ = {lam}",
            case.alpha.set_sup()
        );
        if lam != case.alpha {
            moved.set(moved.get() + 1);
        }
        Verdict::Pass
    };
    let generate = |rng: &mut ChaCha8Rng, i: u64| {
        if let Some(f) = fixtures.get(i as usize) {
            return Some(LandingCase {
                fixture: Some(i as usize),
                alpha: f.delta.clone(),
                beta: f.gamma.clone(),
            });
        }
        let (alpha, beta) = random_pair(rng, shape());
        Some(LandingCase {
            fixture: None,
            alpha,
            beta,
        })
    };
    let shrink = |case: &LandingCase| {
        if case.fixture.is_some() {
            return Vec::new();
        }
        shrink_ordinals(&[case.alpha.clone(), case.beta.clone()])
            .into_iter()
            .map(|v| LandingCase {
                fixture: None,
                alpha: v[0].clone(),
                beta: v[1].clone(),
            })
            .collect()
    };
    let out = run_property(budget, rng, generate, &check, shrink);
    tally.insert("landing-above-alpha".into(), moved.get());
    out
}

fn rho_contract(budget: u64, rng: &mut ChaCha8Rng, p: &dyn CSequence) -> Outcome {
    let rho = Rho::new(p);
    let check = |v: &Vec<Ordinal>| {
        let (a, b, c) = (&v[0], &v[1], &v[2]);
        if !(a < b && b < c) {
            return Verdict::Skip;
        }
        for (x, y) in [(a, b), (a, c), (b, c)] {
            let r = attempt!(rho.eval(x, y));
            for eta in attempt!(walk(p, x, y)).steps() {
                let otp = p.cseq(eta).otp_below(x);
                ensure!(r >= otp, "ρ({x},{y}) = {r} is below otp(C_{eta} ∩ {x}) = {otp}");
            }
        }
        let (ab, ac, bc) = (attempt!(rho.eval(a, b)), attempt!(rho.eval(a, c)), attempt!(rho.eval(b, c)));
        ensure!(ac <= ab.clone().max(bc.clone()), "ρ(α,γ) = {ac} exceeds max(ρ(α,β), ρ(β,γ)) = max({ab}, {bc})");
        ensure!(ab <= ac.clone().max(bc.clone()), "ρ(α,β) = {ab} exceeds max(ρ(α,γ), ρ(β,γ)) = max({ac}, {bc})");
        Verdict::Pass
    };
    let generate = |rng: &mut ChaCha8Rng, _| {
        let (a, b, c) = random_triple(rng, shape());
        Some(vec![a, b, c])
    };
    run_property(budget, rng, generate, check, |v| shrink_ordinals(v))
}

#[derive(Clone, Debug)]
struct OscCase {
    x: Vec<u64>,
    y: Vec<u64>,
    eps: u64,
}

/// Nonempty y-convex pieces of `x ∖ ε`, by scanning each gap of `y`.
fn listed_pieces(case: &OscCase) -> Option<Vec<u64>> {
    let mut x = case.x.clone();
    let mut y = case.y.clone();
    x.sort_unstable();
    x.dedup();
    y.sort_unstable();
    y.dedup();
    if x.iter().any(|v| *v >= case.eps && y.contains(v)) {
        return None;
    }
    if y.is_empty() {
        return Some(Vec::new());
    }
    let mut gaps: Vec<(Option<u64>, Option<u64>)> = vec![(None, Some(y[0]))];
    gaps.extend(y.windows(2).map(|w| (Some(w[0]), Some(w[1]))));
    gaps.push((y.last().copied(), None));
    Some(
        gaps.into_iter()
            .filter_map(|(lo, hi)| {
                x.iter()
                    .copied()
                    .filter(|v| *v >= case.eps && lo.is_none_or(|l| *v > l) && hi.is_none_or(|h| *v < h))
                    .min()
            })
            .collect(),
    )
}

fn osc_oracle(budget: u64, rng: &mut ChaCha8Rng) -> Outcome {
    let check = |case: &OscCase| {
        let x = ClosedSet::from_naturals(case.x.iter().copied());
        let y = ClosedSet::from_naturals(case.y.iter().copied());
        let r = attempt!(osc_pieces(&x, &y, &Ordinal::nat(case.eps)));
        match listed_pieces(case) {
            None => ensure!(!r.guard && r.count() == 0, "guard should fail, got {} pieces", r.count()),
            Some(firsts) => {
                let got: Vec<Ordinal> = r.pieces.iter().map(|p| p.first.clone()).collect();
                let want: Vec<Ordinal> = firsts.into_iter().map(Ordinal::nat).collect();
                ensure!(r.guard && got == want, "pieces start at {got:?}, expected {want:?}");
            }
        }
        Verdict::Pass
    };
    let generate = |rng: &mut ChaCha8Rng, _| {
        let draw = |rng: &mut ChaCha8Rng| {
            let n = rng.gen_range(0..=24);
            (0..n).map(|_| rng.gen_range(0..200)).collect::<Vec<u64>>()
        };
        let x = draw(rng);
        let mut y = draw(rng);
        // keep most instances on the guarded side
        if rng.gen_bool(0.7) {
            y.retain(|v| !x.contains(v));
        }
        Some(OscCase {
            x,
            y,
            eps: rng.gen_range(0..200),
        })
    };
    let shrink = |case: &OscCase| {
        let mut out = Vec::new();
        for i in 0..case.x.len() {
            let mut c = case.clone();
            c.x.remove(i);
            out.push(c);
        }
        for i in 0..case.y.len() {
            let mut c = case.clone();
            c.y.remove(i);
            out.push(c);
        }
        if case.eps > 0 {
            out.push(OscCase {
                eps: case.eps - 1,
                ..case.clone()
            });
        }
        out
    };
    run_property(budget, rng, generate, check, shrink)
}

fn chi_landing(budget: u64, rng: &mut ChaCha8Rng) -> Outcome {
    let fixtures = landing_fixtures();
    let check = |i: &usize| {
        let f = &fixtures[*i];
        let p = &f.provider;
        let l2 = attempt!(lambda2(p, &f.delta, &f.gamma));
        let lam = attempt!(landing(p, &f.delta, &f.gamma));
        let hyp = l2 < f.alpha
            && f.alpha < f.beta
            && f.beta < f.delta
            && f.delta < f.gamma
            && p.cseq(&lam).min_above(&f.alpha).is_some_and(|x| x < f.beta);
        if !hyp {
            return Verdict::Skip;
        }
        let c = attempt!(chi(p, &f.alpha, &f.beta, &f.gamma));
        let r = attempt!(rho2(p, &lam, &f.gamma));
        ensure!(c == r, "χ = {c} but ρ₂(Λ(δ,γ),γ) = {r} for {f:?}");
        Verdict::Pass
    };
    let generate = |_: &mut ChaCha8Rng, i: u64| (i < fixtures.len() as u64).then_some(i as usize);
    run_property(budget, rng, generate, check, no_shrink)
}

fn extraction_claim(budget: u64, rng: &mut ChaCha8Rng, tally: &mut BTreeMap<String, u64>) -> Outcome {
    let fixtures = extraction_fixtures(3, 6);
    let counted = std::cell::Cell::new(0u64);
    let check = |i: &usize| {
        let f = &fixtures[*i];
        for arity in [2, 3] {
            let map = attempt!(ExtractionMap::new(f.family.clone(), arity));
            for tuple in f.cross_tuples(arity) {
                let (target, sets) = f.admissible_sets(&tuple);
                for z in sets {
                    counted.set(counted.get() + 1);
                    let got = attempt!(map.extract(&z));
                    ensure!(got == target, "e(z) = {got:?}, expected {target:?} for z = {z:?} in {f:?}");
                }
            }
        }
        Verdict::Pass
    };
    let generate = |_: &mut ChaCha8Rng, i: u64| (i < fixtures.len() as u64).then_some(i as usize);
    let out = run_property(budget, rng, generate, check, no_shrink);
    tally.insert("sets-checked".into(), counted.get());
    out
}

#[derive(Clone, Debug)]
struct DirectCase {
    z: Vec<u64>,
    seed: u64,
}

fn s2_direct(budget: u64, rng: &mut ChaCha8Rng) -> Outcome {
    let c0 = |seed: u64| move |a: &u64, b: &u64| crate::sample::mix64(seed ^ (a << 32) ^ b) % 5;
    let c1 = |seed: u64| move |a: &u64, b: &u64| crate::sample::mix64(!seed ^ (b << 32) ^ a) % 3;
    let check = |case: &DirectCase| {
        let got = s2_direct_d(c0(case.seed), c1(case.seed), &case.z);
        let mut points = case.z.clone();
        points.sort_unstable();
        points.dedup();
        let want = if points.len() < 2 {
            0
        } else {
            let weights: Vec<u64> = points.windows(2).map(|w| c1(case.seed)(&w[0], &w[1])).collect();
            let top = *weights.iter().max().expect("nonempty");
            let j = weights.iter().position(|&w| w == top).expect("max attained");
            c0(case.seed)(&points[j], &points[j + 1])
        };
        ensure!(got == want, "d(z) = {got}, recomputed {want}");
        Verdict::Pass
    };
    let generate = |rng: &mut ChaCha8Rng, _| {
        let n = rng.gen_range(0..=8);
        Some(DirectCase {
            z: (0..n).map(|_| rng.gen_range(0..30)).collect(),
            seed: rng.gen(),
        })
    };
    let shrink = |case: &DirectCase| {
        (0..case.z.len())
            .map(|i| {
                let mut c = case.clone();
                c.z.remove(i);
                c
            })
            .collect()
    };
    run_property(budget, rng, generate, check, shrink)
}

#[derive(Clone, Debug)]
struct SierpinskiCase {
    family: BranchFamily,
    a: Vec<usize>,
    b: Vec<usize>,
    floor: usize,
}

/// Checks a separation and the alternating-triple claim on it.
fn check_separation(case: &SierpinskiCase) -> Verdict {
    let f = &case.family;
    let Some(w) = attempt!(separate_families(f, &case.a, &case.b, case.floor)) else {
        return Verdict::Skip;
    };
    ensure!(w.verify(f, case.floor), "witness fails its invariants: {w:?}");
    for sel in [&w.left, &w.right] {
        for (k, &x) in sel.iter().enumerate() {
            for &y in &sel[k + 1..] {
                ensure!(f.delta_unchecked(x, y) > w.node.len(), "Δ({x},{y}) does not exceed the node depth");
            }
        }
    }
    let mut marked: Vec<(usize, bool)> = w.left.iter().map(|&i| (i, false)).chain(w.right.iter().map(|&i| (i, true))).collect();
    marked.sort_unstable();
    for i in 0..marked.len() {
        for j in i + 1..marked.len() {
            for k in j + 1..marked.len() {
                let (x, y, z) = (marked[i], marked[j], marked[k]);
                if x.1 == z.1 && x.1 != y.1 {
                    let first = attempt!(sierpinski_color(f, x.0, y.0));
                    let second = attempt!(sierpinski_color(f, y.0, z.0));
                    ensure!(first != second, "alternating triple ({}, {}, {}) is monochromatic", x.0, y.0, z.0);
                }
            }
        }
    }
    Verdict::Pass
}

fn sierpinski(budget: u64, rng: &mut ChaCha8Rng, tally: &mut BTreeMap<String, u64>) -> Outcome {
    let generate = |rng: &mut ChaCha8Rng, _| {
        let alphabet = rng.gen_range(2..=3u8);
        let depth = rng.gen_range(1..=4usize);
        let total = (alphabet as usize).pow(depth as u32);
        let size = rng.gen_range(2..=total.min(16));
        let family = BranchFamily::random(rng, alphabet, depth, size).expect("size fits");
        let mut a = Vec::new();
        let mut b = Vec::new();
        for i in 0..size {
            match rng.gen_range(0..3) {
                0 => a.push(i),
                1 => b.push(i),
                _ => {}
            }
        }
        Some(SierpinskiCase {
            family,
            a,
            b,
            floor: rng.gen_range(1..=3),
        })
    };
    let out = run_property(budget, rng, generate, check_separation, no_shrink);
    tally.insert("separated".into(), out.checked);
    out
}

fn well_behaved(budget: u64, seed: u64) -> Result<Outcome> {
    let mut checked = 0;
    for kind in [MagmaKind::FreeAbelian, MagmaKind::FreeGroup, MagmaKind::Qvec] {
        let magma = StandardMagma::new(kind, 16)?;
        let report = well_behaved_check(&magma, budget as usize, seed, 3)?;
        checked += report.pairs_checked as u64;
        if let Some(v) = report.violations.first() {
            return Ok(Outcome {
                checked,
                skipped: 0,
                counterexample: Some(Counterexample {
                    case: format!("{kind}: {} * {} = {}", v.left, v.right, v.product),
                    reason: format!("{:?} inclusion fails", v.inclusion),
                    shrink_steps: 0,
                }),
            });
        }
    }
    Ok(Outcome {
        checked,
        skipped: 0,
        counterexample: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes_at_a_small_budget() {
        for id in SUITES {
            let r = run_invariant_suite(id, 60, 5).unwrap();
            assert!(r.passed, "{id}: {:?}", r.counterexample);
            assert!(r.checked > 0, "{id} checked nothing");
        }
    }

    #[test]
    fn unknown_suite() {
        assert_eq!(run_invariant_suite("nope", 1, 0), Err(Error::UnknownSuite("nope".into())));
    }

    struct Broken;

    impl CSequence for Broken {
        fn cseq(&self, beta: &Ordinal) -> ClosedSet {
            match beta.pred() {
                Some(p) => ClosedSet::finite([p]),
                // limits answer a single point at zero
                None => ClosedSet::from_naturals([0]),
            }
        }
        fn name(&self) -> String {
            "broken".into()
        }
        fn universe(&self) -> &Ordinal {
            static BOUND: std::sync::OnceLock<Ordinal> = std::sync::OnceLock::new();
            BOUND.get_or_init(Provider::default_universe)
        }
    }

    #[test]
    fn corrupted_provider_yields_a_shrunk_counterexample() {
        let r = run_invariant_suite_with("walks-mechanics", 200, 1, &Broken).unwrap();
        assert!(!r.passed);
        let cx = r.counterexample.unwrap();
        assert!(cx.shrink_steps > 0);
        // a limit above a nonzero target is the smallest failure
        assert_eq!(cx.case, "[Ordinal(1), Ordinal(w)]");
    }

    #[test]
    fn landing_fixtures_cover_moved_landings() {
        let fixtures = landing_fixtures();
        assert!(fixtures.len() >= 200);
        let f = &fixtures[0];
        assert_ne!(landing(&f.provider, &f.delta, &f.gamma).unwrap(), f.delta);
    }

    #[test]
    fn ordinal_shrinking_goes_down() {
        let x = Ordinal::parse("w^2*2 + w + 3").unwrap();
        let s = shrink_ordinal(&x);
        assert!(s.contains(&Ordinal::parse("w^2*2 + w + 2").unwrap()));
        assert!(s.contains(&Ordinal::parse("w^2 + w + 3").unwrap()));
        assert!(s.iter().all(|y| *y < x));
    }
}
