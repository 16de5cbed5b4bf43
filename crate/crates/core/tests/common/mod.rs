//! Independent oracles shared by the integration tests.
//!
//! Ordinals below `ω^ω` are held here as coefficient vectors indexed by
//! exponent, so nothing below goes through the library's term lists.

#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::HashMap;

use ordcolor::Ordinal;
use rand::Rng;

/// `Σ ω^k · coeffs[k]`, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Cnf(pub Vec<u64>);

impl Cnf {
    pub fn new(mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Cnf(coeffs)
    }

    pub fn nat(n: u64) -> Self {
        Cnf::new(vec![n])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_limit(&self) -> bool {
        !self.is_zero() && self.0[0] == 0
    }

    pub fn coeff(&self, k: usize) -> u64 {
        self.0.get(k).copied().unwrap_or(0)
    }

    pub fn pred(&self) -> Option<Cnf> {
        if self.is_zero() || self.0[0] == 0 {
            return None;
        }
        let mut c = self.0.clone();
        c[0] -= 1;
        Some(Cnf::new(c))
    }

    pub fn succ(&self) -> Cnf {
        let mut c = self.0.clone();
        if c.is_empty() {
            c.push(0);
        }
        c[0] += 1;
        Cnf::new(c)
    }

    /// `self[n]` for a limit: lower the least nonzero exponent `k` by one
    /// step and put `n` at `k − 1`.
    pub fn fund(&self, n: u64) -> Cnf {
        assert!(self.is_limit() && n >= 1);
        let k = self.0.iter().position(|&c| c > 0).unwrap();
        let mut c = self.0.clone();
        c[k] -= 1;
        c[k - 1] = n;
        Cnf::new(c)
    }

    pub fn to_ordinal(&self) -> Ordinal {
        let terms = self
            .0
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c > 0)
            .map(|(k, &c)| (Ordinal::nat(k as u64), c));
        Ordinal::from_terms(terms).unwrap()
    }

    pub fn from_ordinal(o: &Ordinal) -> Cnf {
        let mut coeffs = Vec::new();
        for t in o.terms() {
            let k = t.exponent.as_finite().expect("exponent is finite") as usize;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, 0);
            }
            coeffs[k] = t.coefficient;
        }
        Cnf::new(coeffs)
    }
}

impl Ord for Cnf {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for Cnf {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Random ordinal below `ω^(max_exp+1)` with coefficients at most `max_coeff`.
pub fn random_cnf<R: Rng>(rng: &mut R, max_exp: usize, max_coeff: u64) -> Cnf {
    Cnf::new((0..=max_exp).map(|_| if rng.gen_bool(0.5) { rng.gen_range(1..=max_coeff) } else { 0 }).collect())
}

/// A random pair `α < β`, both below `ω^(max_exp+1)`.
pub fn random_cnf_pair<R: Rng>(rng: &mut R, max_exp: usize, max_coeff: u64) -> (Cnf, Cnf) {
    loop {
        let a = random_cnf(rng, max_exp, max_coeff);
        let b = random_cnf(rng, max_exp, max_coeff);
        match a.cmp(&b) {
            Ordering::Less => return (a, b),
            Ordering::Greater => return (b, a),
            Ordering::Equal => {}
        }
    }
}

/// The canonical-ladder C-sequence, queried by scanning `n = 1, 2, …`.
pub struct LadderWalks;

impl LadderWalks {
    /// `min(C_β ∖ α)`.
    pub fn step(beta: &Cnf, alpha: &Cnf) -> Cnf {
        if let Some(p) = beta.pred() {
            return p;
        }
        (1..).map(|n| beta.fund(n)).find(|x| x >= alpha).unwrap()
    }

    /// Elements of `C_β` below `α`, increasing.
    pub fn below(beta: &Cnf, alpha: &Cnf) -> Vec<Cnf> {
        if let Some(p) = beta.pred() {
            return if &p < alpha { vec![p] } else { Vec::new() };
        }
        if beta.is_zero() {
            return Vec::new();
        }
        (1..).map(|n| beta.fund(n)).take_while(|x| x < alpha).collect()
    }

    /// Trace from `β` down to `α`, excluding `α`.
    pub fn trace(alpha: &Cnf, beta: &Cnf) -> Vec<Cnf> {
        let mut out = vec![beta.clone()];
        loop {
            let next = Self::step(out.last().unwrap(), alpha);
            if &next == alpha {
                return out;
            }
            out.push(next);
        }
    }

    /// `λ₂(α,β)`.
    pub fn lambda2(alpha: &Cnf, beta: &Cnf) -> Cnf {
        Self::trace(alpha, beta)
            .iter()
            .filter_map(|eta| Self::below(eta, alpha).last().cloned())
            .max()
            .unwrap_or_default()
    }
}

/// `ρ` by its defining recursion, top down, memoised per oracle instance.
#[derive(Default)]
pub struct RhoOracle {
    memo: HashMap<(Cnf, Cnf), u64>,
}

impl RhoOracle {
    pub fn eval(&mut self, alpha: &Cnf, beta: &Cnf) -> u64 {
        if alpha == beta {
            return 0;
        }
        if let Some(&v) = self.memo.get(&(alpha.clone(), beta.clone())) {
            return v;
        }
        let below = LadderWalks::below(beta, alpha);
        let mut best = below.len() as u64;
        let next = LadderWalks::step(beta, alpha);
        if &next > alpha {
            best = best.max(self.eval(alpha, &next));
        }
        let floor = LadderWalks::lambda2(alpha, beta);
        for xi in below.iter().filter(|xi| **xi > floor) {
            best = best.max(self.eval(xi, alpha));
        }
        self.memo.insert((alpha.clone(), beta.clone()), best);
        best
    }
}

/// One y-convex piece as `(lower cut, upper cut, least element)`.
pub type Piece = (Option<u64>, Option<u64>, u64);

/// `Osc_ε(x,y)` over finite sets of naturals by grouping each element of
/// `x ∖ ε` with the elements of `y` around it; `None` when `x ∩ y ⊄ ε`.
pub fn osc_brute(x: &[u64], y: &[u64], eps: u64) -> Option<Vec<Piece>> {
    if x.iter().any(|v| *v >= eps && y.contains(v)) {
        return None;
    }
    let mut pieces: Vec<Piece> = Vec::new();
    if y.is_empty() {
        return Some(pieces);
    }
    let mut xs: Vec<u64> = x.iter().copied().filter(|v| *v >= eps).collect();
    xs.sort_unstable();
    xs.dedup();
    for v in xs {
        let lower = y.iter().copied().filter(|w| *w < v).max();
        let upper = y.iter().copied().filter(|w| *w > v).min();
        if !pieces.iter().any(|p| p.0 == lower && p.1 == upper) {
            pieces.push((lower, upper, v));
        }
    }
    Some(pieces)
}

/// A pseudo-random color of a tuple, independent of the library's mixers.
pub fn table_color(seed: u64, tuple: &[usize], colors: u64) -> u64 {
    let mut h = seed ^ 0x9e37_79b9_7f4a_7c15;
    for &t in tuple {
        h = (h ^ t as u64).wrapping_mul(0x1000_0000_01b3).rotate_left(17);
    }
    h % colors
}
