//! Colorings of triples built from branch splitting, `ρ` and oscillation,
//! plus finite checkers for the square-bracket relations.
//!
//! A [`CubeColoring`] indexes a [`BranchFamily`] by an increasing list of
//! ordinals, so `Δ(α,β)` and `<_lex` are read off the branches at the
//! positions of `α` and `β`. The pair weight `ϱ` is [`Rho`] over the
//! configured provider.
//!
//! Minima of `Z`-sets are found by ascending search `ζ = lower + k` for
//! `k` below the search cap; an exhausted search colors the triple 0 and is
//! counted.
//!
//! The fiber map `e` and the surjection `h` are desk stand-ins: `e(ζ,ε)`
//! XORs the finite part of `ζ` with a 6-bit mask keyed by the seed, `ε` and
//! the infinite part of `ζ`, so it is injective on each fiber restricted to
//! any block `{η + k : k < ω}`, which is the domain every `Z`-search scans.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::branches::BranchFamily;
use crate::cseq::{Provider, ProviderMode};
use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::oscillation::osc3;
use crate::sample::{mix64, random_increasing, rng_for, OrdinalShape};
use crate::walks::Rho;

/// Default `Z`-search cap.
pub const DEFAULT_SEARCH_CAP: u64 = 100_000;

/// A stable 64-bit digest of an ordinal's normal form.
pub fn ordinal_digest(x: &Ordinal) -> u64 {
    x.terms().iter().fold(0x51A7_0D15_C0DE_0001, |acc, t| {
        mix64(acc ^ ordinal_digest(&t.exponent).rotate_left(17) ^ t.coefficient.wrapping_mul(0x9E37_79B9))
    })
}

/// `e(ζ,ε)` with injective fibers.
#[derive(Clone)]
pub struct FiberInjection(Arc<dyn Fn(&Ordinal, &Ordinal) -> u64 + Send + Sync>);

impl FiberInjection {
    /// `finite(ζ) ⊕ mask(seed, ε, ζ − finite(ζ))` with a 6-bit mask.
    pub fn keyed(seed: u64) -> Self {
        FiberInjection(Arc::new(move |zeta: &Ordinal, eps: &Ordinal| {
            let mask = mix64(seed ^ mix64(ordinal_digest(eps)) ^ ordinal_digest(&zeta.infinite_part()).rotate_left(31)) & 0x3F;
            zeta.finite_part() ^ mask
        }))
    }

    pub fn from_fn(f: impl Fn(&Ordinal, &Ordinal) -> u64 + Send + Sync + 'static) -> Self {
        FiberInjection(Arc::new(f))
    }

    pub fn eval(&self, zeta: &Ordinal, eps: &Ordinal) -> u64 {
        (self.0)(zeta, eps)
    }

    /// True when `ζ ↦ e(ζ,ε)` is injective on `domain`.
    pub fn is_injective_on(&self, eps: &Ordinal, domain: &[Ordinal]) -> bool {
        let mut seen: BTreeMap<u64, &Ordinal> = BTreeMap::new();
        domain.iter().all(|z| match seen.insert(self.eval(z, eps), z) {
            Some(prev) => prev == z,
            None => true,
        })
    }
}

impl fmt::Debug for FiberInjection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("FiberInjection(..)")
    }
}

/// `h : Ordinal → {0, …, colors−1}`.
#[derive(Clone)]
pub struct ColorSurjection {
    colors: u64,
    map: Arc<dyn Fn(&Ordinal) -> u64 + Send + Sync>,
}

impl ColorSurjection {
    /// `(finite(ζ) + digest(ζ − finite(ζ))) mod colors`; onto on every run
    /// of `colors` consecutive ordinals with a common infinite part.
    pub fn modulo(colors: u64) -> Result<Self> {
        if colors == 0 {
            return Err(Error::Config("color count must be positive".into()));
        }
        Ok(ColorSurjection {
            colors,
            map: Arc::new(move |x: &Ordinal| {
                let offset = if x.is_finite() { 0 } else { ordinal_digest(&x.infinite_part()) % colors };
                (x.finite_part() % colors + offset) % colors
            }),
        })
    }

    /// Values are reduced modulo `colors`.
    pub fn from_fn(colors: u64, f: impl Fn(&Ordinal) -> u64 + Send + Sync + 'static) -> Result<Self> {
        if colors == 0 {
            return Err(Error::Config("color count must be positive".into()));
        }
        Ok(ColorSurjection {
            colors,
            map: Arc::new(move |x: &Ordinal| f(x) % colors),
        })
    }

    pub fn colors(&self) -> u64 {
        self.colors
    }

    pub fn eval(&self, x: &Ordinal) -> u64 {
        (self.map)(x)
    }
}

impl fmt::Debug for ColorSurjection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ColorSurjection({} colors)", self.colors)
    }
}

/// A coloring of pairs of ordinals.
pub type PairColoring = Arc<dyn Fn(&Ordinal, &Ordinal) -> Ordinal + Send + Sync>;

/// A seeded pseudo-random pair coloring into `colors` finite values.
pub fn seeded_pair_coloring(seed: u64, colors: u64) -> PairColoring {
    let colors = colors.max(1);
    Arc::new(move |a: &Ordinal, b: &Ordinal| {
        let h = mix64(seed ^ mix64(ordinal_digest(a)) ^ ordinal_digest(b).rotate_left(23));
        Ordinal::nat(h % colors)
    })
}

/// `c_ω`: finite values pass through, infinite ones become 0.
pub fn omega_projection(value: &Ordinal) -> u64 {
    value.as_finite().unwrap_or(0)
}

/// Which triple coloring a [`CubeColoring`] evaluates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CubeVariant {
    /// `h(min Z)` under a lexicographic case split.
    #[default]
    Stability,
    /// The four-case split on `Δ` comparisons.
    Ch,
    /// Oscillation mixed with the `c_ω` projection of a base variant.
    Mixed,
}

impl std::str::FromStr for CubeVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "stability" => Ok(CubeVariant::Stability),
            "ch" => Ok(CubeVariant::Ch),
            "mixed" => Ok(CubeVariant::Mixed),
            other => Err(Error::Config(format!("unknown cube variant '{other}'"))),
        }
    }
}

/// Which case of the four-case coloring fired.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChCase {
    /// `Δ(α,β) < Δ(β,γ)`: `d(Δ(α,γ), Δ(β,γ))`.
    SplitBelow,
    /// `Δ(α,β) = Δ(β,γ)`: `d(Δ(α,γ), ϱ(β,γ))`.
    SplitEqual,
    /// `Δ(α,β) > Δ(β,γ)` and `b_α <_lex b_β`: `d(Δ(α,β), ϱ(α,γ))`.
    SplitAboveAscending,
    /// `Δ(α,β) > Δ(β,γ)` and `b_β <_lex b_α`: `h(min Z_{(α,β,γ)})`.
    SplitAboveDescending,
}

/// Where a cube configuration takes its branch family from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilySource {
    Path(PathBuf),
    Inline(Vec<String>),
    Random {
        size: usize,
        depth: usize,
        #[serde(default = "two")]
        alphabet: u8,
    },
}

fn two() -> u8 {
    2
}

fn default_cap() -> u64 {
    DEFAULT_SEARCH_CAP
}

fn default_colors() -> u64 {
    8
}

/// The JSON configuration block of a cube coloring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CubeConfig {
    #[serde(default)]
    pub variant: CubeVariant,
    /// Base coloring projected by `c_ω` in the mixed variant.
    #[serde(default)]
    pub mixed_base: CubeVariant,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_colors")]
    pub colors: u64,
    #[serde(default = "default_cap")]
    pub search_cap: u64,
    pub family: FamilySource,
    #[serde(default)]
    pub provider: ProviderMode,
    /// Ordinals indexing the branches, increasing; seeded when absent.
    #[serde(default)]
    pub points: Option<Vec<Ordinal>>,
}

/// A configured triple coloring.
pub struct CubeColoring {
    variant: CubeVariant,
    mixed_base: CubeVariant,
    family: Arc<BranchFamily>,
    points: Vec<Ordinal>,
    rho: Rho<Provider>,
    e: FiberInjection,
    h: ColorSurjection,
    d: PairColoring,
    search_cap: u64,
    exhausted: AtomicU64,
}

impl fmt::Debug for CubeColoring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CubeColoring")
            .field("variant", &self.variant)
            .field("points", &self.points.len())
            .field("search_cap", &self.search_cap)
            .finish_non_exhaustive()
    }
}

impl CubeColoring {
    /// Builds a coloring with the default `e`, `h` and `d` for `seed`.
    pub fn new(
        variant: CubeVariant,
        family: Arc<BranchFamily>,
        points: Vec<Ordinal>,
        provider: Provider,
        seed: u64,
        colors: u64,
    ) -> Result<Self> {
        if points.len() != family.len() {
            return Err(Error::Config(format!(
                "{} points for {} branches",
                points.len(),
                family.len()
            )));
        }
        if !points.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Config("points must be strictly increasing".into()));
        }
        Ok(CubeColoring {
            variant,
            mixed_base: CubeVariant::Stability,
            family,
            points,
            rho: Rho::new(provider),
            e: FiberInjection::keyed(seed),
            h: ColorSurjection::modulo(colors)?,
            d: seeded_pair_coloring(mix64(seed ^ 0xD), colors),
            search_cap: DEFAULT_SEARCH_CAP,
            exhausted: AtomicU64::new(0),
        })
    }

    /// Builds a coloring from its JSON configuration.
    pub fn from_config(cfg: &CubeConfig) -> Result<Self> {
        let family = match &cfg.family {
            FamilySource::Path(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
                BranchFamily::from_json(&text)?
            }
            FamilySource::Inline(texts) => BranchFamily::from_strings(texts)?,
            FamilySource::Random { size, depth, alphabet } => {
                BranchFamily::random(&mut rng_for(cfg.seed, 0), *alphabet, *depth, *size)?
            }
        };
        let points = match &cfg.points {
            Some(p) => p.clone(),
            None => random_increasing(&mut rng_for(cfg.seed, 1), OrdinalShape::default(), family.len()),
        };
        if cfg.variant == CubeVariant::Mixed && cfg.mixed_base == CubeVariant::Mixed {
            return Err(Error::Config("the mixed variant needs a stability or ch base".into()));
        }
        let mut out = Self::new(cfg.variant, Arc::new(family), points, Provider::new(cfg.provider), cfg.seed, cfg.colors)?;
        out.mixed_base = cfg.mixed_base;
        out.search_cap = cfg.search_cap;
        Ok(out)
    }

    pub fn with_fiber_injection(mut self, e: FiberInjection) -> Self {
        self.e = e;
        self
    }

    pub fn with_surjection(mut self, h: ColorSurjection) -> Self {
        self.h = h;
        self
    }

    pub fn with_pair_coloring(mut self, d: PairColoring) -> Self {
        self.d = d;
        self
    }

    pub fn with_search_cap(mut self, cap: u64) -> Self {
        self.search_cap = cap;
        self
    }

    pub fn with_mixed_base(mut self, base: CubeVariant) -> Result<Self> {
        if base == CubeVariant::Mixed {
            return Err(Error::Config("the mixed variant needs a stability or ch base".into()));
        }
        self.mixed_base = base;
        Ok(self)
    }

    pub fn variant(&self) -> CubeVariant {
        self.variant
    }

    pub fn family(&self) -> &Arc<BranchFamily> {
        &self.family
    }

    pub fn points(&self) -> &[Ordinal] {
        &self.points
    }

    pub fn provider(&self) -> &Provider {
        self.rho.provider()
    }

    pub fn fiber_injection(&self) -> &FiberInjection {
        &self.e
    }

    pub fn surjection(&self) -> &ColorSurjection {
        &self.h
    }

    /// `Z`-searches that hit the cap so far.
    pub fn exhausted_searches(&self) -> u64 {
        self.exhausted.load(Ordering::Relaxed)
    }

    /// Position of `x` among the indexing ordinals.
    pub fn index_of(&self, x: &Ordinal) -> Result<usize> {
        self.points
            .binary_search(x)
            .map_err(|_| Error::Precondition(format!("{x} does not index a branch")))
    }

    /// `Δ(b_α, b_β)`.
    pub fn delta(&self, a: &Ordinal, b: &Ordinal) -> Result<usize> {
        let (i, j) = (self.index_of(a)?, self.index_of(b)?);
        if i == j {
            return Err(Error::Precondition(format!("Δ needs distinct points, got {a} twice")));
        }
        Ok(self.family.delta_unchecked(i, j))
    }

    /// `b_α <_lex b_β`.
    pub fn lex_less(&self, a: &Ordinal, b: &Ordinal) -> Result<bool> {
        let (i, j) = (self.index_of(a)?, self.index_of(b)?);
        Ok(i != j && self.family.lex_less_unchecked(i, j))
    }

    /// `ϱ({α,β})`.
    pub fn varrho(&self, a: &Ordinal, b: &Ordinal) -> Result<Ordinal> {
        if a <= b {
            self.rho.eval(a, b)
        } else {
            self.rho.eval(b, a)
        }
    }

    fn max_delta(&self, a: &Ordinal, b: &Ordinal, c: &Ordinal) -> Result<usize> {
        Ok(self.delta(a, b)?.max(self.delta(a, c)?).max(self.delta(b, c)?))
    }

    /// Least `ζ = lower + k`, `k < cap`, accepted by `guard`.
    fn z_search(&self, lower: &Ordinal, guard: impl Fn(&Ordinal) -> bool) -> Option<Ordinal> {
        let found = (0..self.search_cap).map(|k| lower.add_nat(k)).find(|z| guard(z));
        if found.is_none() {
            self.exhausted.fetch_add(1, Ordering::Relaxed);
        }
        found
    }

    /// `min Z_{(α,β,γ)}` for the stability coloring: the least `ζ ≥ ϱ({α,β})`
    /// with `max Δ``{α,β,γ}² ≥ e(ζ, ϱ({β,γ}))`.
    pub fn z_min_stability(&self, a: &Ordinal, b: &Ordinal, c: &Ordinal) -> Result<Option<Ordinal>> {
        let threshold = self.max_delta(a, b, c)? as u64;
        let lower = self.varrho(a, b)?;
        let key = self.varrho(b, c)?;
        Ok(self.z_search(&lower, |z| self.e.eval(z, &key) <= threshold))
    }

    /// `min Z_{(α,β,γ)}` for the four-case coloring: the least
    /// `ζ ≥ ϱ(α,γ)` with `e(Δ(α,β), ϱ(β,γ)) ≥ e(ζ, ϱ(β,γ))`.
    pub fn z_min_ch(&self, a: &Ordinal, b: &Ordinal, c: &Ordinal) -> Result<Option<Ordinal>> {
        let key = self.varrho(b, c)?;
        let bound = self.e.eval(&Ordinal::nat(self.delta(a, b)? as u64), &key);
        let lower = self.varrho(a, c)?;
        Ok(self.z_search(&lower, |z| self.e.eval(z, &key) <= bound))
    }

    fn h_of(&self, z: Option<Ordinal>) -> Ordinal {
        z.map_or_else(Ordinal::zero, |z| Ordinal::nat(self.h.eval(&z)))
    }

    /// The lexicographic three-case coloring of an unordered triple: with
    /// `γ` the maximum and `α <_lex β` the other two, `h(min Z_{(β,α,γ)})`
    /// when `b_β <_lex b_γ`, `h(min Z_{(α,β,γ)})` when `b_γ <_lex b_α`, else 0.
    pub fn color3_stability(&self, x: &Ordinal, y: &Ordinal, z: &Ordinal) -> Result<Ordinal> {
        let mut v = [x, y, z];
        v.sort();
        if v[0] == v[1] || v[1] == v[2] {
            return Err(Error::Precondition("a triple needs three distinct points".into()));
        }
        let gamma = v[2];
        let (alpha, beta) = if self.lex_less(v[0], v[1])? { (v[0], v[1]) } else { (v[1], v[0]) };
        if self.lex_less(beta, gamma)? {
            Ok(self.h_of(self.z_min_stability(beta, alpha, gamma)?))
        } else if self.lex_less(gamma, alpha)? {
            Ok(self.h_of(self.z_min_stability(alpha, beta, gamma)?))
        } else {
            Ok(Ordinal::zero())
        }
    }

    /// Which of the four cases applies to `α < β < γ`.
    pub fn ch_case(&self, a: &Ordinal, b: &Ordinal, c: &Ordinal) -> Result<ChCase> {
        require_increasing(a, b, c)?;
        let (ab, bc) = (self.delta(a, b)?, self.delta(b, c)?);
        Ok(match ab.cmp(&bc) {
            std::cmp::Ordering::Less => ChCase::SplitBelow,
            std::cmp::Ordering::Equal => ChCase::SplitEqual,
            std::cmp::Ordering::Greater if self.lex_less(a, b)? => ChCase::SplitAboveAscending,
            std::cmp::Ordering::Greater => ChCase::SplitAboveDescending,
        })
    }

    /// The four-case coloring of `α < β < γ`.
    pub fn color3_ch(&self, a: &Ordinal, b: &Ordinal, c: &Ordinal) -> Result<Ordinal> {
        let nat = |k: usize| Ordinal::nat(k as u64);
        Ok(match self.ch_case(a, b, c)? {
            ChCase::SplitBelow => (self.d)(&nat(self.delta(a, c)?), &nat(self.delta(b, c)?)),
            ChCase::SplitEqual => (self.d)(&nat(self.delta(a, c)?), &self.varrho(b, c)?),
            ChCase::SplitAboveAscending => (self.d)(&nat(self.delta(a, b)?), &self.varrho(a, c)?),
            ChCase::SplitAboveDescending => self.h_of(self.z_min_ch(a, b, c)?),
        })
    }

    fn base_color(&self, base: CubeVariant, a: &Ordinal, b: &Ordinal, c: &Ordinal) -> Result<Ordinal> {
        match base {
            CubeVariant::Ch => self.color3_ch(a, b, c),
            _ => self.color3_stability(a, b, c),
        }
    }

    /// `c_ω` of the mixed variant's base coloring.
    pub fn c_omega(&self, a: &Ordinal, b: &Ordinal, c: &Ordinal) -> Result<u64> {
        Ok(omega_projection(&self.base_color(self.mixed_base, a, b, c)?))
    }

    /// `osc̄(α,β,γ) − 1` when `osc̄ > 0` and `Δ(α,β) < Δ(β,γ)`, else `c_ω`.
    pub fn mixed_d(&self, a: &Ordinal, b: &Ordinal, c: &Ordinal) -> Result<u64> {
        require_increasing(a, b, c)?;
        let osc = osc3(self.provider(), a, b, c)?;
        if osc > 0 && self.delta(a, b)? < self.delta(b, c)? {
            Ok(osc as u64 - 1)
        } else {
            self.c_omega(a, b, c)
        }
    }

    /// The configured variant on a triple given in any order.
    pub fn color3(&self, x: &Ordinal, y: &Ordinal, z: &Ordinal) -> Result<Ordinal> {
        let mut v = [x, y, z];
        v.sort();
        if v[0] == v[1] || v[1] == v[2] {
            return Err(Error::Precondition("a triple needs three distinct points".into()));
        }
        match self.variant {
            CubeVariant::Stability => self.color3_stability(v[0], v[1], v[2]),
            CubeVariant::Ch => self.color3_ch(v[0], v[1], v[2]),
            CubeVariant::Mixed => self.mixed_d(v[0], v[1], v[2]).map(Ordinal::nat),
        }
    }
}

fn require_increasing(a: &Ordinal, b: &Ordinal, c: &Ordinal) -> Result<()> {
    if a < b && b < c {
        Ok(())
    } else {
        Err(Error::Order(format!("expected {a} < {b} < {c}")))
    }
}

/// Colors attained on the tuples a square-bracket check enumerates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareBracketReport<T, K> {
    pub tuples_examined: u64,
    pub attained: Vec<K>,
    pub missing: Vec<K>,
    /// The first tuple found for each attained color.
    pub witnesses: Vec<(K, Vec<T>)>,
}

fn bracket_scan<T, K>(
    coloring: impl Fn(&[T]) -> K,
    points: &[T],
    n: usize,
    colors: &BTreeSet<K>,
    keep: impl Fn(&[T]) -> bool,
) -> SquareBracketReport<T, K>
where
    T: Ord + Clone,
    K: Ord + Clone,
{
    let mut witnesses: BTreeMap<K, Vec<T>> = BTreeMap::new();
    let mut examined = 0u64;
    crate::magma::for_each_tuple(points.len(), n, |idx| {
        let tuple: Vec<T> = idx.iter().map(|&i| points[i].clone()).collect();
        if !keep(&tuple) {
            return;
        }
        examined += 1;
        witnesses.entry(coloring(&tuple)).or_insert(tuple);
    });
    let attained: Vec<K> = witnesses.keys().cloned().collect();
    let missing = colors.iter().filter(|k| !witnesses.contains_key(*k)).cloned().collect();
    SquareBracketReport {
        tuples_examined: examined,
        attained,
        missing,
        witnesses: witnesses.into_iter().collect(),
    }
}

/// Colors of every increasing `n`-tuple of `A ∪ B` meeting both `A` and `B`.
pub fn square_bracket_check<T, K>(
    coloring: impl Fn(&[T]) -> K,
    a: &[T],
    b: &[T],
    n: usize,
    colors: &BTreeSet<K>,
) -> Result<SquareBracketReport<T, K>>
where
    T: Ord + Clone,
    K: Ord + Clone,
{
    let sa: BTreeSet<&T> = a.iter().collect();
    let sb: BTreeSet<&T> = b.iter().collect();
    if !sa.is_disjoint(&sb) {
        return Err(Error::Precondition("the rectangular check needs disjoint A and B".into()));
    }
    let points: Vec<T> = sa.union(&sb).map(|x| (*x).clone()).collect();
    Ok(bracket_scan(coloring, &points, n, colors, |t| {
        t.iter().any(|x| sa.contains(x)) && t.iter().any(|x| sb.contains(x))
    }))
}

/// Colors of every increasing `n`-tuple of `A`.
pub fn square_bracket_check_plain<T, K>(
    coloring: impl Fn(&[T]) -> K,
    a: &[T],
    n: usize,
    colors: &BTreeSet<K>,
) -> SquareBracketReport<T, K>
where
    T: Ord + Clone,
    K: Ord + Clone,
{
    let points: Vec<T> = a.iter().collect::<BTreeSet<_>>().into_iter().cloned().collect();
    bracket_scan(coloring, &points, n, colors, |_| true)
}

/// Families up to this size get an exact clique search in [`u_check`].
pub const U_EXACT_LIMIT: usize = 20;

/// A sub-family of at least `want` members with `min c[a × b] > τ` for all
/// distinct members `a, b`; the largest such sub-family when searched
/// exactly, a greedy one beyond [`U_EXACT_LIMIT`] members.
pub fn u_check<T, K>(
    coloring: impl Fn(&T, &T) -> K,
    family: &[Vec<T>],
    tau: &K,
    want: usize,
) -> Result<Option<Vec<usize>>>
where
    T: Ord,
    K: Ord,
{
    for (i, a) in family.iter().enumerate() {
        for b in &family[i + 1..] {
            if a.iter().any(|x| b.contains(x)) {
                return Err(Error::Precondition("u_check needs pairwise disjoint sets".into()));
            }
        }
    }
    let pair = |x: &T, y: &T| if x <= y { coloring(x, y) } else { coloring(y, x) };
    let compatible = |i: usize, j: usize| {
        family[i].iter().all(|x| family[j].iter().all(|y| pair(x, y) > *tau))
    };
    let n = family.len();
    let mut adjacent = vec![vec![false; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let ok = compatible(i, j);
            adjacent[i][j] = ok;
            adjacent[j][i] = ok;
        }
    }
    let selection = if n <= U_EXACT_LIMIT {
        let masks: Vec<u32> = (0..n)
            .map(|i| (0..n).filter(|&j| adjacent[i][j]).fold(0u32, |m, j| m | 1 << j))
            .collect();
        let mut best = 0u32;
        max_clique(&masks, 0, if n == 0 { 0 } else { (1u32 << n) - 1 }, 0, &mut best);
        (0..n).filter(|&i| best >> i & 1 == 1).collect::<Vec<_>>()
    } else {
        let mut order: Vec<usize> = (0..n).collect();
        let degree = |i: usize| adjacent[i].iter().filter(|&&x| x).count();
        order.sort_by_key(|&i| (std::cmp::Reverse(degree(i)), i));
        let mut chosen: Vec<usize> = Vec::new();
        for i in order {
            if chosen.iter().all(|&c| adjacent[i][c]) {
                chosen.push(i);
            }
        }
        chosen.sort_unstable();
        chosen
    };
    if selection.len() < want.max(1) {
        return Ok(None);
    }
    let verified = selection
        .iter()
        .enumerate()
        .all(|(k, &i)| selection[k + 1..].iter().all(|&j| compatible(i, j)));
    assert!(verified, "u_check selection failed re-verification");
    Ok(Some(selection))
}

fn max_clique(adj: &[u32], current: u32, candidates: u32, excluded: u32, best: &mut u32) {
    if candidates == 0 && excluded == 0 {
        if current.count_ones() > best.count_ones() || (current.count_ones() == best.count_ones() && current < *best) {
            *best = current;
        }
        return;
    }
    if current.count_ones() + candidates.count_ones() < best.count_ones() {
        return;
    }
    let mut cand = candidates;
    let mut excl = excluded;
    while cand != 0 {
        let v = cand.trailing_zeros() as usize;
        let bit = 1u32 << v;
        max_clique(adj, current | bit, cand & adj[v], excl & adj[v], best);
        cand &= !bit;
        excl |= bit;
    }
}
