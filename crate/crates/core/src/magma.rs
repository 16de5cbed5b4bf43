//! Well-behaved magmas, their support maps, `FS_n` enumeration and the
//! colorings `c = d ∘ φ`.
//!
//! Three variants ship: the free abelian group on countably many
//! generators, the free group (reduced words), and the rational vector space
//! with `x * y = |x − y|`, where `|v|` is whichever of `±v` has a positive
//! coefficient at its least basis index. Each satisfies
//! `φ(x) △ φ(y) ⊆ φ(x * y) ⊆ φ(x) ∪ φ(y)` for `x ≠ y`.
//!
//! JSON forms: free-abelian `{"0": 1, "3": -2}`, qvec `{"0": "1/2"}`, and
//! free-group words such as `"aB"` (lowercase a generator, uppercase its
//! inverse, `[n]` and `[~n]` for any generator index).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::seq::index::sample as sample_indices;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::sample::rng_for;

/// The shipped magma variants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MagmaKind {
    FreeAbelian,
    FreeGroup,
    Qvec,
}

impl FromStr for MagmaKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "free-abelian" => Ok(MagmaKind::FreeAbelian),
            "free-group" => Ok(MagmaKind::FreeGroup),
            "qvec" => Ok(MagmaKind::Qvec),
            other => Err(Error::Config(format!("unknown magma '{other}'"))),
        }
    }
}

impl fmt::Display for MagmaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MagmaKind::FreeAbelian => "free-abelian",
            MagmaKind::FreeGroup => "free-group",
            MagmaKind::Qvec => "qvec",
        })
    }
}

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    fn cancels(self, other: Letter) -> bool {
        self.generator == other.generator && self.inverse != other.inverse
    }
}

/// An element of one of the shipped magmas, kept in normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MagmaElement {
    /// Sorted `(generator, nonzero coefficient)` pairs.
    FreeAbelian(Vec<(usize, i64)>),
    /// A reduced word.
    FreeGroup(Vec<Letter>),
    /// Sorted `(basis index, nonzero coefficient)` pairs.
    Qvec(Vec<(usize, BigRational)>),
}

fn merge<C, F>(pairs: impl IntoIterator<Item = (usize, C)>, add: F) -> Vec<(usize, C)>
where
    C: Zero,
    F: Fn(C, C) -> C,
{
    let mut acc: BTreeMap<usize, C> = BTreeMap::new();
    for (g, c) in pairs {
        let next = match acc.remove(&g) {
            Some(prev) => add(prev, c),
            None => c,
        };
        acc.insert(g, next);
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

fn reduce(letters: impl IntoIterator<Item = Letter>) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for l in letters {
        if out.last().is_some_and(|&top| top.cancels(l)) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

impl MagmaElement {
    /// `Σ c·e_g`, merging repeats and dropping zeros.
    pub fn free_abelian(pairs: impl IntoIterator<Item = (usize, i64)>) -> Self {
        MagmaElement::FreeAbelian(merge(pairs, |a, b| a + b))
    }

    /// The reduced form of a word.
    pub fn free_group(letters: impl IntoIterator<Item = Letter>) -> Self {
        MagmaElement::FreeGroup(reduce(letters))
    }

    /// `Σ q·v_i`, merging repeats and dropping zeros.
    pub fn qvec(pairs: impl IntoIterator<Item = (usize, BigRational)>) -> Self {
        MagmaElement::Qvec(merge(pairs, |a, b| a + b))
    }

    /// `Σ (p/q)·v_i` from integer pairs.
    pub fn qvec_ratios(pairs: impl IntoIterator<Item = (usize, i64, i64)>) -> Self {
        Self::qvec(pairs.into_iter().map(|(i, p, q)| {
            (i, BigRational::new(BigInt::from(p), BigInt::from(q)))
        }))
    }

    pub fn identity(kind: MagmaKind) -> Self {
        match kind {
            MagmaKind::FreeAbelian => MagmaElement::FreeAbelian(Vec::new()),
            MagmaKind::FreeGroup => MagmaElement::FreeGroup(Vec::new()),
            MagmaKind::Qvec => MagmaElement::Qvec(Vec::new()),
        }
    }

    pub fn kind(&self) -> MagmaKind {
        match self {
            MagmaElement::FreeAbelian(_) => MagmaKind::FreeAbelian,
            MagmaElement::FreeGroup(_) => MagmaKind::FreeGroup,
            MagmaElement::Qvec(_) => MagmaKind::Qvec,
        }
    }

    /// Support, or the set of letters of a word.
    pub fn support(&self) -> Vec<usize> {
        match self {
            MagmaElement::FreeAbelian(v) => v.iter().map(|(g, _)| *g).collect(),
            MagmaElement::Qvec(v) => v.iter().map(|(g, _)| *g).collect(),
            MagmaElement::FreeGroup(w) => {
                let set: BTreeSet<usize> = w.iter().map(|l| l.generator).collect();
                set.into_iter().collect()
            }
        }
    }

    /// JSON form: a coefficient map or a word string.
    pub fn to_json(&self) -> Value {
        match self {
            MagmaElement::FreeAbelian(v) => Value::Object(
                v.iter().map(|(g, c)| (g.to_string(), Value::from(*c))).collect(),
            ),
            MagmaElement::Qvec(v) => Value::Object(
                v.iter().map(|(g, c)| (g.to_string(), Value::from(c.to_string()))).collect(),
            ),
            MagmaElement::FreeGroup(_) => Value::String(self.to_string()),
        }
    }

    /// Parses the JSON form of an element of `kind`.
    pub fn from_json(kind: MagmaKind, value: &Value) -> Result<Self> {
        let bad = |what: &str| Error::InvalidElement(format!("{what} in {value}"));
        match kind {
            MagmaKind::FreeGroup => {
                let text = value.as_str().ok_or_else(|| bad("expected a word string"))?;
                parse_word(text)
            }
            MagmaKind::FreeAbelian | MagmaKind::Qvec => {
                let map = value.as_object().ok_or_else(|| bad("expected a coefficient map"))?;
                let mut ints = Vec::new();
                let mut rats = Vec::new();
                for (key, coeff) in map {
                    let g: usize = key.parse().map_err(|_| bad("non-numeric generator key"))?;
                    if kind == MagmaKind::FreeAbelian {
                        let c = coeff.as_i64().ok_or_else(|| bad("non-integer coefficient"))?;
                        if c == 0 {
                            return Err(bad("zero coefficient"));
                        }
                        ints.push((g, c));
                    } else {
                        let c: BigRational = match coeff {
                            Value::String(s) => s.parse().map_err(|_| bad("bad rational"))?,
                            Value::Number(n) => n
                                .as_i64()
                                .map(|i| BigRational::from_integer(BigInt::from(i)))
                                .ok_or_else(|| bad("bad rational"))?,
                            _ => return Err(bad("bad rational")),
                        };
                        if c.is_zero() {
                            return Err(bad("zero coefficient"));
                        }
                        rats.push((g, c));
                    }
                }
                Ok(if kind == MagmaKind::FreeAbelian {
                    Self::free_abelian(ints)
                } else {
                    Self::qvec(rats)
                })
            }
        }
    }
}

impl fmt::Display for MagmaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MagmaElement::FreeGroup(w) => {
                for l in w {
                    if l.generator < 26 {
                        let c = (b'a' + l.generator as u8) as char;
                        write!(f, "{}", if l.inverse { c.to_ascii_uppercase() } else { c })?;
                    } else if l.inverse {
                        write!(f, "[~{}]", l.generator)?;
                    } else {
                        write!(f, "[{}]", l.generator)?;
                    }
                }
                Ok(())
            }
            _ => write!(f, "{}", self.to_json()),
        }
    }
}

impl Serialize for MagmaElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

/// Parses a free-group word.
pub fn parse_word(text: &str) -> Result<MagmaElement> {
    let mut letters = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            'a'..='z' => letters.push(Letter::new((c as u8 - b'a') as usize, false)),
            'A'..='Z' => letters.push(Letter::new((c as u8 - b'A') as usize, true)),
            '[' => {
                let inverse = chars.next_if_eq(&'~').is_some();
                let digits: String = std::iter::from_fn(|| chars.next_if(|d| d.is_ascii_digit())).collect();
                if chars.next() != Some(']') || digits.is_empty() {
                    return Err(Error::InvalidElement(format!("bad generator escape in \"{text}\"")));
                }
                let g = digits
                    .parse()
                    .map_err(|_| Error::InvalidElement(format!("generator index too large in \"{text}\"")))?;
                letters.push(Letter::new(g, inverse));
            }
            c if c.is_whitespace() => {}
            other => return Err(Error::InvalidElement(format!("bad letter '{other}' in \"{text}\""))),
        }
    }
    Ok(MagmaElement::free_group(letters))
}

/// `|v|`: negate when the coefficient at the least index is negative.
fn sign_normalize(v: Vec<(usize, BigRational)>) -> Vec<(usize, BigRational)> {
    if v.first().is_some_and(|(_, c)| c.is_negative()) {
        v.into_iter().map(|(g, c)| (g, -c)).collect()
    } else {
        v
    }
}

/// `x * y` in the magma both operands belong to.
pub fn op_apply(x: &MagmaElement, y: &MagmaElement) -> Result<MagmaElement> {
    match (x, y) {
        (MagmaElement::FreeAbelian(a), MagmaElement::FreeAbelian(b)) => Ok(MagmaElement::FreeAbelian(
            merge(a.iter().chain(b).copied(), |p, q| p + q),
        )),
        (MagmaElement::FreeGroup(a), MagmaElement::FreeGroup(b)) => {
            Ok(MagmaElement::FreeGroup(reduce(a.iter().chain(b).copied())))
        }
        (MagmaElement::Qvec(a), MagmaElement::Qvec(b)) => {
            let diff = merge(
                a.iter().cloned().chain(b.iter().map(|(g, c)| (*g, -c.clone()))),
                |p, q| p + q,
            );
            Ok(MagmaElement::Qvec(sign_normalize(diff)))
        }
        _ => Err(Error::VariantMismatch(format!(
            "cannot combine {} with {}",
            x.kind(),
            y.kind()
        ))),
    }
}

/// `φ(x)`: support or letter set.
pub fn phi(x: &MagmaElement) -> Vec<usize> {
    x.support()
}

/// A magma with a support map into finite sets of naturals.
pub trait Magma: Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn op(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem>;

    /// `φ(x)`, increasing.
    fn phi(&self, x: &Self::Elem) -> Vec<usize>;

    /// When true every implementation of `x₁ * ⋯ * x_n` agrees.
    fn is_associative_commutative(&self) -> bool {
        false
    }
}

/// One of the shipped variants over a fixed number of generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StandardMagma {
    pub kind: MagmaKind,
    pub generators: usize,
}

impl StandardMagma {
    pub fn new(kind: MagmaKind, generators: usize) -> Result<Self> {
        if generators == 0 {
            return Err(Error::Config("a magma needs at least one generator".into()));
        }
        Ok(StandardMagma { kind, generators })
    }

    /// A random non-identity element with at most `max_support` generators.
    pub fn sample_element<R: Rng + ?Sized>(&self, rng: &mut R, max_support: usize) -> MagmaElement {
        let width = rng.gen_range(1..=max_support.clamp(1, self.generators));
        let mut gens = sample_indices(rng, self.generators, width).into_vec();
        gens.sort_unstable();
        let signed = |rng: &mut R| {
            let m = rng.gen_range(1..=3i64);
            if rng.gen_bool(0.5) {
                -m
            } else {
                m
            }
        };
        match self.kind {
            MagmaKind::FreeAbelian => {
                MagmaElement::free_abelian(gens.into_iter().map(|g| (g, signed(rng))).collect::<Vec<_>>())
            }
            MagmaKind::Qvec => {
                let pairs: Vec<(usize, i64, i64)> =
                    gens.into_iter().map(|g| (g, signed(rng), rng.gen_range(1..=3))).collect();
                MagmaElement::qvec_ratios(pairs)
            }
            MagmaKind::FreeGroup => {
                // adjacent letters use distinct generators, so the word is reduced
                let mut letters = Vec::new();
                for _ in 0..rng.gen_range(1..=2 * width) {
                    let choices: Vec<usize> = gens
                        .iter()
                        .copied()
                        .filter(|&g| letters.last().is_none_or(|l: &Letter| l.generator != g))
                        .collect();
                    let g = if choices.is_empty() {
                        gens[0]
                    } else {
                        choices[rng.gen_range(0..choices.len())]
                    };
                    if letters.last().is_some_and(|l: &Letter| l.generator == g) {
                        break;
                    }
                    letters.push(Letter::new(g, rng.gen_bool(0.5)));
                }
                MagmaElement::free_group(letters)
            }
        }
    }

    /// `count` distinct random elements.
    ///
    /// # Panics
    /// When the sampler cannot find `count` distinct elements.
    pub fn sample_distinct<R: Rng + ?Sized>(&self, rng: &mut R, count: usize, max_support: usize) -> Vec<MagmaElement> {
        self.try_sample_distinct(rng, count, max_support)
            .expect("sample space too small")
    }

    /// `count` distinct random elements; errors after `1000·(count+1)` draws.
    pub fn try_sample_distinct<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        count: usize,
        max_support: usize,
    ) -> Result<Vec<MagmaElement>> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::with_capacity(count);
        let mut attempts = 0usize;
        while out.len() < count {
            let x = self.sample_element(rng, max_support);
            attempts += 1;
            if attempts > 1000 * (count + 1) {
                return Err(Error::Config(format!(
                    "found only {} distinct elements of the {} magma on {} generators, wanted {count}",
                    out.len(),
                    self.kind,
                    self.generators
                )));
            }
            if seen.insert(x.clone()) {
                out.push(x);
            }
        }
        Ok(out)
    }
}

impl Magma for StandardMagma {
    type Elem = MagmaElement;

    fn op(&self, x: &MagmaElement, y: &MagmaElement) -> Result<MagmaElement> {
        if x.kind() != self.kind || y.kind() != self.kind {
            return Err(Error::VariantMismatch(format!(
                "{} magma given {} and {}",
                self.kind,
                x.kind(),
                y.kind()
            )));
        }
        op_apply(x, y)
    }

    fn phi(&self, x: &MagmaElement) -> Vec<usize> {
        phi(x)
    }

    fn is_associative_commutative(&self) -> bool {
        self.kind == MagmaKind::FreeAbelian
    }
}

/// Which inclusion a sampled pair broke.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Inclusion {
    /// `φ(x) △ φ(y) ⊆ φ(x * y)`.
    SymmetricDifference,
    /// `φ(x * y) ⊆ φ(x) ∪ φ(y)`.
    Union,
}

/// A pair breaking one of the well-behaved inclusions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub left: String,
    pub right: String,
    pub product: String,
    pub inclusion: Inclusion,
}

/// Outcome of [`well_behaved_check`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WellBehavedReport {
    pub pairs_checked: usize,
    pub violation_count: usize,
    /// The first few violations.
    pub violations: Vec<Violation>,
    /// Largest number of distinct sampled elements sharing one `φ` value;
    /// a finite stand-in for φ being small-to-one.
    pub largest_fiber: usize,
}

impl WellBehavedReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }
}

const KEPT_VIOLATIONS: usize = 16;

/// Checks both well-behaved inclusions on `samples` random pairs `x ≠ y`
/// drawn by `draw`.
pub fn well_behaved_check_with<M, D>(magma: &M, samples: usize, seed: u64, mut draw: D) -> Result<WellBehavedReport>
where
    M: Magma,
    D: FnMut(&mut ChaCha8Rng) -> M::Elem,
{
    let mut rng = rng_for(seed, 0);
    let mut report = WellBehavedReport {
        pairs_checked: 0,
        violation_count: 0,
        violations: Vec::new(),
        largest_fiber: 0,
    };
    let mut fibers: HashMap<Vec<usize>, Vec<M::Elem>> = HashMap::new();
    let mut note = |x: &M::Elem, support: &Vec<usize>| {
        let fiber = fibers.entry(support.clone()).or_default();
        if !fiber.contains(x) {
            fiber.push(x.clone());
        }
        fiber.len()
    };
    while report.pairs_checked < samples {
        let x = draw(&mut rng);
        let y = draw(&mut rng);
        if x == y {
            continue;
        }
        report.pairs_checked += 1;
        let product = magma.op(&x, &y)?;
        let (px, py, pxy) = (magma.phi(&x), magma.phi(&y), magma.phi(&product));
        report.largest_fiber = report.largest_fiber.max(note(&x, &px)).max(note(&y, &py));
        let (sx, sy, sxy): (BTreeSet<usize>, BTreeSet<usize>, BTreeSet<usize>) = (
            px.into_iter().collect(),
            py.into_iter().collect(),
            pxy.into_iter().collect(),
        );
        let mut broken = Vec::new();
        if !sx.symmetric_difference(&sy).all(|g| sxy.contains(g)) {
            broken.push(Inclusion::SymmetricDifference);
        }
        if !sxy.iter().all(|g| sx.contains(g) || sy.contains(g)) {
            broken.push(Inclusion::Union);
        }
        for inclusion in broken {
            report.violation_count += 1;
            if report.violations.len() < KEPT_VIOLATIONS {
                report.violations.push(Violation {
                    left: format!("{x:?}"),
                    right: format!("{y:?}"),
                    product: format!("{product:?}"),
                    inclusion,
                });
            }
        }
    }
    Ok(report)
}

/// [`well_behaved_check_with`] over the magma's own sampler.
pub fn well_behaved_check(magma: &StandardMagma, samples: usize, seed: u64, max_support: usize) -> Result<WellBehavedReport> {
    well_behaved_check_with(magma, samples, seed, |rng| magma.sample_element(rng, max_support))
}

/// One `FS_n` tuple: operand positions in `X` and every implementation's
/// value, deduplicated in first-seen order.
#[derive(Clone, Debug, PartialEq)]
pub struct FsEntry<E> {
    pub operands: Vec<usize>,
    pub values: Vec<E>,
}

/// Largest supported `n` for [`fs_n`].
pub const FS_MAX_ARITY: usize = 4;

/// Every value of `x_{σ(0)} * ⋯ * x_{σ(n−1)}` over all orderings `σ` and
/// parenthesizations.
pub fn implementations<M: Magma>(magma: &M, operands: &[&M::Elem]) -> Result<Vec<M::Elem>> {
    let mut out: Vec<M::Elem> = Vec::new();
    let mut order: Vec<usize> = (0..operands.len()).collect();
    let push = |vals: Vec<M::Elem>, out: &mut Vec<M::Elem>| {
        for v in vals {
            if !out.contains(&v) {
                out.push(v);
            }
        }
    };
    loop {
        let seq: Vec<&M::Elem> = order.iter().map(|&i| operands[i]).collect();
        push(bracketings(magma, &seq)?, &mut out);
        if !next_permutation(&mut order) {
            break;
        }
    }
    Ok(out)
}

/// The single left fold, valid for associative-commutative magmas.
pub fn left_fold<M: Magma>(magma: &M, operands: &[&M::Elem]) -> Result<M::Elem> {
    let mut acc = operands[0].clone();
    for x in &operands[1..] {
        acc = magma.op(&acc, x)?;
    }
    Ok(acc)
}

fn bracketings<M: Magma>(magma: &M, seq: &[&M::Elem]) -> Result<Vec<M::Elem>> {
    if seq.len() == 1 {
        return Ok(vec![seq[0].clone()]);
    }
    let mut out: Vec<M::Elem> = Vec::new();
    for split in 1..seq.len() {
        let left = bracketings(magma, &seq[..split])?;
        let right = bracketings(magma, &seq[split..])?;
        for l in &left {
            for r in &right {
                let v = magma.op(l, r)?;
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
    }
    Ok(out)
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("pivot exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Calls `visit` on every strictly increasing `n`-tuple of positions below
/// `len`, in lexicographic order.
pub fn for_each_tuple(len: usize, n: usize, mut visit: impl FnMut(&[usize])) {
    if n == 0 || n > len {
        return;
    }
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        visit(&idx);
        let Some(k) = (0..n).rev().find(|&k| idx[k] < len - n + k) else {
            return;
        };
        idx[k] += 1;
        for m in k + 1..n {
            idx[m] = idx[m - 1] + 1;
        }
    }
}

/// `FS_n(X)` with every implementation of each product.
pub fn fs_n<M: Magma>(magma: &M, elements: &[M::Elem], n: usize) -> Result<Vec<FsEntry<M::Elem>>> {
    if !(2..=FS_MAX_ARITY).contains(&n) {
        return Err(Error::Precondition(format!("FS_n needs 2 ≤ n ≤ {FS_MAX_ARITY}, got {n}")));
    }
    for (i, x) in elements.iter().enumerate() {
        if elements[..i].contains(x) {
            return Err(Error::Precondition(format!("FS_n operands must be distinct; repeat at {i}")));
        }
    }
    let mut out = Vec::new();
    let mut failure = None;
    for_each_tuple(elements.len(), n, |idx| {
        if failure.is_some() {
            return;
        }
        let operands: Vec<&M::Elem> = idx.iter().map(|&i| &elements[i]).collect();
        match implementations(magma, &operands) {
            Ok(values) => out.push(FsEntry {
                operands: idx.to_vec(),
                values,
            }),
            Err(e) => failure = Some(e),
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// `c(x) = d(φ(x))`.
pub fn magma_coloring<M: Magma, K>(d: impl Fn(&[usize]) -> K, magma: &M, x: &M::Elem) -> K {
    d(&magma.phi(x))
}
