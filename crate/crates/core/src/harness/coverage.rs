//! Coverage runs: which colors the pipeline attains on `FS_n(X)` for
//! sampled `X`.
//!
//! A product counts toward color `k` only when every implementation of it
//! is colored `k`. Trials stop early once all colors are attained.

use std::collections::BTreeMap;

use rand::seq::index::sample as sample_ranks;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{magma_for, ExperimentConfig, PipelineColoring};
use crate::error::{Error, Result};
use crate::magma::{implementations, left_fold, Magma, MagmaElement, StandardMagma};
use crate::sample::{derive_seed, rng_for};

/// Version of the report layout.
pub const SCHEMA_VERSION: u32 = 1;

/// A product of sample elements carrying one color under every implementation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub color: u64,
    /// Positions in the trial's sample.
    pub positions: Vec<usize>,
    /// The operands, in the element JSON encoding.
    pub operands: Vec<Value>,
}

/// Outcome of one trial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    /// Increasing.
    pub attained: Vec<u64>,
    pub tuples_examined: u64,
    /// The products came from a uniform subsample of `FS_n(X)`.
    pub subsampled: bool,
    /// First witness of each attained color, by color.
    pub witnesses: Vec<Witness>,
}

/// Result of [`run_coverage`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub schema_version: u32,
    pub library_version: String,
    pub config: ExperimentConfig,
    pub trials: Vec<TrialRecord>,
    /// Fraction of trials attaining each color.
    pub hit_rates: Vec<f64>,
    /// `missing_histogram[m]` trials missed exactly `m` colors.
    pub missing_histogram: Vec<u64>,
}

impl CoverageReport {
    /// A report without trials.
    pub fn empty(config: ExperimentConfig) -> Self {
        let colors = config.colors as usize;
        CoverageReport {
            schema_version: SCHEMA_VERSION,
            library_version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            trials: Vec::new(),
            hit_rates: vec![0.0; colors],
            missing_histogram: vec![0; colors + 1],
        }
    }

    /// Trials attaining every color.
    pub fn full_coverage_trials(&self) -> usize {
        self.trials
            .iter()
            .filter(|t| t.attained.len() as u64 == self.config.colors)
            .count()
    }

    fn aggregate(&mut self) {
        let colors = self.config.colors as usize;
        let mut hits = vec![0u64; colors];
        let mut missing = vec![0u64; colors + 1];
        for t in &self.trials {
            for &c in &t.attained {
                hits[c as usize] += 1;
            }
            missing[colors - t.attained.len()] += 1;
        }
        let n = self.trials.len().max(1) as f64;
        self.hit_rates = hits.into_iter().map(|h| h as f64 / n).collect();
        self.missing_histogram = missing;
    }
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * u128::from(n - i) / u128::from(i + 1))
}

/// The `rank`-th increasing `k`-subset of `0..n` in lexicographic order.
fn unrank(mut rank: u128, n: usize, k: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut next = 0usize;
    for slot in 0..k {
        let remaining = (k - slot - 1) as u64;
        loop {
            let block = binomial((n - next - 1) as u64, remaining);
            if rank < block {
                break;
            }
            rank -= block;
            next += 1;
        }
        out.push(next);
        next += 1;
    }
    out
}

/// Color of the product of `operands` when all implementations agree.
fn product_color(
    magma: &StandardMagma,
    coloring: &PipelineColoring,
    operands: &[&MagmaElement],
) -> Result<Option<u64>> {
    if magma.is_associative_commutative() {
        return coloring.color(magma, &left_fold(magma, operands)?).map(Some);
    }
    let mut agreed = None;
    for value in implementations(magma, operands)? {
        let c = coloring.color(magma, &value)?;
        match agreed {
            None => agreed = Some(c),
            Some(a) if a != c => return Ok(None),
            Some(_) => {}
        }
    }
    Ok(agreed)
}

fn run_trial(cfg: &ExperimentConfig, magma: &StandardMagma, coloring: &PipelineColoring, trial: usize) -> Result<TrialRecord> {
    let seed = derive_seed(cfg.seed, trial as u64);
    let mut rng = rng_for(cfg.seed, trial as u64);
    let sample = magma.try_sample_distinct(&mut rng, cfg.sample_size, cfg.max_support)?;
    let n = cfg.arity;
    let total = binomial(sample.len() as u64, n as u64);
    let subsampled = total > u128::from(cfg.budget);
    let tuples: Box<dyn Iterator<Item = Vec<usize>>> = if subsampled {
        let size = usize::try_from(total)
            .map_err(|_| Error::Config(format!("{total} products are too many to subsample")))?;
        let mut ranks = sample_ranks(&mut rng, size, cfg.budget as usize).into_vec();
        ranks.sort_unstable();
        let len = sample.len();
        Box::new(ranks.into_iter().map(move |r| unrank(r as u128, len, n)))
    } else {
        let len = sample.len();
        Box::new((0..total).map(move |r| unrank(r, len, n)))
    };
    let mut witnesses: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    let mut examined = 0u64;
    for positions in tuples {
        if witnesses.len() as u64 == cfg.colors {
            break;
        }
        examined += 1;
        let operands: Vec<&MagmaElement> = positions.iter().map(|&i| &sample[i]).collect();
        if let Some(c) = product_color(magma, coloring, &operands)? {
            witnesses.entry(c).or_insert(positions);
        }
    }
    Ok(TrialRecord {
        trial,
        seed,
        attained: witnesses.keys().copied().collect(),
        tuples_examined: examined,
        subsampled,
        witnesses: witnesses
            .into_iter()
            .map(|(color, positions)| Witness {
                color,
                operands: positions.iter().map(|&i| sample[i].to_json()).collect(),
                positions,
            })
            .collect(),
    })
}

/// Runs every trial of `cfg`; serial and parallel runs give equal reports.
pub fn run_coverage(cfg: &ExperimentConfig) -> Result<CoverageReport> {
    let magma = magma_for(cfg)?;
    let coloring = PipelineColoring::new(cfg)?;
    let trials: Result<Vec<TrialRecord>> = if cfg.parallel {
        (0..cfg.trials)
            .into_par_iter()
            .map(|t| run_trial(cfg, &magma, &coloring, t))
            .collect()
    } else {
        (0..cfg.trials).map(|t| run_trial(cfg, &magma, &coloring, t)).collect()
    };
    let mut report = CoverageReport::empty(cfg.clone());
    report.trials = trials?;
    report.aggregate();
    Ok(report)
}

/// Recolors a witness's product and compares with its claimed color.
pub fn verify_witness(cfg: &ExperimentConfig, coloring: &PipelineColoring, witness: &Witness) -> Result<bool> {
    let magma = magma_for(cfg)?;
    let operands = witness
        .operands
        .iter()
        .map(|v| MagmaElement::from_json(cfg.magma, v))
        .collect::<Result<Vec<_>>>()?;
    if operands.len() != cfg.arity || witness.color >= cfg.colors {
        return Ok(false);
    }
    let refs: Vec<&MagmaElement> = operands.iter().collect();
    Ok(product_color(&magma, coloring, &refs)? == Some(witness.color))
}

/// Every witness re-verifies and every attained color lies below `θ`.
pub fn verify_report(report: &CoverageReport) -> Result<bool> {
    let coloring = PipelineColoring::new(&report.config)?;
    for trial in &report.trials {
        if trial.attained.iter().any(|&c| c >= report.config.colors) {
            return Ok(false);
        }
        let colors: Vec<u64> = trial.witnesses.iter().map(|w| w.color).collect();
        if colors != trial.attained {
            return Ok(false);
        }
        for w in &trial.witnesses {
            if !verify_witness(&report.config, &coloring, w)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
