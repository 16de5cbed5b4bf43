//! Experiment plumbing: coverage runs of the coloring pipelines over
//! sampled magma products, invariant suites and report emission.
//!
//! Seeds: trial `t` of an experiment with master seed `s` draws from
//! `rng_for(s, t)`; the fixed coloring of a pipeline (branch family, seeded
//! pair or triple colorings, cube points) is derived from
//! `derive_seed(s, u64::MAX)`, a stream no trial index reaches.

mod coverage;
mod report;
mod suites;

use std::path::PathBuf;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::branches::BranchFamily;
use crate::cseq::{Provider, ProviderMode};
use crate::cube::{omega_projection, CubeColoring, CubeVariant};
use crate::error::{Error, Result};
use crate::extraction::{compose_d, s2_direct_d, ExtractionMap};
use crate::magma::{Magma, MagmaKind, FS_MAX_ARITY};
use crate::sample::{derive_seed, mix64, random_increasing, rng_for, OrdinalShape};

pub use coverage::{run_coverage, verify_report, verify_witness, CoverageReport, TrialRecord, Witness, SCHEMA_VERSION};
pub use report::{report_csv, report_json, report_read, report_write, ReportFormat};
pub use suites::{
    landing_fixtures, run_invariant_suite, run_invariant_suite_with, Counterexample, LandingFixture, SuiteReport,
    SUITES,
};

/// Which coloring of finite generator sets a coverage run applies to
/// `φ(x₁ * ⋯ * x_n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pipeline {
    /// A seeded pair coloring composed with the pair extraction map.
    E2Compose,
    /// A seeded triple coloring composed with the triple extraction map.
    E3Compose,
    /// The direct coloring: seeded `c₀`, branch splitting level as `c₁`.
    S2Direct,
    /// The cube coloring composed with the triple extraction map.
    E3Cube,
}

impl std::str::FromStr for Pipeline {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "e2-compose" => Ok(Pipeline::E2Compose),
            "e3-compose" => Ok(Pipeline::E3Compose),
            "s2-direct" => Ok(Pipeline::S2Direct),
            "e3-cube" => Ok(Pipeline::E3Cube),
            other => Err(Error::Config(format!("unknown pipeline '{other}'"))),
        }
    }
}

fn default_budget() -> u64 {
    100_000
}

fn default_branch_depth() -> usize {
    16
}

fn default_max_support() -> usize {
    3
}

fn default_true() -> bool {
    true
}

/// One coverage experiment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub pipeline: Pipeline,
    pub magma: MagmaKind,
    pub generators: usize,
    /// `|X|`.
    pub sample_size: usize,
    /// `n` in `FS_n`.
    pub arity: usize,
    /// `θ`.
    pub colors: u64,
    pub trials: usize,
    pub seed: u64,
    #[serde(default)]
    pub provider: ProviderMode,
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// Products enumerated per trial before subsampling.
    #[serde(default = "default_budget")]
    pub budget: u64,
    #[serde(default = "default_branch_depth")]
    pub branch_depth: usize,
    /// Largest support of a sampled element.
    #[serde(default = "default_max_support")]
    pub max_support: usize,
    /// Run trials on the rayon pool; reports are identical either way.
    #[serde(default = "default_true")]
    pub parallel: bool,
    /// Base coloring of the cube pipeline.
    #[serde(default)]
    pub cube_variant: CubeVariant,
}

impl ExperimentConfig {
    /// A configuration with the documented defaults.
    pub fn new(pipeline: Pipeline, magma: MagmaKind, generators: usize, sample_size: usize, arity: usize, colors: u64) -> Self {
        ExperimentConfig {
            pipeline,
            magma,
            generators,
            sample_size,
            arity,
            colors,
            trials: 1,
            seed: 0,
            provider: ProviderMode::default(),
            output: None,
            budget: default_budget(),
            branch_depth: default_branch_depth(),
            max_support: default_max_support(),
            parallel: true,
            cube_variant: CubeVariant::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| Error::Serialization(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("generators", self.generators as u64),
            ("sample_size", self.sample_size as u64),
            ("colors", self.colors),
            ("trials", self.trials as u64),
            ("budget", self.budget),
            ("branch_depth", self.branch_depth as u64),
            ("max_support", self.max_support as u64),
        ];
        if let Some((name, _)) = positive.iter().find(|(_, v)| *v == 0) {
            return Err(Error::Config(format!("{name} must be positive")));
        }
        if !(2..=FS_MAX_ARITY).contains(&self.arity) {
            return Err(Error::Config(format!("arity must lie in 2..={FS_MAX_ARITY}, got {}", self.arity)));
        }
        if self.branch_depth < 64 && self.generators as u128 > 1u128 << self.branch_depth {
            return Err(Error::Config(format!(
                "{} generators do not fit binary branches of depth {}",
                self.generators, self.branch_depth
            )));
        }
        if self.pipeline == Pipeline::E3Cube && self.cube_variant == CubeVariant::Mixed {
            return Err(Error::Config("the cube pipeline takes a stability or ch base".into()));
        }
        Ok(())
    }

    /// Seed of the fixed coloring.
    pub fn coloring_seed(&self) -> u64 {
        derive_seed(self.seed, u64::MAX)
    }
}

/// A seeded coloring of increasing index tuples into `colors` values.
pub fn seeded_tuple_color(seed: u64, tuple: &[usize], colors: u64) -> u64 {
    let h = tuple
        .iter()
        .fold(mix64(seed ^ tuple.len() as u64), |acc, &i| mix64(acc ^ mix64(i as u64 + 1)));
    h % colors.max(1)
}

/// The finite-set coloring `d` of a coverage run.
pub struct PipelineColoring {
    pipeline: Pipeline,
    colors: u64,
    seed: u64,
    family: Arc<BranchFamily>,
    map: Option<ExtractionMap>,
    cube: Option<CubeColoring>,
}

impl std::fmt::Debug for PipelineColoring {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PipelineColoring")
            .field("pipeline", &self.pipeline)
            .field("colors", &self.colors)
            .field("branches", &self.family.len())
            .finish_non_exhaustive()
    }
}

impl PipelineColoring {
    pub fn new(cfg: &ExperimentConfig) -> Result<Self> {
        cfg.validate()?;
        let seed = cfg.coloring_seed();
        let family = Arc::new(BranchFamily::random(&mut rng_for(seed, 0), 2, cfg.branch_depth, cfg.generators)?);
        let map = match cfg.pipeline {
            Pipeline::E2Compose => Some(ExtractionMap::new(family.clone(), 2)?),
            Pipeline::E3Compose | Pipeline::E3Cube => Some(ExtractionMap::new(family.clone(), 3)?),
            Pipeline::S2Direct => None,
        };
        let cube = if cfg.pipeline == Pipeline::E3Cube {
            let points = random_increasing(&mut rng_for(seed, 1), OrdinalShape::default(), family.len());
            let cube = CubeColoring::new(cfg.cube_variant, family.clone(), points, Provider::new(cfg.provider), seed, cfg.colors)?;
            Some(cube)
        } else {
            None
        };
        Ok(PipelineColoring {
            pipeline: cfg.pipeline,
            colors: cfg.colors,
            seed,
            family,
            map,
            cube,
        })
    }

    pub fn family(&self) -> &Arc<BranchFamily> {
        &self.family
    }

    /// `d(support)` for an increasing list of generator indices.
    pub fn color_support(&self, support: &[usize]) -> Result<u64> {
        let seed = self.seed;
        let colors = self.colors;
        match self.pipeline {
            Pipeline::E2Compose | Pipeline::E3Compose => {
                let map = self.map.as_ref().expect("compose pipelines hold a map");
                compose_d(|t: &[usize]| seeded_tuple_color(seed, t, colors), map, support)
            }
            Pipeline::S2Direct => {
                let family = &self.family;
                Ok(s2_direct_d(
                    |a: &usize, b: &usize| seeded_tuple_color(seed, &[*a, *b], colors),
                    |a: &usize, b: &usize| family.delta_unchecked(*a, *b) as u64,
                    support,
                ))
            }
            Pipeline::E3Cube => {
                let map = self.map.as_ref().expect("cube pipeline holds a map");
                let cube = self.cube.as_ref().expect("cube pipeline holds a cube");
                // the cube coloring is fallible, so compose by hand
                let distinct: std::collections::BTreeSet<&usize> = support.iter().collect();
                if distinct.len() < 3 {
                    return Ok(0);
                }
                let t = map.extract(support)?;
                let p = cube.points();
                Ok(omega_projection(&cube.color3(&p[t[0]], &p[t[1]], &p[t[2]])?) % colors)
            }
        }
    }

    /// `c(x) = d(φ(x))`.
    pub fn color<M: Magma>(&self, magma: &M, x: &M::Elem) -> Result<u64> {
        self.color_support(&magma.phi(x))
    }
}

/// Magma variant for the sampler.
pub(crate) fn magma_for(cfg: &ExperimentConfig) -> Result<crate::magma::StandardMagma> {
    crate::magma::StandardMagma::new(cfg.magma, cfg.generators)
}
