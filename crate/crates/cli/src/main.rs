//! `ordcolor`: walks, oscillations, cube colorings, extraction maps,
//! coverage experiments and invariant suites from the command line.
//!
//! Exit status: 0 on success, 1 when a checked property fails, 2 on a usage
//! or input error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ordcolor::branches::BranchFamily;
use ordcolor::cube::{CubeColoring, CubeConfig, CubeVariant, FamilySource};
use ordcolor::cseq::{CSequence, Provider, ProviderMode};
use ordcolor::extraction::ExtractionMap;
use ordcolor::harness::{
    report_csv, report_json, run_coverage, run_invariant_suite_with, verify_report, ExperimentConfig, SUITES,
};
use ordcolor::oscillation::{chi, osc3, osc_pieces};
use ordcolor::walks::{lambda2, landing, rho, walk};
use ordcolor::Ordinal;

#[derive(Parser)]
#[command(name = "ordcolor", version, about = "Walks on ordinals and the colorings built from them")]
struct Cli {
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExtractArity {
    E2,
    E3,
}

#[derive(Subcommand)]
enum Command {
    /// Trace, ρ₂, λ₂, landing ordinal and ρ of the walk from β down to α.
    Walk {
        alpha: Ordinal,
        beta: Ordinal,
        #[arg(long, default_value = "fundamental")]
        provider: ProviderMode,
    },
    /// Oscillation pieces of C_α against C_β above ε.
    Osc {
        alpha: Ordinal,
        beta: Ordinal,
        #[arg(long)]
        eps: Ordinal,
        #[arg(long, default_value = "fundamental")]
        provider: ProviderMode,
    },
    /// χ(α,β,γ) and the three-point oscillation.
    Chi {
        alpha: Ordinal,
        beta: Ordinal,
        gamma: Ordinal,
        #[arg(long, default_value = "fundamental")]
        provider: ProviderMode,
    },
    /// Color of a triple under a cube coloring.
    Color3 {
        /// Cube configuration (JSON); flags below override its fields.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Branch family (JSON array of strings); points default to 0, 1, 2, ….
        #[arg(long)]
        family: Option<PathBuf>,
        #[arg(long)]
        variant: Option<CubeVariant>,
        #[arg(long, env = "ORDCOLOR_SEED")]
        seed: Option<u64>,
        #[arg(long)]
        colors: Option<u64>,
        #[arg(long)]
        search_cap: Option<u64>,
        x: Ordinal,
        y: Ordinal,
        z: Ordinal,
    },
    /// Pair or triple extracted from a finite set of branch indices.
    Extract {
        #[arg(value_enum)]
        arity: ExtractArity,
        #[arg(long)]
        family: PathBuf,
        /// Comma-separated branch indices.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        z: Vec<usize>,
    },
    /// Coverage experiment from a JSON configuration.
    Coverage {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the configured master seed.
        #[arg(long, env = "ORDCOLOR_SEED")]
        seed: Option<u64>,
    },
    /// Runs an invariant suite ("all" runs every suite).
    Invariants {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 1000)]
        budget: u64,
        #[arg(long, env = "ORDCOLOR_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "fundamental")]
        provider: ProviderMode,
    },
}

/// What the command found, before it is written out.
struct Output {
    text: String,
    property_failed: bool,
}

impl Output {
    fn json(value: &Value) -> anyhow::Result<Self> {
        Ok(Output {
            text: format!("{}\n", serde_json::to_string_pretty(value)?),
            property_failed: false,
        })
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn walk_cmd(alpha: &Ordinal, beta: &Ordinal, provider: ProviderMode) -> anyhow::Result<Output> {
    let p = Provider::new(provider);
    let trace = walk(&p, alpha, beta)?;
    Output::json(&json!({
        "alpha": alpha,
        "beta": beta,
        "provider": p.name(),
        "trace": trace.steps(),
        "rho2": trace.len(),
        "lambda2": lambda2(&p, alpha, beta)?,
        "landing": landing(&p, alpha, beta)?,
        "rho": rho(&p, alpha, beta)?,
    }))
}

fn osc_cmd(alpha: &Ordinal, beta: &Ordinal, eps: &Ordinal, provider: ProviderMode) -> anyhow::Result<Output> {
    let p = Provider::new(provider);
    let r = osc_pieces(&p.cseq(alpha), &p.cseq(beta), eps)?;
    Output::json(&json!({
        "alpha": alpha,
        "beta": beta,
        "eps": eps,
        "guard": r.guard,
        "count": r.count(),
        "pieces": r.pieces,
    }))
}

fn chi_cmd(alpha: &Ordinal, beta: &Ordinal, gamma: &Ordinal, provider: ProviderMode) -> anyhow::Result<Output> {
    let p = Provider::new(provider);
    Output::json(&json!({
        "alpha": alpha,
        "beta": beta,
        "gamma": gamma,
        "chi": chi(&p, alpha, beta, gamma)?,
        "osc3": osc3(&p, alpha, beta, gamma)?,
    }))
}

#[allow(clippy::too_many_arguments)]
fn color3_cmd(
    config: Option<&Path>,
    family: Option<&Path>,
    variant: Option<CubeVariant>,
    seed: Option<u64>,
    colors: Option<u64>,
    search_cap: Option<u64>,
    triple: [&Ordinal; 3],
) -> anyhow::Result<Output> {
    let mut cfg: CubeConfig = match (config, family) {
        (Some(path), _) => serde_json::from_str(&read(path)?).with_context(|| format!("parsing {}", path.display()))?,
        (None, Some(_)) => serde_json::from_value(json!({ "family": { "inline": [] } }))?,
        (None, None) => bail!("color3 needs --config or --family"),
    };
    if let Some(path) = family {
        let family = BranchFamily::from_json(&read(path)?)?;
        cfg.points = Some((0..family.len() as u64).map(Ordinal::nat).collect());
        cfg.family = FamilySource::Inline(family.branches().iter().map(|b| ordcolor::branches::render(b)).collect());
    }
    if let Some(v) = variant {
        cfg.variant = v;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(c) = colors {
        cfg.colors = c;
    }
    if let Some(c) = search_cap {
        cfg.search_cap = c;
    }
    let cube = CubeColoring::from_config(&cfg)?;
    let color = cube.color3(triple[0], triple[1], triple[2])?;
    let mut sorted = triple;
    sorted.sort();
    let case = match cfg.variant {
        CubeVariant::Ch => Some(cube.ch_case(sorted[0], sorted[1], sorted[2])?),
        _ => None,
    };
    Output::json(&json!({
        "variant": cfg.variant,
        "triple": sorted,
        "color": color,
        "case": case,
        "exhausted_searches": cube.exhausted_searches(),
    }))
}

fn extract_cmd(arity: ExtractArity, family: &Path, z: &[usize]) -> anyhow::Result<Output> {
    let family = Arc::new(BranchFamily::from_json(&read(family)?)?);
    let n = match arity {
        ExtractArity::E2 => 2,
        ExtractArity::E3 => 3,
    };
    let map = ExtractionMap::new(family, n)?;
    Output::json(&json!({ "z": z, "extracted": map.extract(z)? }))
}

fn coverage_cmd(config: &Path, seed: Option<u64>, format: Format) -> anyhow::Result<Output> {
    let mut cfg = ExperimentConfig::from_json(&read(config)?)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let report = run_coverage(&cfg)?;
    let verified = verify_report(&report)?;
    let text = match format {
        Format::Json => report_json(&report)?,
        Format::Csv => report_csv(&report)?,
    };
    Ok(Output {
        text,
        property_failed: !verified,
    })
}

fn invariants_cmd(suite: &str, budget: u64, seed: u64, provider: ProviderMode) -> anyhow::Result<Output> {
    let p = Provider::new(provider);
    let ids: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite] };
    let mut reports = Vec::new();
    for id in ids {
        reports.push(run_invariant_suite_with(id, budget, seed, &p)?);
    }
    let failed = reports.iter().any(|r| !r.passed);
    let value = if reports.len() == 1 {
        serde_json::to_value(&reports[0])?
    } else {
        serde_json::to_value(&reports)?
    };
    let mut out = Output::json(&value)?;
    out.property_failed = failed;
    Ok(out)
}

fn run(cli: &Cli) -> anyhow::Result<Output> {
    if cli.format == Format::Csv && !matches!(cli.command, Command::Coverage { .. }) {
        bail!("--format csv applies to coverage reports only");
    }
    match &cli.command {
        Command::Walk { alpha, beta, provider } => walk_cmd(alpha, beta, *provider),
        Command::Osc {
            alpha,
            beta,
            eps,
            provider,
        } => osc_cmd(alpha, beta, eps, *provider),
        Command::Chi {
            alpha,
            beta,
            gamma,
            provider,
        } => chi_cmd(alpha, beta, gamma, *provider),
        Command::Color3 {
            config,
            family,
            variant,
            seed,
            colors,
            search_cap,
            x,
            y,
            z,
        } => color3_cmd(
            config.as_deref(),
            family.as_deref(),
            *variant,
            *seed,
            *colors,
            *search_cap,
            [x, y, z],
        ),
        Command::Extract { arity, family, z } => extract_cmd(*arity, family, z),
        Command::Coverage { config, seed } => coverage_cmd(config, *seed, cli.format),
        Command::Invariants {
            suite,
            budget,
            seed,
            provider,
        } => invariants_cmd(suite, *budget, *seed, *provider),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let written = match &cli.out {
        Some(path) => fs::write(path, &output.text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{}", output.text);
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if output.property_failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
