//! Command-line driver: flag parsing, campaigns over seed ranges, and the
//! CSV/JSON/LaTeX outputs they leave on disk.

mod campaign;
mod output;

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::energy::Matrix2;
use crate::error::Error;
use crate::functional::Scheme;
use crate::grid::{GridSpec, Initializer};
use crate::optimizer::{DescentConfig, XiMode};

pub use campaign::{run_campaign, Campaign, RunManifest};
pub use output::{emit_tables, emit_trace, record_rows, render_latex, RecordRow};

/// Fallback for `--out`.
pub const OUT_DIR_ENV: &str = "QCLAB_OUT_DIR";

const DEFAULT_OUT_DIR: &str = "qclab-out";

/// An inclusive range of seeds, written `a..b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedRange {
    pub first: u64,
    pub last: u64,
}

impl SeedRange {
    pub fn single(seed: u64) -> Self {
        SeedRange {
            first: seed,
            last: seed,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> {
        self.first..=self.last
    }

    pub fn count(&self) -> usize {
        (self.last - self.first + 1) as usize
    }

    pub fn is_single(&self) -> bool {
        self.first == self.last
    }
}

impl fmt::Display for SeedRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.first, self.last)
    }
}

impl FromStr for SeedRange {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s
            .split_once("..")
            .ok_or_else(|| format!("expected a seed range a..b, got {s:?}"))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<u64>()
                .map_err(|e| format!("bad seed {t:?}: {e}"))
        };
        let (first, last) = (parse(a)?, parse(b)?);
        if last < first {
            return Err(format!("empty seed range {s:?}"));
        }
        Ok(SeedRange { first, last })
    }
}

/// Parses `"a11,a12;a21,a22"`.
pub fn parse_matrix(s: &str) -> Result<Matrix2, String> {
    let rows: Vec<&str> = s.split(';').collect();
    let entries: Vec<&str> = rows.iter().flat_map(|r| r.split(',')).collect();
    if rows.len() != 2 || rows.iter().any(|r| r.split(',').count() != 2) {
        return Err(format!(
            "expected a 2x2 matrix \"a11,a12;a21,a22\", got {s:?}"
        ));
    }
    let mut v = [0.0; 4];
    for (slot, t) in v.iter_mut().zip(&entries) {
        *slot = t
            .trim()
            .parse::<f64>()
            .map_err(|e| format!("bad matrix entry {t:?}: {e}"))?;
    }
    let m = Matrix2::from_entries(v);
    if !m.is_finite() {
        return Err(format!("matrix entries must be finite, got {s:?}"));
    }
    Ok(m)
}

pub fn format_matrix(m: &Matrix2) -> String {
    format!("{},{};{},{}", m.a11, m.a12, m.a21, m.a22)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum XiModeArg {
    Fixed,
    Random,
}

/// Steepest-descent search for violations of the Jensen inequality for
/// f(ξ) = |ξ|⁴ − γ|ξ|² det ξ.
#[derive(Debug, Parser)]
#[command(name = "qclab", version)]
pub struct Args {
    /// Start from the configuration and seeds of a manifest.json (or a bare config JSON).
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Number of grid intervals per axis.
    #[arg(long)]
    pub mesh_n: Option<usize>,
    #[arg(long)]
    pub gamma_start: Option<f64>,
    #[arg(long)]
    pub gamma_end: Option<f64>,
    #[arg(long)]
    pub gamma_step: Option<f64>,
    #[arg(long, value_enum)]
    pub xi_mode: Option<XiModeArg>,
    /// Fixed ξ as "a11,a12;a21,a22".
    #[arg(long, value_parser = parse_matrix, allow_hyphen_values = true)]
    pub xi: Option<Matrix2>,
    /// Entries of random ξ are uniform in [0, scale).
    #[arg(long)]
    pub xi_scale: Option<f64>,
    /// Initial field: p1|p2|p3|p4|zero.
    #[arg(long, value_parser = parse_initializer)]
    pub phi0: Option<Initializer>,
    #[arg(long, conflicts_with = "seeds")]
    pub seed: Option<u64>,
    /// Inclusive seed range a..b, one independent run per seed.
    #[arg(long, value_parser = SeedRange::from_str)]
    pub seeds: Option<SeedRange>,
    /// Descent iterations per γ value.
    #[arg(long)]
    pub max_iters: Option<usize>,
    #[arg(long)]
    pub violation_tol: Option<f64>,
    /// Quadrature for J: trapezoid|p1exact.
    #[arg(long, value_parser = parse_scheme)]
    pub scheme: Option<Scheme>,
    #[arg(long, env = OUT_DIR_ENV)]
    pub out: Option<PathBuf>,
    /// Print every trace row to stdout once the runs finish.
    #[arg(long)]
    pub trace: bool,
    /// Refinement factor used when verifying records.
    #[arg(long)]
    pub verify_refine: Option<usize>,
    /// Also write records.tex.
    #[arg(long)]
    pub latex: bool,
    /// Restart from the initial field whenever γ steps down.
    #[arg(long)]
    pub reset_on_gamma_step: bool,
    #[arg(long, allow_hyphen_values = true)]
    pub secant_alpha0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub secant_alpha1: Option<f64>,
    #[arg(long)]
    pub secant_max_iters: Option<usize>,
    #[arg(long)]
    pub secant_root_tol: Option<f64>,
    #[arg(long)]
    pub secant_denom_floor: Option<f64>,
    #[arg(long)]
    pub fallback_tau: Option<f64>,
    #[arg(long)]
    pub max_halvings: Option<usize>,
}

fn parse_initializer(s: &str) -> Result<Initializer, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_scheme(s: &str) -> Result<Scheme, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Clap(#[from] clap::Error),
    #[error("usage error: {0}")]
    Usage(String),
    #[error(transparent)]
    Runtime(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Clap(e) => e.exit_code(),
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

/// Base configuration stored in a manifest, or a bare config.
fn load_base(path: &PathBuf) -> Result<(DescentConfig, Option<SeedRange>), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    if let Ok(m) = serde_json::from_str::<RunManifest>(&text) {
        return Ok((m.config, Some(m.seeds)));
    }
    let cfg = serde_json::from_str::<DescentConfig>(&text).map_err(|e| {
        CliError::Usage(format!(
            "{}: neither a manifest nor a config: {e}",
            path.display()
        ))
    })?;
    Ok((cfg, None))
}

impl Args {
    /// Resolves flags on top of the defaults, or on top of `--config`.
    pub fn into_campaign(self) -> Result<Campaign, CliError> {
        let (mut cfg, base_seeds) = match &self.config {
            Some(path) => load_base(path)?,
            None => (DescentConfig::default(), None),
        };
        if let Some(n) = self.mesh_n {
            cfg.grid = GridSpec::new(n).map_err(|e| CliError::Usage(e.to_string()))?;
        }
        macro_rules! set {
            ($($flag:ident => $($field:ident).+),* $(,)?) => {
                $(if let Some(v) = self.$flag { cfg.$($field).+ = v; })*
            };
        }
        set!(
            gamma_start => gamma_start,
            gamma_end => gamma_end,
            gamma_step => gamma_step,
            phi0 => initializer,
            max_iters => max_iters_per_gamma,
            violation_tol => violation_tol,
            scheme => scheme,
            verify_refine => verify_refine,
            secant_alpha0 => secant.alpha0,
            secant_alpha1 => secant.alpha1,
            secant_max_iters => secant.max_iters,
            secant_root_tol => secant.root_tol,
            secant_denom_floor => secant.denom_floor,
            fallback_tau => secant.fallback_tau,
            max_halvings => secant.max_halvings,
        );
        if self.reset_on_gamma_step {
            cfg.reset_on_gamma_step = true;
        }

        let mode = self.xi_mode.or(self.xi.map(|_| XiModeArg::Fixed));
        cfg.xi_mode = match (mode, self.xi, self.xi_scale) {
            (Some(XiModeArg::Random), Some(_), _) => {
                return Err(CliError::Usage("--xi requires --xi-mode fixed".into()))
            }
            (Some(XiModeArg::Fixed), _, Some(_)) => {
                return Err(CliError::Usage(
                    "--xi-scale requires --xi-mode random".into(),
                ))
            }
            (Some(XiModeArg::Fixed), xi, None) => XiMode::Fixed(xi.unwrap_or(match cfg.xi_mode {
                XiMode::Fixed(m) => m,
                XiMode::RandomPerIteration { .. } => Matrix2::diag(1.0, 3f64.sqrt()),
            })),
            (Some(XiModeArg::Random), None, scale) => XiMode::RandomPerIteration {
                scale: scale.unwrap_or(match cfg.xi_mode {
                    XiMode::RandomPerIteration { scale } => scale,
                    XiMode::Fixed(_) => 1.0,
                }),
            },
            (None, _, Some(scale)) => match cfg.xi_mode {
                XiMode::RandomPerIteration { .. } => XiMode::RandomPerIteration { scale },
                XiMode::Fixed(_) => {
                    return Err(CliError::Usage(
                        "--xi-scale requires --xi-mode random".into(),
                    ))
                }
            },
            (None, _, None) => cfg.xi_mode,
        };

        let seeds = match (self.seed, self.seeds) {
            (Some(s), _) => SeedRange::single(s),
            (None, Some(r)) => r,
            (None, None) => base_seeds.unwrap_or(SeedRange::single(cfg.seed)),
        };
        cfg.seed = seeds.first;
        cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(Campaign {
            config: cfg,
            seeds,
            out_dir: self.out.unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR)),
            latex: self.latex,
            print_trace: self.trace,
        })
    }
}

/// Parses a full command line (program name first).
pub fn parse_campaign<I, T>(argv: I) -> Result<Campaign, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    Args::try_parse_from(argv)?.into_campaign()
}

/// Parses a full command line (program name first) into the search configuration.
pub fn parse_config<I, T>(argv: I) -> Result<DescentConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    parse_campaign(argv).map(|c| c.config)
}

/// Flags that make [`parse_config`] rebuild `cfg` exactly.
pub fn config_to_args(cfg: &DescentConfig) -> Vec<String> {
    let mut out = vec![
        format!("--mesh-n={}", cfg.grid.n()),
        format!("--gamma-start={}", cfg.gamma_start),
        format!("--gamma-end={}", cfg.gamma_end),
        format!("--gamma-step={}", cfg.gamma_step),
    ];
    match cfg.xi_mode {
        XiMode::Fixed(m) => {
            out.push("--xi-mode=fixed".into());
            out.push(format!("--xi={}", format_matrix(&m)));
        }
        XiMode::RandomPerIteration { scale } => {
            out.push("--xi-mode=random".into());
            out.push(format!("--xi-scale={scale}"));
        }
    }
    let s = &cfg.secant;
    out.extend([
        format!("--phi0={}", cfg.initializer),
        format!("--seed={}", cfg.seed),
        format!("--max-iters={}", cfg.max_iters_per_gamma),
        format!("--violation-tol={}", cfg.violation_tol),
        format!("--scheme={}", cfg.scheme),
        format!("--verify-refine={}", cfg.verify_refine),
        format!("--secant-alpha0={}", s.alpha0),
        format!("--secant-alpha1={}", s.alpha1),
        format!("--secant-max-iters={}", s.max_iters),
        format!("--secant-root-tol={}", s.root_tol),
        format!("--secant-denom-floor={}", s.denom_floor),
        format!("--fallback-tau={}", s.fallback_tau),
        format!("--max-halvings={}", s.max_halvings),
    ]);
    if cfg.reset_on_gamma_step {
        out.push("--reset-on-gamma-step".into());
    }
    out
}

/// Parses `argv`, runs the campaign and reports; returns the process exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let campaign = match parse_campaign(argv) {
        Ok(c) => c,
        Err(CliError::Clap(e)) => {
            let _ = e.print();
            return e.exit_code();
        }
        Err(e) => {
            eprintln!("qclab: {e}");
            return e.exit_code();
        }
    };
    match run_campaign(&campaign) {
        Ok(manifest) => {
            println!(
                "{} record(s), {} verified, written to {}",
                manifest.record_count,
                manifest.verified_count,
                campaign.out_dir.display()
            );
            0
        }
        Err(e) => {
            eprintln!("qclab: {e}");
            CliError::Runtime(e).exit_code()
        }
    }
}
