//! Command-line surface and the serializable run configuration behind it.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gfd_core::factory::{twice_from_half_integer, Family, StateSpec};
use gfd_core::{Aggregation, QrtKind};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Auto,
    Closed,
    Brute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QrtName {
    Bipartite2q,
    Multipartite,
    Fermionic,
    Spin,
    Clifford,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AggregationArg {
    #[value(alias = "per_irrep")]
    PerIrrep,
    #[value(alias = "by_hamming_weight")]
    ByHammingWeight,
    #[value(alias = "fermionic_mirror")]
    FermionicMirror,
    None,
}

impl From<AggregationArg> for Aggregation {
    fn from(a: AggregationArg) -> Self {
        match a {
            AggregationArg::PerIrrep => Aggregation::PerIrrep,
            AggregationArg::ByHammingWeight => Aggregation::ByHammingWeight,
            AggregationArg::FermionicMirror => Aggregation::FermionicMirror,
            AggregationArg::None => Aggregation::None,
        }
    }
}

const ORDERING_NOTE: &str = "Rows are emitted in cumulative order: irrep dimension ascending, ties broken by \
label text; the cumulative column is the running purity sum in that order.\n\
Exit codes: 0 success, 1 verification failure, 2 usage or parameter error, 3 capacity exceeded.";

#[derive(Debug, Parser)]
#[command(name = "gfd", version, about = "Group-Fourier purity profiles of quantum states", after_help = ORDERING_NOTE)]
pub struct Cli {
    /// Output format (default csv; json for `maxent`).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write to this file (atomically) instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Seed for every random choice (random states, Haar samples).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Absolute tolerance for `verify`.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tolerance: f64,
    /// Evaluation path for `profile`.
    #[arg(long, global = true, value_enum, default_value_t = Method::Auto)]
    pub method: Method,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "GFD_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Commands,
}

#[derive(Debug, Clone, Args)]
pub struct TargetArgs {
    /// Resource theory.
    #[arg(long, value_enum)]
    pub qrt: QrtName,
    /// Number of qubits / fermionic modes.
    #[arg(long)]
    pub n: Option<u32>,
    /// Spin quantum number (integer or half-integer).
    #[arg(long)]
    pub s: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    /// State family (product, bell, theta, ghz, w, extent, spin_basis, spin_ghz, magic,
    /// stabilizer_canonical, haar, haar_even_parity, gaussian_random).
    #[arg(long)]
    pub family: String,
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    /// Magnetic quantum number for spin_basis (default s).
    #[arg(long, allow_negative_numbers = true)]
    pub m: Option<f64>,
    /// Basis index for stabilizer_canonical (2^n selects GHZ).
    #[arg(long)]
    pub index: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Commands {
    /// Purity profile of one state.
    Profile {
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, value_enum)]
        aggregation: Option<AggregationArg>,
    },
    /// Closed forms against brute force for every family with a formula.
    Verify {
        #[command(flatten)]
        target: TargetArgs,
        /// Restrict to one family.
        #[arg(long)]
        family: Option<String>,
    },
    /// Monte-Carlo Haar means against the analytic values.
    Haar {
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, value_enum)]
        aggregation: Option<AggregationArg>,
    },
    /// Reconstruction of a free state from its smallest-irrep data.
    Maxent {
        /// multipartite (Bloch marginals) or fermionic (correlation matrix);
        /// defaults to fermionic for gaussian_random, multipartite otherwise.
        #[arg(long, value_enum)]
        qrt: Option<QrtName>,
        #[arg(long)]
        n: Option<u32>,
        #[command(flatten)]
        state: StateArgs,
    },
    /// Irrep classes with dimensions and multiplicities.
    ListIrreps {
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long, value_enum)]
        aggregation: Option<AggregationArg>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CommandKind {
    Profile,
    Verify,
    Haar,
    Maxent,
    ListIrreps,
}

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub qrt: QrtKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<StateSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family_filter: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    pub format: Format,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub samples: u64,
    pub aggregation: Aggregation,
    pub tolerance: f64,
    pub method: Method,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn resolve_qrt(name: QrtName, n: Option<u32>, s: Option<f64>) -> CliResult<QrtKind> {
    let need_n = || n.ok_or_else(|| usage(format!("--qrt {} needs --n", qrt_label(name))));
    let qrt = match name {
        QrtName::Bipartite2q => match n {
            None | Some(2) => QrtKind::Bipartite2q,
            Some(other) => return Err(usage(format!("bipartite2q is a two-qubit theory, got --n {other}"))),
        },
        QrtName::Multipartite => QrtKind::Multipartite { n: need_n()? },
        QrtName::Fermionic => QrtKind::Fermionic { n: need_n()? },
        QrtName::Clifford => QrtKind::Clifford { n: need_n()? },
        QrtName::Spin => {
            let s = s.ok_or_else(|| usage("--qrt spin needs --s"))?;
            let twice = twice_from_half_integer(s, "s")?;
            if twice <= 0 {
                return Err(usage(format!("spin needs s > 0, got {s}")));
            }
            QrtKind::Spin { twice_s: twice as u32 }
        }
    };
    qrt.validate()?;
    Ok(qrt)
}

fn qrt_label(name: QrtName) -> &'static str {
    match name {
        QrtName::Bipartite2q => "bipartite2q",
        QrtName::Multipartite => "multipartite",
        QrtName::Fermionic => "fermionic",
        QrtName::Spin => "spin",
        QrtName::Clifford => "clifford",
    }
}

/// Family name as typed, with `ghz`/`basis` mapped onto the spin families.
pub fn resolve_family(name: &str, qrt: &QrtKind) -> CliResult<Family> {
    let spin = matches!(qrt, QrtKind::Spin { .. });
    let name = match (name, spin) {
        ("ghz", true) => "spin_ghz",
        ("basis", true) => "spin_basis",
        (other, _) => other,
    };
    Ok(Family::from_name(name)?)
}

pub fn build_state(args: &StateArgs, qrt: &QrtKind, seed: Option<u64>) -> CliResult<StateSpec> {
    let family = resolve_family(&args.family, qrt)?;
    let mut spec = match *qrt {
        QrtKind::Spin { twice_s } => {
            let s = twice_s as f64 / 2.0;
            let mut spec = StateSpec::spin(family, s);
            if family == Family::SpinBasis {
                spec = spec.with_m(args.m.unwrap_or(s));
            }
            spec
        }
        QrtKind::Bipartite2q => StateSpec::qubits(family, 2),
        _ => StateSpec::qubits(family, qrt.qubits().expect("qubit theory")),
    };
    if family.is_spin() != matches!(qrt, QrtKind::Spin { .. }) {
        return Err(usage(format!("family {} does not live on the {} Hilbert space", family.name(), qrt.name())));
    }
    if let Some(t) = args.theta {
        spec = spec.with_theta(t);
    }
    if let Some(g) = args.gamma {
        spec = spec.with_gamma(g);
    }
    if let Some(i) = args.index {
        spec = spec.with_index(i);
    }
    if let Some(seed) = seed {
        spec = spec.with_seed(seed);
    } else if family.is_random() {
        spec = spec.with_seed(0);
    }
    Ok(spec)
}

fn default_aggregation(qrt: &QrtKind, requested: Option<AggregationArg>) -> Aggregation {
    match requested {
        Some(a) => a.into(),
        None => match qrt {
            QrtKind::Multipartite { .. } => Aggregation::ByHammingWeight,
            _ => Aggregation::PerIrrep,
        },
    }
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> CliResult<Self> {
        let mut cfg = RunConfig {
            command: CommandKind::Profile,
            qrt: QrtKind::Bipartite2q,
            state: None,
            family_filter: None,
            output: cli.output,
            format: cli.format.unwrap_or(match cli.command {
                Commands::Maxent { .. } => Format::Json,
                _ => Format::Csv,
            }),
            seed: cli.seed,
            samples: 10_000,
            aggregation: Aggregation::PerIrrep,
            tolerance: cli.tolerance,
            method: cli.method,
            threads: cli.threads,
        };
        if cfg.threads == Some(0) {
            return Err(usage("--threads must be at least 1"));
        }
        if !(cfg.tolerance >= 0.0 && cfg.tolerance.is_finite()) {
            return Err(usage(format!("--tolerance must be a finite non-negative number, got {}", cfg.tolerance)));
        }
        match cli.command {
            Commands::Profile { target, state, aggregation } => {
                cfg.qrt = resolve_qrt(target.qrt, target.n, target.s)?;
                cfg.state = Some(build_state(&state, &cfg.qrt, cfg.seed)?);
                cfg.aggregation = default_aggregation(&cfg.qrt, aggregation);
            }
            Commands::Verify { target, family } => {
                cfg.command = CommandKind::Verify;
                cfg.qrt = resolve_qrt(target.qrt, target.n, target.s)?;
                cfg.family_filter = family;
            }
            Commands::Haar { target, samples, aggregation } => {
                cfg.command = CommandKind::Haar;
                cfg.qrt = resolve_qrt(target.qrt, target.n, target.s)?;
                cfg.samples = samples;
                cfg.aggregation = default_aggregation(&cfg.qrt, aggregation);
            }
            Commands::Maxent { qrt, n, state } => {
                cfg.command = CommandKind::Maxent;
                let family = Family::from_name(&state.family)?;
                let name = qrt.unwrap_or(if family == Family::GaussianRandom {
                    QrtName::Fermionic
                } else {
                    QrtName::Multipartite
                });
                if !matches!(name, QrtName::Multipartite | QrtName::Fermionic | QrtName::Bipartite2q) {
                    return Err(usage("maxent supports --qrt multipartite, bipartite2q or fermionic"));
                }
                let n = match (name, n, family) {
                    (_, Some(n), _) => Some(n),
                    (_, None, Family::Bell | Family::Theta) | (QrtName::Bipartite2q, None, _) => Some(2),
                    _ => None,
                };
                cfg.qrt = resolve_qrt(name, n, None)?;
                cfg.state = Some(build_state(&state, &cfg.qrt, cfg.seed)?);
            }
            Commands::ListIrreps { target, aggregation } => {
                cfg.command = CommandKind::ListIrreps;
                cfg.qrt = resolve_qrt(target.qrt, target.n, target.s)?;
                cfg.aggregation = default_aggregation(&cfg.qrt, aggregation);
            }
        }
        Ok(cfg)
    }
}
