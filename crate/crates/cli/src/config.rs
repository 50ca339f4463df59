//! Command-line parsing and the validated run configuration.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use opk_core::bar_koszul::TwistedKind;
use opk_core::exact_linalg::CoefficientRing;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(name = "opk", version, about = "Bar, Koszul and partition-poset complexes of operads over exact rings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Shipped presentation: com, assoc or lie.
    #[arg(long, global = true, conflicts_with = "presentation")]
    pub preset: Option<String>,
    /// Presentation file in the operad DSL.
    #[arg(long, global = true)]
    pub presentation: Option<PathBuf>,
    /// Z, Q, Fp (with --p) or F<prime>.
    #[arg(long, global = true, default_value = "Z")]
    pub ring: String,
    #[arg(long, global = true)]
    pub p: Option<u64>,
    #[arg(long, global = true, conflicts_with = "max_arity")]
    pub arity: Option<usize>,
    #[arg(long, global = true)]
    pub max_arity: Option<usize>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, global = true, env = "OPK_CACHE")]
    pub cache: Option<PathBuf>,
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Homology of the partition complex.
    Homology {
        #[arg(value_enum)]
        target: HomologyTarget,
        /// Partition size; same as --arity.
        #[arg(long)]
        r: Option<usize>,
    },
    /// The reduced bar complex.
    Bar {
        #[arg(long)]
        dims_only: bool,
    },
    /// Normalized chains of the simplicial bar construction.
    SimplicialBar {
        #[arg(long)]
        max_dim: Option<usize>,
    },
    /// Bar homology concentration by weight.
    KoszulCheck,
    /// One of the twisted complexes B(I,P,P), B(P,P,I), K(I,P,P), K(P,P,I).
    KoszulComplex {
        /// bar-right, bar-left, koszul-right or koszul-left.
        #[arg(long, value_parser = parse_kind)]
        kind: TwistedKind,
    },
    /// The levelization map from the bar complex to the simplicial bar construction.
    Levelization,
    /// Quadratic dual presentation and the dimensional round trip.
    Dual {
        /// Writes the dual presentation to this file.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Characters on conjugacy class representatives.
    Character {
        #[arg(long, value_enum, default_value_t = CharacterTarget::Operad)]
        of: CharacterTarget,
    },
}

fn parse_kind(s: &str) -> Result<TwistedKind, String> {
    s.parse().map_err(|e: opk_core::OpkError| e.to_string())
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HomologyTarget {
    Partition,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CharacterTarget {
    /// P(n).
    Operad,
    /// The Koszul construction of P in arity n.
    Koszul,
    /// Top homology of the partition complex.
    Partition,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OperadSource {
    Preset(String),
    Presentation(PathBuf),
}

/// A validated run, echoed in the result document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub operad: Option<OperadSource>,
    pub arities: Vec<usize>,
    #[serde(with = "ring_name")]
    pub ring: CoefficientRing,
    pub format: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cache: Option<PathBuf>,
    pub jobs: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(flatten)]
    pub options: CommandOptions,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommandOptions {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dims_only: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<TwistedKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub of: Option<CharacterTarget>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub emit: Option<PathBuf>,
}

mod ring_name {
    use opk_core::exact_linalg::CoefficientRing;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(ring: &CoefficientRing, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&ring.name())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<CoefficientRing, D::Error> {
        let name = String::deserialize(d)?;
        super::parse_ring(&name, None).map_err(serde::de::Error::custom)
    }
}

pub fn parse_ring(name: &str, p: Option<u64>) -> Result<CoefficientRing, CliError> {
    let bad = |msg: String| CliError::Usage(msg);
    let ring = match name {
        "Z" | "z" | "ZZ" => CoefficientRing::Integers,
        "Q" | "q" | "QQ" => CoefficientRing::Rationals,
        "Fp" | "fp" | "F_p" => {
            let p = p.ok_or_else(|| bad("--ring Fp requires --p <prime>".into()))?;
            CoefficientRing::prime_field(p).map_err(|e| bad(e.to_string()))?
        }
        other => {
            let digits = other
                .strip_prefix('F')
                .or_else(|| other.strip_prefix('f'))
                .ok_or_else(|| bad(format!("unknown ring '{other}' (expected Z, Q, Fp or F<prime>)")))?;
            let q: u64 = digits
                .parse()
                .map_err(|_| bad(format!("unknown ring '{other}' (expected Z, Q, Fp or F<prime>)")))?;
            if p.is_some_and(|p| p != q) {
                return Err(bad(format!("--ring {other} conflicts with --p {}", p.unwrap_or(0))));
            }
            CoefficientRing::prime_field(q).map_err(|e| bad(e.to_string()))?
        }
    };
    if p.is_some() && ring.prime().is_none() {
        return Err(bad("--p is only valid with a prime field".into()));
    }
    Ok(ring)
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let c = &cli.common;
        let ring = parse_ring(&c.ring, c.p)?;
        let operad = match (&c.preset, &c.presentation) {
            (Some(p), _) => Some(OperadSource::Preset(p.to_lowercase())),
            (None, Some(path)) => Some(OperadSource::Presentation(path.clone())),
            (None, None) => None,
        };
        let mut options = CommandOptions::default();
        let (command, min_arity, needs_operad) = match &cli.command {
            Command::Homology { target, r } => {
                if let (Some(r), Some(a)) = (r, c.arity) {
                    if *r != a {
                        return Err(CliError::Usage(format!("--r {r} conflicts with --arity {a}")));
                    }
                }
                let _ = target;
                ("homology partition", 2, false)
            }
            Command::Bar { dims_only } => {
                options.dims_only = Some(*dims_only);
                ("bar", 1, true)
            }
            Command::SimplicialBar { max_dim } => {
                if *max_dim == Some(0) {
                    return Err(CliError::Usage("--max-dim must be at least 1".into()));
                }
                options.max_dim = *max_dim;
                ("simplicial-bar", 1, true)
            }
            Command::KoszulCheck => ("koszul-check", 1, true),
            Command::KoszulComplex { kind } => {
                options.kind = Some(*kind);
                ("koszul-complex", 1, true)
            }
            Command::Levelization => ("levelization", 1, true),
            Command::Dual { emit } => {
                options.emit = emit.clone();
                ("dual", 1, true)
            }
            Command::Character { of } => {
                options.of = Some(*of);
                let partition = *of == CharacterTarget::Partition;
                ("character", if partition { 2 } else { 1 }, !partition)
            }
        };
        if needs_operad && operad.is_none() {
            return Err(CliError::Usage(format!("{command} needs --preset or --presentation")));
        }
        let single = match &cli.command {
            Command::Homology { r: Some(r), .. } => Some(*r),
            _ => c.arity,
        };
        let arities: Vec<usize> = match (single, c.max_arity) {
            (Some(n), _) => vec![n],
            (None, Some(m)) => (min_arity..=m).collect(),
            (None, None) => return Err(CliError::Usage(format!("{command} needs --arity or --max-arity"))),
        };
        if arities.is_empty() || arities.iter().any(|&n| n < min_arity) {
            return Err(CliError::Usage(format!("{command} needs arities ≥ {min_arity}")));
        }
        if c.jobs == Some(0) {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        Ok(RunConfig {
            command: command.to_string(),
            operad: if needs_operad { operad } else { None },
            arities,
            ring,
            format: c.format,
            cache: c.cache.clone(),
            jobs: c.jobs.unwrap_or(1),
            out: c.out.clone(),
            options,
        })
    }

    pub fn max_arity(&self) -> usize {
        self.arities.iter().copied().max().unwrap_or(1)
    }
}
