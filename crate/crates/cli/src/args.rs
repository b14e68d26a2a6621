use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qgem::{Measure, PhysicalParams, SetupKind};

#[derive(Parser, Debug)]
#[command(
    name = "qgem",
    version,
    about = "Gravitationally induced entanglement of three masses"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Measures at a single configuration
    #[command(args_override_self = true)]
    Point(PointArgs),
    /// Parallel-setup measures over a (dphi2, dphi3) grid
    #[command(args_override_self = true)]
    PhaseSurface(SurfaceArgs),
    /// Measures over a (l, gamma) grid from physical phases
    #[command(args_override_self = true)]
    LgammaMap(MapArgs),
    /// Measures along the interaction time for several decoherence rates
    #[command(args_override_self = true)]
    TimeSeries(SeriesArgs),
    /// Largest decoherence rate at which entanglement is still detected
    #[command(args_override_self = true)]
    Threshold(ThresholdArgs),
    /// Entanglement class of a decoherence-free state from its phases
    #[command(args_override_self = true)]
    Classify(ClassifyArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Physical {
    /// Mass of each particle in kg
    #[arg(long, default_value_t = 1e-14, allow_hyphen_values = true)]
    pub mass: f64,
    /// Minimum distance between particles in m
    #[arg(long, default_value_t = 35e-6, allow_hyphen_values = true)]
    pub dmin: f64,
    /// Superposition width in m
    #[arg(long = "l", default_value_t = 10e-6, allow_hyphen_values = true)]
    pub width: f64,
    /// Interaction time in s
    #[arg(long, default_value_t = 2.5, allow_hyphen_values = true)]
    pub tau: f64,
    /// Decoherence rate in Hz
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub gamma: f64,
    /// Allow geometries that violate the minimum distance
    #[arg(long)]
    pub unphysical_mode: bool,
}

impl Physical {
    pub fn params(&self) -> PhysicalParams {
        PhysicalParams {
            mass: self.mass,
            d_min: self.dmin,
            width: self.width,
            tau: self.tau,
            gamma: self.gamma,
            unphysical_mode: self.unphysical_mode,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    /// Output file, stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Flat TOML file with flag names as keys
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct Phases {
    /// Override phase difference dphi2 in rad
    #[arg(long, allow_hyphen_values = true)]
    pub dphi2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub dphi3: Option<f64>,
    /// Only for the linear and star setups
    #[arg(long, allow_hyphen_values = true)]
    pub dphi4: Option<f64>,
}

impl Phases {
    pub fn deltas(&self) -> Result<Option<Vec<f64>>, String> {
        match (self.dphi2, self.dphi3, self.dphi4) {
            (None, None, None) => Ok(None),
            (Some(a), Some(b), None) => Ok(Some(vec![a, b])),
            (Some(a), Some(b), Some(c)) => Ok(Some(vec![a, b, c])),
            _ => Err("phase override needs --dphi2 and --dphi3".into()),
        }
    }
}

#[derive(Args, Debug)]
pub struct PointArgs {
    #[arg(long, default_value = "parallel")]
    pub setup: SetupKind,
    /// Comma-separated measures
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "neg-A,neg-B,neg-C,trineg,tangle,chi,witness"
    )]
    pub measure: Vec<Measure>,
    #[command(flatten)]
    pub physical: Physical,
    #[command(flatten)]
    pub phases: Phases,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct SurfaceArgs {
    #[arg(long, default_value = "parallel")]
    pub setup: SetupKind,
    #[arg(long, value_delimiter = ',', default_value = "trineg")]
    pub measure: Vec<Measure>,
    /// Steps per axis as N or NxM
    #[arg(long, default_value = "101")]
    pub grid: Grid,
    /// Range of both phase axes in rad
    #[arg(
        long,
        default_value = "0:6.283185307179586",
        allow_hyphen_values = true
    )]
    pub range: Range,
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[command(flatten)]
    pub physical: Physical,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct MapArgs {
    #[arg(long, value_delimiter = ',', default_value = "parallel,linear,star")]
    pub setup: Vec<SetupKind>,
    #[arg(long, value_delimiter = ',', default_value = "witness")]
    pub measure: Vec<Measure>,
    /// Steps as N or NxM (l by gamma)
    #[arg(long, default_value = "101")]
    pub grid: Grid,
    /// Superposition width range in m
    #[arg(long, default_value = "1e-6:60e-6", allow_hyphen_values = true)]
    pub l_range: Range,
    /// Decoherence rate range in Hz
    #[arg(long, default_value = "1e-4:0.2", allow_hyphen_values = true)]
    pub gamma_range: Range,
    /// Space the gamma axis logarithmically
    #[arg(long)]
    pub log_gamma: bool,
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[command(flatten)]
    pub physical: Physical,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct SeriesArgs {
    #[arg(long, value_delimiter = ',', default_value = "parallel,linear,star")]
    pub setup: Vec<SetupKind>,
    #[arg(long, value_delimiter = ',', default_value = "trineg,witness")]
    pub measure: Vec<Measure>,
    /// Number of time points
    #[arg(long, default_value = "251")]
    pub grid: Grid,
    /// Time range in s
    #[arg(long, default_value = "0:5", allow_hyphen_values = true)]
    pub tau_range: Range,
    /// Comma-separated decoherence rates, defaults to --gamma
    #[arg(long, value_delimiter = ',')]
    pub gammas: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[command(flatten)]
    pub physical: Physical,
    #[command(flatten)]
    pub output: Output,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredicateName {
    Witness,
    Trineg,
}

#[derive(Args, Debug)]
pub struct ThresholdArgs {
    #[arg(long, default_value = "parallel")]
    pub setup: SetupKind,
    #[arg(long, value_enum, default_value_t = PredicateName::Witness)]
    pub predicate: PredicateName,
    /// Detection tolerance of the trineg predicate
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Upper end of the search interval in Hz
    #[arg(long, default_value_t = 1.0)]
    pub gamma_hi: f64,
    #[command(flatten)]
    pub physical: Physical,
    #[command(flatten)]
    pub phases: Phases,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    #[arg(long, default_value = "parallel")]
    pub setup: SetupKind,
    #[arg(long, allow_hyphen_values = true)]
    pub dphi2: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub dphi3: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub dphi4: Option<f64>,
    #[arg(long, default_value_t = qgem::classify::DEFAULT_EPS)]
    pub eps: f64,
    #[command(flatten)]
    pub output: Output,
}

/// `N` or `NxM` steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    pub first: usize,
    pub second: Option<usize>,
}

impl Grid {
    pub fn square(&self) -> (usize, usize) {
        (self.first, self.second.unwrap_or(self.first))
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |p: &str| {
            p.trim()
                .parse::<usize>()
                .map_err(|e| format!("bad grid size `{p}`: {e}"))
        };
        match s.split_once(['x', 'X']) {
            Some((a, b)) => Ok(Grid {
                first: parse(a)?,
                second: Some(parse(b)?),
            }),
            None => Ok(Grid {
                first: parse(s)?,
                second: None,
            }),
        }
    }
}

/// `MIN:MAX`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub min: f64,
    pub max: f64,
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| format!("expected MIN:MAX, got `{s}`"))?;
        let parse = |p: &str| {
            p.trim()
                .parse::<f64>()
                .map_err(|e| format!("bad bound `{p}`: {e}"))
        };
        Ok(Range {
            min: parse(a)?,
            max: parse(b)?,
        })
    }
}
