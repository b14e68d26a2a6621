//! Grid sweeps over phase space, physical parameters and time.
//!
//! Every cell is an independent evaluation of the pipeline
//! phases → evolved state → dephased state → measure, so cells run on a
//! rayon pool and are reassembled in row-major order. Output is therefore
//! identical for any number of workers.

mod output;
mod threshold;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{QgemError, Result};
use crate::measures::{
    bipartition_negativities, chi, qgem_witness, three_tangle_pure, Bipartition,
};
use crate::setups::{
    closed_form_phases, validate_geometry, PhaseSet, PhysicalParams, SetupKind, G, HBAR,
};
use crate::states::{decohered_state, evolved_state};

pub use output::{format_sig15, to_csv, to_json};
pub use threshold::{find_gamma_threshold, Predicate, Threshold, PRESAMPLES};

/// Scalar extracted at each grid cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Measure {
    Negativity(Bipartition),
    TriNegativity,
    /// Three-tangle of the decoherence-free reference state.
    Tangle,
    /// `χ` of the decoherence-free reference state.
    Chi,
    /// `Tr(𝒲ρ)` with the witness built around the decoherence-free state.
    Witness,
}

impl Measure {
    pub const ALL: [Measure; 7] = [
        Measure::Negativity(Bipartition::A),
        Measure::Negativity(Bipartition::B),
        Measure::Negativity(Bipartition::C),
        Measure::TriNegativity,
        Measure::Tangle,
        Measure::Chi,
        Measure::Witness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Negativity(Bipartition::A) => "neg-A",
            Measure::Negativity(Bipartition::B) => "neg-B",
            Measure::Negativity(Bipartition::C) => "neg-C",
            Measure::TriNegativity => "trineg",
            Measure::Tangle => "tangle",
            Measure::Chi => "chi",
            Measure::Witness => "witness",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = QgemError;

    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| QgemError::param("measure", format!("unknown measure `{s}`")))
    }
}

/// Evaluates several measures on one configuration, sharing the dephased state.
pub fn evaluate_measures(
    phases: &PhaseSet,
    gamma: f64,
    tau: f64,
    measures: &[Measure],
) -> Result<Vec<f64>> {
    let needs_rho = measures
        .iter()
        .any(|m| matches!(m, Measure::Negativity(_) | Measure::TriNegativity));
    let negativities = if needs_rho {
        Some(bipartition_negativities(&decohered_state(
            phases, gamma, tau,
        )?)?)
    } else {
        None
    };
    let reference = evolved_state(phases);
    measures
        .iter()
        .map(|m| {
            let negs = || negativities.expect("negativities computed above");
            Ok(match m {
                Measure::Negativity(part) => negs()[*part as usize],
                Measure::TriNegativity => {
                    let [a, b, c] = negs();
                    let product = a * b * c;
                    if product > 0.0 {
                        product.cbrt()
                    } else {
                        0.0
                    }
                }
                Measure::Tangle => three_tangle_pure(&reference)?,
                Measure::Chi => chi(&reference)?,
                Measure::Witness => qgem_witness(phases, gamma, tau)?.expectation,
            })
        })
        .collect()
}

pub fn evaluate(phases: &PhaseSet, gamma: f64, tau: f64, measure: Measure) -> Result<f64> {
    Ok(evaluate_measures(phases, gamma, tau, &[measure])?[0])
}

/// Phases from physical parameters, or from explicit `Δφ` values when given.
pub fn resolve_phases(
    setup: SetupKind,
    params: &PhysicalParams,
    deltas: Option<&[f64]>,
) -> Result<PhaseSet> {
    match deltas {
        Some(d) => PhaseSet::from_deltas(setup, d).map_err(|e| match e {
            QgemError::DimensionMismatch { expected, found } => QgemError::InvalidSpec(format!(
                "{setup} phase override needs {} phase differences, got {}",
                expected - 1,
                found - 1
            )),
            other => other,
        }),
        None => closed_form_phases(setup, params),
    }
}

/// Single evaluation from physical parameters.
pub fn run_point(setup: SetupKind, params: &PhysicalParams, measure: Measure) -> Result<f64> {
    let phases = resolve_phases(setup, params, None)?;
    evaluate(&phases, params.gamma, params.tau, measure)
}

/// One grid axis with inclusive endpoints.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Axis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
    /// Geometric rather than uniform spacing.
    pub log: bool,
}

impl Axis {
    pub fn linear(name: &str, min: f64, max: f64, steps: usize) -> Self {
        Axis {
            name: name.to_owned(),
            min,
            max,
            steps,
            log: false,
        }
    }

    pub fn logarithmic(name: &str, min: f64, max: f64, steps: usize) -> Self {
        Axis {
            log: true,
            ..Self::linear(name, min, max, steps)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(QgemError::InvalidSpec(format!(
                "axis `{}` needs at least 2 steps, got {}",
                self.name, self.steps
            )));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            return Err(QgemError::InvalidSpec(format!(
                "axis `{}` needs finite min < max, got [{}, {}]",
                self.name, self.min, self.max
            )));
        }
        if self.log && self.min <= 0.0 {
            return Err(QgemError::InvalidSpec(format!(
                "logarithmic axis `{}` needs min > 0",
                self.name
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let last = self.steps - 1;
        (0..self.steps)
            .map(|i| {
                if i == last {
                    return self.max;
                }
                let t = i as f64 / last as f64;
                if self.log {
                    (self.min.ln() + t * (self.max.ln() - self.min.ln())).exp()
                } else {
                    self.min + t * (self.max - self.min)
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepMode {
    Point,
    PhaseSurface,
    LgammaMap,
    TimeSeries,
    Threshold,
}

impl SweepMode {
    pub fn name(self) -> &'static str {
        match self {
            SweepMode::Point => "point",
            SweepMode::PhaseSurface => "phase-surface",
            SweepMode::LgammaMap => "lgamma-map",
            SweepMode::TimeSeries => "time-series",
            SweepMode::Threshold => "threshold",
        }
    }
}

/// Everything needed to reproduce one table.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub mode: SweepMode,
    pub setups: Vec<SetupKind>,
    pub measures: Vec<Measure>,
    pub axes: Vec<Axis>,
    pub params: PhysicalParams,
    /// Decoherence rates of a time series, one column group each.
    pub gammas: Vec<f64>,
    /// Explicit `Δφ₂, Δφ₃[, Δφ₄]` replacing the physical phases.
    pub phase_override: Option<Vec<f64>>,
}

impl SweepSpec {
    pub fn new(
        mode: SweepMode,
        setup: SetupKind,
        measures: Vec<Measure>,
        params: PhysicalParams,
    ) -> Self {
        SweepSpec {
            mode,
            setups: vec![setup],
            measures,
            axes: Vec::new(),
            params,
            gammas: Vec::new(),
            phase_override: None,
        }
    }

    pub fn with_axes(mut self, axes: Vec<Axis>) -> Self {
        self.axes = axes;
        self
    }

    fn check_common(&self, axes: usize) -> Result<()> {
        if self.setups.is_empty() {
            return Err(QgemError::InvalidSpec("no setup selected".into()));
        }
        if self.measures.is_empty() {
            return Err(QgemError::InvalidSpec("no measure selected".into()));
        }
        if self.axes.len() != axes {
            return Err(QgemError::InvalidSpec(format!(
                "{} expects {axes} axes, got {}",
                self.mode.name(),
                self.axes.len()
            )));
        }
        self.axes.iter().try_for_each(Axis::validate)?;
        self.params.validate()
    }

    fn single_setup(&self) -> Result<SetupKind> {
        match self.setups.as_slice() {
            [setup] => Ok(*setup),
            _ => Err(QgemError::InvalidSpec(format!(
                "{} takes exactly one setup",
                self.mode.name()
            ))),
        }
    }

    fn meta(&self) -> Vec<(String, String)> {
        let join = |v: Vec<String>| v.join(",");
        let mut meta = vec![
            ("mode".to_owned(), self.mode.name().to_owned()),
            (
                "setups".to_owned(),
                join(self.setups.iter().map(|s| s.to_string()).collect()),
            ),
            (
                "measures".to_owned(),
                join(self.measures.iter().map(|m| m.to_string()).collect()),
            ),
            ("mass_kg".to_owned(), format_sig15(self.params.mass)),
            ("d_min_m".to_owned(), format_sig15(self.params.d_min)),
            ("l_m".to_owned(), format_sig15(self.params.width)),
            ("tau_s".to_owned(), format_sig15(self.params.tau)),
            ("gamma_hz".to_owned(), format_sig15(self.params.gamma)),
            (
                "unphysical_mode".to_owned(),
                self.params.unphysical_mode.to_string(),
            ),
        ];
        if !self.gammas.is_empty() {
            meta.push((
                "gammas_hz".to_owned(),
                join(self.gammas.iter().map(|g| format_sig15(*g)).collect()),
            ));
        }
        if let Some(deltas) = &self.phase_override {
            meta.push((
                "phase_override_rad".to_owned(),
                join(deltas.iter().map(|d| format_sig15(*d)).collect()),
            ));
        }
        for axis in &self.axes {
            meta.push((
                format!("axis.{}", axis.name),
                format!(
                    "{}..{} steps={}{}",
                    format_sig15(axis.min),
                    format_sig15(axis.max),
                    axis.steps,
                    if axis.log { " log" } else { "" }
                ),
            ));
        }
        meta.push(("G".to_owned(), format_sig15(G)));
        meta.push(("hbar".to_owned(), format_sig15(HBAR)));
        meta.push(("version".to_owned(), crate::VERSION.to_owned()));
        meta
    }
}

/// One grid cell: axis coordinates followed by measured values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub coords: Vec<f64>,
    /// `None` marks a cell whose configuration was invalid.
    pub values: Vec<Option<f64>>,
}

/// Row-major table of sweep results.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub meta: Vec<(String, String)>,
    pub axes: Vec<Axis>,
    pub columns: Vec<String>,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r.values[idx]).collect())
    }

    /// All non-missing values of a column.
    pub fn values(&self, name: &str) -> Vec<f64> {
        self.column(name)
            .map(|c| c.into_iter().flatten().collect())
            .unwrap_or_default()
    }
}

/// Worker pool used for grid evaluation; `jobs == 0` lets rayon decide.
#[derive(Debug, Clone, Copy, Default)]
pub struct Executor {
    pub jobs: usize,
}

impl Executor {
    pub fn new(jobs: usize) -> Self {
        Executor { jobs }
    }

    fn map_cells<T, F>(&self, cells: &[Vec<f64>], f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(&[f64]) -> Result<T> + Sync,
    {
        if self.jobs == 1 {
            return cells.iter().map(|c| f(c)).collect();
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs)
            .build()
            .map_err(|e| QgemError::InvalidSpec(format!("cannot start worker pool: {e}")))?;
        pool.install(|| cells.par_iter().map(|c| f(c)).collect())
    }
}

fn grid(axes: &[Axis]) -> Vec<Vec<f64>> {
    let mut cells = vec![Vec::new()];
    for axis in axes {
        let values = axis.values();
        cells = cells
            .into_iter()
            .flat_map(|prefix| {
                values.iter().map(move |&v| {
                    let mut cell = prefix.clone();
                    cell.push(v);
                    cell
                })
            })
            .collect();
    }
    cells
}

fn qualified(setups: &[SetupKind], measures: &[Measure]) -> Vec<String> {
    setups
        .iter()
        .flat_map(|s| measures.iter().map(move |m| format!("{s}:{m}")))
        .collect()
}

fn assemble(
    spec: &SweepSpec,
    columns: Vec<String>,
    cells: Vec<Vec<f64>>,
    values: Vec<Vec<Option<f64>>>,
) -> SweepResult {
    let rows = cells
        .into_iter()
        .zip(values)
        .map(|(coords, values)| SweepRow { coords, values })
        .collect();
    SweepResult {
        meta: spec.meta(),
        axes: spec.axes.clone(),
        columns,
        rows,
    }
}

/// Measures at a single configuration, one row with no axes.
pub fn run_point_spec(spec: &SweepSpec) -> Result<SweepResult> {
    spec.check_common(0)?;
    let setup = spec.single_setup()?;
    let phases = resolve_phases(setup, &spec.params, spec.phase_override.as_deref())?;
    let values = evaluate_measures(&phases, spec.params.gamma, spec.params.tau, &spec.measures)?;
    let columns = spec.measures.iter().map(|m| m.to_string()).collect();
    Ok(assemble(
        spec,
        columns,
        vec![Vec::new()],
        vec![values.into_iter().map(Some).collect()],
    ))
}

/// Parallel-setup measures over a `(Δφ₂, Δφ₃)` grid at the spec's `γ` and `τ`.
pub fn run_phase_surface(spec: &SweepSpec, exec: Executor) -> Result<SweepResult> {
    spec.check_common(2)?;
    if spec.single_setup()? != SetupKind::Parallel {
        return Err(QgemError::InvalidSpec(
            "phase surfaces are two-dimensional only for the parallel setup".into(),
        ));
    }
    if spec.phase_override.is_some() {
        return Err(QgemError::InvalidSpec(
            "phase-surface sweeps the phases itself; drop the phase override".into(),
        ));
    }
    let cells = grid(&spec.axes);
    let (gamma, tau) = (spec.params.gamma, spec.params.tau);
    let values = exec.map_cells(&cells, |cell| {
        let phases = PhaseSet::from_deltas(SetupKind::Parallel, cell)?;
        Ok(evaluate_measures(&phases, gamma, tau, &spec.measures)?
            .into_iter()
            .map(Some)
            .collect())
    })?;
    let columns = spec.measures.iter().map(|m| m.to_string()).collect();
    Ok(assemble(spec, columns, cells, values))
}

/// Measures over a `(l, γ)` grid from physical phases. Cells whose geometry
/// is invalid are reported as missing values.
pub fn run_lgamma_map(spec: &SweepSpec, exec: Executor) -> Result<SweepResult> {
    spec.check_common(2)?;
    if spec.phase_override.is_some() {
        return Err(QgemError::InvalidSpec(
            "lgamma-map uses physical phases only".into(),
        ));
    }
    let cells = grid(&spec.axes);
    let values = exec.map_cells(&cells, |cell| {
        let params = PhysicalParams {
            width: cell[0],
            gamma: cell[1],
            ..spec.params
        };
        let mut row = Vec::with_capacity(spec.setups.len() * spec.measures.len());
        for &setup in &spec.setups {
            match lgamma_cell(setup, &params, &spec.measures) {
                Ok(values) => row.extend(values.into_iter().map(Some)),
                Err(e) if e.is_numerical() => return Err(e),
                Err(_) => row.extend(std::iter::repeat_n(None, spec.measures.len())),
            }
        }
        Ok(row)
    })?;
    Ok(assemble(
        spec,
        qualified(&spec.setups, &spec.measures),
        cells,
        values,
    ))
}

fn lgamma_cell(
    setup: SetupKind,
    params: &PhysicalParams,
    measures: &[Measure],
) -> Result<Vec<f64>> {
    params.validate()?;
    if !params.unphysical_mode {
        if let Some(v) = validate_geometry(setup, params).first() {
            return Err(QgemError::param("l", v.to_string()));
        }
    }
    let phases = closed_form_phases(setup, params)?;
    evaluate_measures(&phases, params.gamma, params.tau, measures)
}

/// Measures along a `τ` axis for every (setup, γ, measure) combination.
pub fn run_time_series(spec: &SweepSpec, exec: Executor) -> Result<SweepResult> {
    spec.check_common(1)?;
    if spec.axes[0].min < 0.0 {
        return Err(QgemError::InvalidSpec(
            "time axis must be non-negative".into(),
        ));
    }
    if spec.phase_override.is_some() {
        return Err(QgemError::InvalidSpec(
            "time-series uses physical phases only".into(),
        ));
    }
    let gammas = if spec.gammas.is_empty() {
        vec![spec.params.gamma]
    } else {
        spec.gammas.clone()
    };
    if let Some(g) = gammas.iter().find(|g| !(g.is_finite() && **g >= 0.0)) {
        return Err(QgemError::InvalidSpec(format!(
            "invalid decoherence rate {g}"
        )));
    }
    let mut columns = Vec::new();
    for setup in &spec.setups {
        for g in &gammas {
            for m in &spec.measures {
                columns.push(format!("{setup}:{m}@{}", format_sig15(*g)));
            }
        }
    }
    let cells = grid(&spec.axes);
    let values = exec.map_cells(&cells, |cell| {
        let params = PhysicalParams {
            tau: cell[0],
            ..spec.params
        };
        let mut row = Vec::with_capacity(columns.len());
        for &setup in &spec.setups {
            let phases = closed_form_phases(setup, &params)?;
            for &g in &gammas {
                row.extend(
                    evaluate_measures(&phases, g, params.tau, &spec.measures)?
                        .into_iter()
                        .map(Some),
                );
            }
        }
        Ok(row)
    })?;
    Ok(assemble(spec, columns, cells, values))
}

/// Threshold search as a one-row table.
pub fn run_threshold_spec(
    spec: &SweepSpec,
    predicate: Predicate,
    gamma_hi: f64,
) -> Result<(Threshold, SweepResult)> {
    spec.check_common(0)?;
    let setup = spec.single_setup()?;
    let found = find_gamma_threshold(
        setup,
        &spec.params,
        spec.phase_override.as_deref(),
        predicate,
        gamma_hi,
    )?;
    let mut result = assemble(
        spec,
        vec![
            "gamma_star".to_owned(),
            "bracketed".to_owned(),
            "iterations".to_owned(),
        ],
        vec![Vec::new()],
        vec![vec![
            Some(found.gamma),
            Some(if found.bracketed { 1.0 } else { 0.0 }),
            Some(found.iterations as f64),
        ]],
    );
    result
        .meta
        .insert(1, ("predicate".to_owned(), predicate.to_string()));
    result
        .meta
        .insert(2, ("gamma_hi_hz".to_owned(), format_sig15(gamma_hi)));
    Ok((found, result))
}
