mod args;
mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use qgem::sweep::{
    run_lgamma_map, run_phase_surface, run_point_spec, run_threshold_spec, run_time_series, to_csv,
    to_json, Axis, Executor, Predicate, SweepMode,
};
use qgem::{classify_linear, classify_parallel, QgemError, SetupKind, SweepResult, SweepSpec};

use args::{ClassifyArgs, Cli, Command, Format, Output, PredicateName};

enum Failure {
    Invalid(String),
    Numerical(String),
}

impl From<QgemError> for Failure {
    fn from(e: QgemError) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Invalid(e.to_string())
        }
    }
}

impl From<String> for Failure {
    fn from(s: String) -> Self {
        Failure::Invalid(s)
    }
}

fn argv() -> Result<Vec<OsString>, Failure> {
    let mut argv: Vec<OsString> = std::env::args_os().collect();
    let Some(path) = config::config_path(&argv) else {
        return Ok(argv);
    };
    let Some(sub) = argv.get(1).and_then(|s| s.to_str()).map(str::to_owned) else {
        return Ok(argv);
    };
    let extra = config::config_args(Path::new(&path), &sub)?;
    argv.splice(2..2, extra.into_iter().map(OsString::from));
    Ok(argv)
}

fn emit(result: &SweepResult, output: &Output) -> Result<(), Failure> {
    let text = match output.format {
        Format::Csv => to_csv(result)?,
        Format::Json => to_json(result)?,
    };
    write_text(&text, output)
}

fn write_text(text: &str, output: &Output) -> Result<(), Failure> {
    match &output.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Invalid(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Invalid(format!("cannot write to stdout: {e}"))),
    }
}

fn check_steps(grid: &args::Grid, axes: usize) -> Result<(usize, usize), Failure> {
    if axes == 1 && grid.second.is_some() {
        return Err(Failure::Invalid(
            "this sweep has one axis; pass --grid N".into(),
        ));
    }
    Ok(grid.square())
}

fn classify(a: &ClassifyArgs) -> Result<(), Failure> {
    let c = match (a.setup, a.dphi4) {
        (SetupKind::Parallel, None) => classify_parallel(a.dphi2, a.dphi3, a.eps)?,
        (SetupKind::Linear, Some(d4)) => classify_linear(a.dphi2, a.dphi3, d4, a.eps)?,
        (SetupKind::Parallel, Some(_)) => {
            return Err("the parallel setup has no dphi4".to_owned().into())
        }
        (SetupKind::Linear, None) => {
            return Err("the linear setup needs --dphi4".to_owned().into())
        }
        (SetupKind::Star, _) => {
            return Err("classification covers the parallel and linear setups"
                .to_owned()
                .into())
        }
    };
    let text = match a.output.format {
        Format::Csv => format!(
            "setup,class,condition\n{},{},\"{}\"\n",
            a.setup, c.class, c.condition
        ),
        Format::Json => {
            let value = serde_json::json!({
                "setup": a.setup.to_string(),
                "class": c.class.to_string(),
                "condition": c.condition,
            });
            serde_json::to_string_pretty(&value).map_err(|e| e.to_string())? + "\n"
        }
    };
    write_text(&text, &a.output)
}

fn run(command: &Command) -> Result<(), Failure> {
    match command {
        Command::Point(a) => {
            let mut spec = SweepSpec::new(
                SweepMode::Point,
                a.setup,
                a.measure.clone(),
                a.physical.params(),
            );
            spec.phase_override = a.phases.deltas()?;
            emit(&run_point_spec(&spec)?, &a.output)
        }
        Command::PhaseSurface(a) => {
            let (n, m) = check_steps(&a.grid, 2)?;
            let spec = SweepSpec::new(
                SweepMode::PhaseSurface,
                a.setup,
                a.measure.clone(),
                a.physical.params(),
            )
            .with_axes(vec![
                Axis::linear("dphi2", a.range.min, a.range.max, n),
                Axis::linear("dphi3", a.range.min, a.range.max, m),
            ]);
            emit(&run_phase_surface(&spec, Executor::new(a.jobs))?, &a.output)
        }
        Command::LgammaMap(a) => {
            let (n, m) = check_steps(&a.grid, 2)?;
            let gamma = if a.log_gamma {
                Axis::logarithmic("gamma", a.gamma_range.min, a.gamma_range.max, m)
            } else {
                Axis::linear("gamma", a.gamma_range.min, a.gamma_range.max, m)
            };
            let mut spec = SweepSpec::new(
                SweepMode::LgammaMap,
                SetupKind::Parallel,
                a.measure.clone(),
                a.physical.params(),
            )
            .with_axes(vec![
                Axis::linear("l", a.l_range.min, a.l_range.max, n),
                gamma,
            ]);
            spec.setups = a.setup.clone();
            emit(&run_lgamma_map(&spec, Executor::new(a.jobs))?, &a.output)
        }
        Command::TimeSeries(a) => {
            let (n, _) = check_steps(&a.grid, 1)?;
            let mut spec = SweepSpec::new(
                SweepMode::TimeSeries,
                SetupKind::Parallel,
                a.measure.clone(),
                a.physical.params(),
            )
            .with_axes(vec![Axis::linear(
                "tau",
                a.tau_range.min,
                a.tau_range.max,
                n,
            )]);
            spec.setups = a.setup.clone();
            spec.gammas = a.gammas.clone();
            emit(&run_time_series(&spec, Executor::new(a.jobs))?, &a.output)
        }
        Command::Threshold(a) => {
            let predicate = match a.predicate {
                PredicateName::Witness => Predicate::Witness,
                PredicateName::Trineg => Predicate::TriNegativity { tol: a.tol },
            };
            let mut spec = SweepSpec::new(
                SweepMode::Threshold,
                a.setup,
                Vec::new(),
                a.physical.params(),
            );
            spec.measures = vec![match predicate {
                Predicate::Witness => qgem::Measure::Witness,
                Predicate::TriNegativity { .. } => qgem::Measure::TriNegativity,
            }];
            spec.phase_override = a.phases.deltas()?;
            let (_, result) = run_threshold_spec(&spec, predicate, a.gamma_hi)?;
            emit(&result, &a.output)
        }
        Command::Classify(a) => classify(a),
    }
}

fn main() -> ExitCode {
    let argv = match argv() {
        Ok(argv) => argv,
        Err(Failure::Invalid(msg)) | Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let cli = Cli::try_parse_from(argv).unwrap_or_else(|e| e.exit());
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(3)
        }
    }
}
