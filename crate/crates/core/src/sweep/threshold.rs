use std::fmt;

use crate::error::{QgemError, Result};
use crate::measures::{qgem_witness, tripartite_negativity};
use crate::setups::{PhaseSet, PhysicalParams, SetupKind};
use crate::states::decohered_state;

use super::resolve_phases;

/// Points sampled on `[0, γ_hi]` to check monotonicity before bisecting.
pub const PRESAMPLES: usize = 16;
const GAMMA_TOL: f64 = 1e-6;
const MAX_ITERATIONS: usize = 60;

/// Detection criterion whose largest satisfying `γ` is sought.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Predicate {
    /// Witness expectation strictly below −1e-12.
    Witness,
    /// Tripartite negativity above `tol`.
    TriNegativity { tol: f64 },
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::Witness => f.write_str("witness<0"),
            Predicate::TriNegativity { tol } => write!(f, "trineg>{tol:e}"),
        }
    }
}

impl Predicate {
    fn holds(&self, phases: &PhaseSet, gamma: f64, tau: f64) -> Result<bool> {
        match *self {
            Predicate::Witness => Ok(qgem_witness(phases, gamma, tau)?.detects()),
            Predicate::TriNegativity { tol } => {
                Ok(tripartite_negativity(&decohered_state(phases, gamma, tau)?)? > tol)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Threshold {
    /// Largest decoherence rate (Hz) at which the predicate still holds.
    pub gamma: f64,
    /// False when the predicate held on the whole search interval.
    pub bracketed: bool,
    pub iterations: usize,
}

/// Locates the decoherence rate at which detection is lost, by bisection on
/// `[0, gamma_hi]` after verifying on a coarse grid that the predicate flips
/// from true to false at most once.
pub fn find_gamma_threshold(
    setup: SetupKind,
    params: &PhysicalParams,
    phase_override: Option<&[f64]>,
    predicate: Predicate,
    gamma_hi: f64,
) -> Result<Threshold> {
    if !(gamma_hi.is_finite() && gamma_hi > 0.0) {
        return Err(QgemError::param(
            "gamma_hi",
            format!("must be positive, got {gamma_hi}"),
        ));
    }
    if let Predicate::TriNegativity { tol } = predicate {
        if !(tol.is_finite() && tol >= 0.0) {
            return Err(QgemError::InvalidTolerance(tol));
        }
    }
    let phases = resolve_phases(setup, params, phase_override)?;
    let tau = params.tau;
    let holds = |gamma: f64| predicate.holds(&phases, gamma, tau);

    if !holds(0.0)? {
        return Err(QgemError::NoDetectionAtZero);
    }

    let mut samples = Vec::with_capacity(PRESAMPLES);
    for k in 0..PRESAMPLES {
        let gamma = if k == PRESAMPLES - 1 {
            gamma_hi
        } else {
            gamma_hi * k as f64 / (PRESAMPLES - 1) as f64
        };
        samples.push((gamma, holds(gamma)?));
    }
    let flips = samples.windows(2).filter(|w| w[0].1 != w[1].1).count();
    if flips > 1 {
        return Err(QgemError::NonMonotonePredicate { samples });
    }
    let Some(first_false) = samples.iter().position(|s| !s.1) else {
        return Ok(Threshold {
            gamma: gamma_hi,
            bracketed: false,
            iterations: 0,
        });
    };

    let (mut lo, mut hi) = (samples[first_false - 1].0, samples[first_false].0);
    let mut iterations = 0;
    while hi - lo > GAMMA_TOL && iterations < MAX_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        if holds(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    Ok(Threshold {
        gamma: lo,
        bracketed: true,
        iterations,
    })
}
