//! Symbolic classification of the decoherence-free parallel and linear states
//! from their phase differences.

use std::f64::consts::{PI, TAU};
use std::fmt;

use serde::Serialize;

use crate::error::{QgemError, Result};

pub const DEFAULT_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum StateClass {
    FullySeparable,
    Biseparable,
    /// Local-unitarily equivalent to GHZ.
    Ghz,
    /// SLOCC-equivalent to GHZ but not LU-equivalent.
    GhzType,
}

impl fmt::Display for StateClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StateClass::FullySeparable => "fully-separable",
            StateClass::Biseparable => "biseparable",
            StateClass::Ghz => "ghz",
            StateClass::GhzType => "ghz-type",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub class: StateClass,
    /// The phase condition that selected `class`.
    pub condition: &'static str,
}

/// Shortest distance on the circle of circumference `period` from `x` to 0.
fn circular_distance(x: f64, period: f64) -> f64 {
    let r = x.rem_euclid(period);
    r.min(period - r)
}

fn is_multiple_of(x: f64, period: f64, eps: f64) -> bool {
    circular_distance(x, period) <= eps
}

fn check_inputs(eps: f64, phases: &[f64]) -> Result<()> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(QgemError::InvalidTolerance(eps));
    }
    if let Some(p) = phases.iter().find(|p| !p.is_finite()) {
        return Err(QgemError::param(
            "phase",
            format!("must be finite, got {p}"),
        ));
    }
    Ok(())
}

pub fn classify_parallel(dphi2: f64, dphi3: f64, eps: f64) -> Result<Classification> {
    check_inputs(eps, &[dphi2, dphi3])?;
    let class = if is_multiple_of(dphi3, TAU, eps) {
        if is_multiple_of(dphi2, PI, eps) {
            Classification {
                class: StateClass::FullySeparable,
                condition: "dphi3 = 2n*pi and dphi2 = n*pi",
            }
        } else {
            Classification {
                class: StateClass::Biseparable,
                condition: "dphi3 = 2n*pi (qubit B factors out)",
            }
        }
    } else if is_multiple_of(dphi3 - PI, TAU, eps) {
        Classification {
            class: StateClass::Ghz,
            condition: "dphi3 = (2n+1)*pi",
        }
    } else {
        Classification {
            class: StateClass::GhzType,
            condition: "dphi3 not a multiple of pi",
        }
    };
    Ok(class)
}

pub fn classify_linear(dphi2: f64, dphi3: f64, dphi4: f64, eps: f64) -> Result<Classification> {
    check_inputs(eps, &[dphi2, dphi3, dphi4])?;
    let class = if is_multiple_of(dphi3, TAU, eps) {
        if is_multiple_of(dphi2 + dphi4, TAU, eps) {
            Classification {
                class: StateClass::FullySeparable,
                condition: "dphi3 = 2n*pi and dphi2 + dphi4 = 2n*pi",
            }
        } else {
            Classification {
                class: StateClass::Biseparable,
                condition: "dphi3 = 2n*pi (qubit B factors out)",
            }
        }
    } else if is_multiple_of(dphi3 - PI, TAU, eps) {
        Classification {
            class: StateClass::Ghz,
            condition: "dphi3 = (2n+1)*pi",
        }
    } else {
        Classification {
            class: StateClass::GhzType,
            condition: "dphi3 not a multiple of pi",
        }
    };
    Ok(class)
}
