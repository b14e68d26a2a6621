//! Gravitational phases accumulated by the eight branches of three spatially
//! superposed masses, for the parallel, linear and star arrangements.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QgemError, Result};

/// Newtonian constant of gravitation, m³ kg⁻¹ s⁻² (CODATA 2018).
pub const G: f64 = 6.67430e-11;
/// Reduced Planck constant, J s (CODATA 2018).
pub const HBAR: f64 = 1.054571817e-34;

const SQRT_3: f64 = 1.732_050_807_568_877_2;
const GEOMETRY_TOL: f64 = 1e-12;

/// Experimental arrangement of the three superpositions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SetupKind {
    /// Three vertical superpositions side by side.
    Parallel,
    /// All six branches on one line.
    Linear,
    /// Branches pointing outward from a triangle.
    Star,
}

impl SetupKind {
    pub const ALL: [SetupKind; 3] = [SetupKind::Parallel, SetupKind::Linear, SetupKind::Star];

    pub fn name(self) -> &'static str {
        match self {
            SetupKind::Parallel => "parallel",
            SetupKind::Linear => "linear",
            SetupKind::Star => "star",
        }
    }
}

impl fmt::Display for SetupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SetupKind {
    type Err = QgemError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "parallel" | "par" => Ok(SetupKind::Parallel),
            "linear" | "lin" => Ok(SetupKind::Linear),
            "star" => Ok(SetupKind::Star),
            other => Err(QgemError::param(
                "setup",
                format!("unknown setup `{other}`"),
            )),
        }
    }
}

/// Computational basis label `|j₁j₂j₃⟩`, with `j₁` the most significant bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisIndex(u8);

impl BasisIndex {
    pub fn new(index: usize) -> Option<Self> {
        (index < 8).then_some(BasisIndex(index as u8))
    }

    pub fn from_bits(j1: u8, j2: u8, j3: u8) -> Self {
        BasisIndex(((j1 & 1) << 2) | ((j2 & 1) << 1) | (j3 & 1))
    }

    pub fn all() -> impl Iterator<Item = BasisIndex> {
        (0..8u8).map(BasisIndex)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// Branch bit of qubit `qubit` (0-based, qubit 0 = j₁).
    pub fn bit(self, qubit: usize) -> u8 {
        (self.0 >> (2 - qubit)) & 1
    }

    pub fn bits(self) -> [u8; 3] {
        [self.bit(0), self.bit(1), self.bit(2)]
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.bits();
        write!(f, "{a}{b}{c}")
    }
}

/// Physical inputs of one experimental run, in SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    /// Mass of each particle, kg.
    pub mass: f64,
    /// Minimum distance between branches of different particles, m.
    pub d_min: f64,
    /// Superposition width, m.
    pub width: f64,
    /// Interaction time, s.
    pub tau: f64,
    /// Decoherence rate, Hz.
    pub gamma: f64,
    /// Permit formally evaluating geometries with negative distances.
    #[serde(default)]
    pub unphysical_mode: bool,
}

impl Default for PhysicalParams {
    fn default() -> Self {
        PhysicalParams {
            mass: 1e-14,
            d_min: 35e-6,
            width: 10e-6,
            tau: 2.5,
            gamma: 0.0,
            unphysical_mode: false,
        }
    }
}

impl PhysicalParams {
    /// Checks every field; `d_min` must be positive unless unphysical mode is on.
    pub fn validate(&self) -> Result<()> {
        self.validate_except_d_min()?;
        if !self.unphysical_mode && self.d_min <= 0.0 {
            return Err(QgemError::param(
                "d_min",
                format!("must be positive, got {}", self.d_min),
            ));
        }
        Ok(())
    }

    fn validate_except_d_min(&self) -> Result<()> {
        let positive = |field, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(QgemError::param(
                    field,
                    format!("must be positive and finite, got {v}"),
                ))
            }
        };
        let non_negative = |field, v: f64| {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                Err(QgemError::param(
                    field,
                    format!("must be non-negative and finite, got {v}"),
                ))
            }
        };
        positive("mass", self.mass)?;
        positive("width", self.width)?;
        non_negative("tau", self.tau)?;
        non_negative("gamma", self.gamma)?;
        if !self.d_min.is_finite() {
            return Err(QgemError::param("d_min", "must be finite"));
        }
        Ok(())
    }

    /// Base separation `d` between neighbouring `|0⟩` branches.
    pub fn separation(&self, setup: SetupKind) -> f64 {
        match setup {
            SetupKind::Parallel | SetupKind::Star => self.d_min,
            SetupKind::Linear => self.d_min + self.width,
        }
    }

    /// `G m² τ / ħ`, the phase scale in rad·m.
    pub fn coupling(&self) -> f64 {
        G * self.mass * self.mass * self.tau / HBAR
    }

    /// For the linear setup a non-positive `d_min` is left to the per-pair
    /// distance checks so the offending pair can be reported.
    fn checked_separation(&self, setup: SetupKind) -> Result<f64> {
        match setup {
            SetupKind::Linear => self.validate_except_d_min()?,
            _ => self.validate()?,
        }
        let d = self.separation(setup);
        if !(d.is_finite() && d > 0.0) {
            return Err(QgemError::param(
                "d_min",
                format!("base separation of the {setup} setup must be positive, got {d}"),
            ));
        }
        Ok(d)
    }
}

/// Offset `R` of the star setup's mixed branch pairs.
pub fn star_radius(params: &PhysicalParams) -> Result<f64> {
    let d = params.checked_separation(SetupKind::Star)?;
    Ok(star_radius_for(d, params.width))
}

fn star_radius_for(d: f64, l: f64) -> f64 {
    // rationalized form of sqrt(d² + √3 d l + l²) - d, stable as l -> 0
    let s = (d * d + SQRT_3 * d * l + l * l).sqrt();
    (SQRT_3 * d * l + l * l) / (s + d)
}

/// Distance between branch `ji` of particle `i` and branch `jk` of particle `k` (`i < k`, 0-based).
fn branch_distance(setup: SetupKind, d: f64, l: f64, i: usize, k: usize, ji: u8, jk: u8) -> f64 {
    let gap = (k - i) as f64;
    let (ji, jk) = (ji as f64, jk as f64);
    match setup {
        SetupKind::Parallel => ((d * gap).powi(2) + (l * (ji - jk)).powi(2)).sqrt(),
        SetupKind::Linear => gap * d + l * (jk - ji),
        SetupKind::Star => {
            let both = ji * jk;
            (1.0 - both) * d + both * (d + SQRT_3 * l) + (jk - ji).abs() * star_radius_for(d, l)
        }
    }
}

const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

/// Phase of basis branch `idx` as the sum of its three pairwise contributions.
pub fn pairwise_phase(setup: SetupKind, params: &PhysicalParams, idx: BasisIndex) -> Result<f64> {
    let d = params.checked_separation(setup)?;
    let coupling = params.coupling();
    let mut terms = [0.0; 3];
    for (term, &(i, k)) in terms.iter_mut().zip(&PAIRS) {
        let r = branch_distance(setup, d, params.width, i, k, idx.bit(i), idx.bit(k));
        if r == 0.0 {
            return Err(QgemError::DegenerateGeometry {
                first: i + 1,
                second: k + 1,
            });
        }
        if r < 0.0 && !params.unphysical_mode {
            return Err(QgemError::UnphysicalGeometry {
                first: i + 1,
                second: k + 1,
                distance: r,
            });
        }
        *term = coupling / r;
    }
    // branches related by symmetry share the same multiset of terms; sorting
    // makes their sums bit-identical
    terms.sort_by(f64::total_cmp);
    Ok(terms[0] + terms[1] + terms[2])
}

/// The eight accumulated phases `φ_{j₁j₂j₃}` of one setup, in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseSet {
    pub setup: SetupKind,
    pub phases: [f64; 8],
}

/// Branch indices sharing a phase, in order of the distinct phases.
fn degeneracy_classes(setup: SetupKind) -> &'static [&'static [usize]] {
    match setup {
        SetupKind::Parallel => &[
            &[0b000, 0b111],
            &[0b001, 0b011, 0b100, 0b110],
            &[0b010, 0b101],
        ],
        SetupKind::Linear => &[
            &[0b000, 0b111],
            &[0b001, 0b011],
            &[0b010, 0b101],
            &[0b100, 0b110],
        ],
        SetupKind::Star => &[
            &[0b000],
            &[0b111],
            &[0b001, 0b010, 0b100],
            &[0b011, 0b101, 0b110],
        ],
    }
}

impl PhaseSet {
    /// Wraps raw phases after checking them against the setup's degeneracy pattern.
    pub fn new(setup: SetupKind, phases: [f64; 8]) -> Result<Self> {
        let set = PhaseSet { setup, phases };
        set.check_degeneracy()?;
        Ok(set)
    }

    /// Builds a phase set from its distinct values (3 for parallel, 4 otherwise).
    pub fn from_distinct(setup: SetupKind, distinct: &[f64]) -> Result<Self> {
        let classes = degeneracy_classes(setup);
        if distinct.len() != classes.len() {
            return Err(QgemError::DimensionMismatch {
                expected: classes.len(),
                found: distinct.len(),
            });
        }
        if let Some(bad) = distinct.iter().find(|p| !p.is_finite()) {
            return Err(QgemError::param(
                "phase",
                format!("must be finite, got {bad}"),
            ));
        }
        let mut phases = [0.0; 8];
        for (class, &value) in classes.iter().zip(distinct) {
            for &idx in *class {
                phases[idx] = value;
            }
        }
        Ok(PhaseSet { setup, phases })
    }

    /// Builds a phase set with `φ₁ = 0` from the phase differences `Δφ₂, Δφ₃[, Δφ₄]`.
    pub fn from_deltas(setup: SetupKind, deltas: &[f64]) -> Result<Self> {
        let mut distinct = Vec::with_capacity(deltas.len() + 1);
        distinct.push(0.0);
        distinct.extend_from_slice(deltas);
        Self::from_distinct(setup, &distinct)
    }

    pub fn check_degeneracy(&self) -> Result<()> {
        let finite = self.phases.iter().all(|p| p.is_finite());
        let consistent = degeneracy_classes(self.setup).iter().all(|class| {
            let first = self.phases[class[0]];
            class.iter().all(|&i| {
                let p = self.phases[i];
                (p - first).abs() <= 1e-15_f64.max(1e-15 * first.abs())
            })
        });
        if finite && consistent {
            Ok(())
        } else {
            Err(QgemError::DegeneracyViolation {
                setup: self.setup.to_string(),
            })
        }
    }

    pub fn phase(&self, idx: BasisIndex) -> f64 {
        self.phases[idx.index()]
    }

    /// Distinct phases `φ₁, φ₂, ...` in the conventional order.
    pub fn distinct(&self) -> Vec<f64> {
        degeneracy_classes(self.setup)
            .iter()
            .map(|class| self.phases[class[0]])
            .collect()
    }

    /// `Δφᵢ = φᵢ − φ₁` for `i ≥ 2`.
    pub fn deltas(&self) -> Vec<f64> {
        let distinct = self.distinct();
        distinct[1..].iter().map(|p| p - distinct[0]).collect()
    }

    /// Unit phase factors `e^{iΔφᵢ}`: `(α, β)` for parallel, `(α, β, λ)` for linear,
    /// `(μ, ν, ξ)` for star.
    pub fn factors(&self) -> Vec<Complex64> {
        self.deltas().into_iter().map(Complex64::cis).collect()
    }

    /// Multiplies every phase by `factor` (e.g. rescaling τ).
    pub fn scaled(&self, factor: f64) -> PhaseSet {
        PhaseSet {
            setup: self.setup,
            phases: self.phases.map(|p| p * factor),
        }
    }
}

/// Phases of all eight branches from the pairwise-distance sums.
pub fn pairwise_phases(setup: SetupKind, params: &PhysicalParams) -> Result<PhaseSet> {
    let mut phases = [0.0; 8];
    for idx in BasisIndex::all() {
        phases[idx.index()] = pairwise_phase(setup, params, idx)?;
    }
    Ok(PhaseSet { setup, phases })
}

/// Phases of all eight branches from the per-setup closed forms.
pub fn closed_form_phases(setup: SetupKind, params: &PhysicalParams) -> Result<PhaseSet> {
    let d = params.checked_separation(setup)?;
    let l = params.width;
    let k = params.coupling();
    let distinct = match setup {
        SetupKind::Parallel => {
            let diag = (d * d + l * l).sqrt();
            let far = (4.0 * d * d + l * l).sqrt();
            vec![
                5.0 * k / (2.0 * d),
                k * (1.0 / d + 1.0 / far + 1.0 / diag),
                k * (1.0 / (2.0 * d) + 2.0 / diag),
            ]
        }
        SetupKind::Linear => {
            for (den, pair) in [(d - l, (1, 2)), (2.0 * d - l, (1, 3))] {
                if den == 0.0 {
                    return Err(QgemError::DegenerateGeometry {
                        first: pair.0,
                        second: pair.1,
                    });
                }
                if den < 0.0 && !params.unphysical_mode {
                    return Err(QgemError::UnphysicalGeometry {
                        first: pair.0,
                        second: pair.1,
                        distance: den,
                    });
                }
            }
            vec![
                5.0 * k / (2.0 * d),
                k * (1.0 / d + 1.0 / (d + l) + 1.0 / (2.0 * d + l)),
                k * (1.0 / (2.0 * d) + 1.0 / (d + l) + 1.0 / (d - l)),
                k * (1.0 / d + 1.0 / (d - l) + 1.0 / (2.0 * d - l)),
            ]
        }
        SetupKind::Star => {
            let r = star_radius_for(d, l);
            let far = d + SQRT_3 * l;
            vec![
                3.0 * k / d,
                3.0 * k / far,
                k * (1.0 / d + 2.0 / (d + r)),
                k * (1.0 / far + 2.0 / (d + r)),
            ]
        }
    };
    PhaseSet::from_distinct(setup, &distinct)
}

/// A pair of branches closer than `d_min`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometryViolation {
    /// 1-based particle labels.
    pub particles: (usize, usize),
    pub branches: (u8, u8),
    pub distance: f64,
}

impl fmt::Display for GeometryViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "branch |{}⟩ of particle {} and branch |{}⟩ of particle {} are {:e} m apart",
            self.branches.0, self.particles.0, self.branches.1, self.particles.1, self.distance
        )
    }
}

/// Lists every branch pair entering the phase formula that sits closer than
/// `d_min`, or at a non-positive distance.
pub fn validate_geometry(setup: SetupKind, params: &PhysicalParams) -> Vec<GeometryViolation> {
    let d = params.separation(setup);
    let mut out = Vec::new();
    for &(i, k) in &PAIRS {
        for ji in 0..2u8 {
            for jk in 0..2u8 {
                let r = branch_distance(setup, d, params.width, i, k, ji, jk);
                if !(r > 0.0 && r >= params.d_min - GEOMETRY_TOL) {
                    out.push(GeometryViolation {
                        particles: (i + 1, k + 1),
                        branches: (ji, jk),
                        distance: r,
                    });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn parallel_ground_phase_at_defaults() {
        // 5 G m² τ / (2 ħ d), evaluated by hand: 11.30164...
        let p = PhysicalParams::default();
        let phi = pairwise_phase(SetupKind::Parallel, &p, BasisIndex::from_bits(0, 0, 0)).unwrap();
        assert!((phi - 11.301_641_7).abs() < 1e-6, "{phi}");
    }

    #[test]
    fn zero_time_gives_zero_phases() {
        let p = PhysicalParams {
            tau: 0.0,
            ..Default::default()
        };
        for setup in SetupKind::ALL {
            for idx in BasisIndex::all() {
                assert_eq!(pairwise_phase(setup, &p, idx).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn star_ground_phase() {
        let p = PhysicalParams::default();
        let expected = 3.0 * p.coupling() / p.d_min;
        let phi = pairwise_phase(SetupKind::Star, &p, BasisIndex::from_bits(0, 0, 0)).unwrap();
        assert!(rel(phi, expected) < 1e-14);
    }

    #[test]
    fn closed_form_displays() {
        let p = PhysicalParams::default();
        let k = p.coupling();
        let (d, l) = (p.d_min, p.width);
        let par = closed_form_phases(SetupKind::Parallel, &p).unwrap();
        let expected = k * (1.0 / (2.0 * d) + 2.0 / (d * d + l * l).sqrt());
        assert!(rel(par.phases[0b010], expected) < 1e-14);

        let star = closed_form_phases(SetupKind::Star, &p).unwrap();
        let r = star_radius(&p).unwrap();
        let expected = k * (1.0 / (d + 3f64.sqrt() * l) + 2.0 / (d + r));
        assert!(rel(star.phases[0b011], expected) < 1e-14);
    }

    #[test]
    fn linear_equivalence_point() {
        // l = sqrt(5/2) d requires d_min = d - l < 0
        let d = 45e-6;
        let l = (2.5f64).sqrt() * d;
        let p = PhysicalParams {
            d_min: d - l,
            width: l,
            unphysical_mode: true,
            ..Default::default()
        };
        let set = closed_form_phases(SetupKind::Linear, &p).unwrap();
        let distinct = set.distinct();
        assert!((distinct[1] - distinct[3]).abs() <= 1e-12 * distinct[1].abs());
        assert!(rel(distinct[1], 5.0 / 3.0 * p.coupling() / d) < 1e-12);
    }

    #[test]
    fn linear_rejects_negative_distance_by_default() {
        let p = PhysicalParams {
            d_min: -3e-6,
            width: 10e-6,
            ..Default::default()
        };
        assert!(matches!(
            pairwise_phase(SetupKind::Linear, &p, BasisIndex::from_bits(1, 0, 0)),
            Err(QgemError::UnphysicalGeometry {
                first: 1,
                second: 2,
                ..
            })
        ));
        assert!(matches!(
            closed_form_phases(SetupKind::Linear, &p),
            Err(QgemError::UnphysicalGeometry { .. })
        ));
        assert!(matches!(
            pairwise_phase(SetupKind::Parallel, &p, BasisIndex::from_bits(1, 0, 0)),
            Err(QgemError::InvalidParameter { field: "d_min", .. })
        ));
        let p = PhysicalParams {
            unphysical_mode: true,
            ..p
        };
        assert!(pairwise_phase(SetupKind::Linear, &p, BasisIndex::from_bits(1, 0, 0)).is_ok());
    }

    #[test]
    fn linear_zero_distance_is_degenerate() {
        let p = PhysicalParams {
            d_min: 0.0,
            width: 10e-6,
            ..Default::default()
        };
        assert_eq!(
            pairwise_phase(SetupKind::Linear, &p, BasisIndex::from_bits(1, 0, 0)),
            Err(QgemError::DegenerateGeometry {
                first: 1,
                second: 2
            })
        );
        assert!(closed_form_phases(SetupKind::Linear, &p).is_err());
    }

    #[test]
    fn star_radius_values() {
        let small = PhysicalParams {
            width: 1e-15,
            ..Default::default()
        };
        assert!(star_radius(&small).unwrap() < 1e-14);

        let d = 35e-6;
        let equal = PhysicalParams {
            d_min: d,
            width: d,
            ..Default::default()
        };
        let expected = d * ((2.0 + 3f64.sqrt()).sqrt() - 1.0);
        assert!(rel(star_radius(&equal).unwrap(), expected) < 1e-14);
        assert!((expected / d - 0.9319).abs() < 1e-4);

        let p = PhysicalParams::default();
        let direct =
            (35e-6f64.powi(2) + 3f64.sqrt() * 35e-6 * 10e-6 + 10e-6f64.powi(2)).sqrt() - 35e-6;
        assert!(rel(star_radius(&p).unwrap(), direct) < 1e-12);
        assert!((direct - 8.946e-6).abs() < 0.001e-6);
    }

    #[test]
    fn geometry_validation() {
        let p = PhysicalParams::default();
        for setup in SetupKind::ALL {
            assert!(validate_geometry(setup, &p).is_empty(), "{setup}");
        }
        let bad = PhysicalParams {
            d_min: -1e-6,
            unphysical_mode: true,
            ..Default::default()
        };
        let v = validate_geometry(SetupKind::Linear, &bad);
        assert!(!v.is_empty());
        assert!(v
            .iter()
            .any(|x| x.distance <= 0.0 || x.distance < bad.d_min));
    }

    #[test]
    fn invalid_params() {
        let p = PhysicalParams {
            mass: -1.0,
            ..Default::default()
        };
        assert!(matches!(
            closed_form_phases(SetupKind::Parallel, &p),
            Err(QgemError::InvalidParameter { field: "mass", .. })
        ));
        let p = PhysicalParams {
            gamma: -0.1,
            ..Default::default()
        };
        assert!(matches!(
            p.validate(),
            Err(QgemError::InvalidParameter { field: "gamma", .. })
        ));
    }

    #[test]
    fn degeneracy_checks() {
        let mut raw = [0.0; 8];
        raw[0b010] = 1.0;
        assert!(PhaseSet::new(SetupKind::Parallel, raw).is_err());
        raw[0b101] = 1.0;
        assert!(PhaseSet::new(SetupKind::Parallel, raw).is_ok());
        assert!(PhaseSet::new(SetupKind::Star, raw).is_err());
    }

    #[test]
    fn pairwise_sets_respect_degeneracy() {
        let p = PhysicalParams::default();
        for setup in SetupKind::ALL {
            let set = pairwise_phases(setup, &p).unwrap();
            for class in degeneracy_classes(setup) {
                for &i in *class {
                    assert_eq!(set.phases[i].to_bits(), set.phases[class[0]].to_bits());
                }
            }
        }
    }

    #[test]
    fn deltas_and_factors() {
        let set = PhaseSet::from_deltas(SetupKind::Linear, &[0.1, 0.2, 0.3]).unwrap();
        assert_eq!(set.deltas(), vec![0.1, 0.2, 0.3]);
        assert_eq!(set.phases[0b110], 0.3);
        assert_eq!(set.factors().len(), 3);
        assert!(PhaseSet::from_deltas(SetupKind::Parallel, &[0.1]).is_err());
    }

    #[test]
    fn setup_names_round_trip() {
        for setup in SetupKind::ALL {
            assert_eq!(setup.name().parse::<SetupKind>().unwrap(), setup);
        }
        assert!("hexagon".parse::<SetupKind>().is_err());
    }
}
