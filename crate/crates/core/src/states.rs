//! Three-qubit pure states, density matrices and the dephasing channel.

use num_complex::Complex64;

use crate::error::{QgemError, Result};
use crate::numkernel::{check_normalized, ComplexMatrix};
use crate::setups::{BasisIndex, PhaseSet};

const AMPLITUDE: f64 = 0.353_553_390_593_273_8; // 1 / (2√2)

/// One of the three qubits, `A` being the most significant bit of a [`BasisIndex`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Qubit {
    A,
    B,
    C,
}

impl Qubit {
    pub const ALL: [Qubit; 3] = [Qubit::A, Qubit::B, Qubit::C];

    /// 0-based position (A = 0).
    pub fn position(self) -> usize {
        match self {
            Qubit::A => 0,
            Qubit::B => 1,
            Qubit::C => 2,
        }
    }

    pub(crate) fn bit_shift(self) -> usize {
        2 - self.position()
    }
}

/// Eight complex amplitudes indexed by [`BasisIndex`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureState {
    amplitudes: [Complex64; 8],
}

impl PureState {
    /// Fails with `NotNormalized` unless `Σ|aᵢ|²` is within 1e-9 of one.
    pub fn new(amplitudes: [Complex64; 8]) -> Result<Self> {
        check_normalized(&amplitudes)?;
        Ok(PureState { amplitudes })
    }

    /// Rescales to unit norm.
    pub fn normalized(amplitudes: [Complex64; 8]) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(QgemError::NotNormalized {
                norm_sqr: norm * norm,
            });
        }
        Ok(PureState {
            amplitudes: amplitudes.map(|a| a / norm),
        })
    }

    /// No normalization check; operations on the result still validate it.
    pub fn from_amplitudes_unchecked(amplitudes: [Complex64; 8]) -> Self {
        PureState { amplitudes }
    }

    pub fn amplitudes(&self) -> &[Complex64; 8] {
        &self.amplitudes
    }

    pub fn amplitude(&self, idx: BasisIndex) -> Complex64 {
        self.amplitudes[idx.index()]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// Decoherence inputs recorded on a density matrix built by [`decohered_state`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Provenance {
    pub phases: PhaseSet,
    pub gamma: f64,
    pub tau: f64,
}

/// 8×8 unit-trace Hermitian operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    provenance: Option<Provenance>,
}

impl DensityMatrix {
    /// Checks dimension, finiteness, Hermiticity (1e-10) and unit trace (1e-10).
    pub fn from_matrix(matrix: ComplexMatrix) -> Result<Self> {
        if matrix.dim() != 8 {
            return Err(QgemError::DimensionMismatch {
                expected: 8,
                found: matrix.dim(),
            });
        }
        if !matrix.is_finite() {
            return Err(QgemError::InvalidMatrix);
        }
        let asymmetry = matrix.hermitian_defect();
        if asymmetry > crate::numkernel::HERMITIAN_TOL {
            return Err(QgemError::NotHermitian { asymmetry });
        }
        let trace = matrix.trace();
        if (trace - Complex64::new(1.0, 0.0)).norm() > 1e-10 {
            return Err(QgemError::param(
                "rho",
                format!("trace must be 1, got {trace}"),
            ));
        }
        Ok(DensityMatrix {
            matrix,
            provenance: None,
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    pub fn purity(&self) -> f64 {
        self.matrix.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix {
            matrix: ComplexMatrix::from_diagonal(&[0.125; 8]),
            provenance: None,
        }
    }
}

/// `|+⟩⊗|+⟩⊗|+⟩`: every amplitude equals `1/(2√2)`.
pub fn initial_state() -> PureState {
    PureState {
        amplitudes: [Complex64::new(AMPLITUDE, 0.0); 8],
    }
}

/// `(|000⟩ + |111⟩)/√2`.
pub fn ghz_state() -> PureState {
    let mut amplitudes = [Complex64::new(0.0, 0.0); 8];
    amplitudes[0] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    amplitudes[7] = amplitudes[0];
    PureState { amplitudes }
}

/// `(|100⟩ + |010⟩ + |001⟩)/√3`.
pub fn w_state() -> PureState {
    let a = Complex64::new(1.0 / 3f64.sqrt(), 0.0);
    let mut amplitudes = [Complex64::new(0.0, 0.0); 8];
    amplitudes[0b100] = a;
    amplitudes[0b010] = a;
    amplitudes[0b001] = a;
    PureState { amplitudes }
}

/// Uniform superposition with each branch carrying its gravitational phase.
/// The global phase `e^{iφ₁}` is kept.
pub fn evolved_state(phases: &PhaseSet) -> PureState {
    PureState {
        amplitudes: phases.phases.map(|p| Complex64::from_polar(AMPLITUDE, p)),
    }
}

/// `|ψ⟩⟨ψ|`.
pub fn pure_density(state: &PureState) -> Result<DensityMatrix> {
    check_normalized(state.amplitudes())?;
    let mut matrix = ComplexMatrix::outer(state.amplitudes());
    for i in 0..8 {
        matrix[(i, i)].im = 0.0;
    }
    Ok(DensityMatrix {
        matrix,
        provenance: None,
    })
}

/// Number of qubits on which the two basis labels differ.
pub fn hamming_delta(i: BasisIndex, j: BasisIndex) -> u32 {
    ((i.index() ^ j.index()) as u32).count_ones()
}

/// Dephased QGEM state: entry `(i, j)` is `e^{-δ(i,j)γτ} e^{i(φᵢ−φⱼ)} / 8`.
pub fn decohered_state(phases: &PhaseSet, gamma: f64, tau: f64) -> Result<DensityMatrix> {
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(QgemError::param(
            "gamma",
            format!("must be non-negative, got {gamma}"),
        ));
    }
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(QgemError::param(
            "tau",
            format!("must be non-negative, got {tau}"),
        ));
    }
    let damping: [f64; 4] = std::array::from_fn(|delta| (-(delta as f64) * gamma * tau).exp());
    let mut matrix = ComplexMatrix::zeros(8);
    for i in BasisIndex::all() {
        for j in BasisIndex::all() {
            let delta = hamming_delta(i, j) as usize;
            matrix[(i.index(), j.index())] =
                Complex64::from_polar(0.125 * damping[delta], phases.phase(i) - phases.phase(j));
        }
    }
    Ok(DensityMatrix {
        matrix,
        provenance: Some(Provenance {
            phases: *phases,
            gamma,
            tau,
        }),
    })
}
