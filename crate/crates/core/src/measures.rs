//! Tripartite entanglement quantifiers: bipartition negativity, tripartite
//! negativity, the three-tangle, and the fidelity-based witness `χ𝟙 − |ψ⟩⟨ψ|`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{QgemError, Result};
use crate::numkernel::{
    check_normalized, clamp_unit, expectation_pure, reduced_density, ComplexMatrix,
};
use crate::setups::{PhaseSet, SetupKind};
use crate::states::{decohered_state, evolved_state, DensityMatrix, PureState, Qubit};

/// Eigenvalues of a partial transpose above this value count as zero.
pub const NEGATIVE_EIGENVALUE_CUTOFF: f64 = -1e-12;

/// A one-versus-two split of the three qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bipartition {
    /// A | BC
    A,
    /// B | AC
    B,
    /// C | AB
    C,
}

impl Bipartition {
    pub const ALL: [Bipartition; 3] = [Bipartition::A, Bipartition::B, Bipartition::C];

    /// The qubit split off from the other two.
    pub fn isolated(self) -> Qubit {
        match self {
            Bipartition::A => Qubit::A,
            Bipartition::B => Qubit::B,
            Bipartition::C => Qubit::C,
        }
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Bipartition::A => "A|BC",
            Bipartition::B => "B|AC",
            Bipartition::C => "C|AB",
        })
    }
}

/// Transposes the two-dimensional index of the isolated qubit.
pub fn partial_transpose(rho: &DensityMatrix, part: Bipartition) -> ComplexMatrix {
    partial_transpose_matrix(rho.matrix(), part)
}

pub(crate) fn partial_transpose_matrix(m: &ComplexMatrix, part: Bipartition) -> ComplexMatrix {
    let mask = 1usize << part.isolated().bit_shift();
    ComplexMatrix::from_fn(m.dim(), |i, j| {
        if (i ^ j) & mask == 0 {
            m[(i, j)]
        } else {
            // swap the isolated bit between row and column
            m[(i ^ mask, j ^ mask)]
        }
    })
}

/// `−2 Σ σᵢ` over the negative eigenvalues `σᵢ` of the partial transpose.
pub fn negativity(rho: &DensityMatrix, part: Bipartition) -> Result<f64> {
    let eigenvalues = partial_transpose(rho, part).hermitian_eigenvalues()?;
    let negative: f64 = eigenvalues
        .iter()
        .filter(|&&e| e < NEGATIVE_EIGENVALUE_CUTOFF)
        .sum();
    Ok(-2.0 * negative)
}

/// Negativities of all three bipartitions, in `A, B, C` order.
pub fn bipartition_negativities(rho: &DensityMatrix) -> Result<[f64; 3]> {
    Ok([
        negativity(rho, Bipartition::A)?,
        negativity(rho, Bipartition::B)?,
        negativity(rho, Bipartition::C)?,
    ])
}

/// Geometric mean of the three bipartition negativities.
pub fn tripartite_negativity(rho: &DensityMatrix) -> Result<f64> {
    let [a, b, c] = bipartition_negativities(rho)?;
    let product = a * b * c;
    Ok(if product > 0.0 { product.cbrt() } else { 0.0 })
}

/// Three-tangle `4|d₁ − 2d₂ + 4d₃|` of a pure state.
pub fn three_tangle_pure(state: &PureState) -> Result<f64> {
    check_normalized(state.amplitudes())?;
    let a = state.amplitudes();
    let [a000, a001, a010, a011, a100, a101, a110, a111] = *a;
    let sq = |z: Complex64| z * z;

    let d1 = sq(a000) * sq(a111) + sq(a001) * sq(a110) + sq(a010) * sq(a101) + sq(a100) * sq(a011);
    let d2 = a000 * a111 * a011 * a100
        + a000 * a111 * a101 * a010
        + a000 * a111 * a110 * a001
        + a011 * a100 * a101 * a010
        + a011 * a100 * a110 * a001
        + a101 * a010 * a110 * a001;
    let d3 = a000 * a110 * a101 * a011 + a111 * a001 * a010 * a100;

    clamp_unit(4.0 * (d1 - 2.0 * d2 + 4.0 * d3).norm(), "three-tangle")
}

/// Per-setup closed form of the three-tangle in terms of the phase factors.
pub fn three_tangle_closed(phases: &PhaseSet) -> Result<f64> {
    phases.check_degeneracy()?;
    let f = phases.factors();
    let one = Complex64::new(1.0, 0.0);
    let value = match phases.setup {
        SetupKind::Parallel => {
            let (alpha, beta) = (f[0], f[1]);
            let (a2, b2) = (alpha * alpha, beta * beta);
            one + b2 * b2 - 2.0 * b2 - 4.0 * a2 + 8.0 * a2 * beta - 4.0 * a2 * b2
        }
        SetupKind::Linear => {
            let (alpha, beta, lambda) = (f[0], f[1], f[2]);
            let b2 = beta * beta;
            let al = alpha * lambda;
            one + b2 * b2 - 2.0 * b2 - 4.0 * al + 8.0 * al * beta - 4.0 * al * b2
        }
        SetupKind::Star => {
            let (mu, nu, xi) = (f[0], f[1], f[2]);
            mu * mu - 3.0 * nu * nu * xi * xi - 6.0 * mu * nu * xi
                + 4.0 * xi * xi * xi
                + 4.0 * mu * nu * nu * nu
        }
    };
    clamp_unit(value.norm() / 16.0, "three-tangle")
}

/// Largest eigenvalue of a 2×2 Hermitian unit-trace matrix.
fn top_eigenvalue_2x2(r: &ComplexMatrix) -> f64 {
    let (p, q) = (r[(0, 0)].re, r[(1, 1)].re);
    let off = r[(0, 1)].norm_sqr();
    let half_gap = ((p - q) * (p - q) / 4.0 + off).sqrt();
    (p + q) / 2.0 + half_gap
}

/// Maximal squared Schmidt coefficient over the three one-versus-two cuts.
pub fn chi(state: &PureState) -> Result<f64> {
    let mut best = 0.0f64;
    for q in Qubit::ALL {
        best = best.max(top_eigenvalue_2x2(&reduced_density(state, q)?));
    }
    if !(0.5 - 1e-12..=1.0 + 1e-12).contains(&best) {
        return Err(QgemError::NumericalConsistency(format!(
            "chi {best} outside [0.5, 1]"
        )));
    }
    Ok(best.clamp(0.5, 1.0))
}

/// Outcome of evaluating `Tr(𝒲ρ)` for `𝒲 = χ𝟙 − |ψ⟩⟨ψ|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessReport {
    pub chi: f64,
    /// `⟨ψ|ρ|ψ⟩`.
    pub fidelity: f64,
    /// `chi − fidelity`; negative certifies genuine tripartite entanglement.
    pub expectation: f64,
    pub reference_phases: Option<PhaseSet>,
}

impl WitnessReport {
    /// Strictly negative beyond numerical noise.
    pub fn detects(&self) -> bool {
        self.expectation < -1e-12
    }
}

pub fn witness_expectation(rho: &DensityMatrix, reference: &PureState) -> Result<WitnessReport> {
    let chi = chi(reference)?;
    let fidelity = expectation_pure(rho, reference)?;
    Ok(WitnessReport {
        chi,
        fidelity,
        expectation: chi - fidelity,
        reference_phases: None,
    })
}

/// Witness for the dephased state built around its own decoherence-free counterpart.
pub fn qgem_witness(phases: &PhaseSet, gamma: f64, tau: f64) -> Result<WitnessReport> {
    let reference = evolved_state(phases);
    let rho = decohered_state(phases, gamma, tau)?;
    let report = witness_expectation(&rho, &reference)?;
    Ok(WitnessReport {
        reference_phases: Some(*phases),
        ..report
    })
}
