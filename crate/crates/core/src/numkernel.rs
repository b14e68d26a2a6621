//! Small dense complex linear algebra: just enough for 2-, 4- and 8-dimensional
//! density matrices.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{QgemError, Result};
use crate::states::{DensityMatrix, PureState, Qubit};

/// Largest tolerated `|M[i][j] - conj(M[j][i])|` before symmetrization.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Largest tolerated deviation of `‖ψ‖²` from one.
pub const NORM_TOL: f64 = 1e-9;

const JACOBI_REL_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        ComplexMatrix { dim, data }
    }

    /// Builds a matrix from row-major entries; `data.len()` must be a perfect square.
    pub fn from_row_major(data: Vec<Complex64>) -> Result<Self> {
        let dim = (data.len() as f64).sqrt().round() as usize;
        if dim * dim != data.len() {
            return Err(QgemError::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        Ok(ComplexMatrix { dim, data })
    }

    /// `|v⟩⟨v|`.
    pub fn outer(v: &[Complex64]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, rhs: &ComplexMatrix) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(QgemError::DimensionMismatch {
                expected: self.dim,
                found: rhs.dim,
            });
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// `v† M v`.
    pub fn expectation(&self, v: &[Complex64]) -> Result<Complex64> {
        if v.len() != self.dim {
            return Err(QgemError::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.dim {
            let row: Complex64 = (0..self.dim).map(|j| self[(i, j)] * v[j]).sum();
            acc += v[i].conj() * row;
        }
        Ok(acc)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `max |M[i][j] - conj(M[j][i])|`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `max |M[i][j] - N[i][j]|`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `(M + M†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| {
            if i == j {
                Complex64::new(self[(i, i)].re, 0.0)
            } else {
                (self[(i, j)] + self[(j, i)].conj()) * 0.5
            }
        })
    }

    /// Eigenvalues of a Hermitian matrix in ascending order.
    ///
    /// The input is symmetrized first; it is rejected only if its asymmetry
    /// exceeds [`HERMITIAN_TOL`].
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        if !self.is_finite() {
            return Err(QgemError::InvalidMatrix);
        }
        let asymmetry = self.hermitian_defect();
        if asymmetry > HERMITIAN_TOL {
            return Err(QgemError::NotHermitian { asymmetry });
        }
        jacobi_eigenvalues(self.hermitian_part())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Cyclic complex Jacobi. Each rotation first removes the phase of `a[p][q]`
/// with a diagonal unitary, then applies the real symmetric Jacobi rotation
/// that annihilates the now-real element.
fn jacobi_eigenvalues(mut a: ComplexMatrix) -> Result<Vec<f64>> {
    let n = a.dim();
    let scale = a.frobenius_norm();
    let diag = |a: &ComplexMatrix| {
        let mut d: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
        d.sort_by(f64::total_cmp);
        d
    };
    if scale == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let threshold = JACOBI_REL_TOL * scale;

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) < threshold {
            return Ok(diag(&a));
        }
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let g = apq.norm();
                if g == 0.0 {
                    continue;
                }
                let phase = apq / g;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let zeta = (aqq - app) / (2.0 * g);
                let t = if zeta.is_infinite() {
                    0.5 / zeta
                } else {
                    zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let phase_conj = phase.conj();

                // A <- A U, U = [[c, s], [-s e^{-iθ}, c e^{-iθ}]] on (p, q).
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c - akq * phase_conj * s;
                    a[(k, q)] = akp * s + akq * phase_conj * c;
                }
                // A <- U† A.
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c - aqk * phase * s;
                    a[(q, k)] = apk * s + aqk * phase * c;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;
            }
        }
    }
    if off_diagonal_norm(&a) < threshold {
        return Ok(diag(&a));
    }
    Err(QgemError::NoConvergence {
        sweeps: JACOBI_MAX_SWEEPS,
    })
}

pub(crate) fn check_normalized(amplitudes: &[Complex64]) -> Result<()> {
    let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
    if !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > NORM_TOL {
        return Err(QgemError::NotNormalized { norm_sqr });
    }
    Ok(())
}

/// Single-qubit reduced density matrix of a pure three-qubit state.
pub fn reduced_density(state: &PureState, kept: Qubit) -> Result<ComplexMatrix> {
    let amps = state.amplitudes();
    check_normalized(amps)?;
    let shift = kept.bit_shift();
    let mut rho = ComplexMatrix::zeros(2);
    for (i, ai) in amps.iter().enumerate() {
        for (j, aj) in amps.iter().enumerate() {
            // traced-out bits must agree
            if (i ^ j) & !(1 << shift) != 0 {
                continue;
            }
            let bi = (i >> shift) & 1;
            let bj = (j >> shift) & 1;
            rho[(bi, bj)] += ai * aj.conj();
        }
    }
    rho[(0, 0)].im = 0.0;
    rho[(1, 1)].im = 0.0;
    Ok(rho)
}

/// Fidelity `⟨ψ|ρ|ψ⟩` of a pure reference with a density matrix.
pub fn expectation_pure(rho: &DensityMatrix, psi: &PureState) -> Result<f64> {
    check_normalized(psi.amplitudes())?;
    let value = rho.matrix().expectation(psi.amplitudes())?;
    if value.im.abs() > 1e-12 {
        return Err(QgemError::NumericalConsistency(format!(
            "expectation value has imaginary part {:e}",
            value.im
        )));
    }
    clamp_unit(value.re, "fidelity")
}

/// Clamps `x` into `[0, 1]` when it lies within 1e-10 of that interval.
pub(crate) fn clamp_unit(x: f64, what: &str) -> Result<f64> {
    const SLACK: f64 = 1e-10;
    if !(-SLACK..=1.0 + SLACK).contains(&x) {
        return Err(QgemError::NumericalConsistency(format!(
            "{what} {x} outside [0, 1]"
        )));
    }
    Ok(x.clamp(0.0, 1.0))
}
