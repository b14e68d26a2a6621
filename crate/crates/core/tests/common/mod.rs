#![allow(dead_code)]

use num_complex::Complex64;
use qgem::{ComplexMatrix, DensityMatrix, PureState};
use rand::Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Random SU(2) element from Euler angles.
pub fn random_qubit_unitary<R: Rng>(rng: &mut R) -> [[Complex64; 2]; 2] {
    let theta: f64 = rng.gen_range(0.0..std::f64::consts::PI);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let lambda: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let (s, co) = (theta / 2.0).sin_cos();
    [
        [c(co, 0.0), -Complex64::cis(lambda) * s],
        [Complex64::cis(phi) * s, Complex64::cis(phi + lambda) * co],
    ]
}

/// `u_A ⊗ u_B ⊗ u_C` as an 8×8 matrix (qubit A is the most significant bit).
pub fn local_unitary(us: &[[[Complex64; 2]; 2]; 3]) -> ComplexMatrix {
    ComplexMatrix::from_fn(8, |i, j| {
        (0..3)
            .map(|q| {
                let shift = 2 - q;
                us[q][(i >> shift) & 1][(j >> shift) & 1]
            })
            .product()
    })
}

pub fn apply_to_state(u: &ComplexMatrix, psi: &PureState) -> PureState {
    let a = psi.amplitudes();
    let out: [Complex64; 8] = std::array::from_fn(|i| (0..8).map(|j| u[(i, j)] * a[j]).sum());
    PureState::new(out).unwrap()
}

pub fn conjugate(u: &ComplexMatrix, rho: &DensityMatrix) -> DensityMatrix {
    let m = u
        .matmul(rho.matrix())
        .unwrap()
        .matmul(&u.adjoint())
        .unwrap();
    DensityMatrix::from_matrix(m.hermitian_part()).unwrap()
}

pub fn random_state<R: Rng>(rng: &mut R) -> PureState {
    let amps: [Complex64; 8] =
        std::array::from_fn(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    PureState::normalized(amps).unwrap()
}

pub fn random_hermitian<R: Rng>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let raw = ComplexMatrix::from_fn(dim, |_, _| {
        c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    raw.hermitian_part()
}
