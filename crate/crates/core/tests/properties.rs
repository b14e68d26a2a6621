mod common;

use std::f64::consts::{PI, TAU};

use common::*;
use proptest::prelude::*;
use qgem::measures::bipartition_negativities;
use qgem::states::ghz_state;
use qgem::sweep::{find_gamma_threshold, Predicate};
use qgem::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn setup_strategy() -> impl Strategy<Value = SetupKind> {
    prop_oneof![
        Just(SetupKind::Parallel),
        Just(SetupKind::Linear),
        Just(SetupKind::Star)
    ]
}

fn params_strategy() -> impl Strategy<Value = PhysicalParams> {
    (
        1e-15..1e-13f64,
        5e-6..100e-6f64,
        1e-6..60e-6f64,
        0.0..5.0f64,
    )
        .prop_map(|(mass, d_min, width, tau)| PhysicalParams {
            mass,
            d_min,
            width,
            tau,
            ..Default::default()
        })
}

fn deltas_strategy(setup: SetupKind) -> impl Strategy<Value = PhaseSet> {
    prop::collection::vec(-TAU..TAU, 3).prop_map(move |mut d| {
        if setup == SetupKind::Parallel {
            d.truncate(2);
        }
        PhaseSet::from_deltas(setup, &d).unwrap()
    })
}

fn any_phases() -> impl Strategy<Value = PhaseSet> {
    setup_strategy().prop_flat_map(deltas_strategy)
}

/// Roots of the 2×2 Hermitian blocks of a matrix whose non-zero off-diagonal
/// entries pair up indices, via the characteristic polynomial.
fn block_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    let n = m.dim();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for i in 0..n {
        if seen[i] {
            continue;
        }
        seen[i] = true;
        match (0..n).find(|&j| j != i && m[(i, j)].norm() > 0.0) {
            Some(j) => {
                seen[j] = true;
                let tr = m[(i, i)].re + m[(j, j)].re;
                let det = m[(i, i)].re * m[(j, j)].re - m[(i, j)].norm_sqr();
                let disc = (tr * tr - 4.0 * det).sqrt();
                out.push((tr - disc) / 2.0);
                out.push((tr + disc) / 2.0);
            }
            None => out.push(m[(i, i)].re),
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

#[test]
fn ghz_partial_transpose_matches_block_oracle() {
    let rho = pure_density(&ghz_state()).unwrap();
    for part in Bipartition::ALL {
        let pt = partial_transpose(&rho, part);
        let oracle = block_eigenvalues(&pt);
        assert!((oracle[0] + 0.5).abs() < 1e-15);
        assert!(oracle[1..].iter().all(|&e| e >= 0.0));
        let ev = pt.hermitian_eigenvalues().unwrap();
        for (a, b) in ev.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-13);
        }
        assert!((negativity(&rho, part).unwrap() - 1.0).abs() < 1e-13);
    }
}

#[test]
fn fidelity_identity_oracle_counts() {
    // (1/64) Σ_{i,j} e^{-δ(i,j) x} grouped by Hamming distance: 8, 24, 24, 8
    let mut counts = [0usize; 4];
    for i in BasisIndex::all() {
        for j in BasisIndex::all() {
            counts[hamming_delta(i, j) as usize] += 1;
        }
    }
    assert_eq!(counts, [8, 24, 24, 8]);
    for x in [0.0, 0.3, 1.0, 4.0] {
        let grouped: f64 = counts
            .iter()
            .enumerate()
            .map(|(d, &n)| n as f64 * (-(d as f64) * x).exp())
            .sum::<f64>()
            / 64.0;
        let closed = ((1.0 + (-x).exp()) / 2.0).powi(3);
        assert!((grouped - closed).abs() < 1e-15);
    }
}

#[test]
fn decohered_parallel_fidelity_at_unit_damping() {
    let phases = closed_form_phases(SetupKind::Parallel, &PhysicalParams::default()).unwrap();
    let psi = evolved_state(&phases);
    let rho = decohered_state(&phases, 0.4, 2.5).unwrap();
    // explicit contraction Σ conj(a_i) ρ_ij a_j
    let a = psi.amplitudes();
    let mut direct = c(0.0, 0.0);
    for i in 0..8 {
        for j in 0..8 {
            direct += a[i].conj() * rho.matrix()[(i, j)] * a[j];
        }
    }
    let expected = ((1.0 + (-1.0f64).exp()) / 2.0).powi(3);
    assert!((expected - 0.319_928_905_199).abs() < 1e-12);
    assert!((direct.re - expected).abs() < 1e-12);
    assert!((expectation_pure(&rho, &psi).unwrap() - expected).abs() < 1e-12);
}

#[test]
fn chi_is_half_on_ghz_class_parallel_points() {
    for n in -2..3 {
        for dphi2 in [0.0, 0.4, 1.7, 3.0] {
            let phases =
                PhaseSet::from_deltas(SetupKind::Parallel, &[dphi2, (2 * n + 1) as f64 * PI])
                    .unwrap();
            assert!((chi(&evolved_state(&phases)).unwrap() - 0.5).abs() < 1e-12);
        }
    }
}

#[test]
fn lighter_masses_lose_detection_sooner() {
    let heavy = PhysicalParams::default();
    let light = PhysicalParams {
        mass: 1e-15,
        ..heavy
    };
    for setup in SetupKind::ALL {
        let g_heavy = find_gamma_threshold(setup, &heavy, None, Predicate::Witness, 1.0).unwrap();
        let g_light = find_gamma_threshold(setup, &light, None, Predicate::Witness, 1.0).unwrap();
        assert!(g_light.gamma < g_heavy.gamma, "{setup}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn eigenvalue_reconstruction(seed in any::<u64>()) {
        let m = random_hermitian(&mut rng(seed), 8);
        let ev = m.hermitian_eigenvalues().unwrap();
        prop_assert!(ev.windows(2).all(|w| w[0] <= w[1]));
        let sum: f64 = ev.iter().sum();
        prop_assert!((sum - m.trace().re).abs() < 1e-10);
        let sum_sq: f64 = ev.iter().map(|e| e * e).sum();
        let tr_sq = m.matmul(&m).unwrap().trace().re;
        prop_assert!((sum_sq - tr_sq).abs() < 1e-9);
    }

    #[test]
    fn eigenvalues_invariant_under_local_unitaries(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_hermitian(&mut r, 8);
        let u = local_unitary(&[random_qubit_unitary(&mut r), random_qubit_unitary(&mut r), random_qubit_unitary(&mut r)]);
        let rotated = u.matmul(&m).unwrap().matmul(&u.adjoint()).unwrap().hermitian_part();
        let a = m.hermitian_eigenvalues().unwrap();
        let b = rotated.hermitian_eigenvalues().unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn reduced_density_is_a_state(seed in any::<u64>()) {
        let psi = random_state(&mut rng(seed));
        for q in Qubit::ALL {
            let r = reduced_density(&psi, q).unwrap();
            prop_assert!((r.trace().re - 1.0).abs() < 1e-12);
            prop_assert!(r.trace().im.abs() < 1e-12);
            prop_assert!(r.hermitian_defect() < 1e-12);
            prop_assert!(r.hermitian_eigenvalues().unwrap()[0] >= -1e-12);
        }
        let x = chi(&psi).unwrap();
        prop_assert!((0.5..=1.0).contains(&x));
    }

    #[test]
    fn fidelity_identity(phases in any_phases(), gamma_tau in 0.0..10.0f64, tau in 0.1..5.0f64) {
        let gamma = gamma_tau / tau;
        let rho = decohered_state(&phases, gamma, tau).unwrap();
        let f = expectation_pure(&rho, &evolved_state(&phases)).unwrap();
        let expected = ((1.0 + (-gamma * tau).exp()) / 2.0).powi(3);
        prop_assert!((f - expected).abs() <= 1e-12);
    }

    #[test]
    fn decohered_state_is_psd(setup in setup_strategy(), params in params_strategy(), gamma in 0.0..2.0f64) {
        let phases = closed_form_phases(setup, &params).unwrap();
        let rho = decohered_state(&phases, gamma, params.tau).unwrap();
        prop_assert!(rho.matrix().hermitian_eigenvalues().unwrap()[0] >= -1e-10);
        for i in BasisIndex::all() {
            prop_assert_eq!(rho.matrix()[(i.index(), i.index())], c(0.125, 0.0));
            for j in BasisIndex::all() {
                let expected = 0.125 * (-(hamming_delta(i, j) as f64) * gamma * params.tau).exp();
                prop_assert!((rho.matrix()[(i.index(), j.index())].norm() - expected).abs() < 1e-16);
            }
        }
    }

    #[test]
    fn closed_forms_match_pairwise_sums(setup in setup_strategy(), params in params_strategy()) {
        let closed = closed_form_phases(setup, &params).unwrap();
        let pairwise = pairwise_phases(setup, &params).unwrap();
        for i in 0..8 {
            let scale = closed.phases[i].abs().max(f64::MIN_POSITIVE);
            prop_assert!((closed.phases[i] - pairwise.phases[i]).abs() <= 1e-12 * scale);
        }
        prop_assert!(closed.check_degeneracy().is_ok());
        prop_assert!(pairwise.check_degeneracy().is_ok());
    }

    #[test]
    fn phases_scale_with_time_and_mass_squared(setup in setup_strategy(), params in params_strategy()) {
        let base = closed_form_phases(setup, &params).unwrap();
        let longer = closed_form_phases(setup, &PhysicalParams { tau: 2.0 * params.tau, ..params }).unwrap();
        let heavier = closed_form_phases(setup, &PhysicalParams { mass: 3.0 * params.mass, ..params }).unwrap();
        for i in 0..8 {
            let scale = base.phases[i].abs().max(f64::MIN_POSITIVE);
            prop_assert!((longer.phases[i] - 2.0 * base.phases[i]).abs() <= 1e-12 * scale);
            prop_assert!((heavier.phases[i] - 9.0 * base.phases[i]).abs() <= 1e-12 * 9.0 * scale);
        }
    }

    #[test]
    fn closed_tangle_matches_generic(phases in any_phases()) {
        let generic = three_tangle_pure(&evolved_state(&phases)).unwrap();
        let closed = three_tangle_closed(&phases).unwrap();
        prop_assert!((generic - closed).abs() <= 1e-10);
    }

    #[test]
    fn measures_invariant_under_local_unitaries(phases in any_phases(), gamma in 0.0..0.4f64, seed in any::<u64>()) {
        let mut r = rng(seed);
        let u = local_unitary(&[random_qubit_unitary(&mut r), random_qubit_unitary(&mut r), random_qubit_unitary(&mut r)]);
        let psi = evolved_state(&phases);
        let psi_u = apply_to_state(&u, &psi);
        prop_assert!((three_tangle_pure(&psi).unwrap() - three_tangle_pure(&psi_u).unwrap()).abs() < 1e-9);
        prop_assert!((chi(&psi).unwrap() - chi(&psi_u).unwrap()).abs() < 1e-9);

        let rho = decohered_state(&phases, gamma, 2.5).unwrap();
        let rho_u = conjugate(&u, &rho);
        let a = bipartition_negativities(&rho).unwrap();
        let b = bipartition_negativities(&rho_u).unwrap();
        for k in 0..3 {
            prop_assert!((a[k] - b[k]).abs() < 1e-9);
        }
        prop_assert!((tripartite_negativity(&rho).unwrap() - tripartite_negativity(&rho_u).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn trineg_non_increasing_in_gamma(phases in any_phases()) {
        let mut previous = f64::INFINITY;
        for k in 0..=20 {
            let gamma = 0.05 * k as f64;
            let rho = decohered_state(&phases, gamma, 2.5).unwrap();
            let n = tripartite_negativity(&rho).unwrap();
            prop_assert!(n <= previous + 1e-12, "gamma {}: {} > {}", gamma, n, previous);
            previous = n;
        }
    }

    #[test]
    fn witness_detection_implies_tripartite_negativity(phases in any_phases(), gamma in 0.0..0.3f64) {
        let report = qgem_witness(&phases, gamma, 2.5).unwrap();
        if report.expectation < 0.0 {
            let rho = decohered_state(&phases, gamma, 2.5).unwrap();
            prop_assert!(tripartite_negativity(&rho).unwrap() > 0.0);
        }
    }

    #[test]
    fn classifier_agrees_with_measures(dphi2 in -TAU..TAU, n in -2i32..3, which in 0u8..3, dphi4 in -TAU..TAU) {
        // pin Δφ₃ to a class boundary or leave it generic
        let dphi3 = match which {
            0 => 2.0 * PI * n as f64,
            1 => (2 * n + 1) as f64 * PI,
            _ => 0.5 + 0.1 * n as f64,
        };
        for (class, phases) in [
            (classify_parallel(dphi2, dphi3, 1e-9).unwrap().class, PhaseSet::from_deltas(SetupKind::Parallel, &[dphi2, dphi3]).unwrap()),
            (classify_linear(dphi2, dphi3, dphi4, 1e-9).unwrap().class, PhaseSet::from_deltas(SetupKind::Linear, &[dphi2, dphi3, dphi4]).unwrap()),
        ] {
            let psi = evolved_state(&phases);
            let tangle = three_tangle_pure(&psi).unwrap();
            let negs = bipartition_negativities(&pure_density(&psi).unwrap()).unwrap();
            match class {
                StateClass::Ghz => {
                    prop_assert!((tangle - 1.0).abs() < 1e-9);
                    prop_assert!((chi(&psi).unwrap() - 0.5).abs() < 1e-9);
                }
                StateClass::Biseparable | StateClass::FullySeparable => {
                    prop_assert!(tangle <= 1e-9);
                    prop_assert!(tripartite_negativity(&pure_density(&psi).unwrap()).unwrap() <= 1e-9);
                }
                StateClass::GhzType => prop_assert!(tangle > 0.0 && tangle < 1.0),
            }
            if class == StateClass::FullySeparable {
                prop_assert!(negs.iter().all(|&x| x <= 1e-9));
            }
        }
    }

    #[test]
    fn witness_threshold_matches_closed_form(phases in any_phases(), tau in 0.5..5.0f64) {
        let chi_value = chi(&evolved_state(&phases)).unwrap();
        // detection needs χ < 1 with some margin to keep γ* inside [0, 10]
        prop_assume!(chi_value < 0.99);
        let params = PhysicalParams { tau, ..Default::default() };
        let deltas = phases.deltas();
        let found = find_gamma_threshold(phases.setup, &params, Some(&deltas), Predicate::Witness, 10.0).unwrap();
        // oracle: solve χ = ((1 + e^{-γτ})/2)³ for γ
        let exact = -(2.0 * chi_value.cbrt() - 1.0).ln() / tau;
        prop_assert!(found.bracketed);
        prop_assert!((found.gamma - exact).abs() < 1e-5, "{} vs {}", found.gamma, exact);
    }
}
