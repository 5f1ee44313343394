//! Property suites over randomized inputs: symmetry, conservation laws,
//! inverse maps, and determinism that must hold for any configuration.

use num_complex::Complex64 as C64;
use proptest::prelude::*;

use magnon_chain::drive::{bessel_j, solve_amplitude_for_coupling, J1_PEAK};
use magnon_chain::dynamics::{
    evolve_lindblad_dt, evolve_unitary, propagate, uniform_grid, DensityMatrix, NoiseModel,
    PureState,
};
use magnon_chain::lattice::{build_hamiltonian, spectrum, BondPattern, ChainSpec};
use magnon_chain::readout::{bayes_correct, sample_shots, ReadoutCalibration};
use magnon_chain::topology::{analytic_cd, winding_number};

fn bond_values() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0_f64..8.0, 1..=9)
}

proptest! {
    /// Zero diagonal makes the chiral symmetry exact: Γ H Γ = −H, and the
    /// spectrum pairs as ±E.
    #[test]
    fn chiral_symmetry_any_bond_pattern(values in bond_values()) {
        let n = values.len() + 1;
        let chain = ChainSpec::new(n).unwrap();
        let h = build_hamiltonian(&chain, &BondPattern::from_real(&values)).unwrap();
        let dense = h.to_dense();
        for i in 0..n {
            for j in 0..n {
                let gamma_i = if i % 2 == 0 { 1.0 } else { -1.0 };
                let gamma_j = if j % 2 == 0 { 1.0 } else { -1.0 };
                let conjugated = gamma_i * gamma_j * dense[(i, j)].re;
                prop_assert!((conjugated + dense[(i, j)].re).abs() == 0.0);
            }
        }
        let modes = spectrum(&h);
        let scale = modes[n - 1].0.abs().max(1.0);
        for i in 0..n {
            prop_assert!(
                (modes[i].0 + modes[n - 1 - i].0).abs() <= 1e-9 * scale,
                "pairing broken: {} vs {}", modes[i].0, modes[n - 1 - i].0
            );
        }
    }

    /// Pairing survives complex bond phases.
    #[test]
    fn chiral_pairing_with_phases(
        values in prop::collection::vec(0.1_f64..8.0, 2..=7),
        phases in prop::collection::vec(-3.1_f64..3.1, 7),
    ) {
        let n = values.len() + 1;
        let phases = &phases[..values.len()];
        let chain = ChainSpec::new(n).unwrap();
        let bonds = BondPattern::with_phases(&values, phases).unwrap();
        let h = build_hamiltonian(&chain, &bonds).unwrap();
        let modes = spectrum(&h);
        let scale = modes[n - 1].0.abs().max(1.0);
        for i in 0..n {
            prop_assert!((modes[i].0 + modes[n - 1 - i].0).abs() <= 1e-9 * scale);
        }
    }

    /// Unitary evolution preserves the norm and never populates the vacuum.
    #[test]
    fn unitary_norm_conservation(
        values in bond_values(),
        site_pick in 0_usize..100,
        t in 0.0_f64..5.0,
    ) {
        let n = values.len() + 1;
        let site = site_pick % n + 1;
        let chain = ChainSpec::new(n).unwrap();
        let h = build_hamiltonian(&chain, &BondPattern::from_real(&values)).unwrap();
        let psi0 = PureState::site_excitation(n, site).unwrap();
        let times = [0.0, t.max(1e-6)];
        let traj = evolve_unitary(&h, &psi0, &times).unwrap();
        for i in 0..traj.len() {
            let total: f64 = traj.populations_at(i).iter().sum();
            prop_assert!((total - 1.0).abs() < 1e-10);
            prop_assert!(traj.vacuum()[i] == 0.0);
        }
    }

    /// Forward then backward propagation returns the initial state.
    #[test]
    fn unitary_reversibility(
        values in bond_values(),
        site_pick in 0_usize..100,
        t in 0.01_f64..4.0,
    ) {
        let n = values.len() + 1;
        let site = site_pick % n + 1;
        let chain = ChainSpec::new(n).unwrap();
        let h = build_hamiltonian(&chain, &BondPattern::from_real(&values)).unwrap();
        let psi0 = PureState::site_excitation(n, site).unwrap();
        let there = propagate(&h, &psi0, t).unwrap();
        let back = propagate(&h, &there, -t).unwrap();
        let defect: f64 = back
            .amplitudes()
            .iter()
            .zip(psi0.amplitudes())
            .map(|(a, b)| (a - b).norm())
            .sum();
        prop_assert!(defect < 1e-9, "round-trip defect {defect:.2e}");
    }

    /// Winding numbers depend only on the coupling ratio and obey the
    /// sublattice-exchange duality ν(J1, J2) + ν(J2, J1) = 1.
    #[test]
    fn winding_scale_invariance_and_duality(
        j1 in 0.05_f64..10.0,
        j2 in 0.05_f64..10.0,
        scale in 0.1_f64..50.0,
    ) {
        prop_assume!((j1 - j2).abs() > 1e-3 * j1.max(j2));
        let w = winding_number(j1, j2).unwrap();
        prop_assert_eq!(w.nu, if j1 < j2 { 1 } else { 0 });
        prop_assert!(w.residual < 1e-6);
        let ws = winding_number(scale * j1, scale * j2).unwrap();
        prop_assert_eq!(w.nu, ws.nu);
        let dual = winding_number(j2, j1).unwrap();
        prop_assert_eq!(w.nu + dual.nu, 1);
    }

    /// |P̄_d(t)| ≤ ν/2 + 1/2 for all times.
    #[test]
    fn analytic_cd_bounded(
        j1 in 0.1_f64..8.0,
        j2 in 0.1_f64..8.0,
        t in 0.0_f64..10.0,
    ) {
        prop_assume!((j1 - j2).abs() > 1e-3 * j1.max(j2));
        let nu = if j1 < j2 { 1.0 } else { 0.0 };
        let value = analytic_cd(j1, j2, t).unwrap();
        prop_assert!(value.abs() <= nu / 2.0 + 0.5 + 1e-9, "cd = {value}");
    }

    /// The amplitude solver inverts the Bessel map on its monotone branch.
    #[test]
    fn amplitude_solver_round_trip(
        g in 5.0_f64..30.0,
        mu in 50.0_f64..500.0,
        spectator_alpha in 0.0_f64..1.5,
        fraction in 0.01_f64..0.999,
    ) {
        let max = g * bessel_j(0, spectator_alpha).unwrap() * J1_PEAK;
        let target = fraction * max;
        let eps = solve_amplitude_for_coupling(g, mu, spectator_alpha, target).unwrap();
        let achieved =
            g * bessel_j(1, eps / mu).unwrap() * bessel_j(0, spectator_alpha).unwrap();
        prop_assert!((achieved - target).abs() < 1e-8 * max,
            "target {target}, achieved {achieved}");
    }

    /// Identity calibration leaves empirical frequencies untouched; shot
    /// sampling is deterministic in the seed.
    #[test]
    fn readout_identity_and_determinism(
        p in 0.0_f64..1.0,
        seed in 0_u64..10_000,
    ) {
        let cal = ReadoutCalibration::identity(1);
        let rec = sample_shots(&[vec![p]], 2000, &cal, seed).unwrap();
        let corrected = bayes_correct(&rec, &cal).unwrap();
        prop_assert_eq!(corrected.values[0][0], rec.frequencies()[0][0]);
        prop_assert!(!corrected.any_clamped());
        let again = sample_shots(&[vec![p]], 2000, &cal, seed).unwrap();
        prop_assert_eq!(rec, again);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Master-equation integration preserves the trace, keeps the state
    /// positive, and conserves total probability including the vacuum.
    #[test]
    fn lindblad_trace_and_positivity(
        values in prop::collection::vec(0.5_f64..6.0, 1..=3),
        t1 in 5.0_f64..40.0,
        ratio in 0.2_f64..1.9,
        site_pick in 0_usize..100,
    ) {
        let n = values.len() + 1;
        let site = site_pick % n + 1;
        let chain = ChainSpec::new(n).unwrap();
        let h = build_hamiltonian(&chain, &BondPattern::from_real(&values)).unwrap();
        let noise = NoiseModel::uniform(n, t1, ratio * t1).unwrap();
        let rho0 = DensityMatrix::site_excitation(n, site).unwrap();
        let times = uniform_grid(0.5, 0.05).unwrap();
        let traj = evolve_lindblad_dt(&h, &noise, &rho0, &times, 1e-3).unwrap();
        for i in 0..traj.len() {
            let total: f64 =
                traj.populations_at(i).iter().sum::<f64>() + traj.vacuum()[i];
            prop_assert!((total - 1.0).abs() < 1e-8, "probability leak {total}");
            prop_assert!(traj.populations_at(i).iter().all(|&p| p >= -1e-9));
            prop_assert!(traj.vacuum()[i] >= -1e-9);
        }
    }

    /// A pure state stays consistent between the two evolution paths when
    /// decoherence is switched off.
    #[test]
    fn lindblad_limits_to_unitary(
        values in prop::collection::vec(0.5_f64..6.0, 1..=3),
        site_pick in 0_usize..100,
    ) {
        let n = values.len() + 1;
        let site = site_pick % n + 1;
        let chain = ChainSpec::new(n).unwrap();
        let h = build_hamiltonian(&chain, &BondPattern::from_real(&values)).unwrap();
        let psi0 = PureState::site_excitation(n, site).unwrap();
        let rho0 = DensityMatrix::from_pure(&psi0);
        let times = uniform_grid(0.3, 0.03).unwrap();
        let unitary = evolve_unitary(&h, &psi0, &times).unwrap();
        let lindblad =
            evolve_lindblad_dt(&h, &NoiseModel::none(n), &rho0, &times, 1e-4).unwrap();
        for i in 0..times.len() {
            for j in 0..n {
                let d = (unitary.populations_at(i)[j] - lindblad.populations_at(i)[j]).abs();
                prop_assert!(d < 1e-8, "site {j} diff {d:.2e}");
            }
        }
    }
}

#[test]
fn profile_normalization_survives_superpositions() {
    // amplitude vectors with arbitrary scale normalize to unit density
    let raw = vec![C64::new(3.0, 1.0), C64::new(0.0, -2.0), C64::new(0.5, 0.0)];
    let state = PureState::from_amplitudes_normalized(raw).unwrap();
    let total: f64 = state.populations().iter().sum();
    assert!((total - 1.0).abs() < 1e-12);
}
