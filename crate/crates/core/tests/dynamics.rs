use distill_core::distill::{fidelity, first_order_reduction_spin_dissipation, reduction_value};
use distill_core::dynamics::{
    evolve, spin_dephasing, spin_dissipation, two_qubit_dephasing, two_qubit_dissipation, IntegratorConfig,
};
use distill_core::states::{max_entangled, projector, singlet};
use distill_core::{Complex64, ComplexMatrix, DensityMatrix};

#[test]
fn trace_drift_over_ten_thousand_steps() {
    let model = spin_dissipation(4, 1.0, 0.5).unwrap();
    let rho0 = DensityMatrix::single(ComplexMatrix::from_fn(5, |_, _| Complex64::new(0.2, 0.0))).unwrap();
    let traj = evolve(&model, &rho0, &IntegratorConfig::new(1e-3, 10.0, 1000).unwrap()).unwrap();
    assert_eq!(traj.times.len(), 11);
    for (_, s) in traj.iter() {
        assert!((s.matrix().trace().re - 1.0).abs() < 1e-9);
    }
}

#[test]
fn rk4_step_halving_ratio() {
    let model = two_qubit_dissipation(1.0, 0.6).unwrap();
    let rho0 = projector(&singlet(), 2, 2).unwrap();
    let run = |dt: f64| {
        let cfg = IntegratorConfig::new(dt, 2.0, usize::MAX).unwrap();
        evolve(&model, &rho0, &cfg).unwrap().last().unwrap().1.matrix().clone()
    };
    let (a, b, c) = (run(0.2), run(0.1), run(0.05));
    let ratio = a.max_abs_diff(&b) / b.max_abs_diff(&c);
    assert!((8.0..=32.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn unital_dephasing_keeps_maximally_mixed_state() {
    let model = spin_dephasing(3, 1.0, 0.8).unwrap().two_sided();
    let rho0 = DensityMatrix::maximally_mixed(4, 4).unwrap();
    let traj = evolve(&model, &rho0, &IntegratorConfig::new(1e-2, 2.0, 20).unwrap()).unwrap();
    for (_, s) in traj.iter() {
        assert!(s.matrix().max_abs_diff(rho0.matrix()) < 1e-9);
    }
}

#[test]
fn spin_dissipation_relaxes_to_ground() {
    let gamma = 0.5;
    for two_f in 1..=4 {
        let d = two_f + 1;
        let model = spin_dissipation(two_f, 1.0, gamma).unwrap();
        let rho0 =
            DensityMatrix::single(ComplexMatrix::from_fn(d, |_, _| Complex64::new(1.0 / d as f64, 0.0))).unwrap();
        let cfg = IntegratorConfig::new(1e-2, 20.0 / gamma, 1000).unwrap();
        let traj = evolve(&model, &rho0, &cfg).unwrap();
        let (_, last) = traj.last().unwrap();
        let ground = last.matrix()[(d - 1, d - 1)].re;
        assert!(ground > 0.99, "2f = {two_f}: ground population {ground}");
    }
}

#[test]
fn two_qubit_dephasing_fidelity_is_exponential() {
    // singlet coherence between |01> and |10> decays as e^{-ct}; c fitted
    // from the run, not assumed
    let gamma = 0.6;
    let model = two_qubit_dephasing(1.0, gamma).unwrap();
    let rho0 = projector(&singlet(), 2, 2).unwrap();
    let traj = evolve(&model, &rho0, &IntegratorConfig::new(1e-3, 1.5, 50).unwrap()).unwrap();
    let fs: Vec<f64> = traj.iter().map(|(_, s)| fidelity(&rho0, s).unwrap()).collect();
    let (t1, f1) = (traj.times[10], fs[10]);
    let c = -((2.0 * f1 - 1.0).ln()) / t1;
    assert!(c > 0.0);
    for ((t, s), f) in traj.iter().zip(&fs) {
        assert!((f - (0.5 + 0.5 * (-c * t).exp())).abs() < 1e-6, "t = {t}");
        assert!(*f > 0.5);
        for k in 0..4 {
            assert!((s.matrix()[(k, k)] - rho0.matrix()[(k, k)]).norm() < 1e-9);
        }
    }
    // two σ_z jumps at rate γ each damp this coherence at 4γ
    assert!((c - 4.0 * gamma).abs() < 1e-6);
}

#[test]
fn first_order_spin_reduction_against_evolution() {
    // agree at t = 0; the closed form's first-order terms differ from the
    // evolved state, so the gap shrinks only linearly in γt
    let (two_f, omega, gamma) = (4, 1.0, 0.2);
    let d = two_f + 1;
    let psi = max_entangled(d).unwrap();
    let rho0 = projector(&psi, d, d).unwrap();
    let model = spin_dissipation(two_f, omega, gamma).unwrap().two_sided();
    let g0 = reduction_value(&rho0, &psi).unwrap();
    assert!((g0 - first_order_reduction_spin_dissipation(two_f, omega, gamma, 0.0)).abs() < 1e-12);

    let mut gaps = Vec::new();
    for &gt in &[0.1, 0.05, 0.025] {
        let t = gt / gamma;
        let traj = evolve(&model, &rho0, &IntegratorConfig::new(t / 200.0, t, usize::MAX).unwrap()).unwrap();
        let g = reduction_value(traj.last().unwrap().1, &psi).unwrap();
        gaps.push((g - first_order_reduction_spin_dissipation(two_f, omega, gamma, t)).abs() / gt);
    }
    // gap/γt does not vanish as γt → 0
    assert!(gaps[2] > 0.5, "{gaps:?}");
}
