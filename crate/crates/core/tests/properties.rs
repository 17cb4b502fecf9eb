use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use proptest::prelude::*;
use qchan_core::channels::{self, KrausChannel};
use qchan_core::matrix::{
    commutator, from_bloch, hs_norm_sq, to_bloch, BlochVector, ComplexMatrix, DensityMatrix,
};
use qchan_core::optimizer::{
    brute_force_mu, maximize_mu, mixed_state_diagnostic, probe_incompatibility, OptimizerConfig,
};
use qchan_core::quantumness::{
    check_outer_inequality, closed_form_mu, incompatibility, incompatibility_bloch,
    incompatibility_trace_form, visibilities, ClosedForm,
};
use qchan_core::sampling;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn bloch_strategy() -> impl Strategy<Value = BlochVector> {
    (0.0..=1.0f64, -1.0..=1.0f64, 0.0..TAU).prop_map(|(r, z, phi)| {
        let s = (1.0 - z * z).sqrt();
        BlochVector::new(r * s * phi.cos(), r * s * phi.sin(), r * z).unwrap()
    })
}

fn conjugate(u: &ComplexMatrix, m: &ComplexMatrix) -> ComplexMatrix {
    u.matmul(m).unwrap().matmul(&u.adjoint()).unwrap()
}

fn rotate(u: &ComplexMatrix, rho: &DensityMatrix) -> DensityMatrix {
    DensityMatrix::new(conjugate(u, rho.matrix())).unwrap()
}

/// One representative of every shipped channel family at a generic point.
fn validation_channels() -> Vec<KrausChannel> {
    vec![
        channels::identity(),
        channels::rtn(0.5).unwrap(),
        channels::rtn(-0.3).unwrap(),
        channels::nmd(0.75).unwrap(),
        channels::pd(0.25).unwrap(),
        channels::ad(0.5).unwrap(),
        channels::gad(0.5, 0.6).unwrap(),
        channels::unruh(PI / 6.0).unwrap(),
        channels::gdc([0.4, 0.3, 0.2, 0.1]).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn commutator_of_states_is_anti_hermitian(a in bloch_strategy(), b in bloch_strategy()) {
        let c = commutator(from_bloch(&a).matrix(), from_bloch(&b).matrix()).unwrap();
        let sum = c.add(&c.adjoint()).unwrap();
        prop_assert!(sum.entries().iter().all(|z| z.norm() <= 1e-15));
    }

    #[test]
    fn hs_norm_is_unitarily_invariant(a in bloch_strategy(), b in bloch_strategy(), seed in any::<u64>()) {
        let u = sampling::su2(&mut ChaCha8Rng::seed_from_u64(seed));
        let c = commutator(from_bloch(&a).matrix(), from_bloch(&b).matrix()).unwrap();
        prop_assert!((hs_norm_sq(&conjugate(&u, &c)) - hs_norm_sq(&c)).abs() <= 1e-14);
    }

    #[test]
    fn bloch_round_trip(a in bloch_strategy()) {
        let back = to_bloch(&from_bloch(&a)).unwrap();
        prop_assert!((back.x - a.x).abs() <= 1e-15);
        prop_assert!((back.y - a.y).abs() <= 1e-15);
        prop_assert!((back.z - a.z).abs() <= 1e-15);
    }

    #[test]
    fn incompatibility_is_symmetric_bounded_and_invariant(
        a in bloch_strategy(), b in bloch_strategy(), seed in any::<u64>()
    ) {
        let (ra, rb) = (from_bloch(&a), from_bloch(&b));
        let m = incompatibility(&ra, &rb).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&m));
        prop_assert_eq!(m, incompatibility(&rb, &ra).unwrap());
        let u = sampling::su2(&mut ChaCha8Rng::seed_from_u64(seed));
        let rotated = incompatibility(&rotate(&u, &ra), &rotate(&u, &rb)).unwrap();
        prop_assert!((rotated - m).abs() <= 1e-13);
    }

    #[test]
    fn state_with_itself_or_identity_is_compatible(a in bloch_strategy()) {
        let rho = from_bloch(&a);
        prop_assert!(incompatibility(&rho, &rho).unwrap() <= 1e-30);
        prop_assert!(incompatibility(&rho, &DensityMatrix::maximally_mixed(2)).unwrap() <= 1e-30);
    }
}

#[test]
fn three_forms_and_visibilities_agree_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..1000 {
        let a = sampling::qubit_state(&mut rng, 0.3);
        let b = sampling::qubit_state(&mut rng, 0.3);
        let direct = incompatibility(&a, &b).unwrap();
        let bloch = incompatibility_bloch(&to_bloch(&a).unwrap(), &to_bloch(&b).unwrap());
        let trace = incompatibility_trace_form(&a, &b).unwrap();
        let vis = visibilities(&a, &b).unwrap().incompatibility();
        for other in [bloch, trace, vis] {
            assert!((direct - other).abs() <= 1e-12, "{direct} vs {other}");
        }
    }
}

#[test]
fn every_constructor_is_complete_over_its_range() {
    let n = 60;
    let unit = |i: usize| i as f64 / (n - 1) as f64;
    let mut built: Vec<KrausChannel> = vec![channels::identity()];
    for i in 0..n {
        let s = unit(i);
        built.push(channels::rtn(2.0 * s - 1.0).unwrap());
        built.push(channels::nmd(2.0 * s - 1.0).unwrap());
        built.push(channels::pd(s).unwrap());
        built.push(channels::ad(s).unwrap());
        built.push(channels::unruh(s * PI / 4.0).unwrap());
        built.push(channels::gad(s, 1.0 - s).unwrap());
        built.push(channels::gad(s, s * s).unwrap());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..n {
        built.push(channels::gdc(sampling::simplex_point(&mut rng)).unwrap());
    }
    for ch in &built {
        assert!(
            ch.completeness_deviation() <= 1e-10,
            "{} {:?}",
            ch.label(),
            ch.kind()
        );
    }
}

#[test]
fn apply_keeps_states_valid() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for label in channels::LABELS {
        for _ in 0..1000 {
            let ch = sampling::builtin_channel(&mut rng, label).unwrap();
            let rho = sampling::qubit_state(&mut rng, 0.5);
            let out = ch.apply_matrix(rho.matrix()).unwrap();
            assert!(out.hermiticity_deviation() <= 1e-12);
            assert!((out.trace() - Complex64::new(1.0, 0.0)).norm() <= 1e-12);
            assert!(out.hermitian_eigenvalues().iter().all(|&e| e >= -1e-10));
            assert!(ch.apply(&rho).is_ok());
        }
    }
}

#[test]
fn diagonal_inputs_stay_compatible() {
    // Every shipped channel maps diagonal states to diagonal states.
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for label in channels::LABELS {
        let ch = sampling::builtin_channel(&mut rng, label).unwrap();
        for _ in 0..200 {
            let p: f64 = rng.random();
            let q: f64 = rng.random();
            let a = ch
                .apply(&DensityMatrix::diagonal(&[p, 1.0 - p]).unwrap())
                .unwrap();
            let b = ch
                .apply(&DensityMatrix::diagonal(&[q, 1.0 - q]).unwrap())
                .unwrap();
            assert!(incompatibility(&a, &b).unwrap() <= 1e-20, "{label}");
        }
    }
}

#[test]
fn dephasing_objective_is_flat_along_the_probe_family() {
    for ch in [
        channels::rtn(0.6).unwrap(),
        channels::nmd(-0.4).unwrap(),
        channels::pd(0.35).unwrap(),
    ] {
        let mut values = Vec::new();
        for i in 0..16 {
            for j in 0..16 {
                let x = PI * i as f64 / 15.0;
                let phi = TAU * j as f64 / 16.0;
                values.push(probe_incompatibility(&ch, x, phi).unwrap());
            }
        }
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / values.len() as f64;
        assert!(var.sqrt() <= 1e-10, "{}: std {}", ch.label(), var.sqrt());
    }
}

#[test]
fn maximum_dominates_probe_grid_and_mixed_states() {
    let mut cfg = OptimizerConfig::default().with_grid(16);
    cfg.include_mixed_diagnostic = true;
    cfg.mixed_samples = 500;
    for ch in validation_channels() {
        let r = maximize_mu(&ch, &cfg).unwrap();
        assert!(
            r.mu >= probe_incompatibility(&ch, 0.0, 0.0).unwrap() - 1e-12,
            "{}",
            ch.label()
        );
        assert!(
            r.mu >= brute_force_mu(&ch, 16).unwrap() - 1e-12,
            "{}",
            ch.label()
        );
        assert!(r.mu >= r.grid_mu);
        assert!(
            mixed_state_diagnostic(&ch, &cfg).unwrap() <= r.mu + 1e-9,
            "{}",
            ch.label()
        );
    }
}

#[test]
fn repeated_runs_are_bit_identical() {
    let cfg = OptimizerConfig::default().with_grid(12);
    for ch in validation_channels() {
        let a = maximize_mu(&ch, &cfg).unwrap();
        let b = maximize_mu(&ch, &cfg).unwrap();
        assert_eq!(a.mu.to_bits(), b.mu.to_bits());
        assert_eq!(a.argmax, b.argmax);
        assert_eq!(a.evaluations, b.evaluations);
    }
}

#[test]
fn amplitude_damping_maximum_exceeds_the_tabulated_probe_value() {
    let cfg = OptimizerConfig::default().with_grid(16);
    for gamma in [0.1, 0.25, 0.5, 0.75, 0.9] {
        let r = maximize_mu(&channels::ad(gamma).unwrap(), &cfg).unwrap();
        assert!(r.mu >= 1.0 - gamma - 1e-12);
        assert_eq!(r.closed_form, Some(1.0 - gamma));
    }
    // γ = 1/2: outputs a = (√½ sin x, ., ½ + ½cos x); the best pair reaches 27/32.
    let r = maximize_mu(&channels::ad(0.5).unwrap(), &cfg).unwrap();
    assert!((r.mu - 27.0 / 32.0).abs() < 1e-8, "{}", r.mu);
}

#[test]
fn generalized_amplitude_damping_is_reported_not_trusted() {
    let params = [("alpha".to_string(), 0.5), ("xi".to_string(), 0.6)]
        .into_iter()
        .collect();
    let ClosedForm::Unverified { branches } = closed_form_mu("gad", &params).unwrap() else {
        panic!("gad must not have a trusted closed form");
    };
    assert!((branches[1].value - 0.024).abs() < 1e-12);
    let r = maximize_mu(
        &channels::gad(0.5, 0.6).unwrap(),
        &OptimizerConfig::default().with_grid(16),
    )
    .unwrap();
    assert_eq!(r.closed_form, None);
    assert!(r.mu > branches[1].value);
}

#[test]
fn outer_inequality_holds_on_random_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for _ in 0..1000 {
        let p = rng.random_range(1e-3..1.0 - 1e-3);
        let rho0 = DensityMatrix::diagonal(&[p, 1.0 - p]).unwrap();
        let ch = sampling::any_builtin_channel(&mut rng);
        let rho_t = ch.apply(&sampling::qubit_state(&mut rng, 0.5)).unwrap();
        let check = check_outer_inequality(&rho0, &rho_t).unwrap();
        assert!(check.holds, "{check:?}");
    }
}

#[test]
fn brute_force_approaches_the_refined_maximum() {
    let cfg = OptimizerConfig::default();
    for ch in [
        channels::ad(0.5).unwrap(),
        channels::gdc([0.4, 0.3, 0.2, 0.1]).unwrap(),
    ] {
        let mu = maximize_mu(&ch, &cfg).unwrap().mu;
        let coarse = mu - brute_force_mu(&ch, 16).unwrap();
        let fine = mu - brute_force_mu(&ch, 40).unwrap();
        assert!(coarse >= -1e-12 && fine >= -1e-12);
        assert!(fine <= coarse + 1e-12, "{}: {coarse} -> {fine}", ch.label());
    }
}
