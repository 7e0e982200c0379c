use std::f64::consts::{FRAC_PI_2, PI};

use mzi_opt_core::optimize::{blind_minimize, evaluate};
use mzi_opt_core::prelude::*;

fn scan_argmax(f: impl Fn(f64) -> f64, n: usize) -> f64 {
    (0..=n).map(|k| PI * k as f64 / n as f64).max_by(|a, b| f(*a).total_cmp(&f(*b))).unwrap()
}

#[test]
fn bs1_agrees_with_dense_scan() {
    let states = [
        apply_pmc(&InputState::dual_squeezed_coherent(20.0, 4.0, 1.0, 0.5), PmcId::Pmc3).unwrap(),
        apply_pmc(&InputState::dual_squeezed_coherent(2.2, 1.4, 1.2, 0.6), PmcId::Pmc3).unwrap(),
        InputState::coherent_fock(5.0, 0.0, 2),
    ];
    for st in &states {
        let m = schwinger_moments(st);
        for reference in [Reference::None, Reference::External] {
            let kind = reference.qfi_kind();
            let theta = optimize_bs1(st, reference).unwrap();
            let scanned = scan_argmax(|t| kind.value(&FisherMatrix::from_moments(&m, t)), 200_000);
            let f = |t: f64| kind.value(&FisherMatrix::from_moments(&m, t));
            assert!(f(theta) >= f(scanned) * (1.0 - 1e-12), "{} vs {}", f(theta), f(scanned));
        }
    }
}

#[test]
fn difference_bs2_closed_form_is_the_scan_minimum() {
    let st = apply_pmc(&InputState::dual_squeezed_coherent(2.2, 1.4, 1.2, 0.6), PmcId::Pmc1).unwrap();
    let m = schwinger_moments(&st);
    let (theta, phi) = (1.1, 2.0);
    let tp = optimize_bs2_difference(&m, theta, phi).unwrap();
    let f = |t: f64| sensitivity_difference(&m, BsAngles { theta, theta_prime: t }, phi).map(|s| s.delta_phi).unwrap_or(f64::INFINITY);
    let scanned = (0..=100_000).map(|k| PI * k as f64 / 1e5).min_by(|a, b| f(*a).total_cmp(&f(*b))).unwrap();
    assert!(f(tp) <= f(scanned) * (1.0 + 1e-12));
}

#[test]
fn single_mode_quartic_candidates_contain_the_scan_minimum() {
    let st = apply_pmc(&InputState::dual_squeezed_coherent(30.0, 3.0, 0.9, 0.4), PmcId::Pmc2).unwrap();
    let m = schwinger_moments(&st);
    let (theta, phi) = (1.3, 2.9);
    let sol = optimize_bs2_single(&m, theta, phi).unwrap();
    let f = |t: f64| sensitivity_single(&m, BsAngles { theta, theta_prime: t }, phi).map(|s| s.delta_phi).unwrap_or(f64::INFINITY);
    let scanned = (0..=100_000).map(|k| PI * k as f64 / 1e5).min_by(|a, b| f(*a).total_cmp(&f(*b))).unwrap();
    assert!(f(sol.chosen) <= f(scanned) * (1.0 + 1e-12), "{} vs {}", f(sol.chosen), f(scanned));
}

#[test]
fn joint_optimum_matches_blind_search() {
    let st = apply_pmc(&InputState::dual_squeezed_coherent(12.0, 2.0, 0.8, 0.5), PmcId::Pmc3).unwrap();
    for (scheme, reference) in [
        (Scheme::DifferenceIntensity, Reference::None),
        (Scheme::SingleModeIntensity, Reference::None),
        (Scheme::BalancedHomodyne, Reference::External),
    ] {
        let rep = joint_optimize(&st, scheme, reference).unwrap();
        let (_, _, blind) = blind_minimize(&st, scheme, rep.theta_opt, rep.phi_local_opt).unwrap();
        assert!((rep.delta_phi_opt / blind - 1.0).abs() < 1e-9, "{scheme:?}: {} vs {blind}", rep.delta_phi_opt);
        assert!(rep.hessian_verified, "{scheme:?}");
    }
}

#[test]
fn fixed_angles_are_respected() {
    let st = apply_pmc(&InputState::coherent_squeezed_vacuum(50.0, 0.0, 0.8, 0.0), PmcId::CohSqzVac).unwrap();
    let opts = JointOptions { theta: Some(FRAC_PI_2), theta_prime: Some(1.0), ..Default::default() };
    let rep = joint_optimize_with(&st, Scheme::SingleModeIntensity, Reference::None, opts).unwrap();
    assert_eq!(rep.theta_opt, FRAC_PI_2);
    assert_eq!(rep.theta_prime_opt, 1.0);
    let opts = JointOptions { phi: Some(PI), ..Default::default() };
    let rep = joint_optimize_with(&st, Scheme::BalancedHomodyne, Reference::External, opts).unwrap();
    assert_eq!(rep.phi_opt, PI);
    let m = StateMoments::of(&st);
    let v = evaluate(&m, Scheme::BalancedHomodyne, rep.angles(), PI, rep.phi_local_opt).unwrap();
    assert!((v / rep.delta_phi_opt - 1.0).abs() < 1e-12);
}

#[test]
fn homodyne_beats_shot_noise_with_squeezing() {
    let alpha = 100.0;
    let st = apply_pmc(&InputState::coherent_squeezed_vacuum(alpha, 0.0, 1.0, 0.0), PmcId::CohSqzVac).unwrap();
    let rep = joint_optimize(&st, Scheme::BalancedHomodyne, Reference::External).unwrap();
    let shot = 1.0 / mean_total_photons(&st).sqrt();
    assert!(rep.delta_phi_opt < shot);
    let bound = qfi_report(fisher_matrix(&st, rep.theta_opt)).unwrap().qcrb_i;
    assert!(rep.delta_phi_opt >= bound * (1.0 - 1e-12));
}
