use std::f64::consts::PI;

use mzi_opt_core::fock_oracle::{
    build_state, evolve_bs, oracle_field_moments, oracle_qfi_single, oracle_schwinger_moments, oracle_sensitivity,
    OracleConfig,
};
use mzi_opt_core::prelude::*;
use proptest::prelude::*;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

fn desk_mode(allow_fock: bool) -> impl Strategy<Value = ModeSpec> {
    let gaussian = (0.0..1.3f64, 0.0..6.3f64, 0.0..0.5f64, 0.0..6.3f64).prop_map(|(a, p, r, t)| ModeSpec::SqueezedCoherent {
        amplitude: a,
        phase: p,
        squeeze: r,
        squeeze_phase: t,
    });
    if allow_fock {
        prop_oneof![gaussian, (0u32..=3).prop_map(|n| ModeSpec::Fock { n })].boxed()
    } else {
        gaussian.boxed()
    }
}

fn desk_state() -> impl Strategy<Value = InputState> {
    (desk_mode(true), desk_mode(false)).prop_map(|(p0, p1)| InputState::new(p0, p1).unwrap())
}

#[test]
fn beam_splitter_preserves_norm_and_total_number() {
    let st = InputState::new(ModeSpec::Fock { n: 2 }, ModeSpec::Coherent { amplitude: 1.1, phase: 0.3 }).unwrap();
    let psi = build_state(&st, &OracleConfig::default()).unwrap();
    let out = evolve_bs(&psi, 1.234);
    assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    let (a, b) = (oracle_schwinger_moments(&psi), oracle_schwinger_moments(&out));
    assert!((a.mean_n - b.mean_n).abs() < 1e-10);
    assert!((a.var_n - b.var_n).abs() < 1e-10);
}

#[test]
fn balanced_splitter_on_twin_fock_photons() {
    // |1,1⟩ through a 50:50 splitter bunches: no amplitude left on |1,1⟩.
    let st = InputState::new(ModeSpec::Fock { n: 1 }, ModeSpec::Fock { n: 1 }).unwrap();
    let out = evolve_bs(&build_state(&st, &OracleConfig::default()).unwrap(), PI / 2.0);
    assert!(out.amplitude(1, 1).norm() < 1e-12);
    assert!((out.amplitude(2, 0).norm_sqr() - 0.5).abs() < 1e-12);
}

#[test]
fn oversized_state_is_rejected() {
    let st = InputState::coherent_squeezed_vacuum(30.0, 0.0, 1.0, 0.0);
    assert!(matches!(build_state(&st, &OracleConfig::default()), Err(Error::CutoffExceeded { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn moments_match_oracle(st in desk_state()) {
        let psi = build_state(&st, &OracleConfig::default()).unwrap();
        let (a, o) = (schwinger_moments(&st), oracle_schwinger_moments(&psi));
        for (x, y) in [
            (a.mean_jx, o.mean_jx), (a.mean_jy, o.mean_jy), (a.mean_jz, o.mean_jz), (a.mean_n, o.mean_n),
            (a.var_jx, o.var_jx), (a.var_jy, o.var_jy), (a.var_jz, o.var_jz), (a.var_n, o.var_n),
            (a.symcov_xy, o.symcov_xy), (a.symcov_xz, o.symcov_xz), (a.symcov_yz, o.symcov_yz),
            (a.cov_jx_n, o.cov_jx_n), (a.cov_jy_n, o.cov_jy_n), (a.cov_jz_n, o.cov_jz_n),
        ] {
            prop_assert!(close(x, y, 1e-7), "{} vs {}", x, y);
        }
        let (a, o) = (field_moments(&st), oracle_field_moments(&psi));
        for (x, y) in [(a.mean_a0, o.mean_a0), (a.mean_a1, o.mean_a1), (a.var_a0, o.var_a0), (a.var_a1, o.var_a1),
                       (a.cov_a0_a1, o.cov_a0_a1), (a.cov_a0_a1dag, o.cov_a0_a1dag)] {
            prop_assert!(close(x.re, y.re, 1e-7) && close(x.im, y.im, 1e-7), "{} vs {}", x, y);
        }
        prop_assert!(close(a.cov_n0, o.cov_n0, 1e-7) && close(a.cov_n1, o.cov_n1, 1e-7));
    }

    #[test]
    fn single_parameter_qfi_matches_oracle(st in desk_state(), theta in 0.0..PI) {
        let analytic = fisher_matrix(&st, theta).f_i();
        let oracle = oracle_qfi_single(&st, theta, &OracleConfig::default()).unwrap();
        prop_assert!(close(analytic, oracle, 1e-7), "{} vs {}", analytic, oracle);
    }

    #[test]
    fn sensitivities_match_oracle(st in desk_state(), t in 0.2..2.9f64, tp in 0.2..2.9f64,
                                  phi in 0.0..6.3f64, phi_local in 0.0..6.3f64) {
        let angles = BsAngles::new(t, tp).unwrap();
        let phases = PhaseConfig::external(phi, phi_local);
        let moments = StateMoments::of(&st);
        for scheme in Scheme::ALL {
            let Ok(analytic) = sensitivity(scheme, &moments, angles, &phases) else { continue };
            if analytic.derivative.abs() < 1e-3 * analytic.variance.sqrt() {
                continue;
            }
            let oracle = oracle_sensitivity(&st, angles, &phases, scheme, &OracleConfig::default()).unwrap();
            prop_assert!((oracle / analytic.delta_phi - 1.0).abs() < 1e-6, "{:?}: {} vs {}", scheme, analytic.delta_phi, oracle);
        }
    }
}
