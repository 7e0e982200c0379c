//! Interferometer transfer algebra.
//!
//! A beam splitter with angle `ϑ` has `T = cos(ϑ/2)` and `R = i sin(ϑ/2)`; the
//! internal modes are `a₂ = T a₀ + R a₁` (phase `φ₁`) and `a₃ = R a₀ + T a₁`
//! (phase `φ₂`), and the second beam splitter maps them to the outputs `a₄, a₅`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::states::SchwingerMoments;

/// Beam-splitter angles, both in `[0, π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BsAngles {
    pub theta: f64,
    pub theta_prime: f64,
}

impl BsAngles {
    pub fn new(theta: f64, theta_prime: f64) -> Result<Self> {
        for a in [theta, theta_prime] {
            if !(0.0..=PI).contains(&a) {
                return Err(Error::InvalidAngle(a));
            }
        }
        Ok(Self { theta, theta_prime })
    }

    pub fn balanced() -> Self {
        Self { theta: PI / 2.0, theta_prime: PI / 2.0 }
    }

    /// From intensity transmittances `τ = T²`, `τ′ = T′²`.
    pub fn from_transmittances(tau: f64, tau_prime: f64) -> Result<Self> {
        Ok(Self { theta: tau_to_theta(tau)?, theta_prime: tau_to_theta(tau_prime)? })
    }

    pub fn tau(&self) -> f64 {
        theta_to_tau(self.theta)
    }

    pub fn tau_prime(&self) -> f64 {
        theta_to_tau(self.theta_prime)
    }
}

/// `τ = cos²(ϑ/2)`.
pub fn theta_to_tau(theta: f64) -> f64 {
    (0.5 * theta).cos().powi(2)
}

/// `ϑ = 2 arccos √τ`.
pub fn tau_to_theta(tau: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(Error::InvalidTransmittance(tau));
    }
    Ok(2.0 * tau.sqrt().acos())
}

/// How the two internal phase shifts are referenced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Convention {
    /// Only `φ = φ₂ − φ₁` is meaningful.
    NoExternalReference,
    /// `φ₁ = 0`, `φ₂ = φ`.
    ExternalReference,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseConfig {
    pub convention: Convention,
    pub phi: f64,
    /// Local-oscillator phase, only read by homodyne detection.
    pub phi_local: f64,
}

impl PhaseConfig {
    pub fn external(phi: f64, phi_local: f64) -> Self {
        Self { convention: Convention::ExternalReference, phi, phi_local }
    }

    pub fn no_reference(phi: f64) -> Self {
        Self { convention: Convention::NoExternalReference, phi, phi_local: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KCoefficients {
    pub kx: f64,
    pub ky: f64,
    pub kz: f64,
}

/// Output field amplitudes: `a₄ = a40 a₀ + a41 a₁`, `a₅ = a50 a₀ + a51 a₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ACoefficients {
    pub a40: Complex64,
    pub a41: Complex64,
    pub a50: Complex64,
    pub a51: Complex64,
}

pub fn a_coefficients(angles: BsAngles, phi1: f64, phi2: f64) -> ACoefficients {
    let t = Complex64::new((0.5 * angles.theta).cos(), 0.0);
    let r = Complex64::new(0.0, (0.5 * angles.theta).sin());
    let tp = Complex64::new((0.5 * angles.theta_prime).cos(), 0.0);
    let rp = Complex64::new(0.0, (0.5 * angles.theta_prime).sin());
    let (e1, e2) = (Complex64::from_polar(1.0, -phi1), Complex64::from_polar(1.0, -phi2));
    ACoefficients {
        a40: t * tp * e1 + r * rp * e2,
        a41: r * tp * e1 + t * rp * e2,
        a50: t * rp * e1 + r * tp * e2,
        a51: r * rp * e1 + t * tp * e2,
    }
}

pub fn k_coefficients(angles: BsAngles, phi: f64) -> KCoefficients {
    let (st, ct) = angles.theta.sin_cos();
    let (sp, cp) = angles.theta_prime.sin_cos();
    let (sf, cf) = phi.sin_cos();
    KCoefficients { kx: sp * sf, ky: -(st * cp + ct * sp * cf), kz: ct * cp - st * sp * cf }
}

/// Moments of the Schwinger triple after the first beam splitter.
///
/// The rotation is about the x axis: `Jy′ = cos ϑ Jy + sin ϑ Jz` and
/// `Jz′ = cos ϑ Jz − sin ϑ Jy = (n₂ − n₃)/2`.
pub fn internal_mode_moments(m: &SchwingerMoments, theta: f64) -> SchwingerMoments {
    let (s, c) = theta.sin_cos();
    let (vy, vz, syz) = (m.var_jy, m.var_jz, m.symcov_yz);
    SchwingerMoments {
        mean_jx: m.mean_jx,
        mean_jy: c * m.mean_jy + s * m.mean_jz,
        mean_jz: c * m.mean_jz - s * m.mean_jy,
        mean_n: m.mean_n,
        var_jx: m.var_jx,
        var_jy: c * c * vy + s * s * vz + 2.0 * s * c * syz,
        var_jz: c * c * vz + s * s * vy - 2.0 * s * c * syz,
        var_n: m.var_n,
        symcov_xy: c * m.symcov_xy + s * m.symcov_xz,
        symcov_xz: c * m.symcov_xz - s * m.symcov_xy,
        symcov_yz: (c * c - s * s) * syz + s * c * (vz - vy),
        cov_jx_n: m.cov_jx_n,
        cov_jy_n: c * m.cov_jy_n + s * m.cov_jz_n,
        cov_jz_n: c * m.cov_jz_n - s * m.cov_jy_n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const I: Complex64 = Complex64::new(0.0, 1.0);

    fn c_close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-14
    }

    #[test]
    fn two_balanced_splitters_swap_ports() {
        let a = a_coefficients(BsAngles::balanced(), 0.0, 0.0);
        assert!(c_close(a.a40, Complex64::new(0.0, 0.0)));
        assert!(c_close(a.a41, I));
        assert!(c_close(a.a50, I));
        assert!(c_close(a.a51, Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn closed_splitters_are_identity() {
        let a = a_coefficients(BsAngles::new(0.0, 0.0).unwrap(), 0.0, 0.0);
        assert!(c_close(a.a40, Complex64::new(1.0, 0.0)) && c_close(a.a51, Complex64::new(1.0, 0.0)));
        assert!(c_close(a.a41, Complex64::new(0.0, 0.0)) && c_close(a.a50, Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn quarter_phase_balanced() {
        let angles = BsAngles::balanced();
        let a = a_coefficients(angles, 0.0, PI / 2.0);
        // ½(1 − e^{−iπ/2}) = ½ + ½i
        assert!(c_close(a.a40, Complex64::new(0.5, 0.5)));
        let k = k_coefficients(angles, PI / 2.0);
        assert!((a.a40.norm_sqr() - 0.5 * (1.0 + k.kz)).abs() < 1e-15);
    }

    #[test]
    fn k_examples() {
        let k = k_coefficients(BsAngles::balanced(), PI / 2.0);
        assert!((k.kx - 1.0).abs() < 1e-15 && k.ky.abs() < 1e-15 && k.kz.abs() < 1e-15);
        let theta = 1.1;
        let k = k_coefficients(BsAngles::new(theta, 0.0).unwrap(), 2.3);
        assert_eq!((k.kx, k.ky, k.kz), (0.0, -theta.sin(), theta.cos()));
        let k = k_coefficients(BsAngles::new(PI / 3.0, PI / 4.0).unwrap(), 1.0);
        assert!((k.kx - 0.595_009_8).abs() < 1e-6);
    }

    #[test]
    fn angle_validation() {
        assert!(BsAngles::new(-0.1, 1.0).is_err());
        assert!(BsAngles::new(1.0, 3.2).is_err());
        assert!(tau_to_theta(1.5).is_err());
        let a = BsAngles::from_transmittances(0.55, 0.45).unwrap();
        assert!((a.tau() - 0.55).abs() < 1e-15 && (a.tau_prime() - 0.45).abs() < 1e-15);
    }

    #[test]
    fn rotation_by_pi_negates_y_and_z() {
        let m = SchwingerMoments {
            mean_jx: 0.3,
            mean_jy: 1.0,
            mean_jz: -2.0,
            mean_n: 5.0,
            var_jx: 1.0,
            var_jy: 2.0,
            var_jz: 3.0,
            var_n: 4.0,
            symcov_xy: 0.1,
            symcov_xz: 0.2,
            symcov_yz: 0.3,
            cov_jx_n: 0.4,
            cov_jy_n: 0.5,
            cov_jz_n: 0.6,
        };
        let r = internal_mode_moments(&m, PI);
        assert!((r.mean_jy + 1.0).abs() < 1e-15 && (r.mean_jz - 2.0).abs() < 1e-15);
        assert!((r.var_jy - 2.0).abs() < 1e-14 && (r.var_jz - 3.0).abs() < 1e-14);
        assert!((r.symcov_xy + 0.1).abs() < 1e-15 && (r.symcov_yz - 0.3).abs() < 1e-14);
        assert_eq!(internal_mode_moments(&m, 0.0), m);
    }

    fn angle() -> impl Strategy<Value = f64> {
        0.0..=PI
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]

        #[test]
        fn k_vector_is_unit(t in angle(), tp in angle(), phi in -10.0..10.0f64) {
            let k = k_coefficients(BsAngles::new(t, tp).unwrap(), phi);
            prop_assert!((k.kx * k.kx + k.ky * k.ky + k.kz * k.kz - 1.0).abs() < 1e-12);
        }

        #[test]
        fn a_and_k_relations(t in angle(), tp in angle(), phi in -10.0..10.0f64) {
            let angles = BsAngles::new(t, tp).unwrap();
            let a = a_coefficients(angles, 0.0, phi);
            let k = k_coefficients(angles, phi);
            prop_assert!((a.a40.norm_sqr() - 0.5 * (1.0 + k.kz)).abs() < 1e-12);
            prop_assert!((a.a51.norm_sqr() - 0.5 * (1.0 + k.kz)).abs() < 1e-12);
            prop_assert!((a.a41.norm_sqr() - 0.5 * (1.0 - k.kz)).abs() < 1e-12);
            prop_assert!((a.a50.norm_sqr() - 0.5 * (1.0 - k.kz)).abs() < 1e-12);
            let p = a.a40 * a.a41.conj();
            prop_assert!((p.re - 0.5 * k.kx).abs() < 1e-12);
            prop_assert!((p.im - 0.5 * k.ky).abs() < 1e-12);
        }

        #[test]
        fn transfer_matrix_is_unitary(t in angle(), tp in angle(), p1 in -7.0..7.0f64, p2 in -7.0..7.0f64) {
            let a = a_coefficients(BsAngles::new(t, tp).unwrap(), p1, p2);
            prop_assert!((a.a40.norm_sqr() + a.a50.norm_sqr() - 1.0).abs() < 1e-12);
            prop_assert!((a.a41.norm_sqr() + a.a51.norm_sqr() - 1.0).abs() < 1e-12);
            prop_assert!((a.a40.conj() * a.a41 + a.a50.conj() * a.a51).norm() < 1e-12);
        }

        #[test]
        fn rotation_preserves_n_and_total_variance(t in -7.0..7.0f64, vx in 0.0..5.0f64, vy in 0.0..5.0f64,
                                                   vz in 0.0..5.0f64, syz in -1.0..1.0f64) {
            let m = SchwingerMoments { var_jx: vx, var_jy: vy, var_jz: vz, symcov_yz: syz,
                                       mean_n: 3.0, var_n: 2.0, ..Default::default() };
            let r = internal_mode_moments(&m, t);
            prop_assert_eq!(r.mean_n, m.mean_n);
            prop_assert_eq!(r.var_n, m.var_n);
            prop_assert!((r.var_jx + r.var_jy + r.var_jz - vx - vy - vz).abs() < 1e-12);
        }
    }
}
