//! Error-propagation phase sensitivity of the three detection schemes.
//!
//! Every scheme can also be written as
//! `Δφ = √(A + B cos²φ + C sin 2φ + D cos φ + E sin φ) / |F cos φ + G sin φ|`,
//! which is what the working-point optimizer consumes.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mzi_core::{a_coefficients, k_coefficients, BsAngles, Convention, PhaseConfig};
use crate::states::{field_moments, schwinger_moments, FieldMoments, InputState, SchwingerMoments};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// `N_d = n₄ − n₅`.
    DifferenceIntensity,
    /// `n₄` alone.
    SingleModeIntensity,
    /// Quadrature of `a₄` against a local oscillator of phase `φ_L`.
    BalancedHomodyne,
}

impl Scheme {
    pub const ALL: [Scheme; 3] =
        [Scheme::DifferenceIntensity, Scheme::SingleModeIntensity, Scheme::BalancedHomodyne];
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensitivityBreakdown {
    /// Variance of the detected observable.
    pub variance: f64,
    /// Slope of its mean with respect to `φ`.
    pub derivative: f64,
    pub delta_phi: f64,
}

/// Slopes this far below their amplitude are rounding noise, including the
/// removable 0/0 points where variance and slope vanish together.
const SLOPE_FLOOR: f64 = 1e-13;

impl SensitivityBreakdown {
    /// `amplitude` bounds `|derivative|` over `φ` and sets the zero threshold.
    fn new(variance: f64, derivative: f64, amplitude: f64) -> Result<Self> {
        if !(derivative.abs() > SLOPE_FLOOR * amplitude) || !(derivative.abs() >= 1e-30 * variance.max(0.0).sqrt().max(1.0)) {
            return Err(Error::ZeroDerivative);
        }
        Ok(Self { variance, derivative, delta_phi: variance.max(0.0).sqrt() / derivative.abs() })
    }
}

/// The seven coefficients `A … G` of the common sensitivity form.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SensitivityCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
    pub g: f64,
}

impl SensitivityCoefficients {
    /// Variance part evaluated at `phi`.
    pub fn radicand(&self, phi: f64) -> f64 {
        let (s, c) = phi.sin_cos();
        self.a + self.b * c * c + self.c * 2.0 * s * c + self.d * c + self.e * s
    }

    /// Signal slope evaluated at `phi`.
    pub fn slope(&self, phi: f64) -> f64 {
        let (s, c) = phi.sin_cos();
        self.f * c + self.g * s
    }

    pub(crate) fn max_abs(&self) -> f64 {
        [self.a, self.b, self.c, self.d, self.e, self.f, self.g].iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// Both moment sets of an input state, computed once.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateMoments {
    pub schwinger: SchwingerMoments,
    pub field: FieldMoments,
}

impl StateMoments {
    pub fn of(state: &InputState) -> Self {
        Self { schwinger: schwinger_moments(state), field: field_moments(state) }
    }
}

/// `∂⟨n₄⟩/∂φ`; the difference signal is twice this.
fn intensity_slope(m: &SchwingerMoments, angles: BsAngles, phi: f64) -> f64 {
    let (st, ct) = angles.theta.sin_cos();
    let (sf, cf) = phi.sin_cos();
    (m.mean_jx * cf + (ct * m.mean_jy + st * m.mean_jz) * sf) * angles.theta_prime.sin()
}

fn slope_amplitude(m: &SchwingerMoments) -> f64 {
    (m.mean_jx * m.mean_jx + m.mean_jy * m.mean_jy + m.mean_jz * m.mean_jz).sqrt()
}

/// `Kᵀ Σ K` with `Σ` the J covariance matrix.
fn j_quadratic(m: &SchwingerMoments, k: [f64; 3]) -> f64 {
    let cov = m.j_covariance();
    let mut acc = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            acc += k[i] * cov[i][j] * k[j];
        }
    }
    acc
}

pub fn sensitivity_difference(m: &SchwingerMoments, angles: BsAngles, phi: f64) -> Result<SensitivityBreakdown> {
    let k = k_coefficients(angles, phi);
    let variance = 4.0 * j_quadratic(m, [k.kx, k.ky, k.kz]);
    SensitivityBreakdown::new(variance, 2.0 * intensity_slope(m, angles, phi), 2.0 * slope_amplitude(m))
}

pub fn sensitivity_single(m: &SchwingerMoments, angles: BsAngles, phi: f64) -> Result<SensitivityBreakdown> {
    let k = k_coefficients(angles, phi);
    let variance = 0.25 * m.var_n
        + j_quadratic(m, [k.kx, k.ky, k.kz])
        + k.kx * m.cov_jx_n
        + k.ky * m.cov_jy_n
        + k.kz * m.cov_jz_n;
    SensitivityBreakdown::new(variance, intensity_slope(m, angles, phi), slope_amplitude(m))
}

/// `⟨n₄⟩ = ½⟨N⟩ + K·⟨J⟩`.
pub fn mean_n4(m: &SchwingerMoments, angles: BsAngles, phi: f64) -> f64 {
    let k = k_coefficients(angles, phi);
    0.5 * m.mean_n + k.kx * m.mean_jx + k.ky * m.mean_jy + k.kz * m.mean_jz
}

/// Fraction of the input photons leaving through port 4.
pub fn extinction_rate(m: &SchwingerMoments, angles: BsAngles, phi: f64) -> Result<f64> {
    if m.mean_n <= 0.0 {
        return Err(Error::EmptyInput);
    }
    Ok(mean_n4(m, angles, phi) / m.mean_n)
}

pub fn sensitivity_homodyne(fm: &FieldMoments, angles: BsAngles, phases: &PhaseConfig) -> Result<SensitivityBreakdown> {
    if phases.convention != Convention::ExternalReference {
        return Err(Error::WrongConvention);
    }
    let a = a_coefficients(angles, 0.0, phases.phi);
    let lo2 = Complex64::from_polar(1.0, -2.0 * phases.phi_local);
    let cov_n4 = a.a40.norm_sqr() * fm.cov_n0
        + a.a41.norm_sqr() * fm.cov_n1
        + 2.0 * (a.a40 * a.a41.conj() * fm.cov_a0_a1dag).re;
    let var_a4 = a.a40 * a.a40 * fm.var_a0 + a.a41 * a.a41 * fm.var_a1 + 2.0 * a.a40 * a.a41 * fm.cov_a0_a1;
    let variance = 0.25 + 0.5 * (cov_n4 + (lo2 * var_a4).re);

    let (s, c) = (0.5 * angles.theta).sin_cos();
    let rot = Complex64::from_polar(1.0, -(phases.phi_local + phases.phi));
    let i = Complex64::new(0.0, 1.0);
    let derivative = (s * (i * rot * fm.mean_a0).re + c * (rot * fm.mean_a1).re) * (0.5 * angles.theta_prime).sin();
    SensitivityBreakdown::new(variance, derivative, fm.mean_a0.norm() + fm.mean_a1.norm())
}

/// Dispatches to the scheme formula; homodyne requires the external-reference convention.
pub fn sensitivity(
    scheme: Scheme,
    moments: &StateMoments,
    angles: BsAngles,
    phases: &PhaseConfig,
) -> Result<SensitivityBreakdown> {
    match scheme {
        Scheme::DifferenceIntensity => sensitivity_difference(&moments.schwinger, angles, phases.phi),
        Scheme::SingleModeIntensity => sensitivity_single(&moments.schwinger, angles, phases.phi),
        Scheme::BalancedHomodyne => sensitivity_homodyne(&moments.field, angles, phases),
    }
}

fn intensity_coefficients(m: &SchwingerMoments, angles: BsAngles, single: bool) -> SensitivityCoefficients {
    let (st, ct) = angles.theta.sin_cos();
    let (s2t, c2t) = (2.0 * angles.theta).sin_cos();
    let (sp, cp) = angles.theta_prime.sin_cos();
    let s2p = (2.0 * angles.theta_prime).sin();
    let (sp2, cp2) = (sp * sp, cp * cp);
    let (vx, vy, vz) = (m.var_jx, m.var_jy, m.var_jz);
    let (sxy, sxz, syz) = (m.symcov_xy, m.symcov_xz, m.symcov_yz);

    let mut c = SensitivityCoefficients {
        a: sp2 * vx + st * st * cp2 * vy + ct * ct * cp2 * vz - s2t * cp2 * syz,
        b: -sp2 * vx + ct * ct * sp2 * vy + st * st * sp2 * vz + s2t * sp2 * syz,
        c: -(ct * sxy + st * sxz) * sp2,
        d: (0.5 * s2t * (vy - vz) - c2t * syz) * s2p,
        e: (-st * sxy + ct * sxz) * s2p,
        f: m.mean_jx * sp,
        g: (ct * m.mean_jy + st * m.mean_jz) * sp,
    };
    if single {
        c.a += 0.25 * m.var_n - st * cp * m.cov_jy_n + ct * cp * m.cov_jz_n;
        c.d += -ct * sp * m.cov_jy_n - st * sp * m.cov_jz_n;
        c.e += sp * m.cov_jx_n;
    }
    c
}

fn homodyne_coefficients(fm: &FieldMoments, angles: BsAngles, phi_local: f64) -> SensitivityCoefficients {
    let (st, ct) = angles.theta.sin_cos();
    let (sp, cp) = angles.theta_prime.sin_cos();
    let (s, c) = (0.5 * angles.theta).sin_cos();
    let (sh, ch) = (0.5 * angles.theta_prime).sin_cos();
    let i = Complex64::new(0.0, 1.0);
    let lo2 = Complex64::from_polar(1.0, -2.0 * phi_local);
    let (v0, v1, x01, y) = (fm.var_a0, fm.var_a1, fm.cov_a0_a1, fm.cov_a0_a1dag);
    let (c0, c1) = (fm.cov_n0, fm.cov_n1);

    // Δ²a₄ = w0 + w1 e^{−iφ} + w2 e^{−2iφ}
    let w0 = ch * ch * (c * c * v0 - s * s * v1 + i * st * x01);
    let w1 = sp * (-0.5 * st * (v0 + v1) + i * ct * x01);
    let w2 = sh * sh * (s * s * v0 - c * c * v1 - i * st * x01);
    let (lw0, lw1, lw2) = (lo2 * w0, lo2 * w1, lo2 * w2);

    let base = 0.25 + 0.25 * (c0 + c1) + 0.25 * ct * cp * (c0 - c1) + 0.5 * st * cp * y.im + 0.5 * lw0.re;
    let mean = (-phi_local).sin_cos();
    let rot = Complex64::new(mean.1, mean.0) * (i * s * fm.mean_a0 + c * fm.mean_a1);
    SensitivityCoefficients {
        a: base - 0.5 * lw2.re,
        b: lw2.re,
        c: 0.5 * lw2.im,
        d: -0.25 * st * sp * (c0 - c1) + 0.5 * ct * sp * y.im + 0.5 * lw1.re,
        e: 0.5 * sp * y.re + 0.5 * lw1.im,
        f: sh * rot.re,
        g: sh * rot.im,
    }
}

/// `A … G` for `scheme` at fixed beam splitters. `phi_local` is ignored by the
/// intensity schemes.
pub fn generic_coefficients(
    scheme: Scheme,
    moments: &StateMoments,
    angles: BsAngles,
    phi_local: f64,
) -> SensitivityCoefficients {
    match scheme {
        Scheme::DifferenceIntensity => intensity_coefficients(&moments.schwinger, angles, false),
        Scheme::SingleModeIntensity => intensity_coefficients(&moments.schwinger, angles, true),
        Scheme::BalancedHomodyne => homodyne_coefficients(&moments.field, angles, phi_local),
    }
}

pub fn sensitivity_from_coefficients(c: &SensitivityCoefficients, phi: f64) -> Result<f64> {
    let slope = c.slope(phi);
    let radicand = c.radicand(phi);
    let amplitude = c.f.hypot(c.g);
    if !(slope.abs() > SLOPE_FLOOR * amplitude) || !(slope.abs() >= 1e-30 * radicand.max(0.0).sqrt().max(1.0)) {
        return Err(Error::ZeroDerivative);
    }
    Ok(radicand.max(0.0).sqrt() / slope.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{apply_pmc, PmcId};
    use proptest::prelude::*;
    use std::f64::consts::{PI, TAU};

    fn coh_sqz(alpha: f64, r: f64) -> InputState {
        apply_pmc(&InputState::coherent_squeezed_vacuum(alpha, 0.0, r, 0.0), PmcId::CohSqzVac).unwrap()
    }

    #[test]
    fn vacuum_has_no_signal() {
        let m = StateMoments::of(&InputState::coherent_squeezed_vacuum(0.0, 0.0, 0.0, 0.0));
        let angles = BsAngles::balanced();
        assert_eq!(sensitivity_difference(&m.schwinger, angles, 1.0), Err(Error::ZeroDerivative));
        assert_eq!(extinction_rate(&m.schwinger, angles, 1.0), Err(Error::EmptyInput));
    }

    #[test]
    fn closed_second_splitter_kills_signal() {
        let m = schwinger_moments(&coh_sqz(2.0, 0.5));
        let angles = BsAngles::new(PI / 2.0, 0.0).unwrap();
        assert_eq!(sensitivity_single(&m, angles, 2.0), Err(Error::ZeroDerivative));
    }

    #[test]
    fn homodyne_rejects_missing_reference() {
        let fm = field_moments(&coh_sqz(2.0, 0.5));
        let r = sensitivity_homodyne(&fm, BsAngles::balanced(), &PhaseConfig::no_reference(PI));
        assert_eq!(r, Err(Error::WrongConvention));
    }

    #[test]
    fn homodyne_shot_noise_without_squeezing() {
        // Balanced MZI, coherent drive: Δφ = 1/|α| at the optimal point.
        for alpha in [3.0, 30.0, 300.0] {
            let fm = field_moments(&InputState::coherent_squeezed_vacuum(alpha, 0.4, 0.0, 0.0));
            let s = sensitivity_homodyne(&fm, BsAngles::balanced(), &PhaseConfig::external(PI, 0.4)).unwrap();
            assert!((s.delta_phi * alpha - 1.0).abs() < 1e-12, "{}", s.delta_phi * alpha);
        }
    }

    #[test]
    fn extinction_dark_fringe_for_coherent_light() {
        let m = schwinger_moments(&InputState::coherent_squeezed_vacuum(3.0, 0.0, 0.0, 0.0));
        let angles = BsAngles::balanced();
        // Port 1 light exits at port 4 for φ = 0 (swap) and goes dark at φ = π.
        assert!((extinction_rate(&m, angles, 0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(extinction_rate(&m, angles, PI).unwrap().abs() < 1e-15);
    }

    #[test]
    fn balanced_difference_coefficients_simplify() {
        let m = StateMoments::of(&coh_sqz(100.0, 1.2));
        let c = generic_coefficients(Scheme::DifferenceIntensity, &m, BsAngles::balanced(), 0.0);
        let s = &m.schwinger;
        let tol = 1e-9 * s.var_jz.abs();
        assert!(c.c.abs() < tol && c.d.abs() < tol && c.e.abs() < tol && c.f.abs() < tol);
        assert!((c.a - s.var_jx).abs() < tol);
        assert!((c.b - (s.var_jz - s.var_jx)).abs() < tol);
        assert!((c.g - s.mean_jz).abs() < 1e-9 * s.mean_jz.abs());
    }

    #[test]
    fn balanced_single_coefficients_simplify() {
        let m = StateMoments::of(&coh_sqz(100.0, 1.2));
        let c = generic_coefficients(Scheme::SingleModeIntensity, &m, BsAngles::balanced(), 0.0);
        let s = &m.schwinger;
        assert!((c.a - (s.var_jx + 0.25 * s.var_n)).abs() < 1e-9 * c.a.abs());
        assert!((c.d + s.cov_jz_n).abs() < 1e-9 * s.cov_jz_n.abs());
    }

    #[test]
    fn matched_homodyne_has_even_coefficients_only() {
        let st = coh_sqz(100.0, 1.2);
        let m = StateMoments::of(&st);
        let angles = BsAngles::from_transmittances(0.55, 0.45).unwrap();
        let c = generic_coefficients(Scheme::BalancedHomodyne, &m, angles, 0.0);
        let scale = c.max_abs();
        assert!(c.c.abs() < 1e-14 * scale && c.e.abs() < 1e-14 * scale && c.g.abs() < 1e-14 * scale);
    }

    #[test]
    fn trivial_coefficients() {
        let c = SensitivityCoefficients { a: 1.0, g: 1.0, ..Default::default() };
        assert!((sensitivity_from_coefficients(&c, PI / 2.0).unwrap() - 1.0).abs() < 1e-15);
        let zero = SensitivityCoefficients { a: 1.0, ..Default::default() };
        assert_eq!(sensitivity_from_coefficients(&zero, 0.3), Err(Error::ZeroDerivative));
    }

    fn random_state() -> impl Strategy<Value = InputState> {
        (0.0..3.0f64, -4.0..4.0f64, 0.0..2.0f64, -4.0..4.0f64, 0.0..1.0f64, -4.0..4.0f64, 0.0..1.0f64, -4.0..4.0f64)
            .prop_map(|(a, ta, b, tb, r, th, z, ph)| {
                InputState::new(
                    crate::states::ModeSpec::SqueezedCoherent { amplitude: b, phase: tb, squeeze: r, squeeze_phase: th },
                    crate::states::ModeSpec::SqueezedCoherent { amplitude: a, phase: ta, squeeze: z, squeeze_phase: ph },
                )
                .unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn coefficient_form_matches_direct(st in random_state(), t in 0.05..3.09f64, tp in 0.05..3.09f64,
                                           phi in 0.0..TAU, lo in -3.0..3.0f64) {
            let m = StateMoments::of(&st);
            let angles = BsAngles::new(t, tp).unwrap();
            for scheme in Scheme::ALL {
                let phases = PhaseConfig::external(phi, lo);
                let direct = match sensitivity(scheme, &m, angles, &phases) {
                    Ok(s) => s,
                    Err(_) => continue,
                };
                let c = generic_coefficients(scheme, &m, angles, lo);
                let via = sensitivity_from_coefficients(&c, phi).unwrap();
                prop_assert!((via / direct.delta_phi - 1.0).abs() < 1e-10, "{:?}: {} vs {}", scheme, via, direct.delta_phi);
            }
        }

        #[test]
        fn coefficient_form_with_cross_covariances(t in 0.05..3.09f64, tp in 0.05..3.09f64, phi in 0.0..TAU,
                                                   lo in -3.0..3.0f64, re in -0.5..0.5f64, im in -0.5..0.5f64) {
            // The homodyne identity is algebraic, so it must also hold with correlated ports.
            let mut fm = field_moments(&InputState::coherent_squeezed_vacuum(1.5, 0.3, 0.6, 1.0));
            fm.cov_a0_a1 = Complex64::new(re, im);
            fm.cov_a0_a1dag = Complex64::new(im, -re);
            let angles = BsAngles::new(t, tp).unwrap();
            let m = StateMoments { schwinger: SchwingerMoments::default(), field: fm };
            // Arbitrary covariances need not be physical, so compare the pieces rather than Δφ.
            if let Ok(direct) = sensitivity_homodyne(&fm, angles, &PhaseConfig::external(phi, lo)) {
                let c = generic_coefficients(Scheme::BalancedHomodyne, &m, angles, lo);
                prop_assert!((c.radicand(phi) - direct.variance).abs() < 1e-12 * (1.0 + direct.variance.abs()));
                prop_assert!((c.slope(phi).abs() - direct.derivative.abs()).abs() < 1e-12 * (1.0 + direct.derivative.abs()));
            }
        }

        #[test]
        fn intensity_schemes_are_2pi_periodic(st in random_state(), phi in 0.0..TAU) {
            let m = schwinger_moments(&st);
            let angles = BsAngles::new(1.0, 2.0).unwrap();
            if let (Ok(a), Ok(b)) = (sensitivity_single(&m, angles, phi), sensitivity_single(&m, angles, phi + 2.0 * PI)) {
                prop_assert!((a.delta_phi / b.delta_phi - 1.0).abs() < 1e-12);
            }
            if let (Ok(a), Ok(b)) = (sensitivity_difference(&m, angles, phi), sensitivity_difference(&m, angles, phi + 2.0 * PI)) {
                prop_assert!((a.delta_phi / b.delta_phi - 1.0).abs() < 1e-12);
            }
        }

        #[test]
        fn variances_are_nonnegative(st in random_state(), t in 0.0..PI, tp in 0.0..PI, phi in 0.0..TAU) {
            let m = StateMoments::of(&st);
            let s = &m.schwinger;
            prop_assert!(s.var_jx >= 0.0 && s.var_jy >= 0.0 && s.var_jz >= 0.0 && s.var_n >= 0.0);
            let angles = BsAngles::new(t, tp).unwrap();
            for scheme in Scheme::ALL {
                let c = generic_coefficients(scheme, &m, angles, 0.2);
                prop_assert!(c.radicand(phi) >= -1e-9 * c.max_abs());
            }
        }
    }
}
