//! Closed-form Schwinger moments for the analytic families.
//!
//! These are kept separate from the ladder-operator engine so each can check
//! the other. Gaussian families are specializations of the dual
//! squeezed-coherent expressions (`β = 0` drops the port-0 displacement,
//! `z = 0` the port-1 squeezing).

use super::{InputState, ModeSpec, SchwingerMoments};

/// Parameters of `|(α ζ)⟩₁ ⊗ |(β ξ)⟩₀` with `ζ = z e^{iφ}` and `ξ = r e^{iθ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualSqueezedCoherent {
    pub alpha: f64,
    pub theta_alpha: f64,
    pub beta: f64,
    pub theta_beta: f64,
    pub r: f64,
    pub theta: f64,
    pub z: f64,
    pub phi: f64,
}

impl DualSqueezedCoherent {
    /// Read the parameters off any Gaussian product state; `None` for Fock inputs.
    pub fn from_state(state: &InputState) -> Option<Self> {
        let (p0, p1) = (state.port0(), state.port1());
        if matches!(p0, ModeSpec::Fock { .. }) || matches!(p1, ModeSpec::Fock { .. }) {
            return None;
        }
        Some(Self {
            alpha: p1.amplitude_mag(),
            theta_alpha: p1.amplitude_phase(),
            beta: p0.amplitude_mag(),
            theta_beta: p0.amplitude_phase(),
            r: p0.squeeze_mag(),
            theta: p0.squeeze_phase(),
            z: p1.squeeze_mag(),
            phi: p1.squeeze_phase(),
        })
    }

    pub fn moments(&self) -> SchwingerMoments {
        let Self { alpha, theta_alpha: ta, beta, theta_beta: tb, r, theta: th, z, phi: ph } = *self;
        let (a2, b2, ab) = (alpha * alpha, beta * beta, alpha * beta);
        let (s2r, c2r, s2z, c2z) = ((2.0 * r).sinh(), (2.0 * r).cosh(), (2.0 * z).sinh(), (2.0 * z).cosh());
        let (shr2, shz2) = (r.sinh().powi(2), z.sinh().powi(2));

        // Photon-number variances of each port.
        let var_n0 = 0.5 * s2r * s2r + b2 * (c2r - s2r * (2.0 * tb - th).cos());
        let var_n1 = 0.5 * s2z * s2z + a2 * (c2z - s2z * (2.0 * ta - ph).cos());

        let var_jx = 0.25
            * (b2 * (c2z - s2z * (2.0 * tb - ph).cos())
                + a2 * (c2r - s2r * (2.0 * ta - th).cos())
                + 0.5 * (c2r * c2z + s2r * s2z * (th - ph).cos() - 1.0));
        let var_jy = 0.25
            * (b2 * (c2z + s2z * (2.0 * tb - ph).cos())
                + a2 * (c2r + s2r * (2.0 * ta - th).cos())
                + 0.5 * (c2r * c2z - s2r * s2z * (th - ph).cos() - 1.0));
        let var_jz = 0.25 * (var_n0 + var_n1);

        let symcov_xy = -s2r * s2z * (th - ph).sin() / 8.0 - 0.25 * a2 * s2r * (2.0 * ta - th).sin()
            + 0.25 * b2 * s2z * (2.0 * tb - ph).sin();
        let symcov_xz = 0.5 * ab * (shr2 - shz2) * (ta - tb).cos()
            - 0.25 * ab * (s2r * (ta + tb - th).cos() - s2z * (ta + tb - ph).cos());
        let symcov_yz = 0.5 * ab * (shr2 - shz2) * (ta - tb).sin()
            - 0.25 * ab * (s2r * (ta + tb - th).sin() + s2z * (ta + tb - ph).sin());

        let cov_jx_n = ab * (shr2 + shz2 + 1.0) * (ta - tb).cos()
            - 0.5 * ab * (s2r * (ta + tb - th).cos() + s2z * (ta + tb - ph).cos());
        let cov_jy_n = ab * (shr2 + shz2 + 1.0) * (ta - tb).sin()
            - 0.5 * ab * (s2r * (ta + tb - th).sin() - s2z * (ta + tb - ph).sin());

        let (n0, n1) = (b2 + shr2, a2 + shz2);
        SchwingerMoments {
            mean_jx: ab * (ta - tb).cos(),
            mean_jy: ab * (ta - tb).sin(),
            mean_jz: 0.5 * (n0 - n1),
            mean_n: n0 + n1,
            var_jx,
            var_jy,
            var_jz,
            var_n: var_n0 + var_n1,
            symcov_xy,
            symcov_xz,
            symcov_yz,
            cov_jx_n,
            cov_jy_n,
            cov_jz_n: 0.5 * (var_n0 - var_n1),
        }
    }
}

/// Moments of `|α⟩₁ ⊗ |n⟩₀`.
pub fn coherent_fock(alpha: f64, n: u32) -> SchwingerMoments {
    let (a2, n) = (alpha * alpha, n as f64);
    let transverse = 0.25 * (2.0 * n * a2 + n + a2);
    SchwingerMoments {
        mean_jx: 0.0,
        mean_jy: 0.0,
        mean_jz: 0.5 * (n - a2),
        mean_n: n + a2,
        var_jx: transverse,
        var_jy: transverse,
        var_jz: 0.25 * a2,
        var_n: a2,
        symcov_xy: 0.0,
        symcov_xz: 0.0,
        symcov_yz: 0.0,
        cov_jx_n: 0.0,
        cov_jy_n: 0.0,
        cov_jz_n: -0.5 * a2,
    }
}

/// Closed-form moments when one exists for the family of `state`.
pub fn schwinger_moments(state: &InputState) -> Option<SchwingerMoments> {
    if let Some(d) = DualSqueezedCoherent::from_state(state) {
        return Some(d.moments());
    }
    match (state.port0(), state.port1()) {
        (ModeSpec::Fock { n }, ModeSpec::Coherent { amplitude, .. }) => Some(coherent_fock(*amplitude, *n)),
        (ModeSpec::Fock { n }, ModeSpec::Vacuum) => Some(coherent_fock(0.0, *n)),
        _ => None,
    }
}
