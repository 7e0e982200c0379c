//! Input-state families and their first and second moments.
//!
//! Port 1 carries the "main" coherent amplitude `α` and squeezing `ζ = z e^{iφ}`,
//! port 0 carries `β`, squeezing `ξ = r e^{iθ}` or a Fock state. A squeezed
//! coherent state is `D(α) S(ξ) |0⟩` with `S(ξ) = exp(½(ξ* a² − ξ a†²))`.

mod algebra;
pub mod closed_form;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub(crate) use algebra::MomentEngine;

/// Which family a [`ModeSpec`] belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModeKind {
    Vacuum,
    Coherent,
    SqueezedVacuum,
    SqueezedCoherent,
    Fock,
}

/// A single-mode pure state. Parameters that do not belong to a family simply
/// do not exist on its variant, so the accessors report them as zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModeSpec {
    Vacuum,
    Coherent {
        amplitude: f64,
        phase: f64,
    },
    SqueezedVacuum {
        squeeze: f64,
        squeeze_phase: f64,
    },
    SqueezedCoherent {
        amplitude: f64,
        phase: f64,
        squeeze: f64,
        squeeze_phase: f64,
    },
    Fock {
        n: u32,
    },
}

impl ModeSpec {
    pub fn kind(&self) -> ModeKind {
        match self {
            ModeSpec::Vacuum => ModeKind::Vacuum,
            ModeSpec::Coherent { .. } => ModeKind::Coherent,
            ModeSpec::SqueezedVacuum { .. } => ModeKind::SqueezedVacuum,
            ModeSpec::SqueezedCoherent { .. } => ModeKind::SqueezedCoherent,
            ModeSpec::Fock { .. } => ModeKind::Fock,
        }
    }

    /// `|α|` (or `|β|`).
    pub fn amplitude_mag(&self) -> f64 {
        match *self {
            ModeSpec::Coherent { amplitude, .. } | ModeSpec::SqueezedCoherent { amplitude, .. } => {
                amplitude
            }
            _ => 0.0,
        }
    }

    pub fn amplitude_phase(&self) -> f64 {
        match *self {
            ModeSpec::Coherent { phase, .. } | ModeSpec::SqueezedCoherent { phase, .. } => phase,
            _ => 0.0,
        }
    }

    /// `r` (or `z`).
    pub fn squeeze_mag(&self) -> f64 {
        match *self {
            ModeSpec::SqueezedVacuum { squeeze, .. } | ModeSpec::SqueezedCoherent { squeeze, .. } => {
                squeeze
            }
            _ => 0.0,
        }
    }

    pub fn squeeze_phase(&self) -> f64 {
        match *self {
            ModeSpec::SqueezedVacuum { squeeze_phase, .. }
            | ModeSpec::SqueezedCoherent { squeeze_phase, .. } => squeeze_phase,
            _ => 0.0,
        }
    }

    pub fn fock_n(&self) -> u32 {
        match *self {
            ModeSpec::Fock { n } => n,
            _ => 0,
        }
    }

    /// Complex field mean `⟨a⟩`.
    pub fn mean_field(&self) -> Complex64 {
        Complex64::from_polar(self.amplitude_mag(), self.amplitude_phase())
    }

    pub fn mean_photons(&self) -> f64 {
        match *self {
            ModeSpec::Fock { n } => n as f64,
            _ => self.amplitude_mag().powi(2) + self.squeeze_mag().sinh().powi(2),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.amplitude_mag(),
            self.amplitude_phase(),
            self.squeeze_mag(),
            self.squeeze_phase(),
        ]
        .iter()
        .all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidMode(format!("non-finite parameter in {self:?}")));
        }
        if self.amplitude_mag() < 0.0 {
            return Err(Error::InvalidMode(format!("negative amplitude in {self:?}")));
        }
        if self.squeeze_mag() < 0.0 {
            return Err(Error::InvalidMode(format!("negative squeezing in {self:?}")));
        }
        Ok(())
    }
}

/// A product state `|ψ₁⟩ ⊗ |ψ₀⟩` on the two input ports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputState {
    port0: ModeSpec,
    port1: ModeSpec,
}

impl InputState {
    pub fn new(port0: ModeSpec, port1: ModeSpec) -> Result<Self> {
        port0.validate()?;
        port1.validate()?;
        Ok(Self { port0, port1 })
    }

    pub fn port0(&self) -> &ModeSpec {
        &self.port0
    }

    pub fn port1(&self) -> &ModeSpec {
        &self.port1
    }

    pub fn port(&self, index: usize) -> &ModeSpec {
        match index {
            0 => &self.port0,
            _ => &self.port1,
        }
    }

    /// `|α e^{iθα}⟩₁ ⊗ |ξ = r e^{iθ}⟩₀`.
    ///
    /// # Panics
    /// On negative or non-finite magnitudes.
    pub fn coherent_squeezed_vacuum(alpha: f64, theta_alpha: f64, r: f64, theta: f64) -> Self {
        Self::new(
            ModeSpec::SqueezedVacuum { squeeze: r, squeeze_phase: theta },
            ModeSpec::Coherent { amplitude: alpha, phase: theta_alpha },
        )
        .expect("invalid coherent/squeezed-vacuum parameters")
    }

    /// `|(α ζ)⟩₁ ⊗ |ξ⟩₀` with `ζ = z e^{iφ}`, `ξ = r e^{iθ}`.
    ///
    /// # Panics
    /// On negative or non-finite magnitudes.
    pub fn squeezed_coherent_squeezed_vacuum(
        alpha: f64,
        theta_alpha: f64,
        z: f64,
        phi: f64,
        r: f64,
        theta: f64,
    ) -> Self {
        Self::new(
            ModeSpec::SqueezedVacuum { squeeze: r, squeeze_phase: theta },
            ModeSpec::SqueezedCoherent { amplitude: alpha, phase: theta_alpha, squeeze: z, squeeze_phase: phi },
        )
        .expect("invalid squeezed-coherent/squeezed-vacuum parameters")
    }

    /// `|(α ζ)⟩₁ ⊗ |(β ξ)⟩₀`. Phases start at zero; use [`apply_pmc`] to set them.
    ///
    /// # Panics
    /// On negative or non-finite magnitudes.
    pub fn dual_squeezed_coherent(alpha: f64, beta: f64, r: f64, z: f64) -> Self {
        Self::new(
            ModeSpec::SqueezedCoherent { amplitude: beta, phase: 0.0, squeeze: r, squeeze_phase: 0.0 },
            ModeSpec::SqueezedCoherent { amplitude: alpha, phase: 0.0, squeeze: z, squeeze_phase: 0.0 },
        )
        .expect("invalid dual squeezed-coherent parameters")
    }

    /// `|α⟩₁ ⊗ |n⟩₀`.
    ///
    /// # Panics
    /// On negative or non-finite amplitude.
    pub fn coherent_fock(alpha: f64, theta_alpha: f64, n: u32) -> Self {
        Self::new(ModeSpec::Fock { n }, ModeSpec::Coherent { amplitude: alpha, phase: theta_alpha })
            .expect("invalid coherent/Fock parameters")
    }

    /// Phase of the port carrying the larger coherent amplitude (port 1 on ties),
    /// or zero when neither port is displaced.
    pub fn dominant_coherent_phase(&self) -> f64 {
        let (a0, a1) = (self.port0.amplitude_mag(), self.port1.amplitude_mag());
        if a0 == 0.0 && a1 == 0.0 {
            0.0
        } else if a0 > a1 {
            self.port0.amplitude_phase()
        } else {
            self.port1.amplitude_phase()
        }
    }
}

/// Input phase-matching conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PmcId {
    /// Coherent ⊗ squeezed vacuum: `2θα − θ = 0`.
    CohSqzVac,
    /// Squeezed coherent ⊗ squeezed vacuum: `2θα − θ = 0`, `2θα − φ = ±π`.
    SqzCohSqzVac,
    /// Dual squeezed coherent: `θα − θβ = 0`, `2θα − θ = 0`, `φ − θ = ±π`.
    Pmc1,
    /// Dual squeezed coherent: `θα − θβ = 0`, `2θα − θ = 0`, `φ = θ`.
    Pmc2,
    /// Dual squeezed coherent: `θα − θβ = π/2`, `2θα − θ = 0`, `φ − θ = ±π`.
    Pmc3,
}

/// Overwrite the phases of `state` so that it satisfies `pmc`, keeping `θα` fixed.
pub fn apply_pmc(state: &InputState, pmc: PmcId) -> Result<InputState> {
    let incompatible = Err(Error::IncompatiblePmc(pmc));
    let (p0, p1) = (state.port0, state.port1);
    let theta_alpha = p1.amplitude_phase();
    let theta = 2.0 * theta_alpha;
    let (port0, port1) = match pmc {
        PmcId::CohSqzVac => {
            if !matches!(p1, ModeSpec::Coherent { .. }) {
                return incompatible;
            }
            match p0 {
                ModeSpec::SqueezedVacuum { squeeze, .. } => {
                    (ModeSpec::SqueezedVacuum { squeeze, squeeze_phase: theta }, p1)
                }
                _ => return incompatible,
            }
        }
        PmcId::SqzCohSqzVac => match (p0, p1) {
            (
                ModeSpec::SqueezedVacuum { squeeze: r, .. },
                ModeSpec::SqueezedCoherent { amplitude, phase, squeeze: z, .. },
            ) => (
                ModeSpec::SqueezedVacuum { squeeze: r, squeeze_phase: theta },
                ModeSpec::SqueezedCoherent { amplitude, phase, squeeze: z, squeeze_phase: theta + PI },
            ),
            _ => return incompatible,
        },
        PmcId::Pmc1 | PmcId::Pmc2 | PmcId::Pmc3 => match (p0, p1) {
            (
                ModeSpec::SqueezedCoherent { amplitude: beta, squeeze: r, .. },
                ModeSpec::SqueezedCoherent { amplitude: alpha, phase, squeeze: z, .. },
            ) => {
                let (theta_beta, phi) = match pmc {
                    PmcId::Pmc1 => (theta_alpha, theta + PI),
                    PmcId::Pmc2 => (theta_alpha, theta),
                    _ => (theta_alpha - PI / 2.0, theta + PI),
                };
                (
                    ModeSpec::SqueezedCoherent { amplitude: beta, phase: theta_beta, squeeze: r, squeeze_phase: theta },
                    ModeSpec::SqueezedCoherent { amplitude: alpha, phase, squeeze: z, squeeze_phase: phi },
                )
            }
            _ => return incompatible,
        },
    };
    InputState::new(port0, port1)
}

/// `N̄ = ⟨n₀⟩ + ⟨n₁⟩`.
pub fn mean_total_photons(state: &InputState) -> f64 {
    state.port0.mean_photons() + state.port1.mean_photons()
}

/// First and second field moments of the two input modes.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FieldMoments {
    pub mean_a0: Complex64,
    pub mean_a1: Complex64,
    /// `Δ²a₀ = ⟨a₀²⟩ − ⟨a₀⟩²`.
    pub var_a0: Complex64,
    pub var_a1: Complex64,
    /// `Cov(a₀†, a₀) = ⟨n₀⟩ − |⟨a₀⟩|²`.
    pub cov_n0: f64,
    pub cov_n1: f64,
    pub cov_a0_a1: Complex64,
    pub cov_a0_a1dag: Complex64,
}

pub fn field_moments(state: &InputState) -> FieldMoments {
    let engine = MomentEngine::new(state);
    let (s0, s1) = (engine.mode(0), engine.mode(1));
    FieldMoments {
        mean_a0: s0.mean(),
        mean_a1: s1.mean(),
        var_a0: s0.central(0, 2),
        var_a1: s1.central(0, 2),
        cov_n0: s0.central(1, 1).re,
        cov_n1: s1.central(1, 1).re,
        cov_a0_a1: Complex64::new(0.0, 0.0),
        cov_a0_a1dag: Complex64::new(0.0, 0.0),
    }
}

/// Means, variances and covariances of `Jx, Jy, Jz, N`.
///
/// `symcov_*` are symmetrized covariances `½⟨{A,B}⟩ − ⟨A⟩⟨B⟩`; `cov_j*_n` are
/// plain covariances (N commutes with every J).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SchwingerMoments {
    pub mean_jx: f64,
    pub mean_jy: f64,
    pub mean_jz: f64,
    pub mean_n: f64,
    pub var_jx: f64,
    pub var_jy: f64,
    pub var_jz: f64,
    pub var_n: f64,
    pub symcov_xy: f64,
    pub symcov_xz: f64,
    pub symcov_yz: f64,
    pub cov_jx_n: f64,
    pub cov_jy_n: f64,
    pub cov_jz_n: f64,
}

impl SchwingerMoments {
    /// 3×3 symmetric covariance matrix of `(Jx, Jy, Jz)`.
    pub fn j_covariance(&self) -> [[f64; 3]; 3] {
        [
            [self.var_jx, self.symcov_xy, self.symcov_xz],
            [self.symcov_xy, self.var_jy, self.symcov_yz],
            [self.symcov_xz, self.symcov_yz, self.var_jz],
        ]
    }

    pub fn j_means(&self) -> [f64; 3] {
        [self.mean_jx, self.mean_jy, self.mean_jz]
    }

    pub fn j_n_covariance(&self) -> [f64; 3] {
        [self.cov_jx_n, self.cov_jy_n, self.cov_jz_n]
    }
}

pub fn schwinger_moments(state: &InputState) -> SchwingerMoments {
    MomentEngine::new(state).schwinger()
}
