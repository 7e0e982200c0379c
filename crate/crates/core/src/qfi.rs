//! Fisher matrix of the internal phase shifts and the derived QFIs and bounds.
//!
//! For pure inputs the Fisher elements of the generators `n₂` and `n₃` reduce
//! to photon-number covariances of the internal modes, so everything here is a
//! function of the rotated Schwinger moments.

use crate::error::{Error, Result};
use crate::mzi_core::{internal_mode_moments, theta_to_tau, tau_to_theta};
use crate::states::{schwinger_moments, InputState, SchwingerMoments};

/// `[[f_ss, f_sd], [f_sd, f_dd]]` for the sum and difference phases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FisherMatrix {
    pub f_ss: f64,
    pub f_sd: f64,
    pub f_dd: f64,
}

impl FisherMatrix {
    /// From input moments and the first beam-splitter angle.
    pub fn from_moments(m: &SchwingerMoments, theta: f64) -> Self {
        let r = internal_mode_moments(m, theta);
        Self { f_ss: m.var_n, f_sd: 2.0 * r.cov_jz_n, f_dd: 4.0 * r.var_jz }
    }

    pub fn f_2p(&self) -> f64 {
        if self.f_ss == 0.0 {
            return self.f_dd;
        }
        self.f_dd - self.f_sd * self.f_sd / self.f_ss
    }

    pub fn f_i(&self) -> f64 {
        self.f_ss + self.f_dd - 2.0 * self.f_sd
    }
}

pub fn fisher_matrix(state: &InputState, theta: f64) -> FisherMatrix {
    FisherMatrix::from_moments(&schwinger_moments(state), theta)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QfiReport {
    pub f_2p: f64,
    pub f_i: f64,
    pub qcrb_2p: f64,
    pub qcrb_i: f64,
    f_dd: f64,
}

impl QfiReport {
    /// QFI of the symmetric `±φ/2` split, equal to `f_dd`.
    pub fn f_ii(&self) -> f64 {
        self.f_dd
    }
}

pub fn qfi_report(fm: FisherMatrix) -> Result<QfiReport> {
    if fm.f_ss == 0.0 && fm.f_sd != 0.0 {
        return Err(Error::DegenerateFisher);
    }
    let f_2p = fm.f_2p().max(0.0);
    let f_i = fm.f_i().max(0.0);
    Ok(QfiReport { f_2p, f_i, qcrb_2p: 1.0 / f_2p.sqrt(), qcrb_i: 1.0 / f_i.sqrt(), f_dd: fm.f_dd })
}

/// Which QFI a curve or optimization refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QfiKind {
    /// Two-parameter QFI, relevant without an external phase reference.
    TwoParam,
    /// Single-parameter QFI with an external reference.
    SingleI,
}

impl QfiKind {
    pub fn value(self, fm: &FisherMatrix) -> f64 {
        match self {
            QfiKind::TwoParam => fm.f_2p(),
            QfiKind::SingleI => fm.f_i(),
        }
    }
}

/// `dF/dθ` of the chosen QFI.
pub fn qfi_derivative(m: &SchwingerMoments, kind: QfiKind, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    let (s2, c2) = (2.0 * theta).sin_cos();
    let fm = FisherMatrix::from_moments(m, theta);
    let d_dd = 4.0 * (s2 * (m.var_jy - m.var_jz) - 2.0 * c2 * m.symcov_yz);
    let d_sd = -2.0 * (s * m.cov_jz_n + c * m.cov_jy_n);
    match kind {
        QfiKind::SingleI => d_dd - 2.0 * d_sd,
        QfiKind::TwoParam if fm.f_ss == 0.0 => d_dd,
        QfiKind::TwoParam => d_dd - 2.0 * fm.f_sd * d_sd / fm.f_ss,
    }
}

/// `(τ, F)` on a uniform grid of `grid` points in `τ ∈ [0, 1]`.
pub fn qfi_vs_theta(state: &InputState, which: QfiKind, grid: usize) -> Result<Vec<(f64, f64)>> {
    if grid < 2 {
        return Err(Error::InvalidArgument(format!("grid must have at least 2 points, got {grid}")));
    }
    let m = schwinger_moments(state);
    (0..grid)
        .map(|k| {
            let tau = k as f64 / (grid - 1) as f64;
            let theta = tau_to_theta(tau)?;
            Ok((tau, which.value(&FisherMatrix::from_moments(&m, theta))))
        })
        .collect()
}

/// `(τ, F)` at the given angle, convenient for reporting.
pub fn qfi_at(m: &SchwingerMoments, which: QfiKind, theta: f64) -> (f64, f64) {
    (theta_to_tau(theta), which.value(&FisherMatrix::from_moments(m, theta)))
}
