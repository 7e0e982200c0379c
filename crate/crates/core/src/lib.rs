//! Phase sensitivity of an unbalanced Mach-Zehnder interferometer fed by pure
//! two-mode product states.
//!
//! The crate evaluates Schwinger-operator moments of Gaussian and Fock inputs,
//! propagates them through the interferometer, computes difference-intensity,
//! single-mode-intensity and balanced-homodyne sensitivities, bounds them with
//! the single- and two-parameter quantum Fisher information, and optimizes
//! both beam splitters and the working point. A brute-force truncated Fock
//! simulator ([`fock_oracle`]) cross-checks the analytic path at small scale.
//!
//! ```
//! use mzi_opt_core::prelude::*;
//!
//! let state = InputState::coherent_squeezed_vacuum(100.0, 0.0, 1.2, 0.0);
//! let state = apply_pmc(&state, PmcId::CohSqzVac).unwrap();
//! let report = joint_optimize(&state, Scheme::BalancedHomodyne, Reference::External).unwrap();
//! assert!((report.phi_opt - std::f64::consts::PI).abs() < 1e-6);
//! ```

// `!(x > y)` is used on purpose so that NaN takes the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod detection;
pub mod error;
pub mod fock_oracle;
pub mod mzi_core;
pub mod optimize;
pub mod qfi;
pub mod states;

pub use error::{Error, Result};

/// The commonly used types and entry points.
pub mod prelude {
    pub use crate::detection::{
        extinction_rate, generic_coefficients, mean_n4, sensitivity, sensitivity_difference,
        sensitivity_from_coefficients, sensitivity_homodyne, sensitivity_single, Scheme,
        SensitivityBreakdown, SensitivityCoefficients, StateMoments,
    };
    pub use crate::error::{Error, Result};
    pub use crate::mzi_core::{
        a_coefficients, internal_mode_moments, k_coefficients, tau_to_theta, theta_to_tau,
        ACoefficients, BsAngles, Convention, KCoefficients, PhaseConfig,
    };
    pub use crate::optimize::{
        joint_optimize, joint_optimize_with, optimal_working_point, optimize_bs1,
        optimize_bs2_difference, optimize_bs2_homodyne, optimize_bs2_single, JointOptions,
        OptimizationReport, QuarticSolution, Reference,
    };
    pub use crate::qfi::{fisher_matrix, qfi_report, qfi_vs_theta, FisherMatrix, QfiKind, QfiReport};
    pub use crate::states::{
        apply_pmc, field_moments, mean_total_photons, schwinger_moments, FieldMoments,
        InputState, ModeKind, ModeSpec, PmcId, SchwingerMoments,
    };
}
