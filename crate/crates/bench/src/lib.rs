//! Shared inputs for the benchmarks in `benches/`.

use mzi_opt_core::prelude::*;

/// Coherent light with squeezed vacuum in the dark port.
pub fn coherent_squeezed() -> InputState {
    apply_pmc(&InputState::coherent_squeezed_vacuum(100.0, 0.0, 1.2, 0.0), PmcId::CohSqzVac).unwrap()
}

/// Squeezed coherent light in both ports.
pub fn dual_squeezed(pmc: PmcId) -> InputState {
    apply_pmc(&InputState::dual_squeezed_coherent(1e3, 50.0, 1.2, 0.6), pmc).unwrap()
}

/// A state small enough for the Fock-space simulator.
pub fn oracle_state() -> InputState {
    InputState::new(
        ModeSpec::SqueezedVacuum { squeeze: 0.4, squeeze_phase: 0.0 },
        ModeSpec::Coherent { amplitude: 1.5, phase: 0.0 },
    )
    .unwrap()
}
