//! Brute-force two-mode Fock-space simulator.
//!
//! States are dense amplitude tensors `ψ[n₀][n₁]`. The tensor is square with
//! side `d₀ + d₁ − 1` so that beam splitters, which conserve the total photon
//! number, never leave the truncated space. Everything here is deliberately
//! independent of the moment engine so the two can check each other.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::detection::Scheme;
use crate::error::{Error, Result};
use crate::mzi_core::{BsAngles, PhaseConfig};
use crate::states::{FieldMoments, InputState, ModeSpec, SchwingerMoments};

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Bound on the discarded per-mode weight `Σ_{k≥d} |c_k|² (k+1)⁴`.
    pub tail_tolerance: f64,
    /// Budget for the product of the two per-mode cutoffs.
    pub max_joint_dimension: usize,
    /// Phase step for the central-difference derivative.
    pub fd_step: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { tail_tolerance: 1e-10, max_joint_dimension: 4096, fd_step: 1e-5 }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tail_tolerance > 0.0 && self.tail_tolerance <= 1e-6) {
            return Err(Error::InvalidArgument(format!("tail_tolerance {} outside (0, 1e-6]", self.tail_tolerance)));
        }
        if self.max_joint_dimension == 0 || !(self.fd_step > 0.0) {
            return Err(Error::InvalidArgument("max_joint_dimension and fd_step must be positive".into()));
        }
        Ok(())
    }
}

/// Dense two-mode state.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedState {
    pub dim0: usize,
    pub dim1: usize,
    amplitudes: Vec<C>,
}

impl TruncatedState {
    pub fn amplitude(&self, n0: usize, n1: usize) -> C {
        if n0 < self.dim0 && n1 < self.dim1 {
            self.amplitudes[n0 * self.dim1 + n1]
        } else {
            C::new(0.0, 0.0)
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    fn inner(&self, other: &[C]) -> C {
        self.amplitudes.iter().zip(other).map(|(a, b)| a.conj() * b).sum()
    }
}

/// Fock amplitudes of `D(α) S(r e^{iθ}) |0⟩` up to `kmax`.
fn gaussian_amplitudes(alpha: C, r: f64, theta: f64, kmax: usize) -> Vec<C> {
    let (ch, sh, th) = (r.cosh(), r.sinh(), r.tanh());
    let e = C::from_polar(1.0, theta);
    let c0 = (-0.5 * alpha.norm_sqr() - 0.5 * alpha.conj() * alpha.conj() * e * th).exp() / ch.sqrt();
    let gamma = alpha * ch + alpha.conj() * e * sh;
    let mut c = Vec::with_capacity(kmax);
    c.push(c0);
    for n in 0..kmax.saturating_sub(1) {
        let prev = if n > 0 { c[n - 1] } else { C::new(0.0, 0.0) };
        let next = (gamma * c[n] - e * sh * (n as f64).sqrt() * prev) / (ch * ((n + 1) as f64).sqrt());
        c.push(next);
    }
    c
}

/// Per-mode amplitudes, truncated at the smallest cutoff meeting the tail bound.
fn mode_amplitudes(spec: &ModeSpec, cfg: &OracleConfig) -> Result<Vec<C>> {
    if let ModeSpec::Fock { n } = *spec {
        let mut c = vec![C::new(0.0, 0.0); n as usize + 1];
        c[n as usize] = C::new(1.0, 0.0);
        return Ok(c);
    }
    let kmax = cfg.max_joint_dimension;
    let c = gaussian_amplitudes(spec.mean_field(), spec.squeeze_mag(), spec.squeeze_phase(), kmax);
    let norm: f64 = c.iter().map(|x| x.norm_sqr()).sum();
    let exceeded = Err(Error::CutoffExceeded { needed: kmax + 1, budget: cfg.max_joint_dimension });
    if !norm.is_finite() || (1.0 - norm).abs() > cfg.tail_tolerance {
        return exceeded;
    }
    let mut tail = 0.0;
    let mut d = 0;
    for k in (0..c.len()).rev() {
        tail += c[k].norm_sqr() * ((k + 1) as f64).powi(4);
        if tail >= cfg.tail_tolerance {
            d = k + 1;
            break;
        }
    }
    if d >= kmax {
        return exceeded;
    }
    Ok(c[..d.max(1)].to_vec())
}

pub fn build_state(state: &InputState, cfg: &OracleConfig) -> Result<TruncatedState> {
    cfg.validate()?;
    let c0 = mode_amplitudes(state.port0(), cfg)?;
    let c1 = mode_amplitudes(state.port1(), cfg)?;
    let needed = c0.len() * c1.len();
    if needed > cfg.max_joint_dimension {
        return Err(Error::CutoffExceeded { needed, budget: cfg.max_joint_dimension });
    }
    let dim = c0.len() + c1.len() - 1;
    let mut amplitudes = vec![C::new(0.0, 0.0); dim * dim];
    for (i, a) in c0.iter().enumerate() {
        for (j, b) in c1.iter().enumerate() {
            amplitudes[i * dim + j] = a * b;
        }
    }
    let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    amplitudes.iter_mut().for_each(|a| *a /= norm);
    Ok(TruncatedState { dim0: dim, dim1: dim, amplitudes })
}

/// Eigen-decompositions of `J_x` on every fixed-photon-number block.
pub struct BeamSplitter {
    dim: usize,
    blocks: Vec<(Vec<f64>, DMatrix<f64>)>,
}

impl BeamSplitter {
    pub fn new(dim: usize) -> Self {
        let blocks = (0..dim)
            .map(|m| {
                let size = m + 1;
                let mut jx = DMatrix::<f64>::zeros(size, size);
                for i in 0..m {
                    let v = 0.5 * (((i + 1) * (m - i)) as f64).sqrt();
                    jx[(i, i + 1)] = v;
                    jx[(i + 1, i)] = v;
                }
                let eig = SymmetricEigen::new(jx);
                (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
            })
            .collect();
        Self { dim, blocks }
    }

    /// `exp(iϑ J_x) |ψ⟩`, which maps `a₀ → T a₀ + R a₁` in the Heisenberg picture.
    pub fn apply(&self, state: &TruncatedState, angle: f64) -> TruncatedState {
        assert_eq!(state.dim0, self.dim, "beam splitter built for a different dimension");
        let d = self.dim;
        let mut out = vec![C::new(0.0, 0.0); d * d];
        for (m, (vals, vecs)) in self.blocks.iter().enumerate() {
            let size = m + 1;
            let block: Vec<C> = (0..size).map(|i| state.amplitudes[i * d + (m - i)]).collect();
            // Vᵀ ψ, phase, then V.
            let mut proj = vec![C::new(0.0, 0.0); size];
            for k in 0..size {
                let mut acc = C::new(0.0, 0.0);
                for i in 0..size {
                    acc += vecs[(i, k)] * block[i];
                }
                proj[k] = acc * C::from_polar(1.0, angle * vals[k]);
            }
            for i in 0..size {
                let mut acc = C::new(0.0, 0.0);
                for k in 0..size {
                    acc += vecs[(i, k)] * proj[k];
                }
                out[i * d + (m - i)] = acc;
            }
        }
        TruncatedState { dim0: d, dim1: d, amplitudes: out }
    }
}

pub fn evolve_bs(state: &TruncatedState, angle: f64) -> TruncatedState {
    BeamSplitter::new(state.dim0).apply(state, angle)
}

/// `exp(−i(φ₁ n₀ + φ₂ n₁)) |ψ⟩`.
pub fn apply_phases(state: &TruncatedState, phi1: f64, phi2: f64) -> TruncatedState {
    let mut out = state.clone();
    for i in 0..state.dim0 {
        for j in 0..state.dim1 {
            out.amplitudes[i * state.dim1 + j] *= C::from_polar(1.0, -(phi1 * i as f64 + phi2 * j as f64));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Observable {
    A0,
    A1,
    A0Squared,
    A1Squared,
    N0,
    N1,
    Jx,
    Jy,
    Jz,
    N,
    /// `n₀ − n₁`.
    Nd,
}

fn apply_op(state: &TruncatedState, op: Observable, src: &[C]) -> Vec<C> {
    let (d0, d1) = (state.dim0, state.dim1);
    let at = |i: usize, j: usize| if i < d0 && j < d1 { src[i * d1 + j] } else { C::new(0.0, 0.0) };
    let sq = |k: usize| (k as f64).sqrt();
    let mut out = vec![C::new(0.0, 0.0); d0 * d1];
    for i in 0..d0 {
        for j in 0..d1 {
            let (fi, fj) = (i as f64, j as f64);
            // ⟨i,j| a₀† a₁ |ψ⟩ and ⟨i,j| a₁† a₀ |ψ⟩.
            let up = || if i > 0 { sq(i) * sq(j + 1) * at(i - 1, j + 1) } else { C::new(0.0, 0.0) };
            let down = || if j > 0 { sq(i + 1) * sq(j) * at(i + 1, j - 1) } else { C::new(0.0, 0.0) };
            out[i * d1 + j] = match op {
                Observable::A0 => sq(i + 1) * at(i + 1, j),
                Observable::A1 => sq(j + 1) * at(i, j + 1),
                Observable::A0Squared => sq(i + 1) * sq(i + 2) * at(i + 2, j),
                Observable::A1Squared => sq(j + 1) * sq(j + 2) * at(i, j + 2),
                Observable::N0 => fi * at(i, j),
                Observable::N1 => fj * at(i, j),
                Observable::N => (fi + fj) * at(i, j),
                Observable::Nd => (fi - fj) * at(i, j),
                Observable::Jz => 0.5 * (fi - fj) * at(i, j),
                Observable::Jx => 0.5 * (up() + down()),
                Observable::Jy => C::new(0.0, -0.5) * (up() - down()),
            };
        }
    }
    out
}

pub fn expectation(state: &TruncatedState, observable: Observable) -> C {
    state.inner(&apply_op(state, observable, &state.amplitudes))
}

/// `⟨A B⟩`.
pub fn correlation(state: &TruncatedState, a: Observable, b: Observable) -> C {
    let bpsi = apply_op(state, b, &state.amplitudes);
    state.inner(&apply_op(state, a, &bpsi))
}

fn covariance(state: &TruncatedState, a: Observable, b: Observable) -> f64 {
    (correlation(state, a, b) - expectation(state, a) * expectation(state, b)).re
}

fn symcov(state: &TruncatedState, a: Observable, b: Observable) -> f64 {
    0.5 * (covariance(state, a, b) + covariance(state, b, a))
}

/// Schwinger moments evaluated numerically on the truncated state.
pub fn oracle_schwinger_moments(state: &TruncatedState) -> SchwingerMoments {
    use Observable::*;
    SchwingerMoments {
        mean_jx: expectation(state, Jx).re,
        mean_jy: expectation(state, Jy).re,
        mean_jz: expectation(state, Jz).re,
        mean_n: expectation(state, N).re,
        var_jx: covariance(state, Jx, Jx),
        var_jy: covariance(state, Jy, Jy),
        var_jz: covariance(state, Jz, Jz),
        var_n: covariance(state, N, N),
        symcov_xy: symcov(state, Jx, Jy),
        symcov_xz: symcov(state, Jx, Jz),
        symcov_yz: symcov(state, Jy, Jz),
        cov_jx_n: covariance(state, Jx, N),
        cov_jy_n: covariance(state, Jy, N),
        cov_jz_n: covariance(state, Jz, N),
    }
}

/// Field moments of a product state.
pub fn oracle_field_moments(state: &TruncatedState) -> FieldMoments {
    use Observable::*;
    let (m0, m1) = (expectation(state, A0), expectation(state, A1));
    let a0a1 = state.inner(&apply_op(state, A0, &apply_op(state, A1, &state.amplitudes)));
    // ⟨a₀ a₁†⟩ = conj⟨a₁ a₀†⟩ = conj⟨ψ| a₁ a₀† |ψ⟩ = ⟨a₀ψ | a₁ψ⟩ by commutation.
    let a0psi = apply_op(state, A0, &state.amplitudes);
    let a1psi = apply_op(state, A1, &state.amplitudes);
    let a0_a1dag: C = a1psi.iter().zip(&a0psi).map(|(x, y)| x.conj() * y).sum();
    FieldMoments {
        mean_a0: m0,
        mean_a1: m1,
        var_a0: expectation(state, A0Squared) - m0 * m0,
        var_a1: expectation(state, A1Squared) - m1 * m1,
        cov_n0: expectation(state, N0).re - m0.norm_sqr(),
        cov_n1: expectation(state, N1).re - m1.norm_sqr(),
        cov_a0_a1: a0a1 - m0 * m1,
        cov_a0_a1dag: a0_a1dag - m0 * m1.conj(),
    }
}

/// Mean and variance of the detected observable at the output.
fn detected_moments(state: &TruncatedState, scheme: Scheme, phi_local: f64) -> (f64, f64) {
    use Observable::*;
    match scheme {
        Scheme::DifferenceIntensity => {
            let m = expectation(state, Nd).re;
            (m, correlation(state, Nd, Nd).re - m * m)
        }
        Scheme::SingleModeIntensity => {
            let m = expectation(state, N0).re;
            (m, correlation(state, N0, N0).re - m * m)
        }
        Scheme::BalancedHomodyne => {
            let lo = C::from_polar(1.0, -phi_local);
            let a = expectation(state, A0);
            let a2 = expectation(state, A0Squared);
            let n = expectation(state, N0).re;
            let mean = (lo * a).re;
            let second = (2.0 * (lo * lo * a2).re + 2.0 * n + 1.0) / 4.0;
            (mean, second - mean * mean)
        }
    }
}

/// `Δφ` by full evolution, numeric variance and a Richardson-extrapolated
/// central-difference slope.
pub fn oracle_sensitivity(
    state: &InputState,
    angles: BsAngles,
    phases: &PhaseConfig,
    scheme: Scheme,
    cfg: &OracleConfig,
) -> Result<f64> {
    let psi = build_state(state, cfg)?;
    let bs = BeamSplitter::new(psi.dim0);
    let inner = bs.apply(&psi, angles.theta);
    let run = |phi: f64| detected_moments(&bs.apply(&apply_phases(&inner, 0.0, phi), angles.theta_prime), scheme, phases.phi_local);
    let h = cfg.fd_step;
    let slope = |h: f64| (run(phases.phi + h).0 - run(phases.phi - h).0) / (2.0 * h);
    let (d1, d2) = (slope(h), slope(0.5 * h));
    let derivative = (4.0 * d2 - d1) / 3.0;
    let variance = run(phases.phi).1;
    if derivative.abs() < 1e-8 * variance.max(0.0).sqrt().max(1.0) {
        return Err(Error::ZeroDerivative);
    }
    Ok(variance.max(0.0).sqrt() / derivative.abs())
}

/// `4 Δ²n₃` after the first beam splitter.
pub fn oracle_qfi_single(state: &InputState, theta: f64, cfg: &OracleConfig) -> Result<f64> {
    let psi = evolve_bs(&build_state(state, cfg)?, theta);
    let m = expectation(&psi, Observable::N1).re;
    Ok(4.0 * (correlation(&psi, Observable::N1, Observable::N1).re - m * m))
}
