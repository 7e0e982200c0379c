//! Optimal beam splitters and working point.
//!
//! The first beam splitter maximizes the QFI that matches the phase-reference
//! setting. The second splitter and the working point then minimize the
//! detected `Δφ`, alternating between the two closed-form one-variable steps.

pub(crate) mod quartic;
mod scalar;

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;

use crate::detection::{generic_coefficients, sensitivity, Scheme, SensitivityCoefficients, StateMoments};
use crate::error::{Error, Result};
use crate::mzi_core::{theta_to_tau, BsAngles, Convention, PhaseConfig};
use crate::qfi::{qfi_derivative, FisherMatrix, QfiKind};
use crate::states::{schwinger_moments, FieldMoments, InputState, SchwingerMoments};

pub use quartic::scaled_residual as quartic_residual;

/// Real roots of `coeffs` (highest power first), exposed for property tests
/// and callers that need the same solver.
pub fn quartic_real_roots(coeffs: &[f64]) -> Vec<f64> {
    quartic::real_roots(coeffs)
}

/// Whether the detection has access to an external phase reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Reference {
    None,
    External,
}

impl Reference {
    pub fn qfi_kind(self) -> QfiKind {
        match self {
            Reference::None => QfiKind::TwoParam,
            Reference::External => QfiKind::SingleI,
        }
    }

    pub fn convention(self) -> Convention {
        match self {
            Reference::None => Convention::NoExternalReference,
            Reference::External => Convention::ExternalReference,
        }
    }
}

/// Which structural shortcut of the working-point equation applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuarticCase {
    /// Full quartic in `t = tan(φ/2)`.
    General,
    /// `C = E = F = 0`: `t⁴ = (A + B + D)/(A + B − D)`.
    FourthRoot,
    /// `C = D = E = F = 0`: `φ = π/2 + kπ`.
    HalfPi,
    /// `C = E = G = 0`: `φ = kπ`.
    MultipleOfPi,
    /// `C = D = E = 0`: `φ = arctan((A + B)G / (AF))`.
    Arctan,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuarticSolution {
    /// Real roots `t` of the stationarity quartic.
    pub real_roots: Vec<f64>,
    /// Every angle that was evaluated, in `[0, 2π)` for working points.
    pub candidates: Vec<f64>,
    pub chosen: f64,
    /// Largest scaled residual over `real_roots`.
    pub residual: f64,
    pub case: QuarticCase,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizationReport {
    pub theta_opt: f64,
    pub theta_prime_opt: f64,
    /// In `[0, 2π)`.
    pub phi_opt: f64,
    pub phi_local_opt: f64,
    pub delta_phi_opt: f64,
    pub hessian_verified: bool,
    /// An optimum sits at `τ ∈ {0, 1}` or `τ′ ∈ {0, 1}`.
    pub degenerate: bool,
    pub iterations: usize,
    /// The alternating iteration did not converge and a grid search was used.
    pub grid_fallback: bool,
    pub working_point_case: QuarticCase,
}

impl OptimizationReport {
    pub fn tau(&self) -> f64 {
        theta_to_tau(self.theta_opt)
    }

    pub fn tau_prime(&self) -> f64 {
        theta_to_tau(self.theta_prime_opt)
    }

    pub fn angles(&self) -> BsAngles {
        BsAngles { theta: self.theta_opt, theta_prime: self.theta_prime_opt }
    }
}

/// Values to hold fixed, and an optional starting point for `(θ′, φ)`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct JointOptions {
    pub theta: Option<f64>,
    pub theta_prime: Option<f64>,
    pub phi: Option<f64>,
    pub phi_local: Option<f64>,
    pub initial: Option<(f64, f64)>,
}

const MAX_ITER: usize = 100;
const STEP_TOL: f64 = 1e-10;
const ZERO_REL: f64 = 1e-12;

/// BS1 angle maximizing the QFI appropriate for `reference`.
pub fn optimize_bs1(state: &InputState, reference: Reference) -> Result<f64> {
    optimize_bs1_moments(&schwinger_moments(state), reference.qfi_kind())
}

pub(crate) fn optimize_bs1_moments(m: &SchwingerMoments, kind: QfiKind) -> Result<f64> {
    const N: usize = 2001;
    let f = |t: f64| kind.value(&FisherMatrix::from_moments(m, t));
    let h = PI / (N - 1) as f64;
    let values: Vec<f64> = (0..N).map(|k| f(k as f64 * h)).collect();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut best = 0;
    for (k, &v) in values.iter().enumerate() {
        lo = lo.min(v);
        if v > hi {
            hi = v;
            best = k;
        }
    }
    if !(hi - lo > 1e-12 * hi.abs()) {
        return Err(Error::FlatObjective);
    }
    let a = best.saturating_sub(1) as f64 * h;
    let b = (best + 1).min(N - 1) as f64 * h;
    let d = |t: f64| qfi_derivative(m, kind, t);
    let theta = if d(a) > 0.0 && d(b) < 0.0 {
        scalar::bisect(d, a, b, 1e-14)
    } else {
        scalar::golden_min(|t| -f(t), a, b, 1e-12)
    };
    let theta = theta.clamp(0.0, PI);
    Ok(if f(theta) >= values[best] { theta } else { best as f64 * h })
}

fn j_quadratic(m: &[[f64; 3]; 3], a: [f64; 3], b: [f64; 3]) -> f64 {
    let mut acc = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            acc += a[i] * m[i][j] * b[j];
        }
    }
    acc
}

/// `K = u cos θ′ + v sin θ′`.
fn k_basis(theta: f64, phi: f64) -> ([f64; 3], [f64; 3]) {
    let (st, ct) = theta.sin_cos();
    let (sf, cf) = phi.sin_cos();
    ([0.0, -st, ct], [sf, -ct * cf, -st * cf])
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Optimal BS2 angle for difference detection at fixed `θ` and `φ`, in `[0, π]`.
pub fn optimize_bs2_difference(m: &SchwingerMoments, theta: f64, phi: f64) -> Result<f64> {
    let (u, v) = k_basis(theta, phi);
    let cov = m.j_covariance();
    let quu = j_quadratic(&cov, u, u);
    let quv = j_quadratic(&cov, u, v);
    let scale = cov.iter().flatten().fold(0.0f64, |s, x| s.max(x.abs()));
    if quu.abs() <= ZERO_REL * scale && quv.abs() <= ZERO_REL * scale {
        return Err(Error::Degenerate("difference BS2 equation is 0/0"));
    }
    Ok(quu.max(0.0).atan2(-quv))
}

/// Stationarity quartic in `t = tan(θ′/2)` for single-mode detection.
fn single_bs2_quartic(m: &SchwingerMoments, theta: f64, phi: f64) -> [f64; 5] {
    let (u, v) = k_basis(theta, phi);
    let cov = m.j_covariance();
    let cn = m.j_n_covariance();
    let s0 = 0.25 * m.var_n + j_quadratic(&cov, u, u);
    let b2 = 2.0 * j_quadratic(&cov, u, v);
    let (lu, lv) = (dot(u, cn), dot(v, cn));
    [lu - s0, b2 - lv, 0.0, b2 + lv, s0 + lu]
}

/// Optimal BS2 angle for single-mode detection at fixed `θ` and `φ`.
///
/// Only roots with `θ′ = 2 arctan t ∈ [0, π]` are admissible; `θ′ = π` is
/// always among the candidates.
pub fn optimize_bs2_single(m: &SchwingerMoments, theta: f64, phi: f64) -> Result<QuarticSolution> {
    let coeffs = single_bs2_quartic(m, theta, phi);
    let roots = quartic::real_roots(&coeffs);
    let residual = roots.iter().map(|&t| quartic::scaled_residual(&coeffs, t)).fold(0.0, f64::max);
    let mut candidates: Vec<f64> = roots.iter().filter(|t| **t >= 0.0).map(|t| 2.0 * t.atan()).collect();
    if candidates.is_empty() {
        return Err(Error::NoRealRoot);
    }
    candidates.push(PI);
    let moments = StateMoments { schwinger: *m, field: FieldMoments::default() };
    let eval = |tp: f64| {
        let angles = BsAngles { theta, theta_prime: tp };
        sensitivity(Scheme::SingleModeIntensity, &moments, angles, &PhaseConfig::no_reference(phi))
            .map(|s| s.delta_phi)
            .unwrap_or(f64::INFINITY)
    };
    let chosen = argmin(&candidates, eval);
    Ok(QuarticSolution { real_roots: roots, candidates, chosen, residual, case: QuarticCase::General })
}

/// Unconstrained homodyne optimum `θ′ ∈ [0, 2π]` at fixed `φ`.
fn homodyne_bs2_raw(fm: &FieldMoments, theta: f64, phi: f64, phi_local: f64) -> f64 {
    let (s, c) = (0.5 * theta).sin_cos();
    let i = Complex64::new(0.0, 1.0);
    let lo2 = Complex64::from_polar(1.0, -2.0 * phi_local);
    let e = Complex64::from_polar(1.0, -phi);
    let (v0, v1, x01, y) = (fm.var_a0, fm.var_a1, fm.cov_a0_a1, fm.cov_a0_a1dag);
    let (c0, c1) = (fm.cov_n0, fm.cov_n1);
    // a₂ = P and i a₃ = Q.
    let cov_pd_p = c * c * c0 + s * s * c1 + 2.0 * c * s * y.im;
    let var_p = c * c * v0 - s * s * v1 + 2.0 * i * c * s * x01;
    let cov_pd_q = c * s * (c1 - c0) + i * (c * c * y.conj() + s * s * y);
    let cov_p_q = -c * s * (v0 + v1) + i * (c * c - s * s) * x01;
    let vp = 0.25 + 0.5 * (cov_pd_p + (lo2 * var_p).re);
    let w = 0.5 * ((e * cov_pd_q).re + (lo2 * e * cov_p_q).re);
    2.0 * vp.atan2(-w)
}

/// Optimal BS2 angle for homodyne detection, in `[0, π]`.
///
/// When the optimum needs `θ′ > π` at this `φ`, the equivalent configuration
/// `(2π − θ′, φ + π)` is the true optimum and `2π − θ′` is returned.
pub fn optimize_bs2_homodyne(fm: &FieldMoments, theta: f64, phi: f64, phi_local: f64) -> Result<f64> {
    let tp = homodyne_bs2_raw(fm, theta, phi, phi_local);
    Ok(if tp > PI { TAU - tp } else { tp })
}

/// Minimizer of the common `Δφ(φ)` form over the working point.
pub fn optimal_working_point(c: &SensitivityCoefficients) -> Result<QuarticSolution> {
    working_point(c, None)
}

fn working_point(c: &SensitivityCoefficients, near: Option<f64>) -> Result<QuarticSolution> {
    let scale = c.max_abs();
    let zero = |x: f64| x.abs() <= ZERO_REL * scale;
    if scale == 0.0 || (zero(c.f) && zero(c.g)) {
        return Err(Error::ZeroDerivativeEverywhere);
    }
    let SensitivityCoefficients { a, b, c: cc, d, e, f, g } = *c;
    let coeffs = [
        2.0 * a * g + 2.0 * b * g - 2.0 * cc * f - 2.0 * d * g + e * f,
        2.0 * (2.0 * a * f - 2.0 * cc * g - d * f + e * g),
        6.0 * e * f,
        2.0 * (2.0 * a * f - 2.0 * cc * g + d * f - e * g),
        -2.0 * a * g - 2.0 * b * g + 2.0 * cc * f - 2.0 * d * g + e * f,
    ];
    let roots = quartic::real_roots(&coeffs);
    let residual = roots.iter().map(|&t| quartic::scaled_residual(&coeffs, t)).fold(0.0, f64::max);
    let mut candidates: Vec<f64> = roots.iter().map(|t| polish_phi(c, 2.0 * t.atan())).collect();
    candidates.extend([0.0, FRAC_PI_2, PI, 1.5 * PI]);

    let case = if zero(cc) && zero(e) && zero(f) && zero(d) {
        QuarticCase::HalfPi
    } else if zero(cc) && zero(e) && zero(f) {
        let ratio = (a + b + d) / (a + b - d);
        if ratio.is_finite() && ratio > 0.0 {
            let t = ratio.powf(0.25);
            candidates.extend([2.0 * t.atan(), -2.0 * t.atan()]);
        }
        QuarticCase::FourthRoot
    } else if zero(cc) && zero(e) && zero(g) {
        QuarticCase::MultipleOfPi
    } else if zero(cc) && zero(d) && zero(e) {
        let phi = ((a + b) * g / (a * f)).atan();
        candidates.extend([phi, phi + PI]);
        QuarticCase::Arctan
    } else {
        QuarticCase::General
    };
    for x in candidates.iter_mut() {
        *x = canonical_phi(*x);
    }
    let eval = |phi: f64| crate::detection::sensitivity_from_coefficients(c, phi).unwrap_or(f64::INFINITY);
    let chosen = match near {
        None => argmin(&candidates, eval),
        Some(p) => argmin_near(&candidates, eval, p),
    };
    if !eval(chosen).is_finite() {
        return Err(Error::ZeroDerivativeEverywhere);
    }
    Ok(QuarticSolution { real_roots: roots, candidates, chosen, residual, case })
}

/// Newton refinement of a stationary point of `R/S²` in `φ` itself. Roots of
/// the `tan(φ/2)` quartic near `φ = π` sit at large `|t|` and lose accuracy.
fn polish_phi(c: &SensitivityCoefficients, phi0: f64) -> f64 {
    let eval = |phi: f64| crate::detection::sensitivity_from_coefficients(c, phi).unwrap_or(f64::INFINITY);
    let mut phi = phi0;
    for _ in 0..20 {
        let (s, co) = phi.sin_cos();
        let (s2, c2) = (2.0 * phi).sin_cos();
        let r = c.radicand(phi);
        let r1 = -c.b * s2 + 2.0 * c.c * c2 - c.d * s + c.e * co;
        let r2 = -2.0 * c.b * c2 - 4.0 * c.c * s2 - c.d * co - c.e * s;
        let (q, q1) = (c.slope(phi), -c.f * s + c.g * co);
        let h = r1 * q - 2.0 * r * q1;
        let h1 = r2 * q - r1 * q1 + 2.0 * r * q;
        if h1 == 0.0 {
            break;
        }
        let step = h / h1;
        if !step.is_finite() || step.abs() > 1e-2 {
            break;
        }
        phi -= step;
        if step.abs() < 1e-15 {
            break;
        }
    }
    if eval(phi) <= eval(phi0) {
        phi
    } else {
        phi0
    }
}

/// Canonical representative in `[0, 2π)`.
pub(crate) fn canonical_phi(phi: f64) -> f64 {
    let x = phi.rem_euclid(TAU);
    if x >= TAU - 1e-14 {
        0.0
    } else {
        x
    }
}

fn phase_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

fn is_tie(a: f64, best: f64) -> bool {
    a <= best + 1e-12 * best.abs()
}

/// Smallest-angle argmin among near-ties.
fn argmin(xs: &[f64], f: impl Fn(f64) -> f64) -> f64 {
    let vals: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let best = vals.iter().copied().fold(f64::INFINITY, f64::min);
    if !best.is_finite() {
        return xs[0];
    }
    xs.iter()
        .zip(&vals)
        .filter(|(_, v)| is_tie(**v, best))
        .map(|(x, _)| *x)
        .fold(f64::INFINITY, f64::min)
}

fn argmin_near(xs: &[f64], f: impl Fn(f64) -> f64, near: f64) -> f64 {
    let vals: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let best = vals.iter().copied().fold(f64::INFINITY, f64::min);
    if !best.is_finite() {
        return xs[0];
    }
    xs.iter()
        .zip(&vals)
        .filter(|(_, v)| is_tie(**v, best))
        .map(|(x, _)| *x)
        .min_by(|x, y| phase_distance(*x, near).total_cmp(&phase_distance(*y, near)))
        .unwrap()
}

/// Fixed-`θ` view of the sensitivity landscape over `(θ′, φ)`.
struct Landscape<'a> {
    scheme: Scheme,
    moments: &'a StateMoments,
    theta: f64,
    phi_local: f64,
}

impl Landscape<'_> {
    fn eval(&self, tp: f64, phi: f64) -> f64 {
        let angles = BsAngles { theta: self.theta, theta_prime: tp };
        sensitivity(self.scheme, self.moments, angles, &PhaseConfig::external(phi, self.phi_local))
            .map(|s| s.delta_phi)
            .unwrap_or(f64::INFINITY)
    }

    fn coefficients(&self, tp: f64) -> SensitivityCoefficients {
        let angles = BsAngles { theta: self.theta, theta_prime: tp };
        generic_coefficients(self.scheme, self.moments, angles, self.phi_local)
    }

    /// Candidate `(θ′, φ)` pairs from the scheme's BS2 closed form. With
    /// `allow_flip` the reflected configuration `(−θ′, φ + π)` is admissible.
    fn bs2_candidates(&self, phi: f64, allow_flip: bool) -> Vec<(f64, f64)> {
        let m = &self.moments.schwinger;
        let mut out = vec![(PI, phi)];
        match self.scheme {
            Scheme::DifferenceIntensity => match optimize_bs2_difference(m, self.theta, phi) {
                Ok(tp) => out.push((tp, phi)),
                Err(_) => out.push((scalar::scan_min(|tp| self.eval(tp, phi), 0.0, PI, 2001, 1e-12), phi)),
            },
            Scheme::SingleModeIntensity => {
                let coeffs = single_bs2_quartic(m, self.theta, phi);
                let roots = quartic::real_roots(&coeffs);
                if roots.is_empty() {
                    out.push((scalar::scan_min(|tp| self.eval(tp, phi), 0.0, PI, 2001, 1e-12), phi));
                }
                for t in roots {
                    let tp = 2.0 * t.atan();
                    if tp >= 0.0 {
                        out.push((tp, phi));
                    } else if allow_flip {
                        out.push((-tp, phi + PI));
                    }
                }
            }
            Scheme::BalancedHomodyne => {
                let tp = homodyne_bs2_raw(&self.moments.field, self.theta, phi, self.phi_local);
                if tp <= PI {
                    out.push((tp, phi));
                } else if allow_flip {
                    out.push((TAU - tp, phi + PI));
                }
            }
        }
        out
    }
}

pub fn joint_optimize(state: &InputState, scheme: Scheme, reference: Reference) -> Result<OptimizationReport> {
    joint_optimize_with(state, scheme, reference, JointOptions::default())
}

pub fn joint_optimize_with(
    state: &InputState,
    scheme: Scheme,
    reference: Reference,
    opts: JointOptions,
) -> Result<OptimizationReport> {
    if scheme == Scheme::BalancedHomodyne && reference != Reference::External {
        return Err(Error::WrongConvention);
    }
    let moments = StateMoments::of(state);
    let theta = match opts.theta {
        Some(t) => BsAngles::new(t, 0.0)?.theta,
        None => optimize_bs1_moments(&moments.schwinger, reference.qfi_kind())?,
    };
    if let Some(tp) = opts.theta_prime {
        BsAngles::new(theta, tp)?;
    }
    let phi_local = opts.phi_local.unwrap_or_else(|| state.dominant_coherent_phase());
    let land = Landscape { scheme, moments: &moments, theta, phi_local };
    optimize_landscape(&land, reference, opts)
}

fn optimize_landscape(land: &Landscape, _reference: Reference, opts: JointOptions) -> Result<OptimizationReport> {
    let tp_free = opts.theta_prime.is_none();
    let phi_free = opts.phi.is_none();

    let default_start = match opts.initial {
        Some((t, p)) => (opts.theta_prime.unwrap_or(t), opts.phi.unwrap_or(p)),
        None => {
            let t = opts.theta_prime.unwrap_or(FRAC_PI_2);
            let p = match opts.phi {
                Some(p) => p,
                None => working_point(&land.coefficients(t), None)?.chosen,
            };
            (t, p)
        }
    };
    let mut starts = vec![default_start];
    // With both angles free the alternation can stall in a local minimum, so a
    // second run starts from the best point of a coarse grid.
    if tp_free && phi_free && opts.initial.is_none() {
        starts.push(coarse_start(land));
    }
    let mut best: Option<(f64, f64, usize, bool)> = None;
    for start in starts {
        let run = alternate(land, start, tp_free, phi_free);
        let better = match best {
            None => true,
            Some((t, p, _, _)) => land.eval(run.0, run.1) < land.eval(t, p) && !is_tie(land.eval(t, p), land.eval(run.0, run.1)),
        };
        if better {
            best = Some(run);
        }
    }
    let (mut tp, mut phi, iterations, converged) = best.expect("at least one start");

    let grid_fallback = !converged;
    if grid_fallback {
        (tp, phi) = grid_search(land, opts, tp, phi);
    }

    // Prefer the smallest equivalent working point at the final θ′.
    if phi_free {
        if let Ok(sol) = working_point(&land.coefficients(tp), None) {
            let alt = sol.chosen;
            if alt < phi && is_tie(land.eval(tp, alt), land.eval(tp, phi)) {
                phi = alt;
            }
        }
    }
    phi = canonical_phi(phi);

    let delta_phi_opt = land.eval(tp, phi);
    if !delta_phi_opt.is_finite() {
        return Err(Error::ZeroDerivative);
    }
    let working_point_case = working_point(&land.coefficients(tp), None).map(|s| s.case).unwrap_or(QuarticCase::General);
    let edge = |t: f64| t <= 1e-9 || t >= PI - 1e-9;
    let degenerate = edge(land.theta) || edge(tp);
    let hessian_verified = check_hessian(land, tp, phi, tp_free && !edge(tp), phi_free);

    Ok(OptimizationReport {
        theta_opt: land.theta,
        theta_prime_opt: tp,
        phi_opt: phi,
        phi_local_opt: land.phi_local,
        delta_phi_opt,
        hessian_verified,
        degenerate,
        iterations,
        grid_fallback,
        working_point_case,
    })
}

/// Alternating closed-form steps in `θ′` and `φ` from `start`.
fn alternate(land: &Landscape, start: (f64, f64), tp_free: bool, phi_free: bool) -> (f64, f64, usize, bool) {
    let (mut tp, mut phi) = start;
    let (mut iterations, mut converged) = (0, false);
    while iterations < MAX_ITER {
        iterations += 1;
        let (tp0, phi0) = (tp, phi);
        if tp_free {
            let cands = land.bs2_candidates(phi, phi_free);
            let vals: Vec<f64> = cands.iter().map(|&(t, p)| land.eval(t, p)).collect();
            let best = vals.iter().copied().fold(f64::INFINITY, f64::min);
            // Stay put unless a candidate is a strict improvement.
            if best < land.eval(tp, phi) || iterations == 1 {
                let k = (0..cands.len())
                    .filter(|&k| is_tie(vals[k], best))
                    .min_by(|&i, &j| (cands[i].0 - tp).abs().total_cmp(&(cands[j].0 - tp).abs()))
                    .unwrap_or(0);
                (tp, phi) = cands[k];
            }
        }
        if phi_free {
            if let Ok(sol) = working_point(&land.coefficients(tp), Some(phi)) {
                if land.eval(tp, sol.chosen) <= land.eval(tp, phi) {
                    phi = sol.chosen;
                }
            }
        }
        phi = canonical_phi(phi);
        if (tp - tp0).abs() < STEP_TOL && phase_distance(phi, phi0) < STEP_TOL {
            converged = true;
            break;
        }
    }
    (tp, phi, iterations, converged)
}

/// Best point of a 37×73 grid over `θ′ ∈ [0, π]`, `φ ∈ [0, 2π)`.
fn coarse_start(land: &Landscape) -> (f64, f64) {
    let mut best = ((FRAC_PI_2, 0.0), f64::INFINITY);
    for i in 1..36 {
        for j in 0..72 {
            let x = (PI * i as f64 / 36.0, TAU * j as f64 / 72.0);
            let v = land.eval(x.0, x.1);
            if v < best.1 {
                best = (x, v);
            }
        }
    }
    best.0
}

/// Maps any `(θ′, φ)` onto `θ′ ∈ [0, π]` using the reflection symmetries.
fn fold(tp: f64, phi: f64) -> (f64, f64) {
    let mut t = tp.rem_euclid(TAU);
    let mut p = phi;
    if t > PI {
        t = TAU - t;
        p += PI;
    }
    (t, canonical_phi(p))
}

/// 201×201 grid over the free variables followed by simplex and Newton refinement.
fn grid_search(land: &Landscape, opts: JointOptions, tp0: f64, phi0: f64) -> (f64, f64) {
    const N: usize = 201;
    let fix = |x: [f64; 2]| (opts.theta_prime.unwrap_or(x[0]), opts.phi.unwrap_or(x[1]));
    let f = |x: [f64; 2]| {
        let (t, p) = fix(x);
        land.eval(t, p)
    };
    let mut best = ([tp0, phi0], f([tp0, phi0]));
    for i in 0..N {
        for j in 0..N {
            let x = [PI * i as f64 / (N - 1) as f64, TAU * j as f64 / (N - 1) as f64];
            let v = f(x);
            if v < best.1 {
                best = (x, v);
            }
        }
    }
    let x = scalar::nelder_mead(f, best.0, 0.02, 20_000);
    let x = newton_polish(&f, x, opts.theta_prime.is_none(), opts.phi.is_none());
    let (t, p) = fix(x);
    if opts.theta_prime.is_none() && opts.phi.is_none() {
        fold(t, p)
    } else {
        (t.clamp(0.0, PI), canonical_phi(p))
    }
}

/// Newton steps on a finite-difference gradient and Hessian, accepted only when they improve `f`.
fn newton_polish(f: &impl Fn([f64; 2]) -> f64, mut x: [f64; 2], free0: bool, free1: bool) -> [f64; 2] {
    let h = 1e-4;
    for _ in 0..20 {
        let (g, hs) = fd_grad_hess(f, x, h);
        let step = match (free0, free1) {
            (true, true) => {
                let det = hs[0][0] * hs[1][1] - hs[0][1] * hs[1][0];
                if det <= 0.0 || hs[0][0] <= 0.0 {
                    break;
                }
                [(hs[1][1] * g[0] - hs[0][1] * g[1]) / det, (hs[0][0] * g[1] - hs[1][0] * g[0]) / det]
            }
            (true, false) if hs[0][0] > 0.0 => [g[0] / hs[0][0], 0.0],
            (false, true) if hs[1][1] > 0.0 => [0.0, g[1] / hs[1][1]],
            _ => break,
        };
        let next = [x[0] - step[0], x[1] - step[1]];
        if f(next) <= f(x) {
            x = next;
        } else {
            break;
        }
        if step[0].abs().max(step[1].abs()) < 1e-13 {
            break;
        }
    }
    x
}

fn fd_grad_hess(f: &impl Fn([f64; 2]) -> f64, x: [f64; 2], h: f64) -> ([f64; 2], [[f64; 2]; 2]) {
    let at = |a: f64, b: f64| f([x[0] + a, x[1] + b]);
    let f0 = at(0.0, 0.0);
    let g = [(at(h, 0.0) - at(-h, 0.0)) / (2.0 * h), (at(0.0, h) - at(0.0, -h)) / (2.0 * h)];
    let hxx = (at(h, 0.0) - 2.0 * f0 + at(-h, 0.0)) / (h * h);
    let hyy = (at(0.0, h) - 2.0 * f0 + at(0.0, -h)) / (h * h);
    let hxy = (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4.0 * h * h);
    (g, [[hxx, hxy], [hxy, hyy]])
}

/// Second-order minimum test on the free interior variables.
fn check_hessian(land: &Landscape, tp: f64, phi: f64, tp_free: bool, phi_free: bool) -> bool {
    let f = |x: [f64; 2]| land.eval(x[0], x[1]);
    let (_, hs) = fd_grad_hess(&f, [tp, phi], 1e-5);
    match (tp_free, phi_free) {
        (true, true) => hs[0][0] > 0.0 && hs[1][1] > 0.0 && hs[0][0] * hs[1][1] - hs[0][1] * hs[0][1] > 0.0,
        (true, false) => hs[0][0] > 0.0,
        (false, true) => hs[1][1] > 0.0,
        (false, false) => false,
    }
}

/// Closed-form-free minimization of `Δφ(θ′, φ)` at fixed `θ`: dense grid,
/// simplex, then Newton refinement. Used to validate the closed forms.
pub fn blind_minimize(state: &InputState, scheme: Scheme, theta: f64, phi_local: f64) -> Result<(f64, f64, f64)> {
    let moments = StateMoments::of(state);
    let land = Landscape { scheme, moments: &moments, theta, phi_local };
    let (tp, phi) = grid_search(&land, JointOptions::default(), FRAC_PI_2, PI);
    let v = land.eval(tp, phi);
    if !v.is_finite() {
        return Err(Error::ZeroDerivative);
    }
    Ok((tp, phi, v))
}

/// `Δφ` at an explicit configuration, with `φ_L` only used by homodyne detection.
pub fn evaluate(moments: &StateMoments, scheme: Scheme, angles: BsAngles, phi: f64, phi_local: f64) -> Result<f64> {
    sensitivity(scheme, moments, angles, &PhaseConfig::external(phi, phi_local)).map(|s| s.delta_phi)
}
