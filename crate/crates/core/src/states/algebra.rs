//! Expectation values of two-mode bilinears on product states.
//!
//! Each mode operator is split as `a = ⟨a⟩ + δa`. Covariances are then taken
//! between the fluctuating parts only, which keeps them accurate when the
//! coherent amplitude is many orders of magnitude above the noise.

use num_complex::Complex64;

use super::{InputState, ModeSpec, SchwingerMoments};

type C = Complex64;

const ZERO: C = C::new(0.0, 0.0);
const ONE: C = C::new(1.0, 0.0);

/// Centered normal-ordered statistics of one mode.
#[derive(Debug, Clone, Copy)]
pub(crate) enum ModeStats {
    /// `s = ⟨δa†δa⟩`, `mu = ⟨δa²⟩`.
    Gaussian { mean: C, s: f64, mu: C },
    Fock { n: u32 },
}

impl ModeStats {
    pub(crate) fn of(spec: &ModeSpec) -> Self {
        match *spec {
            ModeSpec::Fock { n } => ModeStats::Fock { n },
            _ => {
                let r = spec.squeeze_mag();
                let mu = -C::from_polar(r.sinh() * r.cosh(), spec.squeeze_phase());
                ModeStats::Gaussian { mean: spec.mean_field(), s: r.sinh().powi(2), mu }
            }
        }
    }

    pub(crate) fn mean(&self) -> C {
        match *self {
            ModeStats::Gaussian { mean, .. } => mean,
            ModeStats::Fock { .. } => ZERO,
        }
    }

    /// `⟨δa†^p δa^q⟩`.
    pub(crate) fn central(&self, p: usize, q: usize) -> C {
        match *self {
            ModeStats::Fock { n } => {
                if p != q || p > n as usize {
                    return ZERO;
                }
                let falling: f64 = (0..p).map(|k| (n as usize - k) as f64).product();
                C::new(falling, 0.0)
            }
            ModeStats::Gaussian { s, mu, .. } => {
                // Wick pairings of a zero-mean Gaussian state.
                let s = C::new(s, 0.0);
                match (p, q) {
                    (0, 0) => ONE,
                    (1, 1) => s,
                    (0, 2) => mu,
                    (2, 0) => mu.conj(),
                    (2, 2) => mu.norm_sqr() + 2.0 * s * s,
                    (1, 3) => 3.0 * s * mu,
                    (3, 1) => 3.0 * s * mu.conj(),
                    (0, 4) => 3.0 * mu * mu,
                    (4, 0) => 3.0 * mu.conj() * mu.conj(),
                    _ if (p + q) % 2 == 1 => ZERO,
                    _ => unreachable!("Gaussian moment of order {} not needed", p + q),
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Ladder {
    mode: usize,
    dagger: bool,
}

/// Polynomial in the fluctuation operators `δa₀, δa₀†, δa₁, δa₁†`.
#[derive(Debug, Clone, Default)]
struct Poly {
    terms: Vec<(C, Vec<Ladder>)>,
}

impl Poly {
    fn mul(&self, other: &Poly) -> Poly {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ca, wa) in &self.terms {
            for (cb, wb) in &other.terms {
                let mut w = wa.clone();
                w.extend_from_slice(wb);
                terms.push((ca * cb, w));
            }
        }
        Poly { terms }
    }
}

/// `Σ h[i][j] a_i† a_j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Bilinear {
    pub h: [[C; 2]; 2],
}

impl Bilinear {
    pub(crate) fn jx() -> Self {
        let half = C::new(0.5, 0.0);
        Self { h: [[ZERO, half], [half, ZERO]] }
    }

    pub(crate) fn jy() -> Self {
        Self { h: [[ZERO, C::new(0.0, -0.5)], [C::new(0.0, 0.5), ZERO]] }
    }

    pub(crate) fn jz() -> Self {
        Self { h: [[C::new(0.5, 0.0), ZERO], [ZERO, C::new(-0.5, 0.0)]] }
    }

    pub(crate) fn n() -> Self {
        Self { h: [[ONE, ZERO], [ZERO, ONE]] }
    }
}

/// Normal-orders a single-mode word and returns its expectation.
fn word_expectation(word: &[bool], stats: &ModeStats) -> C {
    // Find the first annihilator standing left of a creator: a a† = a† a + 1.
    for k in 0..word.len().saturating_sub(1) {
        if !word[k] && word[k + 1] {
            let mut swapped = word.to_vec();
            swapped.swap(k, k + 1);
            let mut contracted = word[..k].to_vec();
            contracted.extend_from_slice(&word[k + 2..]);
            return word_expectation(&swapped, stats) + word_expectation(&contracted, stats);
        }
    }
    let p = word.iter().filter(|d| **d).count();
    stats.central(p, word.len() - p)
}

/// Evaluates expectation values of bilinears and their products.
#[derive(Debug, Clone, Copy)]
pub(crate) struct MomentEngine {
    modes: [ModeStats; 2],
}

impl MomentEngine {
    pub(crate) fn new(state: &InputState) -> Self {
        Self { modes: [ModeStats::of(state.port0()), ModeStats::of(state.port1())] }
    }

    pub(crate) fn mode(&self, i: usize) -> &ModeStats {
        &self.modes[i]
    }

    /// Non-constant part of a bilinear after the shift `a → ⟨a⟩ + δa`.
    fn fluctuation(&self, b: &Bilinear) -> Poly {
        let mut terms = Vec::new();
        for i in 0..2 {
            for j in 0..2 {
                let h = b.h[i][j];
                if h == ZERO {
                    continue;
                }
                let (mi, mj) = (self.modes[i].mean(), self.modes[j].mean());
                let di = Ladder { mode: i, dagger: true };
                let dj = Ladder { mode: j, dagger: false };
                if mi != ZERO {
                    terms.push((h * mi.conj(), vec![dj]));
                }
                if mj != ZERO {
                    terms.push((h * mj, vec![di]));
                }
                terms.push((h, vec![di, dj]));
            }
        }
        Poly { terms }
    }

    fn constant(&self, b: &Bilinear) -> C {
        let mut acc = ZERO;
        for i in 0..2 {
            for j in 0..2 {
                acc += b.h[i][j] * self.modes[i].mean().conj() * self.modes[j].mean();
            }
        }
        acc
    }

    fn expect(&self, p: &Poly) -> C {
        let mut acc = ZERO;
        for (c, word) in &p.terms {
            let mut value = *c;
            for (m, stats) in self.modes.iter().enumerate() {
                let sub: Vec<bool> = word.iter().filter(|l| l.mode == m).map(|l| l.dagger).collect();
                if sub.is_empty() {
                    continue;
                }
                value *= word_expectation(&sub, stats);
                if value == ZERO {
                    break;
                }
            }
            acc += value;
        }
        acc
    }

    pub(crate) fn mean(&self, b: &Bilinear) -> C {
        self.constant(b) + self.expect(&self.fluctuation(b))
    }

    /// `⟨AB⟩ − ⟨A⟩⟨B⟩`.
    pub(crate) fn cov(&self, a: &Bilinear, b: &Bilinear) -> C {
        let (fa, fb) = (self.fluctuation(a), self.fluctuation(b));
        self.expect(&fa.mul(&fb)) - self.expect(&fa) * self.expect(&fb)
    }

    pub(crate) fn symcov(&self, a: &Bilinear, b: &Bilinear) -> f64 {
        0.5 * (self.cov(a, b) + self.cov(b, a)).re
    }

    pub(crate) fn schwinger(&self) -> SchwingerMoments {
        let (jx, jy, jz, n) = (Bilinear::jx(), Bilinear::jy(), Bilinear::jz(), Bilinear::n());
        SchwingerMoments {
            mean_jx: self.mean(&jx).re,
            mean_jy: self.mean(&jy).re,
            mean_jz: self.mean(&jz).re,
            mean_n: self.mean(&n).re,
            var_jx: self.cov(&jx, &jx).re,
            var_jy: self.cov(&jy, &jy).re,
            var_jz: self.cov(&jz, &jz).re,
            var_n: self.cov(&n, &n).re,
            symcov_xy: self.symcov(&jx, &jy),
            symcov_xz: self.symcov(&jx, &jz),
            symcov_yz: self.symcov(&jy, &jz),
            cov_jx_n: self.cov(&jx, &n).re,
            cov_jy_n: self.cov(&jy, &n).re,
            cov_jz_n: self.cov(&jz, &n).re,
        }
    }
}
