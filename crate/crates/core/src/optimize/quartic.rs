//! Real roots of low-degree polynomials via companion-matrix eigenvalues.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Coefficients are ordered from the highest power down.
pub(crate) fn eval(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().fold(0.0, |acc, c| acc * t + c)
}

fn eval_c(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// `|p(t)|` scaled by the coefficient magnitude and `max(1, |t|)^deg`.
pub fn scaled_residual(coeffs: &[f64], t: f64) -> f64 {
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    let deg = coeffs.len().saturating_sub(1) as i32;
    eval(coeffs, t).abs() / (scale * t.abs().max(1.0).powi(deg))
}

/// Simultaneous iteration on all roots; used when the Schur form does not converge.
fn durand_kerner(p: &[f64]) -> Vec<Complex64> {
    let n = p.len() - 1;
    let radius = 1.0 + p[1..].iter().fold(0.0f64, |m, c| m.max((c / p[0]).abs()));
    let seed = Complex64::from_polar(0.4 * radius, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32 + 1)).collect();
    for _ in 0..500 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let (v, _) = eval_c(p, z[i]);
            let mut den = Complex64::new(p[0], 0.0);
            for j in 0..n {
                if j != i {
                    den *= z[i] - z[j];
                }
            }
            if den.norm() == 0.0 {
                continue;
            }
            let step = v / den;
            z[i] -= step;
            delta = delta.max(step.norm() / (1.0 + z[i].norm()));
        }
        if delta < 1e-15 {
            break;
        }
    }
    z
}

/// Real roots, sorted and deduplicated. Leading coefficients that are
/// negligible against the largest one lower the degree.
pub(crate) fn real_roots(coeffs: &[f64]) -> Vec<f64> {
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if scale == 0.0 {
        return Vec::new();
    }
    let first = coeffs.iter().position(|c| c.abs() > 1e-14 * scale).unwrap_or(coeffs.len());
    let p = &coeffs[first..];
    let n = p.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let mut roots: Vec<Complex64> = if n == 1 {
        vec![Complex64::new(-p[1] / p[0], 0.0)]
    } else {
        let mut m = DMatrix::<f64>::zeros(n, n);
        for j in 0..n {
            m[(0, j)] = -p[j + 1] / p[0];
        }
        for i in 1..n {
            m[(i, i - 1)] = 1.0;
        }
        match nalgebra::linalg::Schur::try_new(m, f64::EPSILON, 10_000) {
            Some(schur) => schur.complex_eigenvalues().iter().copied().collect(),
            None => durand_kerner(p),
        }
    };

    // Newton polish in the complex plane also pulls split double roots back onto the axis.
    for z in roots.iter_mut() {
        for _ in 0..80 {
            let (v, dv) = eval_c(p, *z);
            if dv.norm() == 0.0 {
                break;
            }
            let step = v / dv;
            *z -= step;
            if step.norm() <= 1e-16 * (1.0 + z.norm()) {
                break;
            }
        }
    }

    let mut real: Vec<f64> = roots
        .into_iter()
        .filter(|z| z.im.abs() < 1e-9 * (1.0 + z.re.abs()))
        .map(|z| z.re)
        .collect();
    real.sort_by(|a, b| a.total_cmp(b));
    real.dedup_by(|a, b| (*a - *b).abs() <= 1e-10 * (1.0 + b.abs()));
    real
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn known_factorizations() {
        // (t − 1)(t + 2)(t − 3)(t² + 1)
        let r = real_roots(&[1.0, -2.0, -4.0, 4.0, -5.0, 6.0]);
        assert_eq!(r.len(), 3);
        for (x, y) in r.iter().zip([-2.0, 1.0, 3.0]) {
            assert!((x - y).abs() < 1e-12);
        }
        // Double root at 1: t⁴ − 2t³ + 2t − 1 = (t − 1)³(t + 1)
        let r = real_roots(&[1.0, -2.0, 0.0, 2.0, -1.0]);
        assert!(r.iter().any(|x| (x - 1.0).abs() < 1e-5));
        assert!(r.iter().any(|x| (x + 1.0).abs() < 1e-12));
    }

    #[test]
    fn degree_drops_and_empties() {
        assert_eq!(real_roots(&[0.0, 0.0, 0.0, 2.0, -4.0]), vec![2.0]);
        assert!(real_roots(&[0.0, 0.0, 0.0, 0.0, 3.0]).is_empty());
        assert!(real_roots(&[0.0; 5]).is_empty());
        assert!(real_roots(&[1.0, 0.0, 0.0, 0.0, 1.0]).is_empty());
    }

    proptest! {
        #[test]
        fn residuals_are_small(c in proptest::array::uniform5(-10.0..10.0f64)) {
            for t in real_roots(&c) {
                prop_assert!(scaled_residual(&c, t) < 1e-9, "{:?} root {}", c, t);
            }
        }
    }
}
