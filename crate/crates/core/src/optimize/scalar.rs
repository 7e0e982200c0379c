//! One- and two-dimensional minimizers used by the optimizers.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a minimum of a unimodal `f` on `[a, b]`.
pub(crate) fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Bisection for a sign change of `g` on `[a, b]`; assumes `g(a)` and `g(b)` differ in sign.
pub(crate) fn bisect(g: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let ga = g(a);
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        let m = 0.5 * (a + b);
        let gm = g(m);
        if gm == 0.0 {
            return m;
        }
        if (gm > 0.0) == (ga > 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Dense scan of `f` on `n` points of `[a, b]` followed by golden refinement
/// around the best sample.
pub(crate) fn scan_min(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize, tol: f64) -> f64 {
    let h = (b - a) / (n - 1) as f64;
    let mut best = (f64::INFINITY, 0usize);
    for k in 0..n {
        let v = f(a + k as f64 * h);
        if v < best.0 {
            best = (v, k);
        }
    }
    let k = best.1;
    let lo = a + k.saturating_sub(1) as f64 * h;
    let hi = a + (k + 1).min(n - 1) as f64 * h;
    let x = golden_min(&f, lo, hi, tol);
    let xk = a + k as f64 * h;
    if f(x) <= best.0 {
        x
    } else {
        xk
    }
}

/// Nelder–Mead simplex in two dimensions.
pub(crate) fn nelder_mead(f: impl Fn([f64; 2]) -> f64, x0: [f64; 2], step: f64, max_iter: usize) -> [f64; 2] {
    let mut s = [x0, [x0[0] + step, x0[1]], [x0[0], x0[1] + step]];
    let mut v = s.map(&f);
    let comb = |a: [f64; 2], b: [f64; 2], t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
    for _ in 0..max_iter {
        let mut idx = [0, 1, 2];
        idx.sort_by(|&i, &j| v[i].total_cmp(&v[j]));
        s = idx.map(|i| s[i]);
        v = idx.map(|i| v[i]);
        let size = (s[1][0] - s[0][0]).abs().max((s[1][1] - s[0][1]).abs())
            .max((s[2][0] - s[0][0]).abs())
            .max((s[2][1] - s[0][1]).abs());
        if size < 1e-13 {
            break;
        }
        let centroid = [0.5 * (s[0][0] + s[1][0]), 0.5 * (s[0][1] + s[1][1])];
        let xr = comb(centroid, s[2], -1.0);
        let fr = f(xr);
        if fr < v[0] {
            let xe = comb(centroid, s[2], -2.0);
            let fe = f(xe);
            if fe < fr {
                s[2] = xe;
                v[2] = fe;
            } else {
                s[2] = xr;
                v[2] = fr;
            }
        } else if fr < v[1] {
            s[2] = xr;
            v[2] = fr;
        } else {
            let xc = if fr < v[2] { comb(centroid, xr, 0.5) } else { comb(centroid, s[2], 0.5) };
            let fc = f(xc);
            if fc < v[2].min(fr) {
                s[2] = xc;
                v[2] = fc;
            } else {
                for i in 1..3 {
                    s[i] = comb(s[0], s[i], 0.5);
                    v[i] = f(s[i]);
                }
            }
        }
    }
    let best = (0..3).min_by(|&i, &j| v[i].total_cmp(&v[j])).unwrap();
    s[best]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_vertex() {
        let x = golden_min(|x| (x - 0.3).powi(2), -1.0, 2.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-9);
    }

    #[test]
    fn bisection_root() {
        let x = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14);
        assert!((x - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn scan_handles_endpoint_minimum() {
        let x = scan_min(|x| x, 0.0, 1.0, 101, 1e-12);
        assert!(x.abs() < 1e-10);
    }

    #[test]
    fn nelder_mead_rosenbrock() {
        let x = nelder_mead(|p| (1.0 - p[0]).powi(2) + 100.0 * (p[1] - p[0] * p[0]).powi(2), [-1.0, 1.0], 0.5, 5000);
        assert!((x[0] - 1.0).abs() < 1e-6 && (x[1] - 1.0).abs() < 1e-6, "{x:?}");
    }
}
