#![allow(dead_code)]

use std::f64::consts::PI;

use lugsail::windows::{eval_lugsail, WindowKind, WindowSpec};
use lugsail::SampleMatrix;
use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn gaussian(n: usize, p: usize, seed: u64) -> SampleMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = DMatrix::from_fn(n, p, |_, _| StandardNormal.sample(&mut rng));
    SampleMatrix::new(data).unwrap()
}

/// An AR(1) series per column, so lag covariances are not negligible.
pub fn correlated(n: usize, p: usize, phi: f64, seed: u64) -> SampleMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut data = DMatrix::zeros(n, p);
    for j in 0..p {
        let mut x = 0.0;
        for t in 0..n {
            let e: f64 = StandardNormal.sample(&mut rng);
            x = phi * x + e;
            data[(t, j)] = x + j as f64;
        }
    }
    SampleMatrix::new(data).unwrap()
}

pub fn base_window(kind: WindowKind, x: f64) -> f64 {
    let x = x.abs();
    match kind {
        WindowKind::Bartlett => (1.0 - x).max(0.0),
        WindowKind::TukeyHanning if x < 1.0 => (1.0 + (PI * x).cos()) / 2.0,
        WindowKind::TukeyHanning => 0.0,
        WindowKind::QuadraticSpectral if x == 0.0 => 1.0,
        WindowKind::QuadraticSpectral => {
            let a = 6.0 * PI * x / 5.0;
            25.0 / (12.0 * PI * PI * x * x) * (a.sin() / a - a.cos())
        }
    }
}

pub fn lugsail_window(kind: WindowKind, r: u32, c: f64, x: f64) -> f64 {
    (base_window(kind, x) - c * base_window(kind, r as f64 * x)) / (1.0 - c)
}

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Adaptive Simpson quadrature on `[a, b]`.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson(f, a, b, fa, fm, fb, whole, tol, 40)
}

/// `∫ k_L(x)² dx` by quadrature of the library's window.
pub fn l2sq_quadrature(spec: &WindowSpec) -> f64 {
    let f = |x: f64| eval_lugsail(spec, x).unwrap().powi(2);
    let mut breaks = vec![0.0, 1.0 / spec.r as f64, 1.0];
    if spec.kind == WindowKind::QuadraticSpectral {
        breaks.extend((2..=40).map(|i| i as f64));
        breaks.extend([100.0, 1000.0]);
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    2.0 * breaks.windows(2).map(|w| integrate(&f, w[0], w[1], 1e-13)).sum::<f64>()
}

pub fn mean(y: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_fn(y.ncols(), |j, _| y.column(j).sum() / y.nrows() as f64)
}

/// `(1/n) Σ_t (Y_t - Ȳ)(Y_{t+s} - Ȳ)ᵀ` by explicit loops.
pub fn naive_lag_cov(y: &DMatrix<f64>, s: usize) -> DMatrix<f64> {
    let (n, p) = y.shape();
    let m = mean(y);
    let mut out = DMatrix::zeros(p, p);
    for t in 0..n - s {
        for i in 0..p {
            for j in 0..p {
                out[(i, j)] += (y[(t, i)] - m[i]) * (y[(t + s, j)] - m[j]);
            }
        }
    }
    out / n as f64
}

/// `Σ_{|s| <= max_lag} w(s) R̂(s)`.
pub fn direct_sv(y: &DMatrix<f64>, w: &dyn Fn(usize) -> f64, max_lag: usize) -> DMatrix<f64> {
    let mut out = naive_lag_cov(y, 0) * w(0);
    for s in 1..=max_lag {
        let r = naive_lag_cov(y, s);
        out += (&r + r.transpose()) * w(s);
    }
    out
}

/// Weighted batch means as the explicit double sum over batch sizes and batches.
pub fn brute_weighted_bm(y: &DMatrix<f64>, k: &dyn Fn(f64) -> f64, b: usize) -> DMatrix<f64> {
    let (n, p) = y.shape();
    let grand = mean(y);
    let bf = b as f64;
    let mut out = DMatrix::zeros(p, p);
    for s in 1..=b {
        let sf = s as f64;
        let d2 = k((sf - 1.0) / bf) - 2.0 * k(sf / bf) + k((sf + 1.0) / bf);
        let a = n / s;
        let mut scatter = DMatrix::zeros(p, p);
        for l in 0..a {
            let mut bar = DVector::zeros(p);
            for t in l * s..(l + 1) * s {
                for j in 0..p {
                    bar[j] += y[(t, j)];
                }
            }
            let d = bar / sf - &grand;
            scatter += &d * d.transpose();
        }
        out += scatter * (sf * sf * d2 / (a as f64 - 1.0));
    }
    out
}

/// `‖a - b‖_F / ‖b‖_F`.
pub fn rel_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).norm() / b.norm()
}
