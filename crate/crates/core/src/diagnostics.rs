//! Effective sample size, confidence-region membership, determinant and bias
//! summaries, and the first-order bias / variance constants of lugsail
//! estimators.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::error::{Error, Result};
use crate::estimate::CovEstimate;
use crate::lagcov::{sample_lag_cov, SampleMatrix};

pub use crate::special::{chisq_cdf, chisq_quantile};

/// Multipliers applied to the base-window bias and variance by a lugsail window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoryConstants {
    pub bias_factor: f64,
    pub variance_factor: f64,
}

impl TheoryConstants {
    pub fn new(r: u32, c: f64, q: u32) -> Self {
        TheoryConstants {
            bias_factor: bias_factor(r, c, q),
            variance_factor: variance_factor(r, c),
        }
    }
}

/// `(1 - c r^q) / (1 - c)`.
pub fn bias_factor(r: u32, c: f64, q: u32) -> f64 {
    (1.0 - c * f64::from(r).powi(q as i32)) / (1.0 - c)
}

/// `1/r + (r - 1) / (r (1 - c)^2)`: variance of lugsail batch means relative to BM.
pub fn variance_factor(r: u32, c: f64) -> f64 {
    let r = f64::from(r);
    1.0 / r + (r - 1.0) / (r * (1.0 - c) * (1.0 - c))
}

fn cholesky(m: &DMatrix<f64>, what: &str) -> Result<Cholesky<f64, Dyn>> {
    Cholesky::new(m.clone()).ok_or_else(|| {
        Error::NotPositiveDefinite(format!("{what}; apply the PSD adjustment first"))
    })
}

fn log_det(chol: &Cholesky<f64, Dyn>) -> f64 {
    2.0 * chol
        .l_dirty()
        .diagonal()
        .iter()
        .map(|d| d.ln())
        .sum::<f64>()
}

/// `n · (det Λ̂ / det Σ̂)^{1/p}` where `Λ̂` is the sample covariance (divisor `n - 1`).
pub fn ess(y: &SampleMatrix, est: &CovEstimate) -> Result<f64> {
    let n = y.n();
    let p = y.p();
    if est.p() != p {
        return Err(Error::param(format!(
            "estimate is {}x{} but the sample has {p} components",
            est.p(),
            est.p()
        )));
    }
    let lambda = sample_lag_cov(y, 0)?.value * (n as f64 / (n as f64 - 1.0));
    let ld_lambda = log_det(&cholesky(&lambda, "sample covariance is singular")?);
    let ld_sigma = log_det(&cholesky(&est.sigma, "estimate is not positive-definite")?);
    Ok(n as f64 * ((ld_lambda - ld_sigma) / p as f64).exp())
}

/// `n (ȳ - μ₀)ᵀ Σ̂⁻¹ (ȳ - μ₀)`.
pub fn region_statistic(
    ybar: &DVector<f64>,
    mu0: &DVector<f64>,
    est: &CovEstimate,
    n: usize,
) -> Result<f64> {
    if ybar.len() != est.p() || mu0.len() != est.p() {
        return Err(Error::param(
            "dimension mismatch between mean vectors and estimate",
        ));
    }
    let chol = cholesky(&est.sigma, "estimate is singular or indefinite")?;
    let d = ybar - mu0;
    let solved = chol.solve(&d);
    Ok(n as f64 * d.dot(&solved))
}

/// Whether `μ₀` lies in the asymptotic `1 - α` chi-square confidence ellipsoid.
pub fn region_contains(
    ybar: &DVector<f64>,
    mu0: &DVector<f64>,
    est: &CovEstimate,
    n: usize,
    alpha: f64,
) -> Result<bool> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::param(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    let stat = region_statistic(ybar, mu0, est, n)?;
    Ok(stat <= chisq_quantile(est.p(), 1.0 - alpha)?)
}

/// `det(Σ̂)^{1/p}`, via the log-determinant.
pub fn det_proot(est: &CovEstimate) -> Result<f64> {
    let chol = cholesky(&est.sigma, "estimate is not positive-definite")?;
    Ok((log_det(&chol) / est.p() as f64).exp())
}

/// `(1/p) Σ_i (Σ̂_ii - Σ_ii) / Σ_ii`; keeps the sign of the bias.
pub fn relative_diag_bias(est: &CovEstimate, truth: &DMatrix<f64>) -> Result<f64> {
    let p = est.p();
    if truth.nrows() != p || truth.ncols() != p {
        return Err(Error::param("truth and estimate differ in dimension"));
    }
    let mut total = 0.0;
    for i in 0..p {
        let t = truth[(i, i)];
        if t == 0.0 {
            return Err(Error::domain(format!(
                "true variance of component {} is zero",
                i + 1
            )));
        }
        total += (est.sigma[(i, i)] - t) / t;
    }
    Ok(total / p as f64)
}
