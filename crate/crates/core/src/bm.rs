//! Batch-means estimators.
//!
//! * [`bm_estimate`]: classical non-overlapping batch means,
//!   `b / (a - 1) · Σ_l (Ȳ_l(b) - Ȳ)(Ȳ_l(b) - Ȳ)ᵀ`.
//! * [`weighted_bm_estimate`]: batch means over every batch size `s ≤ b`,
//!   weighted by `s² Δ₂(s)` where `Δ₂` is the second difference of the window.
//!   This is the general reference path; it costs `O(n p b)`.
//! * [`lugsail_bm_estimate`]: the lugsail Bartlett case, which collapses to two
//!   ordinary batch-means passes.
//!
//! Observations past the last full batch are dropped from the batch means but
//! still enter the grand mean `Ȳ`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::estimate::{lugsail_combine, CovEstimate, Method};
use crate::lagcov::{sample_mean, SampleMatrix};
use crate::windows::{second_difference, WindowKind, WindowSpec, DELTA2_ZERO};

/// Non-overlapping batch means of size `size`; `means` is `a × p`.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchMeans {
    pub size: usize,
    pub means: DMatrix<f64>,
}

impl BatchMeans {
    pub fn count(&self) -> usize {
        self.means.nrows()
    }
}

pub fn batch_means(y: &SampleMatrix, s: usize) -> Result<BatchMeans> {
    if s < 1 {
        return Err(Error::param("batch size must be at least 1"));
    }
    let a = y.n() / s;
    if a < 2 {
        return Err(Error::param(format!(
            "batch size {s} leaves {a} batch(es) of {} observations; need at least 2",
            y.n()
        )));
    }
    let p = y.p();
    let inv = 1.0 / s as f64;
    let mut means = DMatrix::zeros(a, p);
    for j in 0..p {
        let col = y.column(j);
        for (l, chunk) in col.chunks_exact(s).take(a).enumerate() {
            means[(l, j)] = chunk.iter().sum::<f64>() * inv;
        }
    }
    Ok(BatchMeans { size: s, means })
}

/// `Σ_l (Ȳ_l - Ȳ)(Ȳ_l - Ȳ)ᵀ / (a - 1)`.
fn batch_scatter(bm: &BatchMeans, grand: &DVector<f64>) -> DMatrix<f64> {
    let a = bm.count();
    let p = bm.means.ncols();
    let mut dev = bm.means.clone();
    for j in 0..p {
        dev.column_mut(j).add_scalar_mut(-grand[j]);
    }
    let mut out = dev.tr_mul(&dev);
    out /= (a - 1) as f64;
    out
}

fn bm_sigma(y: &SampleMatrix, b: usize, grand: &DVector<f64>) -> Result<DMatrix<f64>> {
    let bm = batch_means(y, b)?;
    Ok(batch_scatter(&bm, grand) * b as f64)
}

pub fn bm_estimate(y: &SampleMatrix, b: usize) -> Result<CovEstimate> {
    let grand = sample_mean(y);
    Ok(CovEstimate::new(
        bm_sigma(y, b, &grand)?,
        Method::Bm,
        WindowSpec::base(WindowKind::Bartlett),
        b,
    ))
}

/// Weighted batch means with an arbitrary (possibly lugsail) window, summing
/// over every batch size `s = 1..=b` directly.
pub fn weighted_bm_estimate(y: &SampleMatrix, spec: &WindowSpec, b: usize) -> Result<CovEstimate> {
    if b < 1 || y.n() / b < 2 {
        return Err(Error::param(format!(
            "batch size {b} leaves fewer than 2 batches of {} observations",
            y.n()
        )));
    }
    let grand = sample_mean(y);
    let p = y.p();
    let mut sigma = DMatrix::zeros(p, p);
    for s in 1..=b {
        let d2 = second_difference(spec, s, b)?;
        if d2.abs() <= DELTA2_ZERO {
            continue;
        }
        let bm = batch_means(y, s)
            .map_err(|_| Error::param(format!("batch size s = {s} has fewer than 2 batches")))?;
        let weight = (s * s) as f64 * d2;
        sigma += batch_scatter(&bm, &grand) * weight;
    }
    Ok(CovEstimate::new(sigma, Method::Wbm, *spec, b))
}

/// Lugsail batch means, `Σ̂_b / (1 - c) - c / (1 - c) · Σ̂_{⌊b/r⌋}`.
pub fn lugsail_bm_estimate(y: &SampleMatrix, b: usize, r: u32, c: f64) -> Result<CovEstimate> {
    let spec = WindowSpec::new(WindowKind::Bartlett, r, c)?;
    if spec.is_base() {
        let mut est = bm_estimate(y, b)?;
        est.window = spec;
        return Ok(est);
    }
    let short = b / r as usize;
    if short == 0 {
        return Err(Error::param(format!(
            "batch size too small for lugsail ratio r: b = {b}, r = {r}"
        )));
    }
    let grand = sample_mean(y);
    let long = bm_sigma(y, b, &grand)?;
    let short = bm_sigma(y, short, &grand)?;
    Ok(CovEstimate::new(
        lugsail_combine(&long, &short, &spec),
        Method::Bm,
        spec,
        b,
    ))
}
