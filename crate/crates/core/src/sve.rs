//! Spectral-variance estimators.
//!
//! `Σ̇_{k,b} = Σ_{|s| < n} k(s/b) R̂(s)`, and the lugsail version built as the
//! linear combination `Σ̇_{k,b} / (1 - c) - c / (1 - c) · Σ̇_{k,⌊b/r⌋}`.
//!
//! Truncated windows stop the lag sum at `s < b`; the quadratic-spectral window
//! runs over every available lag. Each `R̂(s)` is computed once and shared by
//! both bandwidths of a lugsail estimate.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::estimate::{lugsail_combine, CovEstimate, Method};
use crate::lagcov::{Centered, SampleMatrix};
use crate::windows::{WindowKind, WindowSpec};

pub fn sv_estimate(y: &SampleMatrix, kind: WindowKind, b: usize) -> Result<CovEstimate> {
    check_bandwidth(y, b)?;
    let centered = Centered::new(y);
    let mut sums = weighted_lag_sums(&centered, y, kind, &[b])?;
    Ok(CovEstimate::new(
        sums.pop().expect("one bandwidth"),
        Method::Sv,
        WindowSpec::base(kind),
        b,
    ))
}

pub fn lugsail_sv_estimate(y: &SampleMatrix, spec: &WindowSpec, b: usize) -> Result<CovEstimate> {
    check_bandwidth(y, b)?;
    if spec.is_base() {
        let mut est = sv_estimate(y, spec.kind, b)?;
        est.window = *spec;
        return Ok(est);
    }
    let short = b / spec.r as usize;
    if short == 0 {
        return Err(Error::param(format!(
            "bandwidth too small for lugsail ratio r: b = {b}, r = {}",
            spec.r
        )));
    }
    let centered = Centered::new(y);
    let sums = weighted_lag_sums(&centered, y, spec.kind, &[b, short])?;
    Ok(CovEstimate::new(
        lugsail_combine(&sums[0], &sums[1], spec),
        Method::Sv,
        *spec,
        b,
    ))
}

fn check_bandwidth(y: &SampleMatrix, b: usize) -> Result<()> {
    if b < 1 || b >= y.n() {
        return Err(Error::param(format!(
            "bandwidth must satisfy 1 <= b <= n - 1 = {}, got {b}",
            y.n() - 1
        )));
    }
    Ok(())
}

/// Largest lag with a possibly nonzero weight at bandwidth `b`.
fn max_lag(kind: WindowKind, b: usize, n: usize) -> usize {
    if kind.is_truncated() {
        b - 1
    } else {
        n - 1
    }
}

/// `Σ_s k(s/b) R̂(s)` for each bandwidth, sharing the lag computations.
fn weighted_lag_sums(
    centered: &Centered,
    y: &SampleMatrix,
    kind: WindowKind,
    bandwidths: &[usize],
) -> Result<Vec<DMatrix<f64>>> {
    let p = y.p();
    let top = bandwidths
        .iter()
        .map(|&b| max_lag(kind, b, y.n()))
        .max()
        .unwrap_or(0);
    let mut sums = vec![DMatrix::zeros(p, p); bandwidths.len()];
    for s in 0..=top {
        let r = centered.lag_cov(s)?;
        let both = if s == 0 { r } else { &r + r.transpose() };
        for (acc, &b) in sums.iter_mut().zip(bandwidths) {
            if s > max_lag(kind, b, y.n()) {
                continue;
            }
            let w = kind.weight(s as f64 / b as f64);
            if w != 0.0 {
                *acc += &both * w;
            }
        }
    }
    Ok(sums)
}
