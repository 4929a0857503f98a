//! Positive-definiteness repair by eigenvalue flooring on the correlation scale.
//!
//! With `V̂ = diag(Σ̂)` and `Ĉ = V̂^{-1/2} Σ̂ V̂^{-1/2} = P D Pᵀ`, each eigenvalue is
//! raised to at least `ε n^{-u}` and the matrix is rebuilt as
//! `V̂^{1/2} P D⁺ Pᵀ V̂^{1/2}`.
//!
//! Flooring inflates the diagonal, so the rebuilt matrix's own correlation
//! eigenvalues can sit slightly below the floor again. The step is repeated
//! until it is a fixed point, which makes [`adjust_psd`] idempotent. Every
//! pass adds a PSD term, so the result never drops below the first pass.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::estimate::{symmetrize, CovEstimate};

/// An eigenvalue counts as floored only when below `floor · (1 - FLOOR_SLACK)`.
const FLOOR_SLACK: f64 = 1e-12;
const MAX_PASSES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdConfig {
    pub eps: f64,
    pub u: f64,
}

impl PsdConfig {
    pub fn new(eps: f64, u: f64) -> Result<Self> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::param(format!(
                "psd floor scale must be positive, got {eps}"
            )));
        }
        if !(u > 0.0 && u <= 1.0) {
            return Err(Error::param(format!(
                "psd decay exponent must lie in (0, 1], got {u}"
            )));
        }
        Ok(PsdConfig { eps, u })
    }

    /// `ε n^{-u}`.
    pub fn floor(&self, n: usize) -> f64 {
        self.eps * (n as f64).powf(-self.u)
    }
}

/// `ε = sqrt(log(n) / p)`, `u = 9/10`.
pub fn default_config(n: usize, p: usize) -> PsdConfig {
    PsdConfig {
        eps: default_eps(n as f64, p),
        u: 0.9,
    }
}

fn default_eps(n: f64, p: usize) -> f64 {
    (n.ln() / p as f64).sqrt()
}

pub fn adjust_psd(est: &CovEstimate, n: usize, cfg: &PsdConfig) -> Result<CovEstimate> {
    let floor = cfg.floor(n);
    let mut sigma = symmetrize(est.sigma.clone());
    if let Some(i) = (0..sigma.nrows()).find(|&i| !(sigma[(i, i)] > 0.0)) {
        return Err(Error::domain(format!(
            "univariate variance estimate not positive (component {}: {})",
            i + 1,
            sigma[(i, i)]
        )));
    }
    let mut adjusted = false;
    for _ in 0..MAX_PASSES {
        match floor_once(&sigma, floor) {
            Some(next) => {
                sigma = next;
                adjusted = true;
            }
            None => break,
        }
    }
    let mut out = est.with_sigma(sigma);
    out.psd_adjusted = est.psd_adjusted || adjusted;
    Ok(out)
}

/// One flooring pass, or `None` when every correlation eigenvalue clears the floor.
fn floor_once(sigma: &DMatrix<f64>, floor: f64) -> Option<DMatrix<f64>> {
    let p = sigma.nrows();
    let scale = DVector::from_iterator(p, (0..p).map(|i| sigma[(i, i)].sqrt()));
    let corr = symmetrize(DMatrix::from_fn(p, p, |i, j| {
        sigma[(i, j)] / (scale[i] * scale[j])
    }));
    let eig = SymmetricEigen::new(corr);
    let threshold = floor * (1.0 - FLOOR_SLACK);
    if eig.eigenvalues.iter().all(|&d| d >= threshold) {
        return None;
    }
    let floored = eig.eigenvalues.map(|d| d.max(floor));
    let p_mat = &eig.eigenvectors;
    let rebuilt = p_mat * DMatrix::from_diagonal(&floored) * p_mat.transpose();
    Some(symmetrize(DMatrix::from_fn(p, p, |i, j| {
        rebuilt[(i, j)] * scale[i] * scale[j]
    })))
}
