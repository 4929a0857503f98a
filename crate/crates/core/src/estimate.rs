use std::fmt;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::windows::WindowSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Spectral variance (weighted sum of lag autocovariances).
    Sv,
    /// Non-overlapping batch means, optionally lugsail.
    Bm,
    /// Weighted batch means with an arbitrary window.
    Wbm,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Sv => "sv",
            Method::Bm => "bm",
            Method::Wbm => "wbm",
        })
    }
}

/// An estimate of the time-average covariance matrix Σ.
#[derive(Debug, Clone, PartialEq)]
pub struct CovEstimate {
    pub sigma: DMatrix<f64>,
    pub method: Method,
    pub window: WindowSpec,
    /// Bandwidth (SV) or batch size (BM).
    pub b: usize,
    pub psd_adjusted: bool,
}

impl CovEstimate {
    pub(crate) fn new(sigma: DMatrix<f64>, method: Method, window: WindowSpec, b: usize) -> Self {
        CovEstimate {
            sigma: symmetrize(sigma),
            method,
            window,
            b,
            psd_adjusted: false,
        }
    }

    pub fn p(&self) -> usize {
        self.sigma.nrows()
    }

    /// Same metadata, different matrix. Used for sandwich transforms such as `M Σ̂ M`.
    pub fn with_sigma(&self, sigma: DMatrix<f64>) -> Self {
        CovEstimate {
            sigma: symmetrize(sigma),
            ..self.clone()
        }
    }
}

pub(crate) fn symmetrize(m: DMatrix<f64>) -> DMatrix<f64> {
    let t = m.transpose();
    (m + t) * 0.5
}

/// `long / (1 - c) - short · c / (1 - c)`.
pub(crate) fn lugsail_combine(
    long: &DMatrix<f64>,
    short: &DMatrix<f64>,
    window: &WindowSpec,
) -> DMatrix<f64> {
    let (a, b) = window.coefficients();
    long * a - short * b
}
