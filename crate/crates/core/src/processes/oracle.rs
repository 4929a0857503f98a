use nalgebra::DMatrix;

use crate::error::{Error, Result};

const MAX_TERMS: usize = 10_000_000;
const QUIET_RUN: usize = 10;

/// `R(0) + Σ_{s≥1} (R(s) + R(s)ᵀ)` for an analytic autocovariance, stopped once
/// ten consecutive increments are each below `tol` times the running norm.
pub fn truncated_sum_sigma<F>(autocov: F, tol: f64) -> Result<DMatrix<f64>>
where
    F: Fn(usize) -> DMatrix<f64>,
{
    let mut acc = autocov(0);
    let mut quiet = 0;
    for s in 1..=MAX_TERMS {
        let r = autocov(s);
        let inc = &r + r.transpose();
        acc += &inc;
        if inc.norm() <= tol * acc.norm() {
            quiet += 1;
            if quiet >= QUIET_RUN {
                return Ok(acc);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::model(format!(
        "autocovariance sum did not converge within {MAX_TERMS} terms"
    )))
}
