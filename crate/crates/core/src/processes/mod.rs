//! Simulators with closed-form time-average covariance, used to validate the
//! estimators.
//!
//! * [`var1`]: `Y_t = Φ Y_{t-1} + ε_t`, `ε_t ~ N(0, Ω)`.
//! * [`ar1homo`]: regression with independent AR(1) regressors and errors; the
//!   target process is `v_t = x_t û_t` from an OLS fit.
//!
//! Both simulators start from the stationary law and draw from a counter-based
//! stream selected by [`RngSeed`], so replications are reproducible and can run
//! in any order.

pub mod ar1homo;
pub mod oracle;
pub mod rng;
pub mod var1;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub use ar1homo::{
    ar1homo_true_sigma, ols_v_process, simulate_ar1_homo, Ar1HomoModel, Ar1HomoSample, OlsVProcess,
};
pub use oracle::truncated_sum_sigma;
pub use rng::RngSeed;
pub use var1::{
    simulate_var1, spectral_norm, var1_autocov, var1_gamma, var1_stationary_cov, var1_true_sigma,
    Var1Model,
};

/// `p × p` matrix with entries `coef^|i-j|`.
pub fn ar_correlation(p: usize, coef: f64) -> DMatrix<f64> {
    DMatrix::from_fn(p, p, |i, j| coef.powi(i.abs_diff(j) as i32))
}

/// Lower Cholesky factor of a covariance used to colour standard normal draws.
pub(crate) fn normal_factor(cov: &DMatrix<f64>, what: &str) -> Result<DMatrix<f64>> {
    Cholesky::<f64, Dyn>::new(cov.clone())
        .map(|c| c.l())
        .ok_or_else(|| Error::model(format!("{what} is not positive-definite")))
}

pub(crate) fn standard_normals<R: Rng>(rng: &mut R, p: usize) -> DVector<f64> {
    DVector::from_iterator(p, (0..p).map(|_| rng.sample::<f64, _>(StandardNormal)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ar_correlation_entries() {
        let m = ar_correlation(3, 0.5);
        assert_eq!(m[(0, 0)], 1.0);
        assert_eq!(m[(0, 2)], 0.25);
        assert_eq!(m[(2, 1)], 0.5);
        assert_eq!(m, m.transpose());
    }
}
