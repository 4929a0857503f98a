use nalgebra::{Cholesky, DMatrix, DVector};

use super::{ar_correlation, normal_factor, standard_normals, RngSeed};
use crate::error::{Error, Result};
use crate::estimate::symmetrize;
use crate::lagcov::SampleMatrix;

/// Regression `y_t = x_tᵀβ + u_t` with `β = 0`, where
/// `x_t = ρ_x x_{t-1} + α_t`, `α_t ~ N(0, W)` and
/// `u_t = ρ_u u_{t-1} + ε_t`, `ε_t ~ N(0, w)` are independent.
#[derive(Debug, Clone, PartialEq)]
pub struct Ar1HomoModel {
    rho_x: f64,
    rho_u: f64,
    w_mat: DMatrix<f64>,
    w: f64,
}

impl Ar1HomoModel {
    pub fn new(rho_x: f64, rho_u: f64, w_mat: DMatrix<f64>, w: f64) -> Result<Self> {
        if !(rho_x.abs() < 1.0) || !(rho_u.abs() < 1.0) {
            return Err(Error::model(format!(
                "autoregressive coefficients must lie in (-1, 1), got rho_x = {rho_x}, rho_u = {rho_u}"
            )));
        }
        if !(w > 0.0 && w.is_finite()) {
            return Err(Error::model(format!(
                "error innovation variance must be positive, got {w}"
            )));
        }
        if w_mat.nrows() == 0 || !w_mat.is_square() {
            return Err(Error::model(
                "regressor innovation covariance must be square",
            ));
        }
        normal_factor(&w_mat, "regressor innovation covariance")?;
        Ok(Ar1HomoModel {
            rho_x,
            rho_u,
            w_mat,
            w,
        })
    }

    /// `W` the AR correlation matrix with coefficient `w_coef`.
    pub fn with_ar_correlation(
        p: usize,
        rho_x: f64,
        rho_u: f64,
        w_coef: f64,
        w: f64,
    ) -> Result<Self> {
        Ar1HomoModel::new(rho_x, rho_u, ar_correlation(p, w_coef), w)
    }

    pub fn p(&self) -> usize {
        self.w_mat.nrows()
    }

    pub fn rho_x(&self) -> f64 {
        self.rho_x
    }

    pub fn rho_u(&self) -> f64 {
        self.rho_u
    }

    /// `Λ = W / (1 - ρ_x²)`.
    pub fn regressor_cov(&self) -> DMatrix<f64> {
        &self.w_mat / (1.0 - self.rho_x * self.rho_x)
    }

    /// `λ = w / (1 - ρ_u²)`.
    pub fn error_var(&self) -> f64 {
        self.w / (1.0 - self.rho_u * self.rho_u)
    }

    /// `Cov(v_{t+s}, v_t)` for `v_t = x_t u_t` at the true `β`.
    pub fn v_autocov(&self, s: usize) -> DMatrix<f64> {
        let decay = (self.rho_x * self.rho_u).powi(s as i32);
        self.regressor_cov() * (self.error_var() * decay)
    }
}

/// `Σ = λΛ + λ(Λ + Λᵀ) ρ_u ρ_x / (1 - ρ_u ρ_x)`.
pub fn ar1homo_true_sigma(m: &Ar1HomoModel) -> DMatrix<f64> {
    let lambda = m.regressor_cov();
    let lam = m.error_var();
    let rr = m.rho_u * m.rho_x;
    symmetrize(&lambda * lam + (&lambda + lambda.transpose()) * (lam * rr / (1.0 - rr)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ar1HomoSample {
    /// `n × p` regressors.
    pub x: DMatrix<f64>,
    pub y: DVector<f64>,
}

pub fn simulate_ar1_homo(m: &Ar1HomoModel, n: usize, seed: RngSeed) -> Result<Ar1HomoSample> {
    let p = m.p();
    if n < p + 2 {
        return Err(Error::param(format!(
            "need n >= p + 2 = {}, got {n}",
            p + 2
        )));
    }
    let innov = normal_factor(&m.w_mat, "regressor innovation covariance")?;
    let x_scale = 1.0 / (1.0 - m.rho_x * m.rho_x).sqrt();
    let sd_e = m.w.sqrt();
    let mut rng = seed.rng();

    let mut x = DMatrix::zeros(n, p);
    let mut y = DVector::zeros(n);
    let mut xt = &innov * standard_normals(&mut rng, p) * x_scale;
    let mut ut = standard_normals(&mut rng, 1)[0] * m.error_var().sqrt();
    for t in 0..n {
        if t > 0 {
            xt = &xt * m.rho_x + &innov * standard_normals(&mut rng, p);
            ut = m.rho_u * ut + sd_e * standard_normals(&mut rng, 1)[0];
        }
        x.row_mut(t).copy_from(&xt.transpose());
        // β = 0
        y[t] = ut;
    }
    Ok(Ar1HomoSample { x, y })
}

/// OLS fit and its score process `v_t = x_t û_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct OlsVProcess {
    pub v: SampleMatrix,
    pub beta_hat: DVector<f64>,
    /// `(n⁻¹ Σ x_t x_tᵀ)⁻¹`.
    pub m: DMatrix<f64>,
}

pub fn ols_v_process(x: &DMatrix<f64>, y: &DVector<f64>) -> Result<OlsVProcess> {
    let n = x.nrows();
    if y.len() != n {
        return Err(Error::param(format!(
            "design has {n} rows but response has {}",
            y.len()
        )));
    }
    let xtx = x.tr_mul(x);
    let chol = Cholesky::new(xtx.clone())
        .ok_or_else(|| Error::domain("singular design: XᵀX is not invertible"))?;
    let beta_hat = chol.solve(&x.tr_mul(y));
    let resid = y - x * &beta_hat;
    let mut v = x.clone();
    for (t, r) in resid.iter().enumerate() {
        v.row_mut(t).scale_mut(*r);
    }
    let m = symmetrize(chol.inverse() * n as f64);
    Ok(OlsVProcess {
        v: SampleMatrix::new(v)?,
        beta_hat,
        m,
    })
}
