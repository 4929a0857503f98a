use nalgebra::DMatrix;

use super::{ar_correlation, normal_factor, standard_normals, RngSeed};
use crate::error::{Error, Result};
use crate::estimate::symmetrize;
use crate::lagcov::SampleMatrix;

const POWER_TOL: f64 = 1e-8;
const POWER_MAX_ITER: usize = 100_000;

/// Stationary Gaussian VAR(1): `Y_t = Φ Y_{t-1} + ε_t`, `ε_t ~ N(0, Ω)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Var1Model {
    phi: DMatrix<f64>,
    omega: DMatrix<f64>,
}

impl Var1Model {
    pub fn new(phi: DMatrix<f64>, omega: DMatrix<f64>) -> Result<Self> {
        let p = phi.nrows();
        if p == 0 || !phi.is_square() || omega.shape() != (p, p) {
            return Err(Error::model(
                "phi and omega must be square matrices of the same size",
            ));
        }
        let norm = spectral_norm(&phi);
        if norm >= 1.0 {
            return Err(Error::model(format!(
                "spectral norm of phi must be below 1, got {norm}"
            )));
        }
        if (&omega - omega.transpose()).norm() > 1e-12 * omega.norm() {
            return Err(Error::model("omega must be symmetric"));
        }
        normal_factor(&omega, "omega")?;
        Ok(Var1Model { phi, omega })
    }

    /// `Φ = ρ I_p` and `Ω` the AR correlation matrix with the given coefficient.
    pub fn scaled_identity(p: usize, rho: f64, omega_coef: f64) -> Result<Self> {
        Var1Model::new(DMatrix::identity(p, p) * rho, ar_correlation(p, omega_coef))
    }

    pub fn p(&self) -> usize {
        self.phi.nrows()
    }

    pub fn phi(&self) -> &DMatrix<f64> {
        &self.phi
    }

    pub fn omega(&self) -> &DMatrix<f64> {
        &self.omega
    }
}

/// Largest singular value, by power iteration on `MᵀM`.
pub fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    let gram = m.tr_mul(m);
    let p = gram.nrows();
    // uneven start so it is not orthogonal to the top singular vector by symmetry
    let mut v = nalgebra::DVector::from_fn(p, |i, _| 1.0 + 0.1 * i as f64);
    v /= v.norm();
    let mut estimate = 0.0;
    for _ in 0..POWER_MAX_ITER {
        let w = &gram * &v;
        let next = w.norm();
        if next == 0.0 {
            return 0.0;
        }
        v = w / next;
        if (next - estimate).abs() <= POWER_TOL * next {
            return next.sqrt();
        }
        estimate = next;
    }
    estimate.sqrt()
}

/// Solve `vec(V) = (I - Φ⊗Φ)⁻¹ vec(Ω)`.
pub fn var1_stationary_cov(m: &Var1Model) -> Result<DMatrix<f64>> {
    let p = m.p();
    let system = DMatrix::identity(p * p, p * p) - m.phi.kronecker(&m.phi);
    let rhs = nalgebra::DVector::from_column_slice(m.omega.as_slice());
    let vec_v = system
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::model("I - Φ⊗Φ is singular"))?;
    Ok(symmetrize(DMatrix::from_column_slice(
        p,
        p,
        vec_v.as_slice(),
    )))
}

/// `Φ^s V`, the lag-`s` autocovariance `Cov(Y_{t+s}, Y_t)`.
pub fn var1_autocov(m: &Var1Model, v: &DMatrix<f64>, s: usize) -> DMatrix<f64> {
    let mut out = v.clone();
    for _ in 0..s {
        out = &m.phi * out;
    }
    out
}

/// `Σ = (I - Φ)⁻¹ V + V (I - Φᵀ)⁻¹ - V`.
pub fn var1_true_sigma(m: &Var1Model) -> Result<DMatrix<f64>> {
    let p = m.p();
    let v = var1_stationary_cov(m)?;
    let inv = (DMatrix::identity(p, p) - &m.phi)
        .try_inverse()
        .ok_or_else(|| Error::model("I - Φ is singular"))?;
    let left = &inv * &v;
    Ok(symmetrize(&left + left.transpose() - v))
}

/// `Γ^(q) = -Σ_{s≥1} s^q (Φ^s V + V (Φᵀ)^s)`, truncated once a geometric bound on
/// the tail falls below `1e-12` of the running norm.
pub fn var1_gamma(m: &Var1Model, q: u32) -> Result<DMatrix<f64>> {
    if !(1..=2).contains(&q) {
        return Err(Error::param(format!("q must be 1 or 2, got {q}")));
    }
    let p = m.p();
    let v = var1_stationary_cov(m)?;
    let rho = spectral_norm(&m.phi);
    let v_norm = v.norm();
    let mut acc = DMatrix::zeros(p, p);
    let mut power = v.clone();
    for s in 1..10_000_000usize {
        power = &m.phi * power;
        let sf = s as f64;
        let weight = sf.powi(q as i32);
        acc -= (&power + power.transpose()) * weight;
        // terms are bounded by 2 s^q ρ^s ‖V‖ with ratio ρ (1 + 1/s)^q
        let bound = 2.0 * weight * rho.powi(s as i32) * v_norm;
        let ratio = rho * ((sf + 1.0) / sf).powi(q as i32);
        if bound == 0.0 {
            break;
        }
        if ratio < 1.0 && bound / (1.0 - ratio) <= 1e-12 * acc.norm() {
            break;
        }
    }
    Ok(symmetrize(acc))
}

pub fn simulate_var1(m: &Var1Model, n: usize, seed: RngSeed) -> Result<SampleMatrix> {
    if n < 2 {
        return Err(Error::param(format!("need n >= 2, got {n}")));
    }
    let p = m.p();
    let v = var1_stationary_cov(m)?;
    let start = normal_factor(&v, "stationary covariance")?;
    let innov = normal_factor(&m.omega, "omega")?;
    let mut rng = seed.rng();
    let mut out = DMatrix::zeros(n, p);
    let mut y = &start * standard_normals(&mut rng, p);
    out.row_mut(0).copy_from(&y.transpose());
    for t in 1..n {
        y = &m.phi * y + &innov * standard_normals(&mut rng, p);
        out.row_mut(t).copy_from(&y.transpose());
    }
    SampleMatrix::new(out)
}
