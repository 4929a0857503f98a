//! HAC standard errors for OLS with autocorrelated regressors and errors.

use lugsail::processes::{ar1homo_true_sigma, ols_v_process, simulate_ar1_homo, Ar1HomoModel, RngSeed};
use lugsail::sve::{lugsail_sv_estimate, sv_estimate};
use lugsail::windows::{WindowKind, WindowSpec};
use nalgebra::DMatrix;

fn main() -> lugsail::Result<()> {
    let model = Ar1HomoModel::with_ar_correlation(3, 0.7, 0.7, 0.5, 1.0)?;
    let n = 2000;
    let sample = simulate_ar1_homo(&model, n, RngSeed::new(42, 0))?;
    let fit = ols_v_process(&sample.x, &sample.y)?;
    let b = (n as f64).cbrt() as usize;

    let se = |omega: &DMatrix<f64>| {
        let cov = &fit.m * omega * &fit.m / n as f64;
        cov.diagonal().map(f64::sqrt)
    };
    println!("beta_hat  = {:.4?}", fit.beta_hat.as_slice());
    println!("true SE   = {:.4?}", se(&ar1homo_true_sigma(&model)).as_slice());
    let bt = sv_estimate(&fit.v, WindowKind::Bartlett, b)?;
    println!("BT SE     = {:.4?}", se(&bt.sigma).as_slice());
    let bt3 = lugsail_sv_estimate(&fit.v, &WindowSpec::balanced(WindowKind::Bartlett, 3)?, b)?;
    println!("BT3 SE    = {:.4?}", se(&bt3.sigma).as_slice());
    Ok(())
}
