//! Every estimator on one simulated VAR(1) path, next to the true Σ.

use lugsail::bm::{bm_estimate, lugsail_bm_estimate, weighted_bm_estimate};
use lugsail::diagnostics::det_proot;
use lugsail::processes::{simulate_var1, var1_true_sigma, RngSeed, Var1Model};
use lugsail::sve::{lugsail_sv_estimate, sv_estimate};
use lugsail::windows::{WindowKind, WindowSpec};

fn main() -> lugsail::Result<()> {
    let model = Var1Model::scaled_identity(3, 0.8, 0.5)?;
    let n = 20_000;
    let y = simulate_var1(&model, n, RngSeed::new(42, 0))?;
    let truth = var1_true_sigma(&model)?;
    let b_bm = (n as f64).sqrt() as usize;
    let b_sv = (n as f64).cbrt() as usize;

    let ests = [
        ("bm", bm_estimate(&y, b_bm)?),
        ("bm3", lugsail_bm_estimate(&y, b_bm, 3, 0.5)?),
        ("wbm th", weighted_bm_estimate(&y, &WindowSpec::base(WindowKind::TukeyHanning), b_bm)?),
        ("bt", sv_estimate(&y, WindowKind::Bartlett, b_sv)?),
        ("bt3", lugsail_sv_estimate(&y, &WindowSpec::balanced(WindowKind::Bartlett, 3)?, b_sv)?),
        ("qs2", lugsail_sv_estimate(&y, &WindowSpec::zero_bias(WindowKind::QuadraticSpectral, 2)?, b_sv)?),
    ];
    let truth_det = det_proot(&ests[0].1.with_sigma(truth.clone()))?;
    println!("true det^(1/p) = {truth_det:.3}, diag = {:.3?}", truth.diagonal().as_slice());
    for (name, est) in &ests {
        println!(
            "{name:<7} b={:<4} det^(1/p) = {:>7.3}  diag = {:.3?}",
            est.b,
            det_proot(est)?,
            est.sigma.diagonal().as_slice()
        );
    }
    Ok(())
}
