//! Repairing an indefinite lugsail estimate with the eigenvalue floor.

use lugsail::psd::{adjust_psd, default_config};
use lugsail::sve::lugsail_sv_estimate;
use lugsail::windows::{WindowKind, WindowSpec};
use lugsail::SampleMatrix;
use nalgebra::{DMatrix, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn main() -> lugsail::Result<()> {
    // Short, wide, nearly collinear iid data with a large bandwidth.
    let (n, p) = (60, 6);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let base: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
    let data = DMatrix::from_fn(n, p, |t, j| {
        let e: f64 = StandardNormal.sample(&mut rng);
        base[t] + 0.05 * (j as f64 + 1.0) * e
    });
    let y = SampleMatrix::new(data)?;
    let spec = WindowSpec::balanced(WindowKind::TukeyHanning, 3)?;
    let raw = lugsail_sv_estimate(&y, &spec, 15)?;

    let cfg = default_config(n, p);
    let fixed = adjust_psd(&raw, n, &cfg)?;
    let eig = |m: &DMatrix<f64>| {
        let mut v: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
        v.sort_by(f64::total_cmp);
        v
    };
    println!("floor on the correlation scale: {:.4}", cfg.floor(n));
    println!("raw eigenvalues:      {:.5?}", eig(&raw.sigma));
    println!("adjusted eigenvalues: {:.5?}", eig(&fixed.sigma));
    println!("adjusted: {}", fixed.psd_adjusted);
    Ok(())
}
