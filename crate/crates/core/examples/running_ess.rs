//! Running ESS/n of BM and lugsail BM on a slowly mixing VAR(1).

use lugsail::harness::{running_ess, MethodSpec};
use lugsail::processes::{simulate_var1, RngSeed, Var1Model};

fn main() -> lugsail::Result<()> {
    let model = Var1Model::scaled_identity(5, 0.9, 0.9)?;
    let y = simulate_var1(&model, 50_000, RngSeed::new(42, 0))?;
    let bm: MethodSpec = "bm".parse()?;
    let bm3: MethodSpec = "bm3".parse()?;
    let a = running_ess(&y, &bm, None, 10)?;
    let b = running_ess(&y, &bm3, None, 10)?;
    println!("n,bm,bm3");
    for (p, q) in a.iter().zip(&b) {
        println!("{},{:.4},{:.4}", p.n, p.ess_per_n, q.ess_per_n);
    }
    Ok(())
}
