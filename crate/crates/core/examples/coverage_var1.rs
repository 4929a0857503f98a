//! A small replicated coverage study of BM and lugsail BM on a VAR(1).
//!
//! `cargo run --release --example coverage_var1 -- 200` sets the replication count.

use lugsail::harness::{parse_methods, run_coverage, write_reports_csv, ExperimentConfig, ProcessModel};
use lugsail::processes::Var1Model;

fn main() -> lugsail::Result<()> {
    let reps = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100);
    let model = ProcessModel::Var1(Var1Model::scaled_identity(5, 0.9, 0.9)?);
    let cfg = ExperimentConfig::new(model, 10_000, reps, 42);
    let run = run_coverage(&cfg, &parse_methods("bm,bm2,bm3,bt,bt3")?, 0)?;
    write_reports_csv(std::io::stdout(), &run.reports)
}
