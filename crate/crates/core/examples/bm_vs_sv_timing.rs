//! Median wall time of lugsail BM against lugsail SV estimators.

use lugsail::harness::{parse_methods, run_bench, BenchConfig};

fn main() -> lugsail::Result<()> {
    let cfg = BenchConfig {
        ns: vec![1_000, 10_000, 100_000],
        ps: vec![5],
        methods: parse_methods("bm3,bt3,th3,qs3")?,
        reps: 3,
        qs_max_n: 10_000,
        seed: 42,
    };
    run_bench(&cfg, |row| match row.median_seconds {
        Some(t) => println!("{:<4} n={:<7} p={} b={:<4} {:.6}s", row.method, row.n, row.p, row.b, t),
        None => println!("{:<4} n={:<7} p={} skipped", row.method, row.n, row.p),
    })?;
    Ok(())
}
