//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any failed.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::*;
use lugsail::bm::{bm_estimate, lugsail_bm_estimate, weighted_bm_estimate};
use lugsail::diagnostics::{bias_factor, det_proot, variance_factor};
use lugsail::harness::{parse_methods, run_bench, run_coverage, running_ess, BenchConfig, CoverageReport, ExperimentConfig, MethodSpec, ProcessModel};
use lugsail::processes::*;
use lugsail::psd::{adjust_psd, default_config};
use lugsail::sve::lugsail_sv_estimate;
use lugsail::windows::{balanced_c, lugsail_l2sq, zero_bias_c, WindowKind, WindowSpec};
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const SEED: u64 = 42;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("estimator equivalences", equivalences),
        ("lugsail window L2 constants", l2_constants),
        ("batch-means bias", bm_bias),
        ("lugsail variance ratio", variance_ratio),
        ("VAR(1) truth", var_truth),
        ("coverage ordering", coverage_ordering),
        ("relative bias direction", bias_direction),
        ("HAC truth and lugsail coverage", hac),
        ("BM versus SV timing", timing),
        ("PSD adjustment properties", psd_properties),
        ("ESS sanity", ess_sanity),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = check();
        let secs = start.elapsed().as_secs_f64();
        if !out.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} {name} ({secs:.1}s): {}",
            i + 1,
            if out.pass { "PASS" } else { "FAIL" },
            out.detail
        );
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn equivalences() -> Outcome {
    let mut worst_a: f64 = 0.0;
    for n in [96, 1000] {
        for p in [1, 3] {
            let y = gaussian(n, p, (n * 10 + p) as u64);
            let root = (n as f64).sqrt().floor() as usize;
            for b in [8, root] {
                let wbm = weighted_bm_estimate(&y, &WindowSpec::base(WindowKind::Bartlett), b).unwrap();
                let bm = bm_estimate(&y, b).unwrap();
                worst_a = worst_a.max(rel_diff(&wbm.sigma, &bm.sigma));
            }
        }
    }

    let mut worst_b: f64 = 0.0;
    let y = correlated(600, 3, 0.6, 1);
    for kind in WindowKind::ALL {
        let q = kind.constants().q;
        for (r, c) in [(2, zero_bias_c(2, q).unwrap()), (3, balanced_c(3, q).unwrap()), (4, 0.4)] {
            for b in [12, 24] {
                let spec = WindowSpec::new(kind, r, c).unwrap();
                let est = lugsail_sv_estimate(&y, &spec, b).unwrap();
                let max_lag = if kind.is_truncated() { b - 1 } else { y.n() - 1 };
                let direct = direct_sv(y.as_matrix(), &|s| lugsail_window(kind, r, c, s as f64 / b as f64), max_lag);
                worst_b = worst_b.max(rel_diff(&est.sigma, &direct));
            }
        }
    }

    let mut worst_c: f64 = 0.0;
    for (r, c) in [(2, 0.5), (3, 0.5), (3, 0.25)] {
        for b in [6, 12] {
            let n = r as usize * b * 20;
            let y = correlated(n, 2, 0.5, n as u64);
            let spec = WindowSpec::new(WindowKind::Bartlett, r, c).unwrap();
            let fast = lugsail_bm_estimate(&y, b, r, c).unwrap();
            let slow = weighted_bm_estimate(&y, &spec, b).unwrap();
            worst_c = worst_c.max(rel_diff(&fast.sigma, &slow.sigma));
        }
    }
    outcome(
        worst_a <= 1e-10 && worst_b <= 1e-12 && worst_c <= 1e-10,
        format!("max rel diff (a) {worst_a:.1e} <= 1e-10, (b) {worst_b:.1e} <= 1e-12, (c) {worst_c:.1e} <= 1e-10"),
    )
}

fn l2_constants() -> Outcome {
    // (window, r, c, published value, printed decimals)
    let cases = [
        (WindowKind::Bartlett, 2, 0.5, 1.33, 2),
        (WindowKind::Bartlett, 3, 0.5, 1.7037, 4),
        (WindowKind::TukeyHanning, 2, 0.25, 0.964, 3),
        (WindowKind::TukeyHanning, 3, 0.2, 0.986, 3),
        (WindowKind::QuadraticSpectral, 2, 0.25, 1.3, 1),
        (WindowKind::QuadraticSpectral, 3, 0.2, 1.329, 3),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (kind, r, c, published, decimals) in cases {
        let spec = WindowSpec::new(kind, r, c).unwrap();
        let closed = lugsail_l2sq(&spec);
        let quad = l2sq_quadrature(&spec);
        let sig4 = (closed - quad).abs() <= 5e-5 * quad;
        let printed = (closed - published).abs() <= 0.5 * 10f64.powi(-decimals) + 1e-12;
        pass &= sig4 && printed;
        parts.push(format!("{kind} r={r}: {closed:.5} (quad {quad:.5}, published {published})"));
    }
    outcome(pass, parts.join("; "))
}

/// Mean of `est - Σ` over replications of a univariate AR(1) for each estimator.
fn mean_errors(model: &Var1Model, n: usize, reps: usize, truth: f64, est: &(dyn Fn(&lugsail::SampleMatrix) -> Vec<f64> + Sync)) -> Vec<Vec<f64>> {
    (0..reps)
        .into_par_iter()
        .map(|rep| {
            let y = simulate_var1(model, n, RngSeed::new(SEED, rep as u64)).unwrap();
            est(&y).into_iter().map(|v| v - truth).collect()
        })
        .collect()
}

fn column_mean(rows: &[Vec<f64>], j: usize) -> f64 {
    rows.iter().map(|r| r[j]).sum::<f64>() / rows.len() as f64
}

fn column_var(rows: &[Vec<f64>], j: usize) -> f64 {
    let m = column_mean(rows, j);
    rows.iter().map(|r| (r[j] - m).powi(2)).sum::<f64>() / (rows.len() as f64 - 1.0)
}

fn bm_bias() -> Outcome {
    let model = Var1Model::new(DMatrix::from_element(1, 1, 0.5), DMatrix::identity(1, 1)).unwrap();
    let truth = var1_true_sigma(&model).unwrap()[(0, 0)];
    let gamma = var1_gamma(&model, 1).unwrap()[(0, 0)];
    let b = 64;
    let errs = mean_errors(&model, 4096, 5000, truth, &|y| {
        vec![
            bm_estimate(y, b).unwrap().sigma[(0, 0)],
            lugsail_bm_estimate(y, b, 2, 0.5).unwrap().sigma[(0, 0)],
            lugsail_bm_estimate(y, b, 3, 0.5).unwrap().sigma[(0, 0)],
        ]
    });
    let (bm, bm2, bm3) = (column_mean(&errs, 0), column_mean(&errs, 1), column_mean(&errs, 2));
    let g = gamma / b as f64;
    let target3 = bias_factor(3, 0.5, 1) * g;
    let base_ok = bm >= 1.5 * g && bm <= 0.5 * g;
    let lugsail_ok = bm3 > 0.0 && bm3 >= target3 / 2.0 && bm3 <= 2.0 * target3;
    let between = bm < bm2 && bm2 < bm3;
    outcome(
        (truth - 4.0).abs() < 1e-12 && (gamma + 16.0 / 3.0).abs() < 1e-9 && base_ok && lugsail_ok && between,
        format!(
            "Σ = {truth:.4}, Γ = {gamma:.4}; mean bias BM {bm:+.4} in [{:.4}, {:.4}], BM2 {bm2:+.4}, BM3 {bm3:+.4} in [{:.4}, {:.4}]",
            1.5 * g,
            0.5 * g,
            target3 / 2.0,
            2.0 * target3
        ),
    )
}

fn variance_ratio() -> Outcome {
    let model = Var1Model::new(DMatrix::zeros(1, 1), DMatrix::identity(1, 1)).unwrap();
    let b = 128;
    let errs = mean_errors(&model, 1 << 14, 5000, 1.0, &|y| {
        vec![
            bm_estimate(y, b).unwrap().sigma[(0, 0)],
            lugsail_bm_estimate(y, b, 3, 0.5).unwrap().sigma[(0, 0)],
        ]
    });
    let ratio = column_var(&errs, 1) / column_var(&errs, 0);
    outcome(
        (2.4..=3.6).contains(&ratio),
        format!("Var(BM3)/Var(BM) = {ratio:.3} in [2.4, 3.6], target {}", variance_factor(3, 0.5)),
    )
}

fn var_truth() -> Outcome {
    let m = Var1Model::scaled_identity(10, 0.95, 0.9).unwrap();
    let sigma = var1_true_sigma(&m).unwrap();
    let v = var1_stationary_cov(&m).unwrap();
    let oracle = truncated_sum_sigma(|s| var1_autocov(&m, &v, s), 1e-15).unwrap();
    let dummy = bm_estimate(&gaussian(20, 10, 0), 2).unwrap();
    let det = det_proot(&dummy.with_sigma(sigma.clone())).unwrap();
    let rel = rel_diff(&sigma, &oracle);
    outcome(
        (det - 89.7).abs() <= 0.1 && rel <= 1e-8,
        format!("det^(1/10) = {det:.3} (89.7 ± 0.1), oracle rel diff {rel:.1e} <= 1e-8"),
    )
}

fn var_config(n: usize, reps: usize) -> ExperimentConfig {
    let model = ProcessModel::Var1(Var1Model::scaled_identity(5, 0.9, 0.9).unwrap());
    ExperimentConfig::new(model, n, reps, SEED)
}

fn summary(r: &CoverageReport) -> String {
    format!("{} cov {:.3} ({:.3}) bias {:+.4}", r.method, r.coverage, r.coverage_se, r.mean_rel_bias)
}

fn coverage_ordering() -> Outcome {
    let run = run_coverage(&var_config(10_000, 500), &parse_methods("bm,bm2,bm3").unwrap(), 0).unwrap();
    let [bm, bm2, bm3] = [&run.reports[0], &run.reports[1], &run.reports[2]];
    let pooled = |a: &CoverageReport, b: &CoverageReport| (a.coverage_se.powi(2) + b.coverage_se.powi(2)).sqrt();
    let gap1 = bm2.coverage - bm.coverage;
    let gap2 = bm3.coverage - bm2.coverage;
    let spread = bm3.coverage - bm.coverage;
    outcome(
        gap1 > -pooled(bm, bm2) && gap2 > -pooled(bm2, bm3) && spread >= 0.03,
        format!(
            "{}; {}; {}; gaps {gap1:+.3}, {gap2:+.3}, BM3 - BM = {spread:+.3} >= 0.03",
            summary(bm),
            summary(bm2),
            summary(bm3)
        ),
    )
}

fn bias_direction() -> Outcome {
    let run = run_coverage(&var_config(50_000, 500), &parse_methods("bm,bm2,bm3").unwrap(), 0).unwrap();
    let [bm, bm2, bm3] = [&run.reports[0], &run.reports[1], &run.reports[2]];
    let se = |label: &str| {
        let v: Vec<f64> = run.records.iter().filter(|r| r.method == label).map(|r| r.rel_bias).collect();
        let m = v.iter().sum::<f64>() / v.len() as f64;
        (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() as f64 - 1.0) / v.len() as f64).sqrt()
    };
    outcome(
        bm.mean_rel_bias < 0.0
            && bm2.mean_rel_bias < 0.0
            && bm3.mean_rel_bias > bm.mean_rel_bias
            && bm3.mean_rel_bias > bm2.mean_rel_bias,
        format!(
            "mean relative diagonal bias BM {:+.4} ({:.4}), BM2 {:+.4} ({:.4}), BM3 {:+.4} ({:.4}); need BM, BM2 < 0 < BM3 - max(BM, BM2)",
            bm.mean_rel_bias,
            se("bm"),
            bm2.mean_rel_bias,
            se("bm2"),
            bm3.mean_rel_bias,
            se("bm3")
        ),
    )
}

fn hac() -> Outcome {
    let scalar = Ar1HomoModel::with_ar_correlation(1, 0.7, 0.7, 0.99, 1.0).unwrap();
    let truth = ar1homo_true_sigma(&scalar)[(0, 0)];
    let brute: f64 = (0..=10_000usize)
        .map(|s| scalar.v_autocov(s)[(0, 0)] * if s == 0 { 1.0 } else { 2.0 })
        .sum();
    let truth_ok = ((truth - brute) / brute).abs() <= 0.01;

    let model = ProcessModel::Ar1Homo(Ar1HomoModel::with_ar_correlation(3, 0.7, 0.7, 0.99, 1.0).unwrap());
    let cfg = ExperimentConfig::new(model, 500, 500, SEED);
    let methods = parse_methods("bt,bt2,bt3,th,th2,th3,qs,qs2,qs3").unwrap();
    let run = run_coverage(&cfg, &methods, 0).unwrap();
    let find = |label: &str| run.reports.iter().find(|r| r.method == label).unwrap();
    let (bt, bt3) = (find("bt"), find("bt3"));
    let table: Vec<String> = run.reports.iter().map(summary).collect();
    outcome(
        truth_ok && bt3.coverage >= bt.coverage && bt3.mean_rel_bias > bt.mean_rel_bias,
        format!("p=1 truth {truth:.4} vs sum {brute:.4}; {}", table.join("; ")),
    )
}

fn timing() -> Outcome {
    let cfg = BenchConfig {
        ns: vec![1_000, 10_000, 100_000],
        ps: vec![10],
        methods: parse_methods("bm3,bt3,th3,qs3").unwrap(),
        reps: 3,
        qs_max_n: 10_000,
        seed: SEED,
    };
    let rows = run_bench(&cfg, |_| {}).unwrap();
    let time = |m: &str, n: usize| rows.iter().find(|r| r.method == m && r.n == n).unwrap().median_seconds;
    let (bm3, bt3) = (time("bm3", 100_000).unwrap(), time("bt3", 100_000).unwrap());
    let mut qs_slowest = true;
    for &n in &cfg.ns {
        if let Some(qs) = time("qs3", n) {
            qs_slowest &= qs > time("bt3", n).unwrap() && qs > time("th3", n).unwrap();
        }
    }
    let cells: Vec<String> = rows
        .iter()
        .map(|r| match r.median_seconds {
            Some(t) => format!("{} n={} {t:.4}s", r.method, r.n),
            None => format!("{} n={} skipped", r.method, r.n),
        })
        .collect();
    outcome(
        bm3 <= bt3 / 50.0 && qs_slowest,
        format!("BT3/BM3 = {:.0}x at n=1e5 (need >= 50); QS3 slowest: {qs_slowest}; {}", bt3 / bm3, cells.join(", ")),
    )
}

fn psd_properties() -> Outcome {
    let n = 1000;
    let p = 8;
    let cfg = default_config(n, p);
    let floor = cfg.floor(n);
    let template = bm_estimate(&gaussian(40, p, 0), 4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut symmetric, mut bounded, mut idempotent, mut passthrough) = (0, 0, 0, 0);
    let mut indefinite = 0;
    while indefinite < 100 {
        let a = DMatrix::from_fn(p, p, |_, _| rng.random_range(-1.0..1.0));
        let mut m = (&a + a.transpose()) * 0.5;
        for i in 0..p {
            m[(i, i)] = rng.random_range(0.1..2.0);
        }
        if SymmetricEigen::new(m.clone()).eigenvalues.min() >= 0.0 {
            continue;
        }
        indefinite += 1;
        let out = adjust_psd(&template.with_sigma(m.clone()), n, &cfg).unwrap();
        symmetric += (out.sigma == out.sigma.transpose()) as usize;
        let min_eig = SymmetricEigen::new(out.sigma.clone()).eigenvalues.min();
        bounded += (min_eig >= floor * m.diagonal().min() * (1.0 - 1e-8)) as usize;
        let again = adjust_psd(&out, n, &cfg).unwrap();
        idempotent += (again.sigma == out.sigma) as usize;
    }
    for _ in 0..100 {
        let a = DMatrix::from_fn(p, p, |_, _| rng.random_range(-1.0..1.0));
        let m = &a * a.transpose() + DMatrix::from_diagonal_element(p, p, rng.random_range(0.5..2.0));
        let out = adjust_psd(&template.with_sigma(m.clone()), n, &cfg).unwrap();
        passthrough += (out.sigma == m && !out.psd_adjusted) as usize;
    }
    outcome(
        symmetric == 100 && bounded == 100 && idempotent == 100 && passthrough == 100,
        format!(
            "floor {floor:.2e}; symmetric {symmetric}/100, eigenvalue bound {bounded}/100, idempotent {idempotent}/100, PD pass-through {passthrough}/100"
        ),
    )
}

fn ess_sanity() -> Outcome {
    let iid = ProcessModel::Var1(Var1Model::scaled_identity(3, 0.0, 0.0).unwrap());
    let run = run_coverage(&ExperimentConfig::new(iid, 10_000, 200, SEED), &parse_methods("bm3").unwrap(), 0).unwrap();
    let iid_ratio = run.reports[0].mean_ess_ratio;
    let ratios: Vec<f64> = run.records.iter().map(|r| r.ess_ratio).collect();
    let iid_se = (ratios.iter().map(|x| (x - iid_ratio).powi(2)).sum::<f64>() / (ratios.len() as f64 - 1.0) / ratios.len() as f64).sqrt();

    let model = Var1Model::scaled_identity(5, 0.9, 0.9).unwrap();
    let bm: MethodSpec = "bm".parse().unwrap();
    let bm3: MethodSpec = "bm3".parse().unwrap();
    let k = 10;
    let reps = 200;
    let below: usize = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let y = simulate_var1(&model, 10_000, RngSeed::new(SEED, rep as u64)).unwrap();
            let base = running_ess(&y, &bm, None, k).unwrap();
            let lug = running_ess(&y, &bm3, None, k).unwrap();
            base.iter().zip(&lug).all(|(a, b)| b.ess_per_n < a.ess_per_n) as usize
        })
        .sum();
    let frac = below as f64 / reps as f64;
    outcome(
        (0.85..=1.1).contains(&iid_ratio) && frac >= 0.8,
        format!("iid mean ESS/n (BM3) {iid_ratio:.3} ({iid_se:.3}) in [0.85, 1.1]; running ESS/n BM3 < BM at all {k} checkpoints in {below}/{reps} = {frac:.2} >= 0.80"),
    )
}
