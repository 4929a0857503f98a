//! Replicated simulation experiments: coverage of confidence regions, relative
//! bias and ESS against a known `Σ`, the BM-versus-SV timing benchmark and
//! running ESS curves.
//!
//! Replication `i` draws its data from `RngSeed::new(seed, i)`, every method
//! in a run sees the same sample, and results are aggregated in replication
//! order, so reports do not depend on the number of worker threads. Only the
//! timing columns vary between runs.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use nalgebra::{Cholesky, DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::bm::lugsail_bm_estimate;
use crate::diagnostics::{det_proot, ess, region_contains, relative_diag_bias};
use crate::error::{Error, Result};
use crate::estimate::CovEstimate;
use crate::lagcov::{sample_mean, SampleMatrix};
use crate::processes::{
    ar1homo_true_sigma, ols_v_process, simulate_ar1_homo, simulate_var1, var1_true_sigma,
    Ar1HomoModel, RngSeed, Var1Model,
};
use crate::psd::{adjust_psd, default_config};
use crate::sve::lugsail_sv_estimate;
use crate::windows::{balanced_c, zero_bias_c, WindowKind, WindowSpec};

/// `⌊√n⌋`, the default batch size.
pub fn default_batch_size(n: usize) -> usize {
    int_root(n, 2)
}

/// `⌊n^{1/3}⌋`, the default SV bandwidth.
pub fn default_sv_bandwidth(n: usize) -> usize {
    int_root(n, 3)
}

/// Exact integer `k`-th root, rounded down.
fn int_root(n: usize, k: u32) -> usize {
    let mut r = (n as f64).powf(1.0 / f64::from(k)).round() as usize;
    while r > 0 && r.pow(k) > n {
        r -= 1;
    }
    while (r + 1).pow(k) <= n {
        r += 1;
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Lugsail batch means.
    Bm,
    /// Lugsail spectral variance.
    Sv,
}

/// A named estimator: `bm`, `bm2`, `bm3`, `bt`, `th2`, `qs3`, ...
///
/// The prefix picks the family and window (`bm` batch means, `bt` Bartlett SV,
/// `th` Tukey-Hanning SV, `qs` quadratic-spectral SV); the optional numeric
/// suffix is the lugsail ratio `r`. `r = 2` uses the zero-bias `c = r^-q`,
/// `r >= 3` the balanced `c = 2 / (1 + r^q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodSpec {
    pub label: String,
    pub family: Family,
    pub window: WindowSpec,
}

impl MethodSpec {
    pub fn new(label: impl Into<String>, family: Family, window: WindowSpec) -> Self {
        MethodSpec {
            label: label.into(),
            family,
            window,
        }
    }

    pub fn default_bandwidth(&self, n: usize) -> usize {
        match self.family {
            Family::Bm => default_batch_size(n),
            Family::Sv => default_sv_bandwidth(n),
        }
    }

    pub fn estimate(&self, y: &SampleMatrix, b: usize) -> Result<CovEstimate> {
        match self.family {
            Family::Bm => lugsail_bm_estimate(y, b, self.window.r, self.window.c),
            Family::Sv => lugsail_sv_estimate(y, &self.window, b),
        }
    }

    /// Estimate and, if the result is lugsail or not positive-definite, apply
    /// the default PSD adjustment. Returns `(raw, used)`.
    pub fn estimate_for_inference(
        &self,
        y: &SampleMatrix,
        b: usize,
    ) -> Result<(CovEstimate, CovEstimate)> {
        let raw = self.estimate(y, b)?;
        let used = if !self.window.is_base() || !is_positive_definite(&raw.sigma) {
            adjust_psd(&raw, y.n(), &default_config(y.n(), y.p()))?
        } else {
            raw.clone()
        };
        Ok((raw, used))
    }
}

impl fmt::Display for MethodSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

impl FromStr for MethodSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let label = s.trim().to_ascii_lowercase();
        let split = label
            .find(|ch: char| ch.is_ascii_digit())
            .unwrap_or(label.len());
        let (prefix, digits) = label.split_at(split);
        let (family, kind) = match prefix {
            "bm" => (Family::Bm, WindowKind::Bartlett),
            "bt" => (Family::Sv, WindowKind::Bartlett),
            "th" => (Family::Sv, WindowKind::TukeyHanning),
            "qs" => (Family::Sv, WindowKind::QuadraticSpectral),
            _ => {
                return Err(Error::param(format!(
                    "unknown method {s:?} (expected bm, bt, th or qs with an optional lugsail ratio, e.g. bm3)"
                )))
            }
        };
        let r: u32 = if digits.is_empty() {
            1
        } else {
            digits
                .parse()
                .map_err(|_| Error::param(format!("bad lugsail ratio in method {s:?}")))?
        };
        let q = kind.constants().q;
        let window = match r {
            0 => {
                return Err(Error::param(format!(
                    "lugsail ratio must be >= 1 in method {s:?}"
                )))
            }
            1 => WindowSpec::base(kind),
            2 => WindowSpec::new(kind, 2, zero_bias_c(2, q)?)?,
            _ => WindowSpec::new(kind, r, balanced_c(r, q)?)?,
        };
        Ok(MethodSpec::new(label, family, window))
    }
}

/// Parse a comma-separated list of method labels.
pub fn parse_methods(list: &str) -> Result<Vec<MethodSpec>> {
    let methods: Vec<MethodSpec> = list
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect::<Result<_>>()?;
    if methods.is_empty() {
        return Err(Error::param("no methods given"));
    }
    Ok(methods)
}

pub(crate) fn is_positive_definite(m: &DMatrix<f64>) -> bool {
    Cholesky::new(m.clone()).is_some()
}

/// A simulation model with a closed-form `Σ`.
#[derive(Debug, Clone, PartialEq)]
pub enum ProcessModel {
    /// Inference on the mean of the chain, which is zero.
    Var1(Var1Model),
    /// Inference on `β = 0` through the OLS score process `v_t = x_t û_t`.
    Ar1Homo(Ar1HomoModel),
}

impl ProcessModel {
    pub fn p(&self) -> usize {
        match self {
            ProcessModel::Var1(m) => m.p(),
            ProcessModel::Ar1Homo(m) => m.p(),
        }
    }

    /// `Σ` of the process the estimators are applied to.
    pub fn true_sigma(&self) -> Result<DMatrix<f64>> {
        match self {
            ProcessModel::Var1(m) => var1_true_sigma(m),
            ProcessModel::Ar1Homo(m) => Ok(ar1homo_true_sigma(m)),
        }
    }
}

/// Everything a coverage run needs besides the method list.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub model: ProcessModel,
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
    pub alpha: f64,
    /// Fixed bandwidth for every method; `None` uses each family's default.
    pub b: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(model: ProcessModel, n: usize, reps: usize, seed: u64) -> Self {
        ExperimentConfig {
            model,
            n,
            reps,
            seed,
            alpha: 0.1,
            b: None,
        }
    }

    /// Parse `key = value` lines. `#` starts a comment.
    ///
    /// ```text
    /// kind = var1        # or ar1homo
    /// p = 5
    /// rho = 0.9          # Φ = ρ I (var1); ρ_x = ρ_u = ρ (ar1homo)
    /// omega = 0.9        # Ω = AR-correlation(omega) (var1)
    /// rho_x = 0.7        # ar1homo only; override rho
    /// rho_u = 0.7
    /// w_coef = 0.99      # W = AR-correlation(w_coef) (ar1homo)
    /// w = 1              # error innovation variance (ar1homo)
    /// n = 10000
    /// reps = 500
    /// seed = 42
    /// alpha = 0.1
    /// b = 100            # optional
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut kv: Vec<(String, String, usize)> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Input {
                row: i + 1,
                col: 0,
                msg: format!("expected key = value, found {line:?}"),
            })?;
            let key = k.trim().to_ascii_lowercase();
            if kv.iter().any(|(seen, _, _)| *seen == key) {
                return Err(Error::Input {
                    row: i + 1,
                    col: 0,
                    msg: format!("duplicate key {key:?}"),
                });
            }
            kv.push((key, v.trim().to_string(), i + 1));
        }
        let get = |key: &str| {
            kv.iter()
                .find(|(k, _, _)| k == key)
                .map(|(_, v, line)| (v.as_str(), *line))
        };
        fn num<T: FromStr>(key: &str, found: Option<(&str, usize)>) -> Result<Option<T>> {
            match found {
                None => Ok(None),
                Some((v, line)) => v.parse().map(Some).map_err(|_| Error::Input {
                    row: line,
                    col: 0,
                    msg: format!("bad value for {key}: {v:?}"),
                }),
            }
        }
        const KNOWN: [&str; 13] = [
            "kind", "p", "rho", "phi", "omega", "rho_x", "rho_u", "w_coef", "w", "n", "reps",
            "seed", "alpha",
        ];
        if let Some((k, _, line)) = kv
            .iter()
            .find(|(k, _, _)| !KNOWN.contains(&k.as_str()) && k != "b")
        {
            return Err(Error::Input {
                row: *line,
                col: 0,
                msg: format!("unknown key {k:?}"),
            });
        }

        let kind = get("kind").map(|(v, _)| v.to_ascii_lowercase());
        let p: usize = num("p", get("p"))?.unwrap_or(1);
        if p == 0 {
            return Err(Error::param("p must be at least 1"));
        }
        let rho: Option<f64> = match (num("rho", get("rho"))?, num("phi", get("phi"))?) {
            (Some(_), Some(_)) => return Err(Error::param("give rho or phi, not both")),
            (a, b) => a.or(b),
        };
        let model = match kind.as_deref() {
            Some("var1") | Some("var") => {
                let rho = rho.ok_or_else(|| Error::param("var1 config needs rho"))?;
                let omega: f64 = num("omega", get("omega"))?.unwrap_or(0.0);
                ProcessModel::Var1(Var1Model::scaled_identity(p, rho, omega)?)
            }
            Some("ar1homo") | Some("ar1-homo") => {
                let rho_x: Option<f64> = num("rho_x", get("rho_x"))?;
                let rho_u: Option<f64> = num("rho_u", get("rho_u"))?;
                let rho_x = rho_x
                    .or(rho)
                    .ok_or_else(|| Error::param("ar1homo config needs rho or rho_x"))?;
                let rho_u = rho_u
                    .or(rho)
                    .ok_or_else(|| Error::param("ar1homo config needs rho or rho_u"))?;
                let w_coef: f64 = num("w_coef", get("w_coef"))?.unwrap_or(0.0);
                let w: f64 = num("w", get("w"))?.unwrap_or(1.0);
                ProcessModel::Ar1Homo(Ar1HomoModel::with_ar_correlation(
                    p, rho_x, rho_u, w_coef, w,
                )?)
            }
            Some(other) => {
                return Err(Error::param(format!(
                    "unknown process kind {other:?} (expected var1 or ar1homo)"
                )))
            }
            None => return Err(Error::param("config needs a kind (var1 or ar1homo)")),
        };
        let n = num("n", get("n"))?.ok_or_else(|| Error::param("config needs n"))?;
        let mut cfg = ExperimentConfig::new(
            model,
            n,
            num("reps", get("reps"))?.unwrap_or(1000),
            num("seed", get("seed"))?.unwrap_or(42),
        );
        if let Some(alpha) = num("alpha", get("alpha"))? {
            cfg.alpha = alpha;
        }
        cfg.b = num("b", get("b"))?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(Error::param("reps must be at least 1"));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::param(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        if self.n < self.model.p() + 2 || self.n < 4 {
            return Err(Error::param(format!("n = {} is too small", self.n)));
        }
        Ok(())
    }
}

/// One method on one replication.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplicationRecord {
    pub rep: usize,
    pub method: String,
    pub b: usize,
    pub covered: bool,
    /// `det(Σ̂)^{1/p}` of the estimate used for inference.
    pub det_proot: f64,
    /// Relative diagonal bias of the unadjusted estimate.
    pub rel_bias: f64,
    pub ess_ratio: f64,
    pub psd_adjusted: bool,
    pub seconds: f64,
}

/// Aggregated results for one method.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageReport {
    pub method: String,
    pub reps: usize,
    pub covered: usize,
    pub coverage: f64,
    pub coverage_se: f64,
    pub mean_det: f64,
    pub det_se: f64,
    pub mean_rel_bias: f64,
    pub mean_ess_ratio: f64,
    pub psd_adjusted: usize,
    pub mean_seconds: f64,
}

impl CoverageReport {
    /// Summarize records of a single method.
    pub fn from_records(method: &str, records: &[&ReplicationRecord]) -> Self {
        let reps = records.len();
        let m = reps as f64;
        let covered = records.iter().filter(|r| r.covered).count();
        let coverage = covered as f64 / m;
        let mean =
            |f: &dyn Fn(&ReplicationRecord) -> f64| records.iter().map(|r| f(r)).sum::<f64>() / m;
        let mean_det = mean(&|r| r.det_proot);
        let det_var = if reps > 1 {
            records
                .iter()
                .map(|r| (r.det_proot - mean_det).powi(2))
                .sum::<f64>()
                / (m - 1.0)
        } else {
            0.0
        };
        CoverageReport {
            method: method.to_string(),
            reps,
            covered,
            coverage,
            coverage_se: (coverage * (1.0 - coverage) / m).sqrt(),
            mean_det,
            det_se: (det_var / m).sqrt(),
            mean_rel_bias: mean(&|r| r.rel_bias),
            mean_ess_ratio: mean(&|r| r.ess_ratio),
            psd_adjusted: records.iter().filter(|r| r.psd_adjusted).count(),
            mean_seconds: mean(&|r| r.seconds),
        }
    }

    /// Equality of every column except timing.
    pub fn same_statistics(&self, other: &CoverageReport) -> bool {
        CoverageReport {
            mean_seconds: 0.0,
            ..self.clone()
        } == CoverageReport {
            mean_seconds: 0.0,
            ..other.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageRun {
    pub reports: Vec<CoverageReport>,
    /// Replication-major, methods in the order given.
    pub records: Vec<ReplicationRecord>,
}

/// Simulate one replication and evaluate every method on it.
pub fn run_replication(
    cfg: &ExperimentConfig,
    methods: &[MethodSpec],
    truth: &DMatrix<f64>,
    rep: usize,
) -> Result<Vec<ReplicationRecord>> {
    let seed = RngSeed::new(cfg.seed, rep as u64);
    let p = cfg.model.p();
    // sample for the estimators, point estimate, and sandwich matrix (if any)
    let (y, center, sandwich) = match &cfg.model {
        ProcessModel::Var1(m) => {
            let y = simulate_var1(m, cfg.n, seed)?;
            let ybar = sample_mean(&y);
            (y, ybar, None)
        }
        ProcessModel::Ar1Homo(m) => {
            let sample = simulate_ar1_homo(m, cfg.n, seed)?;
            let fit = ols_v_process(&sample.x, &sample.y)?;
            (fit.v, fit.beta_hat, Some(fit.m))
        }
    };
    let zero = DVector::zeros(p);
    methods
        .iter()
        .map(|method| {
            let b = cfg.b.unwrap_or_else(|| method.default_bandwidth(y.n()));
            let start = Instant::now();
            let (raw, used) = method.estimate_for_inference(&y, b)?;
            let seconds = start.elapsed().as_secs_f64();
            let region_est = match &sandwich {
                None => used.clone(),
                Some(m) => used.with_sigma(m * &used.sigma * m),
            };
            Ok(ReplicationRecord {
                rep,
                method: method.label.clone(),
                b,
                covered: region_contains(&center, &zero, &region_est, y.n(), cfg.alpha)?,
                det_proot: det_proot(&used)?,
                rel_bias: relative_diag_bias(&raw, truth)?,
                ess_ratio: ess(&y, &used)? / y.n() as f64,
                psd_adjusted: used.psd_adjusted,
                seconds,
            })
        })
        .collect()
}

/// Run `cfg.reps` replications on a pool of `threads` workers (0 = rayon's default).
pub fn run_coverage(
    cfg: &ExperimentConfig,
    methods: &[MethodSpec],
    threads: usize,
) -> Result<CoverageRun> {
    cfg.validate()?;
    if methods.is_empty() {
        return Err(Error::param("no methods given"));
    }
    let truth = cfg.model.true_sigma()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::param(format!("cannot build worker pool: {e}")))?;
    let per_rep: Vec<Vec<ReplicationRecord>> = pool.install(|| {
        (0..cfg.reps)
            .into_par_iter()
            .map(|rep| run_replication(cfg, methods, &truth, rep))
            .collect::<Result<_>>()
    })?;
    let records: Vec<ReplicationRecord> = per_rep.into_iter().flatten().collect();
    let reports = methods
        .iter()
        .map(|m| {
            let mine: Vec<&ReplicationRecord> =
                records.iter().filter(|r| r.method == m.label).collect();
            CoverageReport::from_records(&m.label, &mine)
        })
        .collect();
    Ok(CoverageRun { reports, records })
}

pub fn write_reports_csv<W: Write>(out: W, reports: &[CoverageReport]) -> Result<()> {
    write_csv(out, reports)
}

pub fn write_records_csv<W: Write>(out: W, records: &[ReplicationRecord]) -> Result<()> {
    write_csv(out, records)
}

fn write_csv<W: Write, T: Serialize>(out: W, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub ns: Vec<usize>,
    pub ps: Vec<usize>,
    pub methods: Vec<MethodSpec>,
    pub reps: usize,
    /// Quadratic-spectral cells above this `n` are skipped.
    pub qs_max_n: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub method: String,
    pub n: usize,
    pub p: usize,
    pub b: usize,
    pub reps: usize,
    /// `None` when the cell was skipped.
    pub median_seconds: Option<f64>,
}

/// Median wall time of each method on the score process of an AR(1)
/// regression with `ρ_x = ρ_u = 0.5` and `W` = AR-correlation(0.99).
pub fn run_bench(cfg: &BenchConfig, mut progress: impl FnMut(&BenchRow)) -> Result<Vec<BenchRow>> {
    if cfg.reps == 0 {
        return Err(Error::param("reps must be at least 1"));
    }
    let mut rows = Vec::new();
    for &p in &cfg.ps {
        for &n in &cfg.ns {
            let model = Ar1HomoModel::with_ar_correlation(p, 0.5, 0.5, 0.99, 1.0)?;
            let sample = simulate_ar1_homo(
                &model,
                n,
                RngSeed::new(cfg.seed, (p * 1_000_003 + n) as u64),
            )?;
            let v = ols_v_process(&sample.x, &sample.y)?.v;
            for method in &cfg.methods {
                let b = method.default_bandwidth(n);
                let skip = method.window.kind == WindowKind::QuadraticSpectral
                    && method.family == Family::Sv
                    && n > cfg.qs_max_n;
                let median_seconds = if skip {
                    None
                } else {
                    let mut times = Vec::with_capacity(cfg.reps);
                    for _ in 0..cfg.reps {
                        let start = Instant::now();
                        let est = method.estimate(&v, b)?;
                        times.push(start.elapsed().as_secs_f64());
                        std::hint::black_box(est);
                    }
                    Some(median(&mut times))
                };
                let row = BenchRow {
                    method: method.label.clone(),
                    n,
                    p,
                    b,
                    reps: cfg.reps,
                    median_seconds,
                };
                progress(&row);
                rows.push(row);
            }
        }
    }
    Ok(rows)
}

pub fn write_bench_csv<W: Write>(out: W, rows: &[BenchRow]) -> Result<()> {
    write_csv(out, rows)
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len();
    if m % 2 == 1 {
        v[m / 2]
    } else {
        0.5 * (v[m / 2 - 1] + v[m / 2])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EssPoint {
    pub n: usize,
    pub ess: f64,
    pub ess_per_n: f64,
}

/// ESS at the prefixes `n/k, 2n/k, ..., n`. With `b = None` each prefix uses
/// the method's default bandwidth for its own length.
pub fn running_ess(
    y: &SampleMatrix,
    method: &MethodSpec,
    b: Option<usize>,
    k: usize,
) -> Result<Vec<EssPoint>> {
    if k == 0 || k > y.n() {
        return Err(Error::param(format!(
            "running checkpoints must lie in 1..={}, got {k}",
            y.n()
        )));
    }
    (1..=k)
        .map(|j| {
            let m = if j == k { y.n() } else { j * y.n() / k };
            let prefix = y.prefix(m)?;
            let bw = b.unwrap_or_else(|| method.default_bandwidth(m));
            let (_, used) = method.estimate_for_inference(&prefix, bw)?;
            let e = ess(&prefix, &used)?;
            Ok(EssPoint {
                n: m,
                ess: e,
                ess_per_n: e / m as f64,
            })
        })
        .collect()
}
