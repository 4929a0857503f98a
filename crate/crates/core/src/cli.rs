//! The `lugsail` command line: `estimate`, `coverage`, `bench` and `ess`.
//!
//! Exit codes: 0 on success, 2 for unreadable or malformed input, 3 for
//! invalid parameters (including unparseable flags).

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bm::{bm_estimate, lugsail_bm_estimate, weighted_bm_estimate};
use crate::diagnostics::ess;
use crate::error::{Error, Result};
use crate::estimate::CovEstimate;
use crate::harness::{
    default_batch_size, default_sv_bandwidth, parse_methods, run_bench, run_coverage,
    write_bench_csv, write_records_csv, write_reports_csv, BenchConfig, EssPoint, ExperimentConfig,
};
use crate::io::{read_sample_file, write_matrix_csv};
use crate::lagcov::SampleMatrix;
use crate::psd::{adjust_psd, default_config};
use crate::sve::{lugsail_sv_estimate, sv_estimate};
use crate::windows::{balanced_c, WindowKind, WindowSpec};

#[derive(Debug, Parser)]
#[command(
    name = "lugsail",
    version,
    about = "Lugsail estimators of the time-average covariance matrix"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate Σ from a CSV file of n rows and p columns.
    Estimate(EstimateArgs),
    /// Replicated coverage experiment on a simulated process.
    Coverage(CoverageArgs),
    /// Median wall time of each method on simulated data.
    Bench(BenchArgs),
    /// Effective sample size of a CSV file.
    Ess(EssArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EstimatorArg {
    Bm,
    LugsailBm,
    Sv,
    LugsailSv,
    Wbm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PsdArg {
    /// On for lugsail windows, off otherwise.
    Auto,
    On,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}

#[derive(Debug, Clone, clap::Args)]
pub struct EstimatorOpts {
    #[arg(long, value_enum, default_value = "lugsail-bm")]
    pub method: EstimatorArg,
    /// bartlett, th or qs (SV and weighted BM only).
    #[arg(long, default_value = "bartlett")]
    pub window: String,
    /// Bandwidth or batch size; defaults to ⌊√n⌋ for batch means, ⌊n^(1/3)⌋ for SV.
    #[arg(long)]
    pub b: Option<usize>,
    /// Lugsail ratio; defaults to 3 for the lugsail methods and 1 otherwise.
    #[arg(long)]
    pub r: Option<u32>,
    /// Lugsail c; defaults to 2 / (1 + r^q).
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long, value_enum, default_value = "auto")]
    pub psd_adjust: PsdArg,
    /// Skip the first line of the input.
    #[arg(long)]
    pub header: bool,
}

#[derive(Debug, Clone, clap::Args)]
pub struct EstimateArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub opts: EstimatorOpts,
    /// Also report the effective sample size.
    #[arg(long)]
    pub ess: bool,
    #[arg(long, value_enum, default_value = "json")]
    pub format: FormatArg,
}

#[derive(Debug, Clone, clap::Args)]
pub struct EssArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub opts: EstimatorOpts,
    /// Report ESS at k evenly spaced prefixes instead of once.
    #[arg(long)]
    pub running: Option<usize>,
}

#[derive(Debug, Clone, clap::Args)]
pub struct CoverageArgs {
    /// key = value model description.
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, default_value = "bm,bm2,bm3")]
    pub methods: String,
    /// Overrides the config.
    #[arg(long)]
    pub reps: Option<usize>,
    /// Overrides the config; 42 when neither sets it.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub parallel: usize,
    /// Overrides the config.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Overrides the config.
    #[arg(long)]
    pub b: Option<usize>,
    /// Write per-replication results to this CSV file.
    #[arg(long)]
    pub dump: Option<PathBuf>,
}

#[derive(Debug, Clone, clap::Args)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "1000,10000")]
    pub n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "10")]
    pub p: Vec<usize>,
    #[arg(long, default_value = "bm3,bt3,th3,qs3")]
    pub methods: String,
    #[arg(long, default_value_t = 5)]
    pub reps: usize,
    /// Skip quadratic-spectral cells with larger n.
    #[arg(long, default_value_t = 10_000)]
    pub qs_max_n: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

/// Parse `args` (program name first), run, and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Estimate(a) => cmd_estimate(&a, out, err),
        Command::Coverage(a) => cmd_coverage(&a, out, err),
        Command::Bench(a) => cmd_bench(&a, out, err),
        Command::Ess(a) => cmd_ess(&a, out, err),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// Entry point for the binary.
pub fn main() -> ExitCode {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    ExitCode::from(code)
}

impl EstimatorOpts {
    fn is_lugsail_method(&self) -> bool {
        matches!(
            self.method,
            EstimatorArg::LugsailBm | EstimatorArg::LugsailSv
        )
    }

    fn window_spec(&self) -> Result<WindowSpec> {
        let kind: WindowKind = match self.method {
            EstimatorArg::Bm | EstimatorArg::LugsailBm => {
                if !self.window.eq_ignore_ascii_case("bartlett") {
                    return Err(Error::param(
                        "batch means uses the Bartlett window; use wbm for other windows",
                    ));
                }
                WindowKind::Bartlett
            }
            _ => self.window.parse()?,
        };
        if self.method == EstimatorArg::Bm
            && (self.r.unwrap_or(1) != 1 || self.c.is_some_and(|c| c != 0.0))
        {
            return Err(Error::param(
                "--r and --c need a lugsail method (lugsail-bm)",
            ));
        }
        if self.method == EstimatorArg::Sv
            && (self.r.unwrap_or(1) != 1 || self.c.is_some_and(|c| c != 0.0))
        {
            return Err(Error::param(
                "--r and --c need a lugsail method (lugsail-sv)",
            ));
        }
        let r = self
            .r
            .unwrap_or(if self.is_lugsail_method() { 3 } else { 1 });
        if r < 1 {
            return Err(Error::param("lugsail ratio r must be >= 1"));
        }
        let c = match (self.c, r) {
            (Some(c), _) => c,
            (None, 1) => 0.0,
            (None, r) => balanced_c(r, kind.constants().q)?,
        };
        WindowSpec::new(kind, r, c)
    }

    fn bandwidth(&self, n: usize) -> usize {
        self.b.unwrap_or(match self.method {
            EstimatorArg::Bm | EstimatorArg::LugsailBm | EstimatorArg::Wbm => default_batch_size(n),
            EstimatorArg::Sv | EstimatorArg::LugsailSv => default_sv_bandwidth(n),
        })
    }

    fn raw_estimate(&self, y: &SampleMatrix, b: usize) -> Result<CovEstimate> {
        let spec = self.window_spec()?;
        match self.method {
            EstimatorArg::Bm => bm_estimate(y, b),
            EstimatorArg::LugsailBm => lugsail_bm_estimate(y, b, spec.r, spec.c),
            EstimatorArg::Sv => sv_estimate(y, spec.kind, b),
            EstimatorArg::LugsailSv => lugsail_sv_estimate(y, &spec, b),
            EstimatorArg::Wbm => weighted_bm_estimate(y, &spec, b),
        }
    }

    fn estimate(&self, y: &SampleMatrix, b: usize) -> Result<CovEstimate> {
        let raw = self.raw_estimate(y, b)?;
        let adjust = match self.psd_adjust {
            PsdArg::On => true,
            PsdArg::Off => false,
            PsdArg::Auto => !raw.window.is_base(),
        };
        if adjust {
            adjust_psd(&raw, y.n(), &default_config(y.n(), y.p()))
        } else {
            Ok(raw)
        }
    }
}

fn warn_constant_columns(y: &SampleMatrix, err: &mut dyn Write) {
    let m = y.as_matrix();
    for j in 0..y.p() {
        let col = m.column(j);
        if col.iter().all(|v| *v == col[0]) {
            let _ = writeln!(
                err,
                "warning: column {} is constant; its variance estimate is zero",
                j + 1
            );
        }
    }
}

#[derive(Serialize)]
struct EstimateReport<'a> {
    method: &'a str,
    window: WindowKind,
    r: u32,
    c: f64,
    b: usize,
    n: usize,
    p: usize,
    psd_adjusted: bool,
    sigma: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ess: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ess_per_n: Option<f64>,
}

fn method_name(m: EstimatorArg) -> &'static str {
    match m {
        EstimatorArg::Bm => "bm",
        EstimatorArg::LugsailBm => "lugsail-bm",
        EstimatorArg::Sv => "sv",
        EstimatorArg::LugsailSv => "lugsail-sv",
        EstimatorArg::Wbm => "wbm",
    }
}

fn cmd_estimate(a: &EstimateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let y = read_sample_file(&a.input, a.opts.header)?;
    warn_constant_columns(&y, err);
    let b = a.opts.bandwidth(y.n());
    let est = a.opts.estimate(&y, b)?;
    let e = if a.ess { Some(ess(&y, &est)?) } else { None };
    match a.format {
        FormatArg::Json => {
            let report = EstimateReport {
                method: method_name(a.opts.method),
                window: est.window.kind,
                r: est.window.r,
                c: est.window.c,
                b,
                n: y.n(),
                p: y.p(),
                psd_adjusted: est.psd_adjusted,
                sigma: est
                    .sigma
                    .row_iter()
                    .map(|r| r.iter().copied().collect())
                    .collect(),
                ess: e,
                ess_per_n: e.map(|e| e / y.n() as f64),
            };
            serde_json::to_writer_pretty(&mut *out, &report)
                .map_err(|e| Error::Io(e.to_string()))?;
            writeln!(out)?;
        }
        FormatArg::Csv => {
            write_matrix_csv(&mut *out, &est.sigma)?;
            if let Some(e) = e {
                writeln!(out, "# ess={e:.16e},ess_per_n={:.16e}", e / y.n() as f64)?;
            }
        }
    }
    Ok(())
}

fn cmd_ess(a: &EssArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let y = read_sample_file(&a.input, a.opts.header)?;
    warn_constant_columns(&y, err);
    let points = match a.running {
        None => {
            let est = a.opts.estimate(&y, a.opts.bandwidth(y.n()))?;
            let e = ess(&y, &est)?;
            vec![EssPoint {
                n: y.n(),
                ess: e,
                ess_per_n: e / y.n() as f64,
            }]
        }
        Some(k) => {
            if k == 0 || k > y.n() {
                return Err(Error::param(format!(
                    "--running must lie in 1..={}, got {k}",
                    y.n()
                )));
            }
            (1..=k)
                .map(|j| {
                    let m = if j == k { y.n() } else { j * y.n() / k };
                    let prefix = y.prefix(m)?;
                    let est = a.opts.estimate(&prefix, a.opts.bandwidth(m))?;
                    let e = ess(&prefix, &est)?;
                    Ok(EssPoint {
                        n: m,
                        ess: e,
                        ess_per_n: e / m as f64,
                    })
                })
                .collect::<Result<_>>()?
        }
    };
    let mut w = csv::Writer::from_writer(&mut *out);
    for p in &points {
        w.serialize(p).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_coverage(a: &CoverageArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let text = std::fs::read_to_string(&a.config)
        .map_err(|e| Error::Io(format!("cannot read {}: {e}", a.config.display())))?;
    let mut cfg = ExperimentConfig::parse(&text)?;
    if let Some(reps) = a.reps {
        cfg.reps = reps;
    }
    if let Some(seed) = a.seed {
        cfg.seed = seed;
    }
    if let Some(alpha) = a.alpha {
        cfg.alpha = alpha;
    }
    if a.b.is_some() {
        cfg.b = a.b;
    }
    let methods = parse_methods(&a.methods)?;
    let run = run_coverage(&cfg, &methods, a.parallel)?;
    write_reports_csv(&mut *out, &run.reports)?;
    if let Some(path) = &a.dump {
        let file = std::fs::File::create(path)
            .map_err(|e| Error::Io(format!("cannot create {}: {e}", path.display())))?;
        write_records_csv(std::io::BufWriter::new(file), &run.records)?;
        let _ = writeln!(
            err,
            "wrote {} records to {}",
            run.records.len(),
            path.display()
        );
    }
    Ok(())
}

fn cmd_bench(a: &BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let cfg = BenchConfig {
        ns: a.n.clone(),
        ps: a.p.clone(),
        methods: parse_methods(&a.methods)?,
        reps: a.reps,
        qs_max_n: a.qs_max_n,
        seed: a.seed,
    };
    let rows = run_bench(&cfg, |row| {
        let _ = match row.median_seconds {
            Some(t) => writeln!(err, "{} n={} p={}: {t:.6}s", row.method, row.n, row.p),
            None => writeln!(
                err,
                "{} n={} p={}: skipped (n above --qs-max-n)",
                row.method, row.n, row.p
            ),
        };
    })?;
    write_bench_csv(&mut *out, &rows)
}
