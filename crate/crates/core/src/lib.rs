//! Estimators of the time-average covariance matrix `Σ = Σ_s R(s)` of a
//! multivariate stationary sequence, with lugsail lag windows.
//!
//! * [`windows`]: Bartlett, Tukey-Hanning and quadratic-spectral lag windows,
//!   the lugsail transform and its constants.
//! * [`sve`] and [`bm`]: spectral-variance, batch-means, weighted batch-means
//!   and lugsail estimators.
//! * [`psd`]: eigenvalue-floor repair for indefinite estimates.
//! * [`diagnostics`]: effective sample size, confidence regions and
//!   Monte-Carlo summaries.
//! * [`processes`]: VAR(1) and AR(1) regression simulators with known `Σ`.
//! * [`harness`]: replicated coverage experiments and the timing benchmark
//!   behind the `lugsail` binary.
//!
//! ```
//! use lugsail::{bm, processes::{simulate_var1, Var1Model, RngSeed}};
//!
//! let model = Var1Model::scaled_identity(2, 0.5, 0.3).unwrap();
//! let y = simulate_var1(&model, 10_000, RngSeed::new(42, 0)).unwrap();
//! let est = bm::lugsail_bm_estimate(&y, 100, 3, 0.5).unwrap();
//! assert_eq!(est.sigma.shape(), (2, 2));
//! ```

pub mod bm;
pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod estimate;
pub mod harness;
pub mod io;
pub mod lagcov;
pub mod processes;
pub mod psd;
mod special;
pub mod sve;
pub mod windows;

pub use error::{Error, Result};
pub use estimate::{CovEstimate, Method};
pub use lagcov::SampleMatrix;
pub use windows::{WindowKind, WindowSpec};
