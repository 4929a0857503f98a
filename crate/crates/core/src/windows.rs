//! Lag windows and the lugsail transform.
//!
//! A lag window `k` is an even weight function with `k(0) = 1`. Three classical
//! windows are provided through [`WindowKind`]: Bartlett, Tukey-Hanning and
//! quadratic spectral. Any of them can be lifted into a lugsail window
//!
//! ```text
//! k_L(x) = k(x) / (1 - c)  -  c / (1 - c) * k(r x),     r >= 1, 0 <= c < 1
//! ```
//!
//! described by a [`WindowSpec`]. Lugsail windows exceed one near the origin,
//! which turns the usual negative first-order bias of a lag-window estimator
//! into a positive one.
//!
//! Everything that depends on the window family lives in the `impl WindowKind`
//! block below, so a new family is added in one place.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// Below this |x| the quadratic-spectral window is evaluated by its Taylor series.
const QS_SERIES_CUTOFF: f64 = 2e-2;

/// Second differences smaller than this are treated as exact zeros.
pub(crate) const DELTA2_ZERO: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WindowKind {
    Bartlett,
    #[serde(rename = "th")]
    TukeyHanning,
    #[serde(rename = "qs")]
    QuadraticSpectral,
}

impl WindowKind {
    pub const ALL: [WindowKind; 3] = [
        WindowKind::Bartlett,
        WindowKind::TukeyHanning,
        WindowKind::QuadraticSpectral,
    ];

    /// `k(x)`. No validation; non-finite input propagates.
    pub fn weight(self, x: f64) -> f64 {
        let ax = x.abs();
        match self {
            WindowKind::Bartlett => {
                if ax < 1.0 {
                    1.0 - ax
                } else {
                    0.0
                }
            }
            WindowKind::TukeyHanning => {
                if ax < 1.0 {
                    0.5 + 0.5 * (PI * ax).cos()
                } else {
                    0.0
                }
            }
            WindowKind::QuadraticSpectral => {
                let z = 6.0 * PI * ax / 5.0;
                if ax < QS_SERIES_CUTOFF {
                    // 3 (sin z / z - cos z) / z^2 = 1 - z^2/10 + z^4/280 - z^6/15120 + ...
                    let z2 = z * z;
                    1.0 - z2 / 10.0 + z2 * z2 / 280.0 - z2 * z2 * z2 / 15120.0
                } else {
                    3.0 * (z.sin() / z - z.cos()) / (z * z)
                }
            }
        }
    }

    /// True when `k(x) = 0` for `|x| >= 1`.
    pub fn is_truncated(self) -> bool {
        !matches!(self, WindowKind::QuadraticSpectral)
    }

    pub fn constants(self) -> WindowConstants {
        match self {
            WindowKind::Bartlett => WindowConstants {
                q: 1,
                k_q: 1.0,
                l2sq: 2.0 / 3.0,
            },
            WindowKind::TukeyHanning => WindowConstants {
                q: 2,
                k_q: PI * PI / 4.0,
                l2sq: 0.75,
            },
            WindowKind::QuadraticSpectral => WindowConstants {
                q: 2,
                k_q: 1.4212,
                l2sq: 1.0,
            },
        }
    }

    /// Closed form of `∫ k_L(x)^2 dx` over the real line.
    fn lugsail_l2sq(self, r: f64, c: f64) -> f64 {
        if r == 1.0 || c == 0.0 {
            return self.constants().l2sq;
        }
        let scale = 1.0 / ((1.0 - c) * (1.0 - c));
        match self {
            WindowKind::Bartlett => {
                (2.0 / 3.0) * scale * (1.0 + c * c / r - 3.0 * c / r + c / (r * r))
            }
            WindowKind::TukeyHanning => {
                let r3 = r * r * r;
                let cross = (r3 * (PI / r).sin() + PI * r * r - PI) / (PI * r3 - PI * r);
                0.75 * scale * (1.0 + c * c / r - 4.0 * c / 3.0 * cross)
            }
            WindowKind::QuadraticSpectral => {
                let cross = ((r - 1.0).powi(3) * (1.0 + 3.0 * r + r * r)
                    - (r + 1.0).powi(3) * (1.0 - 3.0 * r + r * r))
                    / (4.0 * r * r * r);
                scale * (1.0 + c * c / r - c * cross)
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            WindowKind::Bartlett => "bartlett",
            WindowKind::TukeyHanning => "th",
            WindowKind::QuadraticSpectral => "qs",
        }
    }
}

impl fmt::Display for WindowKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WindowKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bartlett" => Ok(WindowKind::Bartlett),
            "th" => Ok(WindowKind::TukeyHanning),
            "qs" => Ok(WindowKind::QuadraticSpectral),
            other => Err(Error::param(format!(
                "unknown window {other:?} (expected bartlett, th or qs)"
            ))),
        }
    }
}

/// Smoothness constants of a base window at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowConstants {
    /// Characteristic exponent: `lim (1 - k(x)) / |x|^q` is finite and positive.
    pub q: u32,
    /// That limit.
    pub k_q: f64,
    /// `∫ k(x)^2 dx`.
    pub l2sq: f64,
}

/// A base window together with its lugsail parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowSpec {
    pub kind: WindowKind,
    pub r: u32,
    pub c: f64,
}

impl WindowSpec {
    pub fn new(kind: WindowKind, r: u32, c: f64) -> Result<Self> {
        if r < 1 {
            return Err(Error::param(format!(
                "lugsail ratio r must be >= 1, got {r}"
            )));
        }
        if !(0.0..1.0).contains(&c) {
            return Err(Error::param(format!(
                "lugsail c must lie in [0, 1), got {c}"
            )));
        }
        Ok(WindowSpec { kind, r, c })
    }

    /// The untransformed window (`r = 1`, `c = 0`).
    pub fn base(kind: WindowKind) -> Self {
        WindowSpec { kind, r: 1, c: 0.0 }
    }

    /// Lugsail window with `c = 2 / (1 + r^q)`.
    pub fn balanced(kind: WindowKind, r: u32) -> Result<Self> {
        WindowSpec::new(kind, r, balanced_c(r, kind.constants().q)?)
    }

    /// Lugsail window with `c = r^-q`, which cancels the first-order bias.
    pub fn zero_bias(kind: WindowKind, r: u32) -> Result<Self> {
        WindowSpec::new(kind, r, zero_bias_c(r, kind.constants().q)?)
    }

    pub fn is_base(&self) -> bool {
        self.r == 1 || self.c == 0.0
    }

    /// `1 / (1 - c)` and `c / (1 - c)`.
    pub fn coefficients(&self) -> (f64, f64) {
        (1.0 / (1.0 - self.c), self.c / (1.0 - self.c))
    }

    /// Evaluate `k_L(x)`.
    pub fn weight(&self, x: f64) -> f64 {
        if self.is_base() {
            return self.kind.weight(x);
        }
        let (a, b) = self.coefficients();
        a * self.kind.weight(x) - b * self.kind.weight(f64::from(self.r) * x)
    }
}

/// `k(x)` for a base window, rejecting non-finite arguments.
pub fn eval_window(kind: WindowKind, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain(format!(
            "window argument must be finite, got {x}"
        )));
    }
    Ok(kind.weight(x))
}

/// `k_L(x)` for a lugsail spec.
pub fn eval_lugsail(spec: &WindowSpec, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain(format!(
            "window argument must be finite, got {x}"
        )));
    }
    Ok(spec.weight(x))
}

/// The `c` whose lugsail first-order bias is the negative of the base window's:
/// `(1 - c r^q) / (1 - c) = -1`.
pub fn balanced_c(r: u32, q: u32) -> Result<f64> {
    if r < 2 || q < 1 {
        return Err(Error::param(format!(
            "balanced c needs r >= 2 and q >= 1 (got r = {r}, q = {q}); r = 1 would give c = 1"
        )));
    }
    Ok(2.0 / (1.0 + f64::from(r).powi(q as i32)))
}

/// The `c` that zeroes the lugsail first-order bias, `r^-q`.
pub fn zero_bias_c(r: u32, q: u32) -> Result<f64> {
    if r < 2 || q < 1 {
        return Err(Error::param(format!(
            "zero-bias c needs r >= 2 and q >= 1 (got r = {r}, q = {q}); r = 1 would give c = 1"
        )));
    }
    Ok(f64::from(r).powi(-(q as i32)))
}

pub fn window_constants(kind: WindowKind) -> WindowConstants {
    kind.constants()
}

/// `∫ k_L(x)^2 dx` in closed form.
pub fn lugsail_l2sq(spec: &WindowSpec) -> f64 {
    spec.kind.lugsail_l2sq(f64::from(spec.r), spec.c)
}

/// `k((s-1)/b) - 2 k(s/b) + k((s+1)/b)` for the (possibly lugsail) window.
///
/// The quadratic-spectral window is not truncated here; callers bound `s` by `b`.
pub fn second_difference(spec: &WindowSpec, s: usize, b: usize) -> Result<f64> {
    if s < 1 || s > b {
        return Err(Error::domain(format!(
            "second difference needs 1 <= s <= b, got s = {s}, b = {b}"
        )));
    }
    let bf = b as f64;
    let sf = s as f64;
    Ok(spec.weight((sf - 1.0) / bf) - 2.0 * spec.weight(sf / bf) + spec.weight((sf + 1.0) / bf))
}
