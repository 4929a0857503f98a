//! Sample mean and lag-`s` sample autocovariance matrices.
//!
//! ```text
//! R̂(s) = (1/n) Σ_{t=1}^{n-s} (Y_t - Ȳ)(Y_{t+s} - Ȳ)ᵀ
//! ```
//!
//! The divisor is always `n`. Negative lags are never stored: `R̂(-s) = R̂(s)ᵀ`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// `n × p` block of observations; row `t` is `Y_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleMatrix {
    data: DMatrix<f64>,
}

impl SampleMatrix {
    pub fn new(data: DMatrix<f64>) -> Result<Self> {
        let (n, p) = data.shape();
        if n < 2 {
            return Err(Error::param(format!(
                "need at least 2 observations, got {n}"
            )));
        }
        if p < 1 {
            return Err(Error::param("need at least one component"));
        }
        if let Some(idx) = data.iter().position(|v| !v.is_finite()) {
            // column-major storage
            let (row, col) = (idx % n, idx / n);
            return Err(Error::domain(format!(
                "non-finite observation at row {}, column {}",
                row + 1,
                col + 1
            )));
        }
        Ok(SampleMatrix { data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let p = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != p) {
            return Err(Error::param(format!(
                "row {} has {} entries, expected {p}",
                bad + 1,
                rows[bad].len()
            )));
        }
        SampleMatrix::new(DMatrix::from_fn(n, p, |i, j| rows[i][j]))
    }

    /// A univariate series.
    pub fn from_series(values: &[f64]) -> Result<Self> {
        SampleMatrix::new(DMatrix::from_column_slice(values.len(), 1, values))
    }

    pub fn n(&self) -> usize {
        self.data.nrows()
    }

    pub fn p(&self) -> usize {
        self.data.ncols()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.data
    }

    /// The first `m` observations.
    pub fn prefix(&self, m: usize) -> Result<SampleMatrix> {
        if m > self.n() {
            return Err(Error::domain(format!(
                "prefix of length {m} requested from {} observations",
                self.n()
            )));
        }
        SampleMatrix::new(self.data.rows(0, m).into_owned())
    }

    /// Column `j` as a contiguous slice.
    pub(crate) fn column(&self, j: usize) -> &[f64] {
        let n = self.n();
        &self.data.as_slice()[j * n..(j + 1) * n]
    }
}

/// Lag-`s` sample autocovariance `R̂(s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LagCovMatrix {
    pub lag: usize,
    pub value: DMatrix<f64>,
}

pub fn sample_mean(y: &SampleMatrix) -> DVector<f64> {
    let n = y.n() as f64;
    DVector::from_iterator(
        y.p(),
        (0..y.p()).map(|j| y.column(j).iter().sum::<f64>() / n),
    )
}

pub fn sample_lag_cov(y: &SampleMatrix, s: usize) -> Result<LagCovMatrix> {
    let centered = Centered::new(y);
    Ok(LagCovMatrix {
        lag: s,
        value: centered.lag_cov(s)?,
    })
}

/// `R̂(0), …, R̂(max_lag)` from a single centred copy of the data.
pub fn sample_lag_covs(y: &SampleMatrix, max_lag: usize) -> Result<Vec<LagCovMatrix>> {
    let centered = Centered::new(y);
    (0..=max_lag)
        .map(|s| {
            Ok(LagCovMatrix {
                lag: s,
                value: centered.lag_cov(s)?,
            })
        })
        .collect()
}

/// Mean-centred, column-major copy of a sample.
pub(crate) struct Centered {
    n: usize,
    p: usize,
    cols: Vec<f64>,
}

impl Centered {
    pub(crate) fn new(y: &SampleMatrix) -> Self {
        let mean = sample_mean(y);
        let (n, p) = (y.n(), y.p());
        let mut cols = Vec::with_capacity(n * p);
        for j in 0..p {
            cols.extend(y.column(j).iter().map(|v| v - mean[j]));
        }
        Centered { n, p, cols }
    }

    fn col(&self, j: usize) -> &[f64] {
        &self.cols[j * self.n..(j + 1) * self.n]
    }

    pub(crate) fn lag_cov(&self, s: usize) -> Result<DMatrix<f64>> {
        let (n, p) = (self.n, self.p);
        if s >= n {
            return Err(Error::domain(format!("lag {s} must be below n = {n}")));
        }
        let len = n - s;
        let inv_n = 1.0 / n as f64;
        let mut out = DMatrix::zeros(p, p);
        for i in 0..p {
            let lead = &self.col(i)[..len];
            for j in 0..p {
                out[(i, j)] = dot(lead, &self.col(j)[s..]) * inv_n;
            }
        }
        Ok(out)
    }
}

/// Dot product with a fixed four-way summation order.
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let len = a.len().min(b.len());
    let (a, b) = (&a[..len], &b[..len]);
    let mut acc = [0.0f64; 4];
    let chunks = len / 4;
    for k in 0..chunks {
        let i = 4 * k;
        acc[0] += a[i] * b[i];
        acc[1] += a[i + 1] * b[i + 1];
        acc[2] += a[i + 2] * b[i + 2];
        acc[3] += a[i + 3] * b[i + 3];
    }
    let mut tail = 0.0;
    for i in 4 * chunks..len {
        tail += a[i] * b[i];
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn series(v: &[f64]) -> SampleMatrix {
        SampleMatrix::from_series(v).unwrap()
    }

    #[test]
    fn means() {
        assert_eq!(sample_mean(&series(&[1.0, 2.0, 3.0]))[0], 2.0);
        assert_eq!(sample_mean(&series(&[7.5; 5]))[0], 7.5);
        let y = SampleMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(sample_mean(&y).as_slice(), &[0.5, 0.5]);
    }

    #[test]
    fn hand_evaluated_lags() {
        let y = series(&[1.0, 2.0, 3.0]);
        assert_relative_eq!(sample_lag_cov(&y, 0).unwrap().value[(0, 0)], 2.0 / 3.0);
        assert_eq!(sample_lag_cov(&y, 1).unwrap().value[(0, 0)], 0.0);
        assert!(matches!(sample_lag_cov(&y, 3), Err(Error::Domain(_))));
    }

    #[test]
    fn constant_series_has_zero_autocovariance() {
        let y = SampleMatrix::from_rows(&vec![vec![3.0, -1.0]; 10]).unwrap();
        for s in 0..10 {
            assert!(sample_lag_cov(&y, s)
                .unwrap()
                .value
                .iter()
                .all(|v| *v == 0.0));
        }
    }

    #[test]
    fn batched_matches_single() {
        let rows: Vec<Vec<f64>> = (0..50)
            .map(|t| {
                let t = t as f64;
                vec![(0.3 * t).sin(), (0.17 * t).cos() + 0.01 * t, (t * t).sqrt()]
            })
            .collect();
        let y = SampleMatrix::from_rows(&rows).unwrap();
        let all = sample_lag_covs(&y, 12).unwrap();
        for (s, r) in all.iter().enumerate() {
            assert_eq!(r.lag, s);
            assert_eq!(r.value, sample_lag_cov(&y, s).unwrap().value);
        }
    }

    #[test]
    fn validation() {
        assert!(SampleMatrix::from_series(&[1.0]).is_err());
        assert!(SampleMatrix::from_series(&[1.0, f64::NAN]).is_err());
        assert!(SampleMatrix::from_rows(&[vec![1.0, 2.0], vec![1.0]]).is_err());
    }

    #[test]
    fn dot_handles_tail() {
        let a: Vec<f64> = (1..=7).map(f64::from).collect();
        assert_eq!(dot(&a, &a), 140.0);
    }
}
