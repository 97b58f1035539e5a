//! Normalized cross-correlation and its element-wise power variant.

use super::StatsError;

/// Smallest sample size accepted by any correlation or significance routine.
pub const MIN_SAMPLES: usize = 3;

/// A column of samples together with its mean.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    values: Vec<f64>,
    mean: f64,
}

impl Series {
    pub fn new(values: Vec<f64>) -> Self {
        let mean = if values.is_empty() {
            f64::NAN
        } else {
            values.iter().sum::<f64>() / values.len() as f64
        };
        Self { values, mean }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }

    /// Element-wise `order`-th power.
    pub fn powi(&self, order: u32) -> Series {
        if order == 1 {
            return self.clone();
        }
        Series::new(self.values.iter().map(|v| pow(*v, order)).collect())
    }
}

impl From<Vec<f64>> for Series {
    fn from(values: Vec<f64>) -> Self {
        Series::new(values)
    }
}

impl From<&[f64]> for Series {
    fn from(values: &[f64]) -> Self {
        Series::new(values.to_vec())
    }
}

fn pow(v: f64, order: u32) -> f64 {
    match i32::try_from(order) {
        Ok(k) => v.powi(k),
        Err(_) => v.powf(order as f64),
    }
}

fn check_pair(x: &Series, y: &Series) -> Result<(), StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < MIN_SAMPLES {
        return Err(StatsError::InsufficientData { samples: x.len() });
    }
    if x.is_constant() {
        return Err(StatsError::Degenerate("first series is constant"));
    }
    if y.is_constant() {
        return Err(StatsError::Degenerate("second series is constant"));
    }
    Ok(())
}

/// Centered cross product over the root of the centered sums of squares,
/// computed in two passes and clamped to `[-1, 1]`.
pub fn linear_corr_series(x: &Series, y: &Series) -> Result<f64, StatsError> {
    check_pair(x, y)?;
    let (mx, my) = (x.mean(), y.mean());
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (&a, &b) in x.values().iter().zip(y.values()) {
        let dx = a - mx;
        let dy = b - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    let denom = (sxx * syy).sqrt();
    if denom.is_nan() || denom <= 0.0 || !denom.is_finite() {
        return Err(StatsError::Degenerate("zero or non-finite variance"));
    }
    Ok((sxy / denom).clamp(-1.0, 1.0))
}

pub fn linear_corr(x: &[f64], y: &[f64]) -> Result<f64, StatsError> {
    linear_corr_series(&Series::from(x), &Series::from(y))
}

/// Correlation of the element-wise `order`-th powers of both series.
/// Order 2 is the nonlinear measure; order 1 is exactly [`linear_corr`].
pub fn order_m_corr(x: &[f64], y: &[f64], order: u32) -> Result<f64, StatsError> {
    if order == 0 {
        return Err(StatsError::InvalidOrder);
    }
    let (x, y) = (Series::from(x), Series::from(y));
    linear_corr_series(&x.powi(order), &y.powi(order))
}
