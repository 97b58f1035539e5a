//! Significance of a sample correlation.
//!
//! Under the null of no linear association, `t = r * sqrt(df / (1 - r^2))`
//! follows Student's t with `df = M - 2`. The two-tailed tail mass reduces to
//! `I_{1-r^2}(df/2, 1/2)`, which is what gets evaluated here.

use super::correlation::MIN_SAMPLES;
use super::special::regularized_beta;
use super::StatsError;

pub const DEFAULT_ALPHA: f64 = 0.05;

/// Two-tailed p-value for a correlation `r` observed over `samples` pairs.
pub fn corr_p_value(r: f64, samples: usize) -> Result<f64, StatsError> {
    if samples < MIN_SAMPLES {
        return Err(StatsError::InsufficientData { samples });
    }
    if !(-1.0..=1.0).contains(&r) {
        return Err(StatsError::InvalidCorrelation(r));
    }
    let a = r.abs();
    if a == 1.0 {
        return Ok(0.0);
    }
    if a == 0.0 {
        return Ok(1.0);
    }
    let df = (samples - 2) as f64;
    let x = (1.0 - a) * (1.0 + a);
    Ok(regularized_beta(0.5 * df, 0.5, x).clamp(0.0, 1.0))
}

/// `t` statistic for a correlation, infinite at `|r| = 1`.
pub fn t_statistic(r: f64, samples: usize) -> f64 {
    let df = samples.saturating_sub(2) as f64;
    r * (df / ((1.0 - r) * (1.0 + r))).sqrt()
}

/// Decision for one null hypothesis at level `alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypothesisTest {
    pub alpha: f64,
    pub p_value: f64,
    pub rejected: bool,
}

impl HypothesisTest {
    pub fn decide(p_value: f64, alpha: f64) -> Self {
        Self {
            alpha,
            p_value,
            rejected: p_value < alpha,
        }
    }
}

pub fn validate_alpha(alpha: f64) -> Result<f64, StatsError> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(alpha)
    } else {
        Err(StatsError::InvalidAlpha(alpha))
    }
}
