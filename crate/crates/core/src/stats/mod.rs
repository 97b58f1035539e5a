//! Effective-parameter extraction.
//!
//! Each configuration parameter column is compared with overall energy by
//! a correlation significance test (p-value), the normalized linear
//! cross-correlation, and the same correlation on element-wise squares.

mod correlation;
mod pvalue;
mod report;
pub mod special;

use thiserror::Error;

pub use correlation::{linear_corr, linear_corr_series, order_m_corr, Series, MIN_SAMPLES};
pub use pvalue::{corr_p_value, t_statistic, validate_alpha, HypothesisTest, DEFAULT_ALPHA};
pub use report::{
    extract_effective, format_p_value, parse_csv, render_table, rows_to_csv, screen_column,
    sort_rows, ReportParseError, SensitivityReport, SensitivityRow, CSV_HEADER, NONLINEAR_ORDER,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("need at least 3 samples, got {samples}")]
    InsufficientData { samples: usize },
    #[error("series lengths differ ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),
    #[error("correlation order must be at least 1")]
    InvalidOrder,
    #[error("correlation {0} outside [-1, 1]")]
    InvalidCorrelation(f64),
    #[error("alpha {0} outside (0, 1)")]
    InvalidAlpha(f64),
}
