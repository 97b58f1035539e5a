//! Per-parameter sensitivity screening and its CSV / text renderings.

use std::cmp::Ordering;
use std::fmt::Write as _;

use super::correlation::{linear_corr_series, Series, MIN_SAMPLES};
use super::pvalue::{corr_p_value, validate_alpha, HypothesisTest};
use super::StatsError;
use crate::sim::{Parameter, RunRecord};

pub const CSV_HEADER: &str = "parameter,p_value,linear_corr,nonlinear_corr,effective";

/// Order used for the nonlinear correlation column.
pub const NONLINEAR_ORDER: u32 = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityRow {
    pub parameter: String,
    pub p_value: f64,
    pub corr_linear: f64,
    pub corr_nonlinear: f64,
    pub effective: bool,
    /// Set when a statistic could not be computed; the affected numbers are NaN.
    pub diagnostic: Option<String>,
}

impl SensitivityRow {
    /// Rows whose p-value could not be computed.
    pub fn is_degenerate(&self) -> bool {
        self.p_value.is_nan()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityReport {
    pub rows: Vec<SensitivityRow>,
    pub alpha: f64,
    pub samples: usize,
}

impl SensitivityReport {
    pub fn effective(&self) -> impl Iterator<Item = &SensitivityRow> {
        self.rows.iter().filter(|r| r.effective)
    }

    pub fn row(&self, parameter: &str) -> Option<&SensitivityRow> {
        self.rows.iter().find(|r| r.parameter == parameter)
    }

    pub fn diagnostics(&self) -> impl Iterator<Item = (&str, &str)> {
        self.rows
            .iter()
            .filter_map(|r| r.diagnostic.as_deref().map(|d| (r.parameter.as_str(), d)))
    }

    pub fn to_csv(&self) -> String {
        rows_to_csv(&self.rows)
    }

    pub fn to_table(&self) -> String {
        render_table(&self.rows, Some((self.alpha, self.samples)))
    }
}

/// Screens every configuration parameter against overall energy.
pub fn extract_effective(records: &[RunRecord], alpha: f64) -> Result<SensitivityReport, StatsError> {
    let alpha = validate_alpha(alpha)?;
    if records.len() < MIN_SAMPLES {
        return Err(StatsError::InsufficientData {
            samples: records.len(),
        });
    }
    let energy = Series::new(records.iter().map(|r| r.total_energy).collect());
    let energy_sq = energy.powi(NONLINEAR_ORDER);
    let columns = Parameter::ALL.map(|p| {
        (
            p.name().to_string(),
            Series::new(records.iter().map(|r| r.config.get(p)).collect()),
        )
    });
    let rows = columns
        .into_iter()
        .map(|(name, column)| screen_column(name, &column, &energy, &energy_sq, alpha))
        .collect();
    Ok(SensitivityReport {
        rows: sort_rows(rows),
        alpha,
        samples: records.len(),
    })
}

/// Screens one named column against `energy`; `energy_sq` is its squared form.
pub fn screen_column(
    name: String,
    column: &Series,
    energy: &Series,
    energy_sq: &Series,
    alpha: f64,
) -> SensitivityRow {
    let mut row = SensitivityRow {
        parameter: name,
        p_value: f64::NAN,
        corr_linear: f64::NAN,
        corr_nonlinear: f64::NAN,
        effective: false,
        diagnostic: None,
    };
    match linear_corr_series(column, energy) {
        Ok(r) => {
            row.corr_linear = r;
            let p = corr_p_value(r, column.len()).expect("sample size checked");
            row.p_value = p;
            row.effective = HypothesisTest::decide(p, alpha).rejected;
        }
        Err(e) => {
            row.diagnostic = Some(format!("linear correlation undefined: {e}"));
            return row;
        }
    }
    match linear_corr_series(&column.powi(NONLINEAR_ORDER), energy_sq) {
        Ok(r) => row.corr_nonlinear = r,
        Err(e) => row.diagnostic = Some(format!("nonlinear correlation undefined: {e}")),
    }
    row
}

/// Ascending p-value, ties by name; degenerate rows last, by name.
pub fn sort_rows(mut rows: Vec<SensitivityRow>) -> Vec<SensitivityRow> {
    rows.sort_by(|a, b| match (a.is_degenerate(), b.is_degenerate()) {
        (false, false) => a
            .p_value
            .total_cmp(&b.p_value)
            .then_with(|| a.parameter.cmp(&b.parameter)),
        (true, true) => a.parameter.cmp(&b.parameter),
        (false, true) => Ordering::Less,
        (true, false) => Ordering::Greater,
    });
    rows
}

/// Scientific notation with a five-digit mantissa and an at-least-two-digit
/// exponent, e.g. `3.7979e-05`.
pub fn format_p_value(p: f64) -> String {
    if !p.is_finite() {
        return "NaN".into();
    }
    let s = format!("{p:.4e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

fn format_corr(r: f64) -> String {
    if r.is_finite() {
        format!("{r:.6}")
    } else {
        "NaN".into()
    }
}

fn effective_cell(row: &SensitivityRow) -> &'static str {
    if row.is_degenerate() {
        "degenerate"
    } else if row.effective {
        "true"
    } else {
        "false"
    }
}

pub fn rows_to_csv(rows: &[SensitivityRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            row.parameter,
            format_p_value(row.p_value),
            format_corr(row.corr_linear),
            format_corr(row.corr_nonlinear),
            effective_cell(row)
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("report line {line}: {message}")]
pub struct ReportParseError {
    pub line: usize,
    pub message: String,
}

/// Parses a CSV written by [`rows_to_csv`].
pub fn parse_csv(text: &str) -> Result<Vec<SensitivityRow>, ReportParseError> {
    let mut lines = text.lines().enumerate();
    let err = |line: usize, message: String| ReportParseError {
        line: line + 1,
        message,
    };
    match lines.next() {
        Some((_, h)) if h.trim() == CSV_HEADER => {}
        Some((i, h)) => return Err(err(i, format!("expected header `{CSV_HEADER}`, found {h:?}"))),
        None => return Err(err(0, "empty report".into())),
    }
    let num = |i: usize, field: &str, what: &str| -> Result<f64, ReportParseError> {
        field
            .trim()
            .parse::<f64>()
            .map_err(|_| err(i, format!("bad {what} {field:?}")))
    };
    let mut rows = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(err(i, format!("expected 5 fields, found {}", fields.len())));
        }
        let (effective, diagnostic) = match fields[4].trim() {
            "true" => (true, None),
            "false" => (false, None),
            "degenerate" => (false, Some("degenerate column".to_string())),
            other => return Err(err(i, format!("bad effective flag {other:?}"))),
        };
        rows.push(SensitivityRow {
            parameter: fields[0].trim().to_string(),
            p_value: num(i, fields[1], "p-value")?,
            corr_linear: num(i, fields[2], "linear correlation")?,
            corr_nonlinear: num(i, fields[3], "nonlinear correlation")?,
            effective,
            diagnostic,
        });
    }
    Ok(rows)
}

/// Aligned plain-text table; effective rows are starred.
pub fn render_table(rows: &[SensitivityRow], footer: Option<(f64, usize)>) -> String {
    let headers = ["Parameter", "P-value", "Linear corr", "Nonlinear corr", "Effective"];
    let cells: Vec<[String; 5]> = rows
        .iter()
        .map(|r| {
            [
                r.parameter.clone(),
                format_p_value(r.p_value),
                format_corr(r.corr_linear),
                format_corr(r.corr_nonlinear),
                match effective_cell(r) {
                    "true" => "*".to_string(),
                    "false" => String::new(),
                    other => other.to_string(),
                },
            ]
        })
        .collect();
    let mut widths = headers.map(str::len);
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    let line = |out: &mut String, row: [&str; 5]| {
        let _ = write!(out, "{:<w$}", row[0], w = widths[0]);
        for k in 1..5 {
            let _ = write!(out, "  {:>w$}", row[k], w = widths[k]);
        }
        let trimmed = out.trim_end().len();
        out.truncate(trimmed);
        out.push('\n');
    };
    line(&mut out, headers);
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    line(&mut out, std::array::from_fn(|k| rule[k].as_str()));
    for row in &cells {
        line(&mut out, std::array::from_fn(|k| row[k].as_str()));
    }
    if let Some((alpha, samples)) = footer {
        let _ = writeln!(out, "\n* p-value < {alpha} (M = {samples})");
    }
    for r in rows {
        if let Some(d) = &r.diagnostic {
            let _ = writeln!(out, "warning: {}: {d}", r.parameter);
        }
    }
    out
}
