//! One-parameter sweeps with repeated seeded runs per value.

use std::fmt::Write as _;

use crate::profiler::{derive_seed, run_batch, ProfileError};
use crate::sim::{ArenaSpec, CostModel, Parameter, RunRecord, WsnConfig};

pub const SWEEP_CSV_HEADER: &str = "value,mean_energy,std_energy,mean_delivered,std_delivered,repeats";

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub mean_energy: f64,
    pub std_energy: f64,
    pub mean_delivered: f64,
    pub std_delivered: f64,
    pub repeats: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub parameter: Parameter,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(SWEEP_CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let value = if self.parameter.is_integer() {
                format!("{}", r.value as i64)
            } else {
                format!("{}", r.value)
            };
            let _ = writeln!(
                out,
                "{value},{},{},{},{},{}",
                r.mean_energy, r.std_energy, r.mean_delivered, r.std_delivered, r.repeats
            );
        }
        out
    }
}

/// Mean and sample standard deviation (zero for a single observation).
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}

/// Runs `repeats` simulations per value with `parameter` overridden in
/// `baseline`. Repeat `r` uses the same seed for every value, so curves
/// compare like with like.
#[allow(clippy::too_many_arguments)]
pub fn run_sweep(
    parameter: Parameter,
    values: &[f64],
    baseline: &WsnConfig,
    arena: &ArenaSpec,
    cost: &CostModel,
    repeats: usize,
    master_seed: u64,
    workers: usize,
) -> Result<SweepResult, ProfileError> {
    if repeats == 0 {
        return Err(ProfileError::Config("repeats must be at least 1".into()));
    }
    let jobs: Vec<(WsnConfig, u64)> = values
        .iter()
        .flat_map(|&v| {
            let config = baseline.with(parameter, v);
            (0..repeats as u64).map(move |r| (config, derive_seed(master_seed, r)))
        })
        .collect();
    let records = run_batch(&jobs, arena, cost, workers)?;
    let rows = values
        .iter()
        .zip(records.chunks(repeats))
        .map(|(&value, runs)| summarize(baseline.with(parameter, value).get(parameter), runs))
        .collect();
    Ok(SweepResult { parameter, rows })
}

fn summarize(value: f64, runs: &[RunRecord]) -> SweepRow {
    let energy: Vec<f64> = runs.iter().map(|r| r.total_energy).collect();
    let delivered: Vec<f64> = runs.iter().map(|r| r.packets_delivered as f64).collect();
    let (mean_energy, std_energy) = mean_std(&energy);
    let (mean_delivered, std_delivered) = mean_std(&delivered);
    SweepRow {
        value,
        mean_energy,
        std_energy,
        mean_delivered,
        std_delivered,
        repeats: runs.len(),
    }
}

/// Parses `2,4,8` or an inclusive `start:stop:step` range.
pub fn parse_values(text: &str) -> Result<Vec<f64>, String> {
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| format!("invalid number {s:?}"))
    };
    let values = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected start:stop:step, got {text:?}"));
        }
        let (start, stop, step) = (parse(parts[0])?, parse(parts[1])?, parse(parts[2])?);
        if step.is_nan() || step <= 0.0 || stop < start {
            return Err(format!("empty or invalid range {text:?}"));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| start + i as f64 * step).collect()
    } else {
        text.split(',').map(parse).collect::<Result<Vec<_>, _>>()?
    };
    if values.is_empty() {
        return Err("no sweep values".into());
    }
    Ok(values)
}
