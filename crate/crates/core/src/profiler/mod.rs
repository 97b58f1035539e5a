//! Profiling campaigns: sample configurations, run them, persist the results.

mod dataset;
mod sampling;
mod space;

use rayon::prelude::*;
use thiserror::Error;

pub use dataset::{load_dataset, read_dataset, save_dataset, write_dataset, DatasetHeader, ProfileDataset};
pub use sampling::{derive_seed, sample_configs, SamplePlan, Scheme};
pub use space::{Dimension, DimensionKind, ParameterSpace};

use crate::sim::{run, ArenaSpec, CostModel, RunRecord, SimError, WsnConfig};

#[derive(Debug, Error)]
pub enum ProfileError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("run {index} failed: {source}")]
    Run {
        index: usize,
        #[source]
        source: SimError,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("dataset integrity error: {0}")]
    Integrity(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Runs every `(config, seed)` job on `workers` threads. Output order matches
/// job order; on failure the lowest failing index is reported.
pub fn run_batch(
    jobs: &[(WsnConfig, u64)],
    arena: &ArenaSpec,
    cost: &CostModel,
    workers: usize,
) -> Result<Vec<RunRecord>, ProfileError> {
    if workers == 0 {
        return Err(ProfileError::Config("workers must be at least 1".into()));
    }
    let exec = |(c, s): &(WsnConfig, u64)| run(c, arena, cost, *s);
    let results: Vec<Result<RunRecord, SimError>> = if workers == 1 {
        jobs.iter().map(exec).collect()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| ProfileError::Config(format!("thread pool: {e}")))?
            .install(|| jobs.par_iter().map(exec).collect())
    };
    results
        .into_iter()
        .enumerate()
        .map(|(index, r)| r.map_err(|source| ProfileError::Run { index, source }))
        .collect()
}

pub fn execute_plan(
    plan: &SamplePlan,
    arena: &ArenaSpec,
    cost: &CostModel,
    workers: usize,
) -> Result<ProfileDataset, ProfileError> {
    let jobs: Vec<(WsnConfig, u64)> = plan
        .configs
        .iter()
        .copied()
        .zip(plan.seeds.iter().copied())
        .collect();
    let records = run_batch(&jobs, arena, cost, workers)?;
    Ok(ProfileDataset {
        header: DatasetHeader {
            arena: *arena,
            cost: *cost,
            space: plan.space.clone(),
            scheme: plan.scheme,
            master_seed: plan.master_seed,
            m: records.len(),
        },
        records,
    })
}
