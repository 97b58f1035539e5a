//! Line-oriented dataset files: a JSON header line, then one JSON run
//! record per line.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::sampling::Scheme;
use super::space::ParameterSpace;
use super::ProfileError;
use crate::sim::{ArenaSpec, CostModel, RunRecord};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetHeader {
    pub arena: ArenaSpec,
    pub cost: CostModel,
    pub space: ParameterSpace,
    pub scheme: Scheme,
    pub master_seed: u64,
    /// Number of records declared to follow.
    pub m: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileDataset {
    pub header: DatasetHeader,
    pub records: Vec<RunRecord>,
}

impl ProfileDataset {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

pub fn write_dataset(dataset: &ProfileDataset, mut out: impl Write) -> Result<(), ProfileError> {
    let header = DatasetHeader {
        m: dataset.records.len(),
        ..dataset.header.clone()
    };
    let line = serde_json::to_string(&header).expect("header serializes");
    writeln!(out, "{line}")?;
    for r in &dataset.records {
        writeln!(out, "{}", r.to_json_line())?;
    }
    out.flush()?;
    Ok(())
}

pub fn save_dataset(dataset: &ProfileDataset, path: impl AsRef<Path>) -> Result<(), ProfileError> {
    let file = File::create(path.as_ref())?;
    write_dataset(dataset, BufWriter::new(file))
}

/// Reads a dataset. A header repeated mid-file (concatenated campaigns) is
/// accepted only if its arena and cost model match the first header.
pub fn read_dataset(input: impl BufRead) -> Result<ProfileDataset, ProfileError> {
    let mut header: Option<DatasetHeader> = None;
    let mut declared = 0usize;
    let mut records = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let parse_err = |message: String| ProfileError::Parse {
            line: line_no,
            message,
        };
        let value: Value =
            serde_json::from_str(&line).map_err(|e| parse_err(format!("invalid JSON: {e}")))?;
        let is_header = value.get("arena").is_some();
        match (&header, is_header) {
            (None, true) => {
                let h: DatasetHeader = serde_json::from_value(value)
                    .map_err(|e| parse_err(format!("bad header: {e}")))?;
                declared = h.m;
                header = Some(h);
            }
            (None, false) => return Err(parse_err("missing dataset header".into())),
            (Some(first), true) => {
                let h: DatasetHeader = serde_json::from_value(value)
                    .map_err(|e| parse_err(format!("bad header: {e}")))?;
                if h.arena != first.arena || h.cost != first.cost {
                    return Err(ProfileError::Integrity(format!(
                        "line {line_no}: arena or cost model differs from the first header"
                    )));
                }
                declared += h.m;
            }
            (Some(_), false) => {
                let r: RunRecord = serde_json::from_value(value)
                    .map_err(|e| parse_err(format!("bad run record: {e}")))?;
                if r.packets_delivered > r.packets_generated
                    || !(r.total_energy.is_finite() && r.total_energy >= 0.0)
                {
                    return Err(parse_err("run record violates its invariants".into()));
                }
                records.push(r);
            }
        }
    }
    let Some(mut header) = header else {
        return Err(ProfileError::Parse {
            line: 1,
            message: "missing dataset header".into(),
        });
    };
    if records.len() != declared {
        return Err(ProfileError::Integrity(format!(
            "header declares {declared} records but {} were read",
            records.len()
        )));
    }
    header.m = records.len();
    Ok(ProfileDataset { header, records })
}

pub fn load_dataset(path: impl AsRef<Path>) -> Result<ProfileDataset, ProfileError> {
    read_dataset(BufReader::new(File::open(path.as_ref())?))
}
