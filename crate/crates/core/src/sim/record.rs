//! One profiling sample and its JSON line encoding.

use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;

use super::config::WsnConfig;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub config: WsnConfig,
    pub seed: u64,
    #[serde(serialize_with = "serialize_energy")]
    pub total_energy: f64,
    pub packets_generated: u64,
    pub packets_delivered: u64,
    pub nodes_died: u64,
    pub duration: u64,
}

impl RunRecord {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("run record serializes")
    }

    pub fn from_json_line(line: &str) -> serde_json::Result<Self> {
        serde_json::from_str(line)
    }
}

/// Plain decimal notation with at least 17 significant digits, enough for
/// any `f64` to survive a text round trip.
pub fn format_energy(value: f64) -> String {
    if value == 0.0 || !value.is_finite() {
        return if value.is_finite() { "0.0".into() } else { "null".into() };
    }
    let int_digits = value.abs().log10().floor() as i32 + 1;
    let frac = (17 - int_digits).max(1) as usize;
    format!("{value:.frac$}")
}

fn serialize_energy<S: Serializer>(value: &f64, s: S) -> Result<S::Ok, S::Error> {
    let raw = RawValue::from_string(format_energy(*value)).map_err(serde::ser::Error::custom)?;
    raw.serialize(s)
}
