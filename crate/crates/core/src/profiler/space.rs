use serde::{Deserialize, Serialize};

use super::ProfileError;
use crate::kv::{KvConfig, KvError};
use crate::sim::Parameter;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DimensionKind {
    Integer,
    Real,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Dimension {
    pub parameter: Parameter,
    pub kind: DimensionKind,
    pub low: f64,
    pub high: f64,
}

impl Dimension {
    pub fn new(parameter: Parameter, low: f64, high: f64) -> Self {
        let kind = if parameter.is_integer() {
            DimensionKind::Integer
        } else {
            DimensionKind::Real
        };
        Self {
            parameter,
            kind,
            low,
            high,
        }
    }

    pub fn contains(&self, value: f64) -> bool {
        value >= self.low && value <= self.high
    }

    /// Maps a unit coordinate `u` in `[0, 1)` into the bounds. Integer
    /// dimensions split `[low, high + 1)` into unit cells so every value of
    /// the inclusive range is equally likely.
    pub fn from_unit(&self, u: f64) -> f64 {
        match self.kind {
            DimensionKind::Real => (self.low + u * (self.high - self.low)).min(self.high),
            DimensionKind::Integer => {
                let span = self.high - self.low + 1.0;
                (self.low + (u * span).floor()).min(self.high)
            }
        }
    }

    fn validate(&self) -> Result<(), ProfileError> {
        let name = self.parameter.name();
        let bad = |m: String| Err(ProfileError::Config(format!("{name}: {m}")));
        if !(self.low.is_finite() && self.high.is_finite()) {
            return bad("bounds must be finite".into());
        }
        if self.low <= 0.0 {
            return bad(format!("low bound {} must be positive", self.low));
        }
        if self.low >= self.high {
            return bad(format!("degenerate range [{}, {}]", self.low, self.high));
        }
        if self.kind == DimensionKind::Integer
            && (self.low.fract() != 0.0 || self.high.fract() != 0.0)
        {
            return bad(format!(
                "integer range needs integer bounds, got [{}, {}]",
                self.low, self.high
            ));
        }
        Ok(())
    }
}

/// Sampling bounds for all eight configuration parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterSpace {
    pub dims: [Dimension; 8],
}

impl Default for ParameterSpace {
    fn default() -> Self {
        let bounds = |p: Parameter| match p {
            Parameter::SensorInterval => (1.0, 30.0),
            Parameter::SenseRadius => (5.0, 50.0),
            Parameter::TransmissionRadius => (20.0, 100.0),
            Parameter::TransmissionInterval => (1.0, 30.0),
            Parameter::NumNeighbors => (2.0, 20.0),
            Parameter::NumHops => (1.0, 20.0),
            Parameter::NetworkDensity => (0.0002, 0.002),
            Parameter::NumSinks => (1.0, 8.0),
        };
        Self {
            dims: Parameter::ALL.map(|p| {
                let (lo, hi) = bounds(p);
                Dimension::new(p, lo, hi)
            }),
        }
    }
}

impl ParameterSpace {
    pub fn dim(&self, p: Parameter) -> &Dimension {
        &self.dims[p.index()]
    }

    pub fn set_bounds(&mut self, p: Parameter, low: f64, high: f64) {
        self.dims[p.index()] = Dimension::new(p, low, high);
    }

    pub fn validate(&self) -> Result<(), ProfileError> {
        for (i, d) in self.dims.iter().enumerate() {
            if d.parameter != Parameter::ALL[i] {
                return Err(ProfileError::Config(format!(
                    "dimension {i} is {} but should be {}",
                    d.parameter,
                    Parameter::ALL[i]
                )));
            }
            d.validate()?;
        }
        Ok(())
    }

    pub fn is_kv_key(key: &str) -> bool {
        key.split_once('.').is_some_and(|(p, bound)| {
            p.parse::<Parameter>().is_ok() && (bound == "low" || bound == "high")
        })
    }

    /// Defaults overridden by `<parameter>.low` / `<parameter>.high` keys.
    pub fn from_kv(kv: &KvConfig) -> Result<Self, KvError> {
        let mut space = Self::default();
        for p in Parameter::ALL {
            let d = space.dims[p.index()];
            let mut low = d.low;
            let mut high = d.high;
            kv.set_if_present(&format!("{}.low", p.name()), "number", &mut low)?;
            kv.set_if_present(&format!("{}.high", p.name()), "number", &mut high)?;
            space.set_bounds(p, low, high);
        }
        Ok(space)
    }
}
