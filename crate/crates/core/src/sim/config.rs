//! Network configuration, arena and energy cost model.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::SimError;
use crate::kv::{KvConfig, KvError};

/// The eight tunable network settings, in canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parameter {
    SensorInterval,
    SenseRadius,
    TransmissionRadius,
    TransmissionInterval,
    NumNeighbors,
    NumHops,
    NetworkDensity,
    NumSinks,
}

impl Parameter {
    pub const ALL: [Parameter; 8] = [
        Parameter::SensorInterval,
        Parameter::SenseRadius,
        Parameter::TransmissionRadius,
        Parameter::TransmissionInterval,
        Parameter::NumNeighbors,
        Parameter::NumHops,
        Parameter::NetworkDensity,
        Parameter::NumSinks,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Parameter::SensorInterval => "sensor_interval",
            Parameter::SenseRadius => "sense_radius",
            Parameter::TransmissionRadius => "transmission_radius",
            Parameter::TransmissionInterval => "transmission_interval",
            Parameter::NumNeighbors => "num_neighbors",
            Parameter::NumHops => "num_hops",
            Parameter::NetworkDensity => "network_density",
            Parameter::NumSinks => "num_sinks",
        }
    }

    pub fn index(self) -> usize {
        Parameter::ALL.iter().position(|&p| p == self).unwrap()
    }

    /// Integer-valued settings are counts or tick intervals.
    pub fn is_integer(self) -> bool {
        !matches!(
            self,
            Parameter::SenseRadius | Parameter::TransmissionRadius | Parameter::NetworkDensity
        )
    }

    pub fn valid_names() -> String {
        Parameter::ALL.map(Parameter::name).join(", ")
    }
}

impl fmt::Display for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownParameter(pub String);

impl fmt::Display for UnknownParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unknown parameter `{}` (valid: {})",
            self.0,
            Parameter::valid_names()
        )
    }
}

impl std::error::Error for UnknownParameter {}

impl FromStr for Parameter {
    type Err = UnknownParameter;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Parameter::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| UnknownParameter(s.to_string()))
    }
}

/// One point of the eight-dimensional configuration space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WsnConfig {
    /// Ticks between sensing attempts.
    pub sensor_interval: u32,
    /// Detection range, meters.
    pub sense_radius: f64,
    /// Radio range, meters.
    pub transmission_radius: f64,
    /// Ticks between radio send opportunities.
    pub transmission_interval: u32,
    /// Cap on neighbor-table size.
    pub num_neighbors: u32,
    /// Hop budget for data packets and control cascades.
    pub num_hops: u32,
    /// Nodes per square meter.
    pub network_density: f64,
    pub num_sinks: u32,
}

impl Default for WsnConfig {
    /// Mid-range baseline used by single simulations and sweeps.
    fn default() -> Self {
        Self {
            sensor_interval: 5,
            sense_radius: 25.0,
            transmission_radius: 60.0,
            transmission_interval: 5,
            num_neighbors: 8,
            num_hops: 10,
            network_density: 0.001,
            num_sinks: 2,
        }
    }
}

impl WsnConfig {
    pub fn get(&self, p: Parameter) -> f64 {
        match p {
            Parameter::SensorInterval => self.sensor_interval as f64,
            Parameter::SenseRadius => self.sense_radius,
            Parameter::TransmissionRadius => self.transmission_radius,
            Parameter::TransmissionInterval => self.transmission_interval as f64,
            Parameter::NumNeighbors => self.num_neighbors as f64,
            Parameter::NumHops => self.num_hops as f64,
            Parameter::NetworkDensity => self.network_density,
            Parameter::NumSinks => self.num_sinks as f64,
        }
    }

    /// Sets `p`; integer parameters are rounded to the nearest integer
    /// (negative values saturate at zero and fail validation later).
    pub fn set(&mut self, p: Parameter, value: f64) {
        let int = || value.round().max(0.0).min(u32::MAX as f64) as u32;
        match p {
            Parameter::SensorInterval => self.sensor_interval = int(),
            Parameter::SenseRadius => self.sense_radius = value,
            Parameter::TransmissionRadius => self.transmission_radius = value,
            Parameter::TransmissionInterval => self.transmission_interval = int(),
            Parameter::NumNeighbors => self.num_neighbors = int(),
            Parameter::NumHops => self.num_hops = int(),
            Parameter::NetworkDensity => self.network_density = value,
            Parameter::NumSinks => self.num_sinks = int(),
        }
    }

    pub fn with(mut self, p: Parameter, value: f64) -> Self {
        self.set(p, value);
        self
    }

    pub fn node_count(&self, arena: &ArenaSpec) -> usize {
        let n = (self.network_density * arena.area()).floor();
        if n.is_finite() && n > 0.0 {
            n as usize
        } else {
            0
        }
    }

    pub fn validate(&self, arena: &ArenaSpec) -> Result<(), SimError> {
        let bad = |msg: String| Err(SimError::Config(msg));
        for p in Parameter::ALL {
            let v = self.get(p);
            if !(v.is_finite() && v > 0.0) {
                return bad(format!("{p} must be strictly positive, got {v}"));
            }
        }
        let diag = arena.diagonal();
        if self.sense_radius > diag {
            return bad(format!(
                "sense_radius {} exceeds arena diagonal {diag}",
                self.sense_radius
            ));
        }
        if self.transmission_radius > diag {
            return bad(format!(
                "transmission_radius {} exceeds arena diagonal {diag}",
                self.transmission_radius
            ));
        }
        if self.node_count(arena) == 0 {
            return bad(format!(
                "network_density {} on a {}x{} arena yields no nodes",
                self.network_density, arena.width, arena.height
            ));
        }
        Ok(())
    }

    pub const KV_KEYS: [&'static str; 8] = [
        "sensor_interval",
        "sense_radius",
        "transmission_radius",
        "transmission_interval",
        "num_neighbors",
        "num_hops",
        "network_density",
        "num_sinks",
    ];

    /// Baseline overridden by whichever parameter keys are present.
    pub fn from_kv(kv: &KvConfig) -> Result<Self, KvError> {
        let mut c = Self::default();
        kv.set_if_present("sensor_interval", "positive integer", &mut c.sensor_interval)?;
        kv.set_if_present("sense_radius", "real", &mut c.sense_radius)?;
        kv.set_if_present("transmission_radius", "real", &mut c.transmission_radius)?;
        kv.set_if_present(
            "transmission_interval",
            "positive integer",
            &mut c.transmission_interval,
        )?;
        kv.set_if_present("num_neighbors", "positive integer", &mut c.num_neighbors)?;
        kv.set_if_present("num_hops", "positive integer", &mut c.num_hops)?;
        kv.set_if_present("network_density", "real", &mut c.network_density)?;
        kv.set_if_present("num_sinks", "positive integer", &mut c.num_sinks)?;
        Ok(c)
    }
}

/// The simulated field and run length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArenaSpec {
    pub width: f64,
    pub height: f64,
    /// Expected stimuli spawned per tick.
    pub stimulus_rate: f64,
    pub duration: u64,
    pub initial_battery: f64,
}

impl Default for ArenaSpec {
    fn default() -> Self {
        Self {
            width: 500.0,
            height: 500.0,
            stimulus_rate: 10.0,
            duration: 240,
            initial_battery: 2.0e7,
        }
    }
}

impl ArenaSpec {
    pub fn area(&self) -> f64 {
        self.width * self.height
    }

    pub fn diagonal(&self) -> f64 {
        self.width.hypot(self.height)
    }

    /// A zero duration is accepted and yields an empty run.
    pub fn validate(&self) -> Result<(), SimError> {
        let ok = self.width.is_finite()
            && self.width > 0.0
            && self.height.is_finite()
            && self.height > 0.0
            && self.stimulus_rate.is_finite()
            && self.stimulus_rate >= 0.0
            && self.initial_battery.is_finite()
            && self.initial_battery > 0.0;
        if ok {
            Ok(())
        } else {
            Err(SimError::Config(format!("invalid arena {self:?}")))
        }
    }

    pub const KV_KEYS: [&'static str; 5] =
        ["width", "height", "stimulus_rate", "duration", "initial_battery"];

    pub fn from_kv(kv: &KvConfig) -> Result<Self, KvError> {
        let mut a = Self::default();
        kv.set_if_present("width", "real", &mut a.width)?;
        kv.set_if_present("height", "real", &mut a.height)?;
        kv.set_if_present("stimulus_rate", "real", &mut a.stimulus_rate)?;
        kv.set_if_present("duration", "integer", &mut a.duration)?;
        kv.set_if_present("initial_battery", "real", &mut a.initial_battery)?;
        Ok(a)
    }
}

/// Per-activity energy prices, in abstract energy units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostModel {
    /// Per bit, radio electronics (both directions).
    pub e_elec: f64,
    /// Per bit per square meter, transmit amplifier.
    pub e_amp: f64,
    pub e_sense_base: f64,
    /// Per square meter of sensed disc.
    pub e_sense_area: f64,
    pub e_beacon: f64,
    pub e_route_ctl: f64,
    pub packet_bits: u32,
    pub ctl_bits: u32,
    pub beacon_period: u64,
}

impl Default for CostModel {
    fn default() -> Self {
        Self {
            e_elec: 50.0,
            e_amp: 0.01,
            e_sense_base: 5.0,
            e_sense_area: 0.02,
            e_beacon: 20.0,
            e_route_ctl: 10.0,
            packet_bits: 1024,
            ctl_bits: 128,
            beacon_period: 10,
        }
    }
}

impl CostModel {
    pub fn sense_cost(&self, sense_radius: f64) -> f64 {
        self.e_sense_base + self.e_sense_area * std::f64::consts::PI * sense_radius * sense_radius
    }

    pub fn transmit_cost(&self, distance: f64) -> f64 {
        (self.e_elec + self.e_amp * distance * distance) * self.packet_bits as f64
    }

    pub fn receive_cost(&self) -> f64 {
        self.e_elec * self.packet_bits as f64
    }

    pub fn beacon_receive_cost(&self) -> f64 {
        self.e_elec * self.ctl_bits as f64
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let reals = [
            self.e_elec,
            self.e_amp,
            self.e_sense_base,
            self.e_sense_area,
            self.e_beacon,
            self.e_route_ctl,
        ];
        let ok = reals.iter().all(|v| v.is_finite() && *v > 0.0)
            && self.packet_bits > 0
            && self.ctl_bits > 0
            && self.beacon_period > 0;
        if ok {
            Ok(())
        } else {
            Err(SimError::Config(format!("invalid cost model {self:?}")))
        }
    }

    pub const KV_KEYS: [&'static str; 9] = [
        "e_elec",
        "e_amp",
        "e_sense_base",
        "e_sense_area",
        "e_beacon",
        "e_route_ctl",
        "packet_bits",
        "ctl_bits",
        "beacon_period",
    ];

    pub fn from_kv(kv: &KvConfig) -> Result<Self, KvError> {
        let mut c = Self::default();
        kv.set_if_present("e_elec", "real", &mut c.e_elec)?;
        kv.set_if_present("e_amp", "real", &mut c.e_amp)?;
        kv.set_if_present("e_sense_base", "real", &mut c.e_sense_base)?;
        kv.set_if_present("e_sense_area", "real", &mut c.e_sense_area)?;
        kv.set_if_present("e_beacon", "real", &mut c.e_beacon)?;
        kv.set_if_present("e_route_ctl", "real", &mut c.e_route_ctl)?;
        kv.set_if_present("packet_bits", "integer", &mut c.packet_bits)?;
        kv.set_if_present("ctl_bits", "integer", &mut c.ctl_bits)?;
        kv.set_if_present("beacon_period", "integer", &mut c.beacon_period)?;
        Ok(c)
    }
}
