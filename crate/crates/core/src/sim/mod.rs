//! Seedable discrete-event simulator of an energy-constrained sensor field.
//!
//! Nodes detect random point stimuli, originate one packet per detection and
//! forward packets greedily toward their nearest sink under a hop budget.
//! Every unit of energy spent is booked in an [`EnergyLedger`] by activity.

mod config;
mod energy;
mod record;
mod world;

use thiserror::Error;

pub use config::{ArenaSpec, CostModel, Parameter, UnknownParameter, WsnConfig};
pub use energy::{Activity, EnergyLedger};
pub use record::{format_energy, RunRecord};
pub use world::{
    build_world, run, run_world, sink_positions, ActivityCounts, NextHop, NodeId, NodeState,
    Packet, Point, RouteFailure, SimWorld, SinkId, Stimulus, SINK_CLUSTER_RADIUS,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("configuration error: {0}")]
    Config(String),
}
