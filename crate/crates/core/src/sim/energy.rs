//! Per-node, per-activity energy accounting.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activity {
    Sense,
    Transmit,
    Receive,
    Beacon,
    RouteControl,
}

impl Activity {
    pub const ALL: [Activity; 5] = [
        Activity::Sense,
        Activity::Transmit,
        Activity::Receive,
        Activity::Beacon,
        Activity::RouteControl,
    ];

    fn slot(self) -> usize {
        self as usize
    }
}

/// Accumulated energy by node and activity. Entries only grow.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyLedger {
    rows: Vec<[f64; 5]>,
}

impl EnergyLedger {
    pub fn new(nodes: usize) -> Self {
        Self {
            rows: vec![[0.0; 5]; nodes],
        }
    }

    pub(crate) fn add(&mut self, node: usize, activity: Activity, amount: f64) {
        debug_assert!(amount >= 0.0);
        self.rows[node][activity.slot()] += amount;
    }

    pub fn entry(&self, node: usize, activity: Activity) -> f64 {
        self.rows[node][activity.slot()]
    }

    pub fn node_total(&self, node: usize) -> f64 {
        self.rows[node].iter().sum()
    }

    pub fn activity_total(&self, activity: Activity) -> f64 {
        self.rows.iter().map(|r| r[activity.slot()]).sum()
    }

    /// Overall energy consumption: node-major, activity-minor summation.
    pub fn total(&self) -> f64 {
        self.rows.iter().flat_map(|r| r.iter()).sum()
    }

    pub fn nodes(&self) -> usize {
        self.rows.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totals() {
        let mut l = EnergyLedger::new(2);
        l.add(0, Activity::Sense, 1.5);
        l.add(1, Activity::Sense, 2.0);
        l.add(1, Activity::Beacon, 4.0);
        assert_eq!(l.node_total(1), 6.0);
        assert_eq!(l.activity_total(Activity::Sense), 3.5);
        assert_eq!(l.entry(0, Activity::Beacon), 0.0);
        assert_eq!(l.total(), 7.5);
    }
}
