//! World state, greedy geographic routing and the per-tick update.
//!
//! Ticks are numbered from 1. A periodic activity with period `k` fires on
//! every tick `t` with `t % k == 0`, so a run of `T` ticks contains exactly
//! `floor(T / k)` firings. Within a tick the phases run in a fixed order:
//! stimulus spawn, sensing, data forwarding, beacons, route-maintenance
//! control, and finally topology repair for nodes that died during the tick.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use super::config::{ArenaSpec, CostModel, WsnConfig};
use super::energy::{Activity, EnergyLedger};
use super::record::RunRecord;
use super::SimError;

pub type NodeId = usize;
pub type SinkId = usize;

/// Sinks sit inside a disc of this radius around the arena center.
pub const SINK_CLUSTER_RADIUS: f64 = 10.0;

const STIMULUS_STREAM: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist_sq(self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn dist(self, other: Point) -> f64 {
        self.dist_sq(other).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Packet {
    pub origin: NodeId,
    pub created_tick: u64,
    pub hops_used: u32,
    pub target_sink: SinkId,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeState {
    pub id: NodeId,
    pub position: Point,
    pub battery: f64,
    pub neighbor_table: Vec<NodeId>,
    pub outbox: VecDeque<Packet>,
    pub alive: bool,
    /// Nearest sink, the target of every packet this node originates.
    pub home_sink: SinkId,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stimulus {
    pub position: Point,
    pub birth_tick: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NextHop {
    Sink(SinkId),
    Node(NodeId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RouteFailure {
    HopBudgetExhausted,
    /// No alive neighbor makes progress toward the target sink.
    Void,
    DeadNode,
}

/// Event counters, kept alongside the energy ledger.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActivityCounts {
    pub stimuli: u64,
    pub sense_events: u64,
    pub transmit_events: u64,
    pub receive_events: u64,
    pub beacons: u64,
    pub beacon_receptions: u64,
    pub control_forwards: u64,
    pub control_receptions: u64,
    pub packets_dropped: u64,
    pub packets_lost: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimWorld {
    config: WsnConfig,
    arena: ArenaSpec,
    nodes: Vec<NodeState>,
    sinks: Vec<Point>,
    stimuli: Vec<Stimulus>,
    tick: u64,
    ledger: EnergyLedger,
    counts: ActivityCounts,
    packets_generated: u64,
    packets_delivered: u64,
    nodes_died: u64,
    max_delivered_hops: u32,
    stimulus_rng: ChaCha8Rng,
    /// Per node, how many control cascades it forwards per beacon period.
    control_load: Vec<u64>,
    control_rx: Vec<u64>,
    topology_dirty: bool,
}

/// Places `num_sinks` sinks as one cluster around the arena center: a single
/// sink at the center, otherwise evenly spaced on the cluster boundary.
pub fn sink_positions(config: &WsnConfig, arena: &ArenaSpec) -> Vec<Point> {
    let center = Point::new(arena.width / 2.0, arena.height / 2.0);
    let k = config.num_sinks as usize;
    if k == 1 {
        return vec![center];
    }
    (0..k)
        .map(|i| {
            let angle = std::f64::consts::TAU * i as f64 / k as f64;
            Point::new(
                center.x + SINK_CLUSTER_RADIUS * angle.cos(),
                center.y + SINK_CLUSTER_RADIUS * angle.sin(),
            )
        })
        .collect()
}

/// Builds a world with uniformly random node positions.
pub fn build_world(config: &WsnConfig, arena: &ArenaSpec, seed: u64) -> Result<SimWorld, SimError> {
    arena.validate()?;
    config.validate(arena)?;
    let n = config.node_count(arena);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let positions = (0..n)
        .map(|_| {
            let x = rng.random::<f64>() * arena.width;
            let y = rng.random::<f64>() * arena.height;
            Point::new(x, y)
        })
        .collect();
    SimWorld::from_layout(*config, *arena, positions, sink_positions(config, arena), seed)
}

impl SimWorld {
    /// Builds a world from explicit node and sink positions. The node count
    /// implied by the density is not enforced here.
    pub fn from_layout(
        config: WsnConfig,
        arena: ArenaSpec,
        positions: Vec<Point>,
        sinks: Vec<Point>,
        seed: u64,
    ) -> Result<Self, SimError> {
        if positions.is_empty() {
            return Err(SimError::Config("network has no nodes".into()));
        }
        if sinks.is_empty() {
            return Err(SimError::Config("network has no sinks".into()));
        }
        let nodes = positions
            .into_iter()
            .enumerate()
            .map(|(id, position)| NodeState {
                id,
                position,
                battery: arena.initial_battery,
                neighbor_table: Vec::new(),
                outbox: VecDeque::new(),
                alive: true,
                home_sink: nearest(&sinks, position, |_| true).expect("sinks non-empty"),
            })
            .collect::<Vec<_>>();
        let mut stimulus_rng = ChaCha8Rng::seed_from_u64(seed);
        stimulus_rng.set_stream(STIMULUS_STREAM);
        let mut world = Self {
            config,
            arena,
            ledger: EnergyLedger::new(nodes.len()),
            control_load: vec![0; nodes.len()],
            control_rx: vec![0; nodes.len()],
            nodes,
            sinks,
            stimuli: Vec::new(),
            tick: 0,
            counts: ActivityCounts::default(),
            packets_generated: 0,
            packets_delivered: 0,
            nodes_died: 0,
            max_delivered_hops: 0,
            stimulus_rng,
            topology_dirty: true,
        };
        world.rebuild_neighbor_tables();
        Ok(world)
    }

    pub fn config(&self) -> &WsnConfig {
        &self.config
    }

    pub fn arena(&self) -> &ArenaSpec {
        &self.arena
    }

    pub fn nodes(&self) -> &[NodeState] {
        &self.nodes
    }

    pub fn sinks(&self) -> &[Point] {
        &self.sinks
    }

    pub fn stimuli(&self) -> &[Stimulus] {
        &self.stimuli
    }

    pub fn tick(&self) -> u64 {
        self.tick
    }

    pub fn ledger(&self) -> &EnergyLedger {
        &self.ledger
    }

    pub fn counts(&self) -> &ActivityCounts {
        &self.counts
    }

    pub fn packets_generated(&self) -> u64 {
        self.packets_generated
    }

    pub fn packets_delivered(&self) -> u64 {
        self.packets_delivered
    }

    pub fn nodes_died(&self) -> u64 {
        self.nodes_died
    }

    /// Largest hop count over all packets delivered so far.
    pub fn max_delivered_hops(&self) -> u32 {
        self.max_delivered_hops
    }

    pub fn total_energy(&self) -> f64 {
        self.ledger.total()
    }

    /// Queues a packet at `node` as if it had just sensed a stimulus.
    pub fn inject_packet(&mut self, node: NodeId) {
        let packet = Packet {
            origin: node,
            created_tick: self.tick,
            hops_used: 0,
            target_sink: self.nodes[node].home_sink,
        };
        self.nodes[node].outbox.push_back(packet);
        self.packets_generated += 1;
    }

    /// Drains the battery of `node` without recording energy, e.g. to model
    /// a node that starts dead. Topology is repaired on the next step.
    pub fn kill_node(&mut self, node: NodeId) {
        let n = &mut self.nodes[node];
        if n.alive {
            n.battery = 0.0;
            n.alive = false;
            n.outbox.clear();
            self.nodes_died += 1;
            self.rebuild_neighbor_tables();
        }
    }

    /// Greedy geographic next hop for `packet` currently held by `current`.
    pub fn route_next_hop(&self, current: NodeId, packet: &Packet) -> Result<NextHop, RouteFailure> {
        let here = &self.nodes[current];
        if !here.alive {
            return Err(RouteFailure::DeadNode);
        }
        if packet.hops_used >= self.config.num_hops {
            return Err(RouteFailure::HopBudgetExhausted);
        }
        let reach_sq = self.config.transmission_radius * self.config.transmission_radius;
        if let Some(s) = nearest(&self.sinks, here.position, |p| {
            p.dist_sq(here.position) <= reach_sq
        }) {
            return Ok(NextHop::Sink(s));
        }
        let target = self.sinks[packet.target_sink];
        let own = here.position.dist_sq(target);
        let mut best: Option<(f64, NodeId)> = None;
        for &w in &here.neighbor_table {
            let nb = &self.nodes[w];
            if !nb.alive {
                continue;
            }
            let d = nb.position.dist_sq(target);
            if d >= own {
                continue;
            }
            let better = match best {
                None => true,
                Some((bd, bid)) => d < bd || (d == bd && w < bid),
            };
            if better {
                best = Some((d, w));
            }
        }
        best.map(|(_, w)| NextHop::Node(w)).ok_or(RouteFailure::Void)
    }

    /// Advances the world by one tick.
    pub fn step(&mut self, cost: &CostModel) {
        self.tick += 1;
        let t = self.tick;
        let deaths_before = self.nodes_died;

        self.spawn_stimuli();
        if t.is_multiple_of(u64::from(self.config.sensor_interval)) {
            self.sense_phase(cost);
        }
        if t.is_multiple_of(u64::from(self.config.transmission_interval)) {
            self.forward_phase(cost);
        }
        if t.is_multiple_of(cost.beacon_period) {
            self.beacon_phase(cost);
            self.control_phase(cost);
        }
        if self.nodes_died != deaths_before {
            self.rebuild_neighbor_tables();
        }
    }

    /// Summarizes the run so far.
    pub fn record(&self, seed: u64) -> RunRecord {
        RunRecord {
            config: self.config,
            seed,
            total_energy: self.total_energy(),
            packets_generated: self.packets_generated,
            packets_delivered: self.packets_delivered,
            nodes_died: self.nodes_died,
            duration: self.tick,
        }
    }

    fn spawn_stimuli(&mut self) {
        self.stimuli.clear();
        if self.arena.stimulus_rate <= 0.0 {
            return;
        }
        let count = Poisson::new(self.arena.stimulus_rate)
            .expect("finite positive rate")
            .sample(&mut self.stimulus_rng) as u64;
        for _ in 0..count {
            let x = self.stimulus_rng.random::<f64>() * self.arena.width;
            let y = self.stimulus_rng.random::<f64>() * self.arena.height;
            self.stimuli.push(Stimulus {
                position: Point::new(x, y),
                birth_tick: self.tick,
            });
        }
        self.counts.stimuli += count;
    }

    /// Charges `amount` to `node`. A node that cannot cover the full amount
    /// spends what is left and dies, losing its queued packets. Returns
    /// whether the full amount was paid.
    fn charge(&mut self, node: NodeId, activity: Activity, amount: f64) -> bool {
        let n = &mut self.nodes[node];
        debug_assert!(n.alive);
        let paid = amount.min(n.battery);
        n.battery -= paid;
        self.ledger.add(node, activity, paid);
        let covered = paid == amount;
        if n.battery <= 0.0 {
            n.battery = 0.0;
            n.alive = false;
            self.counts.packets_lost += n.outbox.len() as u64;
            n.outbox.clear();
            self.nodes_died += 1;
        }
        covered
    }

    /// A scan that detects nothing is free; each detection pays the full
    /// sensing cost and queues one packet.
    fn sense_phase(&mut self, cost: &CostModel) {
        let r_sq = self.config.sense_radius * self.config.sense_radius;
        let price = cost.sense_cost(self.config.sense_radius);
        for id in 0..self.nodes.len() {
            if !self.nodes[id].alive {
                continue;
            }
            self.counts.sense_events += 1;
            let pos = self.nodes[id].position;
            let detected = self
                .stimuli
                .iter()
                .filter(|s| s.position.dist_sq(pos) <= r_sq)
                .count();
            for _ in 0..detected {
                if !self.charge(id, Activity::Sense, price) {
                    break;
                }
                self.inject_packet(id);
            }
        }
    }

    fn forward_phase(&mut self, cost: &CostModel) {
        let mut arrivals: Vec<(NodeId, Packet)> = Vec::new();
        for id in 0..self.nodes.len() {
            if !self.nodes[id].alive || self.nodes[id].outbox.is_empty() {
                continue;
            }
            let mut queue = std::mem::take(&mut self.nodes[id].outbox);
            while let Some(packet) = queue.pop_front() {
                if !self.nodes[id].alive {
                    self.counts.packets_lost += 1 + queue.len() as u64;
                    break;
                }
                let hop = match self.route_next_hop(id, &packet) {
                    Ok(hop) => hop,
                    Err(_) => {
                        self.counts.packets_dropped += 1;
                        continue;
                    }
                };
                let from = self.nodes[id].position;
                let to = match hop {
                    NextHop::Sink(s) => self.sinks[s],
                    NextHop::Node(w) => self.nodes[w].position,
                };
                self.counts.transmit_events += 1;
                if !self.charge(id, Activity::Transmit, cost.transmit_cost(from.dist(to))) {
                    self.counts.packets_lost += 1;
                    continue;
                }
                let moved = Packet {
                    hops_used: packet.hops_used + 1,
                    ..packet
                };
                match hop {
                    NextHop::Sink(_) => {
                        self.packets_delivered += 1;
                        self.max_delivered_hops = self.max_delivered_hops.max(moved.hops_used);
                    }
                    NextHop::Node(w) => {
                        self.counts.receive_events += 1;
                        if self.charge(w, Activity::Receive, cost.receive_cost())
                            && self.nodes[w].alive
                        {
                            arrivals.push((w, moved));
                        } else {
                            self.counts.packets_lost += 1;
                        }
                    }
                }
            }
        }
        // Received packets wait for the receiver's next send opportunity.
        for (w, packet) in arrivals {
            if self.nodes[w].alive {
                self.nodes[w].outbox.push_back(packet);
            } else {
                self.counts.packets_lost += 1;
            }
        }
    }

    fn beacon_phase(&mut self, cost: &CostModel) {
        let rx = cost.beacon_receive_cost();
        for id in 0..self.nodes.len() {
            if !self.nodes[id].alive {
                continue;
            }
            self.counts.beacons += 1;
            if !self.charge(id, Activity::Beacon, cost.e_beacon) {
                continue;
            }
            for k in 0..self.nodes[id].neighbor_table.len() {
                let w = self.nodes[id].neighbor_table[k];
                if self.nodes[w].alive {
                    self.counts.beacon_receptions += 1;
                    self.charge(w, Activity::Beacon, rx);
                }
            }
        }
    }

    fn control_phase(&mut self, cost: &CostModel) {
        if self.topology_dirty {
            self.recompute_control_load();
        }
        for id in 0..self.nodes.len() {
            let (sent, heard) = (self.control_load[id], self.control_rx[id]);
            if !self.nodes[id].alive || sent + heard == 0 {
                continue;
            }
            self.counts.control_forwards += sent;
            self.counts.control_receptions += heard;
            self.charge(id, Activity::RouteControl, (sent + heard) as f64 * cost.e_route_ctl);
        }
    }

    /// Each alive node's cascade is flooded over neighbor-table links with
    /// duplicate suppression. The origin transmits it, and every node first
    /// reached after `h < num_hops` hops forwards it once more. Every
    /// transmission is heard by all alive table neighbors of the sender.
    fn recompute_control_load(&mut self) {
        let n = self.nodes.len();
        let max_depth = self.config.num_hops.saturating_sub(1);
        let mut load = vec![0u64; n];
        let mut rx = vec![0u64; n];
        let mut seen = vec![usize::MAX; n];
        let mut frontier = Vec::new();
        let mut next = Vec::new();
        let nodes = &self.nodes;
        let transmit = |u: NodeId, load: &mut [u64], rx: &mut [u64]| {
            load[u] += 1;
            for &w in &nodes[u].neighbor_table {
                if nodes[w].alive {
                    rx[w] += 1;
                }
            }
        };
        for origin in 0..n {
            if !nodes[origin].alive {
                continue;
            }
            seen[origin] = origin;
            transmit(origin, &mut load, &mut rx);
            frontier.clear();
            frontier.push(origin);
            for _ in 0..max_depth {
                next.clear();
                for &u in &frontier {
                    for &w in &nodes[u].neighbor_table {
                        if seen[w] != origin && nodes[w].alive {
                            seen[w] = origin;
                            transmit(w, &mut load, &mut rx);
                            next.push(w);
                        }
                    }
                }
                if next.is_empty() {
                    break;
                }
                std::mem::swap(&mut frontier, &mut next);
            }
        }
        self.control_load = load;
        self.control_rx = rx;
        self.topology_dirty = false;
    }

    /// Nearest alive nodes within radio range, ties by id, capped at
    /// `num_neighbors`.
    fn rebuild_neighbor_tables(&mut self) {
        let reach_sq = self.config.transmission_radius * self.config.transmission_radius;
        let cap = self.config.num_neighbors as usize;
        let mut candidates: Vec<(f64, NodeId)> = Vec::new();
        for i in 0..self.nodes.len() {
            candidates.clear();
            if self.nodes[i].alive {
                let pi = self.nodes[i].position;
                for (j, other) in self.nodes.iter().enumerate() {
                    if j == i || !other.alive {
                        continue;
                    }
                    let d = pi.dist_sq(other.position);
                    if d <= reach_sq {
                        candidates.push((d, j));
                    }
                }
                candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                candidates.truncate(cap);
            }
            self.nodes[i].neighbor_table = candidates.iter().map(|&(_, j)| j).collect();
        }
        self.topology_dirty = true;
    }
}

/// Index of the point nearest `from` among those passing `keep`; ties by
/// lowest index.
fn nearest(points: &[Point], from: Point, keep: impl Fn(Point) -> bool) -> Option<usize> {
    let mut best: Option<(f64, usize)> = None;
    for (i, &p) in points.iter().enumerate() {
        if !keep(p) {
            continue;
        }
        let d = p.dist_sq(from);
        if best.is_none_or(|(bd, _)| d < bd) {
            best = Some((d, i));
        }
    }
    best.map(|(_, i)| i)
}

/// Builds a world and steps it for the arena's duration.
pub fn run_world(
    config: &WsnConfig,
    arena: &ArenaSpec,
    cost: &CostModel,
    seed: u64,
) -> Result<SimWorld, SimError> {
    cost.validate()?;
    let mut world = build_world(config, arena, seed)?;
    for _ in 0..arena.duration {
        world.step(cost);
    }
    Ok(world)
}

pub fn run(
    config: &WsnConfig,
    arena: &ArenaSpec,
    cost: &CostModel,
    seed: u64,
) -> Result<RunRecord, SimError> {
    Ok(run_world(config, arena, cost, seed)?.record(seed))
}
