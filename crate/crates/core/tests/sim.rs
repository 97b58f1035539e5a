use std::collections::VecDeque;

use proptest::prelude::*;
use wsn_energy::sim::{
    build_world, run, run_world, ArenaSpec, CostModel, NextHop, Packet, Parameter, Point, RouteFailure, SimWorld,
    WsnConfig,
};

fn quiet_arena(duration: u64) -> ArenaSpec {
    ArenaSpec {
        stimulus_rate: 0.0,
        duration,
        ..ArenaSpec::default()
    }
}

fn big_battery(mut arena: ArenaSpec) -> ArenaSpec {
    arena.initial_battery = 1e18;
    arena
}

#[test]
fn node_count_from_density() {
    let config = WsnConfig {
        network_density: 0.0004,
        ..WsnConfig::default()
    };
    let world = build_world(&config, &ArenaSpec::default(), 5).unwrap();
    assert_eq!(world.nodes().len(), 100);
    for n in world.nodes() {
        assert!(n.neighbor_table.len() <= config.num_neighbors as usize);
        for &w in &n.neighbor_table {
            assert!(n.position.dist(world.nodes()[w].position) <= config.transmission_radius);
        }
    }
    for s in world.sinks() {
        assert!(s.dist(Point::new(250.0, 250.0)) <= 10.0 + 1e-9);
    }
}

#[test]
fn same_seed_same_world() {
    let c = WsnConfig::default();
    let a = ArenaSpec::default();
    assert_eq!(build_world(&c, &a, 17).unwrap(), build_world(&c, &a, 17).unwrap());
    assert_ne!(build_world(&c, &a, 17).unwrap(), build_world(&c, &a, 18).unwrap());
}

#[test]
fn zero_nodes_is_config_error() {
    let c = WsnConfig {
        network_density: 1e-9,
        ..WsnConfig::default()
    };
    assert!(build_world(&c, &ArenaSpec::default(), 1).is_err());
    assert!(run(&c, &ArenaSpec::default(), &CostModel::default(), 1).is_err());
}

fn single_sink_world(config: WsnConfig, positions: Vec<Point>) -> SimWorld {
    let arena = big_battery(quiet_arena(1000));
    let config = WsnConfig { num_sinks: 1, ..config };
    SimWorld::from_layout(config, arena, positions, vec![Point::new(250.0, 250.0)], 3).unwrap()
}

fn packet_at(world: &SimWorld, node: usize, hops_used: u32) -> Packet {
    Packet {
        origin: node,
        created_tick: 0,
        hops_used,
        target_sink: world.nodes()[node].home_sink,
    }
}

#[test]
fn sink_in_range_is_next_hop() {
    let w = single_sink_world(WsnConfig::default(), vec![Point::new(250.0, 210.0), Point::new(250.0, 230.0)]);
    assert_eq!(w.route_next_hop(0, &packet_at(&w, 0, 0)), Ok(NextHop::Sink(0)));
}

#[test]
fn exhausted_budget_fails() {
    let w = single_sink_world(WsnConfig::default(), vec![Point::new(250.0, 210.0)]);
    let p = packet_at(&w, 0, w.config().num_hops);
    assert_eq!(w.route_next_hop(0, &p), Err(RouteFailure::HopBudgetExhausted));
}

#[test]
fn void_when_no_neighbor_is_closer() {
    // Far node whose only neighbor lies farther from the sink.
    let w = single_sink_world(WsnConfig::default(), vec![Point::new(100.0, 250.0), Point::new(60.0, 250.0)]);
    assert_eq!(w.route_next_hop(0, &packet_at(&w, 0, 0)), Err(RouteFailure::Void));
}

/// Breadth-first hop count from `from` to the sink over the unit-disk graph.
fn bfs_hops(nodes: &[Point], sink: Point, radius: f64, from: usize) -> Option<u32> {
    let mut dist = vec![None; nodes.len()];
    dist[from] = Some(0u32);
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        let d = dist[u].unwrap();
        if nodes[u].dist(sink) <= radius {
            return Some(d + 1);
        }
        for v in 0..nodes.len() {
            if dist[v].is_none() && nodes[u].dist(nodes[v]) <= radius {
                dist[v] = Some(d + 1);
                queue.push_back(v);
            }
        }
    }
    None
}

fn chain(k: usize, radius: f64) -> Vec<Point> {
    (0..k)
        .map(|i| Point::new(250.0 - (k - i) as f64 * 0.9 * radius, 250.0))
        .collect()
}

fn deliver_from_head(k: usize, num_hops: u32) -> SimWorld {
    let radius = 25.0;
    let config = WsnConfig {
        transmission_radius: radius,
        transmission_interval: 1,
        num_hops,
        ..WsnConfig::default()
    };
    let mut w = single_sink_world(config, chain(k, radius));
    w.inject_packet(0);
    let cost = CostModel {
        beacon_period: 1_000_000,
        ..CostModel::default()
    };
    for _ in 0..2 * k {
        w.step(&cost);
    }
    w
}

#[test]
fn chain_needs_exactly_k_hops() {
    for k in 1..=8 {
        let radius = 25.0;
        let oracle = bfs_hops(&chain(k, radius), Point::new(250.0, 250.0), radius, 0).unwrap();
        assert_eq!(oracle as usize, k);

        let ok = deliver_from_head(k, k as u32);
        assert_eq!(ok.packets_delivered(), 1, "k = {k}");
        assert_eq!(ok.max_delivered_hops(), oracle);
        assert_eq!(ok.counts().transmit_events, k as u64);

        let roomy = deliver_from_head(k, k as u32 + 5);
        assert_eq!(roomy.max_delivered_hops(), oracle);

        if k > 1 {
            let short = deliver_from_head(k, k as u32 - 1);
            assert_eq!(short.packets_delivered(), 0, "k = {k}");
            assert_eq!(short.counts().packets_dropped, 1);
        }
    }
}

#[test]
fn dead_node_is_inert() {
    let config = WsnConfig::default();
    let arena = ArenaSpec {
        duration: 50,
        ..ArenaSpec::default()
    };
    let mut w = build_world(&config, &arena, 8).unwrap();
    w.kill_node(0);
    assert_eq!(w.route_next_hop(0, &packet_at(&w, 0, 0)), Err(RouteFailure::DeadNode));
    let cost = CostModel::default();
    for _ in 0..arena.duration {
        w.step(&cost);
    }
    assert_eq!(w.ledger().node_total(0), 0.0);
    assert_eq!(w.nodes()[0].battery, 0.0);
    assert!(w.nodes()[0].outbox.is_empty());
    assert!(w.nodes().iter().all(|n| !n.neighbor_table.contains(&0)));
}

#[test]
fn nothing_happens_without_stimuli_or_beacons() {
    let cost = CostModel {
        beacon_period: 1000,
        ..CostModel::default()
    };
    let r = run(&WsnConfig::default(), &quiet_arena(240), &cost, 2).unwrap();
    assert_eq!(r.total_energy, 0.0);
    assert_eq!(r.packets_generated, 0);
}

#[test]
fn zero_duration_run() {
    let r = run(&WsnConfig::default(), &quiet_arena(0), &CostModel::default(), 2).unwrap();
    assert_eq!((r.total_energy, r.packets_generated, r.duration), (0.0, 0, 0));
}

#[test]
fn isolated_nodes_closed_form() {
    let cost = CostModel::default();
    for (duration, period) in [(240u64, 10u64), (95, 7), (6, 10)] {
        let cost = CostModel {
            beacon_period: period,
            ..cost
        };
        let positions: Vec<Point> = (0..6).map(|i| Point::new(20.0 + 80.0 * i as f64, 20.0)).collect();
        let n = positions.len() as f64;
        let config = WsnConfig {
            transmission_radius: 20.0,
            num_sinks: 1,
            ..WsnConfig::default()
        };
        let mut w = SimWorld::from_layout(
            config,
            quiet_arena(duration),
            positions,
            vec![Point::new(250.0, 250.0)],
            1,
        )
        .unwrap();
        assert!(w.nodes().iter().all(|n| n.neighbor_table.is_empty()));
        for _ in 0..duration {
            w.step(&cost);
        }
        let expected = n * (duration / period) as f64 * (cost.e_beacon + cost.e_route_ctl);
        assert_eq!(w.total_energy(), expected);
    }
}

#[test]
fn receivers_pay_for_beacons_and_control() {
    // Two nodes in range of each other, far from the sink.
    let config = WsnConfig {
        num_sinks: 1,
        num_hops: 3,
        ..WsnConfig::default()
    };
    let mut w = SimWorld::from_layout(
        config,
        quiet_arena(10),
        vec![Point::new(20.0, 20.0), Point::new(40.0, 20.0)],
        vec![Point::new(250.0, 250.0)],
        1,
    )
    .unwrap();
    let cost = CostModel::default();
    for _ in 0..10 {
        w.step(&cost);
    }
    // Each node: its beacon, hearing the other's beacon, two control
    // transmissions (own cascade, relaying the other's) and two receptions.
    let per_node = cost.e_beacon + cost.beacon_receive_cost() + 4.0 * cost.e_route_ctl;
    assert_eq!(w.ledger().node_total(0), per_node);
    assert_eq!(w.total_energy(), 2.0 * per_node);
    assert_eq!(w.counts().control_forwards, 4);
    assert_eq!(w.counts().control_receptions, 4);
}

fn arb_config() -> impl Strategy<Value = WsnConfig> {
    (
        1u32..15,
        5.0f64..50.0,
        20.0f64..100.0,
        1u32..15,
        2u32..20,
        1u32..20,
        0.0002f64..0.001,
        1u32..8,
    )
        .prop_map(|(si, sr, tr, ti, nn, nh, density, sinks)| WsnConfig {
            sensor_interval: si,
            sense_radius: sr,
            transmission_radius: tr,
            transmission_interval: ti,
            num_neighbors: nn,
            num_hops: nh,
            network_density: density,
            num_sinks: sinks,
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn run_invariants(config in arb_config(), seed in any::<u64>(), battery in prop::sample::select(vec![2e5, 2e6, 2e7])) {
        let arena = ArenaSpec { duration: 40, initial_battery: battery, ..ArenaSpec::default() };
        let cost = CostModel::default();
        let mut w = build_world(&config, &arena, seed).unwrap();
        let mut previous: Vec<f64> = w.nodes().iter().map(|n| n.battery).collect();
        for _ in 0..arena.duration {
            w.step(&cost);
            for (n, before) in w.nodes().iter().zip(&previous) {
                prop_assert!(n.battery <= *before);
                prop_assert!(n.battery >= 0.0);
                prop_assert_eq!(n.alive, n.battery > 0.0);
            }
            previous = w.nodes().iter().map(|n| n.battery).collect();
        }
        let spent: f64 = w.nodes().iter().map(|n| battery - n.battery).sum();
        let total = w.total_energy();
        prop_assert!((spent - total).abs() <= 1e-9 * total.max(1.0), "{spent} vs {total}");
        for id in 0..w.nodes().len() {
            prop_assert!((w.ledger().node_total(id) - (battery - w.nodes()[id].battery)).abs() <= 1e-6 * battery);
        }
        prop_assert!(w.max_delivered_hops() <= config.num_hops);
        prop_assert!(w.packets_delivered() <= w.packets_generated());

        let record = w.record(seed);
        prop_assert_eq!(record.total_energy, w.ledger().total());
        prop_assert_eq!(run(&config, &arena, &cost, seed).unwrap(), record);
    }

    #[test]
    fn longer_intervals_never_add_work(config in arb_config(), seed in any::<u64>(), factor in 2u32..4) {
        let arena = big_battery(ArenaSpec { duration: 60, ..ArenaSpec::default() });
        let cost = CostModel::default();
        let count = |c: &WsnConfig| run_world(c, &arena, &cost, seed).unwrap().counts().to_owned();

        let base = count(&config);
        let slower_tx = count(&WsnConfig { transmission_interval: config.transmission_interval * factor, ..config });
        prop_assert!(slower_tx.transmit_events <= base.transmit_events);

        let slower_sense = count(&config.with(Parameter::SensorInterval, f64::from(config.sensor_interval + factor)));
        prop_assert!(slower_sense.sense_events <= base.sense_events);

        let more_hops = count(&config.with(Parameter::NumHops, f64::from(config.num_hops + factor)));
        prop_assert!(more_hops.control_forwards >= base.control_forwards);
    }
}
