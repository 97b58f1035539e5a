//! Prints per-activity energy and event counts for one run.
//!
//! Usage: `cargo run --release --example activity_breakdown -- [seed] [param=value ...]`

use std::time::Instant;

use wsn_energy::sim::{run_world, Activity, ArenaSpec, CostModel, Parameter, WsnConfig};

fn main() {
    let mut args = std::env::args().skip(1);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);
    let mut config = WsnConfig::default();
    let mut arena = ArenaSpec::default();
    for kv in args {
        let (k, v) = kv.split_once('=').expect("param=value");
        let v: f64 = v.parse().expect("numeric value");
        match k {
            "duration" => arena.duration = v as u64,
            "stimulus_rate" => arena.stimulus_rate = v,
            "initial_battery" => arena.initial_battery = v,
            _ => config.set(k.parse::<Parameter>().expect("parameter name"), v),
        }
    }
    let cost = CostModel::default();
    let start = Instant::now();
    let world = run_world(&config, &arena, &cost, seed).expect("valid configuration");
    let elapsed = start.elapsed();
    println!("{config:?}");
    println!("nodes {}  elapsed {elapsed:?}", world.nodes().len());
    for a in Activity::ALL {
        println!("{a:?}: {:.4e}", world.ledger().activity_total(a));
    }
    println!("total {:.4e}", world.total_energy());
    println!("{:?}", world.counts());
    println!("{:?}", world.record(seed));
}
