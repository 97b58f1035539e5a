//! Runs a small profiling campaign in memory and prints the sensitivity table.
//!
//! Usage: `cargo run --release --example quick_screen -- [runs] [duration] [master_seed] [stimulus_rate]`

use wsn_energy::profiler::{execute_plan, sample_configs, ParameterSpace, Scheme};
use wsn_energy::sim::{ArenaSpec, CostModel};
use wsn_energy::stats::extract_effective;

fn main() {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u64>().expect("integer argument"));
    let runs = args.next().unwrap_or(400) as usize;
    let duration = args.next().unwrap_or(60);
    let master_seed = args.next().unwrap_or(2012);
    let stimulus_rate = args
        .next()
        .map(|r| r as f64)
        .unwrap_or(ArenaSpec::default().stimulus_rate);
    let arena = ArenaSpec {
        duration,
        stimulus_rate,
        ..ArenaSpec::default()
    };
    let plan = sample_configs(&ParameterSpace::default(), runs, Scheme::Uniform, master_seed)
        .expect("default space is valid");
    let start = std::time::Instant::now();
    let dataset = execute_plan(&plan, &arena, &CostModel::default(), 8).expect("runs succeed");
    eprintln!("{runs} runs in {:?}", start.elapsed());
    let report = extract_effective(&dataset.records, 0.05).expect("enough samples");
    print!("{}", report.to_table());
}
