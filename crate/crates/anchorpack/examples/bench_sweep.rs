// A small benchmark sweep printed as CSV.

use std::error::Error;

use anchorpack::algos::Algo;
use anchorpack::bench::{run_bench, to_csv, BenchConfig};
use anchorpack::generators::Family;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let cfg = BenchConfig {
        families: vec![Family::Prop1, Family::Random],
        sizes: vec![2, 3, 4],
        algos: vec![Algo::Strip712, Algo::QuadtreeRefined, Algo::GreedySq],
        seeds: 2,
        ..Default::default()
    };
    let rows = run_bench(&cfg);
    print!("{}", to_csv(&rows));
    assert!(rows.iter().all(|r| r.ok));
    Ok(())
}

fn main() {
    run_example().expect("example failed");
}
