// Greedy square packings and the instance that traps the any-corner greedy.

use std::error::Error;

use anchorpack::generators::{gen, Family, GenParams};
use anchorpack::geometry::{format_rational, rat, validate_packing};
use anchorpack::greedy::{greedy_pack, GreedyMode};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let inst = gen(Family::Fig2, &GenParams { n: Some(5), eps: Some(rat(1, 16)), ..Default::default() })?;
    let r = greedy_pack(&inst.points, GreedyMode::AnyCorner);
    for step in &r.trace {
        println!("{step}");
    }
    println!("greedy total {}", format_rational(&r.packing.total_area));
    assert_eq!(r.packing.total_area, rat(81, 256));

    let inst = gen(Family::Fig6, &GenParams::eps(rat(1, 8)))?;
    let r = greedy_pack(&inst.points, GreedyMode::LowerLeft);
    assert!(validate_packing(&inst.points, &r.packing, GreedyMode::LowerLeft.packing_mode())?.is_valid());
    println!("lower-left greedy on the staircase: {}", format_rational(&r.packing.total_area));
    Ok(())
}

fn main() {
    run_example().expect("example failed");
}
