// Reach regions and the triple-cover property of the lower-left greedy.

use std::error::Error;

use anchorpack::generators::{gen, Family, GenParams};
use anchorpack::geometry::{format_rational, rat};
use anchorpack::greedy::{greedy_pack, GreedyMode};
use anchorpack::reach::{check_triple_cover, reach_anchored_squares, reach_ll_rects, reach_ll_squares};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let diag = gen(Family::Diagonal, &GenParams::n(4))?;
    let w = reach_ll_squares(&diag.points);
    println!("diagonal n=4: W_sq area {}", format_rational(&w.area));
    assert_eq!(w.area, rat(1, 4));

    let inst = gen(Family::Random, &GenParams::random(12, 5))?;
    let rects = reach_ll_rects(&inst.points);
    let squares = reach_anchored_squares(&inst.points);
    println!(
        "random n=12: W {} in {} steps, R_sq {} (at least half: {})",
        format_rational(&rects.region.area),
        rects.decomposition.len(),
        format_rational(&squares.region.area),
        squares.at_least_half
    );
    let g = greedy_pack(&inst.points, GreedyMode::LowerLeft);
    let cover = check_triple_cover(&inst.points, &g.packing);
    assert!(cover.holds);
    assert!(g.packing.total_area * rat(9, 1) >= reach_ll_squares(&inst.points).area);
    println!("triple cover holds");
    Ok(())
}

fn main() {
    run_example().expect("example failed");
}
