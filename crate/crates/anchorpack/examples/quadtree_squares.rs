// Square packings by quadtree subdivision, with per-rule statistics.

use std::error::Error;

use anchorpack::generators::{gen, Family, GenParams};
use anchorpack::geometry::{rat, to_f64, validate_packing};
use anchorpack::quadtree::pack_quadtree_with_stats;
use anchorpack::Mode;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let inst = gen(Family::Random, &GenParams::random(24, 3))?;
    for refined in [false, true] {
        let (p, stats) = pack_quadtree_with_stats(&inst.points, refined);
        assert!(validate_packing(&inst.points, &p, Mode::SquareAny)?.is_valid());
        assert_eq!(stats.failures(), 0);
        println!("refined={refined}: area {:.4}", to_f64(&p.total_area));
        for (rule, s) in &stats.rules {
            println!("  {:32} fired {}", rule.name(), s.fired);
        }
        assert!(p.total_area >= if refined { rat(5, 32) } else { rat(1, 8) });
    }
    Ok(())
}

fn main() {
    run_example().expect("example failed");
}
