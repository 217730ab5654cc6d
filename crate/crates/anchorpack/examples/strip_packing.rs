// Horizontal strip packings and their guaranteed areas.

use std::error::Error;

use anchorpack::generators::{gen, Family, GenParams};
use anchorpack::geometry::{format_rational, validate_packing};
use anchorpack::strip::{basic_guarantee, pack_strips_712, pack_strips_basic, paired_guarantee};
use anchorpack::Mode;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for n in 1..=6 {
        let inst = gen(Family::Random, &GenParams::random(n, 7))?;
        let basic = pack_strips_basic(&inst.points);
        let paired = pack_strips_712(&inst.points);
        for p in [&basic, &paired] {
            assert!(validate_packing(&inst.points, p, Mode::RectAny)?.is_valid());
        }
        println!(
            "n={n}: basic {} (>= {}), paired {} (>= {})",
            format_rational(&basic.total_area),
            format_rational(&basic_guarantee(n)),
            format_rational(&paired.total_area),
            format_rational(&paired_guarantee(n)),
        );
        assert!(basic.total_area >= basic_guarantee(n));
        assert!(paired.total_area >= paired_guarantee(n));
    }
    Ok(())
}

fn main() {
    run_example().expect("example failed");
}
