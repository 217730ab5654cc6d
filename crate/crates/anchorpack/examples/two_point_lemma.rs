// The best of the eight two-point packings, and the grid check of the 7/12 bound.

use std::error::Error;

use anchorpack::geometry::{format_rational, rat};
use anchorpack::two_point::{best_two_point_packing, verify_lemma3_grid};
use anchorpack::{Point, Rect};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let r = Rect::unit();
    let best = best_two_point_packing(&r, &Point::from_ratios((1, 3), (0, 1)), &Point::from_ratios((1, 2), (1, 2)))?;
    println!("tight configuration: {} with area {}", best.label, format_rational(&best.packing.total_area));
    assert_eq!(best.packing.total_area, rat(7, 12));

    // Any rectangle works; the lemma scales with its area.
    let r = Rect::new(rat(1, 4), rat(1, 2), rat(3, 4), rat(1, 1));
    let best = best_two_point_packing(&r, &Point::from_ratios((1, 2), (1, 2)), &Point::from_ratios((3, 5), (4, 5)))?;
    println!("in {r}: {} area {}", best.label, format_rational(&best.packing.total_area));
    assert!(best.packing.total_area >= rat(7, 12) * r.area());

    let m = verify_lemma3_grid(&rat(1, 12))?;
    println!("grid 1/12: min {} over {} points", format_rational(&m.min_value), m.points_checked);
    assert_eq!(m.min_value, rat(7, 12));
    Ok(())
}

fn main() {
    run_example().expect("example failed");
}
