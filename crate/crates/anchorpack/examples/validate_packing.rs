// Build a packing by hand, validate it, and measure a union of boxes.

use std::error::Error;

use anchorpack::geometry::{format_rational, rat, union_area, validate_packing};
use anchorpack::{AnchoredBox, Corner, Mode, Packing, Point, Rect};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let points = vec![Point::from_ratios((1, 4), (3, 4)), Point::from_ratios((3, 8), (7, 8))];
    let boxes = vec![
        AnchoredBox::new(0, Corner::UR, &points[0], &rat(1, 4), &rat(3, 4)),
        AnchoredBox::new(1, Corner::UL, &points[1], &rat(5, 8), &rat(7, 8)),
    ];
    let packing = Packing::new(Mode::RectAny, boxes);
    let report = validate_packing(&points, &packing, Mode::RectAny)?;
    println!("valid: {}, area {}", report.is_valid(), format_rational(&packing.total_area));
    assert!(report.is_valid());
    assert_eq!(packing.total_area, rat(47, 64));

    // A box swallowing another point is rejected.
    let bad = Packing::new(
        Mode::RectAny,
        vec![
            AnchoredBox::new(0, Corner::UR, &points[0], &rat(1, 4), &rat(3, 4)),
            AnchoredBox::new(1, Corner::LL, &points[1], &rat(1, 8), &rat(1, 8)),
        ],
    );
    let squares = validate_packing(&points, &bad, Mode::SquareAny)?;
    for v in &squares.violations {
        println!("  {v}");
    }
    assert!(!squares.is_valid());

    let u = union_area(&[
        Rect::new(rat(0, 1), rat(0, 1), rat(1, 2), rat(1, 2)),
        Rect::new(rat(1, 4), rat(1, 4), rat(3, 4), rat(3, 4)),
    ]);
    println!("union area {}", format_rational(&u));
    assert_eq!(u, rat(7, 16));
    Ok(())
}

fn main() {
    run_example().expect("example failed");
}
