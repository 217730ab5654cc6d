// Exact optima: rectangles over the point grid, squares over quantized areas.

use std::error::Error;

use anchorpack::geometry::{format_rational, rat, to_f64, validate_packing};
use anchorpack::greedy::{greedy_pack, GreedyMode};
use anchorpack::oracle::{exact_mwis, exact_opt_rect, square_candidates_eps, DEFAULT_CANDIDATE_LIMIT};
use anchorpack::{Mode, Point};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let thirds = vec![Point::from_ratios((1, 3), (1, 3)), Point::from_ratios((2, 3), (2, 3))];
    let opt = exact_opt_rect(&thirds, Mode::RectAny, 6)?;
    println!("rectangles: OPT = {} after {} nodes", format_rational(&opt.value), opt.nodes);
    assert_eq!(opt.value, rat(4, 9));

    let pts = vec![
        Point::from_ratios((1, 5), (3, 5)),
        Point::from_ratios((1, 2), (1, 4)),
        Point::from_ratios((4, 5), (7, 10)),
    ];
    let eps = rat(1, 10);
    let cands = square_candidates_eps(&pts, &eps, Mode::SquareAny)?;
    let sol = exact_mwis(&cands, DEFAULT_CANDIDATE_LIMIT)?;
    assert!(validate_packing(&pts, &sol.packing, Mode::SquareAny)?.is_valid());
    let greedy = greedy_pack(&pts, GreedyMode::AnyCorner).packing.total_area;
    println!(
        "squares: {} candidates, OPT_eps {:.4}, greedy {:.4}",
        cands.len(),
        to_f64(&sol.value),
        to_f64(&greedy)
    );
    assert!(greedy * rat(47, 9) >= sol.value);
    Ok(())
}

fn main() {
    run_example().expect("example failed");
}
