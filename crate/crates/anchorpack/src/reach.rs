//! Reach regions: the parts of the unit square that some anchored box could cover.

use num_traits::{One, Zero};

use crate::geometry::{
    int, max_empty_anchored_square, rat, AnchoredBox, Corner, Packing, Point, Rational, Rect, RectUnionRegion,
};

/// `W(P)` together with its vertical-line decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RectReach {
    pub region: RectUnionRegion,
    /// Lower-left anchored rectangles tiling the staircase, one per step.
    pub decomposition: Vec<AnchoredBox>,
}

/// Union of the rectangles spanned by each point and `(1, 1)`.
pub fn reach_ll_rects(points: &[Point]) -> RectReach {
    let one = Rational::one();
    let spans: Vec<Rect> = points.iter().map(|p| Rect::new(p.x.clone(), p.y.clone(), one.clone(), one.clone())).collect();
    let region = RectUnionRegion::new(spans);
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| (&points[a].x, &points[a].y, a).cmp(&(&points[b].x, &points[b].y, b)));
    // Staircase steps: points that lower the running minimum of y, scanning left to right.
    // Among equal x the lowest point comes first, so merged steps keep a single corner.
    let mut steps: Vec<usize> = Vec::new();
    for &i in &order {
        let lowers = steps.last().is_none_or(|&s| points[i].y < points[s].y);
        if lowers {
            if steps.last().is_some_and(|&s| points[s].x == points[i].x) {
                continue;
            }
            steps.push(i);
        }
    }
    let mut decomposition = Vec::new();
    for (k, &s) in steps.iter().enumerate() {
        let p = &points[s];
        let right = steps.get(k + 1).map_or(one.clone(), |&t| points[t].x.clone());
        let b = AnchoredBox::new(s, Corner::LL, p, &(right - &p.x), &(&one - &p.y));
        if !b.rect.is_degenerate() {
            decomposition.push(b);
        }
    }
    RectReach { region, decomposition }
}

/// Maximal empty lower-left squares, one per point.
pub fn maximal_ll_squares(points: &[Point]) -> Vec<AnchoredBox> {
    points
        .iter()
        .enumerate()
        .map(|(i, p)| AnchoredBox::square(i, Corner::LL, p, &max_empty_anchored_square(p, Corner::LL, points, &[])))
        .collect()
}

/// `W_sq(P)`: union of the maximal empty lower-left squares.
pub fn reach_ll_squares(points: &[Point]) -> RectUnionRegion {
    RectUnionRegion::new(maximal_ll_squares(points).into_iter().map(|b| b.rect).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareReach {
    pub region: RectUnionRegion,
    /// Whether the area reaches 1/2. Reported, never assumed.
    pub at_least_half: bool,
}

/// `R_sq(P)`: union of the maximal empty squares over all four corners.
pub fn reach_anchored_squares(points: &[Point]) -> SquareReach {
    let mut boxes = Vec::with_capacity(4 * points.len());
    for p in points {
        for c in Corner::ALL {
            let s = max_empty_anchored_square(p, c, points, &[]);
            boxes.push(Rect::anchored(p, c, &s, &s));
        }
    }
    let region = RectUnionRegion::new(boxes);
    let at_least_half = region.area >= rat(1, 2);
    SquareReach { region, at_least_half }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleCover {
    pub holds: bool,
    /// A cell of `W_sq(P)` outside every tripled square.
    pub witness: Option<Rect>,
}

/// Checks that `W_sq(P)` lies inside the union of the greedy squares scaled
/// by 3 about their centers.
pub fn check_triple_cover(points: &[Point], greedy_ll: &Packing) -> TripleCover {
    let reach = reach_ll_squares(points);
    let three = int(3);
    let tripled = RectUnionRegion::new(
        greedy_ll.boxes.iter().filter(|b| !b.area().is_zero()).map(|b| b.rect.dilate(&three)).collect(),
    );
    let witness = reach.uncovered_by(&tripled);
    TripleCover { holds: witness.is_none(), witness }
}
