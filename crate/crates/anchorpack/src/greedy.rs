//! Greedy square packers: repeatedly place the largest empty anchored square.

use num_traits::Zero;

use crate::geometry::{
    format_rational, max_empty_anchored_square, AnchoredBox, Corner, Mode, Packing, Point, Rational, Rect,
};

/// Which corners a greedy square may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreedyMode {
    AnyCorner,
    LowerLeft,
}

impl GreedyMode {
    pub fn packing_mode(self) -> Mode {
        match self {
            GreedyMode::AnyCorner => Mode::SquareAny,
            GreedyMode::LowerLeft => Mode::SquareLl,
        }
    }
}

/// One greedy selection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub step: usize,
    pub anchor: usize,
    pub corner: Corner,
    pub side: Rational,
}

impl std::fmt::Display for TraceStep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: p{} {} side {}", self.step, self.anchor, self.corner.name(), format_rational(&self.side))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyResult {
    pub packing: Packing,
    pub trace: Vec<TraceStep>,
}

/// Places one square per point, always the largest still available.
///
/// A candidate square must be empty of every point of `points` (processed or
/// not) and of the squares placed so far. Ties go to the lowest anchor index,
/// then to the corner order LL, LR, UL, UR.
pub fn greedy_pack(points: &[Point], mode: GreedyMode) -> GreedyResult {
    let corners: &[Corner] = match mode {
        GreedyMode::AnyCorner => &Corner::ALL,
        GreedyMode::LowerLeft => &[Corner::LL],
    };
    let n = points.len();
    let mut remaining: Vec<bool> = vec![true; n];
    let mut placed: Vec<Rect> = Vec::new();
    let mut boxes = Vec::with_capacity(n);
    let mut trace = Vec::with_capacity(n);
    for step in 0..n {
        let mut best: Option<(usize, Corner, Rational)> = None;
        for q in (0..n).filter(|&q| remaining[q]) {
            for &c in corners {
                let s = max_empty_anchored_square(&points[q], c, points, &placed);
                if best.as_ref().is_none_or(|(_, _, b)| s > *b) {
                    best = Some((q, c, s));
                }
            }
        }
        let (q, c, s) = best.expect("a point remains");
        remaining[q] = false;
        let b = AnchoredBox::square(q, c, &points[q], &s);
        if !s.is_zero() {
            placed.push(b.rect.clone());
        }
        boxes.push(b);
        trace.push(TraceStep { step, anchor: q, corner: c, side: s });
    }
    boxes.sort_by_key(|b| b.anchor);
    GreedyResult { packing: Packing::new(mode.packing_mode(), boxes), trace }
}
