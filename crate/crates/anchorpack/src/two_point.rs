//! Best anchored packing of two points in a rectangle, one of them on an edge.
//!
//! In the normalized frame `p1 = (x1, 0)` and `p2 = (x2, y2)` with `x1 <= x2`.
//! The vertical lines through both points and the horizontal line through `p2`
//! cut the unit square into six cells
//!
//! ```text
//!   r1 | r2 | r3      above y2
//!   r4 | r5 | r6      below y2
//! ```
//!
//! and every maximal packing is one of eight unions of these cells.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::geometry::{int, AnchoredBox, Corner, Mode, Packing, Point, Rational, Rect};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    R124,
    R134,
    R145,
    R146,
    R235,
    R256,
    R1256,
    R356,
    /// Only when `x1 = x2`: `p1` takes the full-height slab right of both points.
    R12356,
    R23456,
}

impl Label {
    /// Fixed order, also used to break ties.
    pub const ALL: [Label; 8] = [
        Label::R124,
        Label::R134,
        Label::R145,
        Label::R146,
        Label::R235,
        Label::R256,
        Label::R1256,
        Label::R356,
    ];

    /// Extra packings available when `p2` lies straight above `p1`.
    pub const STACKED: [Label; 2] = [Label::R12356, Label::R23456];

    pub fn name(self) -> &'static str {
        match self {
            Label::R124 => "r124",
            Label::R134 => "r134",
            Label::R145 => "r145",
            Label::R146 => "r146",
            Label::R235 => "r235",
            Label::R256 => "r256",
            Label::R1256 => "r1256",
            Label::R356 => "r356",
            Label::R12356 => "r12356",
            Label::R23456 => "r23456",
        }
    }

    /// Grid cells covered by the packing.
    pub fn cells(self) -> &'static [usize] {
        match self {
            Label::R124 => &[1, 2, 4],
            Label::R134 => &[1, 3, 4],
            Label::R145 => &[1, 4, 5],
            Label::R146 => &[1, 4, 6],
            Label::R235 => &[2, 3, 5],
            Label::R256 => &[2, 5, 6],
            Label::R1256 => &[1, 2, 5, 6],
            Label::R356 => &[3, 5, 6],
            Label::R12356 => &[1, 2, 3, 5, 6],
            Label::R23456 => &[2, 3, 4, 5, 6],
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwoPointError {
    #[error("first point {0} is on neither the bottom nor the top edge of the rectangle")]
    NotOnEdge(String),
    #[error("point {0} lies outside the rectangle")]
    Outside(String),
    #[error("grid step {0} is not of the form 1/k with k >= 1")]
    InvalidStep(String),
}

/// Two points in a rectangle, `p1` on its bottom (or top) edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoPointConfig {
    pub rect: Rect,
    pub p1: Point,
    pub p2: Point,
    pub x1: Rational,
    pub x2: Rational,
    pub y2: Rational,
    flip_x: bool,
    flip_y: bool,
}

impl TwoPointConfig {
    pub fn new(rect: Rect, p1: Point, p2: Point) -> Result<Self, TwoPointError> {
        for p in [&p1, &p2] {
            if !rect.contains_closed(p) {
                return Err(TwoPointError::Outside(p.to_string()));
            }
        }
        let flip_y = if p1.y == rect.y0 {
            false
        } else if p1.y == rect.y1 {
            true
        } else {
            return Err(TwoPointError::NotOnEdge(p1.to_string()));
        };
        let (w, h) = (rect.width(), rect.height());
        let nx = |x: &Rational| if w.is_zero() { Rational::zero() } else { (x - &rect.x0) / &w };
        let ny = |y: &Rational| if h.is_zero() { Rational::zero() } else { (y - &rect.y0) / &h };
        let (mut x1, mut x2) = (nx(&p1.x), nx(&p2.x));
        let mut y2 = ny(&p2.y);
        if flip_y {
            y2 = Rational::one() - y2;
        }
        let flip_x = x1 > x2;
        if flip_x {
            (x1, x2) = (Rational::one() - x1, Rational::one() - x2);
        }
        Ok(TwoPointConfig { rect, p1, p2, x1, x2, y2, flip_x, flip_y })
    }

    /// A config directly in the normalized unit-square frame.
    pub fn normalized(x1: Rational, x2: Rational, y2: Rational) -> Self {
        let p1 = Point::new(x1, int(0));
        let p2 = Point::new(x2, y2);
        TwoPointConfig::new(Rect::unit(), p1, p2).expect("normalized config")
    }

    /// Areas `a1..a6` of the six grid cells, in the normalized frame.
    pub fn cell_areas(&self) -> [Rational; 6] {
        cell_areas(&self.x1, &self.x2, &self.y2)
    }

    fn unmap(&self, r: &Rect, corner: Corner) -> (Rect, Corner) {
        let one = Rational::one();
        let (mut x0, mut x1) = (r.x0.clone(), r.x1.clone());
        let (mut y0, mut y1) = (r.y0.clone(), r.y1.clone());
        let mut c = corner;
        if self.flip_x {
            (x0, x1) = (&one - x1, &one - x0);
            c = c.mirror_x();
        }
        if self.flip_y {
            (y0, y1) = (&one - y1, &one - y0);
            c = c.mirror_y();
        }
        let (w, h) = (self.rect.width(), self.rect.height());
        let fx = |u: Rational| &self.rect.x0 + u * &w;
        let fy = |v: Rational| &self.rect.y0 + v * &h;
        (Rect::new(fx(x0), fy(y0), fx(x1), fy(y1)), c)
    }

    fn packing_for(&self, label: Label) -> Packing {
        let (z, o) = (Rational::zero(), Rational::one());
        let (x1, x2, y2) = (&self.x1, &self.x2, &self.y2);
        let r = |a: &Rational, b: &Rational, c: &Rational, d: &Rational| {
            Rect::new(a.clone(), b.clone(), c.clone(), d.clone())
        };
        let r14 = (r(&z, &z, x1, &o), Corner::LR);
        let r25 = (r(x1, &z, x2, &o), Corner::LL);
        let r56 = (r(x1, &z, &o, y2), Corner::LL);
        let (first, second) = match label {
            Label::R124 => (r14, (r(x1, y2, x2, &o), Corner::LR)),
            Label::R134 => (r14, (r(x2, y2, &o, &o), Corner::LL)),
            Label::R145 => (r14, (r(x1, &z, x2, y2), Corner::UR)),
            Label::R146 => (r14, (r(x2, &z, &o, y2), Corner::UL)),
            Label::R235 => (r25, (r(x2, y2, &o, &o), Corner::LL)),
            Label::R256 => (r25, (r(x2, &z, &o, y2), Corner::UL)),
            Label::R1256 => (r56, (r(&z, y2, x2, &o), Corner::LR)),
            Label::R356 => (r56, (r(x2, y2, &o, &o), Corner::LL)),
            Label::R12356 => ((r(x1, &z, &o, &o), Corner::LL), (r(&z, y2, x2, &o), Corner::LR)),
            Label::R23456 => ((r(x1, &z, &o, &o), Corner::LL), (r(&z, &z, x2, y2), Corner::UR)),
        };
        let mut boxes = Vec::with_capacity(2);
        for (anchor, (rect, corner)) in [(0usize, first), (1usize, second)] {
            let (rect, corner) = self.unmap(&rect, corner);
            boxes.push(AnchoredBox { anchor, corner, rect });
        }
        Packing::new(Mode::RectAny, boxes)
    }
}

pub fn cell_areas(x1: &Rational, x2: &Rational, y2: &Rational) -> [Rational; 6] {
    let one = Rational::one();
    let top = &one - y2;
    let (wl, wm, wr) = (x1.clone(), x2 - x1, &one - x2);
    [
        &wl * &top,
        &wm * &top,
        &wr * &top,
        &wl * y2,
        &wm * y2,
        &wr * y2,
    ]
}

/// Closed-form areas of the eight packings, in [`Label::ALL`] order.
pub fn eight_areas(x1: &Rational, x2: &Rational, y2: &Rational) -> [Rational; 8] {
    let a = cell_areas(x1, x2, y2);
    Label::ALL.map(|l| l.cells().iter().map(|&c| &a[c - 1]).sum())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledPacking {
    pub label: Label,
    pub packing: Packing,
}

/// The eight canonical packings; box 0 is anchored at `p1`, box 1 at `p2`.
pub fn enumerate_eight_packings(cfg: &TwoPointConfig) -> Vec<LabeledPacking> {
    Label::ALL
        .iter()
        .map(|&label| LabeledPacking { label, packing: cfg.packing_for(label) })
        .collect()
}

/// The largest of the eight packings, ties going to the earlier label. When
/// `p2` lies straight above `p1` the two [`Label::STACKED`] packings compete too.
pub fn best_two_point_packing(
    rect: &Rect,
    p1: &Point,
    p2: &Point,
) -> Result<LabeledPacking, TwoPointError> {
    let cfg = TwoPointConfig::new(rect.clone(), p1.clone(), p2.clone())?;
    let mut best: Option<LabeledPacking> = None;
    let stacked = Label::STACKED.iter().filter(|_| cfg.x1 == cfg.x2);
    let extra = stacked.map(|&label| LabeledPacking { label, packing: cfg.packing_for(label) });
    for lp in enumerate_eight_packings(&cfg).into_iter().chain(extra) {
        if best.as_ref().is_none_or(|b| lp.packing.total_area > b.packing.total_area) {
            best = Some(lp);
        }
    }
    Ok(best.expect("eight candidates"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridMinimum {
    pub min_value: Rational,
    pub argmin: (Rational, Rational, Rational),
    pub points_checked: usize,
}

/// Minimum over the grid of spacing `step = 1/k` in `{0 <= x1 <= x2 <= 1, 0 <= y2 <= 1}`
/// of the best of the eight packing areas. The first minimizer in
/// lexicographic `(x1, x2, y2)` order is reported.
pub fn verify_lemma3_grid(step: &Rational) -> Result<GridMinimum, TwoPointError> {
    let bad = || TwoPointError::InvalidStep(crate::geometry::format_rational(step));
    if !step.numer().is_one() || step.denom() > &num_bigint::BigInt::from(100_000) {
        return Err(bad());
    }
    let k: i64 = num_traits::ToPrimitive::to_i64(step.denom()).ok_or_else(bad)?;
    let coords: Vec<Rational> = (0..=k).map(|i| Rational::new(i.into(), k.into())).collect();
    let mut best: Option<GridMinimum> = None;
    let mut checked = 0usize;
    for i in 0..=k as usize {
        for j in i..=k as usize {
            for l in 0..=k as usize {
                checked += 1;
                let areas = eight_areas(&coords[i], &coords[j], &coords[l]);
                let top = areas.into_iter().max().expect("eight");
                if best.as_ref().is_none_or(|b| top < b.min_value) {
                    best = Some(GridMinimum {
                        min_value: top,
                        argmin: (coords[i].clone(), coords[j].clone(), coords[l].clone()),
                        points_checked: 0,
                    });
                }
            }
        }
    }
    let mut best = best.expect("nonempty grid");
    best.points_checked = checked;
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{rat, validate_packing};

    fn cfg(x1: Rational, x2: Rational, y2: Rational) -> TwoPointConfig {
        TwoPointConfig::normalized(x1, x2, y2)
    }

    #[test]
    fn tight_point_gives_seven_twelfths() {
        let c = cfg(rat(1, 3), rat(1, 2), rat(1, 2));
        let all = enumerate_eight_packings(&c);
        let r1256 = all.iter().find(|l| l.label == Label::R1256).unwrap();
        assert_eq!(r1256.packing.total_area, rat(7, 12));
        let best = best_two_point_packing(&Rect::unit(), &c.p1, &c.p2).unwrap();
        assert_eq!(best.packing.total_area, rat(7, 12));
    }

    #[test]
    fn corners_cover_everything() {
        let c = cfg(int(0), int(1), int(1));
        let best = best_two_point_packing(&Rect::unit(), &c.p1, &c.p2).unwrap();
        assert_eq!(best.packing.total_area, int(1));
    }

    #[test]
    fn packing_areas_match_cell_sums() {
        let c = cfg(rat(1, 4), rat(1, 2), rat(1, 4));
        let a = c.cell_areas();
        let expect = |cells: &[usize]| cells.iter().map(|&i| a[i - 1].clone()).sum::<Rational>();
        for lp in enumerate_eight_packings(&c) {
            assert_eq!(lp.packing.total_area, expect(lp.label.cells()), "{}", lp.label);
        }
        assert_eq!(a.iter().sum::<Rational>(), int(1));
    }

    #[test]
    fn identity_between_two_packings() {
        let c = cfg(rat(2, 7), rat(5, 9), rat(3, 11));
        let e = eight_areas(&c.x1, &c.x2, &c.y2);
        let a = c.cell_areas();
        assert_eq!(&e[6] + &e[1], int(1) + &a[0]);
    }

    #[test]
    fn packings_are_valid_in_general_rectangles() {
        let rect = Rect::new(rat(1, 5), rat(1, 3), rat(4, 5), rat(2, 3));
        let cases = [
            (Point::new(rat(3, 5), rat(1, 3)), Point::new(rat(1, 4), rat(1, 2))),
            (Point::new(rat(1, 4), rat(2, 3)), Point::new(rat(1, 2), rat(2, 5))),
            (Point::new(rat(1, 5), rat(1, 3)), Point::new(rat(4, 5), rat(2, 3))),
        ];
        for (p1, p2) in cases {
            let c = TwoPointConfig::new(rect.clone(), p1.clone(), p2.clone()).unwrap();
            for lp in enumerate_eight_packings(&c) {
                let pts = [p1.clone(), p2.clone()];
                let rep = validate_packing(&pts, &lp.packing, Mode::RectAny).unwrap();
                assert!(rep.is_valid(), "{}: {:?}", lp.label, rep);
                assert!(lp.packing.boxes.iter().all(|b| rect.contains_rect(&b.rect)));
            }
            let best = best_two_point_packing(&rect, &p1, &p2).unwrap();
            assert!(best.packing.total_area * int(12) >= rect.area() * int(7));
        }
    }

    #[test]
    fn rejects_point_off_the_edges() {
        let r = Rect::unit();
        let e = best_two_point_packing(&r, &Point::new(rat(1, 2), rat(1, 2)), &Point::new(int(0), int(0)));
        assert!(matches!(e, Err(TwoPointError::NotOnEdge(_))));
    }

    #[test]
    fn degenerate_rectangle_has_zero_area() {
        let r = Rect::new(int(0), rat(1, 2), int(1), rat(1, 2));
        let best = best_two_point_packing(&r, &Point::new(rat(1, 3), rat(1, 2)), &Point::new(rat(2, 3), rat(1, 2)))
            .unwrap();
        assert_eq!(best.packing.total_area, int(0));
    }

    #[test]
    fn coarse_grid_by_hand() {
        let g = verify_lemma3_grid(&rat(1, 2)).unwrap();
        assert_eq!(g.points_checked, 18);
        assert!(g.min_value >= rat(7, 12));
    }

    #[test]
    fn sixth_grid_hits_tight_point() {
        let g = verify_lemma3_grid(&rat(1, 6)).unwrap();
        assert!(verify_lemma3_grid(&rat(2, 7)).is_err());
        assert_eq!(g.min_value, rat(7, 12));
        assert_eq!(g.argmin, (rat(1, 3), rat(1, 2), rat(1, 2)));
    }

    #[test]
    fn stacked_points_use_the_full_slab() {
        let (p1, p2) = (Point::new(rat(3, 8), int(0)), Point::new(rat(3, 8), rat(5, 8)));
        let best = best_two_point_packing(&Rect::unit(), &p1, &p2).unwrap();
        assert_eq!(best.label, Label::R23456);
        assert_eq!(best.packing.total_area, rat(55, 64));
        let rep = validate_packing(&[p1.clone(), p2.clone()], &best.packing, Mode::RectAny).unwrap();
        assert!(rep.is_valid());
        // Mirrored: the slab lies to the left.
        let (q1, q2) = (Point::new(rat(5, 8), int(1)), Point::new(rat(5, 8), rat(3, 8)));
        let best = best_two_point_packing(&Rect::unit(), &q1, &q2).unwrap();
        assert_eq!(best.packing.total_area, rat(55, 64));
        assert!(validate_packing(&[q1, q2], &best.packing, Mode::RectAny).unwrap().is_valid());
    }
}
