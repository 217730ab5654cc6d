//! Horizontal strip packers.
//!
//! Points are sorted by `y` (then `x`, then index) and the lines `y = y_i` cut
//! the square into `n + 1` strips of heights `h_1..h_{n+1}`.

use num_traits::{One, Zero};

use crate::geometry::{int, AnchoredBox, Corner, Mode, Packing, Point, Rational, Rect};
use crate::two_point::best_two_point_packing;

/// Vertical gaps between consecutive sorted `y` values, padded by 0 and 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapVector {
    pub h: Vec<Rational>,
}

impl GapVector {
    pub fn from_sorted_ys(ys: &[Rational]) -> Self {
        let mut h = Vec::with_capacity(ys.len() + 1);
        let mut prev = Rational::zero();
        for y in ys {
            h.push(y - &prev);
            prev = y.clone();
        }
        h.push(Rational::one() - prev);
        GapVector { h }
    }

    /// Number of points.
    pub fn n(&self) -> usize {
        self.h.len() - 1
    }

    /// `h_i` with the 1-based index used throughout.
    pub fn get(&self, i: usize) -> &Rational {
        &self.h[i - 1]
    }
}

/// Which strip-selection inequality fired first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StripRule {
    /// `h_1 <= 2/(n+2)` (even `n`).
    First,
    /// `h_{n+1} <= 2/(n+2)` (even `n`).
    Last,
    /// `h_i + h_{i+1}` below the threshold.
    Pair(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StripSelection {
    pub rule: StripRule,
    /// 1-based indices `lo..=hi` of the gaps forming the empty band.
    pub band: (usize, usize),
    pub threshold: Rational,
}

/// Finds the empty band: for odd `n` the first odd `i` with
/// `h_i + h_{i+1} <= 2/(n+1)`; for even `n` the scan `h_1`, `h_{n+1}`,
/// then `h_i + h_{i+1} <= 2/(n+2)` for `i = 1..n`.
///
/// For even `n` the band is a single gap with odd index, so that an even
/// number of points remains on each side of it.
pub fn select_empty_strip(gaps: &GapVector) -> StripSelection {
    let n = gaps.n();
    assert!(n >= 1, "no points");
    let pair = |i: usize| gaps.get(i) + gaps.get(i + 1);
    if n % 2 == 1 {
        let t = Rational::new(2.into(), ((n + 1) as i64).into());
        for i in (1..=n).step_by(2) {
            if pair(i) <= t {
                return StripSelection { rule: StripRule::Pair(i), band: (i, i + 1), threshold: t };
            }
        }
    } else {
        let t = Rational::new(2.into(), ((n + 2) as i64).into());
        if gaps.get(1) <= &t {
            return StripSelection { rule: StripRule::First, band: (1, 1), threshold: t };
        }
        if gaps.get(n + 1) <= &t {
            return StripSelection { rule: StripRule::Last, band: (n + 1, n + 1), threshold: t };
        }
        for i in 1..=n {
            if pair(i) <= t {
                let k = if i % 2 == 1 { i } else { i + 1 };
                return StripSelection { rule: StripRule::Pair(i), band: (k, k), threshold: t };
            }
        }
    }
    unreachable!("some strip inequality always holds for gaps summing to 1")
}

fn sorted_order(points: &[Point]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        (&points[a].y, &points[a].x, a).cmp(&(&points[b].y, &points[b].x, b))
    });
    order
}

/// One strip per point, a narrowest strip left empty, each point keeping the
/// larger side of its strip. Area at least `n / (2(n+1))`.
pub fn pack_strips_basic(points: &[Point]) -> Packing {
    let n = points.len();
    assert!(n >= 1, "no points");
    let order = sorted_order(points);
    let ys: Vec<Rational> = order.iter().map(|&i| points[i].y.clone()).collect();
    let gaps = GapVector::from_sorted_ys(&ys);
    let k = (1..=n + 1)
        .min_by(|&a, &b| gaps.get(a).cmp(gaps.get(b)).then(a.cmp(&b)))
        .expect("n+1 strips");
    let level = |i: usize| if i == 0 { Rational::zero() } else if i == n + 1 { Rational::one() } else { ys[i - 1].clone() };
    let mut boxes = Vec::with_capacity(n);
    // Strips below the empty one carry their point on the top edge, strips above on the bottom edge.
    for i in 1..=n {
        let idx = order[i - 1];
        let p = &points[idx];
        let (lo, hi, on_top) = if i < k { (level(i - 1), level(i), true) } else { (level(i), level(i + 1), false) };
        let h = &hi - &lo;
        let left = p.x.clone();
        let right = Rational::one() - &p.x;
        let (w, dx) = if left > right { (left, -1) } else { (right, 1) };
        let corner = Corner::from_dirs(dx, if on_top { -1 } else { 1 });
        boxes.push(AnchoredBox::new(idx, corner, p, &w, &h));
    }
    Packing::from_partial(Mode::RectAny, points, boxes)
}

/// Packs consecutive pairs `(order[a], order[a+1]), ...` into the strips they span,
/// the shared point sitting on the bottom edge (or the top edge when `below`).
fn pack_pairs(
    points: &[Point],
    order: &[usize],
    levels: &dyn Fn(usize) -> Rational,
    first: usize,
    last: usize,
    below: bool,
    out: &mut Vec<AnchoredBox>,
) {
    // Sorted positions first..=last (1-based), paired up.
    let mut i = first;
    while i < last {
        let (a, b) = (i, i + 1);
        let (lo, hi, edge, other) = if below {
            (levels(a - 1), levels(b), b, a)
        } else {
            (levels(a), levels(b + 1), a, b)
        };
        let rect = Rect::new(int(0), lo, int(1), hi);
        let (pe, po) = (order[edge - 1], order[other - 1]);
        let best = best_two_point_packing(&rect, &points[pe], &points[po]).expect("edge point on strip edge");
        let mut bs = best.packing.boxes;
        bs[0].anchor = pe;
        bs[1].anchor = po;
        out.extend(bs);
        i += 2;
    }
}

/// Two-point strips around a parity-selected empty band.
pub fn pack_strips_paired(points: &[Point]) -> (Packing, StripSelection) {
    let n = points.len();
    assert!(n >= 1, "no points");
    let order = sorted_order(points);
    let ys: Vec<Rational> = order.iter().map(|&i| points[i].y.clone()).collect();
    let gaps = GapVector::from_sorted_ys(&ys);
    let sel = select_empty_strip(&gaps);
    let levels = |i: usize| if i == 0 { Rational::zero() } else if i == n + 1 { Rational::one() } else { ys[i - 1].clone() };
    let mut boxes = Vec::with_capacity(n);
    let (lo, hi) = sel.band;
    // The band spans gaps lo..=hi, i.e. levels lo-1..hi; points strictly inside get nothing.
    pack_pairs(points, &order, &levels, 1, lo - 1, true, &mut boxes);
    pack_pairs(points, &order, &levels, hi, n, false, &mut boxes);
    (Packing::from_partial(Mode::RectAny, points, boxes), sel)
}

/// The better of [`pack_strips_paired`] and [`pack_strips_basic`].
pub fn pack_strips_712(points: &[Point]) -> Packing {
    let (paired, _) = pack_strips_paired(points);
    let basic = pack_strips_basic(points);
    if basic.total_area > paired.total_area {
        basic
    } else {
        paired
    }
}

/// `n / (2(n+1))`.
pub fn basic_guarantee(n: usize) -> Rational {
    Rational::new((n as i64).into(), (2 * (n as i64 + 1)).into())
}

/// `7(n-1) / (12(n+1))` for odd `n`, `7n / (12(n+2))` for even `n`.
pub fn paired_guarantee(n: usize) -> Rational {
    let n = n as i64;
    if n % 2 == 1 {
        Rational::new((7 * (n - 1)).into(), (12 * (n + 1)).into())
    } else {
        Rational::new((7 * n).into(), (12 * (n + 2)).into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{rat, validate_packing};

    fn pts(v: &[((i64, i64), (i64, i64))]) -> Vec<Point> {
        v.iter().map(|&(x, y)| Point::from_ratios(x, y)).collect()
    }

    fn check(points: &[Point], p: &Packing) {
        let rep = validate_packing(points, p, Mode::RectAny).unwrap();
        assert!(rep.is_valid(), "{:?}", rep.violations);
    }

    #[test]
    fn single_center_point() {
        let p = pts(&[((1, 2), (1, 2))]);
        let b = pack_strips_basic(&p);
        check(&p, &b);
        assert_eq!(b.total_area, rat(1, 4));
        let s = pack_strips_712(&p);
        assert!(s.total_area >= rat(1, 4));
    }

    #[test]
    fn thirds_basic() {
        let p = pts(&[((1, 3), (1, 3)), ((2, 3), (2, 3))]);
        let b = pack_strips_basic(&p);
        check(&p, &b);
        assert!(b.total_area >= rat(1, 3));
        assert_eq!(b.total_area, rat(4, 9));
    }

    #[test]
    fn shared_heights() {
        let p = pts(&[((1, 5), (1, 2)), ((2, 5), (1, 2)), ((4, 5), (1, 2))]);
        let b = pack_strips_basic(&p);
        check(&p, &b);
        assert!(b.total_area >= basic_guarantee(3));
        let s = pack_strips_712(&p);
        check(&p, &s);
        assert!(s.total_area >= paired_guarantee(3));
    }

    #[test]
    fn selection_examples() {
        let sel = select_empty_strip(&GapVector { h: vec![rat(1, 4); 4] });
        assert_eq!(sel.rule, StripRule::Pair(1));
        let sel = select_empty_strip(&GapVector { h: vec![rat(1, 3); 3] });
        assert_eq!(sel.rule, StripRule::First);
        let sel = select_empty_strip(&GapVector { h: vec![rat(3, 5), int(0), rat(2, 5)] });
        assert_eq!(sel.rule, StripRule::Last);
        assert_eq!(sel.band, (3, 3));
    }

    #[test]
    fn even_pair_rule_keeps_parity() {
        // n = 4, gaps 2/5, 1/5, 0, 0, 2/5: pair i = 2 fires, band is gap 3.
        let sel = select_empty_strip(&GapVector {
            h: vec![rat(2, 5), rat(1, 5), int(0), int(0), rat(2, 5)],
        });
        assert_eq!(sel.rule, StripRule::Pair(2));
        assert_eq!(sel.band, (3, 3));
    }

    #[test]
    fn prop1_three_points() {
        let p = pts(&[((1, 2), (1, 2)), ((1, 4), (1, 4)), ((1, 8), (1, 8))]);
        let s = pack_strips_712(&p);
        check(&p, &s);
        assert!(s.total_area >= rat(7, 24));
    }

    #[test]
    fn two_bottom_corners() {
        let p = pts(&[((0, 1), (0, 1)), ((1, 1), (0, 1))]);
        let (s, sel) = pack_strips_paired(&p);
        check(&p, &s);
        assert_eq!(sel.rule, StripRule::First);
        assert!(s.total_area >= rat(7, 12));
    }
}
