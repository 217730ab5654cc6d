//! Recursive quadtree packer for anchored squares.
//!
//! The basic mode guarantees 1/8 of the unit square, the refined mode 5/32.
//! Ties on cell boundaries: a point on a vertical dividing line belongs to the
//! left cell, on a horizontal one to the lower cell.

mod library;
mod rules;

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::geometry::{int, rat, AnchoredBox, Corner, Mode, Packing, Point, Rational, Rect};
use rules::Occupancy;
pub use rules::Rule;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContractError {
    #[error("the two regions do not share a full edge")]
    NotAdjacent,
    #[error("the regions are not congruent")]
    NotCongruent,
    #[error("the neighbour is narrower than half the shared edge")]
    TooNarrow,
    #[error("no point in the first region")]
    NoPoint,
    #[error("point {0} lies inside the second region")]
    NotEmpty(usize),
}

/// A square cell of the quadtree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadCell {
    pub x0: Rational,
    pub y0: Rational,
    pub side: Rational,
    pub depth: usize,
}

impl QuadCell {
    pub fn unit() -> Self {
        QuadCell { x0: Rational::zero(), y0: Rational::zero(), side: Rational::one(), depth: 0 }
    }

    pub fn rect(&self) -> Rect {
        Rect::new(self.x0.clone(), self.y0.clone(), &self.x0 + &self.side, &self.y0 + &self.side)
    }

    pub fn area(&self) -> Rational {
        &self.side * &self.side
    }

    /// Cell `(col, row)` of the `k × k` grid, `depth` grows by `log2 k`.
    pub fn sub(&self, col: usize, row: usize, k: usize) -> QuadCell {
        let s = &self.side / int(k as i64);
        QuadCell {
            x0: &self.x0 + &s * int(col as i64),
            y0: &self.y0 + &s * int(row as i64),
            side: s,
            depth: self.depth + k.trailing_zeros() as usize,
        }
    }

    /// Quadrant `U1..U4` (1-based, counterclockwise from upper right).
    pub fn child(&self, q: usize) -> QuadCell {
        let (c, r) = rules::offset(q);
        self.sub(c, r, 2)
    }

    /// Grid position in the `k × k` subdivision, ties going left and down.
    pub fn grid_index(&self, p: &Point, k: usize) -> (usize, usize) {
        let idx = |v: &Rational, o: &Rational| {
            let t = (v - o) * int(k as i64) / &self.side;
            let c = t.ceil().to_integer();
            let c: i64 = c.try_into().unwrap_or(i64::MAX);
            (c - 1).clamp(0, k as i64 - 1) as usize
        };
        (idx(&p.x, &self.x0), idx(&p.y, &self.y0))
    }

    pub fn quadrant_of(&self, p: &Point) -> usize {
        match self.grid_index(p, 2) {
            (1, 1) => 1,
            (0, 1) => 2,
            (0, 0) => 3,
            _ => 4,
        }
    }

    pub fn on_boundary(&self, p: &Point) -> bool {
        self.rect().on_boundary(p)
    }

    /// Local coordinates in `[0,1]²`.
    pub fn local(&self, p: &Point) -> (Rational, Rational) {
        ((&p.x - &self.x0) / &self.side, (&p.y - &self.y0) / &self.side)
    }
}

/// Extreme point of `r1` toward `r2` with a square of side `b/2` pointing into `r2`.
fn push_square(
    r1: &Rect,
    r2: &Rect,
    points: &[Point],
    anchors: &[usize],
    check: &[usize],
) -> Result<AnchoredBox, ContractError> {
    // Direction of r2 as seen from r1, and the shared span.
    let (dx, dy) = if r1.x1 == r2.x0 {
        (1, 0)
    } else if r1.x0 == r2.x1 {
        (-1, 0)
    } else if r1.y1 == r2.y0 {
        (0, 1)
    } else if r1.y0 == r2.y1 {
        (0, -1)
    } else {
        return Err(ContractError::NotAdjacent);
    };
    let horizontal = dx != 0;
    let (lo, hi) = if horizontal { (&r1.y0, &r1.y1) } else { (&r1.x0, &r1.x1) };
    let (lo2, hi2) = if horizontal { (&r2.y0, &r2.y1) } else { (&r2.x0, &r2.x1) };
    if lo != lo2 || hi != hi2 {
        return Err(ContractError::NotAdjacent);
    }
    let b = hi - lo;
    let a2 = if horizontal { r2.width() } else { r2.height() };
    let half = &b / int(2);
    if a2 < half {
        return Err(ContractError::TooNarrow);
    }
    if let Some(&i) = check.iter().find(|&&i| r2.contains_open(&points[i])) {
        return Err(ContractError::NotEmpty(i));
    }
    let key = |i: usize| {
        let p = &points[i];
        let along = if horizontal { &p.x } else { &p.y };
        if dx + dy > 0 {
            along.clone()
        } else {
            -along.clone()
        }
    };
    let p = anchors
        .iter()
        .copied()
        .filter(|&i| r1.contains_closed(&points[i]))
        .max_by(|&a, &b| key(a).cmp(&key(b)).then(b.cmp(&a)))
        .ok_or(ContractError::NoPoint)?;
    let q = &points[p];
    let across = if horizontal { &q.y } else { &q.x };
    let up = (across - lo) <= half;
    let corner = if horizontal {
        Corner::from_dirs(dx, if up { 1 } else { -1 })
    } else {
        Corner::from_dirs(if up { 1 } else { -1 }, dy)
    };
    let sq = AnchoredBox::square(p, corner, q, &half);
    if let Some(&i) = check.iter().find(|&&i| sq.rect.contains_open(&points[i])) {
        return Err(ContractError::NotEmpty(i));
    }
    Ok(sq)
}

/// Square of side `b/2` from the extreme point of `r1` toward `r2`, where the
/// two regions share an edge of length `b` and `r2` is at least `b/2` deep and
/// has no point in its interior. Area at least `b²/4`.
pub fn square_from_adjacent_rects(r1: &Rect, r2: &Rect, points: &[Point]) -> Result<AnchoredBox, ContractError> {
    let all: Vec<usize> = (0..points.len()).collect();
    push_square(r1, r2, points, &all, &all)
}

/// As [`square_from_adjacent_rects`] for two congruent squares: area at least `area(u)/4`.
pub fn square_from_adjacent_cells(u: &Rect, v: &Rect, points: &[Point]) -> Result<AnchoredBox, ContractError> {
    if u.width() != u.height() || v.width() != u.width() || v.height() != u.height() {
        return Err(ContractError::NotCongruent);
    }
    square_from_adjacent_rects(u, v, points)
}

/// Coverage of one rule.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RuleStats {
    pub fired: u64,
    /// Times the area fell short of the rule's guarantee.
    pub failures: u64,
    /// Smallest observed area as a fraction of the cell area.
    pub worst: Option<Rational>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QuadtreeStats {
    pub rules: BTreeMap<Rule, RuleStats>,
    /// Local searches stopped by the node budget.
    pub truncated_searches: u64,
}

impl QuadtreeStats {
    pub fn failures(&self) -> u64 {
        self.rules.values().map(|s| s.failures).sum()
    }

    pub fn merge(&mut self, other: &QuadtreeStats) {
        for (r, s) in &other.rules {
            let e = self.rules.entry(*r).or_default();
            e.fired += s.fired;
            e.failures += s.failures;
            e.worst = match (e.worst.take(), &s.worst) {
                (Some(a), Some(b)) => Some(a.min(b.clone())),
                (a, b) => a.or_else(|| b.clone()),
            };
        }
        self.truncated_searches += other.truncated_searches;
    }

    /// Table rules that never fired.
    pub fn unfired(&self) -> Vec<Rule> {
        Rule::TABLE.into_iter().filter(|r| self.rules.get(r).is_none_or(|s| s.fired == 0)).collect()
    }
}

#[derive(Debug, Clone, Default)]
struct Sol {
    boxes: Vec<AnchoredBox>,
    area: Rational,
}

impl Sol {
    fn push(&mut self, b: AnchoredBox) {
        if !b.area().is_zero() {
            self.area += b.area();
            self.boxes.push(b);
        }
    }

    fn extend(&mut self, o: Sol) {
        self.area += o.area;
        self.boxes.extend(o.boxes);
    }
}

struct Solver<'a> {
    pts: &'a [Point],
    refined: bool,
    stats: QuadtreeStats,
    memo: HashMap<(Rational, Rational, Rational, Vec<usize>), Sol>,
}

impl Solver<'_> {
    fn guarantee(&self) -> Rational {
        if self.refined {
            rat(5, 32)
        } else {
            rat(1, 8)
        }
    }

    fn record(&mut self, rule: Rule, cell: &QuadCell, area: &Rational, bound: &Rational) {
        let frac = area / cell.area();
        let s = self.stats.rules.entry(rule).or_default();
        s.fired += 1;
        if frac < *bound {
            s.failures += 1;
        }
        if s.worst.as_ref().is_none_or(|w| frac < *w) {
            s.worst = Some(frac);
        }
    }

    fn solve(&mut self, cell: &QuadCell, idx: &[usize]) -> Sol {
        if idx.is_empty() {
            return Sol::default();
        }
        let interior: Vec<usize> = idx.iter().copied().filter(|&i| !cell.on_boundary(&self.pts[i])).collect();
        if interior.is_empty() {
            let sol = self.boundary_rule(cell, idx);
            self.record(Rule::Boundary, cell, &sol.area, &rat(1, 4));
            return sol;
        }
        let key = (cell.x0.clone(), cell.y0.clone(), cell.side.clone(), interior.clone());
        if let Some(s) = self.memo.get(&key) {
            return s.clone();
        }
        let sol = match interior.len() {
            1 => {
                let s = self.single_rule(cell, interior[0]);
                self.record(Rule::Single, cell, &s.area, &rat(1, 4));
                s
            }
            2 => {
                let s = self.pair_rule(cell, interior[0], interior[1]);
                self.record(Rule::Pair, cell, &s.area, &rat(2, 9));
                s
            }
            _ => self.quadrants(cell, &interior),
        };
        self.memo.insert(key, sol.clone());
        sol
    }

    fn boundary_rule(&self, cell: &QuadCell, idx: &[usize]) -> Sol {
        let i = *idx.iter().min().expect("nonempty");
        let p = &self.pts[i];
        let r = cell.rect();
        let half = &cell.side / int(2);
        let toward = |v: &Rational, o: &Rational| if v - o <= half { 1 } else { -1 };
        let (dx, dy) = if p.y == r.y0 {
            (toward(&p.x, &r.x0), 1)
        } else if p.y == r.y1 {
            (toward(&p.x, &r.x0), -1)
        } else if p.x == r.x0 {
            (1, toward(&p.y, &r.y0))
        } else {
            (-1, toward(&p.y, &r.y0))
        };
        let mut s = Sol::default();
        s.push(AnchoredBox::square(i, Corner::from_dirs(dx, dy), p, &half));
        s
    }

    fn single_rule(&self, cell: &QuadCell, i: usize) -> Sol {
        let p = &self.pts[i];
        let half = &cell.side / int(2);
        let toward = |v: &Rational, o: &Rational| if v - o <= half { 1 } else { -1 };
        let mut s = Sol::default();
        let c = Corner::from_dirs(toward(&p.x, &cell.x0), toward(&p.y, &cell.y0));
        s.push(AnchoredBox::square(i, c, p, &half));
        s
    }

    /// Vertical strips through both points; squares as wide as the two widest strips.
    fn pair_rule(&self, cell: &QuadCell, a: usize, b: usize) -> Sol {
        let key = |i: usize| (&self.pts[i].x, &self.pts[i].y, i);
        let (i, j) = if key(a) <= key(b) { (a, b) } else { (b, a) };
        let (p, q) = (&self.pts[i], &self.pts[j]);
        let x1 = &cell.x0 + &cell.side;
        let w = [&p.x - &cell.x0, &q.x - &p.x, &x1 - &q.x];
        let half = &cell.side / int(2);
        let vert = |pt: &Point| if &pt.y - &cell.y0 <= half { 1 } else { -1 };
        let mut s = Sol::default();
        let sq = |k: usize, dx: i8, side: &Rational| {
            let pt = &self.pts[k];
            AnchoredBox::square(k, Corner::from_dirs(dx, vert(pt)), pt, side)
        };
        if w[0] >= half {
            s.push(sq(i, -1, &half));
        } else if w[2] >= half {
            s.push(sq(j, 1, &half));
        } else if w[1] >= half {
            s.push(sq(i, 1, &half));
        } else {
            let mut order = [0usize, 1, 2];
            order.sort_by(|&x, &y| w[y].cmp(&w[x]).then(x.cmp(&y)));
            let mut pick = [order[0], order[1]];
            pick.sort_unstable();
            match pick {
                [0, 1] => {
                    s.push(sq(i, -1, &w[0]));
                    s.push(sq(j, -1, &w[1]));
                }
                [0, 2] => {
                    s.push(sq(i, -1, &w[0]));
                    s.push(sq(j, 1, &w[2]));
                }
                _ => {
                    s.push(sq(i, 1, &w[1]));
                    s.push(sq(j, 1, &w[2]));
                }
            }
        }
        s
    }

    fn quadrants(&mut self, cell: &QuadCell, idx: &[usize]) -> Sol {
        let mut groups: [Vec<usize>; 5] = Default::default();
        for &i in idx {
            groups[cell.quadrant_of(&self.pts[i])].push(i);
        }
        let empty: Vec<usize> = (1..=4).filter(|&q| groups[q].is_empty()).collect();
        let g = self.guarantee();
        match empty.len() {
            0 => {
                let mut s = Sol::default();
                for q in 1..=4 {
                    s.extend(self.solve(&cell.child(q), &groups[q]));
                }
                self.record(Rule::Split, cell, &s.area, &g);
                s
            }
            3 => {
                let q = (1..=4).find(|&q| !groups[q].is_empty()).expect("one nonempty");
                let s = self.corner_rule(cell, q, &groups[q]);
                self.record(Rule::Corner, cell, &s.area, &rat(1, 4));
                s
            }
            1 => {
                let basic = self.basic_one_empty(cell, &groups, empty[0], idx);
                if self.refined {
                    self.refined_rule(cell, idx, basic)
                } else {
                    self.record(Rule::OneEmptyBasic, cell, &basic.area, &g);
                    basic
                }
            }
            _ => {
                let opposite = empty == [1, 3] || empty == [2, 4];
                if self.refined && !opposite {
                    let s = self.adjacent_rule(cell, &empty, idx);
                    self.record(Rule::Adjacent, cell, &s.area, &rat(1, 4));
                    return s;
                }
                let basic = self.basic_two_empty(cell, &groups, idx);
                if self.refined {
                    self.refined_rule(cell, idx, basic)
                } else {
                    self.record(Rule::TwoEmptyBasic, cell, &basic.area, &g);
                    basic
                }
            }
        }
    }

    fn corner_rule(&self, cell: &QuadCell, q: usize, idx: &[usize]) -> Sol {
        let (c, r) = rules::offset(q);
        let sx: i8 = if c == 1 { -1 } else { 1 };
        let sy: i8 = if r == 1 { -1 } else { 1 };
        let key = |i: usize| {
            let p = &self.pts[i];
            let (x, y) = (&p.x * int(sx as i64), &p.y * int(sy as i64));
            (&x + &y, x)
        };
        let best = idx.iter().copied().max_by(|&a, &b| key(a).cmp(&key(b)).then(b.cmp(&a))).expect("nonempty");
        let mut s = Sol::default();
        s.push(AnchoredBox::square(best, Corner::from_dirs(sx, sy), &self.pts[best], &(&cell.side / int(2))));
        s
    }

    /// Push from quadrant `u` into the empty neighbour `v`.
    fn obs(&self, cell: &QuadCell, u: usize, v: usize, anchors: &[usize], all: &[usize]) -> AnchoredBox {
        push_square(&cell.child(u).rect(), &cell.child(v).rect(), self.pts, anchors, all)
            .expect("neighbour quadrant is empty")
    }

    fn basic_one_empty(&mut self, cell: &QuadCell, groups: &[Vec<usize>; 5], e: usize, idx: &[usize]) -> Sol {
        let (ec, er) = rules::offset(e);
        let quad = |c: usize, r: usize| (1..=4).find(|&q| rules::offset(q) == (c, r)).expect("quadrant");
        let h = quad(1 - ec, er);
        let mut s = Sol::default();
        s.push(self.obs(cell, h, e, &groups[h], idx));
        for c in 0..2 {
            let q = quad(c, 1 - er);
            s.extend(self.solve(&cell.child(q), &groups[q]));
        }
        s
    }

    fn basic_two_empty(&mut self, cell: &QuadCell, groups: &[Vec<usize>; 5], idx: &[usize]) -> Sol {
        let full: Vec<usize> = (1..=4).filter(|&q| !groups[q].is_empty()).collect();
        let (a, b) = (rules::offset(full[0]), rules::offset(full[1]));
        let quad = |c: usize, r: usize| (1..=4).find(|&q| rules::offset(q) == (c, r)).expect("quadrant");
        let mut s = Sol::default();
        for (q, (c, r)) in [(full[0], a), (full[1], b)] {
            // Rows differ: push sideways; same row: push vertically.
            let v = if a.1 != b.1 { quad(1 - c, r) } else { quad(c, 1 - r) };
            s.push(self.obs(cell, q, v, &groups[q], idx));
        }
        s
    }

    /// Two edge-adjacent nonempty quadrants: their half pushes into the empty half.
    fn adjacent_rule(&self, cell: &QuadCell, empty: &[usize], idx: &[usize]) -> Sol {
        let r = cell.rect();
        let mid_x = &cell.x0 + &cell.side / int(2);
        let mid_y = &cell.y0 + &cell.side / int(2);
        let halves = |e: (usize, usize), f: (usize, usize)| -> (Rect, Rect) {
            if e.0 == f.0 {
                // Empty column.
                let left = Rect::new(r.x0.clone(), r.y0.clone(), mid_x.clone(), r.y1.clone());
                let right = Rect::new(mid_x.clone(), r.y0.clone(), r.x1.clone(), r.y1.clone());
                if e.0 == 1 {
                    (left, right)
                } else {
                    (right, left)
                }
            } else {
                let low = Rect::new(r.x0.clone(), r.y0.clone(), r.x1.clone(), mid_y.clone());
                let high = Rect::new(r.x0.clone(), mid_y.clone(), r.x1.clone(), r.y1.clone());
                if e.1 == 1 {
                    (low, high)
                } else {
                    (high, low)
                }
            }
        };
        let (full, free) = halves(rules::offset(empty[0]), rules::offset(empty[1]));
        let mut s = Sol::default();
        s.push(push_square(&full, &free, self.pts, idx, idx).expect("empty half"));
        s
    }

    fn refined_rule(&mut self, cell: &QuadCell, idx: &[usize], basic: Sol) -> Sol {
        let mut counts = [[0usize; 4]; 4];
        let mut points = Vec::with_capacity(idx.len());
        for &i in idx {
            let p = &self.pts[i];
            let (c, r) = cell.grid_index(p, 4);
            counts[c][r] += 1;
            points.push(((c, r), cell.local(p)));
        }
        let occ = Occupancy { counts, points };
        let (rule, bound) = rules::classify(&occ).unwrap_or((Rule::Unclassified, self.guarantee()));
        let local = self.local_search(cell, idx);
        let best = if local.area > basic.area { local } else { basic };
        self.record(rule, cell, &best.area, &bound);
        best
    }
}

/// Quadtree packing; `refined` selects the 5/32 dispatch over the 1/8 one.
pub fn pack_quadtree(points: &[Point], refined: bool) -> Packing {
    pack_quadtree_with_stats(points, refined).0
}

/// As [`pack_quadtree`], also returning how often each rule fired.
pub fn pack_quadtree_with_stats(points: &[Point], refined: bool) -> (Packing, QuadtreeStats) {
    let mut s = Solver { pts: points, refined, stats: QuadtreeStats::default(), memo: HashMap::new() };
    let idx: Vec<usize> = (0..points.len()).collect();
    let sol = s.solve(&QuadCell::unit(), &idx);
    (Packing::from_partial(Mode::SquareAny, points, sol.boxes), s.stats)
}
