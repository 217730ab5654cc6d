//! Exact rational geometry: points, anchored boxes, packings and their validation.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

/// Shorthand for the rational `n/d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Formats as `p/q`, or `p` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational literal {0:?}")]
pub struct ParseRationalError(pub String);

pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| err())?;
    let d = BigInt::from_str(d).map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(n, d))
}

pub fn rmin<'a>(a: &'a Rational, b: &'a Rational) -> &'a Rational {
    if a <= b {
        a
    } else {
        b
    }
}

pub fn rmax<'a>(a: &'a Rational, b: &'a Rational) -> &'a Rational {
    if a >= b {
        a
    } else {
        b
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    pub fn from_ratios(x: (i64, i64), y: (i64, i64)) -> Self {
        Point::new(rat(x.0, x.1), rat(y.0, y.1))
    }

    pub fn in_unit_square(&self) -> bool {
        let (z, o) = (Rational::zero(), Rational::one());
        self.x >= z && self.x <= o && self.y >= z && self.y <= o
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", format_rational(&self.x), format_rational(&self.y))
    }
}

/// Which corner of its box an anchor occupies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Corner {
    LL,
    LR,
    UL,
    UR,
}

impl Corner {
    pub const ALL: [Corner; 4] = [Corner::LL, Corner::LR, Corner::UL, Corner::UR];

    /// +1 if the box extends to the right of its anchor.
    pub fn dx(self) -> i8 {
        match self {
            Corner::LL | Corner::UL => 1,
            Corner::LR | Corner::UR => -1,
        }
    }

    /// +1 if the box extends above its anchor.
    pub fn dy(self) -> i8 {
        match self {
            Corner::LL | Corner::LR => 1,
            Corner::UL | Corner::UR => -1,
        }
    }

    pub fn from_dirs(dx: i8, dy: i8) -> Corner {
        match (dx > 0, dy > 0) {
            (true, true) => Corner::LL,
            (false, true) => Corner::LR,
            (true, false) => Corner::UL,
            (false, false) => Corner::UR,
        }
    }

    pub fn mirror_x(self) -> Corner {
        Corner::from_dirs(-self.dx(), self.dy())
    }

    pub fn mirror_y(self) -> Corner {
        Corner::from_dirs(self.dx(), -self.dy())
    }

    pub fn name(self) -> &'static str {
        match self {
            Corner::LL => "LL",
            Corner::LR => "LR",
            Corner::UL => "UL",
            Corner::UR => "UR",
        }
    }
}

impl fmt::Display for Corner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Corner {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "LL" | "ll" => Ok(Corner::LL),
            "LR" | "lr" => Ok(Corner::LR),
            "UL" | "ul" => Ok(Corner::UL),
            "UR" | "ur" => Ok(Corner::UR),
            _ => Err(format!("unknown corner {s:?}")),
        }
    }
}

/// Closed axis-aligned box `[x0,x1] × [y0,y1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rect {
    pub x0: Rational,
    pub y0: Rational,
    pub x1: Rational,
    pub y1: Rational,
}

impl Rect {
    pub fn new(x0: Rational, y0: Rational, x1: Rational, y1: Rational) -> Self {
        debug_assert!(x0 <= x1 && y0 <= y1, "unordered rect");
        Rect { x0, y0, x1, y1 }
    }

    pub fn unit() -> Self {
        Rect::new(int(0), int(0), int(1), int(1))
    }

    /// The box with `p` at `corner`, of the given width and height.
    pub fn anchored(p: &Point, corner: Corner, w: &Rational, h: &Rational) -> Self {
        let (x0, x1) = if corner.dx() > 0 {
            (p.x.clone(), &p.x + w)
        } else {
            (&p.x - w, p.x.clone())
        };
        let (y0, y1) = if corner.dy() > 0 {
            (p.y.clone(), &p.y + h)
        } else {
            (&p.y - h, p.y.clone())
        };
        Rect::new(x0, y0, x1, y1)
    }

    pub fn width(&self) -> Rational {
        &self.x1 - &self.x0
    }

    pub fn height(&self) -> Rational {
        &self.y1 - &self.y0
    }

    pub fn area(&self) -> Rational {
        self.width() * self.height()
    }

    pub fn is_degenerate(&self) -> bool {
        self.x0 == self.x1 || self.y0 == self.y1
    }

    /// True when the open interiors intersect.
    pub fn interiors_overlap(&self, o: &Rect) -> bool {
        !self.is_degenerate()
            && !o.is_degenerate()
            && self.x0 < o.x1
            && o.x0 < self.x1
            && self.y0 < o.y1
            && o.y0 < self.y1
    }

    pub fn contains_open(&self, p: &Point) -> bool {
        self.x0 < p.x && p.x < self.x1 && self.y0 < p.y && p.y < self.y1
    }

    pub fn contains_closed(&self, p: &Point) -> bool {
        self.x0 <= p.x && p.x <= self.x1 && self.y0 <= p.y && p.y <= self.y1
    }

    pub fn contains_rect(&self, o: &Rect) -> bool {
        self.x0 <= o.x0 && o.x1 <= self.x1 && self.y0 <= o.y0 && o.y1 <= self.y1
    }

    pub fn on_boundary(&self, p: &Point) -> bool {
        self.contains_closed(p) && !self.contains_open(p)
    }

    /// The point of this box sitting at `corner`.
    pub fn corner_point(&self, corner: Corner) -> Point {
        let x = if corner.dx() > 0 { &self.x0 } else { &self.x1 };
        let y = if corner.dy() > 0 { &self.y0 } else { &self.y1 };
        Point::new(x.clone(), y.clone())
    }

    pub fn intersection(&self, o: &Rect) -> Option<Rect> {
        let x0 = rmax(&self.x0, &o.x0).clone();
        let x1 = rmin(&self.x1, &o.x1).clone();
        let y0 = rmax(&self.y0, &o.y0).clone();
        let y1 = rmin(&self.y1, &o.y1).clone();
        (x0 <= x1 && y0 <= y1).then(|| Rect::new(x0, y0, x1, y1))
    }

    /// Concentric copy scaled by `k`.
    pub fn dilate(&self, k: &Rational) -> Rect {
        let two = int(2);
        let cx = (&self.x0 + &self.x1) / &two;
        let cy = (&self.y0 + &self.y1) / &two;
        let hw = self.width() * k / &two;
        let hh = self.height() * k / &two;
        Rect::new(&cx - &hw, &cy - &hh, &cx + &hw, &cy + &hh)
    }
}

impl fmt::Display for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{},{}]x[{},{}]",
            format_rational(&self.x0),
            format_rational(&self.x1),
            format_rational(&self.y0),
            format_rational(&self.y1)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnchoredBox {
    pub anchor: usize,
    pub corner: Corner,
    pub rect: Rect,
}

impl AnchoredBox {
    pub fn new(anchor: usize, corner: Corner, p: &Point, w: &Rational, h: &Rational) -> Self {
        AnchoredBox { anchor, corner, rect: Rect::anchored(p, corner, w, h) }
    }

    pub fn square(anchor: usize, corner: Corner, p: &Point, side: &Rational) -> Self {
        AnchoredBox::new(anchor, corner, p, side, side)
    }

    /// Zero-area box, so that every point owns exactly one box.
    pub fn degenerate(anchor: usize, p: &Point) -> Self {
        let z = Rational::zero();
        AnchoredBox::new(anchor, Corner::LL, p, &z, &z)
    }

    pub fn width(&self) -> Rational {
        self.rect.width()
    }

    pub fn height(&self) -> Rational {
        self.rect.height()
    }

    pub fn area(&self) -> Rational {
        self.rect.area()
    }

    pub fn is_square(&self) -> bool {
        self.width() == self.height()
    }

    pub fn anchor_point(&self) -> Point {
        self.rect.corner_point(self.corner)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    RectAny,
    SquareAny,
    RectLl,
    SquareLl,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::RectAny, Mode::SquareAny, Mode::RectLl, Mode::SquareLl];

    pub fn squares(self) -> bool {
        matches!(self, Mode::SquareAny | Mode::SquareLl)
    }

    pub fn lower_left(self) -> bool {
        matches!(self, Mode::RectLl | Mode::SquareLl)
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::RectAny => "rect-any",
            Mode::SquareAny => "square-any",
            Mode::RectLl => "rect-ll",
            Mode::SquareLl => "square-ll",
        }
    }

    pub fn corners(self) -> &'static [Corner] {
        if self.lower_left() {
            &[Corner::LL]
        } else {
            &Corner::ALL
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Mode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown mode {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Packing {
    pub mode: Mode,
    pub boxes: Vec<AnchoredBox>,
    pub total_area: Rational,
}

impl Packing {
    pub fn new(mode: Mode, boxes: Vec<AnchoredBox>) -> Self {
        let total_area = boxes.iter().map(|b| b.area()).sum();
        Packing { mode, boxes, total_area }
    }

    /// Box list indexed by anchor, with degenerate boxes for anchors that got nothing.
    pub fn from_partial(mode: Mode, points: &[Point], boxes: Vec<AnchoredBox>) -> Self {
        let mut slots: Vec<Option<AnchoredBox>> = vec![None; points.len()];
        for b in boxes {
            let i = b.anchor;
            debug_assert!(slots[i].is_none(), "anchor {i} used twice");
            slots[i] = Some(b);
        }
        let boxes = slots
            .into_iter()
            .enumerate()
            .map(|(i, b)| b.unwrap_or_else(|| AnchoredBox::degenerate(i, &points[i])))
            .collect();
        Packing::new(mode, boxes)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("instance has no points")]
    Empty,
    #[error("point {index} = {point} lies outside the unit square")]
    OutOfRange { index: usize, point: String },
    #[error("points {first} and {second} coincide at {point}")]
    DuplicatePoint { first: usize, second: usize, point: String },
    #[error("packing has {boxes} boxes but the instance has {points} points")]
    LengthMismatch { boxes: usize, points: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub points: Vec<Point>,
    pub family: String,
    pub params: BTreeMap<String, String>,
    pub mode: Option<Mode>,
}

impl Instance {
    pub fn new(points: Vec<Point>) -> Result<Self, GeometryError> {
        if points.is_empty() {
            return Err(GeometryError::Empty);
        }
        if let Some(i) = points.iter().position(|p| !p.in_unit_square()) {
            return Err(GeometryError::OutOfRange { index: i, point: points[i].to_string() });
        }
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_by(|&a, &b| points[a].cmp(&points[b]).then(a.cmp(&b)));
        for w in order.windows(2) {
            if points[w[0]] == points[w[1]] {
                return Err(GeometryError::DuplicatePoint {
                    first: w[0].min(w[1]),
                    second: w[0].max(w[1]),
                    point: points[w[0]].to_string(),
                });
            }
        }
        Ok(Instance { points, family: "custom".into(), params: BTreeMap::new(), mode: None })
    }

    pub fn with_family(mut self, family: &str) -> Self {
        self.family = family.to_string();
        self
    }

    pub fn with_param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Anchoring { index: usize },
    WrongCorner { index: usize, corner: Corner },
    AnchorMismatch { index: usize, anchor: usize },
    Containment { index: usize },
    Overlap { first: usize, second: usize },
    Emptiness { index: usize, point: usize },
    NotSquare { index: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Anchoring { index } => write!(f, "box {index}: anchor is not at its stated corner"),
            Violation::WrongCorner { index, corner } => {
                write!(f, "box {index}: corner {corner} not allowed in lower-left mode")
            }
            Violation::AnchorMismatch { index, anchor } => {
                write!(f, "box {index}: bound to anchor {anchor}, expected {index}")
            }
            Violation::Containment { index } => write!(f, "box {index}: leaves the unit square"),
            Violation::Overlap { first, second } => write!(f, "boxes {first} and {second} overlap"),
            Violation::Emptiness { index, point } => {
                write!(f, "box {index}: point {point} lies in its interior")
            }
            Violation::NotSquare { index } => write!(f, "box {index}: not a square"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks anchoring, containment, disjointness, emptiness and squareness.
pub fn validate_packing(
    points: &[Point],
    packing: &Packing,
    mode: Mode,
) -> Result<ValidationReport, GeometryError> {
    if points.len() != packing.boxes.len() {
        return Err(GeometryError::LengthMismatch {
            boxes: packing.boxes.len(),
            points: points.len(),
        });
    }
    let unit = Rect::unit();
    let mut v = Vec::new();
    for (i, b) in packing.boxes.iter().enumerate() {
        if b.anchor != i {
            v.push(Violation::AnchorMismatch { index: i, anchor: b.anchor });
        }
        if b.anchor_point() != points[i] {
            v.push(Violation::Anchoring { index: i });
        }
        if mode.lower_left() && b.corner != Corner::LL {
            v.push(Violation::WrongCorner { index: i, corner: b.corner });
        }
        if !unit.contains_rect(&b.rect) {
            v.push(Violation::Containment { index: i });
        }
        if mode.squares() && !b.is_square() {
            v.push(Violation::NotSquare { index: i });
        }
        if !b.rect.is_degenerate() {
            for (j, p) in points.iter().enumerate() {
                if b.rect.contains_open(p) {
                    v.push(Violation::Emptiness { index: i, point: j });
                }
            }
        }
    }
    for i in 0..packing.boxes.len() {
        for j in i + 1..packing.boxes.len() {
            if packing.boxes[i].rect.interiors_overlap(&packing.boxes[j].rect) {
                v.push(Violation::Overlap { first: i, second: j });
            }
        }
    }
    Ok(ValidationReport { violations: v })
}

/// Exact area of a union of boxes, by sweeping x-slabs of the compressed grid.
pub fn union_area(boxes: &[Rect]) -> Rational {
    let live: Vec<&Rect> = boxes.iter().filter(|b| !b.is_degenerate()).collect();
    let mut xs: Vec<&Rational> = live.iter().flat_map(|b| [&b.x0, &b.x1]).collect();
    xs.sort();
    xs.dedup();
    let mut total = Rational::zero();
    for w in xs.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mut ys: Vec<(&Rational, &Rational)> = live
            .iter()
            .filter(|r| &r.x0 <= a && b <= &r.x1)
            .map(|r| (&r.y0, &r.y1))
            .collect();
        if ys.is_empty() {
            continue;
        }
        ys.sort();
        let mut covered = Rational::zero();
        let (mut lo, mut hi) = (ys[0].0, ys[0].1);
        for &(y0, y1) in &ys[1..] {
            if y0 > hi {
                covered += hi - lo;
                lo = y0;
                hi = y1;
            } else if y1 > hi {
                hi = y1;
            }
        }
        covered += hi - lo;
        total += covered * (b - a);
    }
    total
}

/// A rectilinear region kept as its generating boxes plus the compressed grid they induce.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RectUnionRegion {
    pub boxes: Vec<Rect>,
    pub xs: Vec<Rational>,
    pub ys: Vec<Rational>,
    pub area: Rational,
}

impl RectUnionRegion {
    pub fn new(boxes: Vec<Rect>) -> Self {
        let boxes: Vec<Rect> = boxes.into_iter().filter(|b| !b.is_degenerate()).collect();
        let mut xs: Vec<Rational> = boxes.iter().flat_map(|b| [b.x0.clone(), b.x1.clone()]).collect();
        let mut ys: Vec<Rational> = boxes.iter().flat_map(|b| [b.y0.clone(), b.y1.clone()]).collect();
        xs.sort();
        xs.dedup();
        ys.sort();
        ys.dedup();
        let area = union_area(&boxes);
        RectUnionRegion { boxes, xs, ys, area }
    }

    /// Whether the open cell `c` lies inside the region.
    pub fn covers_cell(&self, c: &Rect) -> bool {
        self.boxes.iter().any(|b| b.contains_rect(c))
    }

    /// Coverage bitmap of the elementary cells of the grid `xs × ys`.
    fn mark(&self, xs: &[Rational], ys: &[Rational]) -> Vec<bool> {
        let w = xs.len().saturating_sub(1);
        let mut m = vec![false; w * ys.len().saturating_sub(1)];
        let at = |v: &[Rational], t: &Rational| v.binary_search(t).expect("grid contains box coordinates");
        for b in &self.boxes {
            let (i0, i1) = (at(xs, &b.x0), at(xs, &b.x1));
            for j in at(ys, &b.y0)..at(ys, &b.y1) {
                m[j * w + i0..j * w + i1].iter_mut().for_each(|c| *c = true);
            }
        }
        m
    }

    /// `None` if `self ⊆ other`, else a grid cell of `self` missed by `other`.
    pub fn uncovered_by(&self, other: &RectUnionRegion) -> Option<Rect> {
        let mut xs: Vec<Rational> = self.xs.iter().chain(&other.xs).cloned().collect();
        let mut ys: Vec<Rational> = self.ys.iter().chain(&other.ys).cloned().collect();
        xs.sort();
        xs.dedup();
        ys.sort();
        ys.dedup();
        let (a, b) = (self.mark(&xs, &ys), other.mark(&xs, &ys));
        let w = xs.len().saturating_sub(1);
        let k = (0..a.len()).find(|&k| a[k] && !b[k])?;
        let (i, j) = (k % w, k / w);
        Some(Rect::new(xs[i].clone(), ys[j].clone(), xs[i + 1].clone(), ys[j + 1].clone()))
    }
}

/// Largest side `s` of an empty square anchored at `q` with the given corner.
///
/// The square must stay in the unit square, keep every point out of its open
/// interior and avoid the interiors of the obstacles.
pub fn max_empty_anchored_square(
    q: &Point,
    corner: Corner,
    points: &[Point],
    obstacles: &[Rect],
) -> Rational {
    max_empty_square_in(q, corner, points, obstacles, &Rect::unit())
}

/// As [`max_empty_anchored_square`], confined to `bounds` instead of the unit square.
pub fn max_empty_square_in(
    q: &Point,
    corner: Corner,
    points: &[Point],
    obstacles: &[Rect],
    bounds: &Rect,
) -> Rational {
    let (dx, dy) = (corner.dx(), corner.dy());
    let room_x = if dx > 0 { &bounds.x1 - &q.x } else { &q.x - &bounds.x0 };
    let room_y = if dy > 0 { &bounds.y1 - &q.y } else { &q.y - &bounds.y0 };
    let mut s = rmin(&room_x, &room_y).clone();
    if s.is_negative() {
        return Rational::zero();
    }
    let off = |v: &Rational, o: &Rational, d: i8| if d > 0 { v - o } else { o - v };
    for p in points {
        let ox = off(&p.x, &q.x, dx);
        let oy = off(&p.y, &q.y, dy);
        if ox.is_positive() && oy.is_positive() {
            let m = rmax(&ox, &oy);
            if m < &s {
                s = m.clone();
            }
        }
    }
    for o in obstacles {
        let (ax0, ax1) = if dx > 0 { (&o.x0 - &q.x, &o.x1 - &q.x) } else { (&q.x - &o.x1, &q.x - &o.x0) };
        let (by0, by1) = if dy > 0 { (&o.y0 - &q.y, &o.y1 - &q.y) } else { (&q.y - &o.y1, &q.y - &o.y0) };
        if ax1.is_positive() && by1.is_positive() && ax0 < ax1 && by0 < by1 {
            let g = rmax(&ax0, &by0);
            let g = if g.is_negative() { Rational::zero() } else { g.clone() };
            if g < s {
                s = g;
            }
        }
    }
    s
}
