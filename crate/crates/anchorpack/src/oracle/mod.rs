//! Exact optima at desk scale.
//!
//! Rectangles: candidates whose free corner lies on the grid of point
//! coordinates, then an exact independent-set search. Squares: candidate
//! areas quantized to `(eps/n)(1+eps)^k`, so the optimum found is a certified
//! lower bound on the true square optimum.

mod surd;

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::geometry::{
    max_empty_anchored_square, AnchoredBox, Corner, Mode, Packing, Point, Rational, Rect,
};
use crate::mwis::{self, ConflictGraph};
pub use surd::{exact_sqrt, sign1, sign2, sqrt_floor, SurdCoord};

pub const DEFAULT_POINT_LIMIT: usize = 6;
pub const DEFAULT_CANDIDATE_LIMIT: usize = 2000;
/// Bits kept when an irrational square side is written out.
pub const SIDE_BITS: u32 = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{n} points exceed the oracle limit of {limit}")]
    TooManyPoints { n: usize, limit: usize },
    #[error("{count} candidates exceed the oracle limit of {limit}")]
    TooManyCandidates { count: usize, limit: usize },
    #[error("points {first} and {second} share the {axis} coordinate {value}")]
    NotGeneralPosition { first: usize, second: usize, axis: char, value: String },
    #[error("eps must be positive")]
    BadEps,
    #[error("mode {0} is not supported here")]
    WrongMode(Mode),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Hanan,
    EpsGrid,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Hanan => "hanan",
            Provenance::EpsGrid => "eps-grid",
        })
    }
}

/// Shape of a candidate box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extent {
    /// Width and height, both rational.
    Rect(Rational, Rational),
    /// A square of the given area; the side may be irrational.
    Square(Rational),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub anchor: usize,
    pub corner: Corner,
    pub extent: Extent,
    pub area: Rational,
}

impl Candidate {
    /// Open-interval endpoints along one axis: `(low, high)`.
    fn span(&self, p: &Point, x_axis: bool) -> (SurdCoord, SurdCoord) {
        let (v, d) = if x_axis { (&p.x, self.corner.dx()) } else { (&p.y, self.corner.dy()) };
        let base = SurdCoord::exact(v.clone());
        let far = match &self.extent {
            Extent::Rect(w, h) => {
                let len = if x_axis { w } else { h };
                SurdCoord::exact(if d > 0 { v + len } else { v - len })
            }
            Extent::Square(a) => SurdCoord { q: v.clone(), t: d as i64, s: a.clone() },
        };
        if d > 0 {
            (base, far)
        } else {
            (far, base)
        }
    }

    /// Whether the open interiors of two candidates meet.
    pub fn overlaps(&self, other: &Candidate, points: &[Point]) -> bool {
        let (p, q) = (&points[self.anchor], &points[other.anchor]);
        [true, false].into_iter().all(|ax| {
            let (a0, a1) = self.span(p, ax);
            let (b0, b1) = other.span(q, ax);
            a0.lt(&b1) && b0.lt(&a1)
        })
    }

    /// The box written out with rational sides (irrational sides rounded down).
    pub fn materialize(&self, p: &Point) -> AnchoredBox {
        match &self.extent {
            Extent::Rect(w, h) => AnchoredBox::new(self.anchor, self.corner, p, w, h),
            Extent::Square(a) => AnchoredBox::square(self.anchor, self.corner, p, &sqrt_floor(a, SIDE_BITS)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateSet {
    pub points: Vec<Point>,
    pub mode: Mode,
    pub provenance: Provenance,
    pub eps: Option<Rational>,
    pub candidates: Vec<Candidate>,
}

impl CandidateSet {
    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    pub fn for_anchor(&self, i: usize) -> impl Iterator<Item = &Candidate> {
        self.candidates.iter().filter(move |c| c.anchor == i)
    }

    /// Same anchor or overlapping interiors.
    pub fn conflict_graph(&self) -> ConflictGraph {
        let weights = self.candidates.iter().map(|c| c.area.clone()).collect();
        let groups = self.candidates.iter().map(|c| c.anchor).collect();
        let mut g = ConflictGraph::new(weights, groups);
        // Cheap float prefilter; the exact test decides.
        let boxes: Vec<[f64; 4]> = self.candidates.iter().map(|c| float_box(c, &self.points)).collect();
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                let (a, b) = (&self.candidates[i], &self.candidates[j]);
                if a.anchor == b.anchor {
                    continue;
                }
                let (u, v) = (boxes[i], boxes[j]);
                let slack = 1e-9;
                if u[0] >= v[2] + slack || v[0] >= u[2] + slack || u[1] >= v[3] + slack || v[1] >= u[3] + slack {
                    continue;
                }
                if a.overlaps(b, &self.points) {
                    g.add_conflict(i, j);
                }
            }
        }
        g
    }
}

fn float_box(c: &Candidate, points: &[Point]) -> [f64; 4] {
    use crate::geometry::to_f64;
    let p = &points[c.anchor];
    let (w, h) = match &c.extent {
        Extent::Rect(w, h) => (to_f64(w), to_f64(h)),
        Extent::Square(a) => {
            let s = to_f64(a).sqrt();
            (s, s)
        }
    };
    let (x, y) = (to_f64(&p.x), to_f64(&p.y));
    let (x0, x1) = if c.corner.dx() > 0 { (x, x + w) } else { (x - w, x) };
    let (y0, y1) = if c.corner.dy() > 0 { (y, y + h) } else { (y - h, y) };
    [x0, y0, x1, y1]
}

/// Anchored rectangles whose free corner lies on the grid through the points
/// and the square's sides, empty and inside the unit square.
pub fn hanan_candidates(points: &[Point], mode: Mode) -> Result<CandidateSet, OracleError> {
    if !matches!(mode, Mode::RectAny | Mode::RectLl) {
        return Err(OracleError::WrongMode(mode));
    }
    let mut xs: Vec<Rational> = points.iter().map(|p| p.x.clone()).chain([Rational::zero(), Rational::one()]).collect();
    let mut ys: Vec<Rational> = points.iter().map(|p| p.y.clone()).chain([Rational::zero(), Rational::one()]).collect();
    xs.sort();
    xs.dedup();
    ys.sort();
    ys.dedup();
    let mut candidates = Vec::new();
    for (i, p) in points.iter().enumerate() {
        for &c in mode.corners() {
            let gx: Vec<&Rational> = xs.iter().filter(|x| if c.dx() > 0 { **x > p.x } else { **x < p.x }).collect();
            let gy: Vec<&Rational> = ys.iter().filter(|y| if c.dy() > 0 { **y > p.y } else { **y < p.y }).collect();
            for fx in &gx {
                for fy in &gy {
                    let r = Rect::new(
                        crate::geometry::rmin(&p.x, fx).clone(),
                        crate::geometry::rmin(&p.y, fy).clone(),
                        crate::geometry::rmax(&p.x, fx).clone(),
                        crate::geometry::rmax(&p.y, fy).clone(),
                    );
                    if points.iter().any(|q| r.contains_open(q)) {
                        continue;
                    }
                    let (w, h) = (r.width(), r.height());
                    let area = r.area();
                    candidates.push(Candidate { anchor: i, corner: c, extent: Extent::Rect(w, h), area });
                }
            }
        }
    }
    Ok(CandidateSet { points: points.to_vec(), mode, provenance: Provenance::Hanan, eps: None, candidates })
}

fn check_general_position(points: &[Point]) -> Result<(), OracleError> {
    for axis in ['x', 'y'] {
        let key = |i: usize| if axis == 'x' { &points[i].x } else { &points[i].y };
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_by(|&a, &b| key(a).cmp(key(b)).then(a.cmp(&b)));
        if let Some(w) = order.windows(2).find(|w| key(w[0]) == key(w[1])) {
            return Err(OracleError::NotGeneralPosition {
                first: w[0].min(w[1]),
                second: w[0].max(w[1]),
                axis,
                value: crate::geometry::format_rational(key(w[0])),
            });
        }
    }
    Ok(())
}

/// Empty anchored squares with areas `(eps/n)(1+eps)^k` that fit.
///
/// Squares at one anchor always conflict, so coordinate collisions between
/// points are harmless and accepted.
pub fn square_candidates_eps(points: &[Point], eps: &Rational, mode: Mode) -> Result<CandidateSet, OracleError> {
    if !matches!(mode, Mode::SquareAny | Mode::SquareLl) {
        return Err(OracleError::WrongMode(mode));
    }
    if *eps <= Rational::zero() {
        return Err(OracleError::BadEps);
    }
    let n = Rational::from_integer(points.len().into());
    let base = eps / n;
    let growth = Rational::one() + eps;
    let mut candidates = Vec::new();
    for (i, p) in points.iter().enumerate() {
        for &c in mode.corners() {
            let s = max_empty_anchored_square(p, c, points, &[]);
            let cap = &s * &s;
            let mut a = base.clone();
            while a <= cap {
                candidates.push(Candidate { anchor: i, corner: c, extent: Extent::Square(a.clone()), area: a.clone() });
                a = &a * &growth;
            }
        }
    }
    Ok(CandidateSet {
        points: points.to_vec(),
        mode,
        provenance: Provenance::EpsGrid,
        eps: Some(eps.clone()),
        candidates,
    })
}

/// As [`square_candidates_eps`], refusing points that share a coordinate.
pub fn square_candidates_eps_strict(
    points: &[Point],
    eps: &Rational,
    mode: Mode,
) -> Result<CandidateSet, OracleError> {
    check_general_position(points)?;
    square_candidates_eps(points, eps, mode)
}

/// Upper bound on the eps-grid candidate count: `4n(floor(log(n/eps)/log(1+eps)) + 1)`.
pub fn eps_candidate_bound(n: usize, eps: &Rational) -> usize {
    // Largest k with (eps/n)(1+eps)^k <= 1, computed exactly.
    let base = eps / Rational::from_integer(n.into());
    let growth = Rational::one() + eps;
    let mut a = base;
    let mut k = 0usize;
    while &a * &growth <= Rational::one() {
        a = &a * &growth;
        k += 1;
    }
    4 * n * (k + 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleSolution {
    /// Exact optimum of the candidate problem.
    pub value: Rational,
    /// Chosen candidate indices.
    pub chosen: Vec<usize>,
    /// The packing; irrational sides are rounded down, so its area may sit
    /// slightly below `value`.
    pub packing: Packing,
    pub nodes: u64,
}

/// Exact maximum weight independent set over the candidates.
pub fn exact_mwis(cands: &CandidateSet, limit: usize) -> Result<OracleSolution, OracleError> {
    if cands.len() > limit {
        return Err(OracleError::TooManyCandidates { count: cands.len(), limit });
    }
    let g = cands.conflict_graph();
    let s = mwis::solve(&g, None, None);
    let boxes = s
        .chosen
        .iter()
        .map(|&i| {
            let c = &cands.candidates[i];
            c.materialize(&cands.points[c.anchor])
        })
        .collect();
    let packing = Packing::from_partial(cands.mode, &cands.points, boxes);
    Ok(OracleSolution { value: s.value, chosen: s.chosen, packing, nodes: s.nodes })
}

/// Optimal anchored rectangle packing for small `n`.
pub fn exact_opt_rect(points: &[Point], mode: Mode, point_limit: usize) -> Result<OracleSolution, OracleError> {
    if points.len() > point_limit {
        return Err(OracleError::TooManyPoints { n: points.len(), limit: point_limit });
    }
    let cands = hanan_candidates(points, mode)?;
    exact_mwis(&cands, usize::MAX)
}

/// Brute force over all candidate subsets, for cross-checking.
pub fn brute_force_mwis(cands: &CandidateSet) -> Rational {
    mwis::brute_force(&cands.conflict_graph()).value
}

/// Environment variable overriding [`OracleLimits`]: `N` or `N,M`.
pub const LIMIT_ENV: &str = "ANCHORPACK_ORACLE_LIMIT";

/// Size caps for oracle runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub points: usize,
    pub candidates: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits { points: DEFAULT_POINT_LIMIT, candidates: DEFAULT_CANDIDATE_LIMIT }
    }
}

impl OracleLimits {
    /// Parses `N` (point limit) or `N,M` (point and candidate limits).
    pub fn parse(s: &str) -> Option<Self> {
        let mut it = s.split(',').map(|t| t.trim().parse::<usize>());
        let points = it.next()?.ok()?;
        let candidates = match it.next() {
            Some(v) => v.ok()?,
            None => DEFAULT_CANDIDATE_LIMIT,
        };
        it.next().is_none().then_some(OracleLimits { points, candidates })
    }

    /// Defaults, overridden by the environment when it holds a valid value.
    pub fn from_env() -> Self {
        std::env::var(LIMIT_ENV).ok().and_then(|v| Self::parse(&v)).unwrap_or_default()
    }
}

/// Optimum for any mode: exact for rectangles, eps-quantized for squares.
pub fn solve(points: &[Point], mode: Mode, eps: &Rational, limits: OracleLimits) -> Result<OracleSolution, OracleError> {
    if points.len() > limits.points {
        return Err(OracleError::TooManyPoints { n: points.len(), limit: limits.points });
    }
    let cands = if mode.squares() { square_candidates_eps(points, eps, mode)? } else { hanan_candidates(points, mode)? };
    exact_mwis(&cands, limits.candidates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{int, rat, validate_packing};

    fn pts(v: &[((i64, i64), (i64, i64))]) -> Vec<Point> {
        v.iter().map(|&(x, y)| Point::from_ratios(x, y)).collect()
    }

    #[test]
    fn center_hanan() {
        let p = pts(&[((1, 2), (1, 2))]);
        let c = hanan_candidates(&p, Mode::RectAny).unwrap();
        assert_eq!(c.len(), 4);
        assert!(c.candidates.iter().all(|c| c.area == rat(1, 4)));
        assert_eq!(exact_opt_rect(&p, Mode::RectAny, 6).unwrap().value, rat(1, 4));
    }

    #[test]
    fn origin_ll() {
        let p = pts(&[((0, 1), (0, 1))]);
        let c = hanan_candidates(&p, Mode::RectLl).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.candidates[0].area, int(1));
    }

    #[test]
    fn thirds_opt() {
        let p = pts(&[((1, 3), (1, 3)), ((2, 3), (2, 3))]);
        let s = exact_opt_rect(&p, Mode::RectAny, 6).unwrap();
        assert_eq!(s.value, rat(4, 9));
        assert!(validate_packing(&p, &s.packing, Mode::RectAny).unwrap().is_valid());
    }

    #[test]
    fn fig1_candidates_contain_both_packings() {
        let p = pts(&[((1, 4), (3, 4)), ((3, 8), (7, 8))]);
        let c = hanan_candidates(&p, Mode::RectAny).unwrap();
        let has = |a: usize, corner: Corner, w: Rational, h: Rational| {
            c.candidates.iter().any(|x| x.anchor == a && x.corner == corner && x.extent == Extent::Rect(w.clone(), h.clone()))
        };
        assert!(has(0, Corner::UR, rat(1, 4), rat(3, 4)));
        assert!(has(1, Corner::UL, rat(5, 8), rat(7, 8)));
        assert!(exact_opt_rect(&p, Mode::RectAny, 6).unwrap().value >= rat(47, 64));
    }

    #[test]
    fn eps_single_origin() {
        let p = pts(&[((0, 1), (0, 1))]);
        let c = square_candidates_eps(&p, &rat(1, 2), Mode::SquareLl).unwrap();
        let areas: Vec<Rational> = c.candidates.iter().map(|c| c.area.clone()).collect();
        assert_eq!(areas, vec![rat(1, 2), rat(3, 4)]);
        let s = exact_mwis(&c, 2000).unwrap();
        assert_eq!(s.value, rat(3, 4));
        assert!(s.packing.total_area <= s.value);
    }

    #[test]
    fn eps_thirds_near_two_ninths() {
        let p = pts(&[((1, 3), (1, 3)), ((2, 3), (2, 3))]);
        let eps = rat(1, 20);
        let c = square_candidates_eps(&p, &eps, Mode::SquareAny).unwrap();
        assert!(c.len() <= eps_candidate_bound(2, &eps));
        let s = exact_mwis(&c, 2000).unwrap();
        assert!(s.value <= rat(2, 9));
        assert!(s.value >= rat(2, 9) * (int(1) - rat(32, 100)));
        let rep = validate_packing(&p, &s.packing, Mode::SquareAny).unwrap();
        assert!(rep.is_valid(), "{:?}", rep.violations);
    }

    #[test]
    fn strict_general_position() {
        let p = pts(&[((1, 2), (0, 1)), ((1, 2), (1, 3))]);
        let e = square_candidates_eps_strict(&p, &rat(1, 4), Mode::SquareAny).unwrap_err();
        assert!(matches!(e, OracleError::NotGeneralPosition { axis: 'x', .. }));
        assert!(square_candidates_eps(&p, &rat(1, 4), Mode::SquareAny).is_ok());
    }

    #[test]
    fn limits_are_refusals() {
        let p: Vec<Point> = (1..=7).map(|i| Point::from_ratios((i, 8), (i, 8))).collect();
        assert!(matches!(exact_opt_rect(&p, Mode::RectAny, 6), Err(OracleError::TooManyPoints { .. })));
        let c = square_candidates_eps(&p, &rat(1, 10), Mode::SquareAny).unwrap();
        assert!(matches!(exact_mwis(&c, 3), Err(OracleError::TooManyCandidates { .. })));
    }

    #[test]
    fn small_sets_match_brute_force() {
        let p = pts(&[((1, 4), (1, 2)), ((3, 4), (1, 3))]);
        let c = square_candidates_eps(&p, &rat(1, 1), Mode::SquareAny).unwrap();
        assert!(c.len() <= 18);
        assert_eq!(exact_mwis(&c, 2000).unwrap().value, brute_force_mwis(&c));
    }

    #[test]
    fn limits_parse() {
        assert_eq!(OracleLimits::parse("8"), Some(OracleLimits { points: 8, candidates: DEFAULT_CANDIDATE_LIMIT }));
        assert_eq!(OracleLimits::parse("3, 50"), Some(OracleLimits { points: 3, candidates: 50 }));
        assert_eq!(OracleLimits::parse("x"), None);
        assert_eq!(OracleLimits::parse("1,2,3"), None);
    }

    #[test]
    fn solve_respects_limits() {
        let p = pts(&[((1, 3), (1, 3)), ((2, 3), (2, 3))]);
        let tight = OracleLimits { points: 1, candidates: 100 };
        assert!(matches!(solve(&p, Mode::RectAny, &rat(1, 10), tight), Err(OracleError::TooManyPoints { .. })));
        let few = OracleLimits { points: 6, candidates: 3 };
        assert!(matches!(solve(&p, Mode::SquareAny, &rat(1, 10), few), Err(OracleError::TooManyCandidates { .. })));
        assert_eq!(solve(&p, Mode::RectAny, &rat(1, 10), OracleLimits::default()).unwrap().value, rat(4, 9));
    }
}
