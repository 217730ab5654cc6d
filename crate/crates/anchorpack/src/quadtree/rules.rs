//! Dispatch rules of the quadtree packer and the area each one guarantees.
//!
//! Inside a cell `U` the quadrants are `U1` (upper right), `U2` (upper left),
//! `U3` (lower left), `U4` (lower right); the quadrants of `Ui` are `Ui1..Ui4`
//! in the same order. `λi` counts the empty quadrants of `Ui`.
//!
//! A configuration with one empty quadrant is first turned so that `U1` is the
//! empty one; two nonempty opposite quadrants are turned onto `U2, U4` with
//! `λ2 <= λ4`. Among the eight symmetries of the square the first one (in a
//! fixed order) that yields a listed pattern is used.

use std::fmt;

use crate::geometry::{rat, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    /// Every point lies on the cell boundary.
    Boundary,
    Single,
    /// Two points: vertical strips.
    Pair,
    /// One nonempty quadrant: half-size square from its maximal point.
    Corner,
    /// No empty quadrant: recurse into all four.
    Split,
    /// One empty quadrant, basic construction.
    OneEmptyBasic,
    /// Two empty quadrants, basic construction.
    TwoEmptyBasic,
    /// Two nonempty edge-adjacent quadrants: half-size square into the empty half.
    Adjacent,
    /// No symmetry produced a listed pattern (never expected).
    Unclassified,

    // One empty quadrant (U1), by the empty quadrants of U2.
    OneEmptyFull,
    OneEmptyRightGap,
    OneEmptyLeftGap,
    OneEmptyColumnGap,
    OneEmptyLowLeftGap,
    OneEmptyRightOnly,
    OneEmptyLeftOnly,

    // Opposite, U2 full.
    OppFullFull,
    OppFullLeftGap,
    OppFullRightGap,
    OppFullBottomPair,
    OppFullOtherPair,
    OppFullSingleSide,
    OppFullSingleInnerMany,
    OppFullSingleInnerOne,
    OppFullSingleCorner,

    // Opposite, one empty quadrant in U2.
    OppGapRightOne,
    OppGapLowLeftOne,
    OppGapTopLeftOne,
    OppGapPair,
    OppGapLowRightSide,
    OppGapLowRightInner,
    OppGapLowRightCorner,
    OppGapTopLeftOuter,
    OppGapTopLeftInner,
    OppGapDiagOuter,
    OppGapDiagInner,

    // Opposite, two empty quadrants in U2.
    OppHalfAnti,
    OppHalfMain,
    OppHalfLeftLow,
    OppHalfRightPair,
    OppHalfMixed,
    OppHalfMainCorner,
    OppHalfRightSingle,

    // Opposite, three empty quadrants in both.
    OppSingleNear,
    OppSingleFar,
}

impl Rule {
    /// Rules reached only through the refined dispatch.
    pub const TABLE: [Rule; 37] = [
        Rule::OneEmptyFull,
        Rule::OneEmptyRightGap,
        Rule::OneEmptyLeftGap,
        Rule::OneEmptyColumnGap,
        Rule::OneEmptyLowLeftGap,
        Rule::OneEmptyRightOnly,
        Rule::OneEmptyLeftOnly,
        Rule::Adjacent,
        Rule::OppFullFull,
        Rule::OppFullLeftGap,
        Rule::OppFullRightGap,
        Rule::OppFullBottomPair,
        Rule::OppFullOtherPair,
        Rule::OppFullSingleSide,
        Rule::OppFullSingleInnerMany,
        Rule::OppFullSingleInnerOne,
        Rule::OppFullSingleCorner,
        Rule::OppGapRightOne,
        Rule::OppGapLowLeftOne,
        Rule::OppGapTopLeftOne,
        Rule::OppGapPair,
        Rule::OppGapLowRightSide,
        Rule::OppGapLowRightInner,
        Rule::OppGapLowRightCorner,
        Rule::OppGapTopLeftOuter,
        Rule::OppGapTopLeftInner,
        Rule::OppGapDiagOuter,
        Rule::OppGapDiagInner,
        Rule::OppHalfAnti,
        Rule::OppHalfMain,
        Rule::OppHalfLeftLow,
        Rule::OppHalfRightPair,
        Rule::OppHalfMixed,
        Rule::OppHalfMainCorner,
        Rule::OppHalfRightSingle,
        Rule::OppSingleNear,
        Rule::OppSingleFar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Boundary => "boundary",
            Rule::Single => "single",
            Rule::Pair => "pair",
            Rule::Corner => "corner",
            Rule::Split => "split",
            Rule::OneEmptyBasic => "one-empty/basic",
            Rule::TwoEmptyBasic => "two-empty/basic",
            Rule::Adjacent => "two-empty/adjacent",
            Rule::Unclassified => "unclassified",
            Rule::OneEmptyFull => "one-empty/full",
            Rule::OneEmptyRightGap => "one-empty/right-gap",
            Rule::OneEmptyLeftGap => "one-empty/left-gap",
            Rule::OneEmptyColumnGap => "one-empty/column-gap",
            Rule::OneEmptyLowLeftGap => "one-empty/low-left-gap",
            Rule::OneEmptyRightOnly => "one-empty/right-only",
            Rule::OneEmptyLeftOnly => "one-empty/left-only",
            Rule::OppFullFull => "opposite/full/full",
            Rule::OppFullLeftGap => "opposite/full/left-gap",
            Rule::OppFullRightGap => "opposite/full/right-gap",
            Rule::OppFullBottomPair => "opposite/full/bottom-pair",
            Rule::OppFullOtherPair => "opposite/full/other-pair",
            Rule::OppFullSingleSide => "opposite/full/single-side",
            Rule::OppFullSingleInnerMany => "opposite/full/single-inner-many",
            Rule::OppFullSingleInnerOne => "opposite/full/single-inner-one",
            Rule::OppFullSingleCorner => "opposite/full/single-corner",
            Rule::OppGapRightOne => "opposite/gap/right-one",
            Rule::OppGapLowLeftOne => "opposite/gap/low-left-one",
            Rule::OppGapTopLeftOne => "opposite/gap/top-left-one",
            Rule::OppGapPair => "opposite/gap/pair",
            Rule::OppGapLowRightSide => "opposite/gap/low-right/side",
            Rule::OppGapLowRightInner => "opposite/gap/low-right/inner",
            Rule::OppGapLowRightCorner => "opposite/gap/low-right/corner",
            Rule::OppGapTopLeftOuter => "opposite/gap/top-left/outer",
            Rule::OppGapTopLeftInner => "opposite/gap/top-left/inner",
            Rule::OppGapDiagOuter => "opposite/gap/diagonal/outer",
            Rule::OppGapDiagInner => "opposite/gap/diagonal/inner",
            Rule::OppHalfAnti => "opposite/half/anti-diagonal",
            Rule::OppHalfMain => "opposite/half/main-diagonal",
            Rule::OppHalfLeftLow => "opposite/half/left-low",
            Rule::OppHalfRightPair => "opposite/half/right-pair",
            Rule::OppHalfMixed => "opposite/half/mixed",
            Rule::OppHalfMainCorner => "opposite/half/main-diagonal-corner",
            Rule::OppHalfRightSingle => "opposite/half/right-single",
            Rule::OppSingleNear => "opposite/single/near",
            Rule::OppSingleFar => "opposite/single/far",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Offset of quadrant `i` (1..=4) inside its parent, as (column, row).
pub(crate) fn offset(i: usize) -> (usize, usize) {
    match i {
        1 => (1, 1),
        2 => (0, 1),
        3 => (0, 0),
        4 => (1, 0),
        _ => unreachable!("quadrant label {i}"),
    }
}

/// Column and row of `Uij` in the 4×4 grid of the cell.
pub(crate) fn cell(i: usize, j: usize) -> (usize, usize) {
    let ((qc, qr), (jc, jr)) = (offset(i), offset(j));
    (2 * qc + jc, 2 * qr + jr)
}

/// One of the eight symmetries of the square: optional transpose, then flips.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Sym {
    swap: bool,
    flip_c: bool,
    flip_r: bool,
}

impl Sym {
    pub(crate) const ALL: [Sym; 8] = [
        Sym { swap: false, flip_c: false, flip_r: false },
        Sym { swap: false, flip_c: true, flip_r: false },
        Sym { swap: false, flip_c: false, flip_r: true },
        Sym { swap: false, flip_c: true, flip_r: true },
        Sym { swap: true, flip_c: false, flip_r: false },
        Sym { swap: true, flip_c: true, flip_r: false },
        Sym { swap: true, flip_c: false, flip_r: true },
        Sym { swap: true, flip_c: true, flip_r: true },
    ];

    fn grid(self, c: usize, r: usize) -> (usize, usize) {
        let (c, r) = if self.swap { (r, c) } else { (c, r) };
        (if self.flip_c { 3 - c } else { c }, if self.flip_r { 3 - r } else { r })
    }

    fn local(self, u: &Rational, v: &Rational) -> (Rational, Rational) {
        let (u, v) = if self.swap { (v, u) } else { (u, v) };
        let one = rat(1, 1);
        (if self.flip_c { &one - u } else { u.clone() }, if self.flip_r { &one - v } else { v.clone() })
    }
}

/// Occupancy of the 4×4 grid, plus local coordinates of the points.
#[derive(Debug, Clone)]
pub(crate) struct Occupancy {
    pub counts: [[usize; 4]; 4],
    /// Grid cell and local coordinates in `[0,1]²` of every point.
    pub points: Vec<((usize, usize), (Rational, Rational))>,
}

struct View<'a> {
    occ: &'a Occupancy,
    sym: Sym,
    counts: [[usize; 4]; 4],
}

impl View<'_> {
    fn new(occ: &Occupancy, sym: Sym) -> View<'_> {
        let mut counts = [[0; 4]; 4];
        for c in 0..4 {
            for r in 0..4 {
                let (c2, r2) = sym.grid(c, r);
                counts[c2][r2] = occ.counts[c][r];
            }
        }
        View { occ, sym, counts }
    }

    fn o(&self, i: usize, j: usize) -> usize {
        let (c, r) = cell(i, j);
        self.counts[c][r]
    }

    fn n(&self, i: usize) -> usize {
        (1..=4).map(|j| self.o(i, j)).sum()
    }

    fn empty(&self, i: usize) -> Vec<usize> {
        (1..=4).filter(|&j| self.o(i, j) == 0).collect()
    }

    fn full(&self, i: usize) -> Vec<usize> {
        (1..=4).filter(|&j| self.o(i, j) > 0).collect()
    }

    /// Local coordinates, in this view, of the points of `Uij`.
    fn locals(&self, i: usize, j: usize) -> Vec<(Rational, Rational)> {
        let target = cell(i, j);
        self.occ
            .points
            .iter()
            .filter(|((c, r), _)| self.sym.grid(*c, *r) == target)
            .map(|(_, (u, v))| self.sym.local(u, v))
            .collect()
    }
}

/// Rule and guaranteed area, as a fraction of the cell area.
pub(crate) fn classify(occ: &Occupancy) -> Option<(Rule, Rational)> {
    Sym::ALL.into_iter().find_map(|s| classify_view(&View::new(occ, s)))
}

fn classify_view(v: &View) -> Option<(Rule, Rational)> {
    let empty_q: Vec<usize> = (1..=4).filter(|&i| v.n(i) == 0).collect();
    match empty_q.as_slice() {
        [1] => Some(one_empty(v)),
        [1, 3] if v.empty(2).len() <= v.empty(4).len() => opposite(v),
        _ => None,
    }
}

fn one_empty(v: &View) -> (Rule, Rational) {
    let e = v.empty(2);
    let full = v.full(2);
    match e.as_slice() {
        [] => (Rule::OneEmptyFull, rat(41, 256)),
        [1] | [4] => (Rule::OneEmptyRightGap, rat(41, 256)),
        [2] | [3] | [1, 2] | [2, 4] => (Rule::OneEmptyLeftGap, rat(5, 32)),
        [1, 4] | [2, 3] => (Rule::OneEmptyColumnGap, rat(21, 128)),
        [1, 3] | [3, 4] => (Rule::OneEmptyLowLeftGap, rat(5, 32)),
        _ => match full.as_slice() {
            [1] | [4] => (Rule::OneEmptyRightOnly, rat(21, 128)),
            _ => (Rule::OneEmptyLeftOnly, rat(5, 32)),
        },
    }
}

fn opposite(v: &View) -> Option<(Rule, Rational)> {
    let (l2, l4) = (v.empty(2).len(), v.empty(4).len());
    let full4 = v.full(4);
    let empty4 = v.empty(4);
    let r = match (l2, l4) {
        (0, 0) => (Rule::OppFullFull, rat(21, 128)),
        (0, 1) => match empty4[0] {
            2 | 3 => (Rule::OppFullLeftGap, rat(21, 128)),
            _ => (Rule::OppFullRightGap, rat(41, 256)),
        },
        (0, 2) => match full4.as_slice() {
            [3, 4] | [1, 4] => (Rule::OppFullBottomPair, rat(5, 32)),
            _ => (Rule::OppFullOtherPair, rat(41, 256)),
        },
        (0, 3) => match full4[0] {
            1 | 3 => (Rule::OppFullSingleSide, rat(5, 32)),
            2 if v.o(4, 2) >= 2 => (Rule::OppFullSingleInnerMany, rat(3, 16)),
            2 => (Rule::OppFullSingleInnerOne, rat(41, 256)),
            _ => (Rule::OppFullSingleCorner, rat(5, 32)),
        },
        (1, 1) => match v.empty(2)[0] {
            1 | 4 => (Rule::OppGapRightOne, rat(5, 32)),
            3 => (Rule::OppGapLowLeftOne, rat(5, 32)),
            _ => (Rule::OppGapTopLeftOne, rat(5, 32)),
        },
        (1, 2) => (Rule::OppGapPair, rat(5, 32)),
        (1, 3) => {
            let e2 = v.empty(2)[0];
            let n4 = full4[0];
            let inner = || {
                // One point in the left half of U42 only secures 5/32.
                let pts = v.locals(4, 2);
                if pts.len() == 1 && pts[0].0 <= rat(5, 8) {
                    rat(5, 32)
                } else {
                    rat(41, 256)
                }
            };
            match (e2, n4) {
                (4, 1) | (4, 3) => (Rule::OppGapLowRightSide, rat(5, 32)),
                (4, 2) => (Rule::OppGapLowRightInner, inner()),
                (4, _) => (Rule::OppGapLowRightCorner, rat(1, 4)),
                (2, 2) => (Rule::OppGapTopLeftInner, inner()),
                (2, _) => (Rule::OppGapTopLeftOuter, rat(5, 32)),
                (_, 2) => (Rule::OppGapDiagInner, inner()),
                _ => (Rule::OppGapDiagOuter, rat(5, 32)),
            }
        }
        (2, 2) => match v.full(2).as_slice() {
            [2, 4] => (Rule::OppHalfAnti, rat(5, 32)),
            [1, 3] => (Rule::OppHalfMain, rat(5, 32)),
            [2, 3] => (Rule::OppHalfLeftLow, rat(5, 32)),
            [1, 4] => (Rule::OppHalfRightPair, rat(3, 16)),
            _ => return None,
        },
        (2, 3) => match (v.full(2).as_slice(), full4[0]) {
            ([1, 3], 4) => (Rule::OppHalfMainCorner, rat(1, 4)),
            ([1, 3], _) | ([2, 3], _) | ([2, 4], _) => (Rule::OppHalfMixed, rat(5, 32)),
            ([1, 4], _) => (Rule::OppHalfRightSingle, rat(3, 16)),
            _ => return None,
        },
        (3, 3) => match v.full(2)[0] {
            4 => (Rule::OppSingleFar, rat(3, 16)),
            _ => (Rule::OppSingleNear, rat(5, 32)),
        },
        _ => return None,
    };
    Some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn occ(cells: &[(usize, usize)]) -> Occupancy {
        let mut counts = [[0; 4]; 4];
        let mut points = Vec::new();
        for &(i, j) in cells {
            let (c, r) = cell(i, j);
            counts[c][r] += 1;
            let mid = |k: usize| rat(2 * k as i64 + 1, 8);
            points.push(((c, r), (mid(c), mid(r))));
        }
        Occupancy { counts, points }
    }

    #[test]
    fn labels() {
        assert_eq!(cell(1, 1), (3, 3));
        assert_eq!(cell(2, 3), (0, 2));
        assert_eq!(cell(4, 2), (2, 1));
        assert_eq!(cell(3, 4), (1, 0));
    }

    #[test]
    fn every_symmetry_is_a_bijection() {
        for s in Sym::ALL {
            let mut seen = [[false; 4]; 4];
            for c in 0..4 {
                for r in 0..4 {
                    let (a, b) = s.grid(c, r);
                    assert!(!seen[a][b]);
                    seen[a][b] = true;
                }
            }
        }
    }

    #[test]
    fn one_empty_turned_to_u1() {
        // U3 empty; U1, U2, U4 full.
        let mut v = Vec::new();
        for i in [1, 2, 4] {
            for j in 1..=4 {
                v.push((i, j));
            }
        }
        assert_eq!(classify(&occ(&v)).unwrap().0, Rule::OneEmptyFull);
    }

    #[test]
    fn opposite_patterns() {
        // U1 and U3 nonempty, each with a single occupied quadrant.
        let r = classify(&occ(&[(1, 1), (3, 3), (3, 3)])).unwrap();
        assert!(matches!(r.0, Rule::OppSingleNear | Rule::OppSingleFar));
        // U2 full, U4 one point in U42.
        let mut v: Vec<(usize, usize)> = (1..=4).map(|j| (2, j)).collect();
        v.push((4, 2));
        assert_eq!(classify(&occ(&v)).unwrap().0, Rule::OppFullSingleInnerOne);
        v.push((4, 2));
        assert_eq!(classify(&occ(&v)).unwrap().0, Rule::OppFullSingleInnerMany);
    }

    #[test]
    fn all_opposite_occupancies_classify() {
        // Every nonempty pattern of U2 and U4 is reachable through some symmetry.
        for m2 in 1u32..16 {
            for m4 in 1u32..16 {
                let mut v = Vec::new();
                for j in 1..=4 {
                    if m2 >> (j - 1) & 1 == 1 {
                        v.push((2, j));
                    }
                    if m4 >> (j - 1) & 1 == 1 {
                        v.push((4, j));
                    }
                }
                assert!(classify(&occ(&v)).is_some(), "{m2:04b} {m4:04b}");
            }
        }
    }
}
