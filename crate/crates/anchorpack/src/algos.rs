//! The packing algorithms behind one name each, with their guarantees.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::geometry::{rat, Mode, Packing, Point, Rational};
use crate::greedy::{greedy_pack, GreedyMode, TraceStep};
use crate::quadtree::pack_quadtree;
use crate::strip::{basic_guarantee, pack_strips_712, pack_strips_basic, paired_guarantee};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algo {
    StripBasic,
    Strip712,
    Quadtree,
    QuadtreeRefined,
    GreedySq,
    GreedyLl,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown algorithm {0:?}")]
pub struct UnknownAlgo(pub String);

impl Algo {
    pub const ALL: [Algo; 6] =
        [Algo::StripBasic, Algo::Strip712, Algo::Quadtree, Algo::QuadtreeRefined, Algo::GreedySq, Algo::GreedyLl];

    pub fn name(self) -> &'static str {
        match self {
            Algo::StripBasic => "strip-basic",
            Algo::Strip712 => "strip712",
            Algo::Quadtree => "quadtree",
            Algo::QuadtreeRefined => "quadtree-refined",
            Algo::GreedySq => "greedy-sq",
            Algo::GreedyLl => "greedy-ll",
        }
    }

    /// The kind of packing produced.
    pub fn mode(self) -> Mode {
        match self {
            Algo::StripBasic | Algo::Strip712 => Mode::RectAny,
            Algo::Quadtree | Algo::QuadtreeRefined | Algo::GreedySq => Mode::SquareAny,
            Algo::GreedyLl => Mode::SquareLl,
        }
    }

    /// Area the algorithm always reaches on `n` points, if it has such a bound.
    pub fn area_guarantee(self, n: usize) -> Option<Rational> {
        match self {
            Algo::StripBasic => Some(basic_guarantee(n)),
            Algo::Strip712 => Some(paired_guarantee(n)),
            Algo::Quadtree => Some(rat(1, 8)),
            Algo::QuadtreeRefined => Some(rat(5, 32)),
            Algo::GreedySq | Algo::GreedyLl => None,
        }
    }

    /// Fraction of the optimum (in [`Algo::mode`]) the algorithm always reaches.
    pub fn ratio_guarantee(self) -> Option<Rational> {
        match self {
            Algo::GreedySq => Some(rat(9, 47)),
            Algo::GreedyLl => Some(rat(1, 3)),
            _ => None,
        }
    }

    /// Default algorithm for a packing mode.
    pub fn for_mode(mode: Mode) -> Algo {
        match mode {
            Mode::RectAny => Algo::Strip712,
            Mode::SquareAny => Algo::QuadtreeRefined,
            Mode::RectLl | Mode::SquareLl => Algo::GreedyLl,
        }
    }

    pub fn run(self, points: &[Point]) -> (Packing, Option<Vec<TraceStep>>) {
        match self {
            Algo::StripBasic => (pack_strips_basic(points), None),
            Algo::Strip712 => (pack_strips_712(points), None),
            Algo::Quadtree => (pack_quadtree(points, false), None),
            Algo::QuadtreeRefined => (pack_quadtree(points, true), None),
            Algo::GreedySq | Algo::GreedyLl => {
                let mode = if self == Algo::GreedySq { GreedyMode::AnyCorner } else { GreedyMode::LowerLeft };
                let r = greedy_pack(points, mode);
                (r.packing, Some(r.trace))
            }
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algo {
    type Err = UnknownAlgo;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algo::ALL.into_iter().find(|a| a.name() == s).ok_or_else(|| UnknownAlgo(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::validate_packing;

    #[test]
    fn names_round_trip() {
        for a in Algo::ALL {
            assert_eq!(a.name().parse::<Algo>(), Ok(a));
        }
        assert!("nope".parse::<Algo>().is_err());
    }

    #[test]
    fn every_algo_is_valid_on_fig1() {
        let p = vec![Point::from_ratios((1, 4), (3, 4)), Point::from_ratios((3, 8), (7, 8))];
        for a in Algo::ALL {
            let (pk, _) = a.run(&p);
            assert_eq!(pk.mode, a.mode());
            assert!(validate_packing(&p, &pk, a.mode()).unwrap().is_valid(), "{a}");
            if let Some(g) = a.area_guarantee(p.len()) {
                assert!(pk.total_area >= g, "{a}");
            }
        }
    }
}
