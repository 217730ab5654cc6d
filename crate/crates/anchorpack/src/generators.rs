//! Named instance families and seeded random instances.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::geometry::{format_rational, int, rat, Instance, Point, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// `(2^-i, 2^-i)` for `i = 1..n`.
    Prop1,
    /// `(4/3 * 2^-i, 4/3 * 2^-i)` for `i = 1..n`.
    Prop2,
    /// `(1/4, 3/4)` and `(3/8, 7/8)`.
    Fig1,
    /// Greedy any-corner trap: one point just above the center, two boundary
    /// midpoints and a cluster on the bottom edge.
    Fig2,
    /// Greedy lower-left trap.
    Fig6,
    /// `(i/n, i/n)` for `i = 0..n`.
    Diagonal,
    Center,
    Thirds,
    Random,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::Prop1,
        Family::Prop2,
        Family::Fig1,
        Family::Fig2,
        Family::Fig6,
        Family::Diagonal,
        Family::Center,
        Family::Thirds,
        Family::Random,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Prop1 => "prop1",
            Family::Prop2 => "prop2",
            Family::Fig1 => "fig1",
            Family::Fig2 => "fig2",
            Family::Fig6 => "fig6",
            Family::Diagonal => "diagonal",
            Family::Center => "center",
            Family::Thirds => "thirds",
            Family::Random => "random",
        }
    }

    /// Whether `n` is a free parameter of the family.
    pub fn takes_n(self) -> bool {
        matches!(self, Family::Prop1 | Family::Prop2 | Family::Fig2 | Family::Diagonal | Family::Random)
    }

    pub fn takes_eps(self) -> bool {
        matches!(self, Family::Fig2 | Family::Fig6)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = GenError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| GenError::UnknownFamily(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("family {family} needs {what}")]
    BadParameter { family: &'static str, what: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenParams {
    pub n: Option<usize>,
    pub eps: Option<Rational>,
    pub seed: u64,
    /// Common denominator of random coordinates, at most `2^16`.
    pub denominator: u32,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams { n: None, eps: None, seed: 0, denominator: 1 << 16 }
    }
}

impl GenParams {
    pub fn n(n: usize) -> Self {
        GenParams { n: Some(n), ..Default::default() }
    }

    pub fn eps(eps: Rational) -> Self {
        GenParams { eps: Some(eps), ..Default::default() }
    }

    pub fn random(n: usize, seed: u64) -> Self {
        GenParams { n: Some(n), seed, ..Default::default() }
    }
}

fn bad(family: Family, what: impl Into<String>) -> GenError {
    let family = family.name();
    GenError::BadParameter { family, what: what.into() }
}

fn diag(v: Rational) -> Point {
    Point::new(v.clone(), v)
}

fn pow2_inv(i: usize) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << i)
}

pub fn gen(family: Family, params: &GenParams) -> Result<Instance, GenError> {
    let need_n = |min: usize| match params.n {
        Some(n) if n >= min => Ok(n),
        _ => Err(bad(family, format!("n >= {min}"))),
    };
    let points: Vec<Point> = match family {
        Family::Prop1 => (1..=need_n(1)?).map(|i| diag(pow2_inv(i))).collect(),
        Family::Prop2 => (1..=need_n(1)?).map(|i| diag(rat(4, 3) * pow2_inv(i))).collect(),
        Family::Fig1 => vec![Point::from_ratios((1, 4), (3, 4)), Point::from_ratios((3, 8), (7, 8))],
        Family::Fig2 => {
            let n = params.n.unwrap_or(5);
            if n < 3 {
                return Err(bad(family, "n >= 3"));
            }
            let eps = params.eps.clone().unwrap_or_else(|| rat(1, 16));
            if !eps.is_positive() || eps >= rat(1, 2) {
                return Err(bad(family, "0 < eps < 1/2"));
            }
            let half = rat(1, 2);
            let mut v = vec![diag(&half + &eps), Point::new(half.clone(), int(0)), Point::new(int(0), half.clone())];
            // Odd cluster sizes are shifted so that no point lands on (1/2, 0).
            let (shift, den) = if n.is_multiple_of(2) { (n as i64 + 3, n as i64 - 2) } else { (n as i64 + 2, n as i64 - 1) };
            for i in 4..=n as i64 {
                let x = &half + &eps * rat(2 * i - shift, 2 * den);
                v.push(Point::new(x, int(0)));
            }
            v
        }
        Family::Fig6 => {
            let eps = params.eps.clone().unwrap_or_else(|| rat(1, 20));
            let inv = if eps.is_positive() && eps.numer().is_one() { eps.denom().to_usize() } else { None };
            let inv = match inv {
                Some(k) if k >= 2 => k,
                _ => return Err(bad(family, "eps = 1/k with integer k >= 2")),
            };
            let mut v = vec![diag(eps.clone()), Point::from_ratios((0, 1), (1, 2)), Point::from_ratios((1, 2), (0, 1))];
            let kmax = inv.div_ceil(2) - 1;
            for k in 1..=kmax {
                v.push(diag(rat(1, 2) + &eps * int(k as i64)));
            }
            v
        }
        Family::Diagonal => {
            let n = need_n(1)?;
            (0..n).map(|i| diag(rat(i as i64, n as i64))).collect()
        }
        Family::Center => vec![Point::from_ratios((1, 2), (1, 2))],
        Family::Thirds => vec![Point::from_ratios((1, 3), (1, 3)), Point::from_ratios((2, 3), (2, 3))],
        Family::Random => {
            let n = need_n(1)?;
            let den = params.denominator;
            if den == 0 || den > 1 << 16 || n > den as usize + 1 {
                return Err(bad(family, "1 <= n <= denominator + 1 and denominator <= 65536"));
            }
            // Distinct x and distinct y coordinates: general position by construction.
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
            let xs = sample(&mut rng, den as usize + 1, n);
            let ys = sample(&mut rng, den as usize + 1, n);
            xs.iter()
                .zip(ys.iter())
                .map(|(a, b)| Point::new(rat(a as i64, den as i64), rat(b as i64, den as i64)))
                .collect()
        }
    };
    let mut inst = Instance::new(points).expect("generated points are valid").with_family(family.name());
    if family.takes_n() {
        let n = inst.len();
        inst = inst.with_param("n", n);
    }
    if let (true, Some(e)) = (family.takes_eps(), &params.eps) {
        inst = inst.with_param("eps", format_rational(e));
    }
    if family == Family::Random {
        inst = inst.with_param("seed", params.seed).with_param("denominator", params.denominator);
    }
    Ok(inst)
}

/// Points of the instance are in general position: no two share an `x` or a `y`.
pub fn in_general_position(points: &[Point]) -> bool {
    let distinct = |mut v: Vec<&Rational>| {
        v.sort();
        v.windows(2).all(|w| w[0] != w[1])
    };
    distinct(points.iter().map(|p| &p.x).collect()) && distinct(points.iter().map(|p| &p.y).collect())
}

/// Default `eps` used when none is given.
pub fn default_eps(family: Family) -> Option<Rational> {
    match family {
        Family::Fig2 => Some(rat(1, 16)),
        Family::Fig6 => Some(rat(1, 20)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn prop1_two() {
        let i = gen(Family::Prop1, &GenParams::n(2)).unwrap();
        assert_eq!(i.points, vec![Point::from_ratios((1, 2), (1, 2)), Point::from_ratios((1, 4), (1, 4))]);
    }

    #[test]
    fn prop2_one() {
        let i = gen(Family::Prop2, &GenParams::n(1)).unwrap();
        assert_eq!(i.points, vec![Point::from_ratios((2, 3), (2, 3))]);
    }

    #[test]
    fn fig6_counts() {
        assert_eq!(gen(Family::Fig6, &GenParams::eps(rat(1, 20))).unwrap().len(), 12);
        assert_eq!(gen(Family::Fig6, &GenParams::eps(rat(1, 8))).unwrap().len(), 6);
        assert!(gen(Family::Fig6, &GenParams::eps(rat(2, 7))).is_err());
    }

    #[test]
    fn fig2_cluster_stays_near_midpoint() {
        for n in 3..=12 {
            let p = GenParams { n: Some(n), eps: Some(rat(1, 16)), ..Default::default() };
            let i = gen(Family::Fig2, &p).unwrap();
            assert_eq!(i.len(), n);
            for q in &i.points[3..] {
                assert!(q.y.is_zero());
                assert!((&q.x - rat(1, 2)).abs() < rat(1, 32));
            }
        }
    }

    #[test]
    fn random_is_reproducible_and_general() {
        let a = gen(Family::Random, &GenParams::random(20, 3)).unwrap();
        let b = gen(Family::Random, &GenParams::random(20, 3)).unwrap();
        let c = gen(Family::Random, &GenParams::random(20, 4)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.points, c.points);
        assert!(in_general_position(&a.points));
        let small = GenParams { denominator: 4, ..GenParams::random(5, 1) };
        assert!(in_general_position(&gen(Family::Random, &small).unwrap().points));
    }

    #[test]
    fn unknown_family() {
        assert!("nope".parse::<Family>().is_err());
        assert_eq!("fig6".parse::<Family>().unwrap(), Family::Fig6);
    }
}
