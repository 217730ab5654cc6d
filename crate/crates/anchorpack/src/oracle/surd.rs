//! Exact signs of small expressions `x + a*sqrt(A) + b*sqrt(B)` with rational
//! `x, A, B >= 0` and integer coefficients.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::geometry::Rational;

fn sgn(r: &Rational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

fn sgn_i(v: i64) -> i8 {
    v.signum() as i8
}

/// Sign of `x + c*sqrt(a)`.
pub fn sign1(x: &Rational, c: i64, a: &Rational) -> i8 {
    let sx = sgn(x);
    let sy = if a.is_zero() { 0 } else { sgn_i(c) };
    if sy == 0 {
        return sx;
    }
    if sx == 0 || sx == sy {
        return sy;
    }
    // Opposite signs: compare magnitudes by squaring.
    let cc = Rational::from_integer(BigInt::from(c * c));
    let d = x * x - cc * a;
    sx * sgn(&d)
}

/// Sign of `x + a*sqrt(aa) + b*sqrt(bb)`.
pub fn sign2(x: &Rational, a: i64, aa: &Rational, b: i64, bb: &Rational) -> i8 {
    if aa == bb {
        return sign1(x, a + b, aa);
    }
    if a == 0 || aa.is_zero() {
        return sign1(x, b, bb);
    }
    if b == 0 || bb.is_zero() {
        return sign1(x, a, aa);
    }
    // Sign of y = a*sqrt(aa) + b*sqrt(bb).
    let sy = if sgn_i(a) == sgn_i(b) {
        sgn_i(a)
    } else {
        // |a| sqrt(aa) vs |b| sqrt(bb).
        let lhs = aa * Rational::from_integer(BigInt::from(a * a));
        let rhs = bb * Rational::from_integer(BigInt::from(b * b));
        match lhs.cmp(&rhs) {
            Ordering::Greater => sgn_i(a),
            Ordering::Less => sgn_i(b),
            Ordering::Equal => 0,
        }
    };
    let sx = sgn(x);
    if sy == 0 {
        return sx;
    }
    if sx == 0 || sx == sy {
        return sy;
    }
    // sign(x + y) = sign(x) * sign(x^2 - y^2), y^2 = a^2 aa + b^2 bb + 2ab sqrt(aa bb).
    let r = x * x
        - aa * Rational::from_integer(BigInt::from(a * a))
        - bb * Rational::from_integer(BigInt::from(b * b));
    sx * sign1(&r, -2 * a * b, &(aa * bb))
}

/// `q + t*sqrt(s)`, a coordinate of an eps-grid square.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurdCoord {
    pub q: Rational,
    pub t: i64,
    pub s: Rational,
}

impl SurdCoord {
    pub fn exact(q: Rational) -> Self {
        SurdCoord { q, t: 0, s: Rational::zero() }
    }

    /// Sign of `self - other`.
    pub fn cmp_sign(&self, other: &SurdCoord) -> i8 {
        sign2(&(&self.q - &other.q), self.t, &self.s, -other.t, &other.s)
    }

    pub fn lt(&self, other: &SurdCoord) -> bool {
        self.cmp_sign(other) < 0
    }
}

/// Whether `r` is the square of a rational; returns the root.
pub fn exact_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer(), r.denom());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    (&sn * &sn == *n && &sd * &sd == *d).then(|| Rational::new(sn, sd))
}

/// `floor(sqrt(r) * 2^bits) / 2^bits`, or the exact root when it is rational.
pub fn sqrt_floor(r: &Rational, bits: u32) -> Rational {
    if let Some(s) = exact_sqrt(r) {
        return s;
    }
    let scale = BigInt::one() << (2 * bits);
    let v = (r.numer() * scale) / r.denom();
    Rational::new(v.sqrt(), BigInt::one() << bits)
}
