//! Deterministic SVG pictures of packings.
//!
//! The unit square is drawn with `(0,0)` at the bottom left. Coordinates are
//! printed with 9 significant digits, so equal inputs give identical bytes.

use std::fmt::Write;

use crate::geometry::{to_f64, Corner, Packing, Point, Rational};

/// `v` with 9 significant digits, trailing zeros dropped.
pub fn fmt9(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return "0".into();
    }
    let mag = v.abs().log10().floor() as i32;
    let decimals = (8 - mag).max(0) as usize;
    let mut s = format!("{v:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

fn fill(c: Corner) -> &'static str {
    match c {
        Corner::LL => "#8ecae6",
        Corner::LR => "#ffb703",
        Corner::UL => "#90be6d",
        Corner::UR => "#f28482",
    }
}

fn y(v: &Rational) -> String {
    fmt9(1.0 - to_f64(v))
}

fn x(v: &Rational) -> String {
    fmt9(to_f64(v))
}

pub fn render_svg(points: &[Point], packing: &Packing) -> String {
    let mut s = String::new();
    s.push_str("<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-0.02 -0.02 1.04 1.04\" width=\"520\" height=\"520\">\n");
    s.push_str("<rect x=\"0\" y=\"0\" width=\"1\" height=\"1\" fill=\"white\" stroke=\"black\" stroke-width=\"0.004\"/>\n");
    for b in &packing.boxes {
        if b.rect.is_degenerate() {
            continue;
        }
        let r = &b.rect;
        writeln!(
            s,
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\" fill-opacity=\"0.7\" stroke=\"black\" stroke-width=\"0.002\"/>",
            x(&r.x0),
            y(&r.y1),
            fmt9(to_f64(&r.width())),
            fmt9(to_f64(&r.height())),
            fill(b.corner)
        )
        .unwrap();
    }
    for p in points {
        writeln!(s, "<circle cx=\"{}\" cy=\"{}\" r=\"0.006\" fill=\"black\"/>", x(&p.x), y(&p.y)).unwrap();
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{rat, AnchoredBox, Mode};

    #[test]
    fn nine_digits() {
        assert_eq!(fmt9(1.0 / 3.0), "0.333333333");
        assert_eq!(fmt9(0.25), "0.25");
        assert_eq!(fmt9(1.0), "1");
        assert_eq!(fmt9(2.0 / 3.0 * 1e-3), "0.000666666667");
        assert_eq!(fmt9(-0.0), "0");
    }

    #[test]
    fn flips_and_repeats() {
        let p = vec![Point::from_ratios((1, 4), (3, 4)), Point::from_ratios((3, 8), (7, 8))];
        let boxes = vec![
            AnchoredBox::new(0, Corner::UR, &p[0], &rat(1, 4), &rat(3, 4)),
            AnchoredBox::new(1, Corner::UL, &p[1], &rat(5, 8), &rat(7, 8)),
        ];
        let pk = Packing::new(Mode::RectAny, boxes);
        let a = render_svg(&p, &pk);
        assert_eq!(a, render_svg(&p, &pk));
        assert_eq!(a.matches("<rect").count(), 3);
        assert!(a.contains("<rect x=\"0\" y=\"0.25\" width=\"0.25\" height=\"0.75\""));
        assert!(a.contains("cx=\"0.375\" cy=\"0.125\""));
    }
}
