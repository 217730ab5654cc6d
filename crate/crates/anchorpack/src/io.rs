//! JSON documents for instances and packings.
//!
//! Every rational travels as a string `"p/q"` (or `"p"`), so files are exact.
//! Writers emit a canonical pretty-printed form; reading a canonical file and
//! writing it back reproduces it byte for byte.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::geometry::{
    format_rational, parse_rational, AnchoredBox, Corner, GeometryError, Instance, Mode, Packing, Point, Rational,
};
use crate::greedy::TraceStep;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format version {0}")]
    Version(u32),
    #[error("unknown field {0:?}")]
    UnknownField(String),
    #[error("bad value for {field}: {value:?}")]
    BadValue { field: String, value: String },
    #[error("invalid instance: {0}")]
    Instance(#[from] GeometryError),
}

impl IoError {
    /// Whether the document parsed but describes an impossible instance.
    pub fn is_invalid_instance(&self) -> bool {
        matches!(self, IoError::Instance(_))
    }
}

#[derive(Serialize, Deserialize)]
struct InstanceDoc {
    version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    family: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    params: BTreeMap<String, String>,
    points: Vec<[String; 2]>,
    #[serde(flatten, skip_serializing)]
    extra: BTreeMap<String, Value>,
}

#[derive(Serialize, Deserialize)]
struct BoxDoc {
    anchor: usize,
    corner: String,
    width: String,
    height: String,
    #[serde(flatten, skip_serializing)]
    extra: BTreeMap<String, Value>,
}

#[derive(Serialize, Deserialize)]
struct StepDoc {
    step: usize,
    anchor: usize,
    corner: String,
    side: String,
    #[serde(flatten, skip_serializing)]
    extra: BTreeMap<String, Value>,
}

#[derive(Serialize, Deserialize)]
struct PackingDocRaw {
    version: u32,
    mode: String,
    algo: String,
    points: Vec<[String; 2]>,
    boxes: Vec<BoxDoc>,
    total_area: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    oracle_value: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    trace: Option<Vec<StepDoc>>,
    #[serde(flatten, skip_serializing)]
    extra: BTreeMap<String, Value>,
}

/// A packing together with the points it was built for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackingFile {
    pub algo: String,
    pub points: Vec<Point>,
    pub packing: Packing,
    /// The total written in the file; `verify` compares it with the boxes.
    pub stated_total: Rational,
    /// Exact optimum reported by an oracle run.
    pub oracle_value: Option<Rational>,
    pub trace: Option<Vec<TraceStep>>,
}

impl PackingFile {
    pub fn new(algo: &str, points: &[Point], packing: Packing) -> Self {
        PackingFile {
            algo: algo.to_string(),
            points: points.to_vec(),
            stated_total: packing.total_area.clone(),
            packing,
            oracle_value: None,
            trace: None,
        }
    }
}

fn num(field: &str, s: &str) -> Result<Rational, IoError> {
    parse_rational(s).map_err(|_| IoError::BadValue { field: field.into(), value: s.into() })
}

fn nonneg(field: &str, s: &str) -> Result<Rational, IoError> {
    let r = num(field, s)?;
    if r < Rational::from_integer(0.into()) {
        return Err(IoError::BadValue { field: field.into(), value: s.into() });
    }
    Ok(r)
}

fn corner(s: &str) -> Result<Corner, IoError> {
    s.parse().map_err(|_| IoError::BadValue { field: "corner".into(), value: s.into() })
}

fn mode(s: &str) -> Result<Mode, IoError> {
    s.parse().map_err(|_| IoError::BadValue { field: "mode".into(), value: s.into() })
}

fn check_extra(strict: bool, extra: &BTreeMap<String, Value>) -> Result<(), IoError> {
    match extra.keys().next() {
        Some(k) if strict => Err(IoError::UnknownField(k.clone())),
        _ => Ok(()),
    }
}

fn check_version(v: u32) -> Result<(), IoError> {
    if v == FORMAT_VERSION {
        Ok(())
    } else {
        Err(IoError::Version(v))
    }
}

fn read_points(raw: &[[String; 2]]) -> Result<Vec<Point>, IoError> {
    raw.iter().map(|[x, y]| Ok(Point::new(num("x", x)?, num("y", y)?))).collect()
}

fn write_points(points: &[Point]) -> Vec<[String; 2]> {
    points.iter().map(|p| [format_rational(&p.x), format_rational(&p.y)]).collect()
}

fn to_text<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("serializable");
    s.push('\n');
    s
}

/// Parses an instance. In strict mode unknown fields are errors.
pub fn parse_instance(text: &str, strict: bool) -> Result<Instance, IoError> {
    let doc: InstanceDoc = serde_json::from_str(text)?;
    check_version(doc.version)?;
    check_extra(strict, &doc.extra)?;
    let mut inst = Instance::new(read_points(&doc.points)?)?;
    inst.mode = doc.mode.as_deref().map(mode).transpose()?;
    if let Some(f) = doc.family {
        inst.family = f;
    }
    inst.params = doc.params;
    Ok(inst)
}

pub fn write_instance(inst: &Instance) -> String {
    let doc = InstanceDoc {
        version: FORMAT_VERSION,
        mode: inst.mode.map(|m| m.name().to_string()),
        family: (inst.family != "custom").then(|| inst.family.clone()),
        params: inst.params.clone(),
        points: write_points(&inst.points),
        extra: BTreeMap::new(),
    };
    to_text(&doc)
}

/// Parses a packing. Box geometry is rebuilt from each anchor point, corner,
/// width and height.
pub fn parse_packing(text: &str, strict: bool) -> Result<PackingFile, IoError> {
    let doc: PackingDocRaw = serde_json::from_str(text)?;
    check_version(doc.version)?;
    check_extra(strict, &doc.extra)?;
    let m = mode(&doc.mode)?;
    let points = Instance::new(read_points(&doc.points)?)?.points;
    let mut boxes = Vec::with_capacity(doc.boxes.len());
    for b in &doc.boxes {
        check_extra(strict, &b.extra)?;
        let p = points.get(b.anchor).ok_or_else(|| IoError::BadValue {
            field: "anchor".into(),
            value: b.anchor.to_string(),
        })?;
        boxes.push(AnchoredBox::new(
            b.anchor,
            corner(&b.corner)?,
            p,
            &nonneg("width", &b.width)?,
            &nonneg("height", &b.height)?,
        ));
    }
    let trace = match &doc.trace {
        None => None,
        Some(steps) => Some(
            steps
                .iter()
                .map(|s| {
                    check_extra(strict, &s.extra)?;
                    Ok(TraceStep {
                        step: s.step,
                        anchor: s.anchor,
                        corner: corner(&s.corner)?,
                        side: nonneg("side", &s.side)?,
                    })
                })
                .collect::<Result<Vec<_>, IoError>>()?,
        ),
    };
    Ok(PackingFile {
        algo: doc.algo,
        points,
        packing: Packing::new(m, boxes),
        stated_total: num("total_area", &doc.total_area)?,
        oracle_value: doc.oracle_value.as_deref().map(|v| num("oracle_value", v)).transpose()?,
        trace,
    })
}

pub fn write_packing(file: &PackingFile) -> String {
    let boxes = file
        .packing
        .boxes
        .iter()
        .map(|b| BoxDoc {
            anchor: b.anchor,
            corner: b.corner.name().to_string(),
            width: format_rational(&b.width()),
            height: format_rational(&b.height()),
            extra: BTreeMap::new(),
        })
        .collect();
    let trace = file.trace.as_ref().map(|t| {
        t.iter()
            .map(|s| StepDoc {
                step: s.step,
                anchor: s.anchor,
                corner: s.corner.name().to_string(),
                side: format_rational(&s.side),
                extra: BTreeMap::new(),
            })
            .collect()
    });
    let doc = PackingDocRaw {
        version: FORMAT_VERSION,
        mode: file.packing.mode.name().to_string(),
        algo: file.algo.clone(),
        points: write_points(&file.points),
        boxes,
        total_area: format_rational(&file.stated_total),
        oracle_value: file.oracle_value.as_ref().map(format_rational),
        trace,
        extra: BTreeMap::new(),
    };
    to_text(&doc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{rat, Point};

    const FIG1: &str = r#"{
  "version": 1,
  "mode": "rect-any",
  "algo": "manual",
  "points": [
    [
      "1/4",
      "3/4"
    ],
    [
      "3/8",
      "7/8"
    ]
  ],
  "boxes": [
    {
      "anchor": 0,
      "corner": "UR",
      "width": "1/4",
      "height": "3/4"
    },
    {
      "anchor": 1,
      "corner": "UL",
      "width": "5/8",
      "height": "7/8"
    }
  ],
  "total_area": "47/64"
}
"#;

    #[test]
    fn packing_round_trip() {
        let f = parse_packing(FIG1, true).unwrap();
        assert_eq!(f.packing.total_area, rat(47, 64));
        assert_eq!(f.packing.boxes[1].rect.x1, rat(1, 1));
        assert_eq!(write_packing(&f), FIG1);
    }

    #[test]
    fn instance_round_trip() {
        let mut inst = Instance::new(vec![Point::from_ratios((1, 3), (1, 3)), Point::from_ratios((1, 1), (0, 1))])
            .unwrap()
            .with_family("thirds")
            .with_param("n", 2);
        inst.mode = Some(Mode::SquareLl);
        let text = write_instance(&inst);
        assert!(text.contains("\"1/3\""));
        let back = parse_instance(&text, true).unwrap();
        assert_eq!(back, inst);
        assert_eq!(write_instance(&back), text);
    }

    #[test]
    fn strictness() {
        let text = r#"{"version": 1, "points": [["1/2", "1/2"]], "colour": "red"}"#;
        assert!(matches!(parse_instance(text, true), Err(IoError::UnknownField(f)) if f == "colour"));
        assert!(parse_instance(text, false).is_ok());
    }

    #[test]
    fn rejects_bad_documents() {
        let dup = r#"{"version": 1, "points": [["1/2", "1/2"], ["2/4", "1/2"]]}"#;
        assert!(parse_instance(dup, true).unwrap_err().is_invalid_instance());
        let bad = r#"{"version": 1, "points": [["1/0", "1/2"]]}"#;
        assert!(matches!(parse_instance(bad, true), Err(IoError::BadValue { .. })));
        let float = r#"{"version": 1, "points": [[0.5, 0.5]]}"#;
        assert!(matches!(parse_instance(float, true), Err(IoError::Json(_))));
        let v2 = r#"{"version": 2, "points": [["1/2", "1/2"]]}"#;
        assert!(matches!(parse_instance(v2, true), Err(IoError::Version(2))));
        let neg = FIG1.replace("\"5/8\"", "\"-5/8\"");
        assert!(matches!(parse_packing(&neg, true), Err(IoError::BadValue { .. })));
    }
}
