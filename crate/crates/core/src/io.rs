//! Point files, the unit-box rescale and versioned JSON output.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::Point;

pub const SCHEMA: &str = "hexspan/1";

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("line {line}: expected two numbers, got {text:?}")]
    Parse { line: usize, text: String },
    #[error("line {line}: coordinate is not finite")]
    NotFinite { line: usize },
}

/// Parses one point per line, `x y` separated by whitespace, with `#` comments.
pub fn parse_points(text: &str) -> Result<Vec<Point>, IoError> {
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parse = |s: &str| s.parse::<f64>().ok();
        let (Some(x), Some(y)) = (fields.first().and_then(|s| parse(s)), fields.get(1).and_then(|s| parse(s))) else {
            return Err(IoError::Parse {
                line: k + 1,
                text: raw.into(),
            });
        };
        if fields.len() != 2 {
            return Err(IoError::Parse {
                line: k + 1,
                text: raw.into(),
            });
        }
        if !x.is_finite() || !y.is_finite() {
            return Err(IoError::NotFinite { line: k + 1 });
        }
        out.push(Point::new(x, y));
    }
    Ok(out)
}

pub fn read_points(path: &Path) -> Result<Vec<Point>, IoError> {
    let text = fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })?;
    parse_points(&text)
}

pub fn write_points(points: &[Point]) -> String {
    points.iter().map(|p| format!("{} {}\n", p.x, p.y)).collect()
}

/// `p ↦ (p − offset) · scale`, mapping the bounding box into the unit box
/// with its aspect ratio kept.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitBoxTransform {
    pub offset: Point,
    pub scale: f64,
}

impl UnitBoxTransform {
    pub const IDENTITY: UnitBoxTransform = UnitBoxTransform {
        offset: Point::ORIGIN,
        scale: 1.0,
    };

    pub fn fit(points: &[Point]) -> Self {
        if points.is_empty() {
            return Self::IDENTITY;
        }
        let (mut lo, mut hi) = (points[0], points[0]);
        for p in points {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let extent = (hi.x - lo.x).max(hi.y - lo.y);
        UnitBoxTransform {
            offset: lo,
            scale: if extent > 0.0 { 1.0 / extent } else { 1.0 },
        }
    }

    pub fn apply(&self, p: Point) -> Point {
        (p - self.offset) * self.scale
    }

    pub fn invert(&self, p: Point) -> Point {
        p * (1.0 / self.scale) + self.offset
    }
}

/// Rescales into the unit box and returns the transform used.
pub fn rescale_to_unit_box(points: &[Point]) -> (Vec<Point>, UnitBoxTransform) {
    let t = UnitBoxTransform::fit(points);
    (points.iter().map(|&p| t.apply(p)).collect(), t)
}

/// A report with the schema tag, the command that produced it and its body.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub schema: String,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transform: Option<UnitBoxTransform>,
    pub result: T,
}

impl<T: Serialize> Envelope<T> {
    pub fn new(command: &str, transform: Option<UnitBoxTransform>, result: T) -> Self {
        Envelope {
            schema: SCHEMA.into(),
            command: command.into(),
            transform,
            result,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    fs::write(path, text).map_err(|source| IoError::Write {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_blank_lines() {
        let pts = parse_points("# header\n0 0\n\n1.5   2 # trailing\n\t-3 4e-1\n").unwrap();
        assert_eq!(pts, vec![Point::new(0.0, 0.0), Point::new(1.5, 2.0), Point::new(-3.0, 0.4)]);
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(matches!(parse_points("1 2\n3\n"), Err(IoError::Parse { line: 2, .. })));
        assert!(matches!(parse_points("1 2 3\n"), Err(IoError::Parse { line: 1, .. })));
        assert!(matches!(parse_points("x 2\n"), Err(IoError::Parse { .. })));
        assert!(matches!(parse_points("inf 2\n"), Err(IoError::NotFinite { line: 1 })));
    }

    #[test]
    fn unit_box_round_trip() {
        let pts = vec![Point::new(10.0, 5.0), Point::new(14.0, 7.0), Point::new(12.0, 6.0)];
        let (scaled, t) = rescale_to_unit_box(&pts);
        assert_eq!(scaled[0], Point::ORIGIN);
        assert_eq!(scaled[1], Point::new(1.0, 0.5));
        for (a, b) in pts.iter().zip(&scaled) {
            assert!((t.invert(*b) - *a).norm() < 1e-12);
        }
    }

    #[test]
    fn round_trips_through_text() {
        let pts = vec![Point::new(0.125, -3.5), Point::new(1e-7, 2.0)];
        assert_eq!(parse_points(&write_points(&pts)).unwrap(), pts);
    }

    #[test]
    fn envelope_carries_schema() {
        let json = Envelope::new("stretch", None, 1.5).to_json();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["schema"], SCHEMA);
        assert_eq!(v["result"], 1.5);
        assert!(v.get("transform").is_none());
    }
}
