//! Problem files: a polygon, an optional triangulation and a sign choice,
//! written as TOML.
//!
//! ```toml
//! polygon = [[0, 0], [3, 0], [0, 3]]
//! # Optional for standard triangles and axis-aligned rectangles.
//! triangulation = [[0, 1, 4], ...]
//!
//! [signs]
//! harnack = [1, 0, 0]          # or
//! enumerate = true             # or
//! [signs.values]
//! "0,0" = 1
//! "1,0" = -1
//! ```
//!
//! Triangle indices refer to the lattice points sorted by `(x, y)`.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use tcurve::lattice::{LatticePoint, LatticePolygon};
use tcurve::{CurveError, HarnackType, PrimitiveTriangulation, Sign, SignDistribution, TriangulationError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{origin}:{line}:{column}: {message}")]
    Parse { origin: String, line: usize, column: usize, message: String },
    #[error("{field}: {message}")]
    Validation { field: String, message: String },
}

fn invalid(field: impl Into<String>, message: impl fmt::Display) -> ProblemError {
    ProblemError::Validation { field: field.into(), message: message.to_string() }
}

/// How the signs of the lattice points are chosen.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SignChoice {
    Explicit(SignDistribution),
    Harnack(HarnackType),
    /// Every sign vector, for `enumerate`.
    Enumerate,
}

/// A validated problem.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProblemFile {
    pub polygon: LatticePolygon,
    /// Triangles as written in the file; `None` means the grid triangulation.
    pub triangles: Option<Vec<[usize; 3]>>,
    pub triangulation: PrimitiveTriangulation,
    pub signs: SignChoice,
}

#[derive(Serialize, Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    polygon: Vec<[i64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    triangulation: Option<Vec<[usize; 3]>>,
    signs: RawSigns,
}

#[derive(Serialize, Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct RawSigns {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    harnack: Option<[u8; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    enumerate: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    values: Option<BTreeMap<String, i64>>,
}

/// 1-based line and column of a byte offset.
fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn parse_point_key(key: &str) -> Option<LatticePoint> {
    let (x, y) = key.split_once(',')?;
    Some(LatticePoint::new(x.trim().parse().ok()?, y.trim().parse().ok()?))
}

fn parse_harnack(field: &str, v: [u8; 3]) -> Result<HarnackType, ProblemError> {
    if v.iter().any(|&x| x > 1) {
        return Err(invalid(field, format!("type entries must be 0 or 1, got {v:?}")));
    }
    Ok(HarnackType::new(v[0], v[1], v[2]))
}

/// Parses a `c,a,b` type given on the command line.
pub fn parse_type_flag(text: &str) -> Result<HarnackType, ProblemError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let bits: Option<Vec<u8>> = parts.iter().map(|p| p.parse::<u8>().ok()).collect();
    match bits.as_deref() {
        Some(&[c, a, b]) => parse_harnack("--type", [c, a, b]),
        _ => Err(invalid("--type", format!("expected c,a,b with entries 0 or 1, got {text:?}"))),
    }
}

fn triangulation_error(e: TriangulationError) -> ProblemError {
    match e {
        TriangulationError::IndexOutOfRange { triangle, .. }
        | TriangulationError::NonPrimitiveTriangle { triangle, .. }
        | TriangulationError::RepeatedVertex(triangle)
        | TriangulationError::OutsidePolygon(triangle) => invalid(format!("triangulation[{triangle}]"), e),
        TriangulationError::UnsupportedShape => {
            invalid("triangulation", "required unless the polygon is a standard triangle or a rectangle")
        }
        other => invalid("triangulation", other),
    }
}

impl ProblemFile {
    pub fn load(path: &Path) -> Result<Self, ProblemError> {
        let text = fs::read_to_string(path).map_err(|source| ProblemError::Io { path: path.to_owned(), source })?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Parses and validates problem text; `origin` names it in error messages.
    pub fn parse(text: &str, origin: &str) -> Result<Self, ProblemError> {
        let raw: RawProblem = toml::from_str(text).map_err(|e| {
            let (line, column) = e.span().map_or((1, 1), |s| line_column(text, s.start));
            ProblemError::Parse { origin: origin.to_owned(), line, column, message: e.message().to_owned() }
        })?;
        Self::validate(raw)
    }

    fn validate(raw: RawProblem) -> Result<Self, ProblemError> {
        let vertices: Vec<LatticePoint> = raw.polygon.iter().map(|&[x, y]| LatticePoint::new(x, y)).collect();
        let polygon = LatticePolygon::new(vertices).map_err(|e| invalid("polygon", e))?;
        let triangulation = match &raw.triangulation {
            Some(t) => PrimitiveTriangulation::new(&polygon, t),
            None => PrimitiveTriangulation::grid(&polygon),
        }
        .map_err(triangulation_error)?;

        let RawSigns { harnack, enumerate, values } = raw.signs;
        let given = usize::from(harnack.is_some()) + usize::from(enumerate.is_some()) + usize::from(values.is_some());
        if given != 1 {
            return Err(invalid("signs", "give exactly one of `harnack`, `enumerate` or `values`"));
        }
        let signs = if let Some(h) = harnack {
            SignChoice::Harnack(parse_harnack("signs.harnack", h)?)
        } else if let Some(e) = enumerate {
            if !e {
                return Err(invalid("signs.enumerate", "only `enumerate = true` is meaningful"));
            }
            SignChoice::Enumerate
        } else {
            let mut entries = Vec::new();
            for (key, v) in values.unwrap_or_default() {
                let field = format!("signs.values.\"{key}\"");
                let p = parse_point_key(&key).ok_or_else(|| invalid(&field, "key must be \"x,y\""))?;
                let s = Sign::from_value(v).ok_or_else(|| invalid(&field, format!("sign must be 1 or -1, got {v}")))?;
                entries.push((p, s));
            }
            let dist = SignDistribution::new(&polygon, entries).map_err(|e| match e {
                CurveError::IncompleteDistribution(p) => {
                    invalid("signs.values", format!("missing sign for lattice point ({},{})", p.x, p.y))
                }
                CurveError::ForeignPoint(p) => {
                    invalid(format!("signs.values.\"{},{}\"", p.x, p.y), "not a lattice point of the polygon")
                }
                other => invalid("signs.values", other),
            })?;
            SignChoice::Explicit(dist)
        };
        Ok(ProblemFile { polygon, triangles: raw.triangulation, triangulation, signs })
    }

    /// Serializes back to problem text.
    pub fn to_toml(&self) -> String {
        let mut signs = RawSigns::default();
        match &self.signs {
            SignChoice::Harnack(h) => signs.harnack = Some([h.c, h.a, h.b]),
            SignChoice::Enumerate => signs.enumerate = Some(true),
            SignChoice::Explicit(d) => {
                signs.values = Some(d.iter().map(|(p, s)| (format!("{},{}", p.x, p.y), s.value())).collect())
            }
        }
        let raw = RawProblem {
            polygon: self.polygon.vertices().iter().map(|v| [v.x, v.y]).collect(),
            triangulation: self.triangles.clone(),
            signs,
        };
        toml::to_string(&raw).expect("problem data serializes")
    }

    /// The sign distribution to use, with `--type` taking precedence.
    pub fn distribution(&self, type_flag: Option<HarnackType>) -> Result<SignDistribution, ProblemError> {
        match (type_flag, self.signs.clone()) {
            (Some(h), _) | (None, SignChoice::Harnack(h)) => Ok(tcurve::harnack_distribution(&self.polygon, h)),
            (None, SignChoice::Explicit(d)) => Ok(d),
            (None, SignChoice::Enumerate) => {
                Err(invalid("signs", "this command needs explicit or Harnack signs, or --type"))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const T5: &str = "polygon = [[0, 0], [5, 0], [0, 5]]\n[signs]\nharnack = [1, 0, 0]\n";

    fn validation_field(text: &str) -> String {
        match ProblemFile::parse(text, "test") {
            Err(ProblemError::Validation { field, message }) => format!("{field}: {message}"),
            other => panic!("expected a validation error, got {other:?}"),
        }
    }

    #[test]
    fn harnack_problem_parses() {
        let p = ProblemFile::parse(T5, "t5").unwrap();
        assert_eq!(p.signs, SignChoice::Harnack(HarnackType::new(1, 0, 0)));
        assert_eq!(p.triangulation.triangle_count(), 25);
    }

    #[test]
    fn missing_sign_names_the_point() {
        let text = "polygon = [[0, 0], [1, 0], [0, 1]]\n[signs.values]\n\"0,0\" = 1\n\"1,0\" = -1\n";
        assert_eq!(validation_field(text), "signs.values: missing sign for lattice point (0,1)");
    }

    #[test]
    fn bad_triangle_index_is_located() {
        let text = "polygon = [[0, 0], [1, 0], [0, 1]]\ntriangulation = [[0, 1, 7]]\n[signs]\nenumerate = true\n";
        assert!(validation_field(text).starts_with("triangulation[0]:"));
    }

    #[test]
    fn syntax_errors_carry_a_line() {
        let err = ProblemFile::parse("# comment\npolygon = @\n", "broken.toml").unwrap_err();
        assert!(matches!(err, ProblemError::Parse { line: 2, column: 11, .. }), "{err}");
    }

    #[test]
    fn sign_choice_must_be_unique() {
        let text = "polygon = [[0, 0], [1, 0], [0, 1]]\n[signs]\nenumerate = true\nharnack = [0, 0, 0]\n";
        assert!(validation_field(text).starts_with("signs:"));
    }

    #[test]
    fn round_trip() {
        let explicit = "polygon = [[0, 0], [2, 0], [0, 2]]\ntriangulation = [[0, 1, 3], [1, 2, 4], [1, 4, 3], [3, 4, 5]]\n\
                        [signs.values]\n\"0,0\" = 1\n\"0,1\" = -1\n\"0,2\" = 1\n\"1,0\" = 1\n\"1,1\" = -1\n\"2,0\" = 1\n";
        for text in [T5, explicit] {
            let p = ProblemFile::parse(text, "a").unwrap();
            assert_eq!(ProblemFile::parse(&p.to_toml(), "b").unwrap(), p);
        }
    }

    #[test]
    fn type_flag() {
        assert_eq!(parse_type_flag("1,0,1").unwrap(), HarnackType::new(1, 0, 1));
        assert!(parse_type_flag("1,2,0").is_err());
        assert!(parse_type_flag("1,0").is_err());
    }
}
