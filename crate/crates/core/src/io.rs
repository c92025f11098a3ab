//! JSON-lines interchange format for hyperplane families.
//!
//! One record per line: `{"a": [int, ...], "b": "p/q"}` with the offset as
//! an exact fraction string. All numbers in emitted JSON are exact strings
//! or integers; no floating point appears anywhere.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::Value;
use thiserror::Error;

use crate::family::{Family, FamilyError};
use crate::geometry::Hyperplane;
use crate::witness::{RestrictedTrace, Sign, WitnessReport};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: invalid JSON: {message}")]
    Json { line: usize, message: String },
    #[error("line {line}: field `{field}` {problem}")]
    Field {
        line: usize,
        field: &'static str,
        problem: String,
    },
    #[error("line {line}: dimension {got} differs from first record's {want}")]
    InconsistentDim { line: usize, want: usize, got: usize },
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("empty input: no hyperplane records")]
    Empty,
}

/// Parses an exact fraction string "p/q" or integer string "p".
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s.trim(), "1"),
    };
    let p = BigInt::from_str(num).map_err(|e| format!("bad numerator {num:?}: {e}"))?;
    let q = BigInt::from_str(den).map_err(|e| format!("bad denominator {den:?}: {e}"))?;
    if q.is_zero() {
        return Err("zero denominator".into());
    }
    Ok(BigRational::new(p, q))
}

/// Formats a rational as "p/q" (denominator always explicit).
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn parse_plane(line_no: usize, line: &str) -> Result<Hyperplane, ParseError> {
    let value: Value = serde_json::from_str(line).map_err(|e| ParseError::Json {
        line: line_no,
        message: e.to_string(),
    })?;
    let field = |f: &'static str, problem: String| ParseError::Field {
        line: line_no,
        field: f,
        problem,
    };
    let a = value
        .get("a")
        .and_then(Value::as_array)
        .ok_or_else(|| field("a", "missing or not an array".into()))?;
    let mut normal = Vec::with_capacity(a.len());
    for entry in a {
        let n = entry
            .as_number()
            .ok_or_else(|| field("a", format!("entry {entry} is not a number")))?;
        let i = BigInt::from_str(&n.to_string())
            .map_err(|_| field("a", format!("entry {n} is not an integer")))?;
        normal.push(i);
    }
    let b = value
        .get("b")
        .and_then(Value::as_str)
        .ok_or_else(|| field("b", "missing or not a fraction string \"p/q\"".into()))?;
    let offset = parse_rational(b).map_err(|e| field("b", e))?;
    Hyperplane::new(normal, offset).map_err(|e| ParseError::Field {
        line: line_no,
        field: "a",
        problem: e.to_string(),
    })
}

/// Parses a JSON-lines family file. Blank lines are ignored; the ambient
/// dimension is the length of the first record's normal.
pub fn parse_family(text: &str) -> Result<Family, ParseError> {
    let mut planes: Vec<(usize, Hyperplane)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        planes.push((i + 1, parse_plane(i + 1, line)?));
    }
    let Some((_, first)) = planes.first() else {
        return Err(ParseError::Empty);
    };
    let dim = first.dim();
    for (line, h) in &planes {
        if h.dim() != dim {
            return Err(ParseError::InconsistentDim {
                line: *line,
                want: dim,
                got: h.dim(),
            });
        }
    }
    Ok(Family::new(dim, planes.into_iter().map(|(_, h)| h))?)
}

pub fn plane_to_json(h: &Hyperplane) -> Value {
    let a: Vec<Value> = h
        .normal()
        .iter()
        .map(|c| {
            serde_json::Number::from_str(&c.to_string())
                .map(Value::Number)
                .expect("integer literal")
        })
        .collect();
    serde_json::json!({ "a": a, "b": format_rational(h.offset()) })
}

/// One JSON record per plane, newline-terminated.
pub fn family_to_jsonl(f: &Family) -> String {
    let mut out = String::new();
    for h in f.planes() {
        out.push_str(&plane_to_json(h).to_string());
        out.push('\n');
    }
    out
}

pub fn vertex_to_json(v: &crate::geometry::Vertex) -> Value {
    Value::Array(
        v.coords()
            .iter()
            .map(|&c| Value::Number(c.into()))
            .collect(),
    )
}

pub fn edge_to_json(e: &crate::geometry::Edge) -> Value {
    serde_json::json!({
        "base": vertex_to_json(&e.base()),
        "direction": e.direction(),
    })
}

fn mask_to_directions(mask: u32, dim: usize) -> Vec<usize> {
    (1..=dim).filter(|i| mask >> (i - 1) & 1 == 1).collect()
}

/// Full witness report as a JSON object with exact values only.
pub fn witness_report_to_json(report: &WitnessReport) -> Value {
    let dim = report.flipped.dim();
    serde_json::json!({
        "minimizing_vertex": vertex_to_json(&report.minimizing_vertex),
        "flip_mask": mask_to_directions(report.flip_mask, dim),
        "flipped_family": report.flipped.planes().iter().map(plane_to_json).collect::<Vec<_>>(),
        "origin_plane_indices": report.origin_plane_indices,
        "partition": report.partition.iter().map(|&m| mask_to_directions(m, dim)).collect::<Vec<_>>(),
        "refined": report.refined.iter().map(|&(m, sign)| serde_json::json!({
            "directions": mask_to_directions(m, dim),
            "sign": match sign { Sign::Positive => "+", Sign::Negative => "-" },
        })).collect::<Vec<_>>(),
        "S": mask_to_directions(report.s_mask, dim),
        "subcube_vertices": report.subcube.iter().map(|v| vertex_to_json(&v)).collect::<Vec<_>>(),
        "claim_origin_separation_ok": report.claim_origin_separation_ok,
        "claim_subcube_cover_ok": report.claim_subcube_cover_ok,
        "restricted_traces": report.restricted.iter().map(|t| match t {
            RestrictedTrace::Plane(h) => plane_to_json(h),
            RestrictedTrace::Empty => Value::String("empty".into()),
        }).collect::<Vec<_>>(),
        "family_size": report.family_size,
        "lower_bound": report.lower_bound,
        "bound_satisfied": report.bound_satisfied,
    })
}

/// Human-readable rendering of a witness report.
pub fn witness_report_trace(report: &WitnessReport) -> String {
    use std::fmt::Write;
    let dim = report.flipped.dim();
    let mut s = String::new();
    let dirs = |m: u32| {
        let d = mask_to_directions(m, dim);
        if d.is_empty() {
            "{}".to_string()
        } else {
            format!("{{{}}}", d.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
        }
    };
    writeln!(s, "minimizing vertex w = {:?}", report.minimizing_vertex.coords()).unwrap();
    writeln!(s, "flipped coordinates: {}", dirs(report.flip_mask)).unwrap();
    writeln!(
        s,
        "planes through the origin after flip: {:?}",
        report.origin_plane_indices
    )
    .unwrap();
    for (j, (&block, &(refined, sign))) in report
        .partition
        .iter()
        .zip(&report.refined)
        .enumerate()
    {
        writeln!(
            s,
            "T_{} = {}, T_{}' = {} (sign {})",
            j + 1,
            dirs(block),
            j + 1,
            dirs(refined),
            match sign {
                Sign::Positive => "+",
                Sign::Negative => "-",
            }
        )
        .unwrap();
    }
    writeln!(
        s,
        "S = {} (|S| = {} >= ceil(n/2) = {})",
        dirs(report.s_mask),
        report.s_mask.count_ones(),
        report.lower_bound
    )
    .unwrap();
    writeln!(s, "|Q_S| = {} vertices", report.subcube.count()).unwrap();
    writeln!(
        s,
        "origin-separation claim: {}",
        if report.claim_origin_separation_ok { "verified" } else { "FAILED" }
    )
    .unwrap();
    writeln!(
        s,
        "subcube-cover claim: {}",
        if report.claim_subcube_cover_ok { "verified" } else { "FAILED" }
    )
    .unwrap();
    writeln!(
        s,
        "certified: family size {} >= {}",
        report.family_size, report.lower_bound
    )
    .unwrap();
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::tight_cover;

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("1/2").unwrap(), BigRational::new(1.into(), 2.into()));
        assert_eq!(parse_rational("-3").unwrap(), BigRational::from_integer((-3).into()));
        assert_eq!(parse_rational("4/2").unwrap(), BigRational::from_integer(2.into()));
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn family_roundtrip() {
        let f = tight_cover(4).unwrap();
        let text = family_to_jsonl(&f);
        let g = parse_family(&text).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn parse_reports_line_numbers() {
        let text = "{\"a\": [1, 0], \"b\": \"0/1\"}\n{\"a\": [1, 0], \"b\": 0.5}\n";
        match parse_family(text) {
            Err(ParseError::Field { line, field, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(field, "b");
            }
            other => panic!("expected field error, got {other:?}"),
        }

        let text = "not json\n";
        assert!(matches!(
            parse_family(text),
            Err(ParseError::Json { line: 1, .. })
        ));
    }

    #[test]
    fn dimension_consistency_enforced() {
        let text = "{\"a\": [1, 0], \"b\": \"0/1\"}\n{\"a\": [1], \"b\": \"0/1\"}\n";
        assert!(matches!(
            parse_family(text),
            Err(ParseError::InconsistentDim { line: 2, .. })
        ));
    }

    #[test]
    fn empty_input_rejected() {
        assert_eq!(parse_family("\n\n"), Err(ParseError::Empty));
    }

    #[test]
    fn big_coefficients_survive_roundtrip() {
        let big = "123456789012345678901234567890";
        let text = format!("{{\"a\": [{big}, 1], \"b\": \"1/3\"}}\n");
        let f = parse_family(&text).unwrap();
        assert_eq!(f.planes()[0].normal()[0], BigInt::from_str(big).unwrap());
        let again = parse_family(&family_to_jsonl(&f)).unwrap();
        assert_eq!(f, again);
    }
}
