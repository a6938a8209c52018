//! JSON encodings of spaces and point lists.
//!
//! A space is `{"type":"lp","p":2,"d":3}` (`"p":"inf"` for `ℓ∞`) or
//! `{"type":"sum","q":1,"summands":[…]}`. A point list is an array of
//! coordinate arrays, or any object carrying one under `"points"` (so the
//! output of `construct` can be fed straight back in).

use std::fmt;

use eqsets_core::{Exponent, SpaceSpec, Vector};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatError(pub String);

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for FormatError {}

fn err<T>(msg: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError(msg.into()))
}

pub fn space_to_json(spec: &SpaceSpec) -> Value {
    match spec {
        SpaceSpec::Leaf { p: Exponent::Infinite, d } => json!({"type": "lp", "p": "inf", "d": d}),
        SpaceSpec::Leaf { p: Exponent::Finite(p), d } => json!({"type": "lp", "p": p, "d": d}),
        SpaceSpec::Sum { q, summands } => {
            json!({"type": "sum", "q": q, "summands": summands.iter().map(space_to_json).collect::<Vec<_>>()})
        }
    }
}

/// Parses and validates a space; an object with a `"space"` key is unwrapped.
pub fn space_from_json(v: &Value) -> Result<SpaceSpec, FormatError> {
    let spec = parse_space(v.get("space").unwrap_or(v))?;
    spec.validate().map_err(|e| FormatError(e.to_string()))?;
    Ok(spec)
}

fn parse_space(v: &Value) -> Result<SpaceSpec, FormatError> {
    let Some(obj) = v.as_object() else {
        return err("space must be a JSON object");
    };
    match obj.get("type").and_then(Value::as_str) {
        Some("lp") => {
            let p = match obj.get("p") {
                Some(Value::String(s)) if matches!(s.as_str(), "inf" | "infinity" | "∞") => Exponent::Infinite,
                Some(Value::Number(n)) => Exponent::Finite(n.as_f64().unwrap_or(f64::NAN)),
                _ => return err("lp space needs \"p\": a number or \"inf\""),
            };
            let Some(d) = obj.get("d").and_then(Value::as_u64) else {
                return err("lp space needs a positive integer \"d\"");
            };
            Ok(SpaceSpec::Leaf { p, d: d as usize })
        }
        Some("sum") => {
            let Some(q) = obj.get("q").and_then(Value::as_f64) else {
                return err("sum space needs a numeric \"q\"");
            };
            let Some(summands) = obj.get("summands").and_then(Value::as_array) else {
                return err("sum space needs a \"summands\" array");
            };
            Ok(SpaceSpec::Sum { q, summands: summands.iter().map(parse_space).collect::<Result<_, _>>()? })
        }
        Some(other) => err(format!("unknown space type {other:?}")),
        None => err("space needs a \"type\" of \"lp\" or \"sum\""),
    }
}

/// Negative zeros are written as `0.0`.
pub fn points_to_json(points: &[Vector]) -> Value {
    Value::Array(points.iter().map(|p| json!(p.iter().map(|x| x + 0.0).collect::<Vec<f64>>())).collect())
}

pub fn points_from_json(v: &Value) -> Result<Vec<Vector>, FormatError> {
    let Some(rows) = v.get("points").unwrap_or(v).as_array() else {
        return err("points must be an array of coordinate arrays");
    };
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            let coords = row
                .as_array()
                .and_then(|r| r.iter().map(Value::as_f64).collect::<Option<Vec<f64>>>())
                .ok_or_else(|| FormatError(format!("point {i} is not an array of numbers")))?;
            Vector::new(coords).map_err(|e| FormatError(format!("point {i}: {e}")))
        })
        .collect()
}

/// Output of `construct`.
#[derive(Debug, Serialize)]
pub struct ConstructionOutput {
    pub space: Value,
    pub points: Value,
    pub common_distance: f64,
}

impl ConstructionOutput {
    pub fn new(space: &SpaceSpec, points: &[Vector], common_distance: f64) -> Self {
        ConstructionOutput { space: space_to_json(space), points: points_to_json(points), common_distance }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn space_round_trip() {
        let spec = SpaceSpec::sum(1.0, vec![SpaceSpec::lp(2.5, 2), SpaceSpec::linf(3)]);
        let v = space_to_json(&spec);
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"{"q":1.0,"summands":[{"d":2,"p":2.5,"type":"lp"},{"d":3,"p":"inf","type":"lp"}],"type":"sum"}"#
        );
        assert_eq!(space_from_json(&v).unwrap(), spec);
    }

    #[test]
    fn rejects_bad_spaces() {
        for s in [r#"{"type":"lp","p":0.5,"d":2}"#, r#"{"type":"lp","p":2}"#, r#"{"type":"ball"}"#, "[1]"] {
            assert!(space_from_json(&serde_json::from_str(s).unwrap()).is_err(), "{s}");
        }
    }

    #[test]
    fn points_accept_wrapped_form() {
        let bare: Value = serde_json::from_str("[[1, 0], [0, 1]]").unwrap();
        let wrapped: Value = serde_json::from_str(r#"{"points": [[1, 0], [0, 1]]}"#).unwrap();
        assert_eq!(points_from_json(&bare).unwrap(), points_from_json(&wrapped).unwrap());
        assert!(points_from_json(&serde_json::from_str(r#"[[1, "a"]]"#).unwrap()).is_err());
    }
}
