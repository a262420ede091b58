//! JSON file formats for spaces, maps and controls.
//!
//! Numbers are written as JSON numbers when that round-trips exactly and as
//! strings (`"inf"`, `"3/7"`) otherwise.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde_json::{json, Map as JsonMap, Value};

use crate::controls::{Continuity, ControlFn};
use crate::error::{Error, Result};
use crate::ext::ExtDist;
use crate::maps::CoarseMap;
use crate::metric::MetricSpace;
use crate::scalar::Scalar;

fn fmt_err(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

pub fn parse_scalar<T: Scalar>(v: &Value) -> Result<T> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                return T::from_i64(i).ok_or_else(|| fmt_err(format!("{n} is out of range")));
            }
            let f = n.as_f64().ok_or_else(|| fmt_err(format!("{n} is not a number")))?;
            T::from_f64(f).ok_or_else(|| fmt_err(format!("{n} is not representable")))
        }
        Value::String(s) => parse_scalar_str(s),
        other => Err(fmt_err(format!("expected a number, found {other}"))),
    }
}

/// Parses integers, decimals and fractions `p/q`.
pub fn parse_scalar_str<T: Scalar>(s: &str) -> Result<T> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: T = parse_scalar_str(p)?;
        let q: T = parse_scalar_str(q)?;
        if q.is_zero() {
            return Err(fmt_err(format!("zero denominator in `{s}`")));
        }
        return Ok(p / q);
    }
    if let Ok(i) = s.parse::<i64>() {
        return T::from_i64(i).ok_or_else(|| fmt_err(format!("`{s}` is out of range")));
    }
    let f: f64 = s.parse().map_err(|_| fmt_err(format!("`{s}` is not a number")))?;
    T::from_f64(f).ok_or_else(|| fmt_err(format!("`{s}` is not representable")))
}

pub fn parse_dist<T: Scalar>(v: &Value) -> Result<ExtDist<T>> {
    match v {
        Value::String(s) if s.trim().eq_ignore_ascii_case("inf") => Ok(ExtDist::Infinite),
        _ => parse_scalar(v).map(ExtDist::Finite),
    }
}

pub fn scalar_to_json<T: Scalar>(v: T) -> Value {
    let text = v.to_string();
    if text.contains('/') {
        return Value::String(text);
    }
    if let Ok(i) = text.parse::<i64>() {
        return json!(i);
    }
    match v.to_f64() {
        Some(f) if f.is_finite() && T::from_f64(f) == Some(v) => json!(f),
        _ => Value::String(text),
    }
}

pub fn dist_to_json<T: Scalar>(d: ExtDist<T>) -> Value {
    match d {
        ExtDist::Finite(v) => scalar_to_json(v),
        ExtDist::Infinite => Value::String("inf".into()),
    }
}

fn field<'a>(obj: &'a JsonMap<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| fmt_err(format!("missing field `{key}`")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| fmt_err(format!("`{what}` must be an array")))
}

fn label(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(fmt_err(format!("point labels must be strings, found {other}"))),
    }
}

/// Parse a space object without checking the metric axioms.
pub fn space_from_json<T: Scalar>(v: &Value) -> Result<MetricSpace<T>> {
    let obj = v.as_object().ok_or_else(|| fmt_err("a space must be a JSON object"))?;
    let labels = array(field(obj, "points")?, "points")?.iter().map(label).collect::<Result<Vec<_>>>()?;
    if let Some(dist) = obj.get("dist") {
        let rows = array(dist, "dist")?
            .iter()
            .map(|row| array(row, "dist row")?.iter().map(parse_dist).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        return MetricSpace::new(labels, rows);
    }
    let edges = obj.get("edges").ok_or_else(|| fmt_err("a space needs `dist` or `edges`"))?;
    match obj.get("complete_by").and_then(Value::as_str) {
        Some("shortest_path") => {}
        Some(other) => return Err(fmt_err(format!("unknown completion `{other}`"))),
        None => return Err(fmt_err("an edge list needs \"complete_by\": \"shortest_path\"")),
    }
    let mut parsed = Vec::new();
    for e in array(edges, "edges")? {
        let e = array(e, "edge")?;
        if e.len() != 3 {
            return Err(fmt_err("edges are [a, b, w] triples"));
        }
        parsed.push((label(&e[0])?, label(&e[1])?, parse_scalar(&e[2])?));
    }
    MetricSpace::from_labelled_edges(labels, &parsed)
}

pub fn space_to_json<T: Scalar>(space: &MetricSpace<T>) -> Value {
    let rows: Vec<Value> =
        space.points().map(|i| Value::Array(space.row(i).iter().map(|&d| dist_to_json(d)).collect())).collect();
    json!({ "points": space.labels(), "dist": rows })
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| fmt_err(format!("{}: {e}", path.display())))
}

fn validated<T: Scalar>(space: MetricSpace<T>, eps: T, origin: &str) -> Result<MetricSpace<T>> {
    let report = space.validate(eps);
    if report.is_empty() {
        Ok(space)
    } else {
        Err(fmt_err(format!("{origin}: {report}")))
    }
}

/// Read and validate a space file.
pub fn load_space<T: Scalar>(path: impl AsRef<Path>, eps: T) -> Result<MetricSpace<T>> {
    let path = path.as_ref();
    validated(space_from_json(&read_json(path)?)?, eps, &path.display().to_string())
}

pub fn write_json(path: impl AsRef<Path>, v: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(v)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

pub fn save_space<T: Scalar>(path: impl AsRef<Path>, space: &MetricSpace<T>) -> Result<()> {
    write_json(path, &space_to_json(space))
}

/// A space reference inside a map file: a path (relative to the map file) or
/// an inline space object.
fn resolve_space<T: Scalar>(v: &Value, base: Option<&Path>, eps: T) -> Result<MetricSpace<T>> {
    match v {
        Value::String(p) => {
            let mut path = PathBuf::from(p);
            if path.is_relative() {
                if let Some(dir) = base {
                    path = dir.join(path);
                }
            }
            load_space(path, eps)
        }
        Value::Object(_) => validated(space_from_json(v)?, eps, "inline space"),
        other => Err(fmt_err(format!("a space reference is a path or an object, found {other}"))),
    }
}

/// Parse a map whose spaces are already known.
pub fn map_pairs_from_json<T: Scalar>(
    v: &Value,
    source: Arc<MetricSpace<T>>,
    target: Arc<MetricSpace<T>>,
) -> Result<CoarseMap<T>> {
    let obj = v.as_object().ok_or_else(|| fmt_err("a map must be a JSON object"))?;
    let mut pairs = Vec::new();
    for p in array(field(obj, "pairs")?, "pairs")? {
        let p = array(p, "pair")?;
        if p.len() != 2 {
            return Err(fmt_err("pairs are [x, y]"));
        }
        pairs.push((label(&p[0])?, label(&p[1])?));
    }
    CoarseMap::from_pairs(source, target, &pairs)
}

pub fn map_from_json<T: Scalar>(v: &Value, base: Option<&Path>, eps: T) -> Result<CoarseMap<T>> {
    let obj = v.as_object().ok_or_else(|| fmt_err("a map must be a JSON object"))?;
    let source = Arc::new(resolve_space(field(obj, "source")?, base, eps)?);
    let target = Arc::new(resolve_space(field(obj, "target")?, base, eps)?);
    map_pairs_from_json(v, source, target)
}

/// Map object with both spaces inline.
pub fn map_to_json<T: Scalar>(f: &CoarseMap<T>) -> Value {
    map_to_json_with_refs(f, space_to_json(f.source()), space_to_json(f.target()))
}

pub fn map_to_json_with_refs<T: Scalar>(f: &CoarseMap<T>, source: Value, target: Value) -> Value {
    let pairs: Vec<Value> = f.pairs().into_iter().map(|(x, y)| json!([x, y])).collect();
    json!({ "source": source, "target": target, "pairs": pairs })
}

pub fn load_map<T: Scalar>(path: impl AsRef<Path>, eps: T) -> Result<CoarseMap<T>> {
    let path = path.as_ref();
    map_from_json(&read_json(path)?, path.parent(), eps)
}

pub fn save_map<T: Scalar>(path: impl AsRef<Path>, f: &CoarseMap<T>) -> Result<()> {
    write_json(path, &map_to_json(f))
}

pub fn control_from_json<T: Scalar>(v: &Value) -> Result<ControlFn<T>> {
    let obj = v.as_object().ok_or_else(|| fmt_err("a control must be a JSON object"))?;
    if let Some(ab) = obj.get("affine") {
        let ab = array(ab, "affine")?;
        if ab.len() != 2 {
            return Err(fmt_err("affine takes [slope, offset]"));
        }
        return ControlFn::affine(parse_scalar(&ab[0])?, parse_scalar(&ab[1])?);
    }
    let table = obj.get("table").ok_or_else(|| fmt_err("a control needs `affine` or `table`"))?;
    let mut points = Vec::new();
    for p in array(table, "table")? {
        let p = array(p, "table entry")?;
        if p.len() != 2 {
            return Err(fmt_err("table entries are [t, v]"));
        }
        points.push((parse_scalar(&p[0])?, parse_scalar(&p[1])?));
    }
    let continuity = match obj.get("continuity").and_then(Value::as_str) {
        None | Some("right") => Continuity::Right,
        Some("left") => Continuity::Left,
        Some(other) => return Err(fmt_err(format!("unknown continuity `{other}`"))),
    };
    ControlFn::table_with(points, continuity)
}

/// Compositions and sums are flattened to a table when that is exact.
pub fn control_to_json<T: Scalar>(c: &ControlFn<T>) -> Result<Value> {
    if let Some((a, b)) = c.as_affine() {
        return Ok(json!({ "affine": [scalar_to_json(a), scalar_to_json(b)] }));
    }
    let table = c.to_table().ok_or_else(|| fmt_err(format!("`{c}` has no exact table form")))?;
    let pts: Vec<Value> =
        table.points().iter().map(|&(t, v)| json!([scalar_to_json(t), scalar_to_json(v)])).collect();
    let mut out = json!({ "table": pts });
    if table.continuity() == Continuity::Left {
        out["continuity"] = json!("left");
    }
    Ok(out)
}

pub fn load_control<T: Scalar>(path: impl AsRef<Path>) -> Result<ControlFn<T>> {
    control_from_json(&read_json(path.as_ref())?)
}

pub fn save_control<T: Scalar>(path: impl AsRef<Path>, c: &ControlFn<T>) -> Result<()> {
    write_json(path, &control_to_json(c)?)
}

/// Short inline form: `affine:a,b` or `table:t0:v0,t1:v1,...`, matching the
/// `Display` of a control.
pub fn parse_control<T: Scalar>(s: &str) -> Result<ControlFn<T>> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix("affine:") {
        let (a, b) = rest.split_once(',').ok_or_else(|| fmt_err("affine:SLOPE,OFFSET"))?;
        return ControlFn::affine(parse_scalar_str(a)?, parse_scalar_str(b)?);
    }
    if let Some(rest) = s.strip_prefix("table:") {
        let points = rest
            .split(',')
            .map(|e| {
                let (t, v) = e.split_once(':').ok_or_else(|| fmt_err("table:T:V,T:V,..."))?;
                Ok((parse_scalar_str(t)?, parse_scalar_str(v)?))
            })
            .collect::<Result<Vec<_>>>()?;
        return ControlFn::table(points);
    }
    if s.starts_with('{') {
        return control_from_json(&serde_json::from_str(s)?);
    }
    Err(fmt_err(format!("`{s}` is not a control (expected affine:a,b or table:t:v,...)")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    #[test]
    fn inf_token_and_edge_completion() {
        let v: Value = serde_json::from_str(r#"{"points":["a","b","c"],"dist":[[0,1,"inf"],[1,0,"inf"],["inf","inf",0]]}"#).unwrap();
        let s: MetricSpace<f64> = space_from_json(&v).unwrap();
        assert_eq!(s.d(0, 2), ExtDist::Infinite);
        assert!(s.is_metric(0.0));

        let v: Value = serde_json::from_str(
            r#"{"points":["a","b","c"],"edges":[["a","b",2],["b","c",3]],"complete_by":"shortest_path"}"#,
        )
        .unwrap();
        let s: MetricSpace<f64> = space_from_json(&v).unwrap();
        assert_eq!(s.d(0, 2), ExtDist::Finite(5.0));
    }

    #[test]
    fn rational_values_round_trip_as_fractions() {
        let s = MetricSpace::from_fn(vec!["a".into(), "b".into()], |i, j| {
            ExtDist::Finite(if i == j { Rational64::from_integer(0) } else { Rational64::new(1, 3) })
        })
        .unwrap();
        let v = space_to_json(&s);
        assert_eq!(v["dist"][0][1], json!("1/3"));
        let back: MetricSpace<Rational64> = space_from_json(&v).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn unknown_label_is_named() {
        let v: Value = serde_json::from_str(
            r#"{"source":{"points":["a"],"dist":[[0]]},"target":{"points":["b"],"dist":[[0]]},"pairs":[["a","zz"]]}"#,
        )
        .unwrap();
        let err = map_from_json::<f64>(&v, None, 1e-9).unwrap_err();
        assert!(err.to_string().contains("zz"), "{err}");
    }

    #[test]
    fn invalid_space_is_rejected_with_witness() {
        let v: Value =
            serde_json::from_str(r#"{"points":["a","b","c"],"dist":[[0,1,5],[1,0,1],[5,1,0]]}"#).unwrap();
        let err = resolve_space::<f64>(&v, None, 1e-9).unwrap_err();
        assert!(err.to_string().contains("triangle"), "{err}");
    }

    #[test]
    fn control_forms() {
        let c: ControlFn<f64> = parse_control("affine:2,1").unwrap();
        assert_eq!(c.evaluate(3.0).unwrap(), 7.0);
        let c: ControlFn<f64> = parse_control("table:0:0,1:2,3:3").unwrap();
        assert_eq!(c.evaluate(2.0).unwrap(), 2.5);
        let back: ControlFn<f64> = parse_control(&c.to_string()).unwrap();
        assert_eq!(back, c);
        let j = control_to_json(&c).unwrap();
        assert_eq!(control_from_json::<f64>(&j).unwrap(), c);
        assert!(parse_control::<f64>("affine:-1,0").is_err());
        assert!(parse_control::<f64>("cubic:1").is_err());
    }

    #[test]
    fn parse_errors_carry_position() {
        let dir = std::env::temp_dir().join(format!("coarse-io-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let p = dir.join("bad.json");
        std::fs::write(&p, "{\n  \"points\": [\"a\",\n}").unwrap();
        let err = load_space::<f64>(&p, 1e-9).unwrap_err().to_string();
        assert!(err.contains("line 3"), "{err}");
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
