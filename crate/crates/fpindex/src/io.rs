//! JSON and text formats. Every rational is written as an integer
//! numerator/denominator pair; integers that do not fit an `i64` are
//! written as decimal strings.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::exact_geom::{Rat, RatPoint};
use crate::jordan::{validate_curve, CrossingKind, JordanError, PolyJordanCurve};
use crate::packing::{PackingError, PackingSpec, TopoRectangle};
use crate::plmap::{PLCorrespondence, PlmapError};
use crate::torus::{Mark, Nesting, TorusDiagram, TorusError};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Curve(#[from] JordanError),
    #[error(transparent)]
    Map(#[from] PlmapError),
    #[error(transparent)]
    Packing(#[from] PackingError),
    #[error(transparent)]
    Torus(#[from] TorusError),
}

impl IoError {
    pub fn reason(&self) -> &'static str {
        match self {
            IoError::Malformed(_) | IoError::Json(_) => "MalformedInput",
            IoError::Curve(e) => e.reason(),
            IoError::Map(e) => e.reason(),
            IoError::Packing(e) => e.reason(),
            IoError::Torus(e) => e.reason(),
        }
    }
}

fn bad(msg: impl Into<String>) -> IoError {
    IoError::Malformed(msg.into())
}

pub fn int_to_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

fn int_from_json(v: &Value) -> Result<BigInt, IoError> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(|| bad(format!("{n} is not an integer"))),
        Value::String(s) => BigInt::from_str(s).map_err(|_| bad(format!("{s:?} is not an integer"))),
        _ => Err(bad("expected an integer")),
    }
}

fn ints(v: &Value, n: usize) -> Result<Vec<BigInt>, IoError> {
    let a = v.as_array().ok_or_else(|| bad("expected an array of integers"))?;
    if a.len() != n {
        return Err(bad(format!("expected {n} integers, got {}", a.len())));
    }
    a.iter().map(int_from_json).collect()
}

fn ratio(n: BigInt, d: BigInt) -> Result<Rat, IoError> {
    if d.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Rat::new(n, d))
}

pub fn rat_to_json(r: &Rat) -> Value {
    json!([int_to_json(r.numer()), int_to_json(r.denom())])
}

pub fn rat_from_json(v: &Value) -> Result<Rat, IoError> {
    let [n, d]: [BigInt; 2] = ints(v, 2)?.try_into().expect("length checked");
    ratio(n, d)
}

fn quad_to_json(a: &Rat, b: &Rat) -> Value {
    json!([int_to_json(a.numer()), int_to_json(a.denom()), int_to_json(b.numer()), int_to_json(b.denom())])
}

fn quad_from_json(v: &Value) -> Result<(Rat, Rat), IoError> {
    let [an, ad, bn, bd]: [BigInt; 4] = ints(v, 4)?.try_into().expect("length checked");
    Ok((ratio(an, ad)?, ratio(bn, bd)?))
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, IoError> {
    v.get(key).ok_or_else(|| bad(format!("missing field {key:?}")))
}

fn array<'a>(v: &'a Value, key: &str) -> Result<&'a Vec<Value>, IoError> {
    field(v, key)?.as_array().ok_or_else(|| bad(format!("field {key:?} must be an array")))
}

pub fn point_to_json(p: &RatPoint) -> Value {
    quad_to_json(&p.x, &p.y)
}

pub fn curve_to_json(k: &PolyJordanCurve) -> Value {
    json!({ "vertices": k.vertices().iter().map(point_to_json).collect::<Vec<_>>() })
}

fn vertices_from_json(v: &Value) -> Result<Vec<RatPoint>, IoError> {
    array(v, "vertices")?
        .iter()
        .map(|q| quad_from_json(q).map(|(x, y)| RatPoint::new(x, y)))
        .collect()
}

/// Parses and validates a curve. Clockwise input is rejected, not reversed.
pub fn curve_from_json(v: &Value) -> Result<PolyJordanCurve, IoError> {
    Ok(validate_curve(vertices_from_json(v)?, false)?)
}

pub fn map_to_json(phi: &PLCorrespondence) -> Value {
    json!({ "breakpoints": phi.breakpoints().iter().map(|(s, t)| quad_to_json(s, t)).collect::<Vec<_>>() })
}

pub fn map_from_json(v: &Value) -> Result<PLCorrespondence, IoError> {
    let pairs = array(v, "breakpoints")?.iter().map(quad_from_json).collect::<Result<Vec<_>, _>>()?;
    Ok(PLCorrespondence::new(pairs)?)
}

pub fn rats_to_json(rs: &[Rat]) -> Value {
    Value::Array(rs.iter().map(rat_to_json).collect())
}

fn rats_from_json(v: &Value) -> Result<Vec<Rat>, IoError> {
    v.as_array().ok_or_else(|| bad("expected a list of rationals"))?.iter().map(rat_from_json).collect()
}

/// `{"z": [[n,d], ...], "zt": [[n,d], ...]}`: constraint parameters.
pub fn constraints_to_json(z: &[Rat], zt: &[Rat]) -> Value {
    json!({ "z": rats_to_json(z), "zt": rats_to_json(zt) })
}

pub fn constraints_from_json(v: &Value) -> Result<(Vec<Rat>, Vec<Rat>), IoError> {
    Ok((rats_from_json(field(v, "z")?)?, rats_from_json(field(v, "zt")?)?))
}

pub fn packing_to_json(p: &PackingSpec) -> Value {
    let mut rect = curve_to_json(&p.rect.curve);
    rect["corners"] = json!(p.rect.corners);
    json!({ "rect": rect, "pieces": p.pieces.iter().map(curve_to_json).collect::<Vec<_>>() })
}

pub fn packing_from_json(v: &Value) -> Result<PackingSpec, IoError> {
    let r = field(v, "rect")?;
    let corners: Vec<usize> = array(r, "corners")?
        .iter()
        .map(|c| c.as_u64().map(|c| c as usize).ok_or_else(|| bad("corner indices must be integers")))
        .collect::<Result<_, _>>()?;
    let corners: [usize; 4] = corners.try_into().map_err(|_| bad("a rectangle has four corners"))?;
    let rect = TopoRectangle::new(curve_from_json(r)?, corners)?;
    let pieces = array(v, "pieces")?.iter().map(curve_from_json).collect::<Result<_, _>>()?;
    Ok(PackingSpec { rect, pieces })
}

/// Piece correspondence: a bare list `[j0, j1, ...]` or `{"pieces": [...]}`.
pub fn correspondence_from_json(v: &Value) -> Result<Vec<usize>, IoError> {
    let list = match v {
        Value::Array(a) => a,
        _ => array(v, "pieces")?,
    };
    list.iter().map(|c| c.as_u64().map(|c| c as usize).ok_or_else(|| bad("indices must be integers"))).collect()
}

/// Inverse of [`TorusDiagram::dump`]. Crossings are numbered in column order.
pub fn parse_dump(text: &str) -> Result<TorusDiagram, IoError> {
    let mut lines: BTreeMap<&str, &str> = BTreeMap::new();
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let (k, v) = line.split_once(':').ok_or_else(|| bad(format!("bad line {line:?}")))?;
        lines.insert(k.trim(), v.trim());
    }
    let cols_txt = lines.get("cols").ok_or_else(|| bad("missing cols line"))?;
    let rows_txt = lines.get("rows").ok_or_else(|| bad("missing rows line"))?;
    let mut ids: BTreeMap<String, usize> = BTreeMap::new();
    let mut kinds = Vec::new();
    let constraint = |tok: &str, prefix: &str| -> Option<usize> {
        tok.strip_prefix(prefix).and_then(|n| n.parse::<usize>().ok()).filter(|&n| n >= 1).map(|n| n - 1)
    };
    let mut cols = Vec::new();
    for tok in cols_txt.split_whitespace() {
        if let Some(i) = constraint(tok, "z") {
            cols.push(Mark::Constraint(i));
        } else if tok.starts_with('P') {
            let kind = if tok.starts_with("P~") { CrossingKind::Ptilde } else { CrossingKind::P };
            if ids.contains_key(tok) {
                return Err(bad(format!("{tok} repeated")));
            }
            ids.insert(tok.to_string(), kinds.len());
            cols.push(Mark::Crossing(kinds.len()));
            kinds.push(kind);
        } else {
            return Err(bad(format!("unknown column mark {tok:?}")));
        }
    }
    let mut rows = Vec::new();
    for tok in rows_txt.split_whitespace() {
        if let Some(i) = constraint(tok, "z~") {
            rows.push(Mark::Constraint(i));
        } else {
            let c = ids.get(tok).ok_or_else(|| bad(format!("unknown row mark {tok:?}")))?;
            rows.push(Mark::Crossing(*c));
        }
    }
    let nesting = match lines.get("nesting").copied() {
        None | Some("Disjoint") => Nesting::Disjoint,
        Some("KInsideKt") => Nesting::KInsideKt,
        Some("KtInsideK") => Nesting::KtInsideK,
        Some(other) => return Err(bad(format!("unknown nesting {other:?}"))),
    };
    Ok(TorusDiagram::from_orders(cols, rows, kinds, nesting)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_geom::rat;
    use crate::fixtures;
    use crate::torus::build_diagram_for;
    use proptest::prelude::*;

    #[test]
    fn curve_round_trip() {
        let (k, _, _) = fixtures::fig2();
        let v = curve_to_json(&k);
        assert_eq!(v["vertices"][0], json!([1, 1, -3, 1]));
        assert_eq!(curve_from_json(&v).unwrap(), k);
    }

    #[test]
    fn clockwise_and_malformed_inputs() {
        let v = json!({"vertices": [[0,1,0,1],[0,1,1,1],[1,1,1,1],[1,1,0,1]]});
        assert_eq!(curve_from_json(&v).unwrap_err().reason(), "NotPositivelyOriented");
        assert_eq!(curve_from_json(&json!({"vertices": [[0,0,0,1]]})).unwrap_err().reason(), "MalformedInput");
        assert_eq!(curve_from_json(&json!({})).unwrap_err().reason(), "MalformedInput");
    }

    #[test]
    fn big_integers_as_strings() {
        let big = Rat::new(BigInt::from(10).pow(30), BigInt::from(7));
        let v = rat_to_json(&big);
        assert!(v[0].is_string());
        assert_eq!(rat_from_json(&v).unwrap(), big);
    }

    #[test]
    fn packing_round_trip() {
        let (a, _) = fixtures::overlay_two();
        let v = packing_to_json(&a);
        assert_eq!(packing_from_json(&v).unwrap(), a);
        assert_eq!(correspondence_from_json(&json!([1, 0])).unwrap(), vec![1, 0]);
        assert_eq!(correspondence_from_json(&json!({"pieces": [0]})).unwrap(), vec![0]);
    }

    #[test]
    fn dump_round_trip() {
        let (k, kt, z, zt) = fixtures::two_bump();
        let d = build_diagram_for(&k, &kt, &z, &zt).unwrap();
        let e = parse_dump(&d.dump()).unwrap();
        assert_eq!(e.dump(), d.dump());
        assert!(parse_dump("cols: z1 z2 z3 P1\nrows: z~1 z~2 z~3 P2\n").is_err());
    }

    proptest! {
        #[test]
        fn map_round_trip(seed in any::<u64>()) {
            let phi = crate::gen::random_correspondence(&mut crate::gen::rng(seed), 5);
            let back = map_from_json(&map_to_json(&phi)).unwrap();
            prop_assert_eq!(back, phi);
        }

        #[test]
        fn rational_round_trip(n in any::<i64>(), d in 1i64..1_000_000) {
            let r = rat(n, d);
            prop_assert_eq!(rat_from_json(&rat_to_json(&r)).unwrap(), r);
        }
    }
}
