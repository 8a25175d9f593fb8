//! JSON interchange for matrices, complexes, maps and diagrams.
//!
//! Malformed documents yield [`Error::Parse`]; well-formed documents that
//! violate a mathematical invariant yield the corresponding validation error.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::complex::{ChainMap, Complex, Homotopy, HomologyGroup};
use crate::derived::{DerivedHomGroup, Roof};
use crate::diagram::{label, DiagComplex, Poset, ShapeKind};
use crate::linalg::{scalar_to_i64, Mat, Ring, Scalar};
use crate::sconst::{ExtObject, Filtration, SnObject};
use crate::{Error, Result};

fn parse_err(what: impl Into<String>) -> Error {
    Error::Parse(what.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| parse_err(format!("missing field \"{key}\"")))
}

fn as_int(v: &Value, what: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| parse_err(format!("{what} must be an integer")))
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| parse_err(format!("{what} must be a nonnegative integer")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| parse_err(format!("{what} must be an array")))
}

fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| parse_err(format!("{what} must be an object")))
}

fn ring_fields(ring: Ring, out: &mut Map<String, Value>) {
    match ring {
        Ring::Integers => {
            out.insert("ring".into(), json!("Z"));
        }
        Ring::Rationals => {
            out.insert("ring".into(), json!("Q"));
        }
        Ring::PrimeField(p) => {
            out.insert("ring".into(), json!("Fp"));
            out.insert("p".into(), json!(p));
        }
    }
}

fn ring_from(v: &Value) -> Result<Ring> {
    match field(v, "ring")?.as_str() {
        Some("Z") => Ok(Ring::Integers),
        Some("Q") => Ok(Ring::Rationals),
        Some("Fp") => {
            let p = field(v, "p")?.as_u64().ok_or_else(|| parse_err("p must be a positive integer"))?;
            Ring::prime_field(p)
        }
        _ => Err(parse_err("ring must be \"Z\", \"Q\" or \"Fp\"")),
    }
}

fn scalar_to_json(x: &Scalar) -> Value {
    match scalar_to_i64(x) {
        Some(v) => json!(v),
        None if x.is_integer() => json!(x.numer().to_string()),
        None => json!(format!("{}/{}", x.numer(), x.denom())),
    }
}

fn scalar_from(v: &Value) -> Result<Scalar> {
    if let Some(i) = v.as_i64() {
        return Ok(Scalar::from_integer(BigInt::from(i)));
    }
    let s = v.as_str().ok_or_else(|| parse_err("matrix entries must be integers or \"a/b\" strings"))?;
    let bad = || parse_err(format!("cannot read \"{s}\" as a rational"));
    match s.split_once('/') {
        Some((a, b)) => {
            let (a, b) = (BigInt::from_str(a.trim()).map_err(|_| bad())?, BigInt::from_str(b.trim()).map_err(|_| bad())?);
            if b == BigInt::from(0) {
                return Err(bad());
            }
            Ok(Scalar::new(a, b))
        }
        None => Ok(Scalar::from_integer(BigInt::from_str(s.trim()).map_err(|_| bad())?)),
    }
}

fn entries(m: &Mat) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(scalar_to_json).collect())).collect())
}

pub fn mat_to_json(m: &Mat) -> Value {
    let mut out = Map::new();
    ring_fields(m.ring(), &mut out);
    out.insert("rows".into(), json!(m.rows()));
    out.insert("cols".into(), json!(m.cols()));
    out.insert("entries".into(), entries(m));
    Value::Object(out)
}

fn entries_from(ring: Ring, rows: usize, cols: usize, v: &Value) -> Result<Mat> {
    let list = as_array(v, "entries")?;
    if list.len() != rows {
        return Err(parse_err(format!("expected {rows} rows of entries, got {}", list.len())));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for row in list {
        let row = as_array(row, "an entry row")?;
        if row.len() != cols {
            return Err(parse_err(format!("expected rows of length {cols}, got {}", row.len())));
        }
        for x in row {
            data.push(scalar_from(x)?);
        }
    }
    Mat::from_scalars(ring, rows, cols, data)
}

pub fn mat_from_json(v: &Value) -> Result<Mat> {
    let ring = ring_from(v)?;
    let rows = as_usize(field(v, "rows")?, "rows")?;
    let cols = as_usize(field(v, "cols")?, "cols")?;
    entries_from(ring, rows, cols, field(v, "entries")?)
}

/// Inside a complex the ring is stated once, so matrices carry only their shape.
fn mat_in(ring: Ring, v: &Value) -> Result<Mat> {
    if v.get("ring").is_some() {
        let m = mat_from_json(v)?;
        if m.ring() != ring {
            return Err(Error::RingMismatch(ring, m.ring()));
        }
        return Ok(m);
    }
    let rows = as_usize(field(v, "rows")?, "rows")?;
    let cols = as_usize(field(v, "cols")?, "cols")?;
    entries_from(ring, rows, cols, field(v, "entries")?)
}

pub fn complex_to_json(c: &Complex) -> Value {
    let mut out = Map::new();
    ring_fields(c.ring(), &mut out);
    out.insert("lo".into(), json!(c.lo()));
    out.insert("hi".into(), json!(c.hi()));
    out.insert("ranks".into(), json!(c.ranks()));
    out.insert("diffs".into(), Value::Array((c.lo()..c.hi()).map(|n| mat_to_json(&c.diff(n))).collect()));
    Value::Object(out)
}

pub fn complex_from_json(v: &Value) -> Result<Complex> {
    let ring = ring_from(v)?;
    let lo = as_int(field(v, "lo")?, "lo")? as i32;
    let hi = as_int(field(v, "hi")?, "hi")? as i32;
    let ranks: Vec<usize> = as_array(field(v, "ranks")?, "ranks")?
        .iter()
        .map(|r| as_usize(r, "a rank"))
        .collect::<Result<_>>()?;
    if hi - lo + 1 != ranks.len() as i32 && !(ranks.is_empty() && hi < lo) {
        return Err(parse_err(format!("degrees {lo}..={hi} need {} ranks, got {}", (hi - lo + 1).max(0), ranks.len())));
    }
    let diffs: Vec<Mat> =
        as_array(field(v, "diffs")?, "diffs")?.iter().map(|d| mat_in(ring, d)).collect::<Result<_>>()?;
    Complex::new(ring, lo, ranks, diffs)
}

fn comps_to_json(comps: &BTreeMap<i32, Mat>) -> Value {
    let (Some(&lo), Some(&hi)) = (comps.keys().next(), comps.keys().next_back()) else {
        return json!({ "lo": 0, "comps": [] });
    };
    let list: Vec<Value> = (lo..=hi)
        .map(|n| match comps.get(&n) {
            Some(m) => mat_to_json(m),
            None => Value::Null,
        })
        .collect();
    json!({ "lo": lo, "comps": list })
}

/// Components listed from `lo`; `null` stands for a zero component.
fn comps_from(ring: Ring, v: &Value, shape: impl Fn(i32) -> (usize, usize)) -> Result<BTreeMap<i32, Mat>> {
    let lo = as_int(field(v, "lo")?, "lo")? as i32;
    let mut out = BTreeMap::new();
    for (i, m) in as_array(field(v, "comps")?, "comps")?.iter().enumerate() {
        let n = lo + i as i32;
        let m = if m.is_null() {
            let (r, c) = shape(n);
            Mat::zeros(ring, r, c)
        } else {
            mat_in(ring, m)?
        };
        out.insert(n, m);
    }
    Ok(out)
}

/// A map whose endpoints are known from context.
pub fn embedded_map_to_json(f: &ChainMap) -> Value {
    comps_to_json(f.components())
}

pub fn embedded_map_from_json(src: &Complex, dst: &Complex, v: &Value) -> Result<ChainMap> {
    let comps = comps_from(src.ring(), v, |n| (dst.rank(n), src.rank(n)))?;
    ChainMap::new(src.clone(), dst.clone(), comps)
}

pub fn chain_map_to_json(f: &ChainMap) -> Value {
    let mut out = as_object(&embedded_map_to_json(f), "map").expect("object").clone();
    out.insert("src".into(), complex_to_json(f.src()));
    out.insert("dst".into(), complex_to_json(f.dst()));
    Value::Object(out)
}

pub fn chain_map_from_json(v: &Value) -> Result<ChainMap> {
    let src = complex_from_json(field(v, "src")?)?;
    let dst = complex_from_json(field(v, "dst")?)?;
    embedded_map_from_json(&src, &dst, v)
}

pub fn homotopy_to_json(k: &Homotopy) -> Value {
    let mut out = as_object(&comps_to_json(k.components()), "homotopy").expect("object").clone();
    out.insert("src".into(), complex_to_json(k.src()));
    out.insert("dst".into(), complex_to_json(k.dst()));
    Value::Object(out)
}

pub fn homotopy_from_json(v: &Value) -> Result<Homotopy> {
    let src = complex_from_json(field(v, "src")?)?;
    let dst = complex_from_json(field(v, "dst")?)?;
    let comps = comps_from(src.ring(), v, |n| (dst.rank(n - 1), src.rank(n)))?;
    Homotopy::new(src, dst, comps)
}

pub fn roof_to_json(r: &Roof) -> Value {
    json!({
        "apex": complex_to_json(r.apex()),
        "src": complex_to_json(r.src()),
        "dst": complex_to_json(r.dst()),
        "s": embedded_map_to_json(r.s()),
        "f": embedded_map_to_json(r.f()),
    })
}

pub fn roof_from_json(v: &Value) -> Result<Roof> {
    let apex = complex_from_json(field(v, "apex")?)?;
    let src = complex_from_json(field(v, "src")?)?;
    let dst = complex_from_json(field(v, "dst")?)?;
    let s = embedded_map_from_json(&apex, &src, field(v, "s")?)?;
    let f = embedded_map_from_json(&apex, &dst, field(v, "f")?)?;
    Roof::new(s, f)
}

fn shape_to_json(kind: ShapeKind) -> Value {
    match kind {
        ShapeKind::Delta(n) => json!({ "kind": "delta", "n": n }),
        ShapeKind::Square => json!({ "kind": "box" }),
        ShapeKind::Corner => json!({ "kind": "corner" }),
        ShapeKind::ArDelta(n) => json!({ "kind": "ardelta", "n": n }),
    }
}

fn shape_from(v: &Value) -> Result<ShapeKind> {
    let n = || as_usize(field(v, "n")?, "n");
    match field(v, "kind")?.as_str() {
        Some("delta") => Ok(ShapeKind::Delta(n()?)),
        Some("box") => Ok(ShapeKind::Square),
        Some("corner") => Ok(ShapeKind::Corner),
        Some("ardelta") => Ok(ShapeKind::ArDelta(n()?)),
        _ => Err(parse_err("shape kind must be delta, box, corner or ardelta")),
    }
}

fn edge_label(shape: &Poset, a: usize, b: usize) -> String {
    format!("{}->{}", label(&shape.elements()[a]), label(&shape.elements()[b]))
}

pub fn diagram_to_json(d: &DiagComplex) -> Value {
    let shape = d.shape();
    let at: Map<String, Value> = shape
        .elements()
        .iter()
        .zip(d.complexes())
        .map(|(v, c)| (label(v), complex_to_json(c)))
        .collect();
    let along: Map<String, Value> =
        d.edges().iter().map(|(&(a, b), f)| (edge_label(shape, a, b), embedded_map_to_json(f))).collect();
    json!({ "shape": shape_to_json(shape.kind()), "at": at, "along": along })
}

pub fn diagram_from_json(v: &Value) -> Result<DiagComplex> {
    let shape = Poset::of_kind(shape_from(field(v, "shape")?)?);
    let at_json = as_object(field(v, "at")?, "at")?;
    let mut at = Vec::new();
    for e in shape.elements() {
        let c = at_json.get(&label(e)).ok_or_else(|| parse_err(format!("missing vertex \"{}\"", label(e))))?;
        at.push(complex_from_json(c)?);
    }
    let along_json = as_object(field(v, "along")?, "along")?;
    let mut along = BTreeMap::new();
    for (a, b) in shape.covers() {
        let name = edge_label(&shape, a, b);
        let f = along_json.get(&name).ok_or_else(|| parse_err(format!("missing edge \"{name}\"")))?;
        along.insert((a, b), embedded_map_from_json(&at[a], &at[b], f)?);
    }
    DiagComplex::new(shape, at, along)
}

pub fn sn_to_json(s: &SnObject) -> Value {
    let d = diagram_to_json(s.diagram());
    json!({ "n": s.n(), "cells": d["at"], "maps": d["along"] })
}

pub fn sn_from_json(v: &Value) -> Result<SnObject> {
    let n = as_usize(field(v, "n")?, "n")?;
    let d = json!({
        "shape": shape_to_json(ShapeKind::ArDelta(n)),
        "at": field(v, "cells")?,
        "along": field(v, "maps")?,
    });
    SnObject::new(diagram_from_json(&d)?)
}

pub fn filtration_to_json(f: &Filtration) -> Value {
    json!({
        "objects": f.objects().iter().map(complex_to_json).collect::<Vec<_>>(),
        "steps": f.steps().iter().map(embedded_map_to_json).collect::<Vec<_>>(),
    })
}

pub fn filtration_from_json(v: &Value) -> Result<Filtration> {
    let objects: Vec<Complex> =
        as_array(field(v, "objects")?, "objects")?.iter().map(complex_from_json).collect::<Result<_>>()?;
    let steps_json = as_array(field(v, "steps")?, "steps")?;
    if steps_json.len() + 1 != objects.len() && !objects.is_empty() {
        return Err(parse_err(format!("{} objects need {} steps", objects.len(), objects.len() - 1)));
    }
    let steps = steps_json
        .iter()
        .enumerate()
        .map(|(i, s)| embedded_map_from_json(&objects[i], &objects[i + 1], s))
        .collect::<Result<_>>()?;
    Filtration::new(objects, steps)
}

pub fn ext_to_json(e: &ExtObject) -> Value {
    json!({
        "a": complex_to_json(e.mono().src()),
        "c": complex_to_json(e.mono().dst()),
        "b": complex_to_json(e.epi().dst()),
        "mono": embedded_map_to_json(e.mono()),
        "epi": embedded_map_to_json(e.epi()),
    })
}

pub fn ext_from_json(v: &Value) -> Result<ExtObject> {
    let a = complex_from_json(field(v, "a")?)?;
    let c = complex_from_json(field(v, "c")?)?;
    let b = complex_from_json(field(v, "b")?)?;
    let mono = embedded_map_from_json(&a, &c, field(v, "mono")?)?;
    let epi = embedded_map_from_json(&c, &b, field(v, "epi")?)?;
    ExtObject::new(mono, epi)
}

fn group_to_json(free: usize, torsion: &[BigInt]) -> Value {
    let torsion: Vec<Value> = torsion.iter().map(|t| scalar_to_json(&Scalar::from_integer(t.clone()))).collect();
    json!({ "free": free, "torsion": torsion })
}

/// `{"H<n>": {"free": .., "torsion": [..]}}` for the given degrees.
pub fn homology_to_json(groups: &[(i32, HomologyGroup)]) -> Value {
    let out: Map<String, Value> =
        groups.iter().map(|(n, h)| (format!("H{n}"), group_to_json(h.free_rank, &h.torsion))).collect();
    Value::Object(out)
}

pub fn derived_hom_to_json(h: &DerivedHomGroup) -> Value {
    let mut out = as_object(&group_to_json(h.free_rank, &h.torsion), "group").expect("object").clone();
    out.insert(
        "representatives".into(),
        Value::Array(h.representatives.iter().map(embedded_map_to_json).collect()),
    );
    Value::Object(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z: Ring = Ring::Integers;

    #[test]
    fn matrix_round_trip() {
        let q = Ring::Rationals;
        let m = Mat::from_scalars(q, 1, 2, vec![Scalar::new(3.into(), 2.into()), Scalar::from_integer((-4).into())]).unwrap();
        let v = mat_to_json(&m);
        assert_eq!(v["entries"], json!([["3/2", -4]]));
        assert_eq!(mat_from_json(&v).unwrap(), m);
        let f = Mat::lit(Ring::PrimeField(7), &[&[6]]);
        assert_eq!(mat_to_json(&f)["p"], json!(7));
        assert_eq!(mat_from_json(&mat_to_json(&f)).unwrap(), f);
    }

    #[test]
    fn parse_versus_validation_errors() {
        assert!(matches!(mat_from_json(&json!({"ring": "Z", "rows": 1})), Err(Error::Parse(_))));
        let half = json!({"ring": "Z", "rows": 1, "cols": 1, "entries": [["1/2"]]});
        assert!(matches!(mat_from_json(&half), Err(Error::NotInRing { .. })));
        let bad = json!({
            "ring": "Z", "lo": 0, "hi": 2, "ranks": [1, 1, 1],
            "diffs": [{"rows": 1, "cols": 1, "entries": [[1]]}, {"rows": 1, "cols": 1, "entries": [[1]]}]
        });
        assert_eq!(complex_from_json(&bad).unwrap_err(), Error::NotAComplex { degree: 0 });
    }

    #[test]
    fn complex_and_map_round_trip() {
        let p = Complex::two_term(-1, Mat::lit(Z, &[&[2]]));
        let v = complex_to_json(&p);
        assert_eq!(v["lo"], json!(-1));
        assert_eq!(complex_from_json(&v).unwrap(), p);
        assert_eq!(complex_from_json(&complex_to_json(&Complex::zero(Z))).unwrap(), Complex::zero(Z));
        let f = ChainMap::identity(&p).scale(&Z.from_int(-3));
        assert_eq!(chain_map_from_json(&chain_map_to_json(&f)).unwrap(), f);
    }
}
