//! Field-data documents (JSON).
//!
//! Rationals are `"p/q"` strings (`"p"` for integers); integers are JSON
//! numbers when they fit in an `i64` and decimal strings otherwise. Units and
//! roots of unity are given in power-basis coordinates; the integral basis is
//! given as power-basis rows.

use std::path::Path;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use super::{FieldData, FieldError, FieldSpec, Place};
use crate::arith::rational::{fmt_rat, parse_rat, BigRat};
use crate::arith::roots::RootEnclosure;
use crate::arith::RatMatrix;

fn schema(msg: impl Into<String>) -> FieldError {
    FieldError::Schema(msg.into())
}

fn int_value(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

fn parse_int(v: &Value, what: &str) -> Result<BigInt, FieldError> {
    match v {
        Value::Number(x) => x
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| schema(format!("{what}: expected an integer"))),
        Value::String(s) => s.trim().parse().map_err(|_| schema(format!("{what}: bad integer {s:?}"))),
        _ => Err(schema(format!("{what}: expected an integer"))),
    }
}

fn parse_rat_value(v: &Value, what: &str) -> Result<BigRat, FieldError> {
    match v {
        Value::String(s) => parse_rat(s).map_err(|_| schema(format!("{what}: bad rational {s:?}"))),
        Value::Number(_) => Ok(BigRat::from_integer(parse_int(v, what)?)),
        _ => Err(schema(format!("{what}: expected a rational string"))),
    }
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>, FieldError> {
    v.as_array().ok_or_else(|| schema(format!("{what}: expected an array")))
}

fn get<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value, FieldError> {
    obj.get(key).ok_or_else(|| schema(format!("missing field {key:?}")))
}

fn rat_vec(v: &Value, what: &str) -> Result<Vec<BigRat>, FieldError> {
    array(v, what)?.iter().map(|x| parse_rat_value(x, what)).collect()
}

fn rat_pair(v: &Value, what: &str) -> Result<(BigRat, BigRat), FieldError> {
    let r = rat_vec(v, what)?;
    if r.len() != 2 || r[0] > r[1] {
        return Err(schema(format!("{what}: expected [lo, hi] with lo <= hi")));
    }
    Ok((r[0].clone(), r[1].clone()))
}

fn rats_value(v: &[BigRat]) -> Value {
    Value::Array(v.iter().map(|q| json!(fmt_rat(q))).collect())
}

/// Parses a document into an unverified field description.
pub fn parse_field_spec(text: &str) -> Result<FieldSpec, FieldError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| schema(format!("invalid JSON: {e}")))?;
    let obj = doc.as_object().ok_or_else(|| schema("document must be an object"))?;
    let degree = get(obj, "degree")?.as_u64().ok_or_else(|| schema("degree: expected a positive integer"))? as usize;
    let poly: Vec<BigInt> = array(get(obj, "poly")?, "poly")?
        .iter()
        .map(|x| parse_int(x, "poly"))
        .collect::<Result<_, _>>()?;
    if degree == 0 || poly.len() != degree + 1 {
        return Err(schema("poly must have degree + 1 coefficients (constant term first)"));
    }
    let basis: Vec<Vec<BigRat>> = array(get(obj, "integral_basis")?, "integral_basis")?
        .iter()
        .map(|r| rat_vec(r, "integral_basis"))
        .collect::<Result<_, _>>()?;
    if basis.len() != degree || basis.iter().any(|r| r.len() != degree) {
        return Err(schema("integral_basis must be degree rows of degree rationals"));
    }
    let disc = parse_int(get(obj, "disc")?, "disc")?;
    let class_reps: Vec<Vec<Vec<BigInt>>> = array(get(obj, "class_reps")?, "class_reps")?
        .iter()
        .map(|m| {
            array(m, "class_reps")?
                .iter()
                .map(|row| array(row, "class_reps")?.iter().map(|x| parse_int(x, "class_reps")).collect())
                .collect()
        })
        .collect::<Result<_, _>>()?;
    if class_reps.iter().any(|m: &Vec<Vec<BigInt>>| m.len() != degree || m.iter().any(|r| r.len() != degree)) {
        return Err(schema("class_reps must be degree x degree integer matrices"));
    }
    let binv = RatMatrix::from_rows(basis.clone())
        .inverse()
        .map_err(|_| FieldError::Invariant("integral basis is linearly dependent".into()))?;
    let to_integral = |c: Vec<BigRat>, what: &str| -> Result<Vec<BigRat>, FieldError> {
        if c.len() != degree {
            return Err(schema(format!("{what}: expected {degree} coordinates")));
        }
        Ok(RatMatrix::from_rows(vec![c]).mul(&binv).row(0).to_vec())
    };
    let fund_units: Vec<Vec<BigRat>> = array(get(obj, "fund_units")?, "fund_units")?
        .iter()
        .map(|u| to_integral(rat_vec(u, "fund_units")?, "fund_units"))
        .collect::<Result<_, _>>()?;
    let mu: Vec<Vec<BigRat>> = array(get(obj, "roots_of_unity")?, "roots_of_unity")?
        .iter()
        .map(|u| to_integral(rat_vec(u, "roots_of_unity")?, "roots_of_unity"))
        .collect::<Result<_, _>>()?;
    let places: Vec<Place> = array(get(obj, "root_enclosures")?, "root_enclosures")?
        .iter()
        .map(|p| {
            let o = p.as_object().ok_or_else(|| schema("root_enclosures: expected objects"))?;
            let re = rat_pair(get(o, "re")?, "re")?;
            let im = rat_pair(get(o, "im")?, "im")?;
            let ld = get(o, "local_degree")?.as_u64().ok_or_else(|| schema("local_degree: expected 1 or 2"))?;
            let enclosure = match ld {
                1 => {
                    if !(im.0.is_zero() && im.1.is_zero()) {
                        return Err(schema("real place must have im = [0, 0]"));
                    }
                    RootEnclosure::Real { lo: re.0, hi: re.1 }
                }
                2 => RootEnclosure::Complex { re, im },
                _ => return Err(schema("local_degree must be 1 or 2")),
            };
            Ok(Place { enclosure, local_degree: ld as u8 })
        })
        .collect::<Result<_, _>>()?;
    let label = match obj.get("label") {
        Some(Value::String(s)) => s.clone(),
        Some(_) => return Err(schema("label must be a string")),
        None => String::new(),
    };
    Ok(FieldSpec { label, poly, basis, disc, class_reps, fund_units, mu, places })
}

/// Parses and fully verifies a field-data document.
pub fn load_field_str(text: &str) -> Result<FieldData, FieldError> {
    FieldData::from_spec(parse_field_spec(text)?)
}

pub fn load_field(path: &Path) -> Result<FieldData, FieldError> {
    let text = std::fs::read_to_string(path).map_err(|e| schema(format!("cannot read {}: {e}", path.display())))?;
    let mut k = load_field_str(&text)?;
    if k.label.is_empty() {
        k.label = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    }
    Ok(k)
}

/// Serializes a field (with the units as originally supplied) to a document.
pub fn field_to_json(k: &FieldData) -> Value {
    let mut obj = Map::new();
    if !k.label.is_empty() {
        obj.insert("label".into(), json!(k.label));
    }
    obj.insert("degree".into(), json!(k.n));
    obj.insert("poly".into(), Value::Array(k.poly.iter().map(int_value).collect()));
    obj.insert("integral_basis".into(), Value::Array(k.basis.iter().map(|r| rats_value(r)).collect()));
    obj.insert("disc".into(), int_value(&k.disc));
    obj.insert(
        "class_reps".into(),
        Value::Array(
            k.class_reps
                .iter()
                .map(|h| Value::Array(h.mat.iter().map(|r| Value::Array(r.iter().map(int_value).collect())).collect()))
                .collect(),
        ),
    );
    obj.insert(
        "fund_units".into(),
        Value::Array(k.input_units.iter().map(|u| rats_value(&k.to_power_coords(u))).collect()),
    );
    obj.insert(
        "roots_of_unity".into(),
        Value::Array(k.mu.iter().map(|u| rats_value(&k.to_power_coords(u))).collect()),
    );
    let zero = BigRat::zero();
    obj.insert(
        "root_enclosures".into(),
        Value::Array(
            k.places
                .iter()
                .map(|p| {
                    let (re, im) = match &p.enclosure {
                        RootEnclosure::Real { lo, hi } => ((lo.clone(), hi.clone()), (zero.clone(), zero.clone())),
                        RootEnclosure::Complex { re, im } => (re.clone(), im.clone()),
                    };
                    json!({
                        "re": [fmt_rat(&re.0), fmt_rat(&re.1)],
                        "im": [fmt_rat(&im.0), fmt_rat(&im.1)],
                        "local_degree": p.local_degree,
                    })
                })
                .collect(),
        ),
    );
    Value::Object(obj)
}

pub fn field_to_string(k: &FieldData) -> String {
    let mut s = serde_json::to_string_pretty(&field_to_json(k)).expect("JSON serialization");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::quadratic_field;

    #[test]
    fn round_trip_is_exact() {
        for d in [-5i64, -1, 2, 10, 79] {
            let k = quadratic_field(d).unwrap();
            let s1 = field_to_string(&k);
            let k2 = load_field_str(&s1).unwrap();
            let s2 = field_to_string(&k2);
            assert_eq!(s1, s2, "d = {d}");
            assert_eq!(k2.class_number(), k.class_number());
            assert_eq!(k2.fund_units, k.fund_units);
        }
    }

    #[test]
    fn truncated_document_is_a_schema_error() {
        let k = quadratic_field(-1).unwrap();
        let s = field_to_string(&k);
        let cut = &s[..s.len() / 2];
        assert!(matches!(load_field_str(cut), Err(FieldError::Schema(_))));
        let mut v = field_to_json(&k);
        v.as_object_mut().unwrap().remove("disc");
        assert!(matches!(load_field_str(&v.to_string()), Err(FieldError::Schema(_))));
    }

    #[test]
    fn wrong_discriminant_is_rejected() {
        let k = quadratic_field(-1).unwrap();
        let mut v = field_to_json(&k);
        v["disc"] = json!(-8);
        assert!(matches!(load_field_str(&v.to_string()), Err(FieldError::Invariant(_))));
    }

    #[test]
    fn bad_unit_is_rejected() {
        let k = quadratic_field(2).unwrap();
        let mut v = field_to_json(&k);
        v["fund_units"] = json!([["3", "1"]]);
        assert!(matches!(load_field_str(&v.to_string()), Err(FieldError::Invariant(_))));
    }
}
