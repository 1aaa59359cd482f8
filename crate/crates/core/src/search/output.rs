//! Result documents (JSON): field reference, bound, tolerance, schedule,
//! both lists with height enclosures, and counters. Every rational is a
//! `"p/q"` string and heights are logarithmic.

use num_traits::Signed;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::arith::rational::{fmt_rat, parse_rat, BigRat};
use crate::field::{FieldData, NFElem};
use crate::height::height;

use super::{Counters, ElementRecord, Schedule, SearchError, SearchOutput};

fn bad(msg: impl Into<String>) -> SearchError {
    SearchError::InvalidInput(format!("result document: {}", msg.into()))
}

pub fn record_json(e: &ElementRecord) -> Value {
    json!({
        "coords": e.x.coords().iter().map(fmt_rat).collect::<Vec<_>>(),
        "height_mid": fmt_rat(&e.height_mid),
        "height_rad": fmt_rat(&e.height_rad),
    })
}

fn counters_json(c: &Counters) -> Value {
    json!({
        "generators": c.generators,
        "pairs": c.pairs,
        "unit_tuples": c.unit_tuples,
        "packet_candidates": c.packet_candidates,
        "search_space": c.search_space,
        "resolved_to_l": c.resolved_to_l,
        "dropped": c.dropped,
    })
}

pub fn result_to_json(out: &SearchOutput) -> Value {
    let schedule = match &out.schedule {
        Some(s) => Value::Object(s.fields().into_iter().map(|(k, v)| (k.to_string(), json!(v))).collect()),
        None => Value::Null,
    };
    json!({
        "field": out.field,
        "B": fmt_rat(&out.bound),
        "theta": fmt_rat(&out.theta),
        "schedule": schedule,
        "L": out.l.iter().map(record_json).collect::<Vec<_>>(),
        "Lprime": out.lprime.iter().map(record_json).collect::<Vec<_>>(),
        "counters": counters_json(&out.counters),
    })
}

/// Deterministic text form (sorted keys, one trailing newline).
pub fn result_to_string(out: &SearchOutput) -> String {
    let mut s = serde_json::to_string_pretty(&result_to_json(out)).expect("JSON serialization");
    s.push('\n');
    s
}

fn rat_at(obj: &Map<String, Value>, key: &str) -> Result<BigRat, SearchError> {
    let s = obj.get(key).and_then(Value::as_str).ok_or_else(|| bad(format!("missing {key}")))?;
    parse_rat(s).map_err(|_| bad(format!("bad rational in {key}")))
}

fn parse_records(v: Option<&Value>, what: &str) -> Result<Vec<ElementRecord>, SearchError> {
    let arr = v.and_then(Value::as_array).ok_or_else(|| bad(format!("missing {what}")))?;
    arr.iter()
        .map(|r| {
            let o = r.as_object().ok_or_else(|| bad("element record must be an object"))?;
            let coords: Vec<BigRat> = o
                .get("coords")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("missing coords"))?
                .iter()
                .map(|c| c.as_str().and_then(|s| parse_rat(s).ok()).ok_or_else(|| bad("bad coordinate")))
                .collect::<Result<_, _>>()?;
            let rec = ElementRecord {
                x: NFElem::from_coords(&coords),
                height_mid: rat_at(o, "height_mid")?,
                height_rad: rat_at(o, "height_rad")?,
            };
            if rec.height_rad.is_negative() {
                return Err(bad("negative height radius"));
            }
            Ok(rec)
        })
        .collect()
}

fn parse_schedule(v: &Value) -> Result<Option<Schedule>, SearchError> {
    let Some(o) = v.as_object() else {
        return if v.is_null() { Ok(None) } else { Err(bad("schedule must be an object or null")) };
    };
    let big_m = o
        .get("M")
        .and_then(Value::as_str)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| bad("bad schedule M"))?;
    Ok(Some(Schedule {
        bound: rat_at(o, "B")?,
        theta: rat_at(o, "theta")?,
        t: rat_at(o, "t")?,
        delta1: rat_at(o, "delta1")?,
        b: rat_at(o, "b")?,
        d_tilde: rat_at(o, "d_tilde")?,
        m: rat_at(o, "m")?,
        lambda_tilde: rat_at(o, "lambda_tilde")?,
        delta_tilde: rat_at(o, "delta_tilde")?,
        big_m,
        delta2: rat_at(o, "delta2")?,
    }))
}

pub fn parse_result(text: &str) -> Result<SearchOutput, SearchError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| bad(format!("invalid JSON: {e}")))?;
    let o = doc.as_object().ok_or_else(|| bad("document must be an object"))?;
    let field = o.get("field").and_then(Value::as_str).ok_or_else(|| bad("missing field"))?.to_string();
    let c = o.get("counters").and_then(Value::as_object).ok_or_else(|| bad("missing counters"))?;
    let num = |k: &str| c.get(k).and_then(Value::as_u64).ok_or_else(|| bad(format!("bad counter {k}")));
    Ok(SearchOutput {
        field,
        bound: rat_at(o, "B")?,
        theta: rat_at(o, "theta")?,
        schedule: parse_schedule(o.get("schedule").unwrap_or(&Value::Null))?,
        l: parse_records(o.get("L"), "L")?,
        lprime: parse_records(o.get("Lprime"), "Lprime")?,
        counters: Counters {
            generators: num("generators")?,
            pairs: num("pairs")?,
            unit_tuples: num("unit_tuples")?,
            packet_candidates: num("packet_candidates")?,
            search_space: num("search_space")?,
            resolved_to_l: num("resolved_to_l")?,
            dropped: num("dropped")?,
        },
    })
}

/// Recomputes every height within `lambda` and checks it against the
/// recorded enclosure: `|h~ - mid| < rad + lambda` (or `<=` for exact records).
pub fn verify_result(out: &SearchOutput, k: &FieldData, lambda: &BigRat) -> Result<(), SearchError> {
    let all: Vec<&ElementRecord> = out.l.iter().chain(&out.lprime).collect();
    if let Some(e) = all.iter().find(|e| e.x.dim() != k.n) {
        return Err(bad(format!("element {:?} has the wrong dimension", e.x)));
    }
    all.par_iter().try_for_each(|e| {
        let h = height(&e.x, lambda, k)?;
        let diff = (&h.value - &e.height_mid).abs();
        if diff >= &e.height_rad + lambda {
            return Err(SearchError::Invariant(format!(
                "height of {:?} is {} but the record says {} +- {}",
                e.x,
                fmt_rat(&h.value),
                fmt_rat(&e.height_mid),
                fmt_rat(&e.height_rad)
            )));
        }
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, pow2, rat};
    use crate::field::quadratic_field;
    use crate::search::bounded_height_elements;

    #[test]
    fn round_trip_and_verify() {
        for d in [-1i64, 2] {
            let k = quadratic_field(d).unwrap();
            let out = bounded_height_elements(&k, &int(3), &rat(1, 100)).unwrap();
            let s = result_to_string(&out);
            let back = parse_result(&s).unwrap();
            assert_eq!(result_to_string(&back), s);
            verify_result(&back, &k, &pow2(-30)).unwrap();
        }
    }

    #[test]
    fn tampered_height_is_caught() {
        let k = quadratic_field(-1).unwrap();
        let mut out = bounded_height_elements(&k, &int(2), &rat(1, 100)).unwrap();
        let last = out.l.last_mut().unwrap();
        last.height_mid += rat(1, 10);
        assert!(verify_result(&out, &k, &pow2(-30)).is_err());
    }
}
