//! Exact handling of `L'`: the real-quadratic rule (a rational height is an
//! integer, decided by place signs) and full resolution by exact comparison.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::arith::ball::Ball;
use crate::arith::log::log_ball;
use crate::arith::rational::{pow2, BigRat};
use crate::field::{FieldData, NFElem};
use crate::height::{compare_height, exact_height};

use super::{sort_records, ElementRecord, SearchError, SearchOutput};

fn log_record(x: NFElem, h: &BigRat) -> Result<ElementRecord, SearchError> {
    let l = log_ball(&Ball::exact(h.clone()), &pow2(-64))?.round(72);
    Ok(ElementRecord { x, height_mid: l.mid, height_rad: l.rad })
}

/// Moves every element of `L'` with rational (hence integral) height to `L`
/// when that height is at most `B` and drops it otherwise. Elements with
/// irrational height stay in `L'`.
pub fn refine_real_quadratic(mut out: SearchOutput, k: &FieldData) -> Result<SearchOutput, SearchError> {
    if !k.is_real_quadratic() {
        return Err(SearchError::InvalidInput("field is not real quadratic".into()));
    }
    if out.theta >= BigRat::new(1.into(), 2.into()) {
        return Err(SearchError::InvalidInput("refinement needs theta < 1/2".into()));
    }
    let decided: Vec<Option<BigRat>> = out
        .lprime
        .par_iter()
        .map(|e| exact_height(&e.x, k))
        .collect::<Result<_, _>>()?;
    let mut keep = Vec::new();
    for (e, h) in std::mem::take(&mut out.lprime).into_iter().zip(decided) {
        match h {
            Some(h) if h <= out.bound => {
                out.l.push(log_record(e.x, &h)?);
                out.counters.resolved_to_l += 1;
            }
            Some(_) => out.counters.dropped += 1,
            None => keep.push(e),
        }
    }
    out.lprime = keep;
    sort_records(&mut out.l);
    Ok(out)
}

/// `L'` split by exact comparison of `H_K(x)` with `B`.
#[derive(Clone, Debug, Default)]
pub struct Resolved {
    pub inside: Vec<NFElem>,
    pub outside: Vec<NFElem>,
    pub undecided: Vec<NFElem>,
}

impl Resolved {
    /// `L` together with the elements of `L'` shown to have height at most `B`.
    pub fn final_set(&self, out: &SearchOutput) -> Vec<NFElem> {
        let mut v: Vec<NFElem> = out.l.iter().map(|e| e.x.clone()).chain(self.inside.iter().cloned()).collect();
        v.sort();
        v
    }
}

/// Decides each element of `L'` exactly when possible, refining numerically
/// up to `max_prec` bits otherwise.
pub fn resolve_exact(out: &SearchOutput, k: &FieldData, max_prec: u32) -> Result<Resolved, SearchError> {
    let res: Vec<Option<Ordering>> = out
        .lprime
        .par_iter()
        .map(|e| {
            if e.x.is_zero() {
                return Ok(Some(Ordering::Less));
            }
            compare_height(&e.x, &out.bound, k, max_prec)
        })
        .collect::<Result<_, _>>()?;
    let mut r = Resolved::default();
    for (e, o) in out.lprime.iter().zip(res) {
        match o {
            Some(Ordering::Greater) => r.outside.push(e.x.clone()),
            Some(_) => r.inside.push(e.x.clone()),
            None => r.undecided.push(e.x.clone()),
        }
    }
    Ok(r)
}
