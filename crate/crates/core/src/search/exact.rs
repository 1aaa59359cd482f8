//! Unit rank zero (`Q` and imaginary quadratic fields): every packet value has
//! height `max(N g_i, N g_j) / N(a) <= B`, so no height is approximated.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::arith::ball::Ball;
use crate::arith::log::log_ball;
use crate::arith::rational::{pow2, BigRat};
use crate::field::{FieldData, NFElem};

use super::packets::class_data;
use super::{check_bound, check_disjoint, sort_records, Counters, ElementRecord, SearchError, SearchOutput};

const LOG_BITS: i64 = 64;

fn log_record(h: &BigInt) -> Result<(BigRat, BigRat), SearchError> {
    if h == &BigInt::from(1) {
        return Ok((BigRat::zero(), BigRat::zero()));
    }
    let b = log_ball(&Ball::exact(BigRat::from_integer(h.clone())), &pow2(-LOG_BITS))?.round(LOG_BITS as u32 + 8);
    Ok((b.mid, b.rad))
}

/// The exact list for a field of unit rank 0, with exact integer heights
/// recorded as enclosures of their logarithms.
pub fn exact_r0(k: &FieldData, bound: &BigRat, theta: &BigRat) -> Result<SearchOutput, SearchError> {
    check_bound(bound)?;
    if k.unit_rank() != 0 {
        return Err(SearchError::InvalidInput("field has positive unit rank".into()));
    }
    let classes = class_data(k, bound)?;
    let mut heights: BTreeMap<BigInt, (BigRat, BigRat)> = BTreeMap::new();
    for c in &classes {
        for &(i, j) in &c.pairs {
            let h = std::cmp::max(&c.gens[i as usize].norm, &c.gens[j as usize].norm) / &c.norm;
            if !heights.contains_key(&h) {
                heights.insert(h.clone(), log_record(&h)?);
            }
        }
    }
    let mut l = vec![ElementRecord::exact(k.zero(), BigRat::zero())];
    l.extend(k.mu.iter().map(|z| ElementRecord::exact(z.clone(), BigRat::zero())));
    let mut counters = Counters::default();
    for c in &classes {
        counters.generators += c.gens.len() as u64;
        counters.pairs += c.pairs.len() as u64;
        let recs: Vec<ElementRecord> = c
            .pairs
            .par_iter()
            .flat_map_iter(|&(i, j)| {
                let (i, j) = (i as usize, j as usize);
                let h = std::cmp::max(&c.gens[i].norm, &c.gens[j].norm) / &c.norm;
                let (mid, rad) = heights[&h].clone();
                let cv = k.mul(&c.gens[i].g, &c.inverses[j]);
                let ci = k.mul(&c.gens[j].g, &c.inverses[i]);
                let mut v = Vec::with_capacity(2 * k.mu.len());
                for z in &k.mu {
                    v.push(ElementRecord { x: k.mul(z, &cv), height_mid: mid.clone(), height_rad: rad.clone() });
                    v.push(ElementRecord { x: k.mul(z, &ci), height_mid: mid.clone(), height_rad: rad.clone() });
                }
                v
            })
            .collect();
        l.extend(recs);
    }
    check_disjoint(&l, &[])?;
    sort_records(&mut l);
    counters.search_space = l.len() as u64;
    Ok(SearchOutput {
        field: k.label.clone(),
        bound: bound.clone(),
        theta: theta.clone(),
        l,
        lprime: vec![],
        schedule: None,
        counters,
    })
}

/// Every element of height at most `B` in an imaginary quadratic field.
pub fn bounded_height_iq(k: &FieldData, bound: &BigRat) -> Result<Vec<NFElem>, SearchError> {
    if !k.is_imaginary_quadratic() {
        return Err(SearchError::InvalidInput("field is not imaginary quadratic".into()));
    }
    let out = exact_r0(k, bound, &BigRat::from_integer(1.into()))?;
    Ok(out.l.into_iter().map(|e| e.x).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::int;
    use crate::field::{quadratic_field, rational_field};

    #[test]
    fn small_counts() {
        let q = rational_field();
        assert_eq!(exact_r0(&q, &int(10), &int(1)).unwrap().l.len(), 127);
        assert_eq!(exact_r0(&q, &int(2), &int(1)).unwrap().l.len(), 7);
        let k = quadratic_field(-1).unwrap();
        assert_eq!(bounded_height_iq(&k, &int(1)).unwrap().len(), 5);
        assert_eq!(bounded_height_iq(&k, &int(2)).unwrap().len(), 13);
        assert!(bounded_height_iq(&q, &int(2)).is_err());
    }
}
