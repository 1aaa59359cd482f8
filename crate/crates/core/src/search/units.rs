//! Units of bounded height.

use std::cmp::Ordering;

use num_traits::Zero;
use rayon::prelude::*;

use crate::arith::ball::Ball;
use crate::arith::log::log_ball;
use crate::arith::rational::{bits_for, dyadic_round, int, rat, BigRat};
use crate::field::FieldData;
use crate::height::compare_height;
use crate::lattice::{build_s_approx, integer_points};

use super::fixed::Scale;
use super::{check_theta, sort_records, ElementRecord, SearchError};

/// Units with `H_K(u) <= D`, and units whose height could not be separated
/// from `D` by exact comparison.
#[derive(Clone, Debug)]
pub struct UnitsOutput {
    pub units: Vec<ElementRecord>,
    pub borderline: Vec<ElementRecord>,
}

/// Precision budget for deciding borderline units exactly.
const RESOLVE_BITS: u32 = 4096;

/// All `u` in `O_K^*` with `H_K(u) <= D`, using the working tolerance 1/100.
pub fn units_of_bounded_height(k: &FieldData, d: &BigRat) -> Result<UnitsOutput, SearchError> {
    units_with_tolerance(k, d, &rat(1, 100))
}

pub fn units_with_tolerance(k: &FieldData, d: &BigRat, theta: &BigRat) -> Result<UnitsOutput, SearchError> {
    if d < &int(1) {
        return Err(SearchError::InvalidInput("height bound for units must be at least 1".into()));
    }
    check_theta(theta)?;
    let mu: Vec<ElementRecord> = k.mu.iter().map(|z| ElementRecord::exact(z.clone(), BigRat::zero())).collect();
    if k.unit_rank() == 0 {
        let mut units = mu;
        sort_records(&mut units);
        return Ok(UnitsOutput { units, borderline: vec![] });
    }
    let t = theta / (int(3) * d);
    let log_d = log_ball(&Ball::exact(d.clone()), &(&t / int(48)))?;
    let gb = bits_for(&t) + 8;
    let b = dyadic_round(&(&log_d.mid + &t / int(6)), gb);
    if !(&b - log_d.hi() > &t / int(12) && &b - log_d.lo() < &t / int(4)) {
        return Err(SearchError::Invariant("b misses its window around log D".into()));
    }
    // b > log D + t/12 covers the box inflation
    let sa = build_s_approx(k, &b, &t)?;
    let fs = Scale { bits: sa.frac_bits.max(gb) };
    let v: Vec<Vec<i128>> =
        sa.unit_logs.iter().map(|x| x.iter().map(|q| fs.exact(q)).collect()).collect::<Result<_, _>>()?;
    let pts = integer_points(&sa.s, &sa.s_inv, &b)?;
    let th_in = fs.ceil(&(&b - int(5) * &t / int(12)))?;
    let th_border = fs.ceil(&(&b + &t / int(12)))?;
    let rows: Vec<(Vec<i64>, i128)> = pts
        .into_iter()
        .map(|n| {
            let mut lam = vec![0i128; k.places.len()];
            for (nj, vj) in n.iter().zip(&v) {
                for (a, x) in lam.iter_mut().zip(vj) {
                    *a = x
                        .checked_mul(*nj as i128)
                        .and_then(|p| a.checked_add(p))
                        .ok_or_else(|| SearchError::Capacity("fixed-point overflow".into()))?;
                }
            }
            let r_u: i128 = lam.iter().filter(|x| **x > 0).sum();
            Ok((n, r_u))
        })
        .collect::<Result<_, SearchError>>()?;
    let rad = &t / int(6);
    let classified: Vec<(Option<bool>, ElementRecord)> = rows
        .par_iter()
        .filter(|(_, r_u)| *r_u < th_border)
        .map(|(n, r_u)| {
            let u = k.unit_power(n);
            let rec = ElementRecord { x: u.clone(), height_mid: fs.to_rat(*r_u), height_rad: rad.clone() };
            if *r_u < th_in {
                return Ok((Some(true), rec));
            }
            let o = compare_height(&u, d, k, RESOLVE_BITS)?;
            Ok((o.map(|o| o != Ordering::Greater), rec))
        })
        .collect::<Result<_, SearchError>>()?;
    let mut units = Vec::new();
    let mut borderline = Vec::new();
    for (state, rec) in classified {
        let dest = match state {
            Some(true) => &mut units,
            Some(false) => continue,
            None => &mut borderline,
        };
        for z in &k.mu {
            dest.push(ElementRecord { x: k.mul(z, &rec.x), ..rec.clone() });
        }
    }
    sort_records(&mut units);
    sort_records(&mut borderline);
    Ok(UnitsOutput { units, borderline })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{quadratic_field, rational_field};

    #[test]
    fn sqrt2_closed_form() {
        let k = quadratic_field(2).unwrap();
        for (d, want) in [(6, 10), (2, 2), (50, 18), (1, 2)] {
            let out = units_of_bounded_height(&k, &int(d)).unwrap();
            assert_eq!(out.units.len(), want, "D = {d}");
            assert!(out.borderline.is_empty());
        }
    }

    #[test]
    fn rank_zero_and_bad_input() {
        let q = rational_field();
        assert_eq!(units_of_bounded_height(&q, &int(5)).unwrap().units.len(), 2);
        let g = quadratic_field(-1).unwrap();
        assert_eq!(units_of_bounded_height(&g, &int(100)).unwrap().units.len(), 4);
        assert!(units_of_bounded_height(&q, &rat(1, 2)).is_err());
    }
}
