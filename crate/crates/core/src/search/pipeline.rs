//! The certified pipeline for positive unit rank. Logs of generators,
//! class norms and fundamental units are rounded to a common dyadic grid, so
//! every `r_u`, `r_{l,i,j}` and `r_P` is an exact `i128` multiple of `2^-F`
//! and every threshold comparison is exact.

use std::collections::BTreeMap;

use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::ball::Ball;
use crate::arith::log::log_ball;
use crate::arith::rational::{bits_for, dyadic_round, int, BigRat};
use crate::field::{FieldData, NFElem};
use crate::lattice::{build_s_approx, integer_points};

use super::fixed::Scale;
use super::packets::{class_data, packet_value, ClassData, Packet};
use super::{
    check_bound, check_disjoint, check_theta, sort_records, Counters, ElementRecord, Schedule, SearchError,
    SearchOutput,
};

fn overflow() -> SearchError {
    SearchError::Capacity("fixed-point overflow in log arithmetic".into())
}

/// A unit tuple that survived the removal test, with its approximate log vector.
struct UnitRow {
    n: Vec<i64>,
    lam: Vec<i128>,
    r_u: i128,
}

/// `Lambda~_u = sum_j n_j v_j` and `r_u = sum_i max(Lambda~_u,i, 0)`.
fn unit_row(n: &[i64], v: &[Vec<i128>]) -> Result<UnitRow, SearchError> {
    let places = v.first().map_or(0, |x| x.len());
    let mut lam = vec![0i128; places];
    for (nj, vj) in n.iter().zip(v) {
        if *nj == 0 {
            continue;
        }
        for (a, b) in lam.iter_mut().zip(vj) {
            *a = b.checked_mul(*nj as i128).and_then(|p| a.checked_add(p)).ok_or_else(overflow)?;
        }
    }
    let r_u = lam.iter().filter(|x| **x > 0).sum();
    Ok(UnitRow { n: n.to_vec(), lam, r_u })
}

/// Lists `L` and `L'` for a field of positive unit rank.
pub fn bounded_height_elements_r(k: &FieldData, bound: &BigRat, theta: &BigRat) -> Result<SearchOutput, SearchError> {
    check_bound(bound)?;
    check_theta(theta)?;
    let r = k.unit_rank();
    if r == 0 {
        return Err(SearchError::InvalidInput("unit rank 0: use the exact path".into()));
    }
    // (1)
    let t = theta / (int(3) * bound);
    let delta1 = &t / int(6 * r as i64 + 12);
    let half1 = &delta1 / int(2);
    let gb = bits_for(&delta1) + 3;
    let classes = class_data(k, bound)?;
    let n_tilde: Vec<BigRat> = classes
        .iter()
        .map(|c| {
            let l = log_ball(&Ball::exact(BigRat::from_integer(c.norm.clone())), &half1)?;
            debug_assert!(l.rad < half1);
            Ok(dyadic_round(&l.mid, gb))
        })
        .collect::<Result<_, SearchError>>()?;
    // (2): delta_1 approximations of Lambda(g) on the 2^-gb grid
    let gen_logs: Vec<Vec<Vec<BigRat>>> = classes
        .iter()
        .map(|c| {
            c.gens
                .par_iter()
                .map(|p| {
                    let l = k.lambda_vec(&p.g, &half1)?;
                    Ok(l.entries.iter().map(|e| dyadic_round(&e.mid, gb)).collect())
                })
                .collect::<Result<_, SearchError>>()
        })
        .collect::<Result<_, _>>()?;
    // (4): r_{l,i,j} on the coarse grid
    let gscale = Scale { bits: gb };
    let gen_fixed_g: Vec<Vec<Vec<i128>>> = gen_logs
        .iter()
        .map(|cl| cl.iter().map(|v| v.iter().map(|q| gscale.exact(q)).collect()).collect())
        .collect::<Result<Vec<Vec<Vec<i128>>>, SearchError>>()?;
    let n_fixed_g: Vec<i128> = n_tilde.iter().map(|q| gscale.exact(q)).collect::<Result<_, _>>()?;
    let pair_height = |l: usize, i: usize, j: usize, logs: &[Vec<Vec<i128>>], nt: &[i128]| -> i128 {
        let (si, sj) = (&logs[l][i], &logs[l][j]);
        si.iter().zip(sj).map(|(a, b)| *a.max(b)).sum::<i128>() - nt[l]
    };
    let mut max_r = 0i128;
    for (l, c) in classes.iter().enumerate() {
        for &(i, j) in &c.pairs {
            max_r = max_r.max(pair_height(l, i as usize, j as usize, &gen_fixed_g, &n_fixed_g));
        }
    }
    // (5)
    let log_b = log_ball(&Ball::exact(bound.clone()), &(&t / int(48)))?;
    let b = dyadic_round(&(&log_b.mid + &t / int(6)), gb);
    if !(&b - log_b.hi() > &t / int(12) && &b - log_b.lo() < &t / int(4)) {
        return Err(SearchError::Invariant("b misses its window around log B".into()));
    }
    let d_tilde = &b + &t / int(6) + gscale.to_rat(max_r);
    // (6)-(8)
    let sa = build_s_approx(k, &d_tilde, &t)?;
    let fb = gb.max(sa.frac_bits);
    let fs = Scale { bits: fb };
    let shift = fb - gb;
    let up = |x: i128| -> Result<i128, SearchError> { x.checked_mul(1i128 << shift).ok_or_else(overflow) };
    let gen_fixed: Vec<Vec<Vec<i128>>> = gen_fixed_g
        .iter()
        .map(|cl| cl.iter().map(|v| v.iter().map(|x| up(*x)).collect()).collect())
        .collect::<Result<Vec<Vec<Vec<i128>>>, SearchError>>()?;
    let n_fixed: Vec<i128> = n_fixed_g.iter().map(|x| up(*x)).collect::<Result<_, _>>()?;
    let v_fixed: Vec<Vec<i128>> = sa
        .unit_logs
        .iter()
        .map(|v| v.iter().map(|q| fs.exact(q)).collect())
        .collect::<Result<_, _>>()?;
    let schedule = Schedule {
        bound: bound.clone(),
        theta: theta.clone(),
        t: t.clone(),
        delta1: delta1.clone(),
        b: b.clone(),
        d_tilde: d_tilde.clone(),
        m: sa.m.clone(),
        lambda_tilde: sa.lambda_tilde.clone(),
        delta_tilde: sa.delta_tilde.clone(),
        big_m: sa.big_m.clone(),
        delta2: sa.delta2.clone(),
    };
    // (9)
    let u_all = integer_points(&sa.s, &sa.s_inv, &d_tilde)?;
    let big_m = sa.big_m.to_i64().unwrap_or(i64::MAX);
    if let Some(n) = u_all.iter().find(|n| n.iter().any(|x| x.abs() > big_m)) {
        return Err(SearchError::Invariant(format!("unit tuple {n:?} exceeds M = {}", sa.big_m)));
    }
    let mut counters = Counters {
        generators: classes.iter().map(|c| c.gens.len() as u64).sum(),
        pairs: classes.iter().map(|c| c.pairs.len() as u64).sum(),
        unit_tuples: u_all.len() as u64,
        ..Counters::default()
    };
    // (11)
    let th_u0 = fs.ceil(&(&b - int(5) * &t / int(12)))?;
    let th_u0p = fs.ceil(&(&b + &t / int(12)))?;
    let th_rm = fs.floor(&(&t / int(12) + &d_tilde))?;
    let rows: Vec<UnitRow> = u_all.par_iter().map(|n| unit_row(n, &v_fixed)).collect::<Result<_, _>>()?;
    let mut kept: Vec<UnitRow> = rows.into_iter().filter(|u| u.r_u <= th_rm).collect();
    kept.sort_by(|x, y| x.r_u.cmp(&y.r_u).then_with(|| x.n.cmp(&y.n)));
    let u0: Vec<usize> = (0..kept.len()).filter(|&i| kept[i].r_u < th_u0).collect();
    let u0p: Vec<usize> = (0..kept.len()).filter(|&i| kept[i].r_u >= th_u0 && kept[i].r_u < th_u0p).collect();
    // (12)
    let cw = fs.ceil(&(&b + &t / int(4)))?;
    let th_l0 = fs.floor(&(&b - int(7) * &t / int(12)))?;
    let th_l0p = cw;
    let tasks: Vec<(usize, usize, usize)> = classes
        .iter()
        .enumerate()
        .flat_map(|(l, c)| c.pairs.iter().map(move |&(i, j)| (l, i as usize, j as usize)))
        .collect();
    struct Hit {
        task: usize,
        unit: usize,
        r_p: i128,
        prime: bool,
    }
    let per_task: Vec<(u64, Vec<Hit>)> = tasks
        .par_iter()
        .enumerate()
        .map(|(ti, &(l, i, j))| {
            let r_lij = pair_height(l, i, j, &gen_fixed, &n_fixed);
            let (si, sj) = (&gen_fixed[l][i], &gen_fixed[l][j]);
            let nt = n_fixed[l];
            let mut cand = 0u64;
            let mut hits = Vec::new();
            for (ui, u) in kept.iter().enumerate() {
                if u.r_u - r_lij >= cw {
                    break;
                }
                cand += 1;
                let mut r_p = -nt;
                for ((lu, a), c) in u.lam.iter().zip(si).zip(sj) {
                    r_p += (lu + a).max(*c);
                }
                if r_p <= th_l0 {
                    hits.push(Hit { task: ti, unit: ui, r_p, prime: false });
                } else if r_p < th_l0p {
                    hits.push(Hit { task: ti, unit: ui, r_p, prime: true });
                }
            }
            (cand, hits)
        })
        .collect();
    counters.packet_candidates = per_task.iter().map(|(c, _)| *c).sum();
    // elements of K behind the candidates: 0, zeta u, zeta c(P) and zeta / c(P)
    let mu = k.mu.len() as u64;
    counters.search_space = 1 + mu * counters.unit_tuples + 2 * mu * counters.packet_candidates;
    let hits: Vec<Hit> = per_task.into_iter().flat_map(|(_, h)| h).collect();
    // (13): each distinct tuple is materialized once
    let mut need: BTreeMap<usize, bool> = BTreeMap::new();
    for &i in u0.iter().chain(&u0p) {
        need.entry(i).or_insert(false);
    }
    for h in &hits {
        need.insert(h.unit, true);
    }
    let need: Vec<(usize, bool)> = need.into_iter().collect();
    let cache: BTreeMap<usize, (NFElem, Option<NFElem>)> = need
        .par_iter()
        .map(|&(i, inv)| {
            let n = &kept[i].n;
            let u = k.unit_power(n);
            let ui = inv.then(|| k.unit_power(&n.iter().map(|x| -x).collect::<Vec<_>>()));
            (i, (u, ui))
        })
        .collect();
    // (14)
    let rad_u = &t / int(6);
    let rad_p = &t / int(3);
    let mut l_out = vec![ElementRecord::exact(k.zero(), BigRat::zero())];
    let mut lp_out = Vec::new();
    for (list, dest) in [(&u0, &mut l_out), (&u0p, &mut lp_out)] {
        for &i in list.iter() {
            let u = &cache[&i].0;
            let mid = fs.to_rat(kept[i].r_u);
            for z in &k.mu {
                dest.push(ElementRecord { x: k.mul(z, u), height_mid: mid.clone(), height_rad: rad_u.clone() });
            }
        }
    }
    // (15)
    let packet_recs: Vec<(bool, Vec<ElementRecord>)> = hits
        .par_iter()
        .map(|h| {
            let (l, i, j) = tasks[h.task];
            let (u, ui) = &cache[&h.unit];
            let p = Packet { l, i, j, n: kept[h.unit].n.clone() };
            let c = packet_value(&p, &classes, u, k);
            let ci = inverse_value(&p, &classes, ui.as_ref().expect("inverse cached"), k);
            let mid = fs.to_rat(h.r_p);
            let mut v = Vec::with_capacity(2 * k.mu.len());
            for z in &k.mu {
                v.push(ElementRecord { x: k.mul(z, &c), height_mid: mid.clone(), height_rad: rad_p.clone() });
                v.push(ElementRecord { x: k.mul(z, &ci), height_mid: mid.clone(), height_rad: rad_p.clone() });
            }
            (h.prime, v)
        })
        .collect();
    for (prime, v) in packet_recs {
        if prime {
            lp_out.extend(v);
        } else {
            l_out.extend(v);
        }
    }
    check_disjoint(&l_out, &lp_out)?;
    sort_records(&mut l_out);
    sort_records(&mut lp_out);
    Ok(SearchOutput {
        field: k.label.clone(),
        bound: bound.clone(),
        theta: theta.clone(),
        l: l_out,
        lprime: lp_out,
        schedule: Some(schedule),
        counters,
    })
}

/// `1 / c(P) = eps^{-n} g_j / g_i`.
fn inverse_value(p: &Packet, classes: &[ClassData], unit_inv: &NFElem, k: &FieldData) -> NFElem {
    let c = &classes[p.l];
    k.mul(&k.mul(unit_inv, &c.gens[p.j].g), &c.inverses[p.i])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;
    use crate::field::quadratic_field;

    #[test]
    fn sqrt2_small_bound() {
        let k = quadratic_field(2).unwrap();
        let out = bounded_height_elements_r(&k, &int(2), &rat(1, 100)).unwrap();
        assert!(out.l.iter().any(|e| e.x.is_zero()));
        let s = out.schedule.as_ref().unwrap();
        assert!(s.b > BigRat::zero());
        assert!(out.counters.search_space >= out.counters.unit_tuples);
    }
}
