//! The unit log lattice: LLL reduction of fundamental units and nearest-plane
//! reduction of log vectors modulo the lattice.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::arith::interval::FInterval;
use crate::arith::rational::{dyadic_round, floor, pow2, rat, BigRat};
use crate::field::{FieldData, FieldError, NFElem};

use super::lll::{dot, lll_reduce};

/// Working surrogate precision (fractional bits) for unit logs.
pub const SURROGATE_BITS: u32 = 128;

/// Band around half-integers inside which nearest-plane rounding branches.
fn ambiguity_band() -> BigRat {
    pow2(-40)
}

const F64_BAND: f64 = 1.0 / (1u64 << 39) as f64;

/// Rational surrogates of `Lambda(eps_j)` (full `r + 1` coordinates) at 128 bits.
pub fn unit_log_surrogates(k: &FieldData, units: &[NFElem]) -> Result<Vec<Vec<BigRat>>, FieldError> {
    let delta = pow2(-(SURROGATE_BITS as i64) - 12);
    units
        .iter()
        .map(|u| {
            let l = k.lambda_vec(u, &delta)?;
            Ok(l.entries.iter().map(|b| dyadic_round(&b.mid, SURROGATE_BITS)).collect())
        })
        .collect()
}

/// LLL-reduces a system of fundamental units with respect to their log vectors.
pub fn reduce_units(k: &FieldData, units: &[NFElem]) -> Result<Vec<NFElem>, FieldError> {
    if units.len() <= 1 {
        return Ok(units.to_vec());
    }
    let logs = unit_log_surrogates(k, units)?;
    let (_, t) = lll_reduce(&logs).map_err(|_| FieldError::Invariant("fundamental units are dependent".into()))?;
    let r = units.len();
    (0..r)
        .map(|col| {
            let mut acc = k.one();
            for (i, u) in units.iter().enumerate() {
                let e = t[i][col].to_i64().ok_or_else(|| FieldError::Precision("unit transform".into()))?;
                if e != 0 {
                    acc = k.mul(&acc, &k.pow(u, e)?);
                }
            }
            Ok(acc)
        })
        .collect()
}

/// Gram-Schmidt data of the unit log lattice in `R^{r+1}`.
#[derive(Clone, Debug)]
pub struct UnitLattice {
    pub r: usize,
    /// `b_j`: surrogate of `Lambda(eps_j)`.
    pub logs: Vec<Vec<BigRat>>,
    /// `b*_j`.
    pub gs: Vec<Vec<BigRat>>,
    dual: Vec<Vec<BigRat>>,
    logs_f: Vec<Vec<FInterval>>,
    gs_f: Vec<Vec<FInterval>>,
    dual_f: Vec<Vec<FInterval>>,
}

impl UnitLattice {
    pub fn new(k: &FieldData) -> Result<UnitLattice, FieldError> {
        let r = k.unit_rank();
        let logs = unit_log_surrogates(k, &k.fund_units)?;
        let mut gs: Vec<Vec<BigRat>> = Vec::with_capacity(r);
        for j in 0..r {
            let mut v = logs[j].clone();
            for g in &gs {
                let c = dot(&logs[j], g) / dot(g, g);
                for (a, b) in v.iter_mut().zip(g) {
                    *a -= &c * b;
                }
            }
            gs.push(v);
        }
        let dual: Vec<Vec<BigRat>> = gs
            .iter()
            .map(|g| {
                let n2 = dot(g, g);
                g.iter().map(|x| x / &n2).collect()
            })
            .collect();
        let conv = |m: &Vec<Vec<BigRat>>| -> Vec<Vec<FInterval>> {
            m.iter().map(|v| v.iter().map(FInterval::from_rat).collect()).collect()
        };
        Ok(UnitLattice { r, logs_f: conv(&logs), gs_f: conv(&gs), dual_f: conv(&dual), logs, gs, dual })
    }

    /// Nearest-plane exponents for a target in the trace-zero hyperplane,
    /// decided with double intervals; `None` when a rounding is ambiguous.
    pub fn nearest_plane_f64(&self, w: &[FInterval]) -> Option<Vec<i64>> {
        let mut w = w.to_vec();
        let mut n = vec![0i64; self.r];
        for j in (0..self.r).rev() {
            let t = w.iter().zip(&self.dual_f[j]).fold(FInterval::point(0.0), |a, (x, y)| a + *x * *y);
            // a wider band than the exact path, so a decision here is never a
            // near-tie there
            let s = t + FInterval::new(0.5 - F64_BAND, 0.5 + F64_BAND);
            let (a, b) = (s.lo.floor(), s.hi.floor());
            if a != b || !a.is_finite() || a.abs() > 1.0e15 {
                return None;
            }
            let q = a as i64;
            n[j] = q;
            if q != 0 {
                let qf = FInterval::from_i64(q);
                for (x, y) in w.iter_mut().zip(&self.logs_f[j]) {
                    *x = *x - qf * *y;
                }
            }
        }
        Some(n)
    }

    /// Nearest-plane exponents with exact rationals; coordinates within the
    /// ambiguity band of a half-integer branch both ways.
    pub fn nearest_plane_exact(&self, w: &[BigRat]) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        let mut n = vec![0i64; self.r];
        if self.r == 0 {
            return vec![n];
        }
        self.np_rec(self.r - 1, w.to_vec(), &mut n, &mut out);
        out
    }

    fn np_rec(&self, j: usize, w: Vec<BigRat>, n: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        let t = dot(&w, &self.dual[j]);
        let fl = floor(&t);
        let frac = &t - BigRat::from_integer(fl.clone());
        let choices: Vec<BigInt> = if (&frac - rat(1, 2)).abs() < ambiguity_band() {
            vec![fl.clone(), &fl + 1]
        } else {
            vec![floor(&(&t + rat(1, 2)))]
        };
        for q in choices {
            let qi = q.to_i64().expect("unit exponent fits in i64");
            n[j] = qi;
            let qr = BigRat::from_integer(q);
            let w2: Vec<BigRat> = w.iter().zip(&self.logs[j]).map(|(a, b)| a - &qr * b).collect();
            if j == 0 {
                out.push(n.clone());
            } else {
                self.np_rec(j - 1, w2, n, out);
            }
        }
        n[j] = 0;
    }

    /// Upper bound for `T2(g) = sum_v n_v |g|_v^2` over all `g` whose centred log
    /// vector lies in the (slightly enlarged) Gram-Schmidt box, where the centre
    /// is `c (1, ..., 1)` with `c <= c_upper`.
    pub fn t2_bound(&self, local_degrees: &[u8], c_upper: f64) -> f64 {
        let r = self.r;
        let half = FInterval::point(0.5 + 1.0 / (1u64 << 20) as f64);
        let mut best = 0.0f64;
        for mask in 0u32..(1u32 << r) {
            let mut y = vec![FInterval::point(0.0); r + 1];
            for j in 0..r {
                let s = if mask >> j & 1 == 1 { half } else { -half };
                for (a, b) in y.iter_mut().zip(&self.gs_f[j]) {
                    *a = *a + s * *b;
                }
            }
            let mut total = FInterval::point(0.0);
            for (v, &nv) in local_degrees.iter().enumerate() {
                let nvf = FInterval::point(nv as f64);
                let e = ((FInterval::point(c_upper) + y[v]) * FInterval::point(2.0)).div(nvf).exp();
                total = total + nvf * e;
            }
            best = best.max(total.hi);
        }
        best
    }
}

/// Exponent vectors `n` such that `x * eps^{-n}` is nearest-plane reduced.
/// More than one vector is returned only for near-ties.
pub fn reduction_candidates(k: &FieldData, x: &NFElem) -> Result<Vec<Vec<i64>>, FieldError> {
    let ul = k.unit_lattice();
    let r = ul.r;
    if r == 0 {
        return Ok(vec![vec![]]);
    }
    if let Some(l) = k.lambda_f64(x) {
        let mean = l.iter().fold(FInterval::point(0.0), |a, b| a + *b).div(FInterval::point((r + 1) as f64));
        let w: Vec<FInterval> = l.iter().map(|v| *v - mean).collect();
        if let Some(n) = ul.nearest_plane_f64(&w) {
            return Ok(vec![n]);
        }
    }
    let l = k.lambda_vec(x, &pow2(-80))?;
    let mids: Vec<BigRat> = l.entries.iter().map(|b| b.mid.clone()).collect();
    let mean: BigRat = mids.iter().sum::<BigRat>() / BigRat::from_integer((r + 1).into());
    let w: Vec<BigRat> = mids.iter().map(|v| v - &mean).collect();
    Ok(ul.nearest_plane_exact(&w))
}
