//! Rational approximation of the unit matrix `S` with certified containment
//! of `S^{-1}` boxes, and exact enumeration of integer points in
//! `S~^{-1}([-d, d]^r)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::interval::FInterval;
use crate::arith::rational::{bits_for, ceil, dyadic_round, floor, int, min, pow2, sqrt_r_upper, BigRat};
use crate::arith::RatMatrix;
use crate::field::{FieldData, FieldError};

use super::enumerate::Ellipsoid;
use super::LatticeError;

/// `S~`, its exact inverse and the constants used to build it.
#[derive(Clone, Debug)]
pub struct SMatrixApprox {
    pub r: usize,
    /// `S~`: column `j` is `v_j` without its last coordinate.
    pub s: RatMatrix,
    pub s_inv: RatMatrix,
    /// `m >= r^2 max(|S|_sup, |S^{-1}|_sup)`.
    pub m: BigRat,
    /// Entrywise bound on `|v_j - Lambda(eps_j)|`; strictly below `delta2`.
    pub delta_used: BigRat,
    pub lambda_tilde: BigRat,
    pub delta_tilde: BigRat,
    pub big_m: BigInt,
    pub delta2: BigRat,
    /// `v_j`: the full `r + 1` coordinate approximations of `Lambda(eps_j)`.
    pub unit_logs: Vec<Vec<BigRat>>,
    /// Every entry of `unit_logs` is a multiple of `2^-frac_bits`.
    pub frac_bits: u32,
}

fn row_sum_norm(a: &RatMatrix, r: usize) -> BigRat {
    (0..r)
        .map(|i| (0..r).map(|j| a.get(i, j).abs()).sum::<BigRat>())
        .max()
        .unwrap_or_else(BigRat::zero)
}

fn s_from_logs(logs: &[Vec<BigRat>], r: usize) -> RatMatrix {
    RatMatrix::from_rows((0..r).map(|i| (0..r).map(|j| logs[j][i].clone()).collect()).collect())
}

/// Certified `m >= r^2 max(|S|_sup, |S^{-1}|_sup)`, from a coarse approximation.
///
/// With `S = S0 + E`, `|E_ij| < d0` and `eta = |S0^{-1}|_inf r d0 < 1`, the
/// Neumann series gives `|S^{-1} - S0^{-1}|_inf <= |S0^{-1}|_inf eta / (1 - eta)`.
pub fn certify_m(k: &FieldData) -> Result<BigRat, FieldError> {
    let r = k.unit_rank();
    let rr = int(r as i64);
    let mut d0 = pow2(-64);
    for _ in 0..16 {
        let logs: Vec<Vec<BigRat>> = k
            .fund_units
            .iter()
            .map(|u| k.lambda_vec(u, &d0).map(|l| l.entries.into_iter().map(|b| b.mid).collect()))
            .collect::<Result<_, _>>()?;
        let s0 = s_from_logs(&logs, r);
        if let Ok(inv0) = s0.inverse() {
            let inf = row_sum_norm(&inv0, r);
            let eta = &inf * &rr * &d0;
            if eta < BigRat::new(1.into(), 2.into()) {
                let inv_bound = inv0.sup_norm() + &inf * &eta / (BigRat::one() - &eta);
                let s_bound = s0.sup_norm() + &d0;
                let best = std::cmp::max(inv_bound, s_bound);
                return Ok(BigRat::from_integer(ceil(&(&rr * &rr * best))));
            }
        }
        d0 = &d0 * pow2(-64);
    }
    Err(FieldError::Precision("bounding the inverse unit matrix".into()))
}

/// Builds the schedule constants from `d~` and `t`, then the approximation `S~`
/// at entrywise accuracy `delta2`.
pub fn build_s_approx(k: &FieldData, d_tilde: &BigRat, t: &BigRat) -> Result<SMatrixApprox, FieldError> {
    let r = k.unit_rank();
    assert!(r >= 1, "unit matrix requires positive unit rank");
    let m = certify_m(k)?;
    build_with_m(k, d_tilde, t, m)
}

pub(crate) fn build_with_m(k: &FieldData, d_tilde: &BigRat, t: &BigRat, m: BigRat) -> Result<SMatrixApprox, FieldError> {
    let r = k.unit_rank();
    let rr = int(r as i64);
    let one = BigRat::one();
    let lambda_tilde = (t / int(12)) / (d_tilde * &rr * (&one + &m));
    let delta_tilde = min(
        &(&lambda_tilde / (&rr * &rr * (&m * &m + &m * &lambda_tilde))),
        &(&one / (&rr * &rr)),
    );
    let big_m = ceil(&(d_tilde * (&m + &lambda_tilde * sqrt_r_upper(r))));
    let delta2 = min(
        &delta_tilde,
        &((t / int(6)) / (&rr * int(r as i64 + 1) * BigRat::from_integer(big_m.clone()))),
    );
    let frac_bits = bits_for(&delta2) + 3;
    let half = &delta2 / int(2);
    let mut unit_logs = Vec::with_capacity(r);
    let mut worst = BigRat::zero();
    for u in &k.fund_units {
        let l = k.lambda_vec(u, &half)?;
        let mut v = Vec::with_capacity(r + 1);
        for b in &l.entries {
            let q = dyadic_round(&b.mid, frac_bits);
            let err = (&q - &b.mid).abs() + &b.rad;
            if err > worst {
                worst = err;
            }
            v.push(q);
        }
        unit_logs.push(v);
    }
    debug_assert!(worst < delta2);
    let s = s_from_logs(&unit_logs, r);
    let s_inv = s.inverse().map_err(|_| FieldError::Precision("inverting the unit matrix".into()))?;
    Ok(SMatrixApprox {
        r,
        s,
        s_inv,
        m,
        delta_used: worst,
        lambda_tilde,
        delta_tilde,
        big_m,
        delta2,
        unit_logs,
        frac_bits,
    })
}

/// Exact membership test `|(A n)_i| <= bound` for an integer matrix.
enum BoxTest {
    Small { a: Vec<Vec<i128>>, bound: i128 },
    Big { a: Vec<Vec<BigInt>>, bound: BigInt },
}

impl BoxTest {
    fn new(s: &RatMatrix, r: usize, d: &BigRat) -> BoxTest {
        let mut den = BigInt::one();
        for i in 0..r {
            for j in 0..r {
                den = den.lcm(s.get(i, j).denom());
            }
        }
        let dr = BigRat::from_integer(den.clone());
        let a: Vec<Vec<BigInt>> =
            (0..r).map(|i| (0..r).map(|j| (s.get(i, j) * &dr).to_integer()).collect()).collect();
        let bound = floor(&(d * &dr));
        let max_bits = a.iter().flatten().map(|x| x.bits()).max().unwrap_or(0);
        if max_bits < 80 && bound.bits() < 100 {
            BoxTest::Small {
                a: a.iter().map(|row| row.iter().map(|x| x.to_i128().unwrap()).collect()).collect(),
                bound: bound.to_i128().unwrap(),
            }
        } else {
            BoxTest::Big { a, bound }
        }
    }

    fn contains(&self, n: &[i64]) -> bool {
        match self {
            BoxTest::Small { a, bound } => a.iter().all(|row| {
                let mut acc: i128 = 0;
                for (x, &y) in row.iter().zip(n) {
                    match x.checked_mul(y as i128).and_then(|p| acc.checked_add(p)) {
                        Some(v) => acc = v,
                        None => return big_row(row, n).abs() <= BigInt::from(*bound),
                    }
                }
                acc.abs() <= *bound
            }),
            BoxTest::Big { a, bound } => a.iter().all(|row| {
                let s: BigInt = row.iter().zip(n).map(|(x, &y)| x * BigInt::from(y)).sum();
                s.abs() <= *bound
            }),
        }
    }
}

fn big_row(row: &[i128], n: &[i64]) -> BigInt {
    row.iter().zip(n).map(|(&x, &y)| BigInt::from(x) * BigInt::from(y)).sum()
}

/// All `n` in `Z^r` with `S~ n` in `[-d, d]^r`, sorted lexicographically.
///
/// Candidates come from the ellipsoid `|S~ n|^2 <= r d^2` clipped to the
/// coordinate bounds `|n_i| <= d sum_k |S~^{-1}_ik|`; membership is exact.
pub fn integer_points(s: &RatMatrix, s_inv: &RatMatrix, d: &BigRat) -> Result<Vec<Vec<i64>>, LatticeError> {
    let r = s.rows;
    if r == 0 {
        return Ok(vec![vec![]]);
    }
    let clip: Vec<i64> = (0..r)
        .map(|i| {
            let w: BigRat = (0..r).map(|k| s_inv.get(i, k).abs()).sum::<BigRat>() * d;
            floor(&w).to_i64().ok_or_else(|| LatticeError::Capacity("unit exponent range".into()))
        })
        .collect::<Result<_, _>>()?;
    let test = BoxTest::new(s, r, d);
    let st = s.transpose().mul(s);
    let gram: Vec<Vec<FInterval>> =
        (0..r).map(|i| (0..r).map(|j| FInterval::from_rat(st.get(i, j))).collect()).collect();
    let bound = FInterval::from_rat(&(int(r as i64) * d * d)).hi;
    let mut out: Vec<Vec<i64>> = match Ellipsoid::from_gram(&gram) {
        Ok(e) => {
            let tops = e.top_values(bound, false, Some(&clip))?;
            let parts: Vec<Result<Vec<Vec<i64>>, LatticeError>> = tops
                .par_iter()
                .map(|&top| {
                    let mut found = Vec::new();
                    e.enumerate_top(bound, false, Some(&clip), top, |x| {
                        if test.contains(x) {
                            found.push(x.to_vec());
                        }
                    })?;
                    Ok(found)
                })
                .collect();
            let mut all = Vec::new();
            for p in parts {
                all.extend(p?);
            }
            all
        }
        Err(_) => box_scan(&clip, &test)?,
    };
    out.sort();
    Ok(out)
}

fn box_scan(clip: &[i64], test: &BoxTest) -> Result<Vec<Vec<i64>>, LatticeError> {
    let total: f64 = clip.iter().map(|&c| 2.0 * c as f64 + 1.0).product();
    if total > 1.0e9 {
        return Err(LatticeError::Capacity(format!("box scan of {total:.3e} points")));
    }
    let r = clip.len();
    let mut out = Vec::new();
    let mut n: Vec<i64> = clip.iter().map(|c| -c).collect();
    loop {
        if test.contains(&n) {
            out.push(n.clone());
        }
        let mut i = 0;
        loop {
            if i == r {
                return Ok(out);
            }
            if n[i] < clip[i] {
                n[i] += 1;
                break;
            }
            n[i] = -clip[i];
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;
    use crate::field::quadratic_field;

    fn m(rows: &[&[BigRat]]) -> RatMatrix {
        RatMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect())
    }

    #[test]
    fn identity_box() {
        let s = RatMatrix::identity(3);
        let pts = integer_points(&s, &s, &int(1)).unwrap();
        assert_eq!(pts.len(), 27);
    }

    #[test]
    fn one_dimensional() {
        let s = m(&[&[rat(7, 4)]]);
        let pts = integer_points(&s, &s.inverse().unwrap(), &int(2)).unwrap();
        assert_eq!(pts, vec![vec![-1], vec![0], vec![1]]);
    }

    #[test]
    fn sheared_square_brute_force() {
        let s = m(&[&[int(1), int(1)], &[int(0), int(1)]]);
        let pts = integer_points(&s, &s.inverse().unwrap(), &int(1)).unwrap();
        let mut want = vec![];
        for a in -3i64..=3 {
            for b in -3i64..=3 {
                if (a + b).abs() <= 1 && b.abs() <= 1 {
                    want.push(vec![a, b]);
                }
            }
        }
        assert_eq!(pts, want);
        assert_eq!(pts.len(), 9);
    }

    #[test]
    fn sqrt2_schedule() {
        let k = quadratic_field(2).unwrap();
        let t = rat(1, 300);
        let sa = build_s_approx(&k, &int(2), &t).unwrap();
        // S = (log(sqrt2 - 1)) at the first place: |S| ~ 0.8814, 1/|S| ~ 1.1346
        let s = crate::arith::rational::to_f64(sa.s.get(0, 0));
        let tol = crate::arith::rational::to_f64(&sa.delta2);
        assert!((s.abs() - (1.0 + 2f64.sqrt()).ln()).abs() < tol, "{s} vs tolerance {tol}");
        assert!(sa.m >= rat(11346, 10000));
        assert!(sa.delta_used < sa.delta2);
        assert!(sa.delta2 <= sa.delta_tilde);
        let pts = integer_points(&sa.s, &sa.s_inv, &int(2)).unwrap();
        assert_eq!(pts, vec![vec![-2], vec![-1], vec![0], vec![1], vec![2]]);
    }
}
