//! Certified logarithmic heights.
//!
//! `h_K(a/b) = -log N((a, b)) + sum_v max(n_v log|a|_v, n_v log|b|_v)` for
//! nonzero integral `a`, `b`; every approximation below comes with a rational
//! error bound.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::ball::Ball;
use crate::arith::log::log_ball;
use crate::arith::rational::{int, BigRat};
use crate::arith::ArithError;
use crate::field::{FieldData, FieldError, NFElem};
use crate::ideals::{ideal_from_gens, ideal_norm, IdealError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HeightError {
    #[error("height of zero requested")]
    ZeroElement,
    #[error("unit exponent {0} exceeds the bound {1}")]
    ExponentOutOfRange(i64, BigInt),
    #[error("unit log data too coarse: error {0} is not below {1}")]
    CoarseData(String, String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// A rational `value` with `|h - value| < bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightApprox {
    pub value: BigRat,
    pub bound: BigRat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certified {
    Below,
    Above,
    Indeterminate,
}

pub fn cmp_certified(h: &HeightApprox, threshold: &BigRat) -> Certified {
    if &(&h.value + &h.bound) <= threshold {
        Certified::Below
    } else if &(&h.value - &h.bound) >= threshold {
        Certified::Above
    } else {
        Certified::Indeterminate
    }
}

/// `h_K(alpha / beta)` within `lambda`, with each input approximated to
/// `lambda / (r + 2)`.
pub fn height_pair(alpha: &NFElem, beta: &NFElem, lambda: &BigRat, k: &FieldData) -> Result<HeightApprox, HeightError> {
    if alpha.is_zero() || beta.is_zero() {
        return Err(HeightError::ZeroElement);
    }
    if !alpha.is_integral() || !beta.is_integral() {
        return Err(HeightError::Ideal(IdealError::NotIntegral));
    }
    let r = k.unit_rank();
    let delta = lambda / int(r as i64 + 2);
    let nab = ideal_norm(&ideal_from_gens(&[alpha.clone(), beta.clone()], k)?);
    let n_tilde = log_ball(&Ball::exact(BigRat::from_integer(nab)), &delta)?;
    let s = k.lambda_vec(alpha, &delta)?;
    let t = k.lambda_vec(beta, &delta)?;
    let mut value = -n_tilde.mid;
    for (a, b) in s.entries.iter().zip(&t.entries) {
        value += std::cmp::max(&a.mid, &b.mid);
    }
    Ok(HeightApprox { value, bound: lambda.clone() })
}

/// Splits `x` as `alpha / beta` with `alpha` integral and `beta` a positive integer.
pub fn integral_split(x: &NFElem) -> (NFElem, NFElem) {
    let n = x.dim();
    let alpha = NFElem::from_ints(x.num().to_vec());
    let beta = NFElem::from_rat(n, &BigRat::from_integer(x.den().clone()));
    (alpha, beta)
}

/// `h_K(x)` within `lambda`; `h_K(0) = 0`.
pub fn height(x: &NFElem, lambda: &BigRat, k: &FieldData) -> Result<HeightApprox, HeightError> {
    if x.is_zero() {
        return Ok(HeightApprox { value: BigRat::zero(), bound: lambda.clone() });
    }
    let (a, b) = integral_split(x);
    height_pair(&a, &b, lambda, k)
}

/// `h_K(eps^n)` within `lambda` from approximations `logs[j]` of
/// `Lambda(eps_j)` whose entries are within `log_err` of the true values.
pub fn unit_height_from_tuple(
    n: &[i64],
    logs: &[Vec<BigRat>],
    log_err: &BigRat,
    big_m: &BigInt,
    lambda: &BigRat,
) -> Result<HeightApprox, HeightError> {
    let r = n.len();
    if let Some(&e) = n.iter().find(|e| BigInt::from(e.abs()) > *big_m) {
        return Err(HeightError::ExponentOutOfRange(e, big_m.clone()));
    }
    if r == 0 {
        return Ok(HeightApprox { value: BigRat::zero(), bound: lambda.clone() });
    }
    let need = lambda / (int(r as i64) * int(r as i64 + 1) * BigRat::from_integer(big_m.clone()));
    if log_err >= &need {
        return Err(HeightError::CoarseData(log_err.to_string(), need.to_string()));
    }
    let places = logs[0].len();
    let mut value = BigRat::zero();
    for i in 0..places {
        let s: BigRat = n.iter().zip(logs).map(|(&e, v)| int(e) * &v[i]).sum();
        if s.is_positive() {
            value += s;
        }
    }
    Ok(HeightApprox { value, bound: lambda.clone() })
}

/// `N((alpha, beta))` for nonzero integral `alpha` and a positive integer `beta`.
fn content_norm(alpha: &NFElem, beta: &BigInt, k: &FieldData) -> Result<BigInt, HeightError> {
    if beta.is_one() {
        return Ok(BigInt::one());
    }
    let b = k.from_rat(&BigRat::from_integer(beta.clone()));
    Ok(ideal_norm(&ideal_from_gens(&[alpha.clone(), b], k)?))
}

/// Exact `H_K(x)` when it is rational and this can be decided: always for
/// `n = 1` and imaginary quadratic fields; otherwise when every place
/// compares strictly with the denominator on the same side.
pub fn exact_height(x: &NFElem, k: &FieldData) -> Result<Option<BigRat>, HeightError> {
    if x.is_zero() {
        return Ok(Some(BigRat::one()));
    }
    let (alpha, _) = integral_split(x);
    let beta = x.den().clone();
    let nab = content_norm(&alpha, &beta, k)?;
    let n = k.n;
    if n == 1 {
        let a = x.num()[0].abs();
        return Ok(Some(BigRat::from_integer(std::cmp::max(a, beta))));
    }
    let bn = num_traits::pow(beta.clone(), n);
    let na = k.norm(&alpha).abs();
    if k.is_imaginary_quadratic() {
        let top = std::cmp::max(na, BigRat::from_integer(bn));
        return Ok(Some(top / BigRat::from_integer(nab)));
    }
    if let Some(q) = x.as_rational() {
        // every |x|_v equals |q|
        let m = std::cmp::max(q.numer().abs(), q.denom().clone());
        return Ok(Some(BigRat::from_integer(num_traits::pow(m, n))));
    }
    match place_sides(&alpha, &beta, k, 1024)? {
        Some(sides) if sides.iter().all(|s| *s == Ordering::Greater) => {
            Ok(Some(na / BigRat::from_integer(nab)))
        }
        Some(sides) if sides.iter().all(|s| *s == Ordering::Less) => {
            Ok(Some(BigRat::from_integer(bn) / BigRat::from_integer(nab)))
        }
        _ => Ok(None),
    }
}

/// Sign of `|alpha|_v - beta` at every place, refining up to `max_prec` bits.
fn place_sides(alpha: &NFElem, beta: &BigInt, k: &FieldData, max_prec: u32) -> Result<Option<Vec<Ordering>>, HeightError> {
    let b = BigRat::from_integer(beta.clone());
    let mut prec = 64 + alpha.max_bits() as u32;
    while prec <= max_prec + alpha.max_bits() as u32 {
        let vals = k.abs_pow(alpha, prec);
        let mut out = Vec::with_capacity(vals.len());
        for (v, p) in vals.iter().zip(&k.places) {
            let bv = if p.local_degree == 1 { b.clone() } else { &b * &b };
            match (v - &Ball::exact(bv)).sign() {
                Some(o) => out.push(o),
                None => break,
            }
        }
        if out.len() == vals.len() {
            return Ok(Some(out));
        }
        prec *= 2;
    }
    Ok(None)
}

/// Decides `H_K(x)` against a rational bound: exactly when the height is
/// rational and detectable, otherwise by refinement up to `max_prec` bits.
/// `None` when the refinement budget runs out.
pub fn compare_height(x: &NFElem, bound: &BigRat, k: &FieldData, max_prec: u32) -> Result<Option<Ordering>, HeightError> {
    if let Some(h) = exact_height(x, k)? {
        return Ok(Some(h.cmp(bound)));
    }
    let (alpha, _) = integral_split(x);
    let beta = x.den().clone();
    let nab = BigRat::from_integer(content_norm(&alpha, &beta, k)?);
    let b = BigRat::from_integer(beta);
    let mut prec = 64 + alpha.max_bits() as u32;
    while prec <= max_prec + alpha.max_bits() as u32 {
        let vals = k.abs_pow(&alpha, prec);
        let mut prod = Ball::one();
        for (v, p) in vals.iter().zip(&k.places) {
            let bv = Ball::exact(if p.local_degree == 1 { b.clone() } else { &b * &b });
            prod = (&prod * &v.max(&bv)).round(prec + 16);
        }
        let target = Ball::exact(bound * &nab);
        if let Some(o) = (&prod - &target).sign() {
            return Ok(Some(o));
        }
        prec *= 2;
    }
    Ok(None)
}

/// `max(N(g_i), N(g_j)) / N(a)` for an imaginary quadratic (or rational)
/// packet; this is `H_K(g_i / g_j)` when `(g_i, g_j) = a`.
pub fn packet_height_r0(ni: &BigInt, nj: &BigInt, na: &BigInt) -> BigInt {
    let (q, rem) = std::cmp::max(ni, nj).div_rem(na);
    debug_assert!(rem.is_zero());
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{pow2, rat, to_f64};
    use crate::field::{quadratic_field, rational_field};

    fn close(h: &HeightApprox, want: f64) -> bool {
        (to_f64(&h.value) - want).abs() <= to_f64(&h.bound) + 1e-12
    }

    #[test]
    fn heights_of_one_are_zero() {
        let k = quadratic_field(5).unwrap();
        let h = height_pair(&k.one(), &k.one(), &pow2(-30), &k).unwrap();
        assert_eq!(h.value, BigRat::zero());
    }

    #[test]
    fn rational_and_gaussian_examples() {
        let q = rational_field();
        let h = height_pair(&q.one(), &q.from_int(2), &rat(1, 1_000_000), &q).unwrap();
        assert!(close(&h, 2f64.ln()));
        let k = quadratic_field(-1).unwrap();
        let h = height_pair(&NFElem::from_i64s(&[1, 1]), &k.one(), &rat(1, 1_000_000), &k).unwrap();
        assert!(close(&h, 2f64.ln()));
    }

    #[test]
    fn unit_heights_sqrt2() {
        let k = quadratic_field(2).unwrap();
        let eps = &k.fund_units[0];
        let lam = pow2(-20);
        let big_m = BigInt::from(4);
        let err = &lam / int(2 * 2 * 4 * 2);
        let logs: Vec<Vec<BigRat>> =
            vec![k.lambda_vec(eps, &err).unwrap().entries.into_iter().map(|b| b.mid).collect()];
        let eps_f = (1.0 + 2f64.sqrt()).ln();
        for e in [0i64, 1, 2, -3] {
            let h = unit_height_from_tuple(&[e], &logs, &err, &big_m, &lam).unwrap();
            assert!(close(&h, e.abs() as f64 * eps_f), "n = {e}");
            let direct = height(&k.pow(eps, e).unwrap(), &lam, &k).unwrap();
            assert!((to_f64(&direct.value) - to_f64(&h.value)).abs() < 2.0 * to_f64(&lam));
        }
        assert!(matches!(
            unit_height_from_tuple(&[5], &logs, &err, &big_m, &lam),
            Err(HeightError::ExponentOutOfRange(5, _))
        ));
    }

    #[test]
    fn certified_comparisons() {
        let h = HeightApprox { value: int(1), bound: rat(1, 10) };
        assert_eq!(cmp_certified(&h, &int(2)), Certified::Below);
        assert_eq!(cmp_certified(&h, &rat(105, 100)), Certified::Indeterminate);
        let h3 = HeightApprox { value: int(3), bound: rat(1, 10) };
        assert_eq!(cmp_certified(&h3, &int(2)), Certified::Above);
    }

    #[test]
    fn exact_heights_in_quadratic_fields() {
        let k = quadratic_field(-1).unwrap();
        // H(1 + i) = 2, H((1 + i)/3) = max(2, 9) = 9
        let x = NFElem::from_i64s(&[1, 1]);
        assert_eq!(exact_height(&x, &k).unwrap(), Some(int(2)));
        let y = x.scale(&rat(1, 3));
        assert_eq!(exact_height(&y, &k).unwrap(), Some(int(9)));
        let r = quadratic_field(2).unwrap();
        // 3 has height 9; 1 + sqrt 2 has irrational height
        assert_eq!(exact_height(&r.from_int(3), &r).unwrap(), Some(int(9)));
        assert_eq!(exact_height(&r.fund_units[0], &r).unwrap(), None);
        assert_eq!(compare_height(&r.fund_units[0], &rat(5, 2), &r, 512).unwrap(), Some(Ordering::Less));
        assert_eq!(compare_height(&r.fund_units[0], &rat(12, 5), &r, 512).unwrap(), Some(Ordering::Greater));
        assert_eq!(compare_height(&r.from_int(3), &int(9), &r, 512).unwrap(), Some(Ordering::Equal));
    }
}
