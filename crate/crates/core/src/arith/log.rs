//! Certified natural logarithm and exponential.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::ball::Ball;
use super::rational::{bits_for, dyadic_round, log2_upper, pow2, round_up_small, BigRat};
use super::ArithError;

/// `atanh(z)` for exact rational `|z| <= 1/3`, radius below `2^-prec`.
fn atanh_small(z: &BigRat, prec: u32) -> Ball {
    debug_assert!(z.abs() * BigRat::from_integer(3.into()) <= BigRat::one());
    if z.is_zero() {
        return Ball::zero();
    }
    let w = prec + 8;
    let eps = pow2(-(w as i64));
    let z2 = Ball::exact(z * z).round(w + 4);
    let mut pw = Ball::exact(z.clone()).round(w + 4);
    let mut sum = Ball::zero();
    let mut k: u64 = 1;
    loop {
        let term_mid = dyadic_round(&(&pw.mid / BigRat::from_integer(k.into())), w + 4);
        let term_err = (&term_mid - &pw.mid / BigRat::from_integer(k.into())).abs();
        let term = Ball::new(term_mid, &pw.rad / BigRat::from_integer(k.into()) + term_err);
        sum = &sum + &term;
        let mag = pw.mid.abs() + &pw.rad;
        if mag < eps {
            // remaining tail <= |z|^k * |z|^2 / (1 - z^2) <= 2 |z|^k
            let tail = mag * BigRat::from_integer(2.into());
            sum.rad = round_up_small(&(&sum.rad + tail));
            break;
        }
        pw = (&pw * &z2).round(w + 4);
        k += 2;
    }
    sum.round(prec + 2)
}

static LN2: Mutex<Option<(u32, Ball)>> = Mutex::new(None);

/// Enclosure of `ln 2` with radius below `2^-prec`.
pub fn ln2(prec: u32) -> Ball {
    {
        let g = LN2.lock().unwrap();
        if let Some((p, b)) = g.as_ref() {
            if *p >= prec {
                return b.round(prec + 2);
            }
        }
    }
    let third = BigRat::new(BigInt::one(), BigInt::from(3));
    let b = atanh_small(&third, prec + 4).scale(&BigRat::from_integer(2.into()));
    let mut g = LN2.lock().unwrap();
    *g = Some((prec, b.clone()));
    b
}

/// Enclosure of `ln q` for exact rational `q > 0`, radius below `2^-prec`.
pub fn ln_rational(q: &BigRat, prec: u32) -> Result<Ball, ArithError> {
    if !q.is_positive() {
        return Err(ArithError::NonPositive);
    }
    if q.is_one() {
        return Ok(Ball::zero());
    }
    let mut k = q.numer().bits() as i64 - q.denom().bits() as i64;
    let mut y = q * pow2(-k);
    let three_quarters = BigRat::new(3.into(), 4.into());
    let three_halves = BigRat::new(3.into(), 2.into());
    while y > three_halves {
        y /= BigRat::from_integer(2.into());
        k += 1;
    }
    while y < three_quarters {
        y *= BigRat::from_integer(2.into());
        k -= 1;
    }
    let kbits = 64 - (k.unsigned_abs()).leading_zeros();
    let one = BigRat::one();
    let z = (&y - &one) / (&y + &one);
    let mut z_ball = atanh_small(&z, prec + 3).scale(&BigRat::from_integer(2.into()));
    if k != 0 {
        let l2 = ln2(prec + 3 + kbits);
        z_ball = &z_ball + &l2.scale(&BigRat::from_integer(k.into()));
    }
    Ok(z_ball.round(prec + 2))
}

/// Enclosure of `ln x` for every point of `x`; radius below `target` plus the
/// input's relative width contribution.
pub fn log_ball(x: &Ball, target: &BigRat) -> Result<Ball, ArithError> {
    if !target.is_positive() {
        return Err(ArithError::NonPositive);
    }
    let lo = x.lo();
    if !lo.is_positive() {
        return Err(ArithError::NeedsRefinement);
    }
    if x.is_exact() && x.mid.is_one() {
        return Ok(Ball::zero());
    }
    let p = bits_for(target) + 2;
    let l = ln_rational(&x.mid, p)?;
    if x.rad.is_zero() {
        return Ok(l);
    }
    // mean value theorem: |ln y - ln m| <= r / lo on the ball
    let prop = &x.rad / &lo;
    Ok(Ball::new(l.mid, round_up_small(&(&l.rad + prop))))
}

/// Enclosure of `exp q` for exact rational `q`, relative radius below `2^-prec`.
pub fn exp_rational(q: &BigRat, prec: u32) -> Ball {
    if q.is_zero() {
        return Ball::one();
    }
    // reduce to |y| <= 1/2
    let mut k: u32 = 0;
    let half = BigRat::new(1.into(), 2.into());
    while q.abs() * pow2(-(k as i64)) > half {
        k += 1;
    }
    let y = q * pow2(-(k as i64));
    let mag = log2_upper(q).max(0) as u32;
    let w = prec + 2 * k + mag + 16;
    let eps = pow2(-(w as i64));
    let yb = Ball::exact(y.clone()).round(w);
    let mut term = Ball::one();
    let mut sum = Ball::one();
    let mut i: u64 = 1;
    loop {
        term = (&term * &yb).round(w);
        let d = BigRat::from_integer(i.into());
        let mid = dyadic_round(&(&term.mid / &d), w);
        let err = (&mid - &term.mid / &d).abs();
        term = Ball::new(mid, &term.rad / &d + err);
        sum = &sum + &term;
        let m = term.mid.abs() + &term.rad;
        if m < eps {
            // geometric tail with ratio <= 1/2
            sum.rad = round_up_small(&(&sum.rad + &m * BigRat::from_integer(2.into())));
            break;
        }
        i += 1;
    }
    for _ in 0..k {
        sum = (&sum * &sum).round(w);
    }
    sum
}

/// Enclosure of `exp` over every point of `x`.
pub fn exp_ball(x: &Ball, prec: u32) -> Ball {
    if x.is_exact() {
        return exp_rational(&x.mid, prec);
    }
    let a = exp_rational(&x.lo(), prec);
    let b = exp_rational(&x.hi(), prec);
    Ball::from_interval(&a.lo(), &b.hi())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, parse_rat, rat, to_f64};

    // independent oracle: ln 2 = sum_{k>=1} 1/(k 2^k), evaluated exactly with
    // an explicit tail bound 1/(n 2^(n-1)).
    fn ln2_oracle(n: u32) -> (BigRat, BigRat) {
        let mut s = BigRat::zero();
        for k in 1..=n {
            s += BigRat::new(1.into(), BigInt::from(k) * (BigInt::one() << k as usize));
        }
        let tail = BigRat::new(1.into(), BigInt::from(n) * (BigInt::one() << (n as usize - 1)));
        (s.clone(), s + tail)
    }

    #[test]
    fn ln2_matches_oracle() {
        let (lo, hi) = ln2_oracle(200);
        let b = ln2(150);
        assert!(b.lo() <= hi && lo <= b.hi());
        assert!(b.rad < pow2(-150));
        assert!(b.contains(&lo) || b.contains(&hi) || (b.lo() >= lo && b.hi() <= hi));
    }

    #[test]
    fn log_of_one_is_exact_zero() {
        assert_eq!(log_ball(&Ball::one(), &rat(1, 10)).unwrap(), Ball::zero());
    }

    #[test]
    fn log_two_with_input_radius() {
        let x = Ball::new(int(2), rat(1, 100_000_000));
        let l = log_ball(&x, &rat(1, 1_000_000)).unwrap();
        assert!(l.rad < rat(1, 1_000_000) + rat(1, 100_000_000) * rat(10, 19));
        let (lo, hi) = ln2_oracle(80);
        assert!(l.contains(&lo) && l.contains(&hi));
    }

    #[test]
    fn log_interval_monotone_containment() {
        let x = Ball::from_interval(&int(2), &int(3));
        let l = log_ball(&x, &rat(1, 1000)).unwrap();
        assert!(to_f64(&l.lo()) <= 2f64.ln() && to_f64(&l.hi()) >= 3f64.ln());
    }

    #[test]
    fn log_touching_zero_needs_refinement() {
        let x = Ball::new(rat(1, 2), rat(1, 2));
        assert!(matches!(log_ball(&x, &rat(1, 10)), Err(ArithError::NeedsRefinement)));
    }

    #[test]
    fn ln_rational_against_f64() {
        for s in ["3", "1/7", "1000000007", "22/7", "1/123456789"] {
            let q = parse_rat(s).unwrap();
            let b = ln_rational(&q, 80).unwrap();
            assert!((to_f64(&b.mid) - to_f64(&q).ln()).abs() < 1e-14);
            assert!(b.rad < pow2(-80));
        }
    }

    #[test]
    fn exp_log_round_trip() {
        let q = rat(7, 3);
        let e = exp_rational(&q, 100);
        let l = log_ball(&e, &pow2(-90)).unwrap();
        assert!(l.contains(&q));
        let e1 = exp_rational(&int(1), 60);
        assert!((to_f64(&e1.mid) - std::f64::consts::E).abs() < 1e-15);
        let en = exp_rational(&int(-20), 60);
        assert!((to_f64(&en.mid) / (-20f64).exp() - 1.0).abs() < 1e-12);
    }
}
