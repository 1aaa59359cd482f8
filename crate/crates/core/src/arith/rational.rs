//! Helpers on exact rationals: parsing, rounding to dyadic grids, bit sizes.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ArithError;

pub type BigRat = BigRational;

pub fn rat(n: i64, d: i64) -> BigRat {
    BigRat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRat {
    BigRat::from_integer(BigInt::from(n))
}

pub fn from_bigint(n: BigInt) -> BigRat {
    BigRat::from_integer(n)
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rat(s: &str) -> Result<BigRat, ArithError> {
    let s = s.trim();
    let bad = || ArithError::Parse(s.to_string());
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRat::new(p, q))
        }
        None => Ok(from_bigint(s.parse().map_err(|_| bad())?)),
    }
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn fmt_rat(q: &BigRat) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn floor(q: &BigRat) -> BigInt {
    q.numer().div_floor(q.denom())
}

pub fn ceil(q: &BigRat) -> BigInt {
    -((-q.numer()).div_floor(q.denom()))
}

pub fn pow2(e: i64) -> BigRat {
    if e >= 0 {
        from_bigint(BigInt::one() << (e as usize))
    } else {
        BigRat::new(BigInt::one(), BigInt::one() << ((-e) as usize))
    }
}

/// Largest multiple of `2^-prec` that is `<= q`.
pub fn dyadic_floor(q: &BigRat, prec: u32) -> BigRat {
    let n = (q.numer() << prec as usize).div_floor(q.denom());
    BigRat::new(n, BigInt::one() << prec as usize)
}

/// Smallest multiple of `2^-prec` that is `>= q`.
pub fn dyadic_ceil(q: &BigRat, prec: u32) -> BigRat {
    let n = -((-(q.numer() << prec as usize)).div_floor(q.denom()));
    BigRat::new(n, BigInt::one() << prec as usize)
}

/// Nearest multiple of `2^-prec` (ties toward +infinity).
pub fn dyadic_round(q: &BigRat, prec: u32) -> BigRat {
    if q.denom().bits() <= prec as u64 + 1 && is_dyadic(q) {
        return q.clone();
    }
    let scaled = (q.numer() << (prec as usize + 1)).div_floor(q.denom());
    let n = (scaled + 1u32) >> 1usize;
    BigRat::new(n, BigInt::one() << prec as usize)
}

pub fn is_dyadic(q: &BigRat) -> bool {
    let d = q.denom();
    d.is_one() || (d.trailing_zeros() == Some(d.bits() - 1))
}

/// Rational upper bound for `r` with a mantissa of at most 30 bits.
pub fn round_up_small(r: &BigRat) -> BigRat {
    if r.is_zero() {
        return r.clone();
    }
    debug_assert!(r.is_positive());
    let e = r.numer().bits() as i64 - r.denom().bits() as i64 - 30;
    // ceil(r * 2^-e) * 2^e
    let (num, den) = if e >= 0 {
        (r.numer().clone(), r.denom() << e as usize)
    } else {
        (r.numer() << (-e) as usize, r.denom().clone())
    };
    let m = -((-num).div_floor(&den));
    BigRat::from_integer(m) * pow2(e)
}

/// Rough base-2 magnitude: an integer `k` with `|q| < 2^k` (for `q != 0`, `k` is tight within 2).
pub fn log2_upper(q: &BigRat) -> i64 {
    if q.is_zero() {
        return i64::MIN / 4;
    }
    q.numer().bits() as i64 - q.denom().bits() as i64 + 1
}

/// Smallest `p >= 0` with `2^-p <= q` for positive `q`.
pub fn bits_for(q: &BigRat) -> u32 {
    assert!(q.is_positive());
    let mut p = (q.denom().bits() as i64 - q.numer().bits() as i64).max(0) as u32;
    while pow2(-(p as i64)) > *q {
        p += 1;
    }
    p
}

/// Rational upper bound for `sqrt(q)`, within `2^-prec` of it.
pub fn sqrt_upper(q: &BigRat, prec: u32) -> BigRat {
    assert!(!q.is_negative());
    let scaled = floor(&(q * pow2(2 * prec as i64)));
    let mut s = scaled.sqrt();
    if from_bigint(&s * &s) != q * pow2(2 * prec as i64) {
        s += 1;
    }
    BigRat::new(s, BigInt::one() << prec as usize)
}

/// Rational lower bound for `sqrt(q)`.
pub fn sqrt_lower(q: &BigRat, prec: u32) -> BigRat {
    assert!(!q.is_negative());
    let scaled = floor(&(q * pow2(2 * prec as i64)));
    BigRat::new(scaled.sqrt(), BigInt::one() << prec as usize)
}

pub fn to_f64(q: &BigRat) -> f64 {
    match q.to_f64() {
        Some(v) if v.is_finite() => v,
        _ => {
            // Huge magnitude: fall back to a scaled conversion.
            let e = log2_upper(q);
            let m = (q / pow2(e)).to_f64().unwrap_or(0.0);
            m * 2f64.powi(e.clamp(-1100, 1100) as i32)
        }
    }
}

/// Exact rational value of a finite double.
pub fn from_f64(x: f64) -> BigRat {
    BigRat::from_float(x).expect("finite float")
}

pub fn sign(q: &BigRat) -> Sign {
    q.numer().sign()
}

pub fn abs(q: &BigRat) -> BigRat {
    q.abs()
}

pub fn max(a: &BigRat, b: &BigRat) -> BigRat {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn min(a: &BigRat, b: &BigRat) -> BigRat {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

/// Fixed rational upper bound for `sqrt(r)` at 64 fractional bits.
pub fn sqrt_r_upper(r: usize) -> BigRat {
    sqrt_upper(&int(r as i64), 64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "3", "-7", "1/100", "-22/7", "123456789012345678901234567891/2"] {
            assert_eq!(fmt_rat(&parse_rat(s).unwrap()), s);
        }
        assert_eq!(parse_rat("4/2").unwrap(), int(2));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn floor_ceil() {
        assert_eq!(floor(&rat(-7, 2)), BigInt::from(-4));
        assert_eq!(ceil(&rat(-7, 2)), BigInt::from(-3));
        assert_eq!(floor(&rat(7, 2)), BigInt::from(3));
        assert_eq!(ceil(&int(5)), BigInt::from(5));
    }

    #[test]
    fn dyadic_rounding_brackets() {
        let q = rat(1, 3);
        let lo = dyadic_floor(&q, 10);
        let hi = dyadic_ceil(&q, 10);
        assert!(lo <= q && q <= hi);
        assert_eq!(&hi - &lo, pow2(-10));
        let r = dyadic_round(&q, 10);
        assert!((&r - &q).abs() <= pow2(-11));
    }

    #[test]
    fn small_round_up_is_upper() {
        for q in [rat(1, 3), rat(10_000_001, 7), rat(1, 1_000_000_007)] {
            let u = round_up_small(&q);
            assert!(u >= q);
            assert!(u <= &q * rat(1_000_001, 1_000_000));
        }
    }

    #[test]
    fn sqrt_bounds() {
        let two = int(2);
        let u = sqrt_upper(&two, 64);
        let l = sqrt_lower(&two, 64);
        assert!(&u * &u >= two && &l * &l <= two);
        assert_eq!(sqrt_upper(&int(4), 8), int(2));
        assert!(sqrt_r_upper(5) * sqrt_r_upper(5) >= int(5));
    }

    #[test]
    fn bits_for_threshold() {
        assert_eq!(bits_for(&int(1)), 0);
        assert_eq!(bits_for(&rat(1, 2)), 1);
        assert_eq!(bits_for(&rat(1, 3)), 2);
        assert_eq!(bits_for(&rat(1, 1000)), 10);
    }
}
