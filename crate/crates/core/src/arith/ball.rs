//! Midpoint-radius enclosures of real and complex numbers.
//!
//! Arithmetic on mids is exact; callers shrink representation size with
//! [`Ball::round`], which moves the rounding error into the radius.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::rational::{dyadic_round, round_up_small, BigRat};
use super::ArithError;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ball {
    pub mid: BigRat,
    pub rad: BigRat,
}

impl fmt::Debug for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{:.12} +/- {:.3e}]",
            super::rational::to_f64(&self.mid),
            super::rational::to_f64(&self.rad)
        )
    }
}

impl Ball {
    pub fn new(mid: BigRat, rad: BigRat) -> Ball {
        assert!(!rad.is_negative(), "negative radius");
        Ball { mid, rad }
    }

    pub fn exact(mid: BigRat) -> Ball {
        Ball { mid, rad: BigRat::zero() }
    }

    pub fn from_int(n: i64) -> Ball {
        Ball::exact(BigRat::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Ball {
        Ball::from_int(0)
    }

    pub fn one() -> Ball {
        Ball::from_int(1)
    }

    /// Smallest ball containing `[lo, hi]`.
    pub fn from_interval(lo: &BigRat, hi: &BigRat) -> Ball {
        assert!(lo <= hi);
        let two = BigRat::from_integer(BigInt::from(2));
        Ball { mid: (lo + hi) / &two, rad: (hi - lo) / two }
    }

    pub fn lo(&self) -> BigRat {
        &self.mid - &self.rad
    }

    pub fn hi(&self) -> BigRat {
        &self.mid + &self.rad
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn contains(&self, x: &BigRat) -> bool {
        (x - &self.mid).abs() <= self.rad
    }

    pub fn contains_ball(&self, other: &Ball) -> bool {
        self.lo() <= other.lo() && other.hi() <= self.hi()
    }

    pub fn contains_zero(&self) -> bool {
        self.mid.abs() <= self.rad
    }

    pub fn overlaps(&self, other: &Ball) -> bool {
        (&self.mid - &other.mid).abs() <= &self.rad + &other.rad
    }

    /// Sign if every point of the ball has it.
    pub fn sign(&self) -> Option<Ordering> {
        if self.is_exact() {
            return Some(self.mid.cmp(&BigRat::zero()));
        }
        if self.lo().is_positive() {
            Some(Ordering::Greater)
        } else if self.hi().is_negative() {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    /// Rounds the midpoint to a multiple of `2^-prec` and keeps the radius compact.
    pub fn round(&self, prec: u32) -> Ball {
        let mid = dyadic_round(&self.mid, prec);
        let err = (&mid - &self.mid).abs();
        Ball { mid, rad: round_up_small(&(&self.rad + err)) }
    }

    pub fn scale(&self, q: &BigRat) -> Ball {
        Ball { mid: &self.mid * q, rad: &self.rad * q.abs() }
    }

    pub fn add_rat(&self, q: &BigRat) -> Ball {
        Ball { mid: &self.mid + q, rad: self.rad.clone() }
    }

    pub fn abs(&self) -> Ball {
        if self.contains_zero() {
            let hi = self.mid.abs() + &self.rad;
            let two = BigRat::from_integer(BigInt::from(2));
            return Ball { mid: &hi / &two, rad: hi / two };
        }
        Ball { mid: self.mid.abs(), rad: self.rad.clone() }
    }

    pub fn sqr(&self) -> Ball {
        self * self
    }

    /// Enclosure of `max(x, y)` over all pairs of points.
    pub fn max(&self, other: &Ball) -> Ball {
        let lo = std::cmp::max(self.lo(), other.lo());
        let hi = std::cmp::max(self.hi(), other.hi());
        if lo == self.lo() && hi == self.hi() {
            return self.clone();
        }
        if lo == other.lo() && hi == other.hi() {
            return other.clone();
        }
        Ball::from_interval(&lo, &hi)
    }

    /// Enclosure of `1/x`; fails when the ball touches zero.
    pub fn recip(&self, prec: u32) -> Result<Ball, ArithError> {
        if self.contains_zero() {
            return Err(ArithError::NeedsRefinement);
        }
        if self.is_exact() {
            return Ok(Ball::exact(self.mid.recip()));
        }
        let a = self.mid.abs();
        let lo = &a - &self.rad;
        // |1/x - 1/m| <= r / (|m| (|m| - r)) on the ball
        let mid = dyadic_round(&self.mid.recip(), prec);
        let err = (&mid - self.mid.recip()).abs();
        let rad = &self.rad / (&a * &lo) + err;
        Ok(Ball { mid, rad: round_up_small(&rad) })
    }

    pub fn div(&self, other: &Ball, prec: u32) -> Result<Ball, ArithError> {
        Ok((self * &other.recip(prec)?).round(prec))
    }

    /// Integer power by repeated squaring, rounding at `prec`.
    pub fn pow(&self, e: u32, prec: u32) -> Ball {
        let mut acc = Ball::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = (&acc * &base).round(prec);
            }
            e >>= 1;
            if e > 0 {
                base = (&base * &base).round(prec);
            }
        }
        acc
    }
}

impl<'a> Add<&'a Ball> for &'a Ball {
    type Output = Ball;
    fn add(self, o: &Ball) -> Ball {
        Ball { mid: &self.mid + &o.mid, rad: &self.rad + &o.rad }
    }
}

impl<'a> Sub<&'a Ball> for &'a Ball {
    type Output = Ball;
    fn sub(self, o: &Ball) -> Ball {
        Ball { mid: &self.mid - &o.mid, rad: &self.rad + &o.rad }
    }
}

impl<'a> Mul<&'a Ball> for &'a Ball {
    type Output = Ball;
    fn mul(self, o: &Ball) -> Ball {
        let rad = if self.rad.is_zero() && o.rad.is_zero() {
            BigRat::zero()
        } else {
            self.mid.abs() * &o.rad + o.mid.abs() * &self.rad + &self.rad * &o.rad
        };
        Ball { mid: &self.mid * &o.mid, rad }
    }
}

impl Neg for &Ball {
    type Output = Ball;
    fn neg(self) -> Ball {
        Ball { mid: -&self.mid, rad: self.rad.clone() }
    }
}

impl Add for Ball {
    type Output = Ball;
    fn add(self, o: Ball) -> Ball {
        &self + &o
    }
}

impl Sub for Ball {
    type Output = Ball;
    fn sub(self, o: Ball) -> Ball {
        &self - &o
    }
}

impl Mul for Ball {
    type Output = Ball;
    fn mul(self, o: Ball) -> Ball {
        &self * &o
    }
}

/// Rectangular enclosure of a complex number.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CBall {
    pub re: Ball,
    pub im: Ball,
}

impl CBall {
    pub fn new(re: Ball, im: Ball) -> CBall {
        CBall { re, im }
    }

    pub fn real(re: Ball) -> CBall {
        CBall { re, im: Ball::zero() }
    }

    pub fn zero() -> CBall {
        CBall::real(Ball::zero())
    }

    pub fn one() -> CBall {
        CBall::real(Ball::one())
    }

    pub fn round(&self, prec: u32) -> CBall {
        CBall { re: self.re.round(prec), im: self.im.round(prec) }
    }

    pub fn scale(&self, q: &BigRat) -> CBall {
        CBall { re: self.re.scale(q), im: self.im.scale(q) }
    }

    pub fn conj(&self) -> CBall {
        CBall { re: self.re.clone(), im: -&self.im }
    }

    /// Enclosure of `|z|^2`.
    pub fn abs_sq(&self) -> Ball {
        &self.re.sqr() + &self.im.sqr()
    }

    pub fn max_rad(&self) -> BigRat {
        std::cmp::max(self.re.rad.clone(), self.im.rad.clone())
    }
}

impl<'a> Add<&'a CBall> for &'a CBall {
    type Output = CBall;
    fn add(self, o: &CBall) -> CBall {
        CBall { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl<'a> Sub<&'a CBall> for &'a CBall {
    type Output = CBall;
    fn sub(self, o: &CBall) -> CBall {
        CBall { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl<'a> Mul<&'a CBall> for &'a CBall {
    type Output = CBall;
    fn mul(self, o: &CBall) -> CBall {
        if o.im.is_exact() && o.im.mid.is_zero() {
            return CBall { re: &self.re * &o.re, im: &self.im * &o.re };
        }
        CBall {
            re: &(&self.re * &o.re) - &(&self.im * &o.im),
            im: &(&self.re * &o.im) + &(&self.im * &o.re),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    #[test]
    fn product_encloses() {
        let a = Ball::new(rat(3, 2), rat(1, 10));
        let b = Ball::new(rat(-2, 1), rat(1, 5));
        let p = &a * &b;
        for x in [a.lo(), a.hi()] {
            for y in [b.lo(), b.hi()] {
                assert!(p.contains(&(&x * &y)));
            }
        }
    }

    #[test]
    fn rounding_keeps_value() {
        let a = Ball::exact(rat(1, 3));
        let r = a.round(20);
        assert!(r.contains(&rat(1, 3)));
        assert!(r.rad < rat(1, 1 << 20));
    }

    #[test]
    fn recip_encloses() {
        let a = Ball::new(int(3), rat(1, 100));
        let r = a.recip(60).unwrap();
        assert!(r.contains(&BigRat::new(100.into(), 299.into())));
        assert!(r.contains(&BigRat::new(100.into(), 301.into())));
        assert!(Ball::new(int(0), rat(1, 2)).recip(10).is_err());
    }

    #[test]
    fn max_and_sign() {
        let a = Ball::new(int(1), rat(1, 2));
        let b = Ball::new(int(2), rat(1, 4));
        let m = a.max(&b);
        assert!(m.contains(&rat(7, 4)) && m.contains(&rat(9, 4)));
        assert_eq!(a.sign(), Some(Ordering::Greater));
        assert_eq!(Ball::new(int(0), rat(1, 2)).sign(), None);
    }

    #[test]
    fn complex_mul() {
        let i = CBall::new(Ball::zero(), Ball::one());
        let sq = &i * &i;
        assert_eq!(sq.re, Ball::from_int(-1));
        assert_eq!(sq.im, Ball::zero());
    }
}
