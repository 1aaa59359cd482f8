//! Outward-rounded double intervals for fast certified filters.
//!
//! Every operation rounds the exact result's bounds one ulp outward, which is
//! sound because IEEE arithmetic is correctly rounded for `+ - * / sqrt`.

use std::ops::{Add, Mul, Neg, Sub};

use super::ball::Ball;
use super::rational::{to_f64, BigRat};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FInterval {
    pub lo: f64,
    pub hi: f64,
}

fn down(x: f64) -> f64 {
    if x.is_finite() {
        x.next_down()
    } else {
        x
    }
}

fn up(x: f64) -> f64 {
    if x.is_finite() {
        x.next_up()
    } else {
        x
    }
}

impl FInterval {
    pub fn new(lo: f64, hi: f64) -> FInterval {
        debug_assert!(lo <= hi || lo.is_nan());
        FInterval { lo, hi }
    }

    pub fn point(x: f64) -> FInterval {
        FInterval { lo: x, hi: x }
    }

    /// Exactly representable integer (|n| < 2^53) or widened otherwise.
    pub fn from_i64(n: i64) -> FInterval {
        let x = n as f64;
        if x.abs() < 9.0e15 {
            FInterval::point(x)
        } else {
            FInterval { lo: down(x), hi: up(x) }
        }
    }

    pub fn from_bigint(n: &num_bigint::BigInt) -> FInterval {
        match num_traits::ToPrimitive::to_i64(n) {
            Some(v) => FInterval::from_i64(v),
            None => {
                let x = num_traits::ToPrimitive::to_f64(n).unwrap_or(f64::INFINITY);
                FInterval { lo: down(x), hi: up(x) }
            }
        }
    }

    pub fn from_rat(q: &BigRat) -> FInterval {
        let x = to_f64(q);
        FInterval { lo: down(x), hi: up(x) }
    }

    pub fn from_ball(b: &Ball) -> FInterval {
        FInterval { lo: down(to_f64(&b.lo())), hi: up(to_f64(&b.hi())) }
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0.0 && self.hi >= 0.0
    }

    pub fn abs(self) -> FInterval {
        if self.lo >= 0.0 {
            self
        } else if self.hi <= 0.0 {
            -self
        } else {
            FInterval { lo: 0.0, hi: self.hi.max(-self.lo) }
        }
    }

    pub fn sqr(self) -> FInterval {
        let a = self.abs();
        FInterval { lo: down(a.lo * a.lo).max(0.0), hi: up(a.hi * a.hi) }
    }

    pub fn max(self, o: FInterval) -> FInterval {
        FInterval { lo: self.lo.max(o.lo), hi: self.hi.max(o.hi) }
    }

    /// Division by an interval not containing zero.
    pub fn div(self, o: FInterval) -> FInterval {
        assert!(!o.contains_zero(), "interval division by zero");
        let c = [self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi];
        FInterval {
            lo: down(c.iter().cloned().fold(f64::INFINITY, f64::min)),
            hi: up(c.iter().cloned().fold(f64::NEG_INFINITY, f64::max)),
        }
    }

    /// Square root of the nonnegative part.
    pub fn sqrt(self) -> FInterval {
        FInterval {
            lo: down(self.lo.max(0.0).sqrt()).max(0.0),
            hi: up(self.hi.max(0.0).sqrt()),
        }
    }

    /// Natural log of a positive interval, widened two ulps each way to absorb
    /// the library's rounding error.
    pub fn ln(self) -> FInterval {
        debug_assert!(self.lo > 0.0);
        FInterval { lo: down(down(self.lo.ln())), hi: up(up(self.hi.ln())) }
    }

    pub fn exp(self) -> FInterval {
        FInterval { lo: down(down(self.lo.exp())).max(0.0), hi: up(up(self.hi.exp())) }
    }

    pub fn mid(self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn scale_i(self, k: i64) -> FInterval {
        self * FInterval::from_i64(k)
    }
}

impl Add for FInterval {
    type Output = FInterval;
    fn add(self, o: FInterval) -> FInterval {
        FInterval { lo: down(self.lo + o.lo), hi: up(self.hi + o.hi) }
    }
}

impl Sub for FInterval {
    type Output = FInterval;
    fn sub(self, o: FInterval) -> FInterval {
        FInterval { lo: down(self.lo - o.hi), hi: up(self.hi - o.lo) }
    }
}

impl Neg for FInterval {
    type Output = FInterval;
    fn neg(self) -> FInterval {
        FInterval { lo: -self.hi, hi: -self.lo }
    }
}

impl Mul for FInterval {
    type Output = FInterval;
    fn mul(self, o: FInterval) -> FInterval {
        if self.lo == self.hi && o.lo == o.hi {
            let p = self.lo * o.lo;
            return FInterval { lo: down(p), hi: up(p) };
        }
        let c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        FInterval {
            lo: down(c.iter().cloned().fold(f64::INFINITY, f64::min)),
            hi: up(c.iter().cloned().fold(f64::NEG_INFINITY, f64::max)),
        }
    }
}

/// Complex interval rectangle.
#[derive(Clone, Copy, Debug)]
pub struct CInterval {
    pub re: FInterval,
    pub im: FInterval,
}

impl CInterval {
    pub fn zero() -> CInterval {
        CInterval { re: FInterval::point(0.0), im: FInterval::point(0.0) }
    }

    pub fn from_cball(z: &super::ball::CBall) -> CInterval {
        CInterval { re: FInterval::from_ball(&z.re), im: FInterval::from_ball(&z.im) }
    }

    pub fn abs_sq(self) -> FInterval {
        self.re.sqr() + self.im.sqr()
    }

    pub fn add(self, o: CInterval) -> CInterval {
        CInterval { re: self.re + o.re, im: self.im + o.im }
    }

    pub fn scale(self, k: FInterval) -> CInterval {
        CInterval { re: self.re * k, im: self.im * k }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encloses_decimal_sum() {
        let a = FInterval::point(0.1);
        let b = FInterval::point(0.2);
        let s = a + b;
        assert!(s.lo <= 0.30000000000000004 && s.hi >= 0.30000000000000004);
        assert!(s.lo < s.hi);
    }

    #[test]
    fn sqrt_and_div() {
        let two = FInterval::point(2.0);
        let r = two.sqrt();
        assert!(r.lo * r.lo <= 2.0 && r.hi * r.hi >= 2.0);
        let q = FInterval::point(1.0).div(FInterval::point(3.0));
        assert!(q.lo <= 1.0 / 3.0 && q.hi >= 1.0 / 3.0);
    }
}
