//! Exact fixed-point values `x 2^-F` held in `i128`.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::arith::rational::{ceil, floor, pow2, BigRat};

use super::SearchError;

#[derive(Clone, Copy, Debug)]
pub struct Scale {
    pub bits: u32,
}

impl Scale {
    fn scaled(&self, q: &BigRat) -> BigRat {
        q * pow2(self.bits as i64)
    }

    fn narrow(v: BigInt) -> Result<i128, SearchError> {
        match v.to_i128() {
            Some(x) if x.unsigned_abs() < (1u128 << 120) => Ok(x),
            _ => Err(SearchError::Capacity("fixed-point value out of range".into())),
        }
    }

    /// Exact conversion; `q` must be a multiple of `2^-bits`.
    pub fn exact(&self, q: &BigRat) -> Result<i128, SearchError> {
        let s = self.scaled(q);
        if !s.is_integer() {
            return Err(SearchError::Invariant("value is not on the fixed-point grid".into()));
        }
        Self::narrow(s.to_integer())
    }

    /// `floor(q 2^bits)`: for integers `x`, `x <= q` iff `x <= floor` and
    /// `x > q` iff `x > floor`.
    pub fn floor(&self, q: &BigRat) -> Result<i128, SearchError> {
        Self::narrow(floor(&self.scaled(q)))
    }

    /// `ceil(q 2^bits)`: for integers `x`, `x < q` iff `x < ceil` and
    /// `x >= q` iff `x >= ceil`.
    pub fn ceil(&self, q: &BigRat) -> Result<i128, SearchError> {
        Self::narrow(ceil(&self.scaled(q)))
    }

    pub fn to_rat(&self, x: i128) -> BigRat {
        BigRat::new(BigInt::from(x), BigInt::from(1u8) << self.bits as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;

    #[test]
    fn threshold_rules_are_exact() {
        let s = Scale { bits: 4 };
        let q = rat(5, 3); // 26.67 / 16
        let (f, c) = (s.floor(&q).unwrap(), s.ceil(&q).unwrap());
        assert_eq!((f, c), (26, 27));
        for x in 20..32i128 {
            let xq = s.to_rat(x);
            assert_eq!(xq < q, x < c);
            assert_eq!(xq <= q, x <= f);
            assert_eq!(xq > q, x > f);
        }
        assert_eq!(s.exact(&rat(3, 16)).unwrap(), 3);
        assert!(s.exact(&rat(1, 32)).is_err());
    }
}
