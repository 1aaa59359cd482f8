//! Field elements as rational coordinate vectors over the integral basis.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::rational::{fmt_rat, BigRat};

/// `num / den` with `den > 0` and `gcd(num..., den) = 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NFElem {
    num: Vec<BigInt>,
    den: BigInt,
}

impl fmt::Debug for NFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coords().iter().map(fmt_rat).collect();
        write!(f, "({})", c.join(", "))
    }
}

impl NFElem {
    pub fn new(num: Vec<BigInt>, den: BigInt) -> NFElem {
        assert!(!den.is_zero(), "zero denominator");
        let mut e = NFElem { num, den };
        e.normalize();
        e
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            self.num.iter_mut().for_each(|x| *x = -&*x);
        }
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for x in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(x);
        }
        if !g.is_one() {
            self.den = &self.den / &g;
            self.num.iter_mut().for_each(|x| *x = &*x / &g);
        }
    }

    pub fn from_ints(num: Vec<BigInt>) -> NFElem {
        NFElem { num, den: BigInt::one() }
    }

    pub fn from_i64s(c: &[i64]) -> NFElem {
        NFElem::from_ints(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn from_coords(c: &[BigRat]) -> NFElem {
        let mut den = BigInt::one();
        for x in c {
            den = den.lcm(x.denom());
        }
        let num = c.iter().map(|x| x.numer() * (&den / x.denom())).collect();
        NFElem::new(num, den)
    }

    pub fn zero(n: usize) -> NFElem {
        NFElem::from_ints(vec![BigInt::zero(); n])
    }

    pub fn one(n: usize) -> NFElem {
        NFElem::from_rat(n, &BigRat::one())
    }

    /// The rational `q` (assumes the first basis element is 1).
    pub fn from_rat(n: usize, q: &BigRat) -> NFElem {
        let mut num = vec![BigInt::zero(); n];
        num[0] = q.numer().clone();
        NFElem::new(num, q.denom().clone())
    }

    pub fn dim(&self) -> usize {
        self.num.len()
    }

    pub fn num(&self) -> &[BigInt] {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn coords(&self) -> Vec<BigRat> {
        self.num.iter().map(|x| BigRat::new(x.clone(), self.den.clone())).collect()
    }

    pub fn coord(&self, i: usize) -> BigRat {
        BigRat::new(self.num[i].clone(), self.den.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|x| x.is_zero())
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    /// Rational value if the element lies in the prime field.
    pub fn as_rational(&self) -> Option<BigRat> {
        if self.num[1..].iter().all(|x| x.is_zero()) {
            Some(self.coord(0))
        } else {
            None
        }
    }

    pub fn add(&self, o: &NFElem) -> NFElem {
        let num = self.num.iter().zip(&o.num).map(|(a, b)| a * &o.den + b * &self.den).collect();
        NFElem::new(num, &self.den * &o.den)
    }

    pub fn sub(&self, o: &NFElem) -> NFElem {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> NFElem {
        NFElem { num: self.num.iter().map(|x| -x).collect(), den: self.den.clone() }
    }

    pub fn scale(&self, q: &BigRat) -> NFElem {
        NFElem::new(self.num.iter().map(|x| x * q.numer()).collect(), &self.den * q.denom())
    }

    /// Largest absolute numerator bit length (for precision heuristics).
    pub fn max_bits(&self) -> u64 {
        self.num.iter().map(|x| x.bits()).max().unwrap_or(0).max(self.den.bits())
    }
}

impl PartialOrd for NFElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic order on the rational coordinates.
impl Ord for NFElem {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.num.iter().zip(&other.num) {
            let o = (a * &other.den).cmp(&(b * &self.den));
            if o != Ordering::Equal {
                return o;
            }
        }
        self.num.len().cmp(&other.num.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;

    #[test]
    fn normalization() {
        let e = NFElem::new(vec![BigInt::from(2), BigInt::from(4)], BigInt::from(-6));
        assert_eq!(e.coords(), vec![rat(-1, 3), rat(-2, 3)]);
        assert_eq!(NFElem::from_coords(&[rat(1, 2), rat(1, 3)]).den(), &BigInt::from(6));
    }

    #[test]
    fn ordering_is_lexicographic_on_values() {
        let a = NFElem::from_coords(&[rat(1, 2), rat(0, 1)]);
        let b = NFElem::from_coords(&[rat(1, 3), rat(5, 1)]);
        assert!(a > b);
        assert_eq!(a.cmp(&a.clone()), Ordering::Equal);
    }

    #[test]
    fn add_sub() {
        let a = NFElem::from_coords(&[rat(1, 2), rat(1, 3)]);
        let b = NFElem::from_coords(&[rat(1, 2), rat(2, 3)]);
        assert_eq!(a.add(&b), NFElem::from_i64s(&[1, 1]));
        assert!(a.sub(&a).is_zero());
    }
}
