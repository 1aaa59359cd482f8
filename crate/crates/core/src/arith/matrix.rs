//! Exact rational and integer matrices.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::rational::{sqrt_r_upper, BigRat};
use super::ArithError;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigRat>,
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> =
                (0..self.cols).map(|j| super::rational::fmt_rat(self.get(i, j))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> RatMatrix {
        RatMatrix { rows, cols, data: vec![BigRat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> RatMatrix {
        let mut m = RatMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigRat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigRat>>) -> RatMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        RatMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> RatMatrix {
        RatMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigRat::from_integer(x.into())).collect())
                .collect(),
        )
    }

    pub fn diag(d: &[BigRat]) -> RatMatrix {
        let mut m = RatMatrix::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigRat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<BigRat> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut t = RatMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, o.rows);
        let mut m = RatMatrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut s = BigRat::zero();
                for k in 0..self.cols {
                    if !self.get(i, k).is_zero() {
                        s += self.get(i, k) * o.get(k, j);
                    }
                }
                m.set(i, j, s);
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[BigRat]) -> Vec<BigRat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut s = BigRat::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    s += a * b;
                }
                s
            })
            .collect()
    }

    pub fn sub(&self, o: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let v = self.get(i, j);
                    if i == j {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    /// Largest absolute entry.
    pub fn sup_norm(&self) -> BigRat {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_else(BigRat::zero)
    }

    /// Exact determinant by fraction-free elimination on a common denominator.
    pub fn det(&self) -> BigRat {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return BigRat::one();
        }
        let mut den = BigInt::one();
        for x in &self.data {
            den = num_integer::Integer::lcm(&den, x.denom());
        }
        let ints: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| (self.get(i, j) * BigRat::from_integer(den.clone())).to_integer()).collect())
            .collect();
        let d = det_bareiss(ints);
        BigRat::new(d, num_traits::pow(den, n))
    }

    /// Exact solution of `self * x = b` for square invertible `self`.
    pub fn solve(&self, b: &[BigRat]) -> Result<Vec<BigRat>, ArithError> {
        let inv = self.inverse()?;
        Ok(inv.mul_vec(b))
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<RatMatrix, ArithError> {
        if self.rows != self.cols {
            return Err(ArithError::Shape);
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RatMatrix::identity(n);
        for c in 0..n {
            let p = (c..n).find(|&r| !a.get(r, c).is_zero()).ok_or(ArithError::Singular)?;
            if p != c {
                for j in 0..n {
                    a.data.swap(p * n + j, c * n + j);
                    inv.data.swap(p * n + j, c * n + j);
                }
            }
            let piv = a.get(c, c).recip();
            for j in 0..n {
                let v = a.get(c, j) * &piv;
                a.set(c, j, v);
                let w = inv.get(c, j) * &piv;
                inv.set(c, j, w);
            }
            for r in 0..n {
                if r == c || a.get(r, c).is_zero() {
                    continue;
                }
                let f = a.get(r, c).clone();
                for j in 0..n {
                    let v = a.get(r, j) - &f * a.get(c, j);
                    a.set(r, j, v);
                    let w = inv.get(r, j) - &f * inv.get(c, j);
                    inv.set(r, j, w);
                }
            }
        }
        Ok(inv)
    }
}

pub fn mat_inverse(v: &RatMatrix) -> Result<RatMatrix, ArithError> {
    v.inverse()
}

/// Upper bound on the Euclidean operator norm: `r * s_r * sup_norm` with `s_r >= sqrt(r)`.
pub fn operator_norm_bound(v: &RatMatrix) -> BigRat {
    let r = v.rows.max(v.cols);
    BigRat::from_integer(r.into()) * sqrt_r_upper(r) * v.sup_norm()
}

/// Determinant of an integer matrix (Bareiss).
pub fn det_bareiss(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    #[test]
    fn identity_and_diag_inverse() {
        assert_eq!(mat_inverse(&RatMatrix::identity(3)).unwrap(), RatMatrix::identity(3));
        let d = RatMatrix::diag(&[int(2), int(4)]);
        assert_eq!(mat_inverse(&d).unwrap(), RatMatrix::diag(&[rat(1, 2), rat(1, 4)]));
    }

    #[test]
    fn singular_rejected() {
        let m = RatMatrix::from_int_rows(&[vec![1, 2], vec![2, 4]]);
        assert!(matches!(mat_inverse(&m), Err(ArithError::Singular)));
    }

    #[test]
    fn det_matches_inverse() {
        let m = RatMatrix::from_int_rows(&[vec![2, 1, 0], vec![1, 3, 1], vec![0, 1, 4]]);
        assert_eq!(m.det(), int(18));
        assert!(m.mul(&m.inverse().unwrap()).is_identity());
        assert_eq!(det_bareiss(vec![vec![0.into(), 1.into()], vec![1.into(), 0.into()]]), BigInt::from(-1));
    }

    #[test]
    fn operator_norm_examples() {
        let id = RatMatrix::identity(2);
        assert!(operator_norm_bound(&id) >= int(1));
        let d = RatMatrix::diag(&[int(5), int(1)]);
        assert!(operator_norm_bound(&d) >= int(5));
        let swap = RatMatrix::from_int_rows(&[vec![0, 1], vec![1, 0]]);
        assert!(operator_norm_bound(&swap) >= int(1));
    }
}
