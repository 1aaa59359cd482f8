//! Exact rational LLL on Gram matrices (Lovasz parameter 3/4).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::rational::{floor, rat, BigRat};

use super::LatticeError;

/// Result of a reduction: the reduced Gram matrix and the unimodular
/// transform `T` (column `k` holds the coordinates of the new `k`-th vector
/// in the input basis).
#[derive(Clone, Debug)]
pub struct LllResult {
    pub gram: Vec<Vec<BigRat>>,
    pub transform: Vec<Vec<BigInt>>,
}

fn round_half_up(q: &BigRat) -> BigInt {
    floor(&(q + rat(1, 2)))
}

/// LLL-reduces the lattice whose Gram matrix is `g` (symmetric, positive definite).
pub fn lll_gram(g: &[Vec<BigRat>]) -> Result<LllResult, LatticeError> {
    let n = g.len();
    let mut g: Vec<Vec<BigRat>> = g.to_vec();
    // h[k] = coordinates of current vector k in the input basis
    let mut h: Vec<Vec<BigInt>> = (0..n)
        .map(|k| (0..n).map(|i| if i == k { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    if n == 0 {
        return Ok(LllResult { gram: g, transform: vec![] });
    }
    let mut mu = vec![vec![BigRat::zero(); n]; n];
    let mut bb = vec![BigRat::zero(); n];
    bb[0] = g[0][0].clone();
    if !bb[0].is_positive() {
        return Err(LatticeError::Dependent);
    }
    let delta = rat(3, 4);
    let half = rat(1, 2);
    let mut k = 1usize;
    let mut kmax = 0usize;

    let red = |k: usize, l: usize, g: &mut Vec<Vec<BigRat>>, h: &mut Vec<Vec<BigInt>>, mu: &mut Vec<Vec<BigRat>>| {
        if mu[k][l].abs() <= half {
            return;
        }
        let q = round_half_up(&mu[k][l]);
        let qr = BigRat::from_integer(q.clone());
        for i in 0..n {
            let d = &q * &h[l][i];
            h[k][i] -= d;
        }
        // Gram update for b_k <- b_k - q b_l
        let gkk = &g[k][k] - &qr * &g[k][l] * rat(2, 1) + &qr * &qr * &g[l][l];
        for i in 0..n {
            if i != k {
                let v = &g[k][i] - &qr * &g[l][i];
                g[k][i] = v.clone();
                g[i][k] = v;
            }
        }
        g[k][k] = gkk;
        mu[k][l] = &mu[k][l] - &qr;
        for i in 0..l {
            let v = &mu[k][i] - &qr * &mu[l][i];
            mu[k][i] = v;
        }
    };

    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..k {
                let mut s = g[k][j].clone();
                for i in 0..j {
                    s -= &mu[j][i] * &mu[k][i] * &bb[i];
                }
                mu[k][j] = s / &bb[j];
            }
            let mut s = g[k][k].clone();
            for j in 0..k {
                s -= &mu[k][j] * &mu[k][j] * &bb[j];
            }
            if !s.is_positive() {
                return Err(LatticeError::Dependent);
            }
            bb[k] = s;
        }
        red(k, k - 1, &mut g, &mut h, &mut mu);
        if bb[k] < (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &bb[k - 1] {
            // swap k and k-1
            h.swap(k, k - 1);
            g.swap(k, k - 1);
            for row in g.iter_mut() {
                row.swap(k, k - 1);
            }
            for j in 0..k - 1 {
                let t = mu[k][j].clone();
                mu[k][j] = mu[k - 1][j].clone();
                mu[k - 1][j] = t;
            }
            let m = mu[k][k - 1].clone();
            let b = &bb[k] + &m * &m * &bb[k - 1];
            mu[k][k - 1] = &m * &bb[k - 1] / &b;
            let nbk = &bb[k - 1] * &bb[k] / &b;
            bb[k] = nbk;
            bb[k - 1] = b;
            for i in k + 1..=kmax {
                let t = mu[i][k].clone();
                mu[i][k] = &mu[i][k - 1] - &m * &t;
                let v = &t + &mu[k][k - 1] * &mu[i][k];
                mu[i][k - 1] = v;
            }
            if k > 1 {
                k -= 1;
            }
        } else {
            for l in (0..k - 1).rev() {
                red(k, l, &mut g, &mut h, &mut mu);
            }
            k += 1;
        }
    }
    // transform with columns = new vectors
    let transform = (0..n).map(|i| (0..n).map(|k| h[k][i].clone()).collect()).collect();
    Ok(LllResult { gram: g, transform })
}

/// LLL on explicit rational vectors. Returns the reduced vectors and the
/// transform (columns give each new vector in terms of the inputs).
pub fn lll_reduce(vectors: &[Vec<BigRat>]) -> Result<(Vec<Vec<BigRat>>, Vec<Vec<BigInt>>), LatticeError> {
    let n = vectors.len();
    let g: Vec<Vec<BigRat>> = (0..n)
        .map(|i| (0..n).map(|j| dot(&vectors[i], &vectors[j])).collect())
        .collect();
    let res = lll_gram(&g)?;
    let reduced = (0..n)
        .map(|k| {
            let dim = vectors[0].len();
            let mut v = vec![BigRat::zero(); dim];
            for (i, inp) in vectors.iter().enumerate() {
                let c = &res.transform[i][k];
                if c.is_zero() {
                    continue;
                }
                let cr = BigRat::from_integer(c.clone());
                for (a, b) in v.iter_mut().zip(inp) {
                    *a += &cr * b;
                }
            }
            v
        })
        .collect();
    Ok((reduced, res.transform))
}

pub fn dot(a: &[BigRat], b: &[BigRat]) -> BigRat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Checks the size and Lovasz conditions with parameter 3/4 on a Gram matrix.
pub fn is_lll_reduced(g: &[Vec<BigRat>]) -> bool {
    let n = g.len();
    let mut mu = vec![vec![BigRat::zero(); n]; n];
    let mut bb = vec![BigRat::zero(); n];
    for k in 0..n {
        for j in 0..k {
            let mut s = g[k][j].clone();
            for i in 0..j {
                s -= &mu[j][i] * &mu[k][i] * &bb[i];
            }
            mu[k][j] = s / &bb[j];
            if mu[k][j].abs() > rat(1, 2) {
                return false;
            }
        }
        let mut s = g[k][k].clone();
        for j in 0..k {
            s -= &mu[k][j] * &mu[k][j] * &bb[j];
        }
        bb[k] = s;
        if k > 0 && bb[k] < (rat(3, 4) - &mu[k][k - 1] * &mu[k][k - 1]) * &bb[k - 1] {
            return false;
        }
    }
    true
}

/// Exact determinant of an integer matrix given as rows.
pub fn int_det(m: &[Vec<BigInt>]) -> BigInt {
    crate::arith::det_bareiss(m.to_vec())
}
