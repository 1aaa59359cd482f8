//! Hermite normal form of integer lattices, column convention.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Full-rank sublattice of `Z^n` in upper-triangular Hermite normal form.
///
/// `mat[i][j]` is row `i` of column `j`; columns are a basis. Diagonal entries
/// are positive and entries right of the diagonal satisfy `0 <= a_ij < a_ii`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IdealHNF {
    pub mat: Vec<Vec<BigInt>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HnfError {
    #[error("generators do not span a full-rank lattice")]
    NotFullRank,
    #[error("matrix is not in Hermite normal form")]
    NotHnf,
}

impl IdealHNF {
    pub fn dim(&self) -> usize {
        self.mat.len()
    }

    pub fn identity(n: usize) -> IdealHNF {
        let mut mat = vec![vec![BigInt::zero(); n]; n];
        for (i, row) in mat.iter_mut().enumerate() {
            row[i] = BigInt::one();
        }
        IdealHNF { mat }
    }

    /// Wraps a matrix after checking the normal-form conditions.
    pub fn from_matrix(mat: Vec<Vec<BigInt>>) -> Result<IdealHNF, HnfError> {
        let n = mat.len();
        if mat.iter().any(|r| r.len() != n) {
            return Err(HnfError::NotHnf);
        }
        for i in 0..n {
            if !mat[i][i].is_positive() {
                return Err(HnfError::NotHnf);
            }
            for j in 0..n {
                let v = &mat[i][j];
                if j < i && !v.is_zero() {
                    return Err(HnfError::NotHnf);
                }
                if j > i && (v.is_negative() || v >= &mat[i][i]) {
                    return Err(HnfError::NotHnf);
                }
            }
        }
        Ok(IdealHNF { mat })
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        self.mat.iter().map(|r| r[j].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.dim()).map(|j| self.column(j)).collect()
    }

    /// Index in `Z^n`: the product of the diagonal.
    pub fn index(&self) -> BigInt {
        (0..self.dim()).map(|i| self.mat[i][i].clone()).product()
    }

    /// Membership of an integer vector.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        let n = self.dim();
        let mut v = v.to_vec();
        for i in (0..n).rev() {
            if v[i].is_zero() {
                continue;
            }
            let (q, r) = v[i].div_rem(&self.mat[i][i]);
            if !r.is_zero() {
                return false;
            }
            for k in 0..=i {
                let d = &q * &self.mat[k][i];
                v[k] -= d;
            }
        }
        true
    }

    /// `self` contains every column of `other`.
    pub fn contains_lattice(&self, other: &IdealHNF) -> bool {
        other.columns().iter().all(|c| self.contains(c))
    }
}

/// HNF of the lattice spanned by `cols` (plus `modulus * e_k` when given).
///
/// With a modulus `D` known to lie in the lattice's exponent (`D Z^n` contained
/// in the lattice), entries are kept reduced mod `D` throughout.
pub fn hnf(cols: &[Vec<BigInt>], n: usize, modulus: Option<&BigInt>) -> Result<IdealHNF, HnfError> {
    let mut work: Vec<Vec<BigInt>> = cols.iter().filter(|c| c.iter().any(|x| !x.is_zero())).cloned().collect();
    if let Some(d) = modulus {
        let d = d.abs();
        for c in work.iter_mut() {
            for x in c.iter_mut() {
                *x = x.mod_floor(&d);
            }
        }
        work.retain(|c| c.iter().any(|x| !x.is_zero()));
        push_multiples(&mut work, &d, n, n);
    }
    let mut basis: Vec<Vec<BigInt>> = vec![Vec::new(); n];
    for i in (0..n).rev() {
        let mut pivot: Option<Vec<BigInt>> = None;
        let mut rest = Vec::with_capacity(work.len());
        for c in work.drain(..) {
            if c[i].is_zero() {
                rest.push(c);
                continue;
            }
            match pivot.take() {
                None => pivot = Some(c),
                Some(p) => {
                    let (np, nc) = combine(&p, &c, i);
                    pivot = Some(np);
                    if nc.iter().any(|x| !x.is_zero()) {
                        rest.push(nc);
                    }
                }
            }
        }
        let mut p = pivot.ok_or(HnfError::NotFullRank)?;
        if p[i].is_negative() {
            p.iter_mut().for_each(|x| *x = -&*x);
        }
        if let Some(d) = modulus {
            let d = d.abs();
            for c in rest.iter_mut() {
                for x in c[..i].iter_mut() {
                    *x = x.mod_floor(&d);
                }
            }
            for x in p[..i].iter_mut() {
                *x = x.mod_floor(&d);
            }
            rest.retain(|c| c.iter().any(|x| !x.is_zero()));
            push_multiples(&mut rest, &d, n, i);
        }
        basis[i] = p;
        work = rest;
    }
    // reduce off-diagonal entries
    for j in 0..n {
        for i in (0..j).rev() {
            let q = basis[j][i].div_floor(&basis[i][i]);
            if !q.is_zero() {
                let bi = basis[i].clone();
                for k in 0..=i {
                    let d = &q * &bi[k];
                    basis[j][k] -= d;
                }
            }
        }
    }
    let mut mat = vec![vec![BigInt::zero(); n]; n];
    for j in 0..n {
        for i in 0..n {
            mat[i][j] = basis[j][i].clone();
        }
    }
    Ok(IdealHNF { mat })
}

/// Appends `d e_k` for `k < upto`; reduction mod `d` removes them otherwise.
fn push_multiples(work: &mut Vec<Vec<BigInt>>, d: &BigInt, n: usize, upto: usize) {
    for k in 0..upto {
        let mut e = vec![BigInt::zero(); n];
        e[k] = d.clone();
        work.push(e);
    }
}

/// Unimodular combination clearing row `i` of `c` against `p`.
fn combine(p: &[BigInt], c: &[BigInt], i: usize) -> (Vec<BigInt>, Vec<BigInt>) {
    let (a, b) = (&p[i], &c[i]);
    let eg = a.extended_gcd(b);
    let g = eg.gcd;
    let (u, v) = (eg.x, eg.y);
    let (ag, bg) = (a / &g, b / &g);
    let np: Vec<BigInt> = p.iter().zip(c).map(|(x, y)| &u * x + &v * y).collect();
    let nc: Vec<BigInt> = p.iter().zip(c).map(|(x, y)| &bg * x - &ag * y).collect();
    (np, nc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> Vec<BigInt> {
        x.iter().map(|&a| BigInt::from(a)).collect()
    }

    #[test]
    fn simple_hnf() {
        let h = hnf(&[v(&[2, 0]), v(&[3, 1])], 2, None).unwrap();
        assert_eq!(h.mat, vec![v(&[2, 1]), v(&[0, 1])]);
        assert_eq!(h.index(), BigInt::from(2));
        assert!(h.contains(&v(&[1, 1])));
        assert!(!h.contains(&v(&[1, 0])));
    }

    #[test]
    fn modular_matches_plain() {
        let cols = vec![v(&[6, 4, 2]), v(&[0, 3, 9]), v(&[5, 5, 5]), v(&[0, 0, 7])];
        let plain = hnf(&cols, 3, None).unwrap();
        let d = plain.index();
        let modular = hnf(&cols, 3, Some(&d)).unwrap();
        assert_eq!(plain, modular);
    }

    #[test]
    fn rank_deficient() {
        assert_eq!(hnf(&[v(&[1, 2])], 2, None), Err(HnfError::NotFullRank));
    }

    #[test]
    fn from_matrix_validation() {
        assert!(IdealHNF::from_matrix(vec![v(&[2, 1]), v(&[0, 1])]).is_ok());
        assert!(IdealHNF::from_matrix(vec![v(&[2, 2]), v(&[0, 1])]).is_err());
        assert!(IdealHNF::from_matrix(vec![v(&[2, 0]), v(&[1, 1])]).is_err());
    }
}
