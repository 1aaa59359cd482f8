//! Integral ideals in Hermite normal form, associates and unit reduction,
//! and one generator per principal ideal of bounded norm inside an ideal.

pub mod hnf;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::ball::Ball;
use crate::arith::interval::{CInterval, FInterval};
use crate::arith::rational::{dyadic_round, BigRat};
use crate::field::{FieldData, FieldError, NFElem};
use crate::lattice::units::reduction_candidates;
use crate::lattice::{lll_gram, Ellipsoid, LatticeError};

pub use hnf::{hnf, HnfError, IdealHNF};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IdealError {
    #[error("no nonzero generator")]
    ZeroGenerators,
    #[error("generator is not integral")]
    NotIntegral,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// `true` when the lattice is closed under multiplication by the integral basis.
pub fn is_ideal(h: &IdealHNF, k: &FieldData) -> bool {
    let n = k.n;
    if h.dim() != n {
        return false;
    }
    h.columns().iter().all(|c| {
        let m = k.mul_matrix(c);
        (0..n).all(|j| {
            let col: Vec<BigInt> = m.iter().map(|row| row[j].clone()).collect();
            h.contains(&col)
        })
    })
}

/// HNF of `sum_g g O_K` for integral generators.
pub fn ideal_from_gens(gens: &[NFElem], k: &FieldData) -> Result<IdealHNF, IdealError> {
    let mut cols = Vec::new();
    let mut modulus = BigInt::zero();
    for g in gens {
        if g.is_zero() {
            continue;
        }
        if !g.is_integral() {
            return Err(IdealError::NotIntegral);
        }
        let m = k.mul_matrix(g.num());
        for j in 0..k.n {
            cols.push(m.iter().map(|row| row[j].clone()).collect::<Vec<_>>());
        }
        // |N(g)| lies in (g)
        modulus = modulus.gcd(&k.norm_int(g.num()).abs());
    }
    if cols.is_empty() {
        return Err(IdealError::ZeroGenerators);
    }
    hnf(&cols, k.n, Some(&modulus)).map_err(|_| IdealError::ZeroGenerators)
}

pub fn principal(x: &NFElem, k: &FieldData) -> Result<IdealHNF, IdealError> {
    ideal_from_gens(std::slice::from_ref(x), k)
}

pub fn ideal_norm(i: &IdealHNF) -> BigInt {
    i.index()
}

pub fn ideal_eq(a: &IdealHNF, b: &IdealHNF) -> bool {
    a == b
}

/// `a` contains `b`.
pub fn ideal_contains(a: &IdealHNF, b: &IdealHNF) -> bool {
    a.contains_lattice(b)
}

pub fn ideal_add(a: &IdealHNF, b: &IdealHNF) -> IdealHNF {
    let n = a.dim();
    let mut cols = a.columns();
    cols.extend(b.columns());
    let d = a.index().gcd(&b.index());
    hnf(&cols, n, Some(&d)).expect("sum of full-rank lattices has full rank")
}

pub fn ideal_mul(a: &IdealHNF, b: &IdealHNF, k: &FieldData) -> IdealHNF {
    let n = a.dim();
    let mut cols = Vec::with_capacity(n * n);
    for x in a.columns() {
        let m = k.mul_matrix(&x);
        for y in b.columns() {
            let col: Vec<BigInt> = m.iter().map(|row| row.iter().zip(&y).map(|(p, q)| p * q).sum()).collect();
            cols.push(col);
        }
    }
    let d = a.index() * b.index();
    hnf(&cols, n, Some(&d)).expect("product of full-rank ideals has full rank")
}

/// `(a) = (b)` for nonzero integral elements.
pub fn is_associate(a: &NFElem, b: &NFElem, k: &FieldData) -> bool {
    if a.is_zero() || b.is_zero() {
        return a.is_zero() && b.is_zero();
    }
    if k.norm(a).abs() != k.norm(b).abs() {
        return false;
    }
    k.div(a, b).map(|q| q.is_integral()).unwrap_or(false)
}

/// The lexicographically largest element of `{zeta x : zeta in mu_K}`.
pub fn canonical_associate(x: &NFElem, k: &FieldData) -> NFElem {
    k.mu.iter().map(|z| k.mul(z, x)).max().expect("mu_K is nonempty")
}

/// Moves `alpha` by a unit so its centred log vector is nearest-plane reduced
/// against the unit lattice. Returns `alpha eps^{-shift}` and `shift`.
///
/// Near-ties are resolved by taking the candidate whose canonical associate
/// is largest, so associates of `alpha` reduce to the same element up to
/// roots of unity.
pub fn unit_reduce(alpha: &NFElem, k: &FieldData) -> Result<(NFElem, Vec<i64>), IdealError> {
    if alpha.is_zero() {
        return Err(IdealError::Field(FieldError::ZeroElement));
    }
    if k.unit_rank() == 0 {
        return Ok((alpha.clone(), vec![]));
    }
    let cands = reduction_candidates(k, alpha)?;
    let mut best: Option<(NFElem, NFElem, Vec<i64>)> = None;
    for n in cands {
        let neg: Vec<i64> = n.iter().map(|e| -e).collect();
        let a = k.mul(alpha, &k.unit_power(&neg));
        let c = canonical_associate(&a, k);
        if best.as_ref().is_none_or(|(bc, _, _)| c > *bc) {
            best = Some((c, a, n));
        }
    }
    let (_, a, n) = best.expect("at least one candidate");
    Ok((a, n))
}

/// A generator of a principal ideal together with the ideal's norm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrincipalGen {
    pub g: NFElem,
    pub norm: BigInt,
}

/// Largest lattice size `principal_gens` will enumerate.
pub const ENUMERATION_CAP: f64 = 4.0e9;

/// One generator for every nonzero principal ideal contained in `a` whose
/// norm lies in `norms`, sorted by `(norm, coordinates)`.
pub fn principal_gens(a: &IdealHNF, norms: &BTreeSet<BigInt>, k: &FieldData) -> Result<Vec<NFElem>, IdealError> {
    Ok(principal_gens_with_norms(a, norms, k)?.into_iter().map(|p| p.g).collect())
}

pub fn principal_gens_with_norms(
    a: &IdealHNF,
    norms: &BTreeSet<BigInt>,
    k: &FieldData,
) -> Result<Vec<PrincipalGen>, IdealError> {
    let Some(nmax) = norms.iter().next_back().cloned() else {
        return Ok(vec![]);
    };
    if !nmax.is_positive() {
        return Ok(vec![]);
    }
    let n = k.n;
    let basis = reduced_ideal_basis(a, k)?;
    let emb = k.embeddings_f64();
    let degs = k.local_degrees();
    // sigma_v(c_k) for the reduced basis
    let cemb: Vec<Vec<CInterval>> = basis
        .iter()
        .map(|c| {
            emb.iter()
                .map(|row| {
                    row.iter()
                        .zip(c)
                        .fold(CInterval::zero(), |acc, (e, x)| acc.add(e.scale(FInterval::from_bigint(x))))
                })
                .collect()
        })
        .collect();
    let gram: Vec<Vec<FInterval>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..degs.len()).fold(FInterval::point(0.0), |acc, v| {
                        let (x, y) = (cemb[i][v], cemb[j][v]);
                        acc + FInterval::point(degs[v] as f64) * (x.re * y.re + x.im * y.im)
                    })
                })
                .collect()
        })
        .collect();
    let ell = Ellipsoid::from_gram(&gram)?;
    let r = k.unit_rank();
    let c_upper = FInterval::from_bigint(&nmax).ln().hi / (r + 1) as f64;
    let c_upper = c_upper + c_upper.abs() * 1e-12 + 1e-12;
    let bound = k.unit_lattice().t2_bound(&degs, c_upper) * (1.0 + 1e-9);
    let est = ell.point_estimate(bound) / 2.0;
    if est > ENUMERATION_CAP {
        return Err(IdealError::Lattice(LatticeError::Capacity(format!(
            "about {est:.3e} lattice points for norms up to {nmax}"
        ))));
    }
    let nmin_f = norms.iter().next().map(|x| x.to_f64().unwrap_or(0.0)).unwrap_or(0.0);
    let nmax_f = FInterval::from_bigint(&nmax).hi;
    let tops = ell.top_values(bound, true, None)?;
    let found: Vec<Result<Vec<(Vec<BigInt>, BigInt)>, IdealError>> = tops
        .par_iter()
        .map(|&top| {
            let mut out = Vec::new();
            ell.enumerate_top(bound, true, None, top, |x| {
                // norm interval from the embeddings
                let mut nv = FInterval::point(1.0);
                for v in 0..degs.len() {
                    let mut z = CInterval::zero();
                    for (i, &xi) in x.iter().enumerate() {
                        if xi != 0 {
                            z = z.add(cemb[i][v].scale(FInterval::from_i64(xi)));
                        }
                    }
                    let f = if degs[v] == 1 { z.re.abs() } else { z.abs_sq() };
                    nv = nv * f;
                }
                if nv.lo > nmax_f + 0.5 || nv.hi < nmin_f - 0.5 {
                    return;
                }
                let coords: Vec<BigInt> = (0..n)
                    .map(|j| x.iter().zip(&basis).map(|(&xi, c)| BigInt::from(xi) * &c[j]).sum())
                    .collect();
                let lo = BigInt::from(nv.lo.ceil().max(0.0) as i64);
                let hi = nv.hi.floor();
                let norm = if hi.is_finite() && hi < 9.0e15 && (hi as i64) == lo.to_i64().unwrap_or(-1) {
                    lo
                } else {
                    k.norm_int(&coords).abs()
                };
                if norms.contains(&norm) {
                    out.push((coords, norm));
                }
            })?;
            Ok(out)
        })
        .collect();
    let mut elems = Vec::new();
    for f in found {
        elems.extend(f?);
    }
    // reduce and canonicalize, then merge associates by their ideal
    let reduced: Vec<Result<(NFElem, BigInt), IdealError>> = elems
        .into_par_iter()
        .map(|(c, nm)| {
            let g = NFElem::from_ints(c);
            let (g2, _) = unit_reduce(&g, k)?;
            Ok((canonical_associate(&g2, k), nm))
        })
        .collect();
    let mut distinct: BTreeMap<NFElem, BigInt> = BTreeMap::new();
    for x in reduced {
        let (g, nm) = x?;
        distinct.insert(g, nm);
    }
    let items: Vec<(NFElem, BigInt)> = distinct.into_iter().collect();
    let ideals: Vec<Result<IdealHNF, IdealError>> = items.par_iter().map(|(g, _)| principal(g, k)).collect();
    let mut by_ideal: BTreeMap<IdealHNF, (NFElem, BigInt)> = BTreeMap::new();
    for ((g, nm), h) in items.into_iter().zip(ideals) {
        let h = h?;
        match by_ideal.get(&h) {
            Some((cur, _)) if *cur >= g => {}
            _ => {
                by_ideal.insert(h, (g, nm));
            }
        }
    }
    let mut out: Vec<PrincipalGen> = by_ideal.into_values().map(|(g, norm)| PrincipalGen { g, norm }).collect();
    out.sort_by(|x, y| x.norm.cmp(&y.norm).then_with(|| x.g.cmp(&y.g)));
    Ok(out)
}

/// LLL-reduced basis (integer coordinates over the integral basis) of the
/// ideal lattice under the trace form `T2`.
pub fn reduced_ideal_basis(a: &IdealHNF, k: &FieldData) -> Result<Vec<Vec<BigInt>>, IdealError> {
    let n = k.n;
    let cols = a.columns();
    let emb = k.embeddings(128);
    let degs = k.local_degrees();
    let vecs: Vec<Vec<(Ball, Ball)>> = cols
        .iter()
        .map(|c| {
            emb.iter()
                .map(|row| {
                    let mut re = Ball::zero();
                    let mut im = Ball::zero();
                    for (e, x) in row.iter().zip(c) {
                        if !x.is_zero() {
                            let q = BigRat::from_integer(x.clone());
                            re = &re + &e.re.scale(&q);
                            im = &im + &e.im.scale(&q);
                        }
                    }
                    (re, im)
                })
                .collect()
        })
        .collect();
    let gram: Vec<Vec<BigRat>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = Ball::zero();
                    for (v, &d) in degs.iter().enumerate() {
                        let (a1, b1) = &vecs[i][v];
                        let (a2, b2) = &vecs[j][v];
                        let t = &(a1 * a2) + &(b1 * b2);
                        acc = &acc + &t.scale(&BigRat::from_integer(d.into()));
                    }
                    dyadic_round(&acc.mid, 128)
                })
                .collect()
        })
        .collect();
    let res = lll_gram(&gram)?;
    Ok((0..n)
        .map(|kk| {
            (0..n)
                .map(|row| (0..n).map(|i| &res.transform[i][kk] * &cols[i][row]).sum())
                .collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{quadratic_field, rational_field};

    fn set(v: &[i64]) -> BTreeSet<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn unit_ideal_and_gaussian_gcd() {
        let k = quadratic_field(-1).unwrap();
        assert_eq!(ideal_from_gens(&[k.one()], &k).unwrap(), IdealHNF::identity(2));
        let a = NFElem::from_i64s(&[1, 1]);
        let b = NFElem::from_i64s(&[1, -1]);
        let g = ideal_from_gens(&[a.clone(), b.clone()], &k).unwrap();
        assert_eq!(ideal_norm(&g), BigInt::from(2));
        assert!(is_associate(&a, &b, &k));
        assert_eq!(ideal_norm(&principal(&a, &k).unwrap()), BigInt::from(2));
        // (2) is inside (1 + i)
        assert!(ideal_contains(&principal(&a, &k).unwrap(), &principal(&k.from_int(2), &k).unwrap()));
    }

    #[test]
    fn nonprincipal_prime_over_two() {
        let k = quadratic_field(-5).unwrap();
        let p = ideal_from_gens(&[k.from_int(2), NFElem::from_i64s(&[1, 1])], &k).unwrap();
        assert_eq!(ideal_norm(&p), BigInt::from(2));
        // x^2 + 5 y^2 = 2 has no solution
        let gens = principal_gens(&IdealHNF::identity(2), &set(&[2]), &k).unwrap();
        assert!(gens.is_empty());
        assert!(is_ideal(&p, &k));
        let p2 = ideal_mul(&p, &p, &k);
        assert_eq!(p2, principal(&k.from_int(2), &k).unwrap());
    }

    #[test]
    fn norm_multiplicative_on_products() {
        let k = quadratic_field(-23).unwrap();
        let a = ideal_from_gens(&[k.from_int(2), NFElem::from_i64s(&[0, 1])], &k).unwrap();
        let b = ideal_from_gens(&[k.from_int(3), NFElem::from_i64s(&[1, 1])], &k).unwrap();
        assert_eq!(ideal_norm(&ideal_mul(&a, &b, &k)), ideal_norm(&a) * ideal_norm(&b));
        let s = ideal_add(&a, &b);
        assert_eq!(s, IdealHNF::identity(2));
    }

    #[test]
    fn gaussian_generators_up_to_norm_two() {
        let k = quadratic_field(-1).unwrap();
        let gens = principal_gens(&IdealHNF::identity(2), &set(&[1, 2]), &k).unwrap();
        assert_eq!(gens.len(), 2);
        assert_eq!(gens[0], k.one());
        assert!(is_associate(&gens[1], &NFElem::from_i64s(&[1, 1]), &k));
    }

    #[test]
    fn rational_generators() {
        let k = rational_field();
        let gens = principal_gens(&IdealHNF::identity(1), &set(&[1, 2, 3]), &k).unwrap();
        assert_eq!(gens, vec![k.from_int(1), k.from_int(2), k.from_int(3)]);
    }

    #[test]
    fn unit_reduce_sqrt2() {
        let k = quadratic_field(2).unwrap();
        let eps = k.fund_units[0].clone();
        let x = k.mul(&k.pow(&eps, 3).unwrap(), &k.from_int(7));
        let (a, shift) = unit_reduce(&x, &k).unwrap();
        assert_eq!(shift, vec![3]);
        assert_eq!(a, k.from_int(7));
        let (b, s2) = unit_reduce(&k.mul(&x, &eps), &k).unwrap();
        assert_eq!(s2, vec![4]);
        assert_eq!(canonical_associate(&a, &k), canonical_associate(&b, &k));
        assert_eq!(unit_reduce(&k.one(), &k).unwrap().1, vec![0]);
    }

    #[test]
    fn imaginary_reduce_is_identity() {
        let k = quadratic_field(-7).unwrap();
        let x = NFElem::from_i64s(&[3, 2]);
        assert_eq!(unit_reduce(&x, &k).unwrap(), (x, vec![]));
    }
}
