//! Class data shared by every search path: generators of the principal
//! ideals inside each class representative and the admissible pairs.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use rayon::prelude::*;

use crate::arith::rational::{floor, BigRat};
use crate::field::{FieldData, NFElem};
use crate::ideals::{ideal_from_gens, ideal_norm, principal_gens_with_norms, IdealHNF, PrincipalGen};

use super::SearchError;

/// `(l, (i, j), (n_1, ..., n_r))` with `i < j`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Packet {
    pub l: usize,
    pub i: usize,
    pub j: usize,
    pub n: Vec<i64>,
}

#[derive(Clone, Debug)]
pub struct ClassData {
    pub ideal: IdealHNF,
    pub norm: BigInt,
    /// One generator per principal ideal inside the class representative of
    /// norm at most `B N(a)`, sorted by `(norm, coordinates)`.
    pub gens: Vec<PrincipalGen>,
    pub inverses: Vec<NFElem>,
    /// Pairs `i < j` with `(g_i, g_j) = a`.
    pub pairs: Vec<(u32, u32)>,
}

/// `(g_i, g_j) = a` given `g_i, g_j` in `a`: the sum contains `a`, so norms decide.
fn coprime_pair(a: &ClassData, i: usize, j: usize, k: &FieldData) -> Result<bool, SearchError> {
    let qi = &a.gens[i].norm / &a.norm;
    let qj = &a.gens[j].norm / &a.norm;
    if qi.gcd(&qj).is_one() {
        return Ok(true);
    }
    let s = ideal_from_gens(&[a.gens[i].g.clone(), a.gens[j].g.clone()], k)?;
    Ok(ideal_norm(&s) == a.norm)
}

/// Generators, their inverses and the admissible pairs for every class.
pub fn class_data(k: &FieldData, bound: &BigRat) -> Result<Vec<ClassData>, SearchError> {
    let m_max = floor(bound);
    let mut out = Vec::with_capacity(k.class_reps.len());
    for a in &k.class_reps {
        let na = ideal_norm(a);
        let mut norms = BTreeSet::new();
        let mut m = BigInt::one();
        while m <= m_max {
            norms.insert(&m * &na);
            m += 1;
        }
        let gens = principal_gens_with_norms(a, &norms, k)?;
        let inverses: Vec<NFElem> =
            gens.par_iter().map(|p| k.inv(&p.g)).collect::<Result<_, _>>()?;
        let mut cd = ClassData { ideal: a.clone(), norm: na, gens, inverses, pairs: vec![] };
        let s = cd.gens.len();
        let rows: Vec<Vec<(u32, u32)>> = (0..s)
            .into_par_iter()
            .map(|i| {
                let mut row = Vec::new();
                for j in i + 1..s {
                    if coprime_pair(&cd, i, j, k)? {
                        row.push((i as u32, j as u32));
                    }
                }
                Ok(row)
            })
            .collect::<Result<_, SearchError>>()?;
        cd.pairs = rows.into_iter().flatten().collect();
        out.push(cd);
    }
    Ok(out)
}

/// `c(P) = eps^n g_i / g_j` from the cached unit `eps^n`.
pub fn packet_value(p: &Packet, classes: &[ClassData], unit: &NFElem, k: &FieldData) -> NFElem {
    let c = &classes[p.l];
    k.mul(&k.mul(unit, &c.gens[p.i].g), &c.inverses[p.j])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::int;
    use crate::field::quadratic_field;

    #[test]
    fn gaussian_packet_value() {
        let k = quadratic_field(-1).unwrap();
        let cd = class_data(&k, &int(2)).unwrap();
        assert_eq!(cd.len(), 1);
        assert_eq!(cd[0].gens.len(), 2);
        assert_eq!(cd[0].pairs, vec![(0, 1)]);
        let p = Packet { l: 0, i: 0, j: 1, n: vec![] };
        let c = packet_value(&p, &cd, &k.one(), &k);
        // 1 / (1 + i) up to a root of unity
        assert_eq!(k.norm(&c), BigRat::new(1.into(), 2.into()));
    }

    #[test]
    fn pairs_in_a_nonprincipal_class() {
        let k = quadratic_field(-5).unwrap();
        let cd = class_data(&k, &int(5)).unwrap();
        assert_eq!(cd.len(), 2);
        for c in &cd {
            for &(i, j) in &c.pairs {
                let s = ideal_from_gens(&[c.gens[i as usize].g.clone(), c.gens[j as usize].g.clone()], &k).unwrap();
                assert_eq!(s, c.ideal);
            }
        }
    }
}
