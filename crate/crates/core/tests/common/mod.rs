#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use bounded_height::arith::rational::{ceil, int, max, min, rat, BigRat};
use bounded_height::arith::RatMatrix;
use bounded_height::baseline::{ps_enumerate, DEFAULT_CAP, RESOLVE_BITS};
use bounded_height::field::io::load_field;
use bounded_height::field::{quadratic_field, rational_field, FieldData, NFElem};
use bounded_height::search::{self, resolve_exact, SearchOutput};
use bounded_height::lattice::{build_s_approx, integer_points};
use num_traits::{One, Signed, Zero};

pub fn fixture(name: &str) -> FieldData {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name);
    load_field(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

/// The small fields used by the oracle comparisons.
pub fn oracle_fields() -> Vec<FieldData> {
    let mut v = vec![rational_field()];
    for d in [-1, -3, 2, 5, -5] {
        v.push(quadratic_field(d).unwrap());
    }
    v
}

/// `L` plus the part of `L'` shown to lie at or below `B`; panics if any
/// element of `L'` stays undecided.
pub fn resolved(k: &FieldData, b: &BigRat, theta: &BigRat) -> (SearchOutput, BTreeSet<NFElem>) {
    let out = search::run(k, b, theta).unwrap();
    let r = resolve_exact(&out, k, RESOLVE_BITS).unwrap();
    assert!(r.undecided.is_empty(), "{}: {} undecided", k.label, r.undecided.len());
    let set = r.final_set(&out).into_iter().collect();
    (out, set)
}

pub fn ps_set(k: &FieldData, b: &BigRat) -> BTreeSet<NFElem> {
    let out = ps_enumerate(k, b, DEFAULT_CAP).unwrap();
    assert!(out.borderline.is_empty(), "{}: PS left {} undecided", k.label, out.borderline.len());
    let set: BTreeSet<NFElem> = out.elements.iter().cloned().collect();
    assert_eq!(set.len(), out.elements.len(), "PS emitted duplicates");
    set
}

/// Inversion and roots-of-unity closure of a set of elements; returns the
/// first violation.
pub fn closure_violation(k: &FieldData, set: &BTreeSet<NFElem>) -> Option<String> {
    for x in set {
        if x.is_zero() {
            continue;
        }
        let inv = k.inv(x).unwrap();
        if !set.contains(&inv) {
            return Some(format!("{x:?} present but 1/x missing"));
        }
        for z in &k.mu {
            if !set.contains(&k.mul(z, x)) {
                return Some(format!("{x:?} present but zeta x missing for zeta = {z:?}"));
            }
        }
    }
    None
}

/// Fails when `L` and `L'` together repeat an element.
pub fn has_duplicates(out: &SearchOutput) -> bool {
    let all = out.elements();
    let set: BTreeSet<&NFElem> = all.iter().collect();
    set.len() != all.len()
}

/// Vertices of `[-d, d]^r`.
pub fn vertices(r: usize, d: &BigRat) -> Vec<Vec<BigRat>> {
    (0..1usize << r)
        .map(|mask| (0..r).map(|i| if mask >> i & 1 == 1 { d.clone() } else { -d.clone() }).collect())
        .collect()
}

/// `S~ S^{-1}` maps `[-d, d]^r` into `[-e, e]^r`; by convexity the vertices decide it.
pub fn box_maps_into(s_tilde: &RatMatrix, s_inv: &RatMatrix, d: &BigRat, e: &BigRat) -> bool {
    let a = s_tilde.mul(s_inv);
    vertices(s_tilde.rows, d).iter().all(|y| a.mul_vec(y).iter().all(|v| v.abs() <= *e))
}

pub fn sup(a: &RatMatrix) -> BigRat {
    a.sup_norm()
}

/// `|A|_2 < lambda`, exactly: `lambda^2 I - A^T A` positive definite, by
/// leading principal minors.
pub fn operator_norm_below(a: &RatMatrix, lambda: &BigRat) -> bool {
    let n = a.cols;
    let g = a.transpose().mul(a);
    let l2 = lambda * lambda;
    let h = RatMatrix::from_rows(
        (0..n).map(|i| (0..n).map(|j| if i == j { &l2 - g.get(i, j) } else { -g.get(i, j).clone() }).collect()).collect(),
    );
    (1..=n).all(|k| {
        let minor = RatMatrix::from_rows((0..k).map(|i| h.row(i)[..k].to_vec()).collect());
        minor.det().is_positive()
    })
}

pub fn perturb(v: &RatMatrix, bound: &BigRat, f: &[i64]) -> RatMatrix {
    let r = v.rows;
    RatMatrix::from_rows(
        (0..r).map(|i| (0..r).map(|j| v.get(i, j) + bound * rat(f[i * r + j], 1000)).collect()).collect(),
    )
}

/// Builds the schedule constants for `S`, `d` and `eta`, perturbs `S` by less
/// than `delta` entrywise (`f / 1000` of it) and checks the inflated box.
pub fn containment_holds(s: &RatMatrix, d: &BigRat, eta: &BigRat, f: &[i64]) -> bool {
    let rr = int(s.rows as i64);
    let s_inv = s.inverse().unwrap();
    let m = BigRat::from_integer(ceil(&(&rr * &rr * max(&sup(s), &sup(&s_inv)))));
    let lambda = eta / (d * &rr * (BigRat::one() + &m));
    let delta = min(&(&lambda / (&rr * &rr * (&m * &m + &m * &lambda))), &(BigRat::one() / (&rr * &rr)));
    let s_tilde = perturb(s, &delta, f);
    !s_tilde.det().is_zero() && box_maps_into(&s_tilde, &s_inv, d, &(d + eta))
}

/// `|V~^{-1} - V^{-1}| < lambda` for a 3x3 `V` perturbed below
/// `lambda / (9 (m^2 + m lambda))`, with `m = ceil(9 |V^{-1}|_sup) + slack`.
pub fn perturbation_holds(v: &RatMatrix, lambda: &BigRat, slack: i64, f: &[i64]) -> bool {
    let v_inv = v.inverse().unwrap();
    let m = BigRat::from_integer(ceil(&(int(9) * sup(&v_inv)))) + int(slack);
    let bound = lambda / (int(9) * (&m * &m + &m * lambda));
    let vt_inv = perturb(v, &bound, f).inverse().unwrap();
    operator_norm_below(&vt_inv.sub(&v_inv), lambda)
}

/// Every integer point of `S~^{-1}([-d, d]^r)` inside `[-M, M]^r`.
pub fn m_bound_violation(k: &FieldData, d: &BigRat) -> Option<String> {
    let sa = build_s_approx(k, d, &rat(1, 100)).unwrap();
    let m = BigRat::from_integer(sa.big_m.clone());
    let pts = integer_points(&sa.s, &sa.s_inv, d).unwrap();
    if pts.is_empty() {
        return Some(format!("{} d = {d}: no points (the origin is always inside)", k.label));
    }
    pts.iter()
        .find(|p| p.iter().any(|n| int(n.abs()) > m))
        .map(|p| format!("{} d = {d}: {p:?} outside [-{m}, {m}]", k.label))
}
