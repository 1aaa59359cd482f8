//! Univariate polynomials with integer or rational coefficients (ascending order).

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::rational::BigRat;

pub type IntPoly = Vec<BigInt>;
pub type RatPoly = Vec<BigRat>;

pub fn int_poly(c: &[i64]) -> IntPoly {
    c.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn trim_rat(mut p: RatPoly) -> RatPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

pub fn to_rat(p: &[BigInt]) -> RatPoly {
    trim_rat(p.iter().map(|c| BigRat::from_integer(c.clone())).collect())
}

pub fn is_zero(p: &[BigInt]) -> bool {
    p.iter().all(|c| c.is_zero())
}

/// Degree of a nonzero polynomial.
pub fn degree(p: &[BigInt]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn eval_rat(p: &[BigRat], x: &BigRat) -> BigRat {
    let mut acc = BigRat::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

pub fn eval_int_at(p: &[BigInt], x: &BigRat) -> BigRat {
    // Horner on numerator/denominator to avoid repeated gcds.
    let d = degree(p).unwrap_or(0);
    let (a, b) = (x.numer(), x.denom());
    let mut acc = BigInt::zero();
    let mut bpow = BigInt::one();
    for i in (0..=d).rev() {
        acc = acc * a + &p[i] * &bpow;
        if i > 0 {
            bpow *= b;
        }
    }
    // acc = sum p_i a^i b^(d-i)
    BigRat::new(acc, num_traits::pow(b.clone(), d))
}

pub fn derivative(p: &[BigRat]) -> RatPoly {
    trim_rat(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRat::from_integer(i.into()))
            .collect(),
    )
}

/// Remainder of `a` modulo nonzero `b`.
pub fn rem(a: &[BigRat], b: &[BigRat]) -> RatPoly {
    let b = trim_rat(b.to_vec());
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut r = trim_rat(a.to_vec());
    let db = b.len() - 1;
    let lc = b[db].clone();
    while r.len() > db {
        let dr = r.len() - 1;
        let f = &r[dr] / &lc;
        for i in 0..=db {
            let v = &r[dr - db + i] - &f * &b[i];
            r[dr - db + i] = v;
        }
        r = trim_rat(r);
    }
    r
}

pub fn divide_exact(a: &[BigRat], b: &[BigRat]) -> RatPoly {
    let b = trim_rat(b.to_vec());
    let mut r = trim_rat(a.to_vec());
    let db = b.len() - 1;
    if r.len() < b.len() {
        return vec![];
    }
    let mut q = vec![BigRat::zero(); r.len() - db];
    while r.len() > db {
        let dr = r.len() - 1;
        let f = &r[dr] / &b[db];
        for i in 0..=db {
            let v = &r[dr - db + i] - &f * &b[i];
            r[dr - db + i] = v;
        }
        q[dr - db] = f;
        r = trim_rat(r);
    }
    q
}

pub fn gcd(a: &[BigRat], b: &[BigRat]) -> RatPoly {
    let mut a = trim_rat(a.to_vec());
    let mut b = trim_rat(b.to_vec());
    while !b.is_empty() {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    if let Some(lc) = a.last().cloned() {
        a.iter_mut().for_each(|c| *c /= &lc);
    }
    a
}

/// `p / gcd(p, p')`, made monic.
pub fn squarefree_part(p: &[BigInt]) -> RatPoly {
    let pr = to_rat(p);
    let g = gcd(&pr, &derivative(&pr));
    let mut q = divide_exact(&pr, &g);
    if let Some(lc) = q.last().cloned() {
        q.iter_mut().for_each(|c| *c /= &lc);
    }
    q
}

pub fn sturm_sequence(p: &[BigRat]) -> Vec<RatPoly> {
    let mut seq = vec![trim_rat(p.to_vec())];
    let d = derivative(p);
    if d.is_empty() {
        return seq;
    }
    seq.push(d);
    loop {
        let n = seq.len();
        let r = rem(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    seq
}

fn sign_of(q: &BigRat) -> i8 {
    match q.cmp(&BigRat::zero()) {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

fn changes(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut c = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            c += 1;
        }
        last = s;
    }
    c
}

pub fn sign_changes_at(seq: &[RatPoly], x: &BigRat) -> usize {
    changes(seq.iter().map(|p| sign_of(&eval_rat(p, x))))
}

fn sign_changes_at_infinity(seq: &[RatPoly], positive: bool) -> usize {
    changes(seq.iter().map(|p| {
        let lc = sign_of(p.last().unwrap());
        if !positive && (p.len() - 1) % 2 == 1 {
            -lc
        } else {
            lc
        }
    }))
}

/// Number of distinct real roots in `(a, b]`.
pub fn count_roots_in(seq: &[RatPoly], a: &BigRat, b: &BigRat) -> usize {
    sign_changes_at(seq, a) - sign_changes_at(seq, b)
}

/// Number of distinct real roots.
pub fn count_real_roots(seq: &[RatPoly]) -> usize {
    sign_changes_at_infinity(seq, false) - sign_changes_at_infinity(seq, true)
}

/// Bound `1 + max |c_i / c_d|` on the absolute value of every complex root.
pub fn cauchy_bound(p: &[BigRat]) -> BigRat {
    let p = trim_rat(p.to_vec());
    let lc = p.last().unwrap().abs();
    let m = p[..p.len() - 1].iter().map(|c| c.abs()).max().unwrap_or_else(BigRat::zero);
    BigRat::one() + m / lc
}
