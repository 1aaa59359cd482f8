//! Certificates for facts the loader cannot check on its own: maximality of
//! a power-basis order (Dedekind criterion), class number one (Minkowski
//! bound plus explicit generators of every small prime ideal), saturation of
//! the listed units, and completeness of the listed roots of unity.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use super::{FieldData, FieldError, NFElem};
use crate::arith::rational::{floor, int, rat, sqrt_upper, BigRat};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertError {
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("Z[alpha] is not maximal at {0}")]
    NotMaximal(u64),
    #[error("no generator of norm {norm} found for a prime over {p}")]
    NoGenerator { p: u64, norm: u64 },
    #[error("could not certify that the units are {0}-saturated")]
    NotSaturated(u64),
    #[error("roots of unity: {listed} listed, residue fields only bound the order by {bound}")]
    RootsOfUnity { listed: usize, bound: u64 },
    #[error(transparent)]
    Field(#[from] FieldError),
}

// ---- F_p[x], coefficients low to high, no trailing zeros

type Fp = Vec<u64>;

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powm(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, b, p);
        }
        b = mulm(b, b, p);
        e >>= 1;
    }
    r
}

fn invm(a: u64, p: u64) -> u64 {
    powm(a, p - 2, p)
}

fn trim(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn deg(a: &Fp) -> usize {
    a.len().saturating_sub(1)
}

fn reduce(f: &[BigInt], p: u64) -> Fp {
    let pb = BigInt::from(p);
    trim(f.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect())
}

fn pmul(a: &Fp, b: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut c = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[i + j] = (c[i + j] + mulm(*x, *y, p)) % p;
        }
    }
    trim(c)
}

fn pdivrem(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp) {
    let mut r = a.clone();
    if r.len() < b.len() {
        return (vec![], r);
    }
    let inv = invm(*b.last().unwrap(), p);
    let mut q = vec![0u64; r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = mulm(*r.last().unwrap(), inv, p);
        q[shift] = c;
        for (i, y) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - mulm(c, *y, p)) % p;
        }
        r = trim(r);
    }
    (trim(q), r)
}

fn pgcd(a: &Fp, b: &Fp, p: u64) -> Fp {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = pdivrem(&a, &b, p).1;
        a = b;
        b = r;
    }
    if let Some(&l) = a.last() {
        let inv = invm(l, p);
        a.iter_mut().for_each(|c| *c = mulm(*c, inv, p));
    }
    a
}

/// `x^e mod m`.
fn xpow_mod(e: u64, m: &Fp, p: u64) -> Fp {
    let mut r: Fp = vec![1];
    let mut b = pdivrem(&vec![0, 1], m, p).1;
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            r = pdivrem(&pmul(&r, &b, p), m, p).1;
        }
        b = pdivrem(&pmul(&b, &b, p), m, p).1;
        e >>= 1;
    }
    r
}

fn eval(f: &Fp, x: u64, p: u64) -> u64 {
    f.iter().rev().fold(0, |acc, c| (mulm(acc, x, p) + c) % p)
}

/// Irreducible factors of a monic `f` of degree at most `dmax`, with
/// multiplicity, by trial division in increasing degree.
fn small_factors(f: &Fp, p: u64, dmax: usize) -> Vec<(Fp, usize)> {
    let mut rest = f.clone();
    let mut out = Vec::new();
    let mut d = 1;
    while 2 * d <= deg(&rest) {
        if d > dmax {
            return out;
        }
        let count = p.pow(d as u32);
        for idx in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut t = idx;
            for _ in 0..d {
                g.push(t % p);
                t /= p;
            }
            g.push(1);
            let mut e = 0;
            loop {
                let (q, r) = pdivrem(&rest, &g, p);
                if !r.is_empty() {
                    break;
                }
                rest = q;
                e += 1;
            }
            if e > 0 {
                out.push((g, e));
            }
        }
        d += 1;
    }
    // what is left has no factor of degree <= deg/2
    if deg(&rest) >= 1 && deg(&rest) <= dmax {
        out.push((rest, 1));
    }
    out
}

fn small_primes(limit: u64) -> Vec<u64> {
    (2..=limit).filter(|&q| (2..).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))).collect()
}

fn is_prime(q: u64) -> bool {
    q >= 2 && (2..).take_while(|d: &u64| d * d <= q).all(|d| !q.is_multiple_of(d))
}

fn is_power_basis(k: &FieldData) -> bool {
    k.basis.iter().enumerate().all(|(i, row)| row.iter().enumerate().all(|(j, c)| *c == int((i == j) as i64)))
}

fn poly_mul_z(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    c
}

/// Dedekind criterion: `Z[alpha]` is `p`-maximal.
fn dedekind(f: &[BigInt], p: u64) -> bool {
    let fb = reduce(f, p);
    let facs = small_factors(&fb, p, deg(&fb));
    let mut g: Fp = vec![1];
    let mut h: Fp = vec![1];
    for (t, e) in &facs {
        g = pmul(&g, t, p);
        for _ in 1..*e {
            h = pmul(&h, t, p);
        }
    }
    let lift = |a: &Fp| a.iter().map(|c| BigInt::from(*c)).collect::<Vec<_>>();
    let mut gh = poly_mul_z(&lift(&g), &lift(&h));
    gh.resize(gh.len().max(f.len()), BigInt::zero());
    let pb = BigInt::from(p);
    let big_f: Vec<BigInt> = gh
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let d = c - f.get(i).cloned().unwrap_or_default();
            debug_assert!(d.is_multiple_of(&pb));
            d / &pb
        })
        .collect();
    let ff = reduce(&big_f, p);
    deg(&pgcd(&pgcd(&ff, &g, p), &h, p)) == 0
}

/// Primes whose square divides `|d|`, or `None` if `d` has a prime factor
/// above the trial-division range.
fn square_prime_divisors(d: &BigInt) -> Option<Vec<u64>> {
    let mut m = d.abs();
    let mut out = Vec::new();
    let mut q = 2u64;
    while BigInt::from(q) * BigInt::from(q) <= m {
        if q > 10_000_000 {
            return None;
        }
        let qb = BigInt::from(q);
        let mut e = 0;
        while m.is_multiple_of(&qb) {
            m /= &qb;
            e += 1;
        }
        if e >= 2 {
            out.push(q);
        }
        q += 1;
    }
    Some(out)
}

/// Checks that the power basis is a basis of the maximal order; returns the
/// primes at which the Dedekind criterion was applied.
pub fn certify_maximal(k: &FieldData) -> Result<Vec<u64>, CertError> {
    if !is_power_basis(k) {
        return Err(CertError::Unsupported("maximality is certified for power bases only".into()));
    }
    let ps = square_prime_divisors(&k.disc)
        .ok_or_else(|| CertError::Unsupported("discriminant has a large prime factor".into()))?;
    for &p in &ps {
        if !dedekind(&k.poly, p) {
            return Err(CertError::NotMaximal(p));
        }
    }
    Ok(ps)
}

/// Upper bound for the Minkowski constant `(4/pi)^{r2} n!/n^n sqrt|d|`.
pub fn minkowski_bound(k: &FieldData) -> BigInt {
    let n = k.n as i64;
    let mut m = BigRat::one();
    for _ in 0..k.r2 {
        // pi > 314159/100000
        m *= rat(400_000, 314_159);
    }
    for i in 1..=n {
        m = m * int(i) / int(n);
    }
    m *= sqrt_upper(&BigRat::from_integer(k.disc.abs()), 32);
    floor(&m)
}

/// A prime ideal `(p, t(alpha))` of norm `p^deg t` and a generator of it.
#[derive(Clone, Debug)]
pub struct PrincipalPrime {
    pub p: u64,
    pub norm: u64,
    pub generator: NFElem,
}

fn find_generator(k: &FieldData, p: u64, t: &Fp, radius: i64) -> Option<NFElem> {
    let n = k.n;
    let d = deg(t);
    let norm = BigRat::from_integer(BigInt::from(p).pow(d as u32));
    // x^i mod t, as vectors of length d
    let pows: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut v = xpow_mod(i as u64, t, p);
            v.resize(d, 0);
            v
        })
        .collect();
    let side = (2 * radius + 1) as u64;
    let total = side.checked_pow(n as u32)?;
    let modp = |c: i64| c.rem_euclid(p as i64) as u64;
    (0..total).into_par_iter().find_map_first(|mut idx| {
        let mut c = vec![0i64; n];
        for ci in c.iter_mut() {
            *ci = (idx % side) as i64 - radius;
            idx /= side;
        }
        if c.iter().all(|x| *x == 0) {
            return None;
        }
        let mut acc = vec![0u64; d];
        for (ci, pw) in c.iter().zip(&pows) {
            if *ci != 0 {
                let cm = modp(*ci);
                for (a, w) in acc.iter_mut().zip(pw) {
                    *a = (*a + mulm(cm, *w, p)) % p;
                }
            }
        }
        if acc.iter().any(|a| *a != 0) {
            return None;
        }
        let x = NFElem::from_i64s(&c);
        (k.norm(&x).abs() == norm).then_some(x)
    })
}

/// Class number one: every prime ideal of norm up to the Minkowski bound is
/// generated by an element with coordinates in `[-radius, radius]`.
pub fn certify_class_number_one(k: &FieldData, radius: i64) -> Result<Vec<PrincipalPrime>, CertError> {
    if k.class_number() != 1 {
        return Err(CertError::Unsupported("class number one certificate for a field with h > 1".into()));
    }
    certify_maximal(k)?;
    let mb = minkowski_bound(k)
        .to_u64()
        .ok_or_else(|| CertError::Unsupported("Minkowski bound too large".into()))?;
    let mut out = Vec::new();
    for p in small_primes(mb) {
        let mut dmax = 0;
        while p.checked_pow(dmax as u32 + 1).is_some_and(|q| q <= mb) {
            dmax += 1;
        }
        let fb = reduce(&k.poly, p);
        for (t, _) in small_factors(&fb, p, dmax) {
            let norm = p.pow(deg(&t) as u32);
            let g = find_generator(k, p, &t, radius).ok_or(CertError::NoGenerator { p, norm })?;
            out.push(PrincipalPrime { p, norm, generator: g });
        }
    }
    Ok(out)
}

/// Some root of `f` modulo `p` when `f` has one.
fn root_mod(f: &Fp, p: u64) -> Option<u64> {
    let xp = xpow_mod(p, f, p);
    let mut d = xp;
    d.resize(d.len().max(2), 0);
    d[1] = (d[1] + p - 1) % p;
    let g = pgcd(f, &trim(d), p);
    if deg(&g) == 0 {
        return None;
    }
    if deg(&g) == 1 {
        return Some((p - g[0]) % p);
    }
    (0..p).find(|x| eval(&g, *x, p) == 0)
}

struct Residue {
    p: u64,
    root: u64,
}

impl Residue {
    /// Image of an element under `alpha -> root`, if its denominators are units mod p.
    fn image(&self, k: &FieldData, x: &NFElem) -> Option<u64> {
        let pb = BigInt::from(self.p);
        let mut acc = 0u64;
        for c in k.to_power_coords(x).iter().rev() {
            let den = c.denom().mod_floor(&pb).to_u64()?;
            if den == 0 {
                return None;
            }
            let num = c.numer().mod_floor(&pb).to_u64()?;
            acc = (mulm(acc, self.root, self.p) + mulm(num, invm(den, self.p), self.p)) % self.p;
        }
        Some(acc)
    }
}

fn bad_prime(k: &FieldData, p: u64) -> bool {
    let pb = BigInt::from(p);
    k.disc.is_multiple_of(&pb) || k.basis.iter().flatten().any(|c| c.denom().is_multiple_of(&pb))
}

fn residues(k: &FieldData, start: u64, step: u64) -> impl Iterator<Item = Residue> + '_ {
    (0..)
        .map(move |i| start + i * step)
        .filter(|p| is_prime(*p))
        .filter(move |p| !bad_prime(k, *p))
        .filter_map(move |p| root_mod(&reduce(&k.poly, p), p).map(|root| Residue { p, root }))
}

/// The listed roots of unity are all of `mu_K`: `|mu_K|` divides `p - 1` for
/// every unramified degree-one prime, and the gcd of these reaches the listed order.
pub fn certify_roots_of_unity(k: &FieldData) -> Result<(), CertError> {
    let w = k.mu.len() as u64;
    let mut g = 0u64;
    for res in residues(k, 3, 1).take(200) {
        g = g.gcd(&(res.p - 1));
        if g == w {
            return Ok(());
        }
    }
    Err(CertError::RootsOfUnity { listed: k.mu.len(), bound: g })
}

fn rank_mod(rows: &[Vec<u64>], l: u64) -> usize {
    let mut m: Vec<Vec<u64>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&i| !m[i][c].is_multiple_of(l)) else { continue };
        m.swap(rank, piv);
        let inv = invm(m[rank][c], l);
        for i in 0..m.len() {
            if i != rank && m[i][c] != 0 {
                let f = mulm(m[i][c], inv, l);
                for j in 0..cols {
                    m[i][j] = (m[i][j] + l - mulm(f, m[rank][j], l)) % l;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Whether no product of the generators is an `l`-th power unless every
/// exponent is divisible by `l`, shown with `l`-th power residue symbols.
fn saturated_at(k: &FieldData, gens: &[NFElem], l: u64) -> bool {
    let mut cols: Vec<Vec<u64>> = vec![Vec::new(); gens.len()];
    for res in residues(k, l + 1, l).take(300) {
        let p = res.p;
        let e = (p - 1) / l;
        let Some(omega) = (2..p).map(|a| powm(a, e, p)).find(|w| *w != 1) else { continue };
        let mut col = Vec::with_capacity(gens.len());
        for g in gens {
            let Some(v) = res.image(k, g).filter(|v| *v != 0) else { break };
            let y = powm(v, e, p);
            let mut cur = 1u64;
            let j = (0..l).find(|_| {
                let hit = cur == y;
                cur = mulm(cur, omega, p);
                hit
            });
            match j {
                Some(j) => col.push(j),
                None => break,
            }
        }
        if col.len() != gens.len() {
            continue;
        }
        for (row, v) in cols.iter_mut().zip(col) {
            row.push(v);
        }
        if rank_mod(&cols, l) == gens.len() {
            return true;
        }
    }
    false
}

/// Upper bound for the regulator of the listed units.
pub fn regulator_upper(k: &FieldData) -> Result<BigRat, CertError> {
    let r = k.unit_rank();
    let delta = crate::arith::rational::pow2(-40);
    let logs: Vec<_> = k.fund_units.iter().map(|u| k.lambda_vec(u, &delta)).collect::<Result<_, _>>()?;
    let m: Vec<Vec<_>> = (0..r).map(|i| (0..r).map(|j| logs[j].entries[i].clone()).collect()).collect();
    let d = super::ball_det(&m);
    Ok(d.mid.abs() + d.rad)
}

/// Units together with `mu_K` generate the full unit group. Any field has
/// regulator above 1/5, so the index is at most `5 R`; every prime up to that
/// is excluded by residue symbols. Returns the index bound.
pub fn certify_units(k: &FieldData) -> Result<u64, CertError> {
    if k.unit_rank() == 0 {
        return Ok(1);
    }
    let bound = floor(&(regulator_upper(k)? * int(5)))
        .to_u64()
        .ok_or_else(|| CertError::Unsupported("regulator too large".into()))?;
    let w = k.mu.len() as u64;
    let zeta = k
        .mu
        .iter()
        .find(|z| (1..w).all(|e| !w.is_multiple_of(e) || k.pow(z, e as i64).is_ok_and(|x| x != k.one())))
        .cloned()
        .ok_or_else(|| CertError::Unsupported("no generator of mu_K".into()))?;
    let primes = small_primes(bound);
    primes.par_iter().try_for_each(|&l| {
        let mut gens = k.fund_units.clone();
        if w.is_multiple_of(l) {
            gens.push(zeta.clone());
        }
        if saturated_at(k, &gens, l) {
            Ok(())
        } else {
            Err(CertError::NotSaturated(l))
        }
    })?;
    Ok(bound.max(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::quadratic_field;

    #[test]
    fn dedekind_examples() {
        let z = |v: &[i64]| v.iter().map(|c| BigInt::from(*c)).collect::<Vec<_>>();
        // x^2 + 3: Z[sqrt -3] is not 2-maximal
        assert!(!dedekind(&z(&[3, 0, 1]), 2));
        // x^6 + 2 is Eisenstein at 2 and passes at 3
        assert!(dedekind(&z(&[2, 0, 0, 0, 0, 0, 1]), 2));
        assert!(dedekind(&z(&[2, 0, 0, 0, 0, 0, 1]), 3));
        // x^2 - 5 is not 2-maximal
        assert!(!dedekind(&z(&[-5, 0, 1]), 2));
    }

    #[test]
    fn quadratic_certificates() {
        // Q(sqrt 2): power basis, h = 1, unit 1 + sqrt 2
        let k = quadratic_field(2).unwrap();
        assert_eq!(certify_maximal(&k).unwrap(), vec![2]);
        assert!(certify_class_number_one(&k, 3).unwrap().is_empty());
        // Q(sqrt 7): bound 2, (2) ramifies as (3 + sqrt 7)^2
        let k7 = quadratic_field(7).unwrap();
        let c = certify_class_number_one(&k7, 3).unwrap();
        assert_eq!((c.len(), c[0].norm), (1, 2));
        certify_units(&k).unwrap();
        certify_roots_of_unity(&k).unwrap();
        let g = quadratic_field(-1).unwrap();
        certify_roots_of_unity(&g).unwrap();
        // Q(sqrt -5) has h = 2
        let k5 = quadratic_field(-5).unwrap();
        assert!(certify_class_number_one(&k5, 3).is_err());
    }

    #[test]
    fn non_fundamental_unit_is_caught() {
        // (1 + sqrt 2)^2 = 3 + 2 sqrt 2 generates an index-2 subgroup
        let k = quadratic_field(2).unwrap();
        let sq = k.mul(&k.fund_units[0], &k.fund_units[0]);
        let gens = vec![sq, k.from_int(-1)];
        assert!(!saturated_at(&k, &gens, 2));
        assert!(saturated_at(&k, &[k.fund_units[0].clone(), k.from_int(-1)], 2));
    }
}
