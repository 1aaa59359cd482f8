//! Certified root isolation and refinement for integer polynomials.
//!
//! Real roots are isolated with Sturm sequences and refined by bisection.
//! All complex roots are approximated simultaneously (Aberth in doubles, then
//! Weierstrass iterations on dyadic rationals) and certified by inclusion
//! disks `D(z_i, n |W_i|)`: pairwise disjoint disks each hold exactly one root.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use super::ball::{Ball, CBall};
use super::poly::{
    count_real_roots, count_roots_in, degree, eval_rat, squarefree_part, sturm_sequence,
    RatPoly,
};
use super::rational::{
    dyadic_round, from_f64, pow2, sqrt_upper, to_f64, BigRat,
};
use super::ArithError;

/// Isolating region for a single root: a real interval or a rectangle in the upper half plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootEnclosure {
    Real { lo: BigRat, hi: BigRat },
    Complex { re: (BigRat, BigRat), im: (BigRat, BigRat) },
}

impl RootEnclosure {
    pub fn is_real(&self) -> bool {
        matches!(self, RootEnclosure::Real { .. })
    }
}

/// A certified disk around one root.
#[derive(Clone, Debug)]
pub struct RootDisk {
    pub re: BigRat,
    pub im: BigRat,
    pub rad: BigRat,
}

impl RootDisk {
    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn to_cball(&self) -> CBall {
        let im = if self.im.is_zero() {
            Ball::zero()
        } else {
            Ball::new(self.im.clone(), self.rad.clone())
        };
        CBall::new(Ball::new(self.re.clone(), self.rad.clone()), im)
    }

    fn inside_rect(&self, re: &(BigRat, BigRat), im: &(BigRat, BigRat)) -> bool {
        &self.re - &self.rad >= re.0
            && &self.re + &self.rad <= re.1
            && &self.im - &self.rad >= im.0
            && &self.im + &self.rad <= im.1
    }

    fn meets_rect(&self, re: &(BigRat, BigRat), im: &(BigRat, BigRat)) -> bool {
        !(&self.re + &self.rad < re.0
            || &self.re - &self.rad > re.1
            || &self.im + &self.rad < im.0
            || &self.im - &self.rad > im.1)
    }
}

#[derive(Clone, Debug)]
struct CRat {
    re: BigRat,
    im: BigRat,
}

impl CRat {
    fn mul(&self, o: &CRat) -> CRat {
        CRat {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
    fn sub(&self, o: &CRat) -> CRat {
        CRat { re: &self.re - &o.re, im: &self.im - &o.im }
    }
    fn norm_sq(&self) -> BigRat {
        &self.re * &self.re + &self.im * &self.im
    }
    fn round(&self, prec: u32) -> CRat {
        CRat { re: dyadic_round(&self.re, prec), im: dyadic_round(&self.im, prec) }
    }
    fn div_round(&self, o: &CRat, prec: u32) -> CRat {
        let d = o.norm_sq();
        CRat {
            re: dyadic_round(&((&self.re * &o.re + &self.im * &o.im) / &d), prec),
            im: dyadic_round(&((&self.im * &o.re - &self.re * &o.im) / &d), prec),
        }
    }
}

fn horner(p: &[BigRat], z: &CRat, round: Option<u32>) -> CRat {
    let mut acc = CRat { re: BigRat::zero(), im: BigRat::zero() };
    for c in p.iter().rev() {
        acc = acc.mul(z);
        acc.re += c;
        if let Some(w) = round {
            acc = acc.round(w);
        }
    }
    acc
}

fn aberth_f64(p: &[BigRat]) -> Vec<Complex64> {
    let n = p.len() - 1;
    let lc = to_f64(&p[n]);
    let c: Vec<f64> = p.iter().map(|x| to_f64(x) / lc).collect();
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut f = Complex64::new(0.0, 0.0);
        let mut d = Complex64::new(0.0, 0.0);
        for k in (0..=n).rev() {
            d = d * z + f;
            f = f * z + c[k];
        }
        (f, d)
    };
    let rad = c[..n].iter().map(|x| x.abs()).fold(0.0f64, f64::max).powf(1.0 / n as f64).max(0.5);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(rad, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (f, d) = eval(z[i]);
            if f.norm() == 0.0 {
                continue;
            }
            let ratio = f / d;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    s += 1.0 / (z[i] - z[j]);
                }
            }
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Approximations of all roots of a squarefree polynomial, arranged as
/// `r1` real roots followed by conjugate pairs `(z, conj z)`.
struct Approx {
    p: RatPoly,
    z: Vec<CRat>,
    r1: usize,
}

impl Approx {
    fn new(p: RatPoly) -> Result<Approx, ArithError> {
        let n = p.len() - 1;
        let r1 = count_real_roots(&sturm_sequence(&p));
        let mut f = aberth_f64(&p);
        f.sort_by(|a, b| a.im.abs().partial_cmp(&b.im.abs()).unwrap());
        let mut z = Vec::with_capacity(n);
        for w in f.iter().take(r1) {
            z.push(CRat { re: from_f64(w.re), im: BigRat::zero() });
        }
        let mut upper: Vec<Complex64> = f[r1..].iter().filter(|w| w.im > 0.0).cloned().collect();
        if upper.len() * 2 != n - r1 {
            // fall back on magnitudes when signs are unreliable
            upper = f[r1..].iter().map(|w| Complex64::new(w.re, w.im.abs())).collect();
            upper.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
            upper.dedup_by(|a, b| (a.re - b.re).abs() < 1e-9 && (a.im - b.im).abs() < 1e-9);
            if upper.len() * 2 != n - r1 {
                return Err(ArithError::NotIsolating);
            }
        }
        for w in upper {
            let im = from_f64(w.im.max(f64::MIN_POSITIVE));
            z.push(CRat { re: from_f64(w.re), im: im.clone() });
            z.push(CRat { re: from_f64(w.re), im: -im });
        }
        Ok(Approx { p, z, r1 })
    }

    fn weierstrass_step(&mut self, prec: u32) -> BigRat {
        let n = self.z.len();
        let lc = CRat { re: self.p[n].clone(), im: BigRat::zero() };
        let mut corr = Vec::with_capacity(n);
        let mut worst = BigRat::zero();
        for i in 0..n {
            if i >= self.r1 && (i - self.r1) % 2 == 1 {
                corr.push(None);
                continue;
            }
            let f = horner(&self.p, &self.z[i], Some(prec + 16));
            let mut den = lc.clone();
            for j in 0..n {
                if j != i {
                    den = den.mul(&self.z[i].sub(&self.z[j])).round(prec + 16);
                }
            }
            if den.norm_sq().is_zero() {
                return BigRat::one();
            }
            let mut w = f.div_round(&den, prec + 4);
            if i < self.r1 {
                w.im = BigRat::zero();
            }
            let m = w.re.abs() + w.im.abs();
            if m > worst {
                worst = m;
            }
            corr.push(Some(w));
        }
        for i in 0..n {
            if let Some(w) = &corr[i] {
                self.z[i] = self.z[i].sub(w).round(prec);
            }
        }
        for i in (self.r1..n).step_by(2) {
            self.z[i + 1] = CRat { re: self.z[i].re.clone(), im: -self.z[i].im.clone() };
        }
        worst
    }

    /// Exact inclusion radii; `None` when disks overlap.
    fn certify(&self) -> Option<Vec<BigRat>> {
        let n = self.z.len();
        let lc2 = &self.p[n] * &self.p[n];
        let nn = BigRat::from_integer((n * n).into());
        let mut radii: Vec<BigRat> = Vec::with_capacity(n);
        for i in 0..n {
            if i >= self.r1 && (i - self.r1) % 2 == 1 {
                radii.push(radii[i - 1].clone());
                continue;
            }
            let f = horner(&self.p, &self.z[i], None);
            let mut den = lc2.clone();
            for j in 0..n {
                if j != i {
                    den *= self.z[i].sub(&self.z[j]).norm_sq();
                }
            }
            if den.is_zero() {
                return None;
            }
            let r2 = &nn * f.norm_sq() / den;
            let bits = (r2.denom().bits() as i64 - r2.numer().bits() as i64).max(0) as u32 / 2 + 40;
            radii.push(sqrt_upper(&r2, bits));
        }
        for i in 0..n {
            for j in i + 1..n {
                let s = &radii[i] + &radii[j];
                if self.z[i].sub(&self.z[j]).norm_sq() <= &s * &s {
                    return None;
                }
            }
        }
        Some(radii)
    }
}

/// All roots of `poly` (any integer polynomial; multiplicities ignored) with
/// certified disks of radius below `2^-prec`. Real roots come first in
/// ascending order, then one representative with positive imaginary part of
/// each conjugate pair, sorted by imaginary part then real part.
pub fn certified_roots(poly: &[BigInt], prec: u32) -> Result<Vec<RootDisk>, ArithError> {
    if degree(poly).is_none() {
        return Err(ArithError::ZeroPolynomial);
    }
    let p = squarefree_part(poly);
    if p.len() <= 1 {
        return Ok(vec![]);
    }
    if p.len() == 2 {
        return Ok(vec![RootDisk { re: -&p[0] / &p[1], im: BigRat::zero(), rad: BigRat::zero() }]);
    }
    let mut a = Approx::new(p)?;
    let target = pow2(-(prec as i64));
    let mut w: u32 = 64;
    let mut stalls = 0;
    for _ in 0..400 {
        let step = a.weierstrass_step(w);
        if step < pow2(-(w as i64) + 8) {
            if w >= prec + 24 {
                if let Some(radii) = a.certify() {
                    if radii.iter().all(|r| *r < target) {
                        return Ok(arrange(&a, radii));
                    }
                }
                w += 32;
                stalls += 1;
                if stalls > 12 {
                    break;
                }
            } else {
                w = (2 * w).min(prec + 24);
            }
        }
    }
    Err(ArithError::NotIsolating)
}

fn arrange(a: &Approx, radii: Vec<BigRat>) -> Vec<RootDisk> {
    let mut real: Vec<RootDisk> = (0..a.r1)
        .map(|i| RootDisk { re: a.z[i].re.clone(), im: BigRat::zero(), rad: radii[i].clone() })
        .collect();
    real.sort_by(|x, y| x.re.cmp(&y.re));
    let mut cplx: Vec<RootDisk> = (a.r1..a.z.len())
        .step_by(2)
        .map(|i| RootDisk { re: a.z[i].re.clone(), im: a.z[i].im.clone(), rad: radii[i].clone() })
        .collect();
    let tie = pow2(-30);
    cplx.sort_by(|x, y| {
        if (&x.im - &y.im).abs() > tie {
            x.im.cmp(&y.im)
        } else {
            x.re.cmp(&y.re)
        }
    });
    real.extend(cplx);
    real
}

/// Isolating enclosures in place order: real roots ascending, then complex
/// roots with positive imaginary part ordered by imaginary part (real part on ties).
pub fn isolate_roots(poly: &[BigInt]) -> Result<Vec<RootEnclosure>, ArithError> {
    let disks = certified_roots(poly, 40)?;
    Ok(disks
        .iter()
        .map(|d| {
            if d.is_real() {
                RootEnclosure::Real { lo: &d.re - &d.rad, hi: &d.re + &d.rad }
            } else {
                RootEnclosure::Complex {
                    re: (&d.re - &d.rad, &d.re + &d.rad),
                    im: (&d.im - &d.rad, &d.im + &d.rad),
                }
            }
        })
        .collect())
}

fn refine_real(
    p: &RatPoly,
    lo: &BigRat,
    hi: &BigRat,
    target: &BigRat,
) -> Result<CBall, ArithError> {
    if lo > hi {
        return Err(ArithError::NotIsolating);
    }
    let seq = sturm_sequence(p);
    let at_lo = eval_rat(p, lo).is_zero() as usize;
    if count_roots_in(&seq, lo, hi) + at_lo != 1 {
        return Err(ArithError::NotIsolating);
    }
    if p.len() == 2 {
        return Ok(CBall::real(Ball::exact(-&p[0] / &p[1])));
    }
    for e in [lo, hi] {
        if eval_rat(p, e).is_zero() {
            return Ok(CBall::real(Ball::exact(e.clone())));
        }
    }
    let (mut a, mut b) = (lo.clone(), hi.clone());
    let two = BigRat::from_integer(2.into());
    let sa = eval_rat(p, &a).is_positive();
    while &b - &a >= &two * target {
        let m = (&a + &b) / &two;
        let fm = eval_rat(p, &m);
        if fm.is_zero() {
            return Ok(CBall::real(Ball::exact(m)));
        }
        if fm.is_positive() == sa {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(CBall::real(Ball::from_interval(&a, &b)))
}

/// Refines the root isolated by `enclosure` to a ball of radius below `target`.
///
/// For a fixed enclosure the refinement follows one deterministic sequence,
/// so smaller targets give nested results.
pub fn refine_root(
    poly: &[BigInt],
    enclosure: &RootEnclosure,
    target: &BigRat,
) -> Result<CBall, ArithError> {
    if degree(poly).is_none() {
        return Err(ArithError::ZeroPolynomial);
    }
    if !target.is_positive() {
        return Err(ArithError::NonPositive);
    }
    let p = squarefree_part(poly);
    match enclosure {
        RootEnclosure::Real { lo, hi } => refine_real(&p, lo, hi, target),
        RootEnclosure::Complex { re, im } => {
            if re.0 > re.1 || im.0 > im.1 {
                return Err(ArithError::NotIsolating);
            }
            let mut box_re = re.clone();
            let mut box_im = im.clone();
            let mut verified = false;
            for k in 0..12u32 {
                let prec = 48u32 << k;
                let disks = all_disks(poly, prec)?;
                let hits: Vec<&RootDisk> = disks.iter().filter(|d| d.meets_rect(re, im)).collect();
                if hits.is_empty() || hits.len() > 1 && hits.iter().all(|d| d.inside_rect(re, im)) {
                    return Err(ArithError::NotIsolating);
                }
                if hits.len() == 1 {
                    let d = hits[0];
                    verified |= d.inside_rect(re, im);
                    box_re = (
                        std::cmp::max(box_re.0, &d.re - &d.rad),
                        std::cmp::min(box_re.1, &d.re + &d.rad),
                    );
                    box_im = (
                        std::cmp::max(box_im.0, &d.im - &d.rad),
                        std::cmp::min(box_im.1, &d.im + &d.rad),
                    );
                    let two = BigRat::from_integer(2.into());
                    if verified
                        && (&box_re.1 - &box_re.0) < &two * target
                        && (&box_im.1 - &box_im.0) < &two * target
                    {
                        return Ok(CBall::new(
                            Ball::from_interval(&box_re.0, &box_re.1),
                            Ball::from_interval(&box_im.0, &box_im.1),
                        ));
                    }
                }
            }
            Err(ArithError::NotIsolating)
        }
    }
}

/// Disks for every root including both members of conjugate pairs.
fn all_disks(poly: &[BigInt], prec: u32) -> Result<Vec<RootDisk>, ArithError> {
    let mut out = Vec::new();
    for d in certified_roots(poly, prec)? {
        if !d.is_real() {
            out.push(RootDisk { re: d.re.clone(), im: -&d.im, rad: d.rad.clone() });
        }
        out.push(d);
    }
    Ok(out)
}

/// Checks that a real interval or upper-half-plane rectangle isolates exactly one root.
pub fn verify_isolation(poly: &[BigInt], enclosure: &RootEnclosure) -> Result<(), ArithError> {
    match enclosure {
        RootEnclosure::Real { lo, hi } => {
            let p = squarefree_part(poly);
            let seq = sturm_sequence(&p);
            let at_lo = eval_rat(&p, lo).is_zero() as usize;
            if lo > hi || count_roots_in(&seq, lo, hi) + at_lo != 1 {
                return Err(ArithError::NotIsolating);
            }
            Ok(())
        }
        RootEnclosure::Complex { re, im } => {
            if !im.0.is_positive() || re.0 > re.1 || im.0 > im.1 {
                return Err(ArithError::NotIsolating);
            }
            for k in 0..10u32 {
                let disks = all_disks(poly, 48u32 << k)?;
                let inside = disks.iter().filter(|d| d.inside_rect(re, im)).count();
                let meets = disks.iter().filter(|d| d.meets_rect(re, im)).count();
                if inside == 1 && meets == 1 {
                    return Ok(());
                }
                if inside > 1 || meets == 0 {
                    return Err(ArithError::NotIsolating);
                }
            }
            Err(ArithError::NotIsolating)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::poly::int_poly;
    use crate::arith::rational::{int, rat};

    #[test]
    fn sqrt2_by_bisection_oracle() {
        let p = int_poly(&[-2, 0, 1]);
        let enc = RootEnclosure::Real { lo: int(1), hi: int(2) };
        let b = refine_root(&p, &enc, &rat(1, 1_000_000)).unwrap();
        assert!(b.re.rad < rat(1, 1_000_000));
        // oracle: 1.4142135 < sqrt 2 < 1.4142136 by squaring
        let lo = rat(14142135, 10_000_000);
        let hi = rat(14142136, 10_000_000);
        assert!(&lo * &lo < int(2) && &hi * &hi > int(2));
        assert!(b.re.lo() <= hi && b.re.hi() >= lo);
        assert!(b.re.lo() * b.re.lo() <= int(2) && b.re.hi() * b.re.hi() >= int(2));
    }

    #[test]
    fn rational_root_is_exact() {
        let p = int_poly(&[-3, 1]);
        let enc = RootEnclosure::Real { lo: int(0), hi: int(10) };
        let b = refine_root(&p, &enc, &int(1)).unwrap();
        assert_eq!(b.re, Ball::exact(int(3)));
    }

    #[test]
    fn complex_i() {
        let p = int_poly(&[1, 0, 1]);
        let enc = RootEnclosure::Complex { re: (rat(-1, 2), rat(1, 2)), im: (rat(1, 2), rat(3, 2)) };
        let b = refine_root(&p, &enc, &rat(1, 10_000)).unwrap();
        assert!(b.re.contains(&int(0)) && b.im.contains(&int(1)));
        assert!(b.re.rad < rat(1, 10_000) && b.im.rad < rat(1, 10_000));
    }

    #[test]
    fn non_isolating_rejected() {
        let p = int_poly(&[-2, 0, 1]);
        let enc = RootEnclosure::Real { lo: int(-2), hi: int(2) };
        assert!(refine_root(&p, &enc, &rat(1, 10)).is_err());
        assert!(matches!(
            refine_root(&int_poly(&[0]), &enc, &rat(1, 10)),
            Err(ArithError::ZeroPolynomial)
        ));
    }

    #[test]
    fn nesting_for_fixed_enclosure() {
        let p = int_poly(&[2, 0, 0, 0, 0, 0, 1]);
        let encs = isolate_roots(&p).unwrap();
        assert_eq!(encs.len(), 3);
        let mut prev: Option<CBall> = None;
        for k in 1..6 {
            let b = refine_root(&p, &encs[0], &pow2(-(10 * k))).unwrap();
            if let Some(pb) = &prev {
                assert!(pb.re.contains_ball(&b.re) && pb.im.contains_ball(&b.im));
            }
            prev = Some(b);
        }
    }

    #[test]
    fn cyclotomic_roots_certified() {
        let p = int_poly(&[1; 13]);
        let d = certified_roots(&p, 200).unwrap();
        assert_eq!(d.len(), 6);
        for x in &d {
            assert!(!x.is_real() && x.rad < pow2(-200));
            // |z| = 1
            let m = &x.re * &x.re + &x.im * &x.im - int(1);
            assert!(m.abs() < pow2(-190));
        }
    }

    #[test]
    fn mixed_signature() {
        // x^3 - 2 : one real root, one complex pair
        let p = int_poly(&[-2, 0, 0, 1]);
        let d = certified_roots(&p, 100).unwrap();
        assert_eq!(d.len(), 2);
        assert!(d[0].is_real() && !d[1].is_real());
        let r = &d[0].re;
        assert!((to_f64(r) - 2f64.cbrt()).abs() < 1e-15);
        for e in isolate_roots(&p).unwrap() {
            verify_isolation(&p, &e).unwrap();
        }
    }
}
