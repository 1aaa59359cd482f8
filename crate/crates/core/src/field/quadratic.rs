//! Quadratic fields from binary quadratic forms and reduced ideals, and the
//! rational field.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{FieldData, FieldError, FieldSpec, Place};
use crate::arith::rational::{int, BigRat};
use crate::arith::roots::{isolate_roots, RootEnclosure};

fn is_squarefree(d: i64) -> bool {
    let mut m = d.unsigned_abs();
    let mut p = 2u64;
    while p * p <= m {
        if m % (p * p) == 0 {
            return false;
        }
        if m % p == 0 {
            m /= p;
        }
        p += 1;
    }
    true
}

/// `Q(sqrt d)` with integral basis `{1, omega}`, where `omega = (1 + sqrt d)/2`
/// for `d = 1 mod 4` and `omega = sqrt d` otherwise.
pub fn quadratic_field(d: i64) -> Result<FieldData, FieldError> {
    FieldData::from_spec(quadratic_spec(d)?)
}

/// The field `Q` itself, presented with defining polynomial `x`.
pub fn rational_field() -> FieldData {
    let spec = FieldSpec {
        label: "Q".into(),
        poly: vec![BigInt::zero(), BigInt::one()],
        basis: vec![vec![int(1)]],
        disc: BigInt::one(),
        class_reps: vec![vec![vec![BigInt::one()]]],
        fund_units: vec![],
        mu: vec![vec![int(1)], vec![int(-1)]],
        places: vec![Place { enclosure: RootEnclosure::Real { lo: int(0), hi: int(0) }, local_degree: 1 }],
    };
    FieldData::from_spec(spec).expect("the rational field is valid")
}

/// Quadratic number `(p + q sqrt(disc))` with rational parts.
#[derive(Clone, Debug)]
struct Surd {
    p: BigRat,
    q: BigRat,
}

impl Surd {
    fn mul(&self, o: &Surd, disc: &BigInt) -> Surd {
        Surd {
            p: &self.p * &o.p + &self.q * &o.q * BigRat::from_integer(disc.clone()),
            q: &self.p * &o.q + &self.q * &o.p,
        }
    }
}

/// Discriminant and the map from `p + q sqrt(disc)` to basis coordinates.
struct QuadData {
    disc: BigInt,
    one_mod_four: bool,
}

impl QuadData {
    fn coords(&self, s: &Surd) -> Vec<BigRat> {
        let two = int(2);
        if self.one_mod_four {
            // sqrt(disc) = 2 omega - 1
            vec![&s.p - &s.q, &s.q * two]
        } else {
            // sqrt(disc) = 2 omega
            vec![s.p.clone(), &s.q * two]
        }
    }

    /// HNF of `a Z + ((b + sqrt disc)/2) Z`.
    fn ideal(&self, a: &BigInt, b: &BigInt) -> Vec<Vec<BigInt>> {
        let k: BigInt = if self.one_mod_four { (b - 1) / 2 } else { b / 2 };
        vec![vec![a.clone(), k.mod_floor(a)], vec![BigInt::zero(), BigInt::one()]]
    }
}

pub(crate) fn quadratic_spec(d: i64) -> Result<FieldSpec, FieldError> {
    if d == 0 || d == 1 || !is_squarefree(d) {
        return Err(FieldError::NotSquarefree(format!("{d} is not a squarefree integer other than 0, 1")));
    }
    let one_mod_four = d.rem_euclid(4) == 1;
    let (poly, disc) = if one_mod_four {
        (vec![BigInt::from(-(d - 1) / 4), BigInt::from(-1), BigInt::one()], BigInt::from(d))
    } else {
        (vec![BigInt::from(-d), BigInt::zero(), BigInt::one()], BigInt::from(4 * d))
    };
    let q = QuadData { disc: disc.clone(), one_mod_four };
    let (class_reps, fund_units, mu) = if d < 0 {
        let reps = imaginary_class_reps(&q);
        let w: usize = match d {
            -1 => 4,
            -3 => 6,
            _ => 2,
        };
        let mu = if w == 2 {
            vec![vec![int(1), int(0)], vec![int(-1), int(0)]]
        } else {
            // omega itself is a primitive w-th root of unity here
            let mut out = vec![vec![int(1), int(0)]];
            let mut cur = (int(1), int(0));
            let (c0, c1) = if d == -1 { (int(-1), int(0)) } else { (int(-1), int(1)) };
            for _ in 1..w {
                // (x + y omega) omega = x omega + y omega^2, omega^2 = c0 + c1 omega
                cur = (&cur.1 * &c0, &cur.0 + &cur.1 * &c1);
                out.push(vec![cur.0.clone(), cur.1.clone()]);
            }
            out
        };
        (reps, vec![], mu)
    } else {
        let (reps, eps) = real_class_data(&q);
        (reps, vec![q.coords(&eps)], vec![vec![int(1), int(0)], vec![int(-1), int(0)]])
    };
    let places = isolate_roots(&poly)?
        .into_iter()
        .map(|e| {
            let local_degree = if e.is_real() { 1 } else { 2 };
            Place { enclosure: e, local_degree }
        })
        .collect();
    Ok(FieldSpec {
        label: format!("quad:{d}"),
        poly,
        basis: vec![vec![int(1), int(0)], vec![int(0), int(1)]],
        disc,
        class_reps,
        fund_units,
        mu,
        places,
    })
}

/// Reduced positive definite forms `(a, b, c)`, one per class, mapped to ideals.
fn imaginary_class_reps(q: &QuadData) -> Vec<Vec<Vec<BigInt>>> {
    let dd = -&q.disc;
    let mut forms = Vec::new();
    let mut a = BigInt::one();
    while &a * &a * 3 <= dd {
        let mut b: BigInt = -&a + 1;
        while b <= a {
            let num: BigInt = &b * &b + &dd;
            if num.is_multiple_of(&(&a * 4)) {
                let c = &num / (&a * 4);
                let ok = c >= a && !(b.is_negative() && (c == a)) && a.gcd(&b).gcd(&c).is_one();
                if ok {
                    forms.push((a.clone(), b.clone()));
                }
            }
            b += 1;
        }
        a += 1;
    }
    forms.sort();
    forms.iter().map(|(a, b)| q.ideal(a, b)).collect()
}

/// Reduced ideals grouped into cycles; returns one ideal per cycle and the
/// fundamental unit read off the principal cycle.
fn real_class_data(q: &QuadData) -> (Vec<Vec<Vec<BigInt>>>, Surd) {
    let disc = &q.disc;
    let s = disc.sqrt();
    let mut reduced: Vec<(BigInt, BigInt)> = Vec::new();
    let mut b = BigInt::one();
    while b <= s {
        let nb: BigInt = disc - &b * &b;
        if (&b - disc).is_even() && nb.is_multiple_of(&BigInt::from(4)) {
            let n4: BigInt = &nb / 4;
            let mut a = BigInt::one();
            while &(&a * 2) - &b <= s {
                if n4.is_multiple_of(&a) && &(&a * 2) + &b > s {
                    reduced.push((a.clone(), b.clone()));
                }
                a += 1;
            }
        }
        b += 1;
    }
    reduced.sort();
    let mut seen = std::collections::HashSet::new();
    let mut reps = Vec::new();
    let mut eps = None;
    for start in &reduced {
        if seen.contains(start) {
            continue;
        }
        let mut cur = start.clone();
        let mut prod = Surd { p: int(1), q: int(0) };
        let mut min = start.clone();
        loop {
            seen.insert(cur.clone());
            let (a, b) = &cur;
            let two_a = a * 2;
            let qf = (b + &s).div_floor(&two_a);
            let b1 = &two_a * &qf - b;
            let a1 = (disc - &b1 * &b1) / (a * 4);
            let next = (a1, b1);
            // theta_next = (b1 + sqrt disc) / (2 a1)
            let theta = Surd {
                p: BigRat::new(next.1.clone(), &next.0 * 2),
                q: BigRat::new(BigInt::one(), &next.0 * 2),
            };
            prod = prod.mul(&theta, disc);
            if next < min {
                min = next.clone();
            }
            cur = next;
            if &cur == start {
                break;
            }
        }
        if min.0.is_one() {
            eps = Some(prod);
            reps.insert(0, min);
        } else {
            reps.push(min);
        }
    }
    let principal = reps.remove(0);
    reps.sort();
    reps.insert(0, principal);
    let ideals = reps.iter().map(|(a, b)| q.ideal(a, b)).collect();
    (ideals, eps.expect("the principal cycle exists"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::NFElem;

    #[test]
    fn gaussian_field() {
        let k = quadratic_field(-1).unwrap();
        assert_eq!((k.n, k.r1, k.r2, k.unit_rank(), k.class_number(), k.mu.len()), (2, 0, 1, 0, 1, 4));
        assert_eq!(k.disc, BigInt::from(-4));
    }

    #[test]
    fn eisenstein_field() {
        let k = quadratic_field(-3).unwrap();
        assert_eq!(k.mu.len(), 6);
        assert_eq!(k.disc, BigInt::from(-3));
    }

    #[test]
    fn sqrt2_unit() {
        let k = quadratic_field(2).unwrap();
        assert_eq!(k.fund_units, vec![NFElem::from_i64s(&[1, 1])]);
        assert_eq!(k.norm(&k.fund_units[0]), int(-1));
    }

    #[test]
    fn class_numbers_brute_force() {
        // classical values: h(-107)=3, h(-5)=2, h(-23)=3, h(10)=2, h(79)=3, h(82)=4, h(5)=1
        for (d, h) in [(-107, 3), (-5, 2), (-23, 3), (-1, 1), (10, 2), (79, 3), (82, 4), (5, 1), (3, 1), (15, 2)] {
            let k = quadratic_field(d).unwrap();
            assert_eq!(k.class_number(), h, "d = {d}");
        }
    }

    #[test]
    fn pell_oracle_for_units() {
        // smallest solution of x^2 - d y^2 = +-1 (or +-4 when d = 1 mod 4), by brute force
        for d in [2i64, 3, 5, 6, 7, 13, 19, 29] {
            let k = quadratic_field(d).unwrap();
            let eps = &k.fund_units[0];
            let (x, y) = if d % 4 == 1 {
                let (a, b) = (eps.coord(0), eps.coord(1));
                // eps = a + b (1 + sqrt d)/2 = (2a + b + b sqrt d) / 2
                (int(2) * a + &b, b)
            } else {
                (eps.coord(0), eps.coord(1))
            };
            let target = if d % 4 == 1 { 4 } else { 1 };
            let mut best = None;
            'outer: for yy in 1i64..10_000 {
                for t in [-target, target] {
                    let x2 = d * yy * yy + t;
                    if x2 > 0 {
                        let xx = (x2 as f64).sqrt().round() as i64;
                        if xx * xx == x2 {
                            best = Some((xx, yy));
                            break 'outer;
                        }
                    }
                }
            }
            let (bx, by) = best.unwrap();
            assert_eq!((x, y), (int(bx), int(by)), "d = {d}");
        }
    }

    #[test]
    fn disc_matches_residue() {
        for d in [-7i64, -6, 2, 3, 5, 13, 14] {
            let k = quadratic_field(d).unwrap();
            let want = if d.rem_euclid(4) == 1 { d } else { 4 * d };
            assert_eq!(k.disc, BigInt::from(want));
        }
    }

    #[test]
    fn rejects_non_squarefree() {
        assert!(quadratic_field(12).is_err());
        assert!(quadratic_field(1).is_err());
        assert!(quadratic_field(0).is_err());
    }

    #[test]
    fn rational_field_shape() {
        let k = rational_field();
        assert_eq!((k.n, k.unit_rank(), k.mu.len()), (1, 0, 2));
    }
}
