//! Number field data: integral basis, signature, class representatives,
//! units, roots of unity, certified embeddings and the logarithmic map.

pub mod certify;
pub mod elem;
pub mod io;
pub mod quadratic;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::ball::{Ball, CBall};
use crate::arith::interval::{CInterval, FInterval};
use crate::arith::log::log_ball;
use crate::arith::poly::{count_real_roots, degree, derivative, gcd, sturm_sequence, to_rat};
use crate::arith::rational::{bits_for, log2_upper, pow2, BigRat};
use crate::arith::roots::{certified_roots, verify_isolation, RootDisk, RootEnclosure};
use crate::arith::{det_bareiss, ArithError, RatMatrix};
use crate::ideals::hnf::IdealHNF;

pub use elem::NFElem;
pub use quadratic::{quadratic_field, rational_field};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("argument not squarefree: {0}")]
    NotSquarefree(String),
    #[error("zero element where a nonzero one is required")]
    ZeroElement,
    #[error("division by zero")]
    DivisionByZero,
    #[error("precision limit reached while {0}")]
    Precision(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// An archimedean place: an isolating enclosure of the root of the defining
/// polynomial that it sends the generator to, and its local degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Place {
    pub enclosure: RootEnclosure,
    pub local_degree: u8,
}

/// Enclosures of `n_v log |x|_v`, one per place in place order.
#[derive(Debug, Clone)]
pub struct LogVec {
    pub entries: Vec<Ball>,
}

impl LogVec {
    pub fn max_rad(&self) -> BigRat {
        self.entries.iter().map(|b| b.rad.clone()).max().unwrap_or_else(BigRat::zero)
    }

    /// Ball enclosing the sum of the entries.
    pub fn sum(&self) -> Ball {
        self.entries.iter().fold(Ball::zero(), |a, b| &a + b)
    }
}

/// Raw description of a field prior to verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    pub label: String,
    pub poly: Vec<BigInt>,
    pub basis: Vec<Vec<BigRat>>,
    pub disc: BigInt,
    pub class_reps: Vec<Vec<Vec<BigInt>>>,
    pub fund_units: Vec<Vec<BigRat>>,
    pub mu: Vec<Vec<BigRat>>,
    pub places: Vec<Place>,
}

pub struct FieldData {
    pub label: String,
    pub n: usize,
    pub poly: Vec<BigInt>,
    /// Power-basis coordinates of the integral basis, one row per element.
    pub basis: Vec<Vec<BigRat>>,
    pub r1: usize,
    pub r2: usize,
    pub disc: BigInt,
    pub class_reps: Vec<IdealHNF>,
    pub fund_units: Vec<NFElem>,
    pub mu: Vec<NFElem>,
    pub places: Vec<Place>,
    /// The units exactly as supplied, before lattice reduction.
    pub input_units: Vec<NFElem>,
    mult: Vec<Vec<Vec<BigInt>>>,
    basis_inv: RatMatrix,
    unit_inv: Vec<NFElem>,
    emb_guard: u32,
    emb_cache: Mutex<HashMap<u32, Arc<Vec<Vec<CBall>>>>>,
    emb_float: OnceLock<Vec<Vec<CInterval>>>,
    unit_lat: OnceLock<crate::lattice::UnitLattice>,
}

impl std::fmt::Debug for FieldData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldData")
            .field("label", &self.label)
            .field("n", &self.n)
            .field("r1", &self.r1)
            .field("r2", &self.r2)
            .field("disc", &self.disc)
            .field("h", &self.class_reps.len())
            .field("w", &self.mu.len())
            .finish()
    }
}

fn inv_err(s: &str) -> FieldError {
    FieldError::Invariant(s.to_string())
}

/// `a * b mod f` for monic `f`, all in power-basis coordinates.
fn poly_mul_mod(a: &[BigRat], b: &[BigRat], f: &[BigInt]) -> Vec<BigRat> {
    let n = f.len() - 1;
    let mut prod = vec![BigRat::zero(); 2 * n];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            prod[i + j] += x * y;
        }
    }
    for k in (n..2 * n).rev() {
        let c = std::mem::replace(&mut prod[k], BigRat::zero());
        if c.is_zero() {
            continue;
        }
        for i in 0..n {
            prod[k - n + i] -= &c * BigRat::from_integer(f[i].clone());
        }
    }
    prod.truncate(n);
    prod
}

impl FieldData {
    /// Builds a field from a raw description, verifying every invariant.
    pub fn from_spec(spec: FieldSpec) -> Result<FieldData, FieldError> {
        let n = degree(&spec.poly).ok_or_else(|| inv_err("zero defining polynomial"))?;
        if n == 0 || spec.poly.len() != n + 1 || !spec.poly[n].is_one() {
            return Err(inv_err("defining polynomial must be monic of positive degree"));
        }
        let pr = to_rat(&spec.poly);
        if gcd(&pr, &derivative(&pr)).len() > 1 {
            return Err(inv_err("defining polynomial is not squarefree"));
        }
        if spec.basis.len() != n || spec.basis.iter().any(|r| r.len() != n) {
            return Err(FieldError::Schema("integral_basis must be n rows of n rationals".into()));
        }
        if spec.basis[0][0] != BigRat::one() || spec.basis[0][1..].iter().any(|x| !x.is_zero()) {
            return Err(inv_err("first integral basis element must be 1"));
        }
        let wmat = RatMatrix::from_rows(spec.basis.clone());
        let basis_inv = wmat.inverse().map_err(|_| inv_err("integral basis is linearly dependent"))?;

        // multiplication table over the integral basis
        let mut mult = vec![vec![vec![BigInt::zero(); n]; n]; n];
        for i in 0..n {
            for j in i..n {
                let p = poly_mul_mod(&spec.basis[i], &spec.basis[j], &spec.poly);
                let c = RatMatrix::from_rows(vec![p]).mul(&basis_inv);
                for k in 0..n {
                    let v = c.get(0, k);
                    if !v.is_integer() {
                        return Err(inv_err("integral basis is not closed under multiplication"));
                    }
                    mult[i][j][k] = v.to_integer();
                    mult[j][i][k] = v.to_integer();
                }
            }
        }
        let traces: Vec<BigInt> = (0..n).map(|k| (0..n).map(|i| mult[k][i][i].clone()).sum()).collect();
        let gram: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| &mult[i][j][k] * &traces[k]).sum())
                    .collect()
            })
            .collect();
        if det_bareiss(gram) != spec.disc {
            return Err(inv_err("basis discriminant differs from the stated discriminant"));
        }

        // places
        let r1 = count_real_roots(&sturm_sequence(&pr));
        if (n - r1) % 2 != 0 {
            return Err(inv_err("inconsistent signature"));
        }
        let r2 = (n - r1) / 2;
        let deg_sum: usize = spec.places.iter().map(|p| p.local_degree as usize).sum();
        if deg_sum != n || spec.places.len() != r1 + r2 {
            return Err(inv_err("local degrees of places do not sum to the degree"));
        }
        for p in &spec.places {
            let ok = match (&p.enclosure, p.local_degree) {
                (RootEnclosure::Real { .. }, 1) | (RootEnclosure::Complex { .. }, 2) => true,
                _ => false,
            };
            if !ok {
                return Err(inv_err("local degree inconsistent with enclosure type"));
            }
            verify_isolation(&spec.poly, &p.enclosure)
                .map_err(|_| inv_err("root enclosure does not isolate exactly one root"))?;
        }
        for a in 0..spec.places.len() {
            for b in a + 1..spec.places.len() {
                if enclosures_meet(&spec.places[a].enclosure, &spec.places[b].enclosure) {
                    return Err(inv_err("two places share a root enclosure"));
                }
            }
        }

        let mut k = FieldData {
            label: spec.label.clone(),
            n,
            poly: spec.poly.clone(),
            basis: spec.basis.clone(),
            r1,
            r2,
            disc: spec.disc.clone(),
            class_reps: vec![],
            fund_units: vec![],
            mu: vec![],
            places: spec.places.clone(),
            input_units: vec![],
            mult,
            basis_inv,
            unit_inv: vec![],
            emb_guard: 0,
            emb_cache: Mutex::new(HashMap::new()),
            emb_float: OnceLock::new(),
            unit_lat: OnceLock::new(),
        };
        let root_bits = log2_upper(&crate::arith::poly::cauchy_bound(&pr)).max(1) as u32;
        let basis_bits = spec
            .basis
            .iter()
            .flatten()
            .map(|x| x.numer().bits().max(x.denom().bits()))
            .max()
            .unwrap_or(1) as u32;
        k.emb_guard = 16 + n as u32 * root_bits + basis_bits + 2 * (64 - (n as u64).leading_zeros());

        // class representatives
        if spec.class_reps.is_empty() {
            return Err(inv_err("at least one class representative (the unit ideal) is required"));
        }
        for (idx, m) in spec.class_reps.iter().enumerate() {
            let h = IdealHNF::from_matrix(m.clone())
                .map_err(|_| inv_err("class representative is not in Hermite normal form"))?;
            if h.dim() != n || !crate::ideals::is_ideal(&h, &k) {
                return Err(inv_err("class representative is not an integral ideal"));
            }
            if idx == 0 && h != IdealHNF::identity(n) {
                return Err(inv_err("first class representative must be the unit ideal"));
            }
            k.class_reps.push(h);
        }

        // roots of unity
        let w = spec.mu.len();
        if w < 2 || w % 2 != 0 {
            return Err(inv_err("roots of unity must form a group of even order"));
        }
        let mut mu: Vec<NFElem> = Vec::with_capacity(w);
        for c in &spec.mu {
            if c.len() != n {
                return Err(FieldError::Schema("root of unity has wrong dimension".into()));
            }
            let z = NFElem::from_coords(c);
            if !z.is_integral() || k.pow(&z, w as i64)? != NFElem::one(n) {
                return Err(inv_err("listed root of unity does not satisfy x^w = 1"));
            }
            if mu.contains(&z) {
                return Err(inv_err("repeated root of unity"));
            }
            mu.push(z);
        }
        for a in &mu {
            for b in &mu {
                if !mu.contains(&k.mul(a, b)) {
                    return Err(inv_err("roots of unity are not closed under multiplication"));
                }
            }
        }
        k.mu = mu;

        // units
        let r = r1 + r2 - 1;
        if spec.fund_units.len() != r {
            return Err(inv_err("number of fundamental units differs from the unit rank"));
        }
        let mut units = Vec::with_capacity(r);
        for c in &spec.fund_units {
            if c.len() != n {
                return Err(FieldError::Schema("unit has wrong dimension".into()));
            }
            let u = NFElem::from_coords(c);
            if !u.is_integral() || k.norm(&u).abs() != BigRat::one() {
                return Err(inv_err("fundamental unit is not a unit (integral with norm +-1)"));
            }
            units.push(u);
        }
        k.input_units = units.clone();
        if r > 0 {
            if !k.units_independent(&units)? {
                return Err(inv_err("fundamental units are multiplicatively dependent"));
            }
            units = crate::lattice::reduce_units(&k, &units)?;
        }
        k.unit_inv = units.iter().map(|u| k.inv(u)).collect::<Result<_, _>>()?;
        k.fund_units = units;
        let lat = crate::lattice::UnitLattice::new(&k)?;
        let _ = k.unit_lat.set(lat);
        Ok(k)
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn unit_rank(&self) -> usize {
        self.r1 + self.r2 - 1
    }

    pub fn class_number(&self) -> usize {
        self.class_reps.len()
    }

    pub fn is_imaginary_quadratic(&self) -> bool {
        self.n == 2 && self.r1 == 0
    }

    pub fn is_real_quadratic(&self) -> bool {
        self.n == 2 && self.r1 == 2
    }

    pub fn local_degrees(&self) -> Vec<u8> {
        self.places.iter().map(|p| p.local_degree).collect()
    }

    /// Gram-Schmidt data of the (reduced) unit log lattice.
    pub fn unit_lattice(&self) -> &crate::lattice::UnitLattice {
        self.unit_lat.get().expect("unit lattice is built at construction")
    }

    pub fn unit_inverses(&self) -> &[NFElem] {
        &self.unit_inv
    }

    pub fn zero(&self) -> NFElem {
        NFElem::zero(self.n)
    }

    pub fn one(&self) -> NFElem {
        NFElem::one(self.n)
    }

    pub fn from_rat(&self, q: &BigRat) -> NFElem {
        NFElem::from_rat(self.n, q)
    }

    pub fn from_int(&self, q: i64) -> NFElem {
        NFElem::from_rat(self.n, &BigRat::from_integer(q.into()))
    }

    /// Integral-basis coordinates of `omega_i * omega_j`.
    pub fn mult_table(&self, i: usize, j: usize) -> &[BigInt] {
        &self.mult[i][j]
    }

    /// Converts power-basis coordinates to an element.
    pub fn from_power_coords(&self, c: &[BigRat]) -> NFElem {
        let v = RatMatrix::from_rows(vec![c.to_vec()]).mul(&self.basis_inv);
        NFElem::from_coords(v.row(0))
    }

    pub fn to_power_coords(&self, x: &NFElem) -> Vec<BigRat> {
        let w = RatMatrix::from_rows(self.basis.clone());
        RatMatrix::from_rows(vec![x.coords()]).mul(&w).row(0).to_vec()
    }

    fn mul_ints(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let n = self.n;
        let mut c = vec![BigInt::zero(); n];
        for i in 0..n {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if b[j].is_zero() {
                    continue;
                }
                let t = &a[i] * &b[j];
                for (k, m) in self.mult[i][j].iter().enumerate() {
                    if !m.is_zero() {
                        c[k] += &t * m;
                    }
                }
            }
        }
        c
    }

    pub fn mul(&self, x: &NFElem, y: &NFElem) -> NFElem {
        NFElem::new(self.mul_ints(x.num(), y.num()), x.den() * y.den())
    }

    /// Integer matrix of multiplication by an integral vector: column `j` holds `a * omega_j`.
    pub fn mul_matrix(&self, a: &[BigInt]) -> Vec<Vec<BigInt>> {
        let n = self.n;
        let mut m = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..n {
                for k in 0..n {
                    if !self.mult[i][j][k].is_zero() {
                        m[k][j] += &a[i] * &self.mult[i][j][k];
                    }
                }
            }
        }
        m
    }

    pub fn norm(&self, x: &NFElem) -> BigRat {
        let d = det_bareiss(self.mul_matrix(x.num()));
        BigRat::new(d, num_traits::pow(x.den().clone(), self.n))
    }

    /// Norm of an integral element given by integer coordinates.
    pub fn norm_int(&self, a: &[BigInt]) -> BigInt {
        det_bareiss(self.mul_matrix(a))
    }

    pub fn trace(&self, x: &NFElem) -> BigRat {
        let t: BigInt = (0..self.n)
            .map(|i| {
                let s: BigInt = (0..self.n).map(|k| &self.mult[i][k][k]).sum();
                &x.num()[i] * s
            })
            .sum();
        BigRat::new(t, x.den().clone())
    }

    pub fn inv(&self, x: &NFElem) -> Result<NFElem, FieldError> {
        if x.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let n = self.n;
        if n == 1 {
            return Ok(NFElem::from_rat(1, &x.coord(0).recip()));
        }
        let m = self.mul_matrix(x.num());
        let rm = RatMatrix::from_rows(
            m.into_iter().map(|r| r.into_iter().map(BigRat::from_integer).collect()).collect(),
        );
        let mut e = vec![BigRat::zero(); n];
        e[0] = BigRat::one();
        let y = rm.solve(&e).map_err(|_| FieldError::DivisionByZero)?;
        Ok(NFElem::from_coords(&y).scale(&BigRat::from_integer(x.den().clone())))
    }

    pub fn div(&self, x: &NFElem, y: &NFElem) -> Result<NFElem, FieldError> {
        Ok(self.mul(x, &self.inv(y)?))
    }

    pub fn pow(&self, x: &NFElem, e: i64) -> Result<NFElem, FieldError> {
        let mut base = if e < 0 { self.inv(x)? } else { x.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        Ok(acc)
    }

    /// `eps_1^{n_1} ... eps_r^{n_r}` using the stored inverses for negative exponents.
    pub fn unit_power(&self, n: &[i64]) -> NFElem {
        let mut acc = self.one();
        for (j, &e) in n.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let base = if e > 0 { &self.fund_units[j] } else { &self.unit_inv[j] };
            acc = self.mul(&acc, &self.pow(base, e.abs()).expect("nonzero unit"));
        }
        acc
    }

    /// Certified disks for the place roots at radius below `2^-prec`.
    fn place_roots(&self, prec: u32) -> Result<Vec<CBall>, FieldError> {
        let mut p = prec;
        for _ in 0..8 {
            let disks = certified_roots(&self.poly, p)?;
            let mut out = Vec::with_capacity(self.places.len());
            let mut ok = true;
            for pl in &self.places {
                let hits: Vec<&RootDisk> = disks.iter().filter(|d| disk_meets(d, &pl.enclosure)).collect();
                if hits.len() != 1 {
                    ok = false;
                    break;
                }
                out.push(hits[0].to_cball());
            }
            if ok {
                return Ok(out);
            }
            p += 64;
        }
        Err(FieldError::Precision("matching roots to places".into()))
    }

    /// `sigma_v(omega_k)` for every place `v` and basis element `k`, radius about `2^-prec`.
    pub fn embeddings(&self, prec: u32) -> Arc<Vec<Vec<CBall>>> {
        let key = prec.div_ceil(32) * 32;
        if let Some(e) = self.emb_cache.lock().unwrap().get(&key) {
            return e.clone();
        }
        let work = key + self.emb_guard;
        let roots = self.place_roots(work).expect("places verified at construction");
        let emb: Vec<Vec<CBall>> = roots
            .iter()
            .map(|z| {
                let mut pows = vec![CBall::one()];
                for j in 1..self.n {
                    let next = (&pows[j - 1] * z).round(work);
                    pows.push(next);
                }
                self.basis
                    .iter()
                    .map(|row| {
                        let mut acc = CBall::zero();
                        for (c, pw) in row.iter().zip(&pows) {
                            if !c.is_zero() {
                                acc = &acc + &pw.scale(c);
                            }
                        }
                        acc.round(work)
                    })
                    .collect()
            })
            .collect();
        let emb = Arc::new(emb);
        self.emb_cache.lock().unwrap().insert(key, emb.clone());
        emb
    }

    /// Outward-rounded double enclosures of `sigma_v(omega_k)`.
    pub fn embeddings_f64(&self) -> &Vec<Vec<CInterval>> {
        self.emb_float.get_or_init(|| {
            self.embeddings(128)
                .iter()
                .map(|row| row.iter().map(CInterval::from_cball).collect())
                .collect()
        })
    }

    /// Double-interval enclosures of `sigma_v(x)` for an element.
    pub fn embed_f64(&self, x: &NFElem) -> Vec<CInterval> {
        let emb = self.embeddings_f64();
        let inv_den = FInterval::from_rat(&BigRat::new(BigInt::one(), x.den().clone()));
        emb.iter()
            .map(|row| {
                let mut acc = CInterval::zero();
                for (c, e) in x.num().iter().zip(row) {
                    if !c.is_zero() {
                        acc = acc.add(e.scale(FInterval::from_bigint(c)));
                    }
                }
                acc.scale(inv_den)
            })
            .collect()
    }

    /// Double-interval enclosure of `Lambda(x)`; `None` when some embedding
    /// cannot be separated from zero at this precision.
    pub fn lambda_f64(&self, x: &NFElem) -> Option<Vec<FInterval>> {
        self.embed_f64(x)
            .into_iter()
            .zip(&self.places)
            .map(|(z, p)| {
                let a = z.abs_sq();
                if !(a.lo > 0.0) || !a.hi.is_finite() {
                    return None;
                }
                // n_v log|z| = (n_v / 2) log|z|^2
                let l = a.ln();
                Some(if p.local_degree == 1 { l * FInterval::point(0.5) } else { l })
            })
            .collect()
    }

    /// `sigma_v(x)` for each place, computed at working precision `prec`.
    pub fn embed(&self, x: &NFElem, prec: u32) -> Vec<CBall> {
        let emb = self.embeddings(prec);
        let inv_den = BigRat::new(BigInt::one(), x.den().clone());
        emb.iter()
            .map(|row| {
                let mut acc = CBall::zero();
                for (c, e) in x.num().iter().zip(row) {
                    if !c.is_zero() {
                        acc = &acc + &e.scale(&BigRat::from_integer(c.clone()));
                    }
                }
                acc.scale(&inv_den).round(prec + 8)
            })
            .collect()
    }

    /// `|sigma_v(x)|^{n_v}` for each place.
    pub fn abs_pow(&self, x: &NFElem, prec: u32) -> Vec<Ball> {
        self.embed(x, prec)
            .iter()
            .zip(&self.places)
            .map(|(z, p)| if p.local_degree == 1 { z.re.abs() } else { z.abs_sq() })
            .collect()
    }

    /// `Lambda(x)` with every entry's radius below `delta`.
    pub fn lambda_vec(&self, x: &NFElem, delta: &BigRat) -> Result<LogVec, FieldError> {
        if x.is_zero() {
            return Err(FieldError::ZeroElement);
        }
        if !delta.is_positive() {
            return Err(FieldError::Arith(ArithError::NonPositive));
        }
        if x.as_rational().is_some() {
            let q = x.coord(0).abs();
            let lq = log_ball(&Ball::exact(q), &(delta / BigRat::from_integer(2.into())))?;
            return Ok(LogVec {
                entries: self
                    .places
                    .iter()
                    .map(|p| lq.scale(&BigRat::from_integer(p.local_degree.into())))
                    .collect(),
            });
        }
        let half = delta / BigRat::from_integer(2.into());
        let mut prec = bits_for(delta) + 24 + x.max_bits() as u32;
        for _ in 0..24 {
            let vals = self.abs_pow(x, prec);
            let mut entries = Vec::with_capacity(vals.len());
            for v in &vals {
                let lo = v.lo();
                if !lo.is_positive() || &v.rad / &lo >= half {
                    break;
                }
                entries.push(log_ball(v, &half)?);
            }
            if entries.len() == vals.len() && entries.iter().all(|b| &b.rad < delta) {
                return Ok(LogVec { entries });
            }
            prec += prec / 2 + 32;
        }
        Err(FieldError::Precision("evaluating the logarithmic map".into()))
    }

    /// Certifies independence of units through the sign of the determinant of
    /// their truncated log matrix.
    fn units_independent(&self, units: &[NFElem]) -> Result<bool, FieldError> {
        let r = units.len();
        let mut delta = pow2(-20);
        for _ in 0..12 {
            let logs: Vec<LogVec> = units.iter().map(|u| self.lambda_vec(u, &delta)).collect::<Result<_, _>>()?;
            let m: Vec<Vec<Ball>> = (0..r).map(|i| (0..r).map(|j| logs[j].entries[i].clone()).collect()).collect();
            let d = ball_det(&m);
            if !d.contains_zero() {
                return Ok(true);
            }
            delta = &delta * pow2(-20);
        }
        Ok(false)
    }
}

/// Ball determinant by cofactor expansion (small sizes only).
pub fn ball_det(m: &[Vec<Ball>]) -> Ball {
    let r = m.len();
    match r {
        0 => Ball::one(),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = Ball::zero();
            for j in 0..r {
                let minor: Vec<Vec<Ball>> = (1..r)
                    .map(|i| (0..r).filter(|&c| c != j).map(|c| m[i][c].clone()).collect())
                    .collect();
                let t = &m[0][j] * &ball_det(&minor);
                acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
            }
            acc
        }
    }
}

fn disk_meets(d: &RootDisk, e: &RootEnclosure) -> bool {
    match e {
        RootEnclosure::Real { lo, hi } => d.is_real() && &d.re + &d.rad >= *lo && &d.re - &d.rad <= *hi,
        RootEnclosure::Complex { re, im } => {
            !d.is_real()
                && !(&d.re + &d.rad < re.0
                    || &d.re - &d.rad > re.1
                    || &d.im + &d.rad < im.0
                    || &d.im - &d.rad > im.1)
        }
    }
}

fn enclosures_meet(a: &RootEnclosure, b: &RootEnclosure) -> bool {
    match (a, b) {
        (RootEnclosure::Real { lo: l1, hi: h1 }, RootEnclosure::Real { lo: l2, hi: h2 }) => !(h1 < l2 || h2 < l1),
        (RootEnclosure::Complex { re: r1, im: i1 }, RootEnclosure::Complex { re: r2, im: i2 }) => {
            !(r1.1 < r2.0 || r2.1 < r1.0 || i1.1 < i2.0 || i2.1 < i1.0)
        }
        _ => false,
    }
}
