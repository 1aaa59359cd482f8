//! The Pethő-Schmitt scan: every `x` with `H_K(x) <= B` is `alpha / c` with
//! `1 <= c <= B` and `alpha = sum a_i w_i` over an LLL-reduced integral basis,
//! `|a_i| <= 2^{n(n-1)/4} B c`. Also the bench report rows.

use std::cmp::Ordering;
use std::io::Write;
use std::time::Duration;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;

use crate::arith::interval::{CInterval, FInterval};
use crate::arith::rational::{floor, fmt_rat, to_f64, BigRat};
use crate::field::{FieldData, NFElem};
use crate::height::compare_height;
use crate::ideals::{ideal_from_gens, ideal_norm, reduced_ideal_basis, IdealHNF};
use crate::search::SearchError;

/// Default refusal threshold on the number of scanned tuples.
pub const DEFAULT_CAP: u64 = 2_000_000_000;

/// Precision budget for heights the double filter cannot decide.
/// Precision cap for exact comparisons against the bound.
pub const RESOLVE_BITS: u32 = 4096;

#[derive(Clone, Debug)]
pub struct PsOutput {
    /// Elements certified to have `H_K(x) <= B`, sorted by coordinates.
    pub elements: Vec<NFElem>,
    /// Elements whose height could not be separated from `B`.
    pub borderline: Vec<NFElem>,
    pub search_space: BigInt,
}

impl PsOutput {
    pub fn found(&self) -> u64 {
        (self.elements.len() + self.borderline.len()) as u64
    }
}

/// `D = floor(2^{n(n-1)/4} B c)`, computed exactly as the integer fourth
/// root of `floor(2^{n(n-1)} (Bc)^4)`.
pub fn coefficient_bound(n: usize, bound: &BigRat, c: u64) -> BigInt {
    let x = bound * BigRat::from_integer(c.into());
    let x4 = &x * &x * &x * &x;
    floor(&(x4 * BigRat::from_integer(BigInt::one() << (n * (n - 1))))).nth_root(4)
}

/// `sum_{c=1}^{floor B} (2 D_c + 1)^n`.
pub fn ps_search_space(n: usize, bound: &BigRat) -> BigInt {
    let cmax = floor(bound).to_u64().unwrap_or(0);
    (1..=cmax)
        .map(|c| num_traits::pow(BigInt::from(2) * coefficient_bound(n, bound, c) + 1, n))
        .sum()
}

/// Whether `space > B^{2n} 2^{n^2(n-1)/4 + n}`, compared after raising both
/// sides to the fourth power.
pub fn exceeds_lower_bound(n: usize, bound: &BigRat, space: &BigInt) -> bool {
    let s = BigRat::from_integer(space.clone());
    let lhs = &s * &s * &s * &s;
    let e = n * n * (n - 1) + 4 * n;
    let rhs = num_traits::pow(bound.clone(), 8 * n) * BigRat::from_integer(BigInt::one() << e);
    lhs > rhs
}

struct Ctx<'a> {
    k: &'a FieldData,
    bound: &'a BigRat,
    /// `basis[i]` holds the integral-basis coordinates of the i-th reduced vector.
    basis: Vec<Vec<BigInt>>,
    /// `w[i][v] = sigma_v(basis[i])`.
    w: Vec<Vec<CInterval>>,
    local: Vec<u8>,
}

#[derive(Default)]
struct Found {
    inside: Vec<NFElem>,
    borderline: Vec<NFElem>,
}

fn gcd_content_norm(k: &FieldData, alpha: &NFElem, c: u64) -> Result<BigInt, SearchError> {
    let cb = BigInt::from(c);
    Ok(match k.n {
        1 => BigInt::one(),
        // with content(alpha) prime to c, N((alpha, c)) = gcd(N(alpha), c)
        2 => k.norm_int(alpha.num()).abs().gcd(&cb),
        _ => ideal_norm(&ideal_from_gens(&[alpha.clone(), k.from_int(c as i64)], k)?),
    })
}

impl Ctx<'_> {
    fn leaf(&self, a: &[i64], s: &[CInterval], c: u64, found: &mut Found) -> Result<(), SearchError> {
        let cf = FInterval::point(c as f64);
        let c2 = cf * cf;
        let mut a2 = FInterval::point(1.0);
        for (z, &nv) in s.iter().zip(&self.local) {
            let m = z.abs_sq().max(c2);
            a2 = a2 * if nv == 1 { m } else { m * m };
        }
        // N((alpha, c)) <= c^n
        let cn = BigRat::from_integer(num_traits::pow(BigInt::from(c), self.k.n)) * self.bound;
        if a2.lo > FInterval::from_rat(&(&cn * &cn)).hi {
            return Ok(());
        }
        if a.iter().fold(c as i64, |g, x| g.gcd(x)) != 1 {
            return Ok(());
        }
        let num: Vec<BigInt> = (0..self.k.n)
            .map(|j| a.iter().zip(&self.basis).map(|(ai, row)| &row[j] * BigInt::from(*ai)).sum())
            .collect();
        let alpha = NFElem::from_ints(num);
        let x = NFElem::new(alpha.num().to_vec(), BigInt::from(c));
        let target = self.bound * BigRat::from_integer(gcd_content_norm(self.k, &alpha, c)?);
        let t2 = FInterval::from_rat(&(&target * &target));
        let inside = if a2.hi <= t2.lo {
            Some(true)
        } else if a2.lo > t2.hi {
            Some(false)
        } else {
            compare_height(&x, self.bound, self.k, RESOLVE_BITS)?.map(|o| o != Ordering::Greater)
        };
        match inside {
            Some(true) => found.inside.push(x),
            Some(false) => {}
            None => found.borderline.push(x),
        }
        Ok(())
    }

    fn scan(&self, c: u64) -> Result<Found, SearchError> {
        let n = self.k.n;
        let d = coefficient_bound(n, self.bound, c)
            .to_i64()
            .ok_or_else(|| SearchError::Capacity("coefficient bound overflows".into()))?;
        let places = self.local.len();
        let mut a = vec![-d; n];
        let mut partial = vec![vec![CInterval::zero(); places]; n + 1];
        let mut found = Found::default();
        let mut from = 0;
        loop {
            for j in from..n {
                let aj = FInterval::from_i64(a[j]);
                for v in 0..places {
                    partial[j + 1][v] = partial[j][v].add(self.w[j][v].scale(aj));
                }
            }
            // the zero tuple is handled by the caller
            if a.iter().any(|x| *x != 0) {
                self.leaf(&a, &partial[n], c, &mut found)?;
            }
            let mut i = n;
            loop {
                if i == 0 {
                    return Ok(found);
                }
                i -= 1;
                if a[i] < d {
                    a[i] += 1;
                    break;
                }
                a[i] = -d;
            }
            from = i;
        }
    }
}

/// Every `x` in `K` with `H_K(x) <= B` by the exhaustive scan, refusing when
/// the scan would exceed `cap` tuples.
pub fn ps_enumerate(k: &FieldData, bound: &BigRat, cap: u64) -> Result<PsOutput, SearchError> {
    if bound < &BigRat::one() {
        return Err(SearchError::InvalidInput("B must be at least 1".into()));
    }
    let search_space = ps_search_space(k.n, bound);
    if search_space > BigInt::from(cap) {
        return Err(SearchError::Capacity(format!("PS search space {search_space} exceeds the cap {cap}")));
    }
    let basis = reduced_ideal_basis(&IdealHNF::identity(k.n), k)?;
    let emb = k.embeddings_f64();
    let w = basis
        .iter()
        .map(|row| {
            emb.iter()
                .map(|ev| {
                    row.iter().zip(ev).fold(CInterval::zero(), |acc, (b, e)| acc.add(e.scale(FInterval::from_bigint(b))))
                })
                .collect()
        })
        .collect();
    let ctx = Ctx { k, bound, basis, w, local: k.local_degrees() };
    let cmax = floor(bound).to_u64().unwrap_or(0);
    let parts: Vec<Found> = (1..=cmax).into_par_iter().map(|c| ctx.scan(c)).collect::<Result<_, _>>()?;
    let mut elements = vec![k.zero()];
    let mut borderline = Vec::new();
    for p in parts {
        elements.extend(p.inside);
        borderline.extend(p.borderline);
    }
    elements.sort();
    borderline.sort();
    Ok(PsOutput { elements, borderline, search_space })
}

/// One row of a benchmark table.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchReport {
    pub method: String,
    pub field: String,
    pub bound: BigRat,
    pub theta: Option<BigRat>,
    pub elapsed_ms: u128,
    pub search_space: BigInt,
    pub found: u64,
    pub ratio: BigRat,
}

pub const CSV_COLUMNS: [&str; 8] = ["method", "field", "B", "theta", "elapsed_ms", "search_space", "found", "ratio"];

#[allow(clippy::too_many_arguments)]
pub fn search_ratio(
    method: &str,
    field: &str,
    bound: &BigRat,
    theta: Option<&BigRat>,
    elapsed: Duration,
    search_space: &BigInt,
    found: u64,
) -> Result<BenchReport, SearchError> {
    if found == 0 {
        return Err(SearchError::InvalidInput("search ratio with no elements found".into()));
    }
    Ok(BenchReport {
        method: method.to_string(),
        field: field.to_string(),
        bound: bound.clone(),
        theta: theta.cloned(),
        elapsed_ms: elapsed.as_millis(),
        search_space: search_space.clone(),
        found,
        ratio: BigRat::new(search_space.clone(), BigInt::from(found)),
    })
}

impl BenchReport {
    fn row(&self) -> [String; 8] {
        [
            self.method.clone(),
            self.field.clone(),
            fmt_rat(&self.bound),
            self.theta.as_ref().map(fmt_rat).unwrap_or_default(),
            self.elapsed_ms.to_string(),
            self.search_space.to_string(),
            self.found.to_string(),
            fmt_rat(&self.ratio),
        ]
    }
}

/// CSV with a header row; rationals are `"p/q"` strings.
pub fn write_csv<W: Write>(reports: &[BenchReport], out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for r in reports {
        w.write_record(r.row())?;
    }
    w.flush()?;
    Ok(())
}

/// Aligned plain-text table; the ratio is shown with two decimals.
pub fn render_table(reports: &[BenchReport]) -> String {
    let mut rows: Vec<[String; 8]> = vec![CSV_COLUMNS.map(String::from)];
    for r in reports {
        let mut row = r.row();
        row[7] = format!("{:.2}", to_f64(&r.ratio));
        rows.push(row);
    }
    let widths: Vec<usize> = (0..8).map(|i| rows.iter().map(|r| r[i].len()).max().unwrap_or(0)).collect();
    let mut s = String::new();
    for r in rows {
        let line: Vec<String> = r.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
        s.push_str(line.join("  ").trim_end());
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};
    use crate::field::{quadratic_field, rational_field};
    use crate::search::bounded_height_iq;
    use num_traits::Zero;

    #[test]
    fn search_space_formula() {
        assert_eq!(ps_search_space(4, &int(2)), BigInt::from(19_036_546u64));
        // D = floor(2 sqrt 2), floor(4 sqrt 2)
        assert_eq!(ps_search_space(2, &int(2)), BigInt::from(25 + 121));
        assert_eq!(ps_search_space(1, &int(2)), BigInt::from(5 + 9));
        assert_eq!(coefficient_bound(2, &rat(5, 2), 1), BigInt::from(3));
        for n in 1..7 {
            for b in 1..11 {
                let holds = exceeds_lower_bound(n, &int(b), &ps_search_space(n, &int(b)));
                // n = 3, B = 1: 5^3 = 125 < 2^{15/2}
                assert_eq!(holds, (n, b) != (3, 1), "n = {n}, B = {b}");
            }
        }
    }

    #[test]
    fn rational_and_gaussian() {
        let q = rational_field();
        let out = ps_enumerate(&q, &int(2), DEFAULT_CAP).unwrap();
        assert_eq!(out.elements.len(), 7);
        let out = ps_enumerate(&q, &int(10), DEFAULT_CAP).unwrap();
        assert_eq!(out.elements.len(), 127);
        let g = quadratic_field(-1).unwrap();
        let out = ps_enumerate(&g, &int(2), DEFAULT_CAP).unwrap();
        assert_eq!(out.elements, bounded_height_iq(&g, &int(2)).unwrap().into_iter().collect::<std::collections::BTreeSet<_>>().into_iter().collect::<Vec<_>>());
        assert!(out.borderline.is_empty());
        assert_eq!(out.search_space, BigInt::from(146));
        assert!(ps_enumerate(&g, &int(50), 1000).unwrap_err().is_capacity());
    }

    #[test]
    fn report_rows() {
        let r = search_ratio("ps", "quad:-1", &int(2), None, Duration::from_millis(3), &BigInt::from(146), 13).unwrap();
        assert_eq!(r.ratio, rat(146, 13));
        let mut buf = Vec::new();
        write_csv(std::slice::from_ref(&r), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "method,field,B,theta,elapsed_ms,search_space,found,ratio\nps,quad:-1,2,,3,146,13,146/13\n");
        assert!(render_table(&[r]).contains("11.23"));
        assert!(search_ratio("a", "q", &int(2), None, Duration::ZERO, &BigInt::zero(), 0).is_err());
    }
}
