//! Fincke-Pohst enumeration of integer vectors in an ellipsoid, with
//! outward-rounded double intervals so the visited set is a certified
//! superset of `{x : x^T G x <= C}`.

use crate::arith::interval::FInterval;

use super::LatticeError;

/// Interval Cholesky data: `x^T G x = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2`.
#[derive(Clone, Debug)]
pub struct Ellipsoid {
    n: usize,
    q: Vec<Vec<FInterval>>,
}

impl Ellipsoid {
    pub fn from_gram(g: &[Vec<FInterval>]) -> Result<Ellipsoid, LatticeError> {
        let n = g.len();
        let mut q = vec![vec![FInterval::point(0.0); n]; n];
        for i in 0..n {
            let mut d = g[i][i];
            for k in 0..i {
                d = d - q[k][k] * q[k][i].sqr();
            }
            if !(d.lo > 0.0) {
                return Err(LatticeError::NotPositive);
            }
            q[i][i] = d;
            for j in i + 1..n {
                let mut s = g[i][j];
                for k in 0..i {
                    s = s - q[k][k] * q[k][i] * q[k][j];
                }
                q[i][j] = s.div(d);
            }
        }
        Ok(Ellipsoid { n, q })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Heuristic count of lattice points in `x^T G x <= bound` (volume over covolume).
    pub fn point_estimate(&self, bound: f64) -> f64 {
        let n = self.n as f64;
        // log Gamma(n/2 + 1) by the half-integer recursion
        let mut lg = if self.n % 2 == 0 { 0.0 } else { 0.5 * std::f64::consts::PI.ln() - 2f64.ln() };
        let mut x = if self.n % 2 == 0 { 1.0 } else { 1.5 };
        while x < n / 2.0 + 0.5 {
            lg += x.ln();
            x += 1.0;
        }
        let log_det: f64 = (0..self.n).map(|i| 0.5 * self.q[i][i].mid().ln()).sum();
        (0.5 * n * std::f64::consts::PI.ln() - lg + 0.5 * n * bound.max(1e-300).ln() - log_det).exp()
    }

    /// Admissible integer range for coordinate `i` given the coordinates above it.
    fn range(&self, i: usize, x: &[i64], partial: FInterval, bound: f64) -> Option<(i64, i64, FInterval)> {
        let rem = FInterval::point(bound) - partial;
        if rem.hi < 0.0 {
            return None;
        }
        let mut c = FInterval::point(0.0);
        for j in i + 1..self.n {
            if x[j] != 0 {
                c = c - self.q[i][j] * FInterval::from_i64(x[j]);
            }
        }
        let w = FInterval::new(0.0, rem.hi.max(0.0)).div(FInterval::point(self.q[i][i].lo)).sqrt();
        let lo = (c - FInterval::point(w.hi)).lo.ceil();
        let hi = (c + FInterval::point(w.hi)).hi.floor();
        if !(lo.is_finite() && hi.is_finite()) || lo.abs() > 4.0e15 || hi.abs() > 4.0e15 {
            return Some((i64::MIN, i64::MAX, c));
        }
        Some((lo as i64, hi as i64, c))
    }

    /// Candidate values of the last coordinate; enumeration may be split on them.
    pub fn top_values(&self, bound: f64, half: bool, clip: Option<&[i64]>) -> Result<Vec<i64>, LatticeError> {
        if self.n == 0 {
            return Ok(vec![]);
        }
        let x = vec![0i64; self.n];
        let i = self.n - 1;
        let Some((mut lo, mut hi, _)) = self.range(i, &x, FInterval::point(0.0), bound) else {
            return Ok(vec![]);
        };
        if lo == i64::MIN {
            return Err(LatticeError::Capacity("enumeration range overflow".into()));
        }
        if let Some(c) = clip {
            lo = lo.max(-c[i]);
            hi = hi.min(c[i]);
        }
        if half {
            lo = lo.max(0);
        }
        Ok((lo..=hi).collect())
    }

    /// Visits every integer vector (with the given last coordinate) in the
    /// ellipsoid `x^T G x <= bound`, possibly along with a few just outside.
    /// With `half`, only vectors whose last nonzero coordinate is positive are
    /// visited. `clip` bounds `|x_i|` coordinatewise.
    pub fn enumerate_top<F: FnMut(&[i64])>(
        &self,
        bound: f64,
        half: bool,
        clip: Option<&[i64]>,
        top: i64,
        mut f: F,
    ) -> Result<u64, LatticeError> {
        let n = self.n;
        let mut x = vec![0i64; n];
        x[n - 1] = top;
        let i = n - 1;
        let partial = self.q[i][i] * FInterval::from_i64(top).sqr();
        if partial.lo > bound {
            return Ok(0);
        }
        let mut count = 0u64;
        if i == 0 {
            if !(half && top == 0) {
                f(&x);
                count += 1;
            }
            return Ok(count);
        }
        self.rec(i - 1, &mut x, partial, half && top == 0, bound, clip, &mut f, &mut count)?;
        Ok(count)
    }

    #[allow(clippy::too_many_arguments)]
    fn rec<F: FnMut(&[i64])>(
        &self,
        i: usize,
        x: &mut Vec<i64>,
        partial: FInterval,
        zero_above: bool,
        bound: f64,
        clip: Option<&[i64]>,
        f: &mut F,
        count: &mut u64,
    ) -> Result<(), LatticeError> {
        let Some((mut lo, mut hi, c)) = self.range(i, x, partial, bound) else {
            return Ok(());
        };
        if lo == i64::MIN {
            return Err(LatticeError::Capacity("enumeration range overflow".into()));
        }
        if let Some(cl) = clip {
            lo = lo.max(-cl[i]);
            hi = hi.min(cl[i]);
        }
        if zero_above {
            lo = lo.max(0);
        }
        for v in lo..=hi {
            x[i] = v;
            let t = FInterval::from_i64(v) - c;
            let p = partial + self.q[i][i] * t.sqr();
            if p.lo > bound {
                continue;
            }
            if i == 0 {
                if !(zero_above && v == 0) {
                    f(x);
                    *count += 1;
                }
            } else {
                self.rec(i - 1, x, p, zero_above && v == 0, bound, clip, f, count)?;
            }
        }
        x[i] = 0;
        Ok(())
    }

    /// Sequential enumeration over all top values.
    pub fn enumerate<F: FnMut(&[i64])>(
        &self,
        bound: f64,
        half: bool,
        clip: Option<&[i64]>,
        mut f: F,
    ) -> Result<u64, LatticeError> {
        let mut total = 0;
        for top in self.top_values(bound, half, clip)? {
            total += self.enumerate_top(bound, half, clip, top, &mut f)?;
        }
        Ok(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gram(rows: &[&[f64]]) -> Vec<Vec<FInterval>> {
        rows.iter().map(|r| r.iter().map(|&x| FInterval::point(x)).collect()).collect()
    }

    #[test]
    fn counts_points_in_disk() {
        let e = Ellipsoid::from_gram(&gram(&[&[1.0, 0.0], &[0.0, 1.0]])).unwrap();
        let mut pts = vec![];
        e.enumerate(2.0, false, None, |x| pts.push(x.to_vec())).unwrap();
        // brute force: x^2 + y^2 <= 2
        let want = (-2i64..=2)
            .flat_map(|a| (-2i64..=2).map(move |b| (a, b)))
            .filter(|(a, b)| a * a + b * b <= 2)
            .count();
        let inside = pts.iter().filter(|p| p[0] * p[0] + p[1] * p[1] <= 2).count();
        assert_eq!(inside, want);
        assert_eq!(inside, 9);
    }

    #[test]
    fn half_enumeration_skips_negatives_and_zero() {
        let e = Ellipsoid::from_gram(&gram(&[&[2.0, 1.0], &[1.0, 3.0]])).unwrap();
        let mut full = vec![];
        e.enumerate(10.0, false, None, |x| full.push(x.to_vec())).unwrap();
        let mut half = vec![];
        e.enumerate(10.0, true, None, |x| half.push(x.to_vec())).unwrap();
        let q = |p: &Vec<i64>| 2 * p[0] * p[0] + 2 * p[0] * p[1] + 3 * p[1] * p[1];
        let full_in: Vec<_> = full.into_iter().filter(|p| q(p) <= 10).collect();
        let half_in: Vec<_> = half.into_iter().filter(|p| q(p) <= 10).collect();
        assert_eq!(full_in.len(), 2 * half_in.len() + 1);
        for p in &half_in {
            let last = if p[1] != 0 { p[1] } else { p[0] };
            assert!(last > 0);
        }
    }

    #[test]
    fn rejects_indefinite() {
        assert!(Ellipsoid::from_gram(&gram(&[&[1.0, 2.0], &[2.0, 1.0]])).is_err());
    }
}
