//! Bounded-height search: units of bounded height, the certified packet
//! pipeline with lists `L` and `L'`, the exact path for `r = 0`, and the
//! real-quadratic refinement of `L'`.

mod exact;
mod fixed;
pub mod output;
mod packets;
mod pipeline;
mod refine;
mod units;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::rational::{fmt_rat, BigRat};
use crate::field::{FieldData, FieldError, NFElem};
use crate::height::HeightError;
use crate::ideals::IdealError;
use crate::lattice::LatticeError;

pub use exact::{bounded_height_iq, exact_r0};
pub use packets::{class_data, packet_value, ClassData, Packet};
pub use pipeline::bounded_height_elements_r;
pub use refine::{refine_real_quadratic, resolve_exact, Resolved};
pub use units::{units_of_bounded_height, units_with_tolerance, UnitsOutput};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Height(#[from] HeightError),
}

impl From<crate::arith::ArithError> for SearchError {
    fn from(e: crate::arith::ArithError) -> Self {
        SearchError::Field(FieldError::Arith(e))
    }
}

impl SearchError {
    pub fn is_capacity(&self) -> bool {
        matches!(
            self,
            SearchError::Capacity(_)
                | SearchError::Lattice(LatticeError::Capacity(_))
                | SearchError::Ideal(IdealError::Lattice(LatticeError::Capacity(_)))
        )
    }
}

/// Every constant of a certified run, all exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schedule {
    pub bound: BigRat,
    pub theta: BigRat,
    pub t: BigRat,
    pub delta1: BigRat,
    pub b: BigRat,
    pub d_tilde: BigRat,
    pub m: BigRat,
    pub lambda_tilde: BigRat,
    pub delta_tilde: BigRat,
    pub big_m: BigInt,
    pub delta2: BigRat,
}

impl Schedule {
    pub fn fields(&self) -> Vec<(&'static str, String)> {
        vec![
            ("B", fmt_rat(&self.bound)),
            ("theta", fmt_rat(&self.theta)),
            ("t", fmt_rat(&self.t)),
            ("delta1", fmt_rat(&self.delta1)),
            ("b", fmt_rat(&self.b)),
            ("d_tilde", fmt_rat(&self.d_tilde)),
            ("m", fmt_rat(&self.m)),
            ("lambda_tilde", fmt_rat(&self.lambda_tilde)),
            ("delta_tilde", fmt_rat(&self.delta_tilde)),
            ("M", self.big_m.to_string()),
            ("delta2", fmt_rat(&self.delta2)),
        ]
    }
}

/// Search-space instrumentation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Counters {
    /// Principal generators over all classes.
    pub generators: u64,
    /// Admissible pairs `(l, i, j)`.
    pub pairs: u64,
    /// Tuples found in the unit polytope.
    pub unit_tuples: u64,
    /// Pair/tuple combinations passing `r_u < w`.
    pub packet_candidates: u64,
    /// Candidate elements: `1 + |mu| * unit_tuples + 2 |mu| * packet_candidates`
    /// (the element count when `r = 0`).
    pub search_space: u64,
    /// `L'` elements moved to `L` by exact resolution.
    pub resolved_to_l: u64,
    /// `L'` elements discarded by exact resolution.
    pub dropped: u64,
}

/// An element with an enclosure of its logarithmic height:
/// `|h_K(x) - height_mid| < height_rad` (or equality when the radius is 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementRecord {
    pub x: NFElem,
    pub height_mid: BigRat,
    pub height_rad: BigRat,
}

impl ElementRecord {
    pub fn exact(x: NFElem, h: BigRat) -> ElementRecord {
        ElementRecord { x, height_mid: h, height_rad: BigRat::zero() }
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutput {
    pub field: String,
    pub bound: BigRat,
    pub theta: BigRat,
    pub l: Vec<ElementRecord>,
    pub lprime: Vec<ElementRecord>,
    /// `None` on the exact `r = 0` path.
    pub schedule: Option<Schedule>,
    pub counters: Counters,
}

impl SearchOutput {
    pub fn total(&self) -> usize {
        self.l.len() + self.lprime.len()
    }

    /// All elements of `L` and `L'`.
    pub fn elements(&self) -> Vec<NFElem> {
        self.l.iter().chain(&self.lprime).map(|e| e.x.clone()).collect()
    }
}

pub(crate) fn check_bound(bound: &BigRat) -> Result<(), SearchError> {
    if bound < &BigRat::one() {
        return Err(SearchError::InvalidInput(format!("bound {} is below 1", fmt_rat(bound))));
    }
    Ok(())
}

pub(crate) fn check_theta(theta: &BigRat) -> Result<(), SearchError> {
    if !theta.is_positive() || theta > &BigRat::one() {
        return Err(SearchError::InvalidInput(format!("tolerance {} is outside (0, 1]", fmt_rat(theta))));
    }
    Ok(())
}

/// Canonical order: height midpoint, then coordinates.
pub(crate) fn sort_records(v: &mut [ElementRecord]) {
    v.sort_by(|a, b| a.height_mid.cmp(&b.height_mid).then_with(|| a.x.cmp(&b.x)));
}

/// Fails when an element occurs twice in `L` and `L'` together.
pub(crate) fn check_disjoint(l: &[ElementRecord], lp: &[ElementRecord]) -> Result<(), SearchError> {
    let mut all: Vec<&NFElem> = l.iter().chain(lp).map(|e| &e.x).collect();
    all.sort();
    if let Some(w) = all.windows(2).find(|w| w[0] == w[1]) {
        return Err(SearchError::Invariant(format!("element {:?} emitted twice", w[0])));
    }
    Ok(())
}

/// Lists `L` and `L'` covering every `x` with `H_K(x) <= B`. For `r = 0`
/// the exact path is used and `L'` is empty.
pub fn bounded_height_elements(k: &FieldData, bound: &BigRat, theta: &BigRat) -> Result<SearchOutput, SearchError> {
    check_bound(bound)?;
    check_theta(theta)?;
    if k.unit_rank() == 0 {
        return exact_r0(k, bound, theta);
    }
    bounded_height_elements_r(k, bound, theta)
}

/// [`bounded_height_elements`] followed by the real-quadratic refinement of
/// `L'` when it applies (`theta < 1/2`).
pub fn run(k: &FieldData, bound: &BigRat, theta: &BigRat) -> Result<SearchOutput, SearchError> {
    let out = bounded_height_elements(k, bound, theta)?;
    if k.is_real_quadratic() && theta < &BigRat::new(1.into(), 2.into()) {
        return refine_real_quadratic(out, k);
    }
    Ok(out)
}
