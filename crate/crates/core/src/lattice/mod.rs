//! Lattice tools: exact LLL, interval Fincke-Pohst, the unit log lattice,
//! the rational approximation of the unit matrix and the Minkowski embedding.

pub mod enumerate;
pub mod lll;
pub mod smatrix;
pub mod units;

use num_traits::Zero;

use crate::arith::ball::Ball;
use crate::arith::rational::{bits_for, sqrt_lower, sqrt_upper, BigRat};
use crate::field::{FieldData, NFElem};

pub use enumerate::Ellipsoid;
pub use lll::{lll_gram, lll_reduce, LllResult};
pub use smatrix::{build_s_approx, integer_points, SMatrixApprox};
pub use units::{reduce_units, UnitLattice};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("vectors are linearly dependent")]
    Dependent,
    #[error("quadratic form is not positive definite at working precision")]
    NotPositive,
    #[error("capacity exceeded: {0}")]
    Capacity(String),
}

/// Minkowski embedding: real places give `sigma(x)`, complex places give
/// `sqrt 2 Re tau(x)` and `sqrt 2 Im tau(x)`. Every entry has radius below `delta`.
pub fn minkowski_embed(x: &NFElem, k: &FieldData, delta: &BigRat) -> Vec<Ball> {
    let mut prec = bits_for(delta) + 8;
    loop {
        let two = BigRat::from_integer(2.into());
        let s2 = Ball::from_interval(&sqrt_lower(&two, prec + 4), &sqrt_upper(&two, prec + 4));
        let mut out = Vec::with_capacity(k.n);
        for (z, p) in k.embed(x, prec).iter().zip(&k.places) {
            if p.local_degree == 1 {
                out.push(z.re.clone());
            } else {
                out.push(&s2 * &z.re);
                out.push(&s2 * &z.im);
            }
        }
        if out.iter().all(|b| &b.rad < delta || (b.rad.is_zero())) {
            return out;
        }
        prec += prec / 2 + 16;
    }
}
