//! Exact rationals, ball arithmetic, exact linear algebra and certified roots.

pub mod ball;
pub mod interval;
pub mod log;
pub mod matrix;
pub mod poly;
pub mod rational;
pub mod roots;

pub use ball::{Ball, CBall};
pub use interval::{CInterval, FInterval};
pub use log::{exp_ball, exp_rational, ln_rational, log_ball};
pub use matrix::{det_bareiss, mat_inverse, operator_norm_bound, RatMatrix};
pub use rational::BigRat;
pub use roots::{certified_roots, isolate_roots, refine_root, verify_isolation, RootDisk, RootEnclosure};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("matrix is singular")]
    Singular,
    #[error("matrix shape mismatch")]
    Shape,
    #[error("argument must be positive")]
    NonPositive,
    #[error("enclosure too wide to decide; refine the input")]
    NeedsRefinement,
    #[error("enclosure does not isolate exactly one root")]
    NotIsolating,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("cannot parse rational {0:?}")]
    Parse(String),
}
