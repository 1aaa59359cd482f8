//! Enumeration of number field elements of bounded relative height.

pub mod arith;
pub mod baseline;
pub mod field;
pub mod ideals;
pub mod lattice;
pub mod height;
pub mod search;
