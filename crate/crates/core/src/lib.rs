//! Degree of the exceptional component E(3) of codimension-one, degree-two
//! foliations of P^3, computed exactly with Bott's residue formula on the
//! blown-up parameter space Y4.

pub mod arith;
pub mod bott;
pub mod bundles;
pub mod error;
pub mod flags;
pub mod ideals;
pub mod omega;
pub mod tower;
pub mod verify;

pub use error::{Error, Result};
