//! Exact rationals, sparse multivariate polynomials and the ring Q[h]/(h^2).

mod hclass;
mod mpoly;
mod parse;

pub use hclass::{hclass_div, HClass};
pub use mpoly::{Exp, MPoly, Vars};
pub use num_rational::BigRational as Rat;

use num_bigint::BigInt;

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}
