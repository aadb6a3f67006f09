//! Exact scalars and polynomials: rationals, the cyclotomic field Q(ω) with
//! ω = e^{iπ/3}, and dense polynomials over it.

mod cyclotomic;
mod poly;
mod rational;
pub mod special;

pub use cyclotomic::Cyclotomic;
pub use poly::CycPolynomial;
pub use rational::{Rational, RationalParts};
pub use special::{gamma_ratio, pochhammer};
