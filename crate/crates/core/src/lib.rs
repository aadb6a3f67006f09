//! Exact loop densities of the O(1) dense loop model on a cylinder of even
//! circumference L = 2N, together with the machinery that derives them and
//! two independent checks.
//!
//! * [`closed_form`]: ν_c(L), ν_nc(L) as exact rationals and their large-L
//!   expansions.
//! * [`fsz`]: the hypergeometric Q and P polynomials at the stochastic point
//!   and the derivative identities that re-derive both densities.
//! * [`tq`]: T-Q, T-P, Wronskian and T(x) identities checked coefficient by
//!   coefficient.
//! * [`oracle`]: link-pattern transfer matrix with fugacities for
//!   contractible and non-contractible loops, plus a numeric six-vertex
//!   check.
//! * [`mc`]: Monte Carlo sampling of loop configurations on a torus.
//!
//! Everything on the exact paths is computed in [`exact`] arithmetic; floats
//! appear only in renderings and in the numeric cross-checks.

pub mod closed_form;
pub mod error;
pub mod exact;
pub mod fsz;
pub mod hp;
pub mod mc;
pub mod oracle;
pub mod record;
pub mod tq;

pub use error::{Error, Result};
pub use exact::{CycPolynomial, Cyclotomic, Rational};
pub use record::{DensityRecord, Method};
