//! Truncated asymptotic expansions of the logarithmic integral and their
//! prime-counting applications.
//!
//! The crate computes the interpolated expansion li(n;x), solves the exact
//! and average prime truncation points (where the expansion equals pi(n), or
//! where the dropped source-integral tail equals the weighted prime-power
//! overcount), evaluates the Lambert-W lower-branch closed forms and their
//! large-n limits, and assembles the bound comparison against the
//! Schoenfeld-equivalent bound on the zeta-zero summation.
//!
//! Modules mirror the subject structure:
//!
//! - [`primes`]: exact pi(n) (sieve + Meissel/Legendre-style DP), Chebyshev
//!   theta, the weighted prime-power sum, the density D_n and beta_n.
//! - [`logint`]: li, li(n;x), the signed small-n variant, the source
//!   integral, C(n;x), sigma-tilde and the Stieltjes point.
//! - [`special`]: Lambert W lower branch, log-Gamma, factorial-root ratio,
//!   Robbins bounds, linear-exponential inversion.
//! - [`solvers`]: the truncation solvers and limit forms.
//! - [`riemann`]: Mobius mu and Riemann's R(n).
//! - [`bounds`]: Dusart's theta table, the Truncation Bound, the
//!   Schoenfeld-equivalent bound, f1/f2 and crossing location.

// Negated comparisons are deliberate NaN-rejecting domain guards; published
// constants keep their full printed digits.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod bounds;
pub mod error;
pub mod logint;
pub mod primes;
pub mod quad;
pub mod riemann;
pub mod roots;
pub mod solvers;
pub mod special;
pub mod util;

pub use error::{Error, Result};
pub use primes::{Backend, PrimeTable};
pub use solvers::{LimitVariant, TruncationMethod, TruncationSolution};
