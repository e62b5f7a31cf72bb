//! Numerical machinery for the sharp Paley-problem constant `K_n(rho)` of
//! plurisubharmonic functions of lower order `rho > 1` on `C^n`.
//!
//! The library evaluates the whole constructive pipeline behind the constant:
//!
//! * [`deriv`] — exact polynomial recurrence for the derivatives of
//!   `phi_rho(t) = 1/(1 + t^rho)` and the signed top derivative `psi_rho`;
//! * [`sign`] — certified isolation of the positive zeros of `psi_rho` and the
//!   `D_-`/`D_+` sign decomposition;
//! * [`constants`] — the antiderivative family `Phi_{rho,k}`, the deficiency
//!   sum, `J(rho)` and `K_n(rho) = 2 rho J(rho)`, each cross-checked against
//!   independent quadrature oracles;
//! * [`functional`] — the admissible class `inc_rho`, the functional
//!   `J_rho(s)` and the explicit maximizing sequence `s_k`;
//! * [`dahlberg`] — Gegenbauer machinery for the subharmonic comparison value
//!   `vartheta(u_rho)`;
//! * [`quad`] — shared adaptive quadrature with endpoint-singularity and
//!   infinite-tail handling;
//! * [`cli`] — the command surface used by the `khabi` binary.
//!
//! Everything is deterministic: identical inputs produce identical bytes.

// negated comparisons are deliberate NaN guards; quadrature node tables keep
// their full published precision
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::excessive_precision)]
#![allow(clippy::manual_is_multiple_of)]

pub mod cli;
pub mod constants;
pub mod dahlberg;
pub mod deriv;
mod error;
pub mod functional;
pub mod jet;
mod params;
pub mod poly;
pub mod quad;
pub mod report;
pub mod sign;
pub mod special;

pub use error::{Error, Result};
pub use params::ProblemParams;
