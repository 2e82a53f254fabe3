//! Floating-point evaluation of the basic-hypergeometric closed forms.
//!
//! For parameters in the real-root region `(1-q)^2 > 4t^2` the quadratic
//! `lambda^2 - lambda (1-q)/t + 1 = 0` has real roots `lambda < 1 <
//! lambda_bar = 1/lambda`, and the bounded generating functions evaluate as
//! ratios of the q-series
//!
//! ```text
//! phi(lambda, x) = sum_k (-lambda^2; q^2)_k x^k / ((q; q)_k (lambda^2 q; q)_k)
//! psi(lambda, x) = sum_k (-lambda^2 q; q^2)_k x^k / ((q; q)_k (lambda^2 q; q)_k)
//! ```
//!
//! [`g_w_closed`] and [`gp_w_closed`] evaluate those ratios for the tangent
//! and secant families; [`g_inf_closed`] and [`gp_inf_closed`] evaluate the
//! `w -> infinity` limits via rapidly converging theta-like sums. The
//! [`identities`](self) checks ([`rect_identity_check`], [`heine_check`],
//! [`identities_w1_check`]) and the [`suites`] runner compare these against
//! exact references and classical transformations on grids and random
//! samples, reporting worst-case errors.
//!
//! Everything here is floating point: f64 in and out, with the
//! ill-conditioned bounded-form assemblies carried internally on
//! double-double pairs. Exactness lives in the other modules. Functions fail
//! loudly (`Err`, never NaN) outside their domain or when a series refuses to
//! converge within the configured term budget.

mod basic;
mod closed;
mod context;
mod dd;
mod identities;
pub mod suites;

pub use basic::{phi, pochhammer_inf, psi, two_phi_one};
pub use closed::{
    g_inf_closed, g_inf_raw_complex, g_w_closed, g_w_closed_raw, gp_inf_closed,
    gp_inf_raw_complex, gp_w_closed,
};
pub use context::{lambda_root, EvalContext};
pub use identities::{
    heine_check, identities_w1_check, rect_identity_check, w1_literal_first_identity,
    IdentityReport, W1LiteralProbe, DEFAULT_IDENTITY_TOL,
};

/// Errors from floating-point evaluation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QhyperError {
    /// `(1-q)^2 - 4t^2 <= 0`: the root `lambda` is not real and the real
    /// closed forms do not apply.
    #[error("complex-root region at t={t}, q={q}: requires (1-q)^2 > 4 t^2")]
    ComplexRootRegion { t: f64, q: f64 },
    /// Parameter outside a function's domain (reported before any summation).
    #[error("domain violation: {what}")]
    DomainViolation { what: String },
    /// A series failed to meet the tolerance within the term budget.
    #[error("{what} did not converge within {max_terms} terms")]
    NoConvergence { what: String, max_terms: usize },
    /// A denominator factor or final denominator vanished numerically.
    #[error("{what}: denominator too close to zero")]
    DenominatorNearZero { what: String },
    /// A complex-route cross-check left a nonzero imaginary part.
    #[error("complex cross-check left imaginary residue {im:e}")]
    ImaginaryResidue { im: f64 },
}
