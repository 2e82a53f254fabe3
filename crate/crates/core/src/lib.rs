//! Exact and numeric engine for q-counted Dyck path diagrams under a height
//! restriction.
//!
//! A path diagram is a Dyck path together with one column choice per step,
//! where the number of admissible choices depends on the step direction and
//! the height it leaves from. Weighting each diagram by `q^(sum of choices)`
//! and each path by `t^(length)` produces a family of generating functions
//! `G_w(t, q)` indexed by the maximal allowed height `w`. Two choice policies
//! are supported: one whose unbounded coefficients are the q-tangent
//! polynomials and one whose coefficients are the q-secant polynomials.
//!
//! The crate computes the same quantities along independent routes so they
//! can be checked against each other:
//!
//! - [`pathcount`]: direct enumeration of diagrams and a transfer-matrix DP,
//! - [`contfrac`]: continued-fraction convergents `P_w / Q_w` over exact
//!   integer polynomials,
//! - [`closedform`]: closed-form coefficient formulas for the unbounded
//!   q-tangent and q-secant polynomials,
//! - [`qhyper`]: floating-point evaluation of basic-hypergeometric closed
//!   forms for `G_w` and its `w -> infinity` limit, plus identity checks.
//!
//! [`qalg`] supplies the shared exact arithmetic: dense integer polynomials
//! and Laurent polynomials in `q`, and truncated power series in `t^2`.

pub mod closedform;
pub mod contfrac;
pub mod pathcount;
pub mod qalg;
pub mod qhyper;
