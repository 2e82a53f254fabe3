//! Exact polynomial and series arithmetic over arbitrary-precision integers.
//!
//! Three dense representations, all with `BigInt` coefficients:
//!
//! - [`QPoly`]: polynomial in `q`, ascending exponents,
//! - [`QLaurent`]: Laurent polynomial in `q` (finitely many negative
//!   exponents), stored as a base exponent plus a dense coefficient run,
//! - [`TSeries`]: power series in `t^2` truncated at a fixed order, with
//!   `QPoly` coefficients.
//!
//! Division by powers of `(1 - q)` is exact or it is an error; nothing in
//! this module rounds.

mod laurent;
mod poly;
mod series;

pub use laurent::QLaurent;
pub use poly::QPoly;
pub use series::TSeries;

/// Errors from exact polynomial and series arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QalgError {
    /// Division by `(1 - q)^k` hit a nonzero remainder at the given 1-based
    /// division pass.
    #[error("not divisible by (1 - q)^{k}: nonzero remainder in pass {pass}")]
    NotDivisible { k: usize, pass: usize },
    /// Truncated series arithmetic requires both operands at the same order.
    #[error("series order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    /// Series inversion needs constant term exactly 1.
    #[error("series constant term is not 1; cannot invert")]
    NonUnitConstantTerm,
    /// A Laurent polynomial with negative exponents cannot be read back as an
    /// ordinary polynomial.
    #[error("negative exponent {min_exp} where an ordinary polynomial was expected")]
    NegativeExponent { min_exp: i64 },
}
