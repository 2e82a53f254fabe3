//! Closed-form coefficient formulas for the unbounded q-tangent and q-secant
//! polynomials.
//!
//! Both families arise as an alternating Laurent sum with binomial
//! coefficients that is exactly divisible by a power of `(1 - q)`:
//!
//! ```text
//! E_(2n+1)(q) (1-q)^(2n+1) = sum_(m=0..n) c(n,m) q^(m^2+2m)
//!                            sum_(l=-m..m+1) (-1)^l q^(-l^2+2l)
//! E_(2n)(q)   (1-q)^(2n)   = sum_(m=0..n) c'(n,m) q^(m^2+m)
//!                            sum_(l=-m..m)  (-1)^l q^(-l^2)
//! ```
//!
//! with integer coefficients `c(n,m) = (2m+2) C(2n+1, n+m+1) / (n+m+2)` and
//! `c'(n,m) = (2m+1) C(2n, n+m) / (n+m+1)`. The divisions in `c`, `c'` and by
//! `(1-q)^k` are performed exactly; a nonzero remainder anywhere is reported
//! as an error rather than rounded away, since it can only mean the formula
//! was transcribed wrongly.

use num_bigint::BigInt;
use num_integer::{binomial, Integer};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::contfrac::cf_series;
use crate::pathcount::{dp_series, PossibilityPolicy, Width};
use crate::qalg::{QLaurent, QPoly, QalgError};

/// Errors from closed-form construction.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClosedFormError {
    /// The binomial coefficient quotient `c(n, m)` left a remainder.
    #[error("closed-form coefficient is not an integer at n={n}, m={m}")]
    NonIntegerTerm { n: u32, m: u32 },
    /// The assembled numerator kept a negative exponent; the outer power of
    /// `q` should always absorb the inner ones.
    #[error("closed-form numerator for n={n} has unexpected negative exponent {min_exp}")]
    UnexpectedNegativeExponent { n: u32, min_exp: i64 },
    /// Division by `(1 - q)^k` left a remainder.
    #[error("closed-form numerator for n={n} is not divisible: {source}")]
    NotDivisible { n: u32, source: QalgError },
}

/// Exact `(2m + off) * C(top, n + m + off - 1) / (n + m + off)` used by both
/// families (`off` = 2 for tangent, 1 for secant).
fn integer_coefficient(n: u32, m: u32, off: u32, top: u32) -> Result<BigInt, ClosedFormError> {
    let numer =
        BigInt::from(2 * m + off) * binomial(BigInt::from(top), BigInt::from(n + m + off - 1));
    let denom = BigInt::from(n + m + off);
    let (quot, rem) = numer.div_rem(&denom);
    if !rem.is_zero() {
        return Err(ClosedFormError::NonIntegerTerm { n, m });
    }
    Ok(quot)
}

fn sign(l: i64) -> BigInt {
    if l.rem_euclid(2) == 0 {
        BigInt::from(1)
    } else {
        BigInt::from(-1)
    }
}

/// The q-tangent polynomial `E_(2n+1)(q)`: the unbounded tangent-policy
/// coefficient of `t^(2n)`, with `E_(2n+1)(1)` the classical tangent number.
pub fn q_tangent_poly(n: u32) -> Result<QPoly, ClosedFormError> {
    let mut total = QLaurent::zero();
    for m in 0..=n {
        let c = integer_coefficient(n, m, 2, 2 * n + 1)?;
        let mut inner = QLaurent::zero();
        for l in -(m as i64)..=(m as i64 + 1) {
            inner = &inner + &QLaurent::term(sign(l), -l * l + 2 * l);
        }
        let shifted = inner.shift((m as i64) * (m as i64) + 2 * m as i64);
        total = &total + &shifted.mul_scalar(&c);
    }
    finish(n, total, 2 * n as usize + 1)
}

/// The q-secant polynomial `E_(2n)(q)`: the unbounded secant-policy
/// coefficient of `t^(2n)`, with `E_(2n)(1)` the classical secant number.
pub fn q_secant_poly(n: u32) -> Result<QPoly, ClosedFormError> {
    let mut total = QLaurent::zero();
    for m in 0..=n {
        let c = integer_coefficient(n, m, 1, 2 * n)?;
        let mut inner = QLaurent::zero();
        for l in -(m as i64)..=(m as i64) {
            inner = &inner + &QLaurent::term(sign(l), -l * l);
        }
        let shifted = inner.shift((m as i64) * (m as i64) + m as i64);
        total = &total + &shifted.mul_scalar(&c);
    }
    finish(n, total, 2 * n as usize)
}

/// Checks exponent positivity, divides by `(1-q)^k`, and reads back an
/// ordinary polynomial.
fn finish(n: u32, total: QLaurent, k: usize) -> Result<QPoly, ClosedFormError> {
    if !total.is_zero() && total.min_exp() < 0 {
        return Err(ClosedFormError::UnexpectedNegativeExponent {
            n,
            min_exp: total.min_exp(),
        });
    }
    let quotient = total
        .exact_div_one_minus_q_pow(k)
        .map_err(|source| ClosedFormError::NotDivisible { n, source })?;
    quotient
        .to_poly()
        .map_err(|e| ClosedFormError::UnexpectedNegativeExponent {
            n,
            min_exp: match e {
                QalgError::NegativeExponent { min_exp } => min_exp,
                _ => 0,
            },
        })
}

/// Closed form for either family.
pub fn euler_poly(n: u32, family: PossibilityPolicy) -> Result<QPoly, ClosedFormError> {
    match family {
        PossibilityPolicy::Tangent => q_tangent_poly(n),
        PossibilityPolicy::Secant => q_secant_poly(n),
    }
}

/// Classical tangent or secant number: the q-polynomial evaluated at `q = 1`.
pub fn euler_number(n: u32, family: PossibilityPolicy) -> BigInt {
    euler_poly(n, family)
        .expect("closed-form construction is exact for all n")
        .eval_at_one()
}

/// Which route produced a polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Closed-form coefficient formula (unbounded only).
    Closed,
    /// Transfer-matrix dynamic programming.
    Dp,
    /// Continued-fraction convergent series.
    Cf,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Method::Closed => write!(f, "closed"),
            Method::Dp => write!(f, "dp"),
            Method::Cf => write!(f, "cf"),
        }
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "closed" => Ok(Method::Closed),
            "dp" => Ok(Method::Dp),
            "cf" => Ok(Method::Cf),
            _ => Err(format!(
                "invalid method {s:?}: expected \"closed\", \"dp\", or \"cf\""
            )),
        }
    }
}

/// An unbounded coefficient polynomial tagged with its provenance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EulerPolyResult {
    pub n: u32,
    pub family: PossibilityPolicy,
    pub method: Method,
    pub poly: QPoly,
}

/// Computes the unbounded coefficient of `t^(2n)` by the requested route.
///
/// The DP and continued-fraction routes are exact by construction; for the
/// latter, convergent depth `n` already fixes the coefficient of `t^(2n)`.
pub fn compute_euler_poly(
    n: u32,
    family: PossibilityPolicy,
    method: Method,
) -> Result<EulerPolyResult, ClosedFormError> {
    let poly = match method {
        Method::Closed => euler_poly(n, family)?,
        Method::Dp => dp_series(n as usize, Width::Unbounded, family)
            .coeff(n as usize)
            .clone(),
        Method::Cf => cf_series(Width::Bounded(n), family, n as usize)
            .coeff(n as usize)
            .clone(),
    };
    Ok(EulerPolyResult {
        n,
        family,
        method,
        poly,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pathcount::brute_coeff;

    #[test]
    fn tangent_small_values() {
        let want: [&[i64]; 4] = [
            &[1],
            &[1, 1],
            &[2, 5, 5, 3, 1],
            &[5, 21, 42, 56, 56, 44, 28, 14, 5, 1],
        ];
        for (n, coeffs) in want.iter().enumerate() {
            assert_eq!(
                q_tangent_poly(n as u32).unwrap(),
                QPoly::from_ints(coeffs),
                "n={n}"
            );
        }
    }

    #[test]
    fn secant_small_values() {
        let want: [&[i64]; 4] = [&[1], &[1], &[2, 2, 1], &[5, 12, 16, 14, 9, 4, 1]];
        for (n, coeffs) in want.iter().enumerate() {
            assert_eq!(
                q_secant_poly(n as u32).unwrap(),
                QPoly::from_ints(coeffs),
                "n={n}"
            );
        }
    }

    #[test]
    fn matches_brute_force() {
        for family in PossibilityPolicy::ALL {
            for n in 0..=6u32 {
                assert_eq!(
                    euler_poly(n, family).unwrap(),
                    brute_coeff(n, Width::Unbounded, family).unwrap(),
                    "{family} n={n}"
                );
            }
        }
    }

    #[test]
    fn euler_numbers() {
        let tangent: [i64; 6] = [1, 2, 16, 272, 7936, 353792];
        let secant: [i64; 6] = [1, 1, 5, 61, 1385, 50521];
        for n in 0..6u32 {
            assert_eq!(
                euler_number(n, PossibilityPolicy::Tangent),
                BigInt::from(tangent[n as usize])
            );
            assert_eq!(
                euler_number(n, PossibilityPolicy::Secant),
                BigInt::from(secant[n as usize])
            );
        }
    }

    #[test]
    fn divisibility_holds_through_n_12() {
        for n in 0..=12u32 {
            assert!(q_tangent_poly(n).is_ok(), "tangent n={n}");
            assert!(q_secant_poly(n).is_ok(), "secant n={n}");
        }
    }

    #[test]
    fn degrees_match_dp() {
        for family in PossibilityPolicy::ALL {
            let dp = dp_series(8, Width::Unbounded, family);
            for n in 0..=8u32 {
                assert_eq!(
                    euler_poly(n, family).unwrap().degree(),
                    dp.coeff(n as usize).degree(),
                    "{family} n={n}"
                );
            }
        }
    }

    #[test]
    fn all_methods_agree() {
        for family in PossibilityPolicy::ALL {
            for n in 0..=8u32 {
                let closed = compute_euler_poly(n, family, Method::Closed).unwrap();
                let dp = compute_euler_poly(n, family, Method::Dp).unwrap();
                let cf = compute_euler_poly(n, family, Method::Cf).unwrap();
                assert_eq!(closed.poly, dp.poly, "{family} n={n}");
                assert_eq!(closed.poly, cf.poly, "{family} n={n}");
                assert_eq!(closed.method, Method::Closed);
            }
        }
    }

    #[test]
    fn method_parsing_and_serialization() {
        assert_eq!("cf".parse::<Method>().unwrap(), Method::Cf);
        assert!("fft".parse::<Method>().is_err());
        let result = compute_euler_poly(2, PossibilityPolicy::Tangent, Method::Closed).unwrap();
        let json = serde_json::to_value(&result).unwrap();
        assert_eq!(json["family"], "tangent");
        assert_eq!(json["method"], "closed");
        assert_eq!(json["poly"][0], "2");
    }
}
