//! Dense Laurent polynomials in `q` over `BigInt`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{QPoly, QalgError};

/// Laurent polynomial in `q`: finitely many terms, exponents may be negative.
///
/// Stored as the minimal exponent plus a dense ascending coefficient run.
/// Normal form: the run neither starts nor ends with a zero, and the zero
/// polynomial stores an empty run with `min_exp = 0`.
///
/// Serializes as `{"min_exp": e, "coeffs": [...decimal strings...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QLaurent {
    min_exp: i64,
    coeffs: Vec<BigInt>,
}

impl QLaurent {
    pub fn zero() -> Self {
        QLaurent {
            min_exp: 0,
            coeffs: Vec::new(),
        }
    }

    /// Builds from a base exponent and ascending coefficients, normalizing
    /// both ends.
    pub fn from_parts(min_exp: i64, coeffs: Vec<BigInt>) -> Self {
        let mut l = QLaurent { min_exp, coeffs };
        l.normalize();
        l
    }

    /// The single term `c * q^exp`.
    pub fn term(c: impl Into<BigInt>, exp: i64) -> Self {
        QLaurent::from_parts(exp, vec![c.into()])
    }

    pub fn from_poly(p: &QPoly) -> Self {
        QLaurent::from_parts(0, p.coeffs().to_vec())
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead_zeros = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros > 0 {
            self.coeffs.drain(..lead_zeros);
            self.min_exp += lead_zeros as i64;
        }
        if self.coeffs.is_empty() {
            self.min_exp = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Minimal exponent carrying a nonzero coefficient (0 for the zero
    /// polynomial).
    pub fn min_exp(&self) -> i64 {
        self.min_exp
    }

    /// Maximal exponent carrying a nonzero coefficient (0 for the zero
    /// polynomial).
    pub fn max_exp(&self) -> i64 {
        if self.coeffs.is_empty() {
            0
        } else {
            self.min_exp + self.coeffs.len() as i64 - 1
        }
    }

    /// Coefficient of `q^exp`.
    pub fn coeff(&self, exp: i64) -> BigInt {
        if exp < self.min_exp {
            return BigInt::zero();
        }
        self.coeffs
            .get((exp - self.min_exp) as usize)
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    /// Multiplies by `q^exp`.
    pub fn shift(&self, exp: i64) -> Self {
        if self.is_zero() {
            return QLaurent::zero();
        }
        QLaurent {
            min_exp: self.min_exp + exp,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Multiplies by a scalar.
    pub fn mul_scalar(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return QLaurent::zero();
        }
        QLaurent {
            min_exp: self.min_exp,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Reads back as an ordinary polynomial; fails if any exponent is
    /// negative.
    pub fn to_poly(&self) -> Result<QPoly, QalgError> {
        if self.is_zero() {
            return Ok(QPoly::zero());
        }
        if self.min_exp < 0 {
            return Err(QalgError::NegativeExponent {
                min_exp: self.min_exp,
            });
        }
        let mut coeffs = vec![BigInt::zero(); self.min_exp as usize];
        coeffs.extend(self.coeffs.iter().cloned());
        Ok(QPoly::from_coeffs(coeffs))
    }

    /// Exact division by `(1 - q)^k`. The zero polynomial divides to zero.
    ///
    /// Since `(1 - q) * (d_0 + d_1 q + ...) = c` forces `d_i = c_0 + ... + c_i`,
    /// each pass is a prefix sum of the coefficient run; the division is exact
    /// exactly when the full sum (the value at `q = 1`) vanishes.
    pub fn exact_div_one_minus_q_pow(&self, k: usize) -> Result<QLaurent, QalgError> {
        if self.is_zero() {
            return Ok(QLaurent::zero());
        }
        let mut out = self.clone();
        for pass in 1..=k {
            let mut acc = BigInt::zero();
            for c in out.coeffs.iter_mut() {
                acc += &*c;
                *c = acc.clone();
            }
            if !acc.is_zero() {
                return Err(QalgError::NotDivisible { k, pass });
            }
            out.coeffs.pop();
            out.normalize();
        }
        Ok(out)
    }
}

impl Add for &QLaurent {
    type Output = QLaurent;
    fn add(self, rhs: &QLaurent) -> QLaurent {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let min_exp = self.min_exp.min(rhs.min_exp);
        let max_exp = self.max_exp().max(rhs.max_exp());
        let mut coeffs = vec![BigInt::zero(); (max_exp - min_exp + 1) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[(self.min_exp - min_exp) as usize + i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            coeffs[(rhs.min_exp - min_exp) as usize + i] += c;
        }
        QLaurent::from_parts(min_exp, coeffs)
    }
}

impl Sub for &QLaurent {
    type Output = QLaurent;
    fn sub(self, rhs: &QLaurent) -> QLaurent {
        self + &(-rhs)
    }
}

impl Neg for &QLaurent {
    type Output = QLaurent;
    fn neg(self) -> QLaurent {
        QLaurent {
            min_exp: self.min_exp,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &QLaurent {
    type Output = QLaurent;
    fn mul(self, rhs: &QLaurent) -> QLaurent {
        if self.is_zero() || rhs.is_zero() {
            return QLaurent::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        QLaurent {
            min_exp: self.min_exp + rhs.min_exp,
            coeffs,
        }
    }
}

impl fmt::Display for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.min_exp == 0 {
            return fmt::Display::fmt(&self.to_poly().expect("nonnegative exponents"), f);
        }
        write!(
            f,
            "q^({}) * ({})",
            self.min_exp,
            QPoly::from_coeffs(self.coeffs.clone())
        )
    }
}

#[derive(Serialize, Deserialize)]
struct LaurentRepr {
    min_exp: i64,
    coeffs: Vec<String>,
}

impl Serialize for QLaurent {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        LaurentRepr {
            min_exp: self.min_exp,
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QLaurent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = LaurentRepr::deserialize(deserializer)?;
        let coeffs = repr
            .coeffs
            .iter()
            .map(|s| {
                s.parse::<BigInt>()
                    .map_err(|e| serde::de::Error::custom(format!("bad coefficient {s:?}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(QLaurent::from_parts(repr.min_exp, coeffs))
    }
}
