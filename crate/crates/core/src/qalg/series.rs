//! Truncated power series in `t^2` with polynomial coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{QPoly, QalgError};

/// Accumulates `a * b` into `buf` (index = exponent), subtracting instead
/// when asked. Convolving into one shared buffer avoids reallocating the
/// partial sum polynomial once per product.
fn mul_acc(buf: &mut Vec<BigInt>, a: &QPoly, b: &QPoly, subtract: bool) {
    let (ac, bc) = (a.coeffs(), b.coeffs());
    if ac.is_empty() || bc.is_empty() {
        return;
    }
    let need = ac.len() + bc.len() - 1;
    if buf.len() < need {
        buf.resize(need, BigInt::zero());
    }
    for (i, x) in ac.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in bc.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            if subtract {
                buf[i + j] -= x * y;
            } else {
                buf[i + j] += x * y;
            }
        }
    }
}

/// Power series in `t^2` over `Z[q]`, truncated at a fixed order.
///
/// Index `n` holds the coefficient of `t^(2n)`; a series of order `K` stores
/// `K + 1` coefficients. The generating functions in this crate are even in
/// `t`, so the odd half is never represented.
///
/// Arithmetic is defined between series of equal order only; mixing orders is
/// reported as an error rather than silently truncating.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TSeries {
    coeffs: Vec<QPoly>,
}

impl TSeries {
    /// The zero series at the given order.
    pub fn zero(order: usize) -> Self {
        TSeries {
            coeffs: vec![QPoly::zero(); order + 1],
        }
    }

    /// The constant series 1 at the given order.
    pub fn one(order: usize) -> Self {
        let mut s = TSeries::zero(order);
        s.coeffs[0] = QPoly::one();
        s
    }

    /// Builds from coefficients of `t^0, t^2, t^4, ...`; the order is one
    /// less than the length. An empty vector means the zero series of order 0.
    pub fn from_coeffs(coeffs: Vec<QPoly>) -> Self {
        if coeffs.is_empty() {
            return TSeries::zero(0);
        }
        TSeries { coeffs }
    }

    /// Truncation order: coefficients of `t^(2n)` are tracked for `n <= order`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `t^(2n)`; panics beyond the order.
    pub fn coeff(&self, n: usize) -> &QPoly {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[QPoly] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, n: usize, p: QPoly) {
        self.coeffs[n] = p;
    }

    /// Drops coefficients above `order` (which must not exceed the current
    /// order).
    pub fn truncated(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot extend a truncated series");
        TSeries {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    /// Product truncated at the common order.
    pub fn mul(&self, rhs: &TSeries) -> Result<TSeries, QalgError> {
        if self.order() != rhs.order() {
            return Err(QalgError::OrderMismatch {
                left: self.order(),
                right: rhs.order(),
            });
        }
        let order = self.order();
        let mut out = TSeries::zero(order);
        for n in 0..=order {
            let mut buf = Vec::new();
            for k in 0..=n {
                mul_acc(&mut buf, &self.coeffs[k], &rhs.coeffs[n - k], false);
            }
            out.coeffs[n] = QPoly::from_coeffs(buf);
        }
        Ok(out)
    }

    /// Quotient truncated at the common order; the divisor must have constant
    /// term exactly 1.
    ///
    /// With `d_0 = 1` the quotient satisfies
    /// `g_n = p_n - (d_1 g_(n-1) + ... + d_n g_0)`, a single convolution
    /// pass, so dividing directly costs half of inverting then multiplying.
    pub fn div(&self, rhs: &TSeries) -> Result<TSeries, QalgError> {
        if self.order() != rhs.order() {
            return Err(QalgError::OrderMismatch {
                left: self.order(),
                right: rhs.order(),
            });
        }
        if rhs.coeffs[0] != QPoly::one() {
            return Err(QalgError::NonUnitConstantTerm);
        }
        let order = self.order();
        let mut quot = TSeries::zero(order);
        for n in 0..=order {
            let mut buf = self.coeffs[n].coeffs().to_vec();
            for k in 1..=n {
                mul_acc(&mut buf, &rhs.coeffs[k], &quot.coeffs[n - k], true);
            }
            quot.coeffs[n] = QPoly::from_coeffs(buf);
        }
        Ok(quot)
    }

    /// Multiplicative inverse truncated at the same order; requires constant
    /// term exactly 1.
    pub fn invert(&self) -> Result<TSeries, QalgError> {
        TSeries::one(self.order()).div(self)
    }
}

impl fmt::Display for TSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(n, p)| match n {
                0 => format!("({p})"),
                _ => format!("({p}) t^{}", 2 * n),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0 + O(t^{})", 2 * self.order() + 2)
        } else {
            write!(f, "{} + O(t^{})", terms.join(" + "), 2 * self.order() + 2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(coeffs: &[i64]) -> QPoly {
        QPoly::from_ints(coeffs)
    }

    #[test]
    fn mul_examples() {
        let order = 3;
        let one = TSeries::one(order);
        let a = TSeries::from_coeffs(vec![p(&[1]), p(&[0, 1]), p(&[2]), p(&[1, 1])]);
        assert_eq!(a.mul(&one).unwrap(), a);
        // (1 + t^2)(1 - t^2) = 1 - t^4
        let plus = TSeries::from_coeffs(vec![p(&[1]), p(&[1]), p(&[]), p(&[])]);
        let minus = TSeries::from_coeffs(vec![p(&[1]), p(&[-1]), p(&[]), p(&[])]);
        let want = TSeries::from_coeffs(vec![p(&[1]), p(&[]), p(&[-1]), p(&[])]);
        assert_eq!(plus.mul(&minus).unwrap(), want);
        // Truncation: at order 1, (1 + t^2)^2 keeps only 1 + 2t^2.
        let short = TSeries::from_coeffs(vec![p(&[1]), p(&[1])]);
        assert_eq!(
            short.mul(&short).unwrap(),
            TSeries::from_coeffs(vec![p(&[1]), p(&[2])])
        );
    }

    #[test]
    fn mul_requires_matching_orders() {
        let a = TSeries::one(2);
        let b = TSeries::one(3);
        assert_eq!(
            a.mul(&b),
            Err(QalgError::OrderMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn div_examples() {
        // (1 - t^4) / (1 - t^2) = 1 + t^2 up to order 3
        let num = TSeries::from_coeffs(vec![p(&[1]), p(&[]), p(&[-1]), p(&[])]);
        let den = TSeries::from_coeffs(vec![p(&[1]), p(&[-1]), p(&[]), p(&[])]);
        let want = TSeries::from_coeffs(vec![p(&[1]), p(&[1]), p(&[]), p(&[])]);
        assert_eq!(num.div(&den).unwrap(), want);
        // Division undoes multiplication.
        let a = TSeries::from_coeffs(vec![p(&[3]), p(&[0, 1]), p(&[2, -2]), p(&[1])]);
        let d = TSeries::from_coeffs(vec![p(&[1]), p(&[1, 1]), p(&[-5]), p(&[0, 7])]);
        assert_eq!(a.mul(&d).unwrap().div(&d).unwrap(), a);
        assert_eq!(
            a.div(&TSeries::one(2)),
            Err(QalgError::OrderMismatch { left: 3, right: 2 })
        );
        assert_eq!(a.div(&a), Err(QalgError::NonUnitConstantTerm));
    }

    #[test]
    fn invert_examples() {
        assert_eq!(TSeries::one(4).invert().unwrap(), TSeries::one(4));
        // 1 / (1 - (1+q) t^2) = sum_N (1+q)^N t^(2N)
        let order = 4;
        let mut denom = TSeries::one(order);
        denom.set_coeff(1, p(&[-1, -1]));
        let inv = denom.invert().unwrap();
        let mut pow = QPoly::one();
        for n in 0..=order {
            assert_eq!(inv.coeff(n), &pow, "n={n}");
            pow = &pow * &p(&[1, 1]);
        }
    }

    #[test]
    fn invert_round_trip() {
        let a = TSeries::from_coeffs(vec![
            p(&[1]),
            p(&[1, 1]),
            p(&[-2, 0, 3]),
            p(&[0, 5]),
            p(&[7]),
        ]);
        let inv = a.invert().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), TSeries::one(4));
        assert_eq!(inv.invert().unwrap(), a);
    }

    #[test]
    fn invert_requires_unit_constant_term() {
        let mut s = TSeries::one(2);
        s.set_coeff(0, p(&[2]));
        assert_eq!(s.invert(), Err(QalgError::NonUnitConstantTerm));
        assert_eq!(TSeries::zero(2).invert(), Err(QalgError::NonUnitConstantTerm));
    }

    #[test]
    fn truncation_and_display() {
        let a = TSeries::from_coeffs(vec![p(&[1]), p(&[1, 1]), p(&[3])]);
        assert_eq!(a.truncated(1), TSeries::from_coeffs(vec![p(&[1]), p(&[1, 1])]));
        assert_eq!(a.to_string(), "(1) + (1 + q) t^2 + (3) t^4 + O(t^6)");
    }
}
