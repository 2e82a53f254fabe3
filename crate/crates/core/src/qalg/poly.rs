//! Dense polynomials in `q` over `BigInt`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{Error as DeError, SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Polynomial in `q` with integer coefficients, stored densely in ascending
/// exponent order.
///
/// Normal form: the stored list never ends in a zero, and the zero polynomial
/// stores an empty list. All constructors and operations maintain this, so
/// `==` is structural equality of values.
///
/// Serializes as a JSON array of decimal strings, ascending exponent:
/// `1 + 2q + q^2` becomes `["1","2","1"]` and zero becomes `[]`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QPoly {
    coeffs: Vec<BigInt>,
}

impl QPoly {
    /// The zero polynomial.
    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    /// The constant polynomial 1.
    pub fn one() -> Self {
        QPoly::constant(1)
    }

    /// A constant polynomial.
    pub fn constant(c: impl Into<BigInt>) -> Self {
        QPoly::from_coeffs(vec![c.into()])
    }

    /// The monomial `q^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::one();
        QPoly { coeffs }
    }

    /// Builds a polynomial from ascending coefficients, trimming trailing
    /// zeros.
    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    /// Convenience constructor from machine integers, ascending exponents.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        QPoly::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// The q-integer `[k]_q = 1 + q + ... + q^(k-1)` (`k` terms, so `[0]_q`
    /// is zero and `[1]_q` is 1).
    pub fn q_integer(k: u64) -> Self {
        QPoly {
            coeffs: vec![BigInt::one(); k as usize],
        }
    }

    /// `(1 - q)^k`, expanded by the binomial theorem.
    pub fn one_minus_q_pow(k: usize) -> Self {
        let n = BigInt::from(k);
        let coeffs = (0..=k)
            .map(|j| {
                let b = binomial(n.clone(), BigInt::from(j));
                if j % 2 == 0 {
                    b
                } else {
                    -b
                }
            })
            .collect();
        QPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Ascending coefficient slice; the last entry is nonzero.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `q^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    /// True if every coefficient is nonnegative.
    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        QPoly { coeffs }
    }

    /// Multiplies by a scalar.
    pub fn mul_scalar(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return QPoly::zero();
        }
        QPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiplies by the q-integer `[k]_q` in one pass.
    ///
    /// `p * [k]_q` equals `(p - q^k p) / (1 - q)`, and division by `(1 - q)`
    /// of that numerator is a sliding-window sum of `k` consecutive
    /// coefficients, so the product costs `O(deg p + k)` big-integer
    /// additions instead of the `O(k * deg p)` of schoolbook multiplication.
    pub fn mul_q_integer(&self, k: u64) -> Self {
        let k = k as usize;
        if self.is_zero() || k == 0 {
            return QPoly::zero();
        }
        let d = self.coeffs.len();
        let out_len = d + k - 1;
        let mut out = Vec::with_capacity(out_len);
        let mut window = BigInt::zero();
        for i in 0..out_len {
            if i < d {
                window += &self.coeffs[i];
            }
            if i >= k {
                window -= &self.coeffs[i - k];
            }
            out.push(window.clone());
        }
        QPoly { coeffs: out }
    }

    /// Evaluates at a rational point by Horner's rule.
    pub fn eval_rational(&self, q0: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * q0 + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Evaluates at `q = 1`, i.e. sums the coefficients.
    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (i, c) in short.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        QPoly::from_coeffs(coeffs)
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        let mut coeffs = self.coeffs.clone();
        if rhs.coeffs.len() > coeffs.len() {
            coeffs.resize(rhs.coeffs.len(), BigInt::zero());
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            coeffs[i] -= c;
        }
        QPoly::from_coeffs(coeffs)
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
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
        // No trailing zero possible: leading coefficients are nonzero and
        // BigInt has no zero divisors.
        QPoly { coeffs }
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if k == 1 {
                        write!(f, "q")?;
                    } else {
                        write!(f, "q^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl Serialize for QPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&c.to_string())?;
        }
        seq.end()
    }
}

struct QPolyVisitor;

impl<'de> Visitor<'de> for QPolyVisitor {
    type Value = QPoly;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a sequence of decimal integer strings")
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<QPoly, A::Error> {
        let mut coeffs = Vec::new();
        while let Some(s) = seq.next_element::<String>()? {
            let c = s
                .parse::<BigInt>()
                .map_err(|e| A::Error::custom(format!("bad coefficient {s:?}: {e}")))?;
            coeffs.push(c);
        }
        Ok(QPoly::from_coeffs(coeffs))
    }
}

impl<'de> Deserialize<'de> for QPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        deserializer.deserialize_seq(QPolyVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(coeffs: &[i64]) -> QPoly {
        QPoly::from_ints(coeffs)
    }

    #[test]
    fn normalization_trims_trailing_zeros() {
        assert_eq!(p(&[1, 2, 0, 0]), p(&[1, 2]));
        assert_eq!(p(&[0, 0]), QPoly::zero());
        assert_eq!(QPoly::zero().degree(), None);
        assert_eq!(p(&[0, 1]).degree(), Some(1));
    }

    #[test]
    fn addition_and_cancellation() {
        assert_eq!(&p(&[1, 2]) + &p(&[3, -2, 5]), p(&[4, 0, 5]));
        // Leading terms cancel and the result renormalizes.
        assert_eq!(&p(&[1, 1, 7]) - &p(&[0, 0, 7]), p(&[1, 1]));
        assert_eq!(&p(&[2, 3]) + &(-&p(&[2, 3])), QPoly::zero());
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(&p(&[1, 1]) * &p(&[1, 1]), p(&[1, 2, 1]));
        assert_eq!(&p(&[1, 2, 1]) * &p(&[2, 1, 1]), p(&[2, 5, 5, 3, 1]));
        assert_eq!(&p(&[4, 7]) * &QPoly::zero(), QPoly::zero());
        assert_eq!(&p(&[4, 7]) * &QPoly::one(), p(&[4, 7]));
    }

    #[test]
    fn q_integer_basics() {
        assert_eq!(QPoly::q_integer(0), QPoly::zero());
        assert_eq!(QPoly::q_integer(1), QPoly::one());
        assert_eq!(QPoly::q_integer(3), p(&[1, 1, 1]));
        for k in 0..=50u64 {
            assert_eq!(QPoly::q_integer(k).eval_at_one(), BigInt::from(k));
        }
    }

    #[test]
    fn mul_q_integer_matches_schoolbook() {
        let samples = [
            p(&[]),
            p(&[1]),
            p(&[2, 5, 5, 3, 1]),
            p(&[-3, 0, 7, 1]),
            p(&[0, 0, 4, -9, 2, 2]),
        ];
        for poly in &samples {
            for k in 0..=9u64 {
                assert_eq!(
                    poly.mul_q_integer(k),
                    poly * &QPoly::q_integer(k),
                    "poly={poly}, k={k}"
                );
            }
        }
    }

    #[test]
    fn one_minus_q_pow_matches_repeated_product() {
        let base = p(&[1, -1]);
        let mut acc = QPoly::one();
        for k in 0..=12usize {
            assert_eq!(QPoly::one_minus_q_pow(k), acc, "k={k}");
            acc = &acc * &base;
        }
    }

    #[test]
    fn eval_rational_examples() {
        let e5 = p(&[2, 5, 5, 3, 1]);
        let one = BigRational::from_integer(1.into());
        assert_eq!(e5.eval_rational(&one), BigRational::from_integer(16.into()));
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(e5.eval_rational(&half), BigRational::new(99.into(), 16.into()));
        assert_eq!(QPoly::zero().eval_rational(&half), BigRational::zero());
    }

    #[test]
    fn display_formatting() {
        assert_eq!(QPoly::zero().to_string(), "0");
        assert_eq!(p(&[2, 5, 0, -3, 1]).to_string(), "2 + 5*q - 3*q^3 + q^4");
        assert_eq!(p(&[-1, 1]).to_string(), "-1 + q");
    }

    #[test]
    fn serde_round_trip_and_normalization() {
        let poly = p(&[2, 5, 5, 3, 1]);
        let json = serde_json::to_string(&poly).unwrap();
        assert_eq!(json, r#"["2","5","5","3","1"]"#);
        assert_eq!(serde_json::from_str::<QPoly>(&json).unwrap(), poly);
        assert_eq!(serde_json::to_string(&QPoly::zero()).unwrap(), "[]");
        // Non-normalized input normalizes on parse.
        assert_eq!(serde_json::from_str::<QPoly>(r#"["0"]"#).unwrap(), QPoly::zero());
        assert!(serde_json::from_str::<QPoly>(r#"["x"]"#).is_err());
    }
}
