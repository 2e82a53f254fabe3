//! Continued-fraction convergents for the bounded generating functions.
//!
//! `G_w` is the `w`-th convergent of a continued fraction whose level `k`
//! carries the weight `t^2 * lw(k)`, where `lw` is [`level_weight`]. Both the
//! numerator and denominator satisfy the same three-term recurrence
//!
//! ```text
//! X_w = X_(w-1) - t^2 * lw(w) * X_(w-2)
//! ```
//!
//! with starts `P_(-1) = 0, P_0 = 1` and `Q_(-1) = 1, Q_0 = 1`, so both are
//! polynomials in `t^2` over `Z[q]` ([`T2Poly`]). The module offers the
//! convergents themselves, their truncated series expansion (matching
//! [`dp_series`](crate::pathcount::dp_series) coefficient by coefficient),
//! and exact evaluation at rational points.

use std::fmt;
use std::ops::{Mul, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::pathcount::{PossibilityPolicy, Width};
use crate::qalg::{QPoly, TSeries};

/// Weight of continued-fraction level `k >= 1`: `[k]_q [k+1]_q` for the
/// tangent policy and `[k]_q^2` for the secant policy.
///
/// These are the per-level products of an up step into height `k` and a down
/// step leaving it.
pub fn level_weight(k: u32, policy: PossibilityPolicy) -> QPoly {
    assert!(k >= 1, "continued-fraction levels start at 1");
    let base = QPoly::q_integer(k as u64);
    match policy {
        PossibilityPolicy::Tangent => base.mul_q_integer(k as u64 + 1),
        PossibilityPolicy::Secant => base.mul_q_integer(k as u64),
    }
}

/// Polynomial in `t^2` with `QPoly` coefficients; index `j` holds the
/// coefficient of `t^(2j)`. Trailing zero coefficients are trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct T2Poly {
    coeffs: Vec<QPoly>,
}

impl T2Poly {
    pub fn zero() -> Self {
        T2Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        T2Poly {
            coeffs: vec![QPoly::one()],
        }
    }

    pub fn from_coeffs(mut coeffs: Vec<QPoly>) -> Self {
        while coeffs.last().is_some_and(QPoly::is_zero) {
            coeffs.pop();
        }
        T2Poly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree in `t^2`, or `None` for zero.
    pub fn deg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `t^(2j)`.
    pub fn coeff(&self, j: usize) -> QPoly {
        self.coeffs.get(j).cloned().unwrap_or_else(QPoly::zero)
    }

    /// Reads the polynomial as a truncated series of the given order.
    pub fn to_series(&self, order: usize) -> TSeries {
        let mut s = TSeries::zero(order);
        for (j, p) in self.coeffs.iter().enumerate().take(order + 1) {
            s.set_coeff(j, p.clone());
        }
        s
    }

    /// Exact value at rational `t`, `q`.
    pub fn eval_rational(&self, t0: &BigRational, q0: &BigRational) -> BigRational {
        let t2 = t0 * t0;
        let mut acc = BigRational::zero();
        for p in self.coeffs.iter().rev() {
            acc = acc * &t2 + p.eval_rational(q0);
        }
        acc
    }

    /// Recurrence step: `self - t^2 * lw * older`.
    fn cf_step(&self, older: &T2Poly, lw: &QPoly) -> T2Poly {
        let len = self.coeffs.len().max(older.coeffs.len() + 1);
        let mut coeffs = Vec::with_capacity(len);
        for j in 0..len {
            let mut c = self.coeff(j);
            if j >= 1 {
                let prev = older.coeff(j - 1);
                if !prev.is_zero() {
                    c = &c - &(lw * &prev);
                }
            }
            coeffs.push(c);
        }
        T2Poly::from_coeffs(coeffs)
    }
}

impl Mul for &T2Poly {
    type Output = T2Poly;
    fn mul(self, rhs: &T2Poly) -> T2Poly {
        if self.is_zero() || rhs.is_zero() {
            return T2Poly::zero();
        }
        let mut coeffs = vec![QPoly::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        T2Poly::from_coeffs(coeffs)
    }
}

impl Sub for &T2Poly {
    type Output = T2Poly;
    fn sub(self, rhs: &T2Poly) -> T2Poly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len).map(|j| &self.coeff(j) - &rhs.coeff(j)).collect();
        T2Poly::from_coeffs(coeffs)
    }
}

impl fmt::Display for T2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(j, p)| match j {
                0 => format!("({p})"),
                _ => format!("({p}) t^{}", 2 * j),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Numerator and denominator of the `w`-th convergent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergentPair {
    pub w: i32,
    pub policy: PossibilityPolicy,
    pub num: T2Poly,
    pub den: T2Poly,
}

/// Convergent polynomials `P_w`, `Q_w` for `w >= -1`.
pub fn convergents(w: i32, policy: PossibilityPolicy) -> ConvergentPair {
    assert!(w >= -1, "convergents are indexed from -1");
    let (mut num_prev, mut num) = (T2Poly::zero(), T2Poly::one());
    let (mut den_prev, mut den) = (T2Poly::one(), T2Poly::one());
    if w == -1 {
        return ConvergentPair {
            w,
            policy,
            num: num_prev,
            den: den_prev,
        };
    }
    for k in 1..=w {
        let lw = level_weight(k as u32, policy);
        let num_next = num.cf_step(&num_prev, &lw);
        num_prev = std::mem::replace(&mut num, num_next);
        let den_next = den.cf_step(&den_prev, &lw);
        den_prev = std::mem::replace(&mut den, den_next);
    }
    ConvergentPair { w, policy, num, den }
}

/// Series expansion of `G_width` to the given order: `P_w * Q_w^(-1)`
/// truncated at `order`.
///
/// For `Width::Unbounded` the convergent depth `order` is used: coefficients
/// of `t^(2N)` are already exact for every `w >= N`, because a path of
/// half-length `N` cannot climb above height `N`.
pub fn cf_series(width: Width, policy: PossibilityPolicy, order: usize) -> TSeries {
    let depth = match width {
        Width::Bounded(w) => w as i32,
        Width::Unbounded => order as i32,
    };
    let pair = convergents(depth, policy);
    pair.num
        .to_series(order)
        .div(&pair.den.to_series(order))
        .expect("orders agree and Q_w has constant term 1")
}

/// Errors from exact convergent evaluation.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ContfracError {
    /// The denominator `Q_w` vanishes at the requested point.
    #[error("convergent denominator Q_{w} vanishes at t={t}, q={q}")]
    PoleAtPoint { w: u32, t: String, q: String },
}

/// Exact rational value of the `w`-th convergent `P_w / Q_w` at `(t0, q0)`.
///
/// Runs the three-term recurrence directly on values, so no polynomial in `t`
/// is ever built.
pub fn cf_eval_exact(
    w: u32,
    policy: PossibilityPolicy,
    t0: &BigRational,
    q0: &BigRational,
) -> Result<BigRational, ContfracError> {
    let t2 = t0 * t0;
    let (mut num_prev, mut num) = (BigRational::zero(), BigRational::one());
    let (mut den_prev, mut den) = (BigRational::one(), BigRational::one());
    for k in 1..=w {
        let lw = level_weight(k, policy).eval_rational(q0) * &t2;
        let num_next = &num - &(&lw * &num_prev);
        num_prev = std::mem::replace(&mut num, num_next);
        let den_next = &den - &(&lw * &den_prev);
        den_prev = std::mem::replace(&mut den, den_next);
    }
    if den.is_zero() {
        return Err(ContfracError::PoleAtPoint {
            w,
            t: t0.to_string(),
            q: q0.to_string(),
        });
    }
    Ok(num / den)
}
