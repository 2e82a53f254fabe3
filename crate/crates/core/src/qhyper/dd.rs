//! Double-double arithmetic for the ill-conditioned closed-form assemblies.
//!
//! With the large root `lambda_bar > 1`, the `phi` and `psi` series grow past
//! 1e13 before their geometric tail sets in, and the numerator and denominator
//! of the bounded closed forms then subtract two such products almost exactly.
//! Plain f64 keeps only a couple of significant digits through that
//! cancellation near the high-q edge of the verification grid. Carrying the
//! series and the assembly on unevaluated (hi, lo) float pairs keeps roughly
//! 31 significant decimal digits, which is enough to absorb the worst observed
//! amplification with orders of magnitude to spare.
//!
//! The primitives are the classic error-free transformations (Dekker's product
//! via fused multiply-add, Knuth's two-sum) with the usual renormalized
//! add/mul/div/sqrt on top. Only the operations the closed forms need are
//! implemented.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Unevaluated sum `hi + lo` of two floats with `|lo|` at rounding level
/// relative to `hi`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub(super) struct Dd {
    hi: f64,
    lo: f64,
}

/// Error-free sum of two floats, no ordering assumption (Knuth).
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Error-free sum assuming `|a| >= |b|` or a zero operand.
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

/// Error-free product via fused multiply-add.
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub(super) const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub(super) const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub(super) fn new(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub(super) fn hi(self) -> f64 {
        self.hi
    }

    pub(super) fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub(super) fn abs(self) -> Dd {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub(super) fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    pub(super) fn recip(self) -> Dd {
        Dd::ONE / self
    }

    /// Integer power by binary squaring; exponents here stay below a few
    /// hundred, so underflow to zero is the only extreme case and is benign.
    pub(super) fn powi(self, mut n: u32) -> Dd {
        let mut base = self;
        let mut acc = Dd::ONE;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            n >>= 1;
        }
        acc
    }

    /// Square root by one double-double Newton correction of the f64 root;
    /// the argument must be nonnegative.
    pub(super) fn sqrt(self) -> Dd {
        if self.hi == 0.0 && self.lo == 0.0 {
            return Dd::ZERO;
        }
        debug_assert!(self.hi > 0.0, "sqrt of negative double-double");
        let approx = self.hi.sqrt();
        let a = Dd::new(approx);
        a + (self - a * a) / Dd::new(2.0 * approx)
    }
}

impl Add for Dd {
    type Output = Dd;

    fn add(self, rhs: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, rhs.hi);
        let (t1, t2) = two_sum(self.lo, rhs.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;

    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for Dd {
    type Output = Dd;

    fn sub(self, rhs: Dd) -> Dd {
        self + (-rhs)
    }
}

impl Mul for Dd {
    type Output = Dd;

    fn mul(self, rhs: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;

    fn div(self, rhs: Dd) -> Dd {
        // Long division: three f64 quotient digits, each peeled off with a
        // full double-double remainder update.
        let q1 = self.hi / rhs.hi;
        let r = self - rhs * Dd::new(q1);
        let q2 = r.hi / rhs.hi;
        let r = r - rhs * Dd::new(q2);
        let q3 = r.hi / rhs.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd { hi: s, lo: e } + Dd::new(q3)
    }
}
