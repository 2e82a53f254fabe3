//! The q-series building blocks: `phi`, `psi`, `2phi1`, and infinite
//! q-Pochhammer products.

use super::context::EvalContext;
use super::QhyperError;

/// Compensated (Kahan) summation; the series here alternate in sign when
/// called with the large root, so stray rounding in the partial sums is worth
/// suppressing.
#[derive(Clone, Copy, Debug, Default)]
pub(super) struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub(super) fn add(&mut self, x: f64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub(super) fn value(&self) -> f64 {
        self.sum
    }
}

/// Shared term loop: starts from `term = 1`, multiplies by `ratio(k)` to step
/// from term `k` to `k + 1`, and stops once two consecutive terms fall below
/// `tol * (1 + |sum|)`. Two in a row because q-series terms can dip near a
/// sign change without the tail being done.
pub(super) fn sum_terms(
    what: &str,
    ctx: &EvalContext,
    mut ratio: impl FnMut(usize) -> Result<f64, QhyperError>,
) -> Result<f64, QhyperError> {
    let mut sum = KahanSum::default();
    sum.add(1.0);
    let mut term = 1.0f64;
    let mut small_streak = 0;
    for k in 0..ctx.max_terms() {
        term *= ratio(k)?;
        if !term.is_finite() {
            return Err(QhyperError::NoConvergence {
                what: format!("{what} (term overflow)"),
                max_terms: ctx.max_terms(),
            });
        }
        sum.add(term);
        if term.abs() <= ctx.tol() * (1.0 + sum.value().abs()) {
            small_streak += 1;
            if small_streak >= 2 {
                return Ok(sum.value());
            }
        } else {
            small_streak = 0;
        }
    }
    Err(QhyperError::NoConvergence {
        what: what.to_string(),
        max_terms: ctx.max_terms(),
    })
}

fn guard_denominator(what: &str, d: f64) -> Result<f64, QhyperError> {
    if d.abs() < 1e-12 {
        return Err(QhyperError::DenominatorNearZero {
            what: what.to_string(),
        });
    }
    Ok(d)
}

/// `phi(lambda, x) = sum_k (-lambda^2; q^2)_k x^k / ((q; q)_k (lambda^2 q; q)_k)`
/// with `q` taken from the context.
///
/// The term ratio from `k` to `k+1` is
/// `(1 + lambda^2 q^(2k)) x / ((1 - q^(k+1)) (1 - lambda^2 q^(k+1)))`.
/// `lambda` may be either root; with the large root the early factors are
/// large but the ratio still decays like `q^(k-1) x`.
pub fn phi(lambda: f64, x: f64, ctx: &EvalContext) -> Result<f64, QhyperError> {
    let q = ctx.q();
    let l2 = lambda * lambda;
    let mut qk1 = q; // q^(k+1)
    let mut q2k = 1.0; // q^(2k)
    sum_terms("phi", ctx, move |_| {
        let d1 = 1.0 - qk1;
        let d2 = guard_denominator("phi: 1 - lambda^2 q^(k+1)", 1.0 - l2 * qk1)?;
        let r = (1.0 + l2 * q2k) * x / (d1 * d2);
        qk1 *= q;
        q2k *= q * q;
        Ok(r)
    })
}

/// `psi(lambda, x) = sum_k (-lambda^2 q; q^2)_k x^k / ((q; q)_k (lambda^2 q; q)_k)`:
/// as [`phi`] but with the odd-exponent numerator factor `1 + lambda^2 q^(2k+1)`.
pub fn psi(lambda: f64, x: f64, ctx: &EvalContext) -> Result<f64, QhyperError> {
    let q = ctx.q();
    let l2 = lambda * lambda;
    let mut qk1 = q;
    let mut q2k1 = q; // q^(2k+1)
    sum_terms("psi", ctx, move |_| {
        let d1 = 1.0 - qk1;
        let d2 = guard_denominator("psi: 1 - lambda^2 q^(k+1)", 1.0 - l2 * qk1)?;
        let r = (1.0 + l2 * q2k1) * x / (d1 * d2);
        qk1 *= q;
        q2k1 *= q * q;
        Ok(r)
    })
}

pub(super) fn check_base(what: &str, q: f64) -> Result<(), QhyperError> {
    if !q.is_finite() || q.abs() >= 1.0 {
        return Err(QhyperError::DomainViolation {
            what: format!("{what} needs |q| < 1, got q = {q}"),
        });
    }
    Ok(())
}

/// The basic hypergeometric series
/// `2phi1(a, b; c; q, z) = sum_k (a; q)_k (b; q)_k z^k / ((q; q)_k (c; q)_k)`
/// at an explicit base `q`; the context only supplies the series budgets.
///
/// Requires `|z| < 1` (the natural convergence disk) and `c` away from the
/// poles `q^(-k)`.
pub fn two_phi_one(
    a: f64,
    b: f64,
    c: f64,
    q: f64,
    z: f64,
    ctx: &EvalContext,
) -> Result<f64, QhyperError> {
    check_base("2phi1", q)?;
    if z.abs() >= 1.0 {
        return Err(QhyperError::DomainViolation {
            what: format!("2phi1 argument |z| = {} must be < 1", z.abs()),
        });
    }
    let mut qk = 1.0; // q^k
    sum_terms("2phi1", ctx, move |_| {
        let dc = guard_denominator("2phi1: 1 - c q^k", 1.0 - c * qk)?;
        let dq = 1.0 - q * qk;
        let r = (1.0 - a * qk) * (1.0 - b * qk) * z / (dc * dq);
        qk *= q;
        Ok(r)
    })
}

/// The infinite q-Pochhammer product `(a; q)_inf = prod_k (1 - a q^k)` at an
/// explicit base `q`; the context only supplies the series budgets.
///
/// Truncates once `|a| q^k` is far below the tolerance; the dropped log-tail
/// is of that same order.
pub fn pochhammer_inf(a: f64, q: f64, ctx: &EvalContext) -> Result<f64, QhyperError> {
    check_base("pochhammer_inf", q)?;
    let mut product = 1.0f64;
    let mut aqk = a;
    for _ in 0..ctx.max_terms() {
        product *= 1.0 - aqk;
        aqk *= q;
        if aqk.abs() < 0.01 * ctx.tol() {
            return Ok(product);
        }
    }
    Err(QhyperError::NoConvergence {
        what: "pochhammer_inf".to_string(),
        max_terms: ctx.max_terms(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(t: f64, q: f64) -> EvalContext {
        EvalContext::new(t, q).unwrap()
    }

    /// Term-by-term reference: builds each term from scratch as a product of
    /// Pochhammer prefixes instead of a running ratio.
    fn phi_reference(lambda: f64, x: f64, q: f64, terms: usize) -> f64 {
        let mut total = 0.0;
        for k in 0..terms {
            let mut num = 1.0;
            let mut den = 1.0;
            for j in 0..k {
                num *= 1.0 + lambda * lambda * q.powi(2 * j as i32);
                den *= (1.0 - q.powi(j as i32 + 1)) * (1.0 - lambda * lambda * q.powi(j as i32 + 1));
            }
            total += num * x.powi(k as i32) / den;
        }
        total
    }

    #[test]
    fn phi_at_zero_argument_is_one() {
        let c = ctx(0.1, 0.5);
        assert_eq!(phi(c.lambda(), 0.0, &c).unwrap(), 1.0);
        assert_eq!(psi(c.lambda(), 0.0, &c).unwrap(), 1.0);
    }

    #[test]
    fn phi_matches_term_by_term_reference() {
        let c = ctx(0.1, 0.5);
        for &x in &[0.125, 0.25, 0.0625] {
            let fast = phi(c.lambda(), x, &c).unwrap();
            let slow = phi_reference(c.lambda(), x, c.q(), 60);
            assert!((fast - slow).abs() < 1e-13, "x={x}: {fast} vs {slow}");
            let fast_bar = phi(c.lambda_bar(), x, &c).unwrap();
            let slow_bar = phi_reference(c.lambda_bar(), x, c.q(), 60);
            assert!(
                (fast_bar - slow_bar).abs() < 1e-11 * slow_bar.abs(),
                "x={x}: {fast_bar} vs {slow_bar}"
            );
        }
    }

    /// `2phi1` with complex parameters, summed directly.
    fn complex_two_phi_one(
        a: num_complex::Complex64,
        b: num_complex::Complex64,
        c: num_complex::Complex64,
        q: f64,
        z: f64,
        terms: i32,
    ) -> num_complex::Complex64 {
        let one = num_complex::Complex64::new(1.0, 0.0);
        let mut sum = num_complex::Complex64::new(0.0, 0.0);
        let mut term = one;
        let mut qk = 1.0f64;
        for k in 0..terms {
            sum += term;
            term = term * (one - a * qk) * (one - b * qk) * z
                / ((one - c * qk) * (1.0 - q.powi(k + 1)));
            qk *= q;
        }
        sum
    }

    #[test]
    fn phi_is_the_complex_parameter_series() {
        // phi(lambda, x) = 2phi1(i lambda, -i lambda; lambda^2 q; q, x), and
        // psi shifts the parameters by sqrt(q).
        let c = ctx(0.1, 0.5);
        let (lam, q) = (c.lambda(), c.q());
        let i_lam = num_complex::Complex64::new(0.0, lam);
        let l2q = num_complex::Complex64::new(lam * lam * q, 0.0);
        let x_phi = q * q * q;
        let want = complex_two_phi_one(i_lam, -i_lam, l2q, q, x_phi, 200);
        assert!(want.im.abs() < 1e-14);
        let got = phi(lam, x_phi, &c).unwrap();
        assert!((got - want.re).abs() < 1e-12, "{got} vs {}", want.re);

        let rq = q.sqrt();
        let x_psi = q * q;
        let want_psi = complex_two_phi_one(i_lam * rq, -i_lam * rq, l2q, q, x_psi, 200);
        assert!(want_psi.im.abs() < 1e-14);
        let got_psi = psi(lam, x_psi, &c).unwrap();
        assert!(
            (got_psi - want_psi.re).abs() < 1e-12,
            "{got_psi} vs {}",
            want_psi.re
        );
    }

    #[test]
    fn phi_with_zero_lambda_is_q_exponential() {
        // phi(0, x) = sum_k x^k / (q; q)_k
        let c = ctx(0.1, 0.3);
        let got = phi(0.0, 0.2, &c).unwrap();
        let mut want = 0.0;
        let mut poch = 1.0;
        for k in 0..200 {
            if k > 0 {
                poch *= 1.0 - 0.3f64.powi(k);
            }
            want += 0.2f64.powi(k) / poch;
        }
        assert!((got - want).abs() < 1e-13, "{got} vs {want}");
    }

    #[test]
    fn psi_and_phi_coincide_at_lambda_zero() {
        let c = ctx(0.05, 0.4);
        let a = phi(0.0, 0.3, &c).unwrap();
        let b = psi(0.0, 0.3, &c).unwrap();
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn two_phi_one_terminating_case() {
        // a = q^(-1) makes the series terminate after two terms:
        // 1 + (1 - q^(-1))(1 - b) z / ((1 - c)(1 - q)).
        let c = ctx(0.1, 0.5);
        let q = 0.5;
        let (a, b, cc, z) = (1.0 / q, 0.3, 0.7, 0.4);
        let got = two_phi_one(a, b, cc, q, z, &c).unwrap();
        let want = 1.0 + (1.0 - a) * (1.0 - b) * z / ((1.0 - cc) * (1.0 - q));
        assert!((got - want).abs() < 1e-14, "{got} vs {want}");
    }

    #[test]
    fn two_phi_one_rejects_bad_domains() {
        let c = ctx(0.1, 0.5);
        assert!(matches!(
            two_phi_one(0.1, 0.2, 0.3, 0.5, 1.0, &c),
            Err(QhyperError::DomainViolation { .. })
        ));
        assert!(matches!(
            two_phi_one(0.1, 0.2, 0.3, 1.0, 0.4, &c),
            Err(QhyperError::DomainViolation { .. })
        ));
    }

    #[test]
    fn pochhammer_against_direct_product() {
        let c = ctx(0.1, 0.6);
        let got = pochhammer_inf(0.5, 0.6, &c).unwrap();
        let mut want = 1.0;
        for k in 0..500 {
            want *= 1.0 - 0.5 * 0.6f64.powi(k);
        }
        assert!((got - want).abs() < 1e-13, "{got} vs {want}");
        assert_eq!(pochhammer_inf(0.0, 0.6, &c).unwrap(), 1.0);
    }

    #[test]
    fn convergence_budget_is_enforced() {
        let tight = EvalContext::with_params(0.01, 0.9, 1e-14, 8).unwrap();
        assert!(matches!(
            phi(tight.lambda(), 0.9, &tight),
            Err(QhyperError::NoConvergence { .. })
        ));
    }

    #[test]
    fn geometric_tail_once_past_threshold() {
        // After k with lambda_bar^2 q^(k+1) < 1/2, successive phi terms of the
        // large-root series shrink by at least a fixed factor.
        let c = ctx(0.08, 0.55);
        let (lam, q) = (c.lambda_bar(), c.q());
        let l2 = lam * lam;
        let x = q.powi(5);
        let mut term: f64 = 1.0;
        let mut prev: Option<f64> = None;
        for k in 0..60 {
            let qk1 = q.powi(k + 1);
            let ratio = (1.0 + l2 * q.powi(2 * k)) * x / ((1.0 - qk1) * (1.0 - l2 * qk1));
            term *= ratio;
            if l2 * qk1 < 0.5 {
                if let Some(p) = prev {
                    assert!(
                        term.abs() <= 0.9 * p.abs().max(f64::MIN_POSITIVE),
                        "k={k}: {term} vs {p}"
                    );
                }
                prev = Some(term);
            }
        }
    }
}
