//! Numerical identity checks: the transformation lemmas behind the closed
//! forms, and the width-one specialization of the bounded formulas.

use serde::Serialize;

use super::basic::{check_base, phi, pochhammer_inf, psi, sum_terms, two_phi_one, KahanSum};
use super::context::EvalContext;
use super::QhyperError;

/// Acceptance tolerance a single-point check is marked against. Suites
/// re-merge observations under their own (configurable) tolerances.
pub const DEFAULT_IDENTITY_TOL: f64 = 1e-9;

/// Outcome of checking one identity over one or more points.
///
/// `grid` lists the evaluated coordinate tuples, `max_abs_err` the largest
/// observed discrepancy and `worst_point` where it occurred. A non-finite
/// error cannot pass.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub name: String,
    pub grid: Vec<Vec<f64>>,
    pub max_abs_err: f64,
    pub worst_point: Vec<f64>,
    pub tol: f64,
    pub pass: bool,
}

impl IdentityReport {
    /// Builds a report from `(point, error)` observations against `tol`.
    pub fn from_observations(name: &str, tol: f64, observations: &[(Vec<f64>, f64)]) -> Self {
        let mut max_abs_err = f64::INFINITY;
        let mut worst_point = Vec::new();
        if !observations.is_empty() {
            max_abs_err = f64::NEG_INFINITY;
            for (point, err) in observations {
                let e = if err.is_nan() { f64::INFINITY } else { *err };
                if e > max_abs_err {
                    max_abs_err = e;
                    worst_point = point.clone();
                }
            }
        }
        IdentityReport {
            name: name.to_string(),
            grid: observations.iter().map(|(p, _)| p.clone()).collect(),
            max_abs_err,
            worst_point,
            tol,
            pass: max_abs_err <= tol,
        }
    }

    fn single(name: &str, point: Vec<f64>, err: f64) -> Self {
        Self::from_observations(name, DEFAULT_IDENTITY_TOL, &[(point, err)])
    }
}

fn require(cond: bool, what: String) -> Result<(), QhyperError> {
    if cond {
        Ok(())
    } else {
        Err(QhyperError::DomainViolation { what })
    }
}

/// Checks the rectangle-sum identity three ways at an explicit base `q` (the
/// context only supplies budgets) and reports the worst absolute discrepancy:
///
/// ```text
/// sum_n x^n / (1 - y q^n)
///   = sum_n x^n y^n q^(n^2) (1 - x y q^(2n)) / ((1 - x q^n)(1 - y q^n))
///   = sum_(n,m) x^n y^m q^(n m)
/// ```
///
/// The left side sums over rows of the lattice, the middle over hooks, the
/// right over individual cells. Needs `|x|, |y|, |q| < 1`.
pub fn rect_identity_check(
    x: f64,
    y: f64,
    q: f64,
    ctx: &EvalContext,
) -> Result<IdentityReport, QhyperError> {
    check_base("rectangle identity", q)?;
    require(
        x.abs() < 1.0 && y.abs() < 1.0,
        format!("rectangle identity needs |x|, |y| < 1, got ({x}, {y})"),
    )?;

    let mut rows = KahanSum::default();
    let mut xn = 1.0f64;
    let mut qn = 1.0f64;
    let mut row_terms = 0;
    while xn.abs() >= ctx.tol() * (1.0 + rows.value().abs()) || row_terms < 2 {
        if row_terms >= ctx.max_terms() {
            return Err(QhyperError::NoConvergence {
                what: "rectangle identity row sum".to_string(),
                max_terms: ctx.max_terms(),
            });
        }
        let den = 1.0 - y * qn;
        if den.abs() < 1e-12 {
            return Err(QhyperError::DenominatorNearZero {
                what: "rectangle identity: 1 - y q^n".to_string(),
            });
        }
        rows.add(xn / den);
        xn *= x;
        qn *= q;
        row_terms += 1;
    }

    let mut hooks = KahanSum::default();
    let mut outer = 1.0f64; // x^n y^n q^(n^2)
    let mut odd = q; // q^(2n+1)
    let mut q2n = 1.0f64;
    let mut qn = 1.0f64;
    let mut hook_terms = 0;
    while outer.abs() >= ctx.tol() * (1.0 + hooks.value().abs()) || hook_terms < 2 {
        if hook_terms >= ctx.max_terms() {
            return Err(QhyperError::NoConvergence {
                what: "rectangle identity hook sum".to_string(),
                max_terms: ctx.max_terms(),
            });
        }
        let dx = 1.0 - x * qn;
        let dy = 1.0 - y * qn;
        if dx.abs() < 1e-12 || dy.abs() < 1e-12 {
            return Err(QhyperError::DenominatorNearZero {
                what: "rectangle identity: hook denominator".to_string(),
            });
        }
        hooks.add(outer * (1.0 - x * y * q2n) / (dx * dy));
        outer *= x * y * odd;
        odd *= q * q;
        q2n *= q * q;
        qn *= q;
        hook_terms += 1;
    }

    // Cell-by-cell double sum, kept as an honest third evaluation rather than
    // collapsing the inner geometric series back into the row form.
    let mut cells = KahanSum::default();
    let mut xn = 1.0f64;
    let mut qn = 1.0f64;
    for n in 0..ctx.max_terms() {
        let mut inner = KahanSum::default();
        let mut term = xn;
        let mut m = 0;
        while term.abs() >= 0.01 * ctx.tol() {
            if m >= ctx.max_terms() {
                return Err(QhyperError::NoConvergence {
                    what: "rectangle identity cell sum (inner)".to_string(),
                    max_terms: ctx.max_terms(),
                });
            }
            inner.add(term);
            term *= y * qn;
            m += 1;
        }
        cells.add(inner.value());
        xn *= x;
        qn *= q;
        if n >= 1 && xn.abs() < 0.01 * ctx.tol() * (1.0 - y.abs()) {
            let (l, h, c) = (rows.value(), hooks.value(), cells.value());
            let err = (l - h).abs().max((l - c).abs()).max((h - c).abs());
            return Ok(IdentityReport::single(
                "rectangle-sums",
                vec![x, y, q],
                err,
            ));
        }
    }
    Err(QhyperError::NoConvergence {
        what: "rectangle identity cell sum".to_string(),
        max_terms: ctx.max_terms(),
    })
}

/// Checks the Heine transformation of `2phi1` at an explicit base `q` (the
/// context only supplies budgets) and reports the absolute discrepancy:
///
/// ```text
/// 2phi1(a, b; c; q, z)
///   = [(b; q)_inf (a z; q)_inf / ((c; q)_inf (z; q)_inf)]
///     * 2phi1(c/b, z; a z; q, b)
/// ```
///
/// Needs `|z| < 1` and `0 < |b| < 1`, since the transformation swaps the
/// roles of `b` and `z`.
pub fn heine_check(
    a: f64,
    b: f64,
    c: f64,
    q: f64,
    z: f64,
    ctx: &EvalContext,
) -> Result<IdentityReport, QhyperError> {
    require(
        b.abs() >= 1e-6,
        format!("Heine transformation divides by b; got b = {b}"),
    )?;
    require(
        b.abs() < 1.0,
        format!("Heine transformation needs |b| < 1, got b = {b}"),
    )?;
    let lhs = two_phi_one(a, b, c, q, z, ctx)?;
    let den = pochhammer_inf(c, q, ctx)? * pochhammer_inf(z, q, ctx)?;
    if den.abs() < 1e-12 {
        return Err(QhyperError::DenominatorNearZero {
            what: "Heine transformation: (c; q)_inf (z; q)_inf".to_string(),
        });
    }
    let prefactor = pochhammer_inf(b, q, ctx)? * pochhammer_inf(a * z, q, ctx)? / den;
    let rhs = prefactor * two_phi_one(c / b, z, a * z, q, b, ctx)?;
    Ok(IdentityReport::single(
        "heine-transformation",
        vec![a, b, c, q, z],
        (lhs - rhs).abs(),
    ))
}

/// Checks the width-one specializations of both bounded closed forms at the
/// context's `(t, q)` and reports the worse absolute discrepancy:
///
/// ```text
/// (1 - q^2) / (1 + lambda^2)
///   = [phi(l, q^3) phi(L, q^4) - l^2 phi(L, q^3) phi(l, q^4)]
///     / [phi(l, q^2) phi(L, q^4) - l^4 phi(L, q^2) phi(l, q^4)]
/// (1 - q) / (1 + lambda^2)
///   = [psi(l, q^2) psi(L, q^3) - l^2 psi(L, q^2) psi(l, q^3)]
///     / [psi(l, q) psi(L, q^3) - l^4 psi(L, q) psi(l, q^3)]
/// ```
///
/// with `l` the small root and `L = 1/l` the large one. These are exactly the
/// statements that collapse `G_1` to `200/197`-style rational values and
/// `G'_1` to `1/(1 - t^2)`.
pub fn identities_w1_check(ctx: &EvalContext) -> Result<IdentityReport, QhyperError> {
    let (lam, lbar, q) = (ctx.lambda(), ctx.lambda_bar(), ctx.q());
    let l2 = lam * lam;
    let l4 = l2 * l2;

    let q2 = q * q;
    let q3 = q2 * q;
    let q4 = q3 * q;

    let num1 =
        phi(lam, q3, ctx)? * phi(lbar, q4, ctx)? - l2 * phi(lbar, q3, ctx)? * phi(lam, q4, ctx)?;
    let den1 =
        phi(lam, q2, ctx)? * phi(lbar, q4, ctx)? - l4 * phi(lbar, q2, ctx)? * phi(lam, q4, ctx)?;
    if den1.abs() < 1e-12 {
        return Err(QhyperError::DenominatorNearZero {
            what: "width-one phi identity denominator".to_string(),
        });
    }
    let err1 = ((1.0 - q2) / (1.0 + l2) - num1 / den1).abs();

    let num2 =
        psi(lam, q2, ctx)? * psi(lbar, q3, ctx)? - l2 * psi(lbar, q2, ctx)? * psi(lam, q3, ctx)?;
    let den2 =
        psi(lam, q, ctx)? * psi(lbar, q3, ctx)? - l4 * psi(lbar, q, ctx)? * psi(lam, q3, ctx)?;
    if den2.abs() < 1e-12 {
        return Err(QhyperError::DenominatorNearZero {
            what: "width-one psi identity denominator".to_string(),
        });
    }
    let err2 = ((1.0 - q) / (1.0 + l2) - num2 / den2).abs();

    Ok(IdentityReport::single(
        "width-one-identities",
        vec![ctx.t(), q],
        err1.max(err2),
    ))
}

/// Result of probing the width-one phi identity with its first series read
/// literally instead of in the form that holds.
#[derive(Clone, Debug, Serialize)]
pub struct W1LiteralProbe {
    pub t: f64,
    pub q: f64,
    /// All series in the probe converged, so `abs_err` is meaningful.
    pub converged: bool,
    /// Distance between the two sides; order 0.1 rather than rounding noise.
    pub abs_err: f64,
}

/// `sum_k (-L^2; q^2)_k x^k / ((q; q)_k (l^2/q; q)_k)`, the literal first
/// series of the width-one identity. Mixes the large root into the numerator
/// factors while the denominator keeps the small root shifted by `1/q`.
fn literal_series(x: f64, ctx: &EvalContext) -> Result<f64, QhyperError> {
    let q = ctx.q();
    let l2 = ctx.lambda() * ctx.lambda();
    let lbar2 = ctx.lambda_bar() * ctx.lambda_bar();
    let mut q2k = 1.0; // q^(2k)
    let mut qk1 = q; // q^(k+1)
    let mut qkm1 = 1.0 / q; // q^(k-1)
    sum_terms("literal width-one series", ctx, move |_| {
        let d1 = 1.0 - qk1;
        let d2 = 1.0 - l2 * qkm1;
        if d2.abs() < 1e-12 {
            return Err(QhyperError::DenominatorNearZero {
                what: "literal series: 1 - lambda^2 q^(k-1)".to_string(),
            });
        }
        let r = (1.0 + lbar2 * q2k) * x / (d1 * d2);
        q2k *= q * q;
        qk1 *= q;
        qkm1 *= q;
        Ok(r)
    })
}

/// Probes the width-one phi identity with its first series taken literally.
///
/// The literal reading turns one real series complex: the numerator becomes
/// `phi(l, q^3) S(q^4) + i l S(q^3) phi(l, q^4)` with `S` the literal series,
/// so the reported error is the full complex distance from the real
/// left-hand side. This stays an order-one quantity (about 0.38 at
/// `t = 0.1, q = 0.5`), so the probe documents a reading that does not hold;
/// it never gates anything.
pub fn w1_literal_first_identity(ctx: &EvalContext) -> W1LiteralProbe {
    let failed = W1LiteralProbe {
        t: ctx.t(),
        q: ctx.q(),
        converged: false,
        abs_err: f64::NAN,
    };
    let q = ctx.q();
    let (q2, q3) = (q * q, q * q * q);
    let q4 = q3 * q;
    let lam = ctx.lambda();
    let parts = (|| -> Result<(f64, f64, f64), QhyperError> {
        let lit_q2 = literal_series(q2, ctx)?;
        let lit_q3 = literal_series(q3, ctx)?;
        let lit_q4 = literal_series(q4, ctx)?;
        let phi_q2 = phi(lam, q2, ctx)?;
        let phi_q3 = phi(lam, q3, ctx)?;
        let phi_q4 = phi(lam, q4, ctx)?;
        let num_re = phi_q3 * lit_q4;
        let num_im = lam * lit_q3 * phi_q4;
        let den = phi_q2 * lit_q4 - lam.powi(4) * lit_q2 * phi_q4;
        Ok((num_re, num_im, den))
    })();
    let Ok((num_re, num_im, den)) = parts else {
        return failed;
    };
    if den.abs() < 1e-12 {
        return failed;
    }
    let lhs = (1.0 - q2) / (1.0 + lam * lam);
    W1LiteralProbe {
        t: ctx.t(),
        q: ctx.q(),
        converged: true,
        abs_err: (lhs - num_re / den).hypot(num_im / den),
    }
}
