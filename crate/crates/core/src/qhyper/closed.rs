//! Closed-form evaluation of `G_w`, `G'_w`, and their `w -> infinity` limits.

use num_complex::Complex64;

use super::basic::KahanSum;
use super::context::EvalContext;
use super::dd::Dd;
use super::QhyperError;

/// Term cutoff for the double-double series. Fixed rather than read from the
/// context: truncation error is amplified by the same cancellation the
/// extended precision exists to absorb, so the cutoff has to sit near the
/// double-double noise floor, not at the f64-level context tolerance.
const DD_SERIES_TOL: f64 = 1e-28;

fn guard_dd(what: &str, d: Dd) -> Result<Dd, QhyperError> {
    if !d.is_finite() || d.hi().abs() < 1e-290 {
        return Err(QhyperError::DenominatorNearZero {
            what: what.to_string(),
        });
    }
    Ok(d)
}

/// Both roots of `lambda^2 - lambda (1-q)/t + 1 = 0` at double-double
/// precision, small one first.
///
/// The context has already established a positive f64 discriminant; if the
/// refined discriminant still degenerates (possible only within rounding dust
/// of the boundary), that is reported as the complex-root region.
fn dd_roots(ctx: &EvalContext) -> Result<(Dd, Dd), QhyperError> {
    let c = (Dd::ONE - Dd::new(ctx.q())) / Dd::new(ctx.t());
    let disc = c * c - Dd::new(4.0);
    if disc.hi() <= 0.0 {
        return Err(QhyperError::ComplexRootRegion {
            t: ctx.t(),
            q: ctx.q(),
        });
    }
    let big = (c + disc.sqrt()) / Dd::new(2.0);
    Ok((big.recip(), big))
}

/// `phi` (shift 0) or `psi` (shift 1) of series parameter `a` at argument `x`,
/// summed in double-double down to the extended-precision floor.
///
/// Same term ratio as the f64 versions in [`super::basic`]:
/// `(1 + a^2 q^(2k + shift)) x / ((1 - q^(k+1)) (1 - a^2 q^(k+1)))`.
fn series_dd(
    what: &'static str,
    a: Dd,
    x: Dd,
    q: Dd,
    shift: u32,
    max_terms: usize,
) -> Result<Dd, QhyperError> {
    let a2 = a * a;
    let q2 = q * q;
    let mut sum = Dd::ONE;
    let mut term = Dd::ONE;
    let mut q2k = q.powi(shift); // q^(2k + shift)
    let mut qk1 = q; // q^(k+1)
    let mut small_streak = 0;
    for _ in 0..max_terms {
        let d2 = Dd::ONE - a2 * qk1;
        if d2.hi().abs() < 1e-200 {
            return Err(QhyperError::DenominatorNearZero {
                what: format!("{what}: 1 - lambda^2 q^(k+1)"),
            });
        }
        term = term * (Dd::ONE + a2 * q2k) * x / ((Dd::ONE - qk1) * d2);
        sum = sum + term;
        if !sum.is_finite() {
            return Err(QhyperError::NoConvergence {
                what: format!("{what} (term overflow)"),
                max_terms,
            });
        }
        q2k = q2k * q2;
        qk1 = qk1 * q;
        // Two small terms in a row, as in the f64 loop: q-series terms can dip
        // near a sign change without the tail being done.
        if term.abs().hi() <= DD_SERIES_TOL * (1.0 + sum.abs().hi()) {
            small_streak += 1;
            if small_streak >= 2 {
                return Ok(sum);
            }
        } else {
            small_streak = 0;
        }
    }
    Err(QhyperError::NoConvergence {
        what: what.to_string(),
        max_terms,
    })
}

/// Assembles `1 / (1 - lambda^2 (1-q) num / ((1 + lambda^2) den))`, the shape
/// shared by both finite-width closed forms, and rounds to f64 at the end.
fn assemble_dd(ctx: &EvalContext, lam: Dd, num: Dd, den: Dd, what: &str) -> Result<f64, QhyperError> {
    let l2 = lam * lam;
    let den = guard_dd(what, den)?;
    let f = l2 * (Dd::ONE - Dd::new(ctx.q())) * num / ((Dd::ONE + l2) * den);
    let outer = guard_dd(what, Dd::ONE - f)?;
    Ok(outer.recip().to_f64())
}

/// Tangent-family bounded generating function `G_w(t, q)` via its
/// basic-hypergeometric closed form.
///
/// Uses the balanced form of the convergent ratio in which both products of
/// `phi` values carry the factor `lambda^(2w) <= 1` instead of a growing
/// `lambda_bar^w`, so no overflow occurs for any `w`. The series and the
/// numerator/denominator assembly run in double-double: with the large root
/// the series peak many orders of magnitude above the assembled values, and
/// the subtractions below cancel those peaks almost exactly near the high-q
/// edge of the real-root region.
pub fn g_w_closed(w: u32, ctx: &EvalContext) -> Result<f64, QhyperError> {
    if w == 0 {
        return Ok(1.0);
    }
    let (lam, lbar) = dd_roots(ctx)?;
    let q = Dd::new(ctx.q());
    let m = ctx.max_terms();
    let x_hi = q.powi(w.saturating_add(3));
    let phi_l_q3 = series_dd("phi", lam, q.powi(3), q, 0, m)?;
    let phi_b_q3 = series_dd("phi", lbar, q.powi(3), q, 0, m)?;
    let phi_l_q2 = series_dd("phi", lam, q * q, q, 0, m)?;
    let phi_b_q2 = series_dd("phi", lbar, q * q, q, 0, m)?;
    let phi_l_hi = series_dd("phi", lam, x_hi, q, 0, m)?;
    let phi_b_hi = series_dd("phi", lbar, x_hi, q, 0, m)?;
    let lam2w = lam.powi(w.saturating_mul(2));
    let num = phi_l_q3 * phi_b_hi - lam2w * phi_b_q3 * phi_l_hi;
    let den = phi_l_q2 * phi_b_hi - lam2w * lam * lam * phi_b_q2 * phi_l_hi;
    assemble_dd(ctx, lam, num, den, "G_w closed form")
}

/// Secant-family bounded generating function `G'_w(t, q)`: as [`g_w_closed`]
/// with `psi` in place of `phi` and arguments `q^2, q^(w+2)` over `q, q^(w+2)`.
pub fn gp_w_closed(w: u32, ctx: &EvalContext) -> Result<f64, QhyperError> {
    if w == 0 {
        return Ok(1.0);
    }
    let (lam, lbar) = dd_roots(ctx)?;
    let q = Dd::new(ctx.q());
    let m = ctx.max_terms();
    let x_hi = q.powi(w.saturating_add(2));
    let psi_l_q2 = series_dd("psi", lam, q * q, q, 1, m)?;
    let psi_b_q2 = series_dd("psi", lbar, q * q, q, 1, m)?;
    let psi_l_q1 = series_dd("psi", lam, q, q, 1, m)?;
    let psi_b_q1 = series_dd("psi", lbar, q, q, 1, m)?;
    let psi_l_hi = series_dd("psi", lam, x_hi, q, 1, m)?;
    let psi_b_hi = series_dd("psi", lbar, x_hi, q, 1, m)?;
    let lam2w = lam.powi(w.saturating_mul(2));
    let num = psi_l_q2 * psi_b_hi - lam2w * psi_b_q2 * psi_l_hi;
    let den = psi_l_q1 * psi_b_hi - lam2w * lam * lam * psi_b_q1 * psi_l_hi;
    assemble_dd(ctx, lam, num, den, "G'_w closed form")
}

/// Reference (unbalanced) form of the tangent closed form, with the roots
/// passed in the printed order or swapped.
///
/// Kept as a cross-check: the value must not depend on which root plays which
/// role. Carries `lambda_bar^w` explicitly, so it is only usable for moderate
/// `w`; [`g_w_closed`] is the production form.
pub fn g_w_closed_raw(w: u32, ctx: &EvalContext, swap_roots: bool) -> Result<f64, QhyperError> {
    if w == 0 {
        return Ok(1.0);
    }
    let (lam, lbar) = dd_roots(ctx)?;
    let (a, b) = if swap_roots { (lbar, lam) } else { (lam, lbar) };
    let q = Dd::new(ctx.q());
    let m = ctx.max_terms();
    let x3 = q.powi(3);
    let x2 = q * q;
    let x_hi = q.powi(w.saturating_add(3));
    let num = b.powi(w) * series_dd("phi", a, x3, q, 0, m)? * series_dd("phi", b, x_hi, q, 0, m)?
        - a.powi(w) * series_dd("phi", b, x3, q, 0, m)? * series_dd("phi", a, x_hi, q, 0, m)?;
    let den = b.powi(w + 1) * series_dd("phi", a, x2, q, 0, m)? * series_dd("phi", b, x_hi, q, 0, m)?
        - a.powi(w + 1) * series_dd("phi", b, x2, q, 0, m)? * series_dd("phi", a, x_hi, q, 0, m)?;
    let den = guard_dd("G_w raw form", den)?;
    // Swapping the roots negates num and den together and fixes a / (1 + a^2),
    // so the assembled value is root-order independent.
    let f = a * (Dd::ONE - q) * num / ((Dd::ONE + a * a) * den);
    let outer = guard_dd("G_w raw form", Dd::ONE - f)?;
    Ok(outer.recip().to_f64())
}

/// Unbounded tangent generating function `G(t, q) = sum_N E_(2N+1)(q) t^(2N)`
/// via the theta-like rectangle sum
///
/// ```text
/// R = sum_(n>=0) q^(n^2) lambda^(2n) (1 - lambda^2 q^(2n)) / (1 + lambda^2 q^(2n))
/// G = (1 + lambda^2) (1 - (1 + lambda^2) R) / (lambda^2 (1 - q))
/// ```
///
/// whose terms decay like `q^(n^2)`. The n = 0 term of `(1 + lambda^2) R` is
/// exactly `1 - lambda^2`, so the bracket is folded to
///
/// ```text
/// 1 - (1 + lambda^2) R = lambda^2 (1 - (1 + lambda^2) S),
/// S = sum_(n>=1) q^(n^2) lambda^(2n-2) (1 - lambda^2 q^(2n)) / (1 + lambda^2 q^(2n))
/// ```
///
/// before the division by `lambda^2 (1 - q)`. The unfolded bracket is a
/// difference of values tending to 1 and loses every digit as `t -> 0`; the
/// folded form stays fully accurate there.
pub fn g_inf_closed(ctx: &EvalContext) -> Result<f64, QhyperError> {
    let (lam, q) = (ctx.lambda(), ctx.q());
    let l2 = lam * lam;
    let mut sum = KahanSum::default();
    let mut outer = q; // q^(n^2) lambda^(2n-2), from n = 1
    let mut odd = q * q * q; // q^(2n+1), the update ratio of q^(n^2)
    let mut q2n = q * q; // q^(2n)
    let mut converged = false;
    for _ in 0..ctx.max_terms() {
        let term = outer * (1.0 - l2 * q2n) / (1.0 + l2 * q2n);
        sum.add(term);
        outer *= odd * l2;
        odd *= q * q;
        q2n *= q * q;
        if outer < ctx.tol() {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(QhyperError::NoConvergence {
            what: "G_inf rectangle sum".to_string(),
            max_terms: ctx.max_terms(),
        });
    }
    let s = sum.value();
    Ok((1.0 + l2) * (1.0 - (1.0 + l2) * s) / (1.0 - q))
}

/// Unbounded secant generating function `G'(t, q) = sum_N E_(2N)(q) t^(2N)`:
///
/// ```text
/// G' = (1 + lambda^2) sum_n q^(n^2+n) lambda^(2n)
///      (1 - lambda^2 q^(2n+1)) / (1 + lambda^2 q^(2n+1))
/// ```
pub fn gp_inf_closed(ctx: &EvalContext) -> Result<f64, QhyperError> {
    let (lam, q) = (ctx.lambda(), ctx.q());
    let l2 = lam * lam;
    let mut sum = KahanSum::default();
    let mut outer = 1.0f64; // q^(n^2+n) lambda^(2n)
    let mut even = q * q; // q^(2n+2), the update ratio of q^(n^2+n)
    let mut q2n1 = q; // q^(2n+1)
    let mut converged = false;
    for _ in 0..ctx.max_terms() {
        let term = outer * (1.0 - l2 * q2n1) / (1.0 + l2 * q2n1);
        sum.add(term);
        outer *= even * l2;
        even *= q * q;
        q2n1 *= q * q;
        if outer < ctx.tol() {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(QhyperError::NoConvergence {
            what: "G'_inf rectangle sum".to_string(),
            max_terms: ctx.max_terms(),
        });
    }
    Ok((1.0 + l2) * sum.value())
}

/// Residual imaginary part must be rounding noise, not structure.
fn real_part_checked(v: Complex64) -> Result<f64, QhyperError> {
    if v.im.abs() > 1e-8 * (1.0 + v.re.abs()) {
        return Err(QhyperError::ImaginaryResidue { im: v.im });
    }
    Ok(v.re)
}

/// Complex-route cross-check for [`g_inf_closed`]: sums the raw alternating
/// series `S = sum_k (-i lambda)^k / (1 - i lambda q^k)` and applies the same
/// prefactor. The imaginary part must cancel to rounding noise.
pub fn g_inf_raw_complex(ctx: &EvalContext) -> Result<f64, QhyperError> {
    let (lam, q) = (ctx.lambda(), ctx.q());
    let l2 = lam * lam;
    let s = raw_rect_sum(Complex64::new(0.0, lam), q, ctx)?;
    let val = (1.0 + l2) * (1.0 - (1.0 + l2) * s) / (l2 * (1.0 - q));
    real_part_checked(val)
}

/// Complex-route cross-check for [`gp_inf_closed`]: the same sum at the
/// shifted base `i lambda sqrt(q)`, scaled by `1 + lambda^2`.
pub fn gp_inf_raw_complex(ctx: &EvalContext) -> Result<f64, QhyperError> {
    let (lam, q) = (ctx.lambda(), ctx.q());
    let l2 = lam * lam;
    let s = raw_rect_sum(Complex64::new(0.0, lam * q.sqrt()), q, ctx)?;
    let val = (1.0 + l2) * s;
    real_part_checked(val)
}

/// `sum_k (-y)^k / (1 - y q^k)` for purely imaginary `y`.
fn raw_rect_sum(y: Complex64, q: f64, ctx: &EvalContext) -> Result<Complex64, QhyperError> {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut pw = Complex64::new(1.0, 0.0); // (-y)^k
    let mut qk = 1.0f64;
    for _ in 0..ctx.max_terms() {
        let den = Complex64::new(1.0, 0.0) - y * qk;
        if den.norm() < 1e-12 {
            return Err(QhyperError::DenominatorNearZero {
                what: "raw rectangle sum".to_string(),
            });
        }
        sum += pw / den;
        pw *= -y;
        qk *= q;
        if pw.norm() < ctx.tol() {
            return Ok(sum);
        }
    }
    Err(QhyperError::NoConvergence {
        what: "raw rectangle sum".to_string(),
        max_terms: ctx.max_terms(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closedform::euler_poly;
    use crate::contfrac::cf_eval_exact;
    use crate::pathcount::PossibilityPolicy;
    use num_rational::BigRational;
    use num_traits::{One, ToPrimitive, Zero};

    fn ctx(t: f64, q: f64) -> EvalContext {
        EvalContext::new(t, q).unwrap()
    }

    fn exact_convergent(w: u32, policy: PossibilityPolicy, t: f64, q: f64) -> f64 {
        let t0 = BigRational::from_float(t).unwrap();
        let q0 = BigRational::from_float(q).unwrap();
        cf_eval_exact(w, policy, &t0, &q0).unwrap().to_f64().unwrap()
    }

    /// Exact partial sum `sum_(N<=deg) E(q) t^(2N)` of the unbounded series.
    fn series_partial(policy: PossibilityPolicy, t: f64, q: f64, max_n: u32) -> f64 {
        let t0 = BigRational::from_float(t).unwrap();
        let q0 = BigRational::from_float(q).unwrap();
        let t2 = &t0 * &t0;
        let mut acc = BigRational::zero();
        let mut pw = BigRational::one();
        for n in 0..=max_n {
            acc += euler_poly(n, policy).unwrap().eval_rational(&q0) * &pw;
            pw *= &t2;
        }
        acc.to_f64().unwrap()
    }

    #[test]
    fn g_w_reference_point() {
        // G_1(1/10, 1/2) = 200/197
        let c = ctx(0.1, 0.5);
        let got = g_w_closed(1, &c).unwrap();
        assert!((got - 200.0 / 197.0).abs() < 1e-12, "got {got}");
        assert_eq!(g_w_closed(0, &c).unwrap(), 1.0);
    }

    #[test]
    fn gp_w_is_q_free_at_w_one() {
        // G'_1 = 1 / (1 - t^2) for every q inside the guard.
        let t = 0.1;
        let want = 1.0 / (1.0 - t * t);
        for &q in &[0.15, 0.3, 0.5, 0.7] {
            let got = gp_w_closed(1, &ctx(t, q)).unwrap();
            assert!((got - want).abs() < 1e-12, "q={q}: {got} vs {want}");
        }
    }

    #[test]
    fn closed_forms_match_exact_convergents() {
        for &(t, q) in &[(0.1, 0.5), (0.05, 0.3), (0.12, 0.7)] {
            let c = ctx(t, q);
            for w in 1..=8u32 {
                let tan = g_w_closed(w, &c).unwrap();
                let tan_exact = exact_convergent(w, PossibilityPolicy::Tangent, t, q);
                assert!(
                    (tan - tan_exact).abs() < 1e-11 * tan_exact.abs(),
                    "tangent w={w} t={t} q={q}: {tan} vs {tan_exact}"
                );
                let sec = gp_w_closed(w, &c).unwrap();
                let sec_exact = exact_convergent(w, PossibilityPolicy::Secant, t, q);
                assert!(
                    (sec - sec_exact).abs() < 1e-11 * sec_exact.abs(),
                    "secant w={w} t={t} q={q}: {sec} vs {sec_exact}"
                );
            }
        }
    }

    #[test]
    fn raw_form_is_root_symmetric() {
        for &(t, q) in &[(0.1, 0.5), (0.07, 0.3)] {
            let c = ctx(t, q);
            for w in 1..=6u32 {
                let plain = g_w_closed_raw(w, &c, false).unwrap();
                let swapped = g_w_closed_raw(w, &c, true).unwrap();
                let balanced = g_w_closed(w, &c).unwrap();
                assert!(
                    (plain - swapped).abs() < 1e-9 * plain.abs(),
                    "w={w}: {plain} vs {swapped}"
                );
                assert!(
                    (plain - balanced).abs() < 1e-9 * plain.abs(),
                    "w={w}: {plain} vs {balanced}"
                );
            }
        }
    }

    #[test]
    fn g_inf_matches_series_partial_sums() {
        for &(t, q) in &[(0.03, 0.5), (0.05, 0.3), (0.02, 0.7)] {
            let c = ctx(t, q);
            let got = g_inf_closed(&c).unwrap();
            let want = series_partial(PossibilityPolicy::Tangent, t, q, 10);
            assert!((got - want).abs() < 1e-10, "t={t} q={q}: {got} vs {want}");
            let gotp = gp_inf_closed(&c).unwrap();
            let wantp = series_partial(PossibilityPolicy::Secant, t, q, 10);
            assert!(
                (gotp - wantp).abs() < 1e-10,
                "t={t} q={q}: {gotp} vs {wantp}"
            );
        }
    }

    #[test]
    fn g_inf_is_deep_convergent_limit() {
        let (t, q) = (0.05, 0.5);
        let c = ctx(t, q);
        let deep = exact_convergent(40, PossibilityPolicy::Tangent, t, q);
        let got = g_inf_closed(&c).unwrap();
        assert!((got - deep).abs() < 1e-12, "{got} vs {deep}");
        let deep_p = exact_convergent(40, PossibilityPolicy::Secant, t, q);
        let got_p = gp_inf_closed(&c).unwrap();
        assert!((got_p - deep_p).abs() < 1e-12, "{got_p} vs {deep_p}");
    }

    #[test]
    fn bounded_values_approach_the_limit_monotonically() {
        // Checked at w in {5, 10, 20, 40}: the worst gap to the unbounded
        // value over a small grid must not grow with w, and is tiny by 40.
        let points = [(0.05, 0.5), (0.12, 0.7), (0.03, 0.2)];
        let mut prev = f64::INFINITY;
        for &w in &[5u32, 10, 20, 40] {
            let mut worst = 0.0f64;
            for &(t, q) in &points {
                let c = ctx(t, q);
                let gap = (g_w_closed(w, &c).unwrap() - g_inf_closed(&c).unwrap()).abs();
                let gap_p = (gp_w_closed(w, &c).unwrap() - gp_inf_closed(&c).unwrap()).abs();
                worst = worst.max(gap).max(gap_p);
            }
            assert!(
                worst <= prev + 1e-13,
                "w={w}: worst gap {worst} grew past {prev}"
            );
            prev = worst;
        }
        assert!(prev < 1e-10, "gap at w=40: {prev}");
    }

    #[test]
    fn g_inf_tends_to_one_as_t_vanishes() {
        let c = ctx(1e-6, 0.5);
        assert!((g_inf_closed(&c).unwrap() - 1.0).abs() < 1e-10);
        assert!((gp_inf_closed(&c).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn complex_route_agrees_with_rectangle_form() {
        for &(t, q) in &[(0.03, 0.5), (0.05, 0.3), (0.08, 0.6)] {
            let c = ctx(t, q);
            let rect = g_inf_closed(&c).unwrap();
            let raw = g_inf_raw_complex(&c).unwrap();
            assert!((rect - raw).abs() < 1e-11, "t={t} q={q}: {rect} vs {raw}");
            let rect_p = gp_inf_closed(&c).unwrap();
            let raw_p = gp_inf_raw_complex(&c).unwrap();
            assert!(
                (rect_p - raw_p).abs() < 1e-11,
                "t={t} q={q}: {rect_p} vs {raw_p}"
            );
        }
    }
}
