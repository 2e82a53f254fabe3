//! Evaluation context: resolved root and series budgets.

use super::QhyperError;

/// The root `lambda` of `lambda^2 - lambda (1-q)/t + 1 = 0` inside the unit
/// interval.
///
/// Writing `c = (1-q)/t`, the large root `(c + sqrt(c^2 - 4))/2` is computed
/// first (no cancellation, since `c > 0`) and inverted; the two roots
/// multiply to 1. Requires the real-root region `(1-q)^2 > 4t^2`.
pub fn lambda_root(t: f64, q: f64) -> Result<f64, QhyperError> {
    Ok(lambda_roots(t, q)?.0)
}

/// Both roots `(lambda, lambda_bar)` with `lambda * lambda_bar = 1`.
pub(super) fn lambda_roots(t: f64, q: f64) -> Result<(f64, f64), QhyperError> {
    check_domain(t, q)?;
    let c = (1.0 - q) / t;
    let disc = c * c - 4.0;
    if disc <= 0.0 {
        return Err(QhyperError::ComplexRootRegion { t, q });
    }
    let big = (c + disc.sqrt()) / 2.0;
    Ok((1.0 / big, big))
}

fn check_domain(t: f64, q: f64) -> Result<(), QhyperError> {
    if !(q > 0.0 && q < 1.0) || !q.is_finite() {
        return Err(QhyperError::DomainViolation {
            what: format!("q={q} outside (0, 1)"),
        });
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(QhyperError::DomainViolation {
            what: format!("t={t} must be positive"),
        });
    }
    Ok(())
}

/// Evaluation point plus series budgets, with the root `lambda` resolved once
/// up front.
///
/// Constructing a context performs all domain checks, so every later
/// evaluation at this point starts from a valid `(t, q, lambda)` triple.
#[derive(Clone, Copy, Debug)]
pub struct EvalContext {
    t: f64,
    q: f64,
    lambda: f64,
    lambda_bar: f64,
    tol: f64,
    max_terms: usize,
}

impl EvalContext {
    /// Series tail tolerance used by [`EvalContext::new`].
    pub const DEFAULT_TOL: f64 = 1e-14;
    /// Term budget used by [`EvalContext::new`].
    pub const DEFAULT_MAX_TERMS: usize = 2000;

    pub fn new(t: f64, q: f64) -> Result<Self, QhyperError> {
        Self::with_params(t, q, Self::DEFAULT_TOL, Self::DEFAULT_MAX_TERMS)
    }

    pub fn with_params(t: f64, q: f64, tol: f64, max_terms: usize) -> Result<Self, QhyperError> {
        if !(tol > 0.0) || !tol.is_finite() {
            return Err(QhyperError::DomainViolation {
                what: format!("tolerance {tol} must be positive"),
            });
        }
        if max_terms < 8 {
            return Err(QhyperError::DomainViolation {
                what: format!("max_terms {max_terms} is too small to sum anything"),
            });
        }
        let (lambda, lambda_bar) = lambda_roots(t, q)?;
        Ok(EvalContext {
            t,
            q,
            lambda,
            lambda_bar,
            tol,
            max_terms,
        })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// The small root (inside the unit interval).
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// The large root `1 / lambda`.
    pub fn lambda_bar(&self) -> f64 {
        self.lambda_bar
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_reference_value() {
        // (5 - sqrt(21)) / 2 at t = 0.1, q = 0.5.
        let lam = lambda_root(0.1, 0.5).unwrap();
        assert!((lam - 0.208712152522080).abs() < 1e-15, "lam={lam}");
    }

    #[test]
    fn roots_multiply_to_one() {
        for &(t, q) in &[(0.01, 0.1), (0.05, 0.5), (0.12, 0.7), (0.15, 0.2)] {
            let ctx = EvalContext::new(t, q).unwrap();
            assert!((ctx.lambda() * ctx.lambda_bar() - 1.0).abs() < 1e-14);
            assert!(ctx.lambda() < 1.0 && ctx.lambda_bar() > 1.0);
            // lambda + lambda_bar = (1-q)/t
            let sum = ctx.lambda() + ctx.lambda_bar();
            assert!((sum - (1.0 - q) / t).abs() < 1e-12 * sum.abs());
        }
    }

    #[test]
    fn small_t_asymptote() {
        // lambda = t/(1-q) + t^3/(1-q)^3 + O(t^5)
        let (t, q) = (1e-3, 0.4);
        let lam = lambda_root(t, q).unwrap();
        let lead = t / (1.0 - q);
        assert!((lam - lead).abs() < 2.0 * lead.powi(3), "lam={lam}");
    }

    #[test]
    fn guards() {
        assert!(matches!(
            lambda_root(0.4, 0.5),
            Err(QhyperError::ComplexRootRegion { .. })
        ));
        // Boundary (1-q) = 2t is excluded.
        assert!(matches!(
            lambda_root(0.25, 0.5),
            Err(QhyperError::ComplexRootRegion { .. })
        ));
        assert!(matches!(
            lambda_root(0.1, 1.5),
            Err(QhyperError::DomainViolation { .. })
        ));
        assert!(matches!(
            lambda_root(-0.1, 0.5),
            Err(QhyperError::DomainViolation { .. })
        ));
        assert!(matches!(
            EvalContext::with_params(0.1, 0.5, -1.0, 100),
            Err(QhyperError::DomainViolation { .. })
        ));
        assert!(matches!(
            EvalContext::with_params(0.1, 0.5, 1e-12, 2),
            Err(QhyperError::DomainViolation { .. })
        ));
    }
}
