//! Named verification suites: each one sweeps a grid or a seeded sample
//! cloud, compares an evaluation route against an independent reference, and
//! folds the observations into [`IdentityReport`]s.
//!
//! - `theorems`: bounded closed forms against exact rational convergents;
//! - `corollaries`: unbounded closed forms against exact partial sums and
//!   their complex-route twins;
//! - `lemma5`: the rectangle-sum identity on random parameters;
//! - `heine`: the Heine transformation on random parameters;
//! - `w1`: the width-one identity pair, plus the literal-reading probes.

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::closed::{
    g_inf_closed, g_inf_raw_complex, g_w_closed, gp_inf_closed, gp_inf_raw_complex, gp_w_closed,
};
use super::context::EvalContext;
use super::identities::{
    heine_check, identities_w1_check, rect_identity_check, w1_literal_first_identity,
    IdentityReport, W1LiteralProbe,
};
use super::QhyperError;
use crate::closedform::{euler_poly, ClosedFormError};
use crate::contfrac::{cf_eval_exact, ContfracError};
use crate::pathcount::PossibilityPolicy;
use crate::qalg::QPoly;

/// Highest width compared against exact convergents in the theorems suite.
const THEOREMS_MAX_WIDTH: u32 = 8;
/// Highest coefficient index in the corollaries partial sums; the dropped
/// tail is below 1e-10 everywhere on the default grid.
const COROLLARIES_MAX_N: u32 = 12;
/// Sample count for the randomized suites.
const SAMPLE_COUNT: usize = 50;

/// The named verification suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Theorems,
    Corollaries,
    Lemma5,
    Heine,
    W1,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Theorems,
        Suite::Corollaries,
        Suite::Lemma5,
        Suite::Heine,
        Suite::W1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Theorems => "theorems",
            Suite::Corollaries => "corollaries",
            Suite::Lemma5 => "lemma5",
            Suite::Heine => "heine",
            Suite::W1 => "w1",
        }
    }

    /// Acceptance tolerance used when the caller does not override it. The
    /// theorems tolerance bounds a normalized error `|got - exact| / (1 +
    /// |exact|)`; the others bound plain absolute errors.
    pub fn default_tol(self) -> f64 {
        match self {
            Suite::Theorems => 1e-9,
            Suite::Corollaries => 1e-8,
            Suite::Lemma5 => 1e-10,
            Suite::Heine => 1e-9,
            Suite::W1 => 1e-8,
        }
    }

    fn default_grid(self) -> GridSpec {
        match self {
            // The rectangle contains complex-root points (upper-right corner);
            // the runner skips them and still keeps well over 100 live points.
            Suite::Theorems => GridSpec {
                t_min: 0.01,
                t_max: 0.15,
                t_steps: 12,
                q_min: 0.1,
                q_max: 0.9,
                q_steps: 12,
            },
            // Small t keeps the degree-12 partial-sum truncation far below
            // the suite tolerance.
            Suite::Corollaries => GridSpec {
                t_min: 0.0125,
                t_max: 0.05,
                t_steps: 4,
                q_min: 0.1,
                q_max: 0.85,
                q_steps: 5,
            },
            // Entirely inside the real-root guard. The corner (0.12, 0.75)
            // is excluded deliberately: there lambda = 3/4 up to rounding, so
            // lambda_bar^2 q^2 = 1 and the large-root series sit on a pole.
            // At (0.12, 0.7) the corner root is lambda = 1/2 and the pole
            // ladder 4 q^(k+1) stays well away from 1.
            Suite::Lemma5 | Suite::Heine | Suite::W1 => GridSpec {
                t_min: 0.02,
                t_max: 0.12,
                t_steps: 5,
                q_min: 0.15,
                q_max: 0.7,
                q_steps: 5,
            },
        }
    }
}

impl std::fmt::Display for Suite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "theorems" => Ok(Suite::Theorems),
            "corollaries" => Ok(Suite::Corollaries),
            "lemma5" => Ok(Suite::Lemma5),
            "heine" => Ok(Suite::Heine),
            "w1" => Ok(Suite::W1),
            other => Err(format!(
                "unknown suite '{other}' (expected theorems, corollaries, lemma5, heine, or w1)"
            )),
        }
    }
}

/// Inclusive evaluation rectangle: `steps` evenly spaced values per axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub t_min: f64,
    pub t_max: f64,
    pub t_steps: usize,
    pub q_min: f64,
    pub q_max: f64,
    pub q_steps: usize,
}

fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    if steps <= 1 {
        return vec![lo];
    }
    (0..steps)
        .map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
        .collect()
}

impl GridSpec {
    /// The grid points in row-major order (t outer, q inner).
    pub fn points(&self) -> Vec<(f64, f64)> {
        let qs = linspace(self.q_min, self.q_max, self.q_steps);
        linspace(self.t_min, self.t_max, self.t_steps)
            .into_iter()
            .flat_map(|t| qs.iter().map(move |&q| (t, q)))
            .collect()
    }
}

/// Parses `"t=LO..HI:STEPS,q=LO..HI:STEPS"`, e.g. `t=0.01..0.1:8,q=0.2..0.8:6`.
impl std::str::FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        fn axis(part: &str, name: &str) -> Result<(f64, f64, usize), String> {
            let bad = || format!("grid axis '{part}' is not of the form {name}=LO..HI:STEPS");
            let rest = part.strip_prefix(name).ok_or_else(bad)?;
            let rest = rest.strip_prefix('=').ok_or_else(bad)?;
            let (range, steps) = rest.split_once(':').ok_or_else(bad)?;
            let (lo, hi) = range.split_once("..").ok_or_else(bad)?;
            let lo: f64 = lo.parse().map_err(|_| bad())?;
            let hi: f64 = hi.parse().map_err(|_| bad())?;
            let steps: usize = steps.parse().map_err(|_| bad())?;
            if !lo.is_finite() || !hi.is_finite() || lo > hi {
                return Err(format!("grid axis '{part}' has an empty or non-finite range"));
            }
            if steps == 0 {
                return Err(format!("grid axis '{part}' needs at least one step"));
            }
            Ok((lo, hi, steps))
        }
        let (t_part, q_part) = s
            .split_once(',')
            .ok_or_else(|| format!("grid '{s}' is not of the form t=LO..HI:K,q=LO..HI:K"))?;
        let (t_min, t_max, t_steps) = axis(t_part.trim(), "t")?;
        let (q_min, q_max, q_steps) = axis(q_part.trim(), "q")?;
        Ok(GridSpec {
            t_min,
            t_max,
            t_steps,
            q_min,
            q_max,
            q_steps,
        })
    }
}

/// Knobs shared by all suites. `tol` of `None` means each suite's default;
/// the grid override applies to the grid-driven suites (theorems,
/// corollaries, w1) and is ignored by the sampled ones.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub tol: Option<f64>,
    pub max_terms: usize,
    pub seed: u64,
    pub grid: Option<GridSpec>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            tol: None,
            max_terms: EvalContext::DEFAULT_MAX_TERMS,
            seed: 0xA5EED,
            grid: None,
        }
    }
}

/// Seeded uniform sampler. Uses the raw ChaCha stream directly so sampled
/// parameter tuples are stable across platforms and dependency bumps.
struct SampleRng(ChaCha8Rng);

impl SampleRng {
    fn new(seed: u64) -> Self {
        SampleRng(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }
}

/// Everything one suite run produced.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub name: String,
    /// Points actually compared (grid points inside the guard, or samples).
    pub evaluated_points: usize,
    /// Grid points discarded for violating the real-root guard.
    pub skipped_points: usize,
    pub reports: Vec<IdentityReport>,
    /// Only the w1 suite emits these; they are informational and never gate.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub literal_probes: Option<Vec<W1LiteralProbe>>,
    pub pass: bool,
}

impl SuiteReport {
    fn new(
        suite: Suite,
        evaluated_points: usize,
        skipped_points: usize,
        reports: Vec<IdentityReport>,
        literal_probes: Option<Vec<W1LiteralProbe>>,
    ) -> Self {
        let pass = !reports.is_empty() && reports.iter().all(|r| r.pass);
        SuiteReport {
            name: suite.name().to_string(),
            evaluated_points,
            skipped_points,
            reports,
            literal_probes,
            pass,
        }
    }
}

/// A suite run failed outright (as opposed to measuring a disagreement,
/// which is reported through a failing [`IdentityReport`]).
#[derive(Debug, thiserror::Error)]
pub enum SuiteError {
    /// The requested grid contains no usable points.
    #[error("no usable grid points (all skipped or the grid is empty)")]
    EmptyGrid,
    #[error(transparent)]
    Eval(#[from] QhyperError),
    #[error(transparent)]
    Convergent(#[from] ContfracError),
    #[error(transparent)]
    ClosedForm(#[from] ClosedFormError),
}

/// Runs one suite to completion.
pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<SuiteReport, SuiteError> {
    match suite {
        Suite::Theorems => run_theorems(cfg),
        Suite::Corollaries => run_corollaries(cfg),
        Suite::Lemma5 => run_lemma5(cfg),
        Suite::Heine => run_heine(cfg),
        Suite::W1 => run_w1(cfg),
    }
}

/// Runs every suite in declaration order.
pub fn run_all(cfg: &SuiteConfig) -> Result<Vec<SuiteReport>, SuiteError> {
    Suite::ALL.iter().map(|&s| run_suite(s, cfg)).collect()
}

/// Skip points whose roots have collided this far: with `lambda` and
/// `1/lambda` closer than about 1%, the bounded forms subtract nearly equal
/// products and no digits survive to compare.
const ROOT_GAP_LIMIT: f64 = 0.99;

/// Splits grid points into evaluation contexts and a skip count, dropping
/// complex-root violations and near-degenerate boundary points.
fn contexts_on_grid(
    grid: &GridSpec,
    max_terms: usize,
) -> Result<(Vec<EvalContext>, usize), SuiteError> {
    let mut contexts = Vec::new();
    let mut skipped = 0;
    for (t, q) in grid.points() {
        match EvalContext::with_params(t, q, EvalContext::DEFAULT_TOL, max_terms) {
            Ok(ctx) if ctx.lambda() > ROOT_GAP_LIMIT => skipped += 1,
            Ok(ctx) => contexts.push(ctx),
            Err(QhyperError::ComplexRootRegion { .. }) => skipped += 1,
            Err(e) => return Err(e.into()),
        }
    }
    if contexts.is_empty() {
        return Err(SuiteError::EmptyGrid);
    }
    Ok((contexts, skipped))
}

fn rational_pair(t: f64, q: f64) -> (BigRational, BigRational) {
    let t0 = BigRational::from_float(t).expect("grid t is finite");
    let q0 = BigRational::from_float(q).expect("grid q is finite");
    (t0, q0)
}

fn run_theorems(cfg: &SuiteConfig) -> Result<SuiteReport, SuiteError> {
    let tol = cfg.tol.unwrap_or(Suite::Theorems.default_tol());
    let grid = cfg.grid.unwrap_or(Suite::Theorems.default_grid());
    let (contexts, skipped) = contexts_on_grid(&grid, cfg.max_terms)?;

    let mut tan_obs = Vec::with_capacity(contexts.len());
    let mut sec_obs = Vec::with_capacity(contexts.len());
    for ctx in &contexts {
        let (t0, q0) = rational_pair(ctx.t(), ctx.q());
        let mut worst_tan = 0.0f64;
        let mut worst_sec = 0.0f64;
        for w in 1..=THEOREMS_MAX_WIDTH {
            let exact = cf_eval_exact(w, PossibilityPolicy::Tangent, &t0, &q0)?
                .to_f64()
                .unwrap_or(f64::NAN);
            let got = g_w_closed(w, ctx)?;
            worst_tan = worst_tan.max((got - exact).abs() / (1.0 + exact.abs()));

            let exact = cf_eval_exact(w, PossibilityPolicy::Secant, &t0, &q0)?
                .to_f64()
                .unwrap_or(f64::NAN);
            let got = gp_w_closed(w, ctx)?;
            worst_sec = worst_sec.max((got - exact).abs() / (1.0 + exact.abs()));
        }
        tan_obs.push((vec![ctx.t(), ctx.q()], worst_tan));
        sec_obs.push((vec![ctx.t(), ctx.q()], worst_sec));
    }

    let reports = vec![
        IdentityReport::from_observations("tangent-bounded-closed-form", tol, &tan_obs),
        IdentityReport::from_observations("secant-bounded-closed-form", tol, &sec_obs),
    ];
    Ok(SuiteReport::new(
        Suite::Theorems,
        contexts.len(),
        skipped,
        reports,
        None,
    ))
}

fn run_corollaries(cfg: &SuiteConfig) -> Result<SuiteReport, SuiteError> {
    let tol = cfg.tol.unwrap_or(Suite::Corollaries.default_tol());
    let grid = cfg.grid.unwrap_or(Suite::Corollaries.default_grid());
    let (contexts, skipped) = contexts_on_grid(&grid, cfg.max_terms)?;

    let collect = |family| -> Result<Vec<QPoly>, ClosedFormError> {
        (0..=COROLLARIES_MAX_N).map(|n| euler_poly(n, family)).collect()
    };
    let tan_polys = collect(PossibilityPolicy::Tangent)?;
    let sec_polys = collect(PossibilityPolicy::Secant)?;

    let mut tan_obs = Vec::with_capacity(contexts.len());
    let mut sec_obs = Vec::with_capacity(contexts.len());
    let mut tan_cx_obs = Vec::with_capacity(contexts.len());
    let mut sec_cx_obs = Vec::with_capacity(contexts.len());
    for ctx in &contexts {
        let point = vec![ctx.t(), ctx.q()];
        let g = g_inf_closed(ctx)?;
        let gp = gp_inf_closed(ctx)?;
        tan_obs.push((point.clone(), (g - exact_partial_sum(&tan_polys, ctx)).abs()));
        sec_obs.push((point.clone(), (gp - exact_partial_sum(&sec_polys, ctx)).abs()));
        tan_cx_obs.push((point.clone(), (g_inf_raw_complex(ctx)? - g).abs()));
        sec_cx_obs.push((point, (gp_inf_raw_complex(ctx)? - gp).abs()));
    }

    let reports = vec![
        IdentityReport::from_observations("tangent-unbounded-closed-form", tol, &tan_obs),
        IdentityReport::from_observations("secant-unbounded-closed-form", tol, &sec_obs),
        IdentityReport::from_observations("tangent-unbounded-complex-route", tol, &tan_cx_obs),
        IdentityReport::from_observations("secant-unbounded-complex-route", tol, &sec_cx_obs),
    ];
    Ok(SuiteReport::new(
        Suite::Corollaries,
        contexts.len(),
        skipped,
        reports,
        None,
    ))
}

/// `sum_N p_N(q) t^(2N)` over the given coefficient polynomials, evaluated in
/// exact rational arithmetic at the context's point.
fn exact_partial_sum(polys: &[QPoly], ctx: &EvalContext) -> f64 {
    let (t0, q0) = rational_pair(ctx.t(), ctx.q());
    let t2 = &t0 * &t0;
    let mut acc = BigRational::zero();
    let mut pw = BigRational::one();
    for p in polys {
        acc += p.eval_rational(&q0) * &pw;
        pw *= &t2;
    }
    acc.to_f64().unwrap_or(f64::NAN)
}

fn run_lemma5(cfg: &SuiteConfig) -> Result<SuiteReport, SuiteError> {
    let tol = cfg.tol.unwrap_or(Suite::Lemma5.default_tol());
    let budget = budget_context(cfg)?;
    let mut rng = SampleRng::new(cfg.seed);
    let mut obs = Vec::with_capacity(SAMPLE_COUNT);
    for _ in 0..SAMPLE_COUNT {
        let x = rng.range(-0.6, 0.6);
        let y = rng.range(-0.6, 0.6);
        let q = rng.range(0.1, 0.8);
        let report = rect_identity_check(x, y, q, &budget)?;
        obs.push((vec![x, y, q], report.max_abs_err));
    }
    let reports = vec![IdentityReport::from_observations(
        "rectangle-sums",
        tol,
        &obs,
    )];
    Ok(SuiteReport::new(
        Suite::Lemma5,
        obs.len(),
        0,
        reports,
        None,
    ))
}

fn run_heine(cfg: &SuiteConfig) -> Result<SuiteReport, SuiteError> {
    let tol = cfg.tol.unwrap_or(Suite::Heine.default_tol());
    let budget = budget_context(cfg)?;
    let mut rng = SampleRng::new(cfg.seed);
    let mut obs = Vec::with_capacity(SAMPLE_COUNT);
    for _ in 0..SAMPLE_COUNT {
        let a = rng.range(-0.5, 0.5);
        // The transformation divides by b; keep it away from zero.
        let mut b = rng.range(-0.5, 0.5);
        while b.abs() < 0.05 {
            b = rng.range(-0.5, 0.5);
        }
        let c = rng.range(-0.5, 0.5);
        let z = rng.range(-0.5, 0.5);
        let q = rng.range(0.1, 0.8);
        let report = heine_check(a, b, c, q, z, &budget)?;
        obs.push((vec![a, b, c, q, z], report.max_abs_err));
    }
    let reports = vec![IdentityReport::from_observations(
        "heine-transformation",
        tol,
        &obs,
    )];
    Ok(SuiteReport::new(Suite::Heine, obs.len(), 0, reports, None))
}

/// Context carrying only the budgets, for checks that take their own base.
fn budget_context(cfg: &SuiteConfig) -> Result<EvalContext, SuiteError> {
    Ok(EvalContext::with_params(
        0.1,
        0.5,
        EvalContext::DEFAULT_TOL,
        cfg.max_terms,
    )?)
}

fn run_w1(cfg: &SuiteConfig) -> Result<SuiteReport, SuiteError> {
    let tol = cfg.tol.unwrap_or(Suite::W1.default_tol());
    let grid = cfg.grid.unwrap_or(Suite::W1.default_grid());
    let (contexts, skipped) = contexts_on_grid(&grid, cfg.max_terms)?;

    let mut obs = Vec::with_capacity(contexts.len());
    let mut probes = Vec::with_capacity(contexts.len());
    for ctx in &contexts {
        let report = identities_w1_check(ctx)?;
        obs.push((vec![ctx.t(), ctx.q()], report.max_abs_err));
        probes.push(w1_literal_first_identity(ctx));
    }
    let reports = vec![IdentityReport::from_observations(
        "width-one-identities",
        tol,
        &obs,
    )];
    Ok(SuiteReport::new(
        Suite::W1,
        contexts.len(),
        skipped,
        reports,
        Some(probes),
    ))
}
