//! Dyck paths, path diagrams, and their q-weighted enumeration.
//!
//! A Dyck path of half-length `N` takes `2N` unit steps `U`/`D` from height 0
//! back to height 0, never dipping below 0. A path diagram decorates each
//! step with a column choice `c` in `{0, ..., pos - 1}`, where the number of
//! possibilities `pos` depends on the step and the height it leaves from (see
//! [`PossibilityPolicy`]). The weight of a diagram is `q` raised to the sum
//! of its choices, so summing weights over all diagrams of all paths of
//! half-length `N` whose heights stay `<= w` yields the coefficient of
//! `t^(2N)` in the bounded generating function `G_w`.
//!
//! Three entry points compute those coefficients: [`enumerate_diagrams`] for
//! one path, [`brute_coeff`] summed over all paths (guarded, exponential),
//! and [`dp_series`] via a transfer-matrix recurrence (polynomial time).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::qalg::{QPoly, TSeries};

/// Hard cap on the half-length accepted by [`brute_coeff`] and
/// [`gen_dyck_paths`]; beyond it the path count makes direct enumeration
/// pointless when [`dp_series`] computes the same polynomial in polynomial
/// time.
pub const BRUTE_FORCE_MAX_N: u32 = 10;

/// How many column choices a step admits; this is what distinguishes the two
/// diagram families.
///
/// A step leaving height `h` admits:
///
/// - `Tangent`: `h + 1` choices going up, `h + 1` going down,
/// - `Secant`: `h + 1` choices going up, `h` going down.
///
/// With weights `1 + q + ... + q^(pos-1)` per step, the unbounded coefficient
/// of `t^(2N)` is the q-tangent polynomial (half-length `N` counting
/// `E_(2N+1)(q)`) for `Tangent` and the q-secant polynomial (`E_(2N)(q)`) for
/// `Secant`. Down steps only occur from heights `>= 1`, so the secant policy
/// never produces an empty choice set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PossibilityPolicy {
    Tangent,
    Secant,
}

impl PossibilityPolicy {
    pub const ALL: [PossibilityPolicy; 2] = [PossibilityPolicy::Tangent, PossibilityPolicy::Secant];

    /// Choice count for an up step leaving height `h`.
    pub fn up_possibilities(self, h: u32) -> u32 {
        h + 1
    }

    /// Choice count for a down step leaving height `h` (requires `h >= 1`).
    pub fn down_possibilities(self, h: u32) -> u32 {
        debug_assert!(h >= 1, "down step cannot leave height 0");
        match self {
            PossibilityPolicy::Tangent => h + 1,
            PossibilityPolicy::Secant => h,
        }
    }

    /// Per-step weight polynomial `[pos]_q`.
    fn step_weight_count(self, step: Step, h: u32) -> u32 {
        match step {
            Step::Up => self.up_possibilities(h),
            Step::Down => self.down_possibilities(h),
        }
    }
}

impl fmt::Display for PossibilityPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PossibilityPolicy::Tangent => write!(f, "tangent"),
            PossibilityPolicy::Secant => write!(f, "secant"),
        }
    }
}

impl FromStr for PossibilityPolicy {
    type Err = PathcountError;

    fn from_str(s: &str) -> Result<Self, PathcountError> {
        match s {
            "tangent" => Ok(PossibilityPolicy::Tangent),
            "secant" => Ok(PossibilityPolicy::Secant),
            _ => Err(PathcountError::InvalidFamily { input: s.into() }),
        }
    }
}

/// Height bound for paths: `Bounded(w)` keeps every visited height `<= w`,
/// `Unbounded` imposes no cap.
///
/// Parses from `"inf"` (or `"unbounded"`) and decimal integers; displays as
/// `"inf"` or the bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Width {
    Bounded(u32),
    Unbounded,
}

impl Width {
    /// True if a path may visit height `h` under this bound.
    pub fn allows(self, h: u32) -> bool {
        match self {
            Width::Bounded(w) => h <= w,
            Width::Unbounded => true,
        }
    }

    /// The bound if finite.
    pub fn bound(self) -> Option<u32> {
        match self {
            Width::Bounded(w) => Some(w),
            Width::Unbounded => None,
        }
    }
}

impl fmt::Display for Width {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Width::Bounded(w) => write!(f, "{w}"),
            Width::Unbounded => write!(f, "inf"),
        }
    }
}

impl FromStr for Width {
    type Err = PathcountError;

    fn from_str(s: &str) -> Result<Self, PathcountError> {
        match s {
            "inf" | "unbounded" => Ok(Width::Unbounded),
            _ => s
                .parse::<u32>()
                .map(Width::Bounded)
                .map_err(|_| PathcountError::InvalidWidth { input: s.into() }),
        }
    }
}

impl Serialize for Width {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Width {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One unit step of a Dyck path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    Up,
    Down,
}

/// A Dyck path: balanced steps, all prefix heights nonnegative.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DyckPath {
    steps: Vec<Step>,
}

impl DyckPath {
    /// Validates and wraps a step sequence.
    pub fn new(steps: Vec<Step>) -> Result<Self, PathcountError> {
        let mut h: i64 = 0;
        for s in &steps {
            h += match s {
                Step::Up => 1,
                Step::Down => -1,
            };
            if h < 0 {
                return Err(PathcountError::InvalidPath {
                    reason: "height dips below 0".into(),
                });
            }
        }
        if h != 0 {
            return Err(PathcountError::InvalidPath {
                reason: "path does not return to height 0".into(),
            });
        }
        Ok(DyckPath { steps })
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Number of up steps.
    pub fn half_length(&self) -> usize {
        self.steps.len() / 2
    }

    /// Largest height visited.
    pub fn max_height(&self) -> u32 {
        let mut h = 0u32;
        let mut max = 0u32;
        for s in &self.steps {
            match s {
                Step::Up => h += 1,
                Step::Down => h -= 1,
            }
            max = max.max(h);
        }
        max
    }

    /// Height before each step.
    pub fn heights_before(&self) -> Vec<u32> {
        let mut h = 0u32;
        self.steps
            .iter()
            .map(|s| {
                let before = h;
                match s {
                    Step::Up => h += 1,
                    Step::Down => h -= 1,
                }
                before
            })
            .collect()
    }
}

impl fmt::Display for DyckPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            f.write_str(match s {
                Step::Up => "U",
                Step::Down => "D",
            })?;
        }
        Ok(())
    }
}

impl FromStr for DyckPath {
    type Err = PathcountError;

    fn from_str(s: &str) -> Result<Self, PathcountError> {
        let steps = s
            .chars()
            .map(|c| match c {
                'U' => Ok(Step::Up),
                'D' => Ok(Step::Down),
                _ => Err(PathcountError::InvalidPath {
                    reason: format!("unexpected character {c:?}"),
                }),
            })
            .collect::<Result<Vec<_>, _>>()?;
        DyckPath::new(steps)
    }
}

/// A Dyck path with one column choice per step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathDiagram {
    /// Step string, e.g. `"UUDD"`.
    pub steps: String,
    /// Chosen column per step; entry `i` lies below the possibility count of
    /// step `i`.
    pub columns: Vec<u32>,
}

impl PathDiagram {
    /// Weight exponent: the diagram contributes `q^(sum of columns)`.
    pub fn weight_exponent(&self) -> u64 {
        self.columns.iter().map(|&c| c as u64).sum()
    }
}

/// Errors from path and diagram enumeration.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PathcountError {
    /// Direct enumeration was requested beyond the guard.
    #[error("half-length {n} exceeds the brute-force cap {max}; use the DP or continued-fraction route")]
    TooLarge { n: u32, max: u32 },
    #[error("invalid Dyck path: {reason}")]
    InvalidPath { reason: String },
    #[error("invalid width {input:?}: expected a nonnegative integer or \"inf\"")]
    InvalidWidth { input: String },
    #[error("invalid family {input:?}: expected \"tangent\" or \"secant\"")]
    InvalidFamily { input: String },
}

/// All Dyck paths of half-length `n` whose heights stay within `width`, in
/// lexicographic order with `U < D`.
///
/// Guarded by [`BRUTE_FORCE_MAX_N`]: the unbounded count is the Catalan
/// number, which grows exponentially.
pub fn gen_dyck_paths(n: u32, width: Width) -> Result<Vec<DyckPath>, PathcountError> {
    if n > BRUTE_FORCE_MAX_N {
        return Err(PathcountError::TooLarge {
            n,
            max: BRUTE_FORCE_MAX_N,
        });
    }
    let total = 2 * n as usize;
    let mut paths = Vec::new();
    let mut prefix: Vec<Step> = Vec::with_capacity(total);

    fn rec(
        prefix: &mut Vec<Step>,
        h: u32,
        total: usize,
        width: Width,
        paths: &mut Vec<DyckPath>,
    ) {
        if prefix.len() == total {
            paths.push(DyckPath {
                steps: prefix.clone(),
            });
            return;
        }
        let remaining = (total - prefix.len()) as u32;
        // An up step needs enough remaining steps to come back down.
        if width.allows(h + 1) && h + 1 < remaining {
            prefix.push(Step::Up);
            rec(prefix, h + 1, total, width, paths);
            prefix.pop();
        }
        if h >= 1 {
            prefix.push(Step::Down);
            rec(prefix, h - 1, total, width, paths);
            prefix.pop();
        }
    }

    rec(&mut prefix, 0, total, width, &mut paths);
    Ok(paths)
}

/// Sum of `q^(weight exponent)` over all diagrams on one path: the product
/// over steps of `[pos]_q`.
pub fn enumerate_diagrams(path: &DyckPath, policy: PossibilityPolicy) -> QPoly {
    let mut acc = QPoly::one();
    let mut h = 0u32;
    for &s in path.steps() {
        acc = acc.mul_q_integer(policy.step_weight_count(s, h) as u64);
        match s {
            Step::Up => h += 1,
            Step::Down => h -= 1,
        }
    }
    acc
}

/// Number of diagrams on one path: the product of possibility counts.
pub fn diagram_count(path: &DyckPath, policy: PossibilityPolicy) -> u64 {
    let mut acc = 1u64;
    let mut h = 0u32;
    for &s in path.steps() {
        acc *= policy.step_weight_count(s, h) as u64;
        match s {
            Step::Up => h += 1,
            Step::Down => h -= 1,
        }
    }
    acc
}

/// Iterator over every diagram on one path, columns in odometer order.
///
/// This materializes each diagram individually and exists for listings and as
/// an enumeration oracle; [`enumerate_diagrams`] computes the same weight sum
/// without visiting diagrams one by one.
pub fn diagrams(path: &DyckPath, policy: PossibilityPolicy) -> DiagramIter {
    let caps: Vec<u32> = path
        .steps()
        .iter()
        .zip(path.heights_before())
        .map(|(&s, h)| policy.step_weight_count(s, h))
        .collect();
    DiagramIter {
        steps: path.to_string(),
        caps,
        next: Some(vec![0; path.steps().len()]),
    }
}

/// See [`diagrams`].
pub struct DiagramIter {
    steps: String,
    caps: Vec<u32>,
    next: Option<Vec<u32>>,
}

impl Iterator for DiagramIter {
    type Item = PathDiagram;

    fn next(&mut self) -> Option<PathDiagram> {
        let current = self.next.take()?;
        let diagram = PathDiagram {
            steps: self.steps.clone(),
            columns: current.clone(),
        };
        // Odometer increment, least significant position last.
        let mut cols = current;
        for i in (0..cols.len()).rev() {
            cols[i] += 1;
            if cols[i] < self.caps[i] {
                self.next = Some(cols);
                return Some(diagram);
            }
            cols[i] = 0;
        }
        // Wrapped around completely (also ends the empty path after one item).
        self.next = None;
        Some(diagram)
    }
}

/// Coefficient of `t^(2N)` in `G_width` by direct enumeration: sums
/// [`enumerate_diagrams`] over all paths from [`gen_dyck_paths`].
pub fn brute_coeff(
    n: u32,
    width: Width,
    policy: PossibilityPolicy,
) -> Result<QPoly, PathcountError> {
    let mut acc = QPoly::zero();
    for path in gen_dyck_paths(n, width)? {
        acc = &acc + &enumerate_diagrams(&path, policy);
    }
    Ok(acc)
}

/// Coefficients of `t^0, t^2, ..., t^(2*order)` in `G_width` by a
/// transfer-matrix recurrence over (step, height) states.
///
/// Heights are capped at `min(width, order)` since a path of half-length
/// `<= order` cannot climb above `order`.
pub fn dp_series(order: usize, width: Width, policy: PossibilityPolicy) -> TSeries {
    let cap = match width {
        Width::Bounded(w) => (w as usize).min(order),
        Width::Unbounded => order,
    };
    let mut out = TSeries::zero(order);
    out.set_coeff(0, QPoly::one());

    // state[h] = weight sum over prefixes of the current length ending at h
    let mut state = vec![QPoly::zero(); cap + 1];
    state[0] = QPoly::one();
    for step in 1..=2 * order {
        let mut next = vec![QPoly::zero(); cap + 1];
        for h in 0..=cap {
            if state[h].is_zero() {
                continue;
            }
            if h + 1 <= cap {
                let up = state[h].mul_q_integer(policy.up_possibilities(h as u32) as u64);
                next[h + 1] = &next[h + 1] + &up;
            }
            if h >= 1 {
                let down = state[h].mul_q_integer(policy.down_possibilities(h as u32) as u64);
                next[h - 1] = &next[h - 1] + &down;
            }
        }
        state = next;
        if step % 2 == 0 {
            out.set_coeff(step / 2, state[0].clone());
        }
    }
    out
}

/// Coefficient polynomials for a family and width, keyed by half-length.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoeffTable {
    pub family: PossibilityPolicy,
    pub width: Width,
    entries: BTreeMap<u32, QPoly>,
}

impl CoeffTable {
    /// Fills the table for half-lengths `0..=max_n` via [`dp_series`].
    pub fn compute(family: PossibilityPolicy, width: Width, max_n: u32) -> Self {
        let series = dp_series(max_n as usize, width, family);
        let entries = (0..=max_n)
            .map(|n| (n, series.coeff(n as usize).clone()))
            .collect();
        CoeffTable {
            family,
            width,
            entries,
        }
    }

    pub fn get(&self, n: u32) -> Option<&QPoly> {
        self.entries.get(&n)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &QPoly)> {
        self.entries.iter().map(|(&n, p)| (n, p))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
