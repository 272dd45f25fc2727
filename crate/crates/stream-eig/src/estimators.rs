//! Streaming update rules for a single extreme eigenvector: the Krasulina
//! stochastic-gradient scheme in both sign variants, Oja's normalized rule,
//! and the amnesic CCIPCA rule, plus learning-rate schedules and the
//! single-sample eigenvalue estimator.
//!
//! Updates are pure: state in, state out. A state is owned by one replicate
//! at a time and may move between threads between steps.
//!
//! The Krasulina direction
//!
//! ```text
//! xi = <x, v> x - (<x, v>^2 / ||v||^2) v
//! ```
//!
//! is orthogonal to `v` by construction, which gives the exact norm
//! recursion `||v'||^2 = ||v||^2 + gamma^2 ||xi||^2` for both sign variants.
//! The iterate norm therefore grows monotonically; no renormalization is
//! done here because every downstream metric is scale-invariant. (The
//! harness rescales only as an overflow guard, far beyond any realistic
//! norm.) A sample exactly parallel or orthogonal to `v` yields `xi = 0`
//! and the step is a no-op apart from the counter.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{all_finite, dot, norm, norm_sq};

/// Learning-rate law `gamma_n = c / (n + n0)^alpha`.
///
/// Admissible when `c > 0` and `alpha` lies in `(1/2, 1]`, which makes the
/// step sum diverge while the squared sum stays finite. The default
/// `(c, alpha, n0) = (1, 1, 0)` is the classic `1/n` schedule; `n0` damps
/// the first steps when a large `c` is wanted.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleParams {
    pub c: f64,
    pub alpha: f64,
    pub n0: u64,
}

impl Default for ScheduleParams {
    fn default() -> Self {
        Self { c: 1.0, alpha: 1.0, n0: 0 }
    }
}

impl ScheduleParams {
    pub fn new(c: f64, alpha: f64, n0: u64) -> Self {
        Self { c, alpha, n0 }
    }

    pub fn is_admissible(&self) -> bool {
        self.c.is_finite() && self.c > 0.0 && self.alpha > 0.5 && self.alpha <= 1.0
    }

    pub fn validate(&self) -> Result<()> {
        if self.is_admissible() {
            Ok(())
        } else {
            Err(Error::InadmissibleSchedule { c: self.c, alpha: self.alpha })
        }
    }

    /// `gamma_n` for `n >= 1`. Errors if the schedule is inadmissible.
    pub fn gamma_at(&self, n: u64) -> Result<f64> {
        self.validate()?;
        debug_assert!(n >= 1);
        Ok(self.c / ((n + self.n0) as f64).powf(self.alpha))
    }
}

/// Which update rule a state belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    KrasulinaMin,
    KrasulinaMax,
    Oja,
    Ccipca,
}

impl Scheme {
    fn name(self) -> &'static str {
        match self {
            Scheme::KrasulinaMin => "krasulina-min",
            Scheme::KrasulinaMax => "krasulina-max",
            Scheme::Oja => "oja",
            Scheme::Ccipca => "ccipca",
        }
    }
}

/// Current iterate and step counter for any scheme.
///
/// `step` is the index `n` of the iterate `V_n`; it starts at 1 and
/// increases by one per update. The iterate stays unnormalized for
/// Krasulina and CCIPCA (for CCIPCA its norm is the running eigenvalue
/// estimate in Weng's convention) and has unit norm for Oja.
#[derive(Clone, Debug)]
pub struct EstimatorState {
    v: Vec<f64>,
    step: u64,
    scheme: Scheme,
    amnesic_l: f64,
}

impl EstimatorState {
    /// Assembles a state from parts; `v` must be nonzero.
    pub fn from_parts(v: Vec<f64>, step: u64, scheme: Scheme, amnesic_l: f64) -> Result<Self> {
        if norm_sq(&v) == 0.0 {
            return Err(Error::ZeroVector);
        }
        if !all_finite(&v) {
            return Err(Error::InvalidSample);
        }
        Ok(Self { v, step, scheme, amnesic_l })
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    pub fn step(&self) -> u64 {
        self.step
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn amnesic_l(&self) -> f64 {
        self.amnesic_l
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    /// Direction of the current iterate as a unit vector.
    pub fn direction(&self) -> Vec<f64> {
        let n = norm(&self.v);
        self.v.iter().map(|x| x / n).collect()
    }

    /// Rescales the iterate to unit norm, preserving direction. The harness
    /// applies this only when the norm exceeds an overflow guard; every
    /// reported metric is invariant under it.
    pub fn renormalize(&mut self) {
        let n = norm(&self.v);
        if n > 0.0 {
            for x in self.v.iter_mut() {
                *x /= n;
            }
        }
    }

    fn expect_scheme(&self, want: Scheme) -> Result<()> {
        if self.scheme == want {
            Ok(())
        } else {
            Err(Error::SchemeMismatch { state: self.scheme.name(), update: want.name() })
        }
    }
}

/// Per-update byproducts of a Krasulina step.
#[derive(Clone, Debug)]
pub struct UpdateDiagnostics {
    pub xi: Vec<f64>,
    pub gamma_used: f64,
    pub xi_norm: f64,
}

/// Random unit starting iterate `V_1` (normalized Gaussian), step counter 1.
/// A random start almost surely has nonzero overlap with every eigenvector,
/// which the schemes need to make progress.
pub fn init_state(
    d: usize,
    scheme: Scheme,
    rng: &mut impl Rng,
    amnesic_l: f64,
) -> EstimatorState {
    assert!(d >= 1, "dimension must be at least 1");
    let mut v;
    loop {
        v = (0..d).map(|_| rng.sample(StandardNormal)).collect::<Vec<f64>>();
        let n = norm(&v);
        if n > 0.0 {
            for x in v.iter_mut() {
                *x /= n;
            }
            break;
        }
    }
    EstimatorState { v, step: 1, scheme, amnesic_l }
}

/// The projected-gradient direction `<x,v> x - (<x,v>^2/||v||^2) v`.
///
/// Orthogonal to `v` by construction and bounded by `||x||^2 ||v||`; scales
/// linearly in `v` (degree-1 homogeneous).
pub fn krasulina_xi(x: &[f64], v: &[f64]) -> Result<Vec<f64>> {
    debug_assert_eq!(x.len(), v.len());
    let vns = norm_sq(v);
    if vns == 0.0 {
        return Err(Error::ZeroVector);
    }
    let xv = dot(x, v);
    let coeff = xv * xv / vns;
    Ok(x.iter().zip(v).map(|(xi, vi)| xv * xi - coeff * vi).collect())
}

fn krasulina_step(
    mut state: EstimatorState,
    x: &[f64],
    schedule: &ScheduleParams,
    sign: f64,
) -> Result<(EstimatorState, UpdateDiagnostics)> {
    if !all_finite(x) {
        return Err(Error::InvalidSample);
    }
    assert_eq!(x.len(), state.v.len(), "sample dimension mismatch");
    let xi = krasulina_xi(x, &state.v)?;
    let gamma = schedule.gamma_at(state.step + 1)?;
    for (vi, xii) in state.v.iter_mut().zip(&xi) {
        *vi += sign * gamma * xii;
    }
    state.step += 1;
    let xi_norm = norm(&xi);
    Ok((state, UpdateDiagnostics { xi, gamma_used: gamma, xi_norm }))
}

/// Krasulina update toward the smallest eigenpair: `v' = v - gamma_{n+1} xi`.
pub fn krasulina_step_min(
    state: EstimatorState,
    x: &[f64],
    schedule: &ScheduleParams,
) -> Result<(EstimatorState, UpdateDiagnostics)> {
    state.expect_scheme(Scheme::KrasulinaMin)?;
    krasulina_step(state, x, schedule, -1.0)
}

/// Sign-flipped Krasulina update toward the largest eigenpair:
/// `v' = v + gamma_{n+1} xi`. Equivalent to running the minimum variant on
/// the negated matrix.
pub fn krasulina_step_max(
    state: EstimatorState,
    x: &[f64],
    schedule: &ScheduleParams,
) -> Result<(EstimatorState, UpdateDiagnostics)> {
    state.expect_scheme(Scheme::KrasulinaMax)?;
    krasulina_step(state, x, schedule, 1.0)
}

/// Oja's normalized update toward the largest eigenpair:
/// `v' = (v + gamma <x,v> x) / ||v + gamma <x,v> x||`.
pub fn oja_step(
    mut state: EstimatorState,
    x: &[f64],
    schedule: &ScheduleParams,
) -> Result<EstimatorState> {
    state.expect_scheme(Scheme::Oja)?;
    if !all_finite(x) {
        return Err(Error::InvalidSample);
    }
    assert_eq!(x.len(), state.v.len(), "sample dimension mismatch");
    let gamma = schedule.gamma_at(state.step + 1)?;
    let xv = dot(x, &state.v);
    for (vi, xi) in state.v.iter_mut().zip(x) {
        *vi += gamma * xv * xi;
    }
    let n = norm(&state.v);
    if n < 1e-300 {
        return Err(Error::DegenerateUpdate);
    }
    for vi in state.v.iter_mut() {
        *vi /= n;
    }
    state.step += 1;
    Ok(state)
}

/// Amnesic CCIPCA update toward the largest eigenpair:
///
/// ```text
/// v' = ((n - 1 - l)/n) v + ((1 + l)/n) <x, v/||v||> x
/// ```
///
/// with `n` the state's step counter at call time and `l` the amnesic
/// parameter. For `n <= l + 1` the first coefficient would be nonpositive
/// and is clamped at zero, so the earliest samples are simply faded out.
/// No learning-rate schedule is involved. The iterate's norm is the running
/// eigenvalue estimate.
pub fn ccipca_step(mut state: EstimatorState, x: &[f64]) -> Result<EstimatorState> {
    state.expect_scheme(Scheme::Ccipca)?;
    if !all_finite(x) {
        return Err(Error::InvalidSample);
    }
    assert_eq!(x.len(), state.v.len(), "sample dimension mismatch");
    let vn = norm(&state.v);
    if vn == 0.0 {
        return Err(Error::ZeroVector);
    }
    let n = state.step as f64;
    let l = state.amnesic_l;
    let keep = (((n - 1.0) - l) / n).max(0.0);
    let gain = (1.0 + l) / n;
    let proj = dot(x, &state.v) / vn;
    for (vi, xi) in state.v.iter_mut().zip(x) {
        *vi = keep * *vi + gain * proj * xi;
    }
    state.step += 1;
    Ok(state)
}

/// Single-sample eigenvalue estimate `<x,v>^2 / ||v||^2`, i.e. the Rayleigh
/// quotient of the rank-one sample matrix `x x^T` at `v`. Always
/// nonnegative.
pub fn eigenvalue_estimate_single(x: &[f64], v: &[f64]) -> Result<f64> {
    let vns = norm_sq(v);
    if vns == 0.0 {
        return Err(Error::ZeroVector);
    }
    let xv = dot(x, v);
    Ok(xv * xv / vns)
}
