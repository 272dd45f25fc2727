//! Loss functions, theoretical rate envelopes, and the empirical rate-slope
//! estimator.
//!
//! Losses are computed against the ground-truth eigenpair of a
//! [`CovarianceModel`]; for data sources whose truth is unknown the caller
//! supplies a model derived from the offline eigensolver instead.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{dot, norm_sq};
use crate::streams::{CovarianceModel, ExtremeSide};

/// Which quantity a theoretical envelope bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    EigenvalueErr,
    AlignmentLoss,
}

/// Result of a log-log rate fit.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points_used: usize,
    /// Points discarded for having nonpositive or non-finite loss.
    pub points_dropped: usize,
}

/// Alignment loss `1 - <v, theta>^2 / ||v||^2`, the squared sine of the
/// angle between the iterate and the target eigenvector. Invariant under
/// scaling and sign flips of `v`; `theta` must be unit.
pub fn alignment_loss(v: &[f64], theta: &[f64]) -> Result<f64> {
    debug_assert_eq!(v.len(), theta.len());
    debug_assert!((norm_sq(theta) - 1.0).abs() <= 2e-10, "theta must be unit");
    let vns = norm_sq(v);
    if vns == 0.0 {
        return Err(Error::ZeroVector);
    }
    let a = dot(v, theta);
    Ok((1.0 - a * a / vns).max(0.0))
}

/// Absolute error of an eigenvalue estimate against the targeted extreme
/// eigenvalue of the model.
pub fn eigenvalue_error(estimate: f64, model: &CovarianceModel, which: ExtremeSide) -> f64 {
    (estimate - model.target_eigenvalue(which)).abs()
}

/// Rayleigh-quotient variance
/// `f(v) = ||Sigma v||^2/||v||^2 - <Sigma v, v>^2/||v||^4`,
/// computed in the equivalent residual form `||Sigma v - mu v||^2 / ||v||^2`
/// (with `mu` the Rayleigh quotient), which is nonnegative by construction
/// and vanishes exactly when `v` is an eigenvector.
pub fn f_value(model: &CovarianceModel, v: &[f64]) -> Result<f64> {
    let vns = norm_sq(v);
    if vns == 0.0 {
        return Err(Error::ZeroVector);
    }
    let sv = model.sigma().mul_vec(v);
    let mu = dot(&sv, v) / vns;
    let res: f64 = sv.iter().zip(v).map(|(s, vi)| (s - mu * vi) * (s - mu * vi)).sum();
    Ok(res / vns)
}

/// `E[||X X^T||^2] = E[||X||^4] = 2 tr(Sigma^2) + tr(Sigma)^2` for a
/// zero-mean Gaussian with covariance Sigma.
pub fn fourth_moment_gaussian(model: &CovarianceModel) -> f64 {
    let tr: f64 = model.eigenvalues().iter().sum();
    let tr2: f64 = model.eigenvalues().iter().map(|l| l * l).sum();
    2.0 * tr2 + tr * tr
}

/// Asymptotic rate envelope `||Sigma|| (sqrt(moment) v ||Sigma||) / sqrt(n)`,
/// divided by the targeted eigen-gap for the alignment loss. `moment` is
/// `E[||A_n||^2]`; use [`fourth_moment_gaussian`] in the Gaussian case, or
/// `tr(Sigma)^2` for the looser trace form.
pub fn theoretical_bound(
    model: &CovarianceModel,
    n: u64,
    kind: BoundKind,
    side: ExtremeSide,
    moment: f64,
) -> Result<f64> {
    assert!(n >= 1, "n must be at least 1");
    let op = model
        .eigenvalues()
        .iter()
        .fold(0.0f64, |acc, &l| acc.max(l.abs()));
    let base = op * moment.sqrt().max(op) / (n as f64).sqrt();
    match kind {
        BoundKind::EigenvalueErr => Ok(base),
        BoundKind::AlignmentLoss => {
            let g = model.gap(side);
            if g == 0.0 {
                return Err(Error::DegenerateGap);
            }
            Ok(base / g)
        }
    }
}

/// Ordinary least squares of `log(loss)` on `log(n)`. Nonpositive or
/// non-finite losses are dropped (and counted); at least three usable points
/// over at least two distinct `n` are required.
pub fn fit_rate_slope(points: &[(u64, f64)]) -> Result<RateFit> {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|(n, loss)| *n >= 1 && loss.is_finite() && *loss > 0.0)
        .map(|&(n, loss)| ((n as f64).ln(), loss.ln()))
        .collect();
    let points_dropped = points.len() - usable.len();
    let m = usable.len();
    let distinct = {
        let mut xs: Vec<u64> = points
            .iter()
            .filter(|(n, loss)| *n >= 1 && loss.is_finite() && *loss > 0.0)
            .map(|&(n, _)| n)
            .collect();
        xs.sort_unstable();
        xs.dedup();
        xs.len()
    };
    if m < 3 || distinct < 2 {
        return Err(Error::InsufficientData { usable: m });
    }
    let mf = m as f64;
    let mean_x = usable.iter().map(|p| p.0).sum::<f64>() / mf;
    let mean_y = usable.iter().map(|p| p.1).sum::<f64>() / mf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for &(x, y) in &usable {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
        syy += (y - mean_y) * (y - mean_y);
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res: f64 = usable
        .iter()
        .map(|&(x, y)| {
            let e = y - (intercept + slope * x);
            e * e
        })
        .sum();
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    Ok(RateFit { slope, intercept, r_squared, points_used: m, points_dropped })
}
