//! Streaming (online) estimation of extreme eigenpairs of an unknown
//! covariance matrix, one sample at a time.
//!
//! The crate provides three classic single-vector update rules — the
//! Krasulina stochastic-gradient scheme (smallest or largest eigenpair),
//! Oja's normalized rule and the amnesic CCIPCA rule — together with the
//! ground-truth machinery needed to benchmark them at desk scale:
//!
//! * [`linalg`] — dense symmetric matrices and a cyclic-Jacobi eigensolver
//!   used as the offline oracle,
//! * [`streams`] — seeded covariance models, Gaussian samplers, the
//!   SVD-constructed fixed dataset and CSV ingestion,
//! * [`estimators`] — the update rules, learning-rate schedules and the
//!   single-sample eigenvalue estimator,
//! * [`metrics`] — alignment loss, eigenvalue error, theoretical rate
//!   envelopes and a log-log slope fitter,
//! * [`harness`] — replicated experiments producing convergence curves and
//!   fitted empirical rates.
//!
//! Everything is deterministic given the configured seeds; replicates may
//! run in parallel without affecting output.

pub mod error;
pub mod estimators;
pub mod harness;
pub mod linalg;
pub mod metrics;
pub mod streams;

pub use error::{Error, Result};
pub use estimators::{
    ccipca_step, eigenvalue_estimate_single, init_state, krasulina_step_max, krasulina_step_min,
    krasulina_xi, oja_step, EstimatorState, ScheduleParams, Scheme, UpdateDiagnostics,
};
pub use harness::{
    aggregate, default_checkpoints, preset_spectrum, run_experiment, run_single, CurvePoint,
    ExperimentConfig, ExperimentResult, RawPoint, SchemeKind, Source,
};
pub use linalg::{operator_norm, rayleigh_quotient, sym_eigen, trace, Spectrum, SymMat};
pub use metrics::{
    alignment_loss, eigenvalue_error, f_value, fit_rate_slope, fourth_moment_gaussian,
    theoretical_bound, BoundKind, RateFit,
};
pub use streams::{
    build_fixed_dataset, make_covariance, random_orthogonal, sample_gaussian, stream_from_csv,
    CovarianceModel, Dataset, ExtremeSide, SvdScale,
};
