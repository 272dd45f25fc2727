//! Replicated experiment runner: streams samples through a configured
//! scheme, records losses at checkpoints, averages over replicates and fits
//! empirical rate slopes.
//!
//! Determinism contract: the output is a pure function of the configuration.
//! Replicate `i` owns a generator seeded `seed + i`; the model and dataset
//! seeds are derived by hashing so no replicate shares a stream with them.
//! Replicates may fan out across threads; results are merged by replicate
//! index, so scheduling cannot affect the output. `STREAM_EIG_THREADS`
//! optionally caps the worker count.

use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{
    ccipca_step, eigenvalue_estimate_single, init_state, krasulina_step_max, krasulina_step_min,
    oja_step, EstimatorState, ScheduleParams, Scheme,
};
use crate::linalg::{norm_sq, rayleigh_quotient};
use crate::metrics::{alignment_loss, fit_rate_slope, fourth_moment_gaussian, theoretical_bound, BoundKind, RateFit};
use crate::streams::{
    build_fixed_dataset_scaled, dataset_oracle, make_covariance, sample_gaussian_into,
    stream_from_csv, validate_spectrum, CovarianceModel, Dataset, ExtremeSide, SvdScale,
};

/// Environment variable capping replicate parallelism. Output is identical
/// regardless of its value.
pub const THREADS_ENV: &str = "STREAM_EIG_THREADS";

/// Iterate norms beyond this trigger a direction-preserving rescale.
const NORM_GUARD: f64 = 1e200;

/// Update-rule family; combined with the variant it selects a [`Scheme`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeKind {
    Krasulina,
    Oja,
    Ccipca,
}

impl SchemeKind {
    pub fn instantiate(self, variant: ExtremeSide) -> Scheme {
        match (self, variant) {
            (SchemeKind::Krasulina, ExtremeSide::Smallest) => Scheme::KrasulinaMin,
            (SchemeKind::Krasulina, ExtremeSide::Largest) => Scheme::KrasulinaMax,
            (SchemeKind::Oja, _) => Scheme::Oja,
            (SchemeKind::Ccipca, _) => Scheme::Ccipca,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SchemeKind::Krasulina => "krasulina",
            SchemeKind::Oja => "oja",
            SchemeKind::Ccipca => "ccipca",
        }
    }
}

/// Where samples come from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    Gaussian,
    FixedDataset,
    Csv(PathBuf),
}

/// Declarative experiment description.
#[derive(Clone, Debug, Serialize)]
pub struct ExperimentConfig {
    pub scheme: SchemeKind,
    pub variant: ExtremeSide,
    pub d: usize,
    /// Ascending, nonnegative. See [`preset_spectrum`] for named presets.
    pub spectrum: Vec<f64>,
    pub schedule: ScheduleParams,
    /// CCIPCA amnesic parameter; ignored by the other schemes.
    pub amnesic_l: f64,
    pub n_total: u64,
    pub replicates: u32,
    /// Strictly ascending, all `<= n_total`. A checkpoint of 0 records the
    /// random start.
    pub checkpoints: Vec<u64>,
    pub seed: u64,
    pub source: Source,
    /// Use the literal eigenvalues-as-singular-values reading of the
    /// fixed-dataset construction (squares the covariance spectrum).
    pub literal_svd: bool,
}

impl ExperimentConfig {
    /// A Gaussian-source configuration with default schedule, amnesic
    /// parameter 2 and the default checkpoint grid.
    pub fn gaussian(
        scheme: SchemeKind,
        variant: ExtremeSide,
        spectrum: Vec<f64>,
        n_total: u64,
        replicates: u32,
        seed: u64,
    ) -> Self {
        Self {
            scheme,
            variant,
            d: spectrum.len(),
            spectrum,
            schedule: ScheduleParams::default(),
            amnesic_l: 2.0,
            n_total,
            replicates,
            checkpoints: default_checkpoints(n_total),
            seed,
            source: Source::Gaussian,
            literal_svd: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(Error::InvalidConfig("d must be at least 1".into()));
        }
        if self.spectrum.len() != self.d {
            return Err(Error::InvalidConfig(format!(
                "spectrum has {} entries but d = {}",
                self.spectrum.len(),
                self.d
            )));
        }
        validate_spectrum(&self.spectrum)?;
        if matches!(self.scheme, SchemeKind::Oja | SchemeKind::Ccipca)
            && self.variant == ExtremeSide::Smallest
        {
            return Err(Error::InvalidConfig(format!(
                "{} estimates the largest eigenpair; variant must be largest",
                self.scheme.as_str()
            )));
        }
        let gap = spectrum_gap(&self.spectrum, self.variant);
        if gap <= 0.0 {
            return Err(Error::DegenerateGap);
        }
        if self.scheme != SchemeKind::Ccipca {
            self.schedule.validate()?;
        }
        if !self.amnesic_l.is_finite() || self.amnesic_l < 0.0 {
            return Err(Error::InvalidConfig("amnesic_l must be finite and nonnegative".into()));
        }
        if self.replicates == 0 {
            return Err(Error::InvalidConfig("replicates must be at least 1".into()));
        }
        if self.checkpoints.is_empty() {
            return Err(Error::InvalidConfig("checkpoints must be nonempty".into()));
        }
        if self.checkpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig("checkpoints must be strictly ascending".into()));
        }
        if *self.checkpoints.last().unwrap() > self.n_total {
            return Err(Error::InvalidConfig("checkpoints must not exceed n_total".into()));
        }
        Ok(())
    }
}

fn spectrum_gap(spectrum: &[f64], side: ExtremeSide) -> f64 {
    let d = spectrum.len();
    if d < 2 {
        return 0.0;
    }
    match side {
        ExtremeSide::Smallest => spectrum[1] - spectrum[0],
        ExtremeSide::Largest => spectrum[d - 1] - spectrum[d - 2],
    }
}

/// Named spectra: `"paper4"` is `{0.9 x9, 1.0}` (top gap 0.1) and
/// `"smallest-id"` is `{0.5, 1.0 x9}` (bottom gap 0.5), both dimension 10.
pub fn preset_spectrum(name: &str) -> Option<Vec<f64>> {
    match name {
        "paper4" => {
            let mut s = vec![0.9; 10];
            s[9] = 1.0;
            Some(s)
        }
        "smallest-id" => {
            let mut s = vec![1.0; 10];
            s[0] = 0.5;
            Some(s)
        }
        _ => None,
    }
}

/// 30 geometrically spaced checkpoints from 100 (or `n_total`, if smaller)
/// up to `n_total`, deduplicated.
pub fn default_checkpoints(n_total: u64) -> Vec<u64> {
    if n_total == 0 {
        return vec![0];
    }
    let lo = 100u64.min(n_total) as f64;
    let hi = n_total as f64;
    let k = 30;
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        let t = i as f64 / (k - 1) as f64;
        let v = (lo.ln() + t * (hi.ln() - lo.ln())).exp().round() as u64;
        let v = v.clamp(lo as u64, n_total);
        if out.last() != Some(&v) {
            out.push(v);
        }
    }
    out
}

/// Raw per-checkpoint record of one replicate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RawPoint {
    pub n: u64,
    /// `1 - <v, theta>^2 / ||v||^2` against the oracle eigenvector.
    pub align_loss: f64,
    /// `|lambda_hat - lambda|` for the single-sample estimator.
    pub eig_err: f64,
    /// `|mu(v) - lambda|` with `mu` the true-covariance Rayleigh quotient.
    pub mu_err: f64,
    /// The raw single-sample estimate `lambda_hat` itself.
    pub eig_estimate: f64,
}

/// Replicate-averaged record at one checkpoint.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurvePoint {
    pub n: u64,
    pub mean_align_loss: f64,
    pub stderr_align: f64,
    pub mean_eig_err: f64,
    pub stderr_eig: f64,
    pub mean_mu_err: f64,
    pub stderr_mu: f64,
    pub mean_eig_estimate: f64,
    /// Theoretical alignment-loss envelope at this `n`.
    pub bound: f64,
}

/// Curves plus fitted rates for the three tracked metrics. Fits are absent
/// when fewer than three positive-loss checkpoints survive the burn-in cut.
#[derive(Clone, Debug, Serialize)]
pub struct ExperimentResult {
    pub curve: Vec<CurvePoint>,
    pub align_fit: Option<RateFit>,
    pub eig_fit: Option<RateFit>,
    pub mu_fit: Option<RateFit>,
}

// ---------------------------------------------------------------------------
// Seed derivation
// ---------------------------------------------------------------------------

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for the covariance model's eigenbasis, derived by hashing so it
/// cannot collide with any replicate stream (`seed + i`).
pub fn model_seed(seed: u64) -> u64 {
    splitmix64(seed ^ 0x6d6f_6465_6c00_0001)
}

/// Seed for the fixed-dataset construction, likewise namespaced.
pub fn dataset_seed(seed: u64) -> u64 {
    splitmix64(seed ^ 0x6461_7461_0000_0002)
}

/// The covariance model an experiment seeded with `seed` uses.
pub fn model_for(spectrum: &[f64], seed: u64) -> Result<CovarianceModel> {
    make_covariance(spectrum, model_seed(seed))
}

/// The fixed dataset an experiment seeded with `seed` streams. Shared with
/// the data-generation tool so that a written-out dataset reproduces the
/// in-memory run exactly.
pub fn dataset_for(
    model: &CovarianceModel,
    n: usize,
    seed: u64,
    scale: SvdScale,
) -> Result<Dataset> {
    build_fixed_dataset_scaled(model, n, dataset_seed(seed), scale)
}

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

struct Context {
    scheme: Scheme,
    /// Loss/bound reference: the generating model for the Gaussian source,
    /// or the offline eigendecomposition of the sample covariance for data
    /// sources (which also makes a CSV re-run of a generated dataset
    /// bit-identical to the in-memory run).
    oracle: CovarianceModel,
    dataset: Option<Dataset>,
    moment: f64,
}

fn build_context(config: &ExperimentConfig) -> Result<Context> {
    let scheme = config.scheme.instantiate(config.variant);
    let (oracle, dataset) = match &config.source {
        Source::Gaussian => (model_for(&config.spectrum, config.seed)?, None),
        Source::FixedDataset => {
            let model = model_for(&config.spectrum, config.seed)?;
            let scale = if config.literal_svd { SvdScale::Literal } else { SvdScale::Sqrt };
            let ds = dataset_for(&model, config.n_total as usize, config.seed, scale)?;
            (dataset_oracle(&ds)?, Some(ds))
        }
        Source::Csv(path) => {
            let ds = stream_from_csv(path)?;
            if ds.dim() != config.d {
                return Err(Error::InvalidConfig(format!(
                    "csv has {} columns but d = {}",
                    ds.dim(),
                    config.d
                )));
            }
            if (ds.n_rows() as u64) < config.n_total {
                return Err(Error::InsufficientSamples {
                    need: config.n_total as usize,
                    have: ds.n_rows(),
                });
            }
            (dataset_oracle(&ds)?, Some(ds))
        }
    };
    if oracle.gap(config.variant) <= 0.0 {
        return Err(Error::DegenerateGap);
    }
    let moment = fourth_moment_gaussian(&oracle);
    Ok(Context { scheme, oracle, dataset, moment })
}

enum SampleFeed<'a> {
    Gaussian { model: &'a CovarianceModel, buf: Vec<f64> },
    Rows { dataset: &'a Dataset, cursor: usize },
}

impl SampleFeed<'_> {
    fn next(&mut self, rng: &mut ChaCha8Rng) -> Result<&[f64]> {
        match self {
            SampleFeed::Gaussian { model, buf } => {
                sample_gaussian_into(model, rng, buf);
                Ok(buf)
            }
            SampleFeed::Rows { dataset, cursor } => {
                if *cursor >= dataset.n_rows() {
                    return Err(Error::InsufficientSamples {
                        need: *cursor + 1,
                        have: dataset.n_rows(),
                    });
                }
                let row = dataset.row(*cursor);
                *cursor += 1;
                Ok(row)
            }
        }
    }
}

fn step_dispatch(
    state: EstimatorState,
    x: &[f64],
    schedule: &ScheduleParams,
) -> Result<EstimatorState> {
    match state.scheme() {
        Scheme::KrasulinaMin => krasulina_step_min(state, x, schedule).map(|(s, _)| s),
        Scheme::KrasulinaMax => krasulina_step_max(state, x, schedule).map(|(s, _)| s),
        Scheme::Oja => oja_step(state, x, schedule),
        Scheme::Ccipca => ccipca_step(state, x),
    }
}

fn record(
    n: u64,
    state: &EstimatorState,
    eig_estimate: f64,
    oracle: &CovarianceModel,
    variant: ExtremeSide,
) -> Result<RawPoint> {
    let lam = oracle.target_eigenvalue(variant);
    let align_loss = alignment_loss(state.v(), oracle.target_eigenvector(variant))?;
    let mu = rayleigh_quotient(oracle.sigma(), state.v())?;
    Ok(RawPoint {
        n,
        align_loss,
        eig_err: (eig_estimate - lam).abs(),
        mu_err: (mu - lam).abs(),
        eig_estimate,
    })
}

fn run_single_ctx(
    config: &ExperimentConfig,
    ctx: &Context,
    replicate_index: u32,
) -> Result<Vec<RawPoint>> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(replicate_index as u64));
    let mut state = init_state(config.d, ctx.scheme, &mut rng, config.amnesic_l);
    let mut feed = match &ctx.dataset {
        Some(ds) => SampleFeed::Rows { dataset: ds, cursor: 0 },
        None => SampleFeed::Gaussian { model: &ctx.oracle, buf: vec![0.0; config.d] },
    };
    let cps = &config.checkpoints;
    let mut ci = 0;
    let mut out = Vec::with_capacity(cps.len());

    if ci < cps.len() && cps[ci] == 0 {
        // No sample seen yet: report the true-covariance Rayleigh quotient
        // in place of the single-sample estimate so the record stays finite.
        let mu = rayleigh_quotient(ctx.oracle.sigma(), state.v())?;
        out.push(record(0, &state, mu, &ctx.oracle, config.variant)?);
        ci += 1;
    }
    for t in 1..=config.n_total {
        let x = feed.next(&mut rng)?;
        // Pair the sample with the iterate it meets: the update below uses
        // this same sample, and pairing it with the post-update iterate
        // would anti-correlate the two and bias the estimate.
        let eig_estimate = eigenvalue_estimate_single(x, state.v())?;
        state = step_dispatch(state, x, &config.schedule)?;
        if norm_sq(state.v()) > NORM_GUARD {
            state.renormalize();
        }
        if ci < cps.len() && cps[ci] == t {
            out.push(record(t, &state, eig_estimate, &ctx.oracle, config.variant)?);
            ci += 1;
        }
    }
    Ok(out)
}

/// Runs one replicate and returns its per-checkpoint raw losses. Fully
/// deterministic given `(config, replicate_index)`.
pub fn run_single(config: &ExperimentConfig, replicate_index: u32) -> Result<Vec<RawPoint>> {
    config.validate()?;
    let ctx = build_context(config)?;
    run_single_ctx(config, &ctx, replicate_index)
}

fn mean_stderr(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count();
    let mean = values.clone().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    // Identical replicates have exactly zero spread; the naive formula
    // would report rounding noise instead.
    let mut iter = values.clone();
    let first = iter.next().unwrap();
    if iter.all(|x| x == first) {
        return (first, 0.0);
    }
    let var = values.map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Averages per-replicate losses checkpoint by checkpoint. The `bound`
/// column is left NaN; [`run_experiment`] fills it in.
pub fn aggregate(raw: &[Vec<RawPoint>]) -> Result<Vec<CurvePoint>> {
    let first = raw.first().ok_or(Error::GridMismatch)?;
    let k = first.len();
    for r in raw {
        if r.len() != k || r.iter().zip(first).any(|(a, b)| a.n != b.n) {
            return Err(Error::GridMismatch);
        }
    }
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        let (mean_align_loss, stderr_align) = mean_stderr(raw.iter().map(move |r| r[i].align_loss));
        let (mean_eig_err, stderr_eig) = mean_stderr(raw.iter().map(move |r| r[i].eig_err));
        let (mean_mu_err, stderr_mu) = mean_stderr(raw.iter().map(move |r| r[i].mu_err));
        let (mean_eig_estimate, _) = mean_stderr(raw.iter().map(move |r| r[i].eig_estimate));
        out.push(CurvePoint {
            n: first[i].n,
            mean_align_loss,
            stderr_align,
            mean_eig_err,
            stderr_eig,
            mean_mu_err,
            stderr_mu,
            mean_eig_estimate,
            bound: f64::NAN,
        });
    }
    Ok(out)
}

fn env_threads() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&k| k >= 1)
}

/// Runs all replicates (in parallel when a pool is available), aggregates,
/// attaches theoretical bounds and fits rate slopes over checkpoints past
/// the burn-in cut `n >= n_total / 100`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    run_experiment_with_threads(config, env_threads())
}

/// [`run_experiment`] with an explicit thread cap instead of the
/// environment variable. `None` uses the global pool.
pub fn run_experiment_with_threads(
    config: &ExperimentConfig,
    threads: Option<usize>,
) -> Result<ExperimentResult> {
    config.validate()?;
    let ctx = build_context(config)?;
    let replicate = |i: u32| run_single_ctx(config, &ctx, i);
    let raw: Vec<Vec<RawPoint>> = match threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?
            .install(|| (0..config.replicates).into_par_iter().map(replicate).collect::<Result<_>>())?,
        None => (0..config.replicates)
            .into_par_iter()
            .map(replicate)
            .collect::<Result<_>>()?,
    };
    let mut curve = aggregate(&raw)?;
    for pt in &mut curve {
        pt.bound = theoretical_bound(
            &ctx.oracle,
            pt.n.max(1),
            BoundKind::AlignmentLoss,
            config.variant,
            ctx.moment,
        )?;
    }
    let burn_in = (config.n_total / 100).max(1);
    let fit_of = |metric: fn(&CurvePoint) -> f64| {
        let pts: Vec<(u64, f64)> = curve
            .iter()
            .filter(|p| p.n >= burn_in)
            .map(|p| (p.n, metric(p)))
            .collect();
        fit_rate_slope(&pts).ok()
    };
    let align_fit = fit_of(|p| p.mean_align_loss);
    let eig_fit = fit_of(|p| p.mean_eig_err);
    let mu_fit = fit_of(|p| p.mean_mu_err);
    Ok(ExperimentResult { curve, align_fit, eig_fit, mu_fit })
}
