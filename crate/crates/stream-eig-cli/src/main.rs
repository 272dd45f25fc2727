//! Command-line front end: configure experiments, generate data, run oracle
//! checks, and emit CSV curves plus JSON summaries for external plotting.
//!
//! Exit codes: 0 on success, 1 on runtime failure, 2 on usage or config
//! errors.

mod config;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stream_eig::harness::{self, run_experiment};
use stream_eig::linalg::{self, SymMat, DEFAULT_EIGEN_TOL};
use stream_eig::{preset_spectrum, SvdScale};

use config::CliConfigFile;
use output::SweepRow;

#[derive(Parser)]
#[command(name = "stream-eig", version, about = "Streaming eigenpair estimation benchmark harness")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a configured experiment; writes curves.csv and summary.json.
    Run {
        /// JSON experiment configuration.
        #[arg(long)]
        config: PathBuf,
        /// Output directory (created if missing).
        #[arg(long)]
        out: PathBuf,
        /// Override the configured replicate count.
        #[arg(long)]
        replicates: Option<u32>,
        /// Override the configured seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the configured sample budget.
        #[arg(long = "n-total")]
        n_total: Option<u64>,
        /// Override the learning-rate constant c.
        #[arg(long)]
        c: Option<f64>,
    },
    /// Rerun an experiment across a grid of learning-rate constants;
    /// writes sweep.csv.
    SweepC {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated list of positive c values.
        #[arg(long = "c-grid", value_delimiter = ',', required = true)]
        c_grid: Vec<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Validate the offline eigensolver on random symmetric matrices.
    OracleCheck {
        #[arg(long, default_value_t = 10)]
        d: usize,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Generate a fixed dataset CSV plus a truth.json sidecar with the
    /// generating model's eigenvalues and eigenvectors.
    GenData {
        /// Named spectrum ("paper4" or "smallest-id").
        #[arg(long, conflicts_with = "spectrum")]
        preset: Option<String>,
        /// Explicit ascending spectrum, comma-separated.
        #[arg(long, value_delimiter = ',')]
        spectrum: Option<Vec<f64>>,
        /// Number of observations (rows).
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output CSV path; truth.json is written next to it.
        #[arg(long)]
        out: PathBuf,
        /// Use the literal eigenvalues-as-singular-values construction.
        #[arg(long)]
        literal_svd: bool,
    },
}

enum Failure {
    Usage(anyhow::Error),
    Runtime(anyhow::Error),
}

fn usage(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Usage(e.into())
}

fn runtime(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Runtime(e.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Run { config, out, replicates, seed, n_total, c } => {
            cmd_run(&config, &out, replicates, seed, n_total, c)
        }
        Cmd::SweepC { config, c_grid, out } => cmd_sweep_c(&config, &c_grid, &out),
        Cmd::OracleCheck { d, trials, seed } => cmd_oracle_check(d, trials, seed),
        Cmd::GenData { preset, spectrum, n, seed, out, literal_svd } => {
            cmd_gen_data(preset, spectrum, n, seed, &out, literal_svd)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn cmd_run(
    config_path: &Path,
    out: &Path,
    replicates: Option<u32>,
    seed: Option<u64>,
    n_total: Option<u64>,
    c: Option<f64>,
) -> Result<(), Failure> {
    let mut file = CliConfigFile::load(config_path).map_err(usage)?;
    if let Some(r) = replicates {
        file.replicates = r;
    }
    if let Some(s) = seed {
        file.seed = s;
    }
    if let Some(n) = n_total {
        file.n_total = n;
    }
    if let Some(c) = c {
        file.c = c;
    }
    let cfg = file.resolve().map_err(usage)?;

    let result = run_experiment(&cfg).map_err(runtime)?;

    std::fs::create_dir_all(out)
        .with_context(|| format!("cannot create {}", out.display()))
        .map_err(runtime)?;
    let curves_path = out.join("curves.csv");
    let summary_path = out.join("summary.json");
    output::write(&curves_path, &output::curves_csv(&cfg, &result.curve)).map_err(runtime)?;
    output::write(&summary_path, &output::summary_json(&cfg, &result)).map_err(runtime)?;

    println!(
        "wrote {} ({} checkpoints) and {}",
        curves_path.display(),
        result.curve.len(),
        summary_path.display()
    );
    if let Some(fit) = &result.align_fit {
        println!(
            "alignment-loss rate: slope {:+.4} (r^2 {:.4}, {} points)",
            fit.slope, fit.r_squared, fit.points_used
        );
    }
    if let Some(last) = result.curve.last() {
        println!(
            "final (n = {}): mean alignment loss {:.6e}, mean |lambda_hat - lambda| {:.6e}",
            last.n, last.mean_align_loss, last.mean_eig_err
        );
    }
    Ok(())
}

fn cmd_sweep_c(config_path: &Path, c_grid: &[f64], out: &Path) -> Result<(), Failure> {
    if c_grid.is_empty() {
        return Err(usage(anyhow!("--c-grid must list at least one value")));
    }
    if c_grid.iter().any(|c| !c.is_finite() || *c <= 0.0) {
        return Err(usage(anyhow!("--c-grid values must be positive and finite")));
    }
    let file = CliConfigFile::load(config_path).map_err(usage)?;
    let mut grid = c_grid.to_vec();
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup();

    let mut rows = Vec::with_capacity(grid.len());
    for &c in &grid {
        let mut f = file.clone();
        f.c = c;
        let cfg = f.resolve().map_err(usage)?;
        let result = run_experiment(&cfg).map_err(runtime)?;
        let last = result
            .curve
            .last()
            .copied()
            .ok_or_else(|| anyhow!("experiment produced no checkpoints"))
            .map_err(runtime)?;
        println!(
            "c = {c}: final alignment loss {:.6e}, slope {}",
            last.mean_align_loss,
            result
                .align_fit
                .map_or("n/a".to_string(), |f| format!("{:+.4}", f.slope)),
        );
        rows.push(SweepRow {
            c,
            final_align: last.mean_align_loss,
            final_eig_err: last.mean_eig_err,
            align_fit: result.align_fit,
            mu_fit: result.mu_fit,
        });
    }
    std::fs::create_dir_all(out)
        .with_context(|| format!("cannot create {}", out.display()))
        .map_err(runtime)?;
    let sweep_path = out.join("sweep.csv");
    output::write(&sweep_path, &output::sweep_csv(&rows)).map_err(runtime)?;
    println!("wrote {}", sweep_path.display());
    Ok(())
}

struct CheckStat {
    name: &'static str,
    threshold: f64,
    max_observed: f64,
    failing_seeds: Vec<u64>,
}

impl CheckStat {
    fn new(name: &'static str, threshold: f64) -> Self {
        Self { name, threshold, max_observed: 0.0, failing_seeds: Vec::new() }
    }

    fn observe(&mut self, value: f64, seed: u64) {
        if value > self.max_observed || !value.is_finite() {
            self.max_observed = value;
        }
        if value.is_nan() || value > self.threshold {
            self.failing_seeds.push(seed);
        }
    }

    fn passed(&self) -> bool {
        self.failing_seeds.is_empty()
    }
}

fn cmd_oracle_check(d: usize, trials: u64, seed: u64) -> Result<(), Failure> {
    if d < 2 {
        return Err(usage(anyhow!("--d must be at least 2")));
    }
    if trials < 1 {
        return Err(usage(anyhow!("--trials must be at least 1")));
    }

    let mut residual = CheckStat::new("residual", 1e-10);
    let mut ortho = CheckStat::new("orthonormality", 1e-10);
    let mut reconstruction = CheckStat::new("reconstruction", 1e-9);
    let mut trace_sum = CheckStat::new("trace", 1e-10);

    for t in 0..trials {
        let trial_seed = seed.wrapping_add(t);
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
        let m = SymMat::from_fn(d, |_, _| rng.gen_range(-1.0..1.0));
        let spec = match linalg::sym_eigen(&m, DEFAULT_EIGEN_TOL) {
            Ok(s) => s,
            Err(e) => {
                return Err(runtime(anyhow!("seed {trial_seed}: eigensolver failed: {e}")));
            }
        };
        for j in 0..d {
            let qj = &spec.eigenvectors[j];
            let l = spec.eigenvalues[j];
            let mq = m.mul_vec(qj);
            let res: f64 = mq
                .iter()
                .zip(qj)
                .map(|(x, q)| (x - l * q) * (x - l * q))
                .sum::<f64>()
                .sqrt();
            residual.observe(res / (1.0 + l.abs()), trial_seed);
            for k in 0..=j {
                let want = if k == j { 1.0 } else { 0.0 };
                ortho.observe(
                    (linalg::dot(qj, &spec.eigenvectors[k]) - want).abs(),
                    trial_seed,
                );
            }
        }
        let mut err = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let mut r = 0.0;
                for k in 0..d {
                    r += spec.eigenvalues[k] * spec.eigenvectors[k][i] * spec.eigenvectors[k][j];
                }
                err += (r - m.get(i, j)) * (r - m.get(i, j));
            }
        }
        reconstruction.observe(err.sqrt() / m.frobenius_norm(), trial_seed);
        let tr = linalg::trace(&m);
        let lam_sum: f64 = spec.eigenvalues.iter().sum();
        trace_sum.observe((lam_sum - tr).abs() / (1.0 + tr.abs()), trial_seed);
    }

    println!("oracle check: d = {d}, trials = {trials}, base seed = {seed}");
    println!(
        "{:<16} {:>8} {:>14} {:>12} {:>8}",
        "check", "trials", "max_observed", "threshold", "result"
    );
    let checks = [&residual, &ortho, &reconstruction, &trace_sum];
    for c in checks {
        println!(
            "{:<16} {:>8} {:>14.3e} {:>12.1e} {:>8}",
            c.name,
            trials,
            c.max_observed,
            c.threshold,
            if c.passed() { "pass" } else { "FAIL" }
        );
    }
    let mut failing: Vec<u64> = checks
        .iter()
        .flat_map(|c| c.failing_seeds.iter().copied())
        .collect();
    failing.sort_unstable();
    failing.dedup();
    if failing.is_empty() {
        println!("all checks passed");
        Ok(())
    } else {
        Err(runtime(anyhow!("invariant violations at seeds {failing:?}")))
    }
}

fn cmd_gen_data(
    preset: Option<String>,
    spectrum: Option<Vec<f64>>,
    n: usize,
    seed: u64,
    out: &Path,
    literal_svd: bool,
) -> Result<(), Failure> {
    let spectrum = match (preset, spectrum) {
        (Some(name), None) => preset_spectrum(&name).ok_or_else(|| {
            usage(anyhow!("unknown preset {name:?} (try \"paper4\" or \"smallest-id\")"))
        })?,
        (None, Some(values)) => values,
        (None, None) => {
            return Err(usage(anyhow!("one of --preset or --spectrum is required")));
        }
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };
    let model = harness::model_for(&spectrum, seed).map_err(usage)?;
    if n < model.dim() {
        return Err(usage(anyhow!("--n must be at least the dimension {}", model.dim())));
    }
    let scale = if literal_svd { SvdScale::Literal } else { SvdScale::Sqrt };
    let dataset = harness::dataset_for(&model, n, seed, scale).map_err(runtime)?;

    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)
            .with_context(|| format!("cannot create {}", parent.display()))
            .map_err(runtime)?;
    }
    output::write(out, &output::dataset_csv(&dataset)).map_err(runtime)?;
    let truth_path = out
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .map_or_else(|| PathBuf::from("truth.json"), |p| p.join("truth.json"));
    output::write(&truth_path, &output::truth_json(&model)).map_err(runtime)?;
    println!(
        "wrote {} ({} rows x {} cols) and {}",
        out.display(),
        dataset.n_rows(),
        dataset.dim(),
        truth_path.display()
    );
    Ok(())
}
