//! File emitters. All floats are written with 17 significant digits so that
//! rereading a file reproduces the original values bit for bit.

use std::path::Path;

use anyhow::Context;
use serde_json::json;
use stream_eig::harness::{CurvePoint, ExperimentConfig, ExperimentResult};
use stream_eig::streams::csv_float;
use stream_eig::{Dataset, CovarianceModel, RateFit};

pub const CURVES_HEADER: &str =
    "scheme,variant,n,mean_align_loss,stderr_align,mean_eig_err,stderr_eig,bound";

pub fn curves_csv(config: &ExperimentConfig, curve: &[CurvePoint]) -> String {
    let scheme = config.scheme.as_str();
    let variant = match config.variant {
        stream_eig::ExtremeSide::Smallest => "smallest",
        stream_eig::ExtremeSide::Largest => "largest",
    };
    let mut out = String::with_capacity(64 + curve.len() * 160);
    out.push_str(CURVES_HEADER);
    out.push('\n');
    for p in curve {
        out.push_str(&format!(
            "{scheme},{variant},{},{},{},{},{},{}\n",
            p.n,
            csv_float(p.mean_align_loss),
            csv_float(p.stderr_align),
            csv_float(p.mean_eig_err),
            csv_float(p.stderr_eig),
            csv_float(p.bound),
        ));
    }
    out
}

fn fit_json(fit: &Option<RateFit>) -> serde_json::Value {
    match fit {
        Some(f) => serde_json::to_value(f).unwrap(),
        None => serde_json::Value::Null,
    }
}

pub fn summary_json(config: &ExperimentConfig, result: &ExperimentResult) -> String {
    let final_point = result.curve.last();
    let value = json!({
        "config": config,
        "seed": config.seed,
        "fits": {
            "alignment_loss": fit_json(&result.align_fit),
            "eigenvalue_error_single": fit_json(&result.eig_fit),
            "mu_error": fit_json(&result.mu_fit),
        },
        "final": final_point.map(|p| json!({
            "n": p.n,
            "mean_align_loss": p.mean_align_loss,
            "stderr_align": p.stderr_align,
            "mean_eig_err": p.mean_eig_err,
            "stderr_eig": p.stderr_eig,
            "mean_mu_err": p.mean_mu_err,
            "stderr_mu": p.stderr_mu,
            "mean_eig_estimate": p.mean_eig_estimate,
            "bound": p.bound,
        })),
    });
    serde_json::to_string_pretty(&value).expect("summary serialization")
}

pub struct SweepRow {
    pub c: f64,
    pub final_align: f64,
    pub final_eig_err: f64,
    pub align_fit: Option<RateFit>,
    pub mu_fit: Option<RateFit>,
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(
        "c,final_mean_align_loss,final_mean_eig_err,align_slope,align_r_squared,mu_slope,mu_r_squared\n",
    );
    for row in rows {
        let (a_s, a_r) = row
            .align_fit
            .map_or((f64::NAN, f64::NAN), |f| (f.slope, f.r_squared));
        let (m_s, m_r) = row
            .mu_fit
            .map_or((f64::NAN, f64::NAN), |f| (f.slope, f.r_squared));
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            csv_float(row.c),
            csv_float(row.final_align),
            csv_float(row.final_eig_err),
            csv_float(a_s),
            csv_float(a_r),
            csv_float(m_s),
            csv_float(m_r),
        ));
    }
    out
}

pub fn dataset_csv(dataset: &Dataset) -> String {
    let d = dataset.dim();
    let header: Vec<String> = (0..d).map(|i| format!("x{i}")).collect();
    let mut out = String::with_capacity(dataset.n_rows() * d * 26);
    out.push_str(&header.join(","));
    out.push('\n');
    for row in dataset.rows() {
        let mut first = true;
        for &x in row {
            if !first {
                out.push(',');
            }
            out.push_str(&csv_float(x));
            first = false;
        }
        out.push('\n');
    }
    out
}

pub fn truth_json(model: &CovarianceModel) -> String {
    let value = json!({
        "eigenvalues": model.eigenvalues(),
        // basis[j] is the unit eigenvector paired with eigenvalues[j].
        "basis": model.basis(),
    });
    serde_json::to_string_pretty(&value).expect("truth serialization")
}

pub fn write(path: &Path, content: &str) -> anyhow::Result<()> {
    std::fs::write(path, content).with_context(|| format!("cannot write {}", path.display()))
}
