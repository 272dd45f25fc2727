//! Ground-truth covariance models and sample sources: the seeded Gaussian
//! sampler, the SVD-constructed fixed dataset, and CSV ingestion.
//!
//! All generators are deterministic functions of their inputs and seed.
//! Models are immutable once built; each sample stream is single-consumer.

use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, sym_eigen, SymMat, DEFAULT_EIGEN_TOL};

/// Which end of the spectrum an estimator targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtremeSide {
    Smallest,
    Largest,
}

/// How eigenvalues map to singular values in the fixed-dataset construction.
///
/// `Sqrt` places sqrt(lambda_j) as singular values so the sample covariance
/// has eigenvalues exactly lambda_j; `Literal` places lambda_j itself, which
/// squares the covariance eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SvdScale {
    Sqrt,
    Literal,
}

// ---------------------------------------------------------------------------
// CovarianceModel
// ---------------------------------------------------------------------------

/// Ground-truth spectrum: ascending eigenvalues, an orthonormal basis whose
/// column j is the eigenvector of eigenvalue j, the assembled covariance
/// matrix and the eigen-gaps at both ends.
#[derive(Clone, Debug)]
pub struct CovarianceModel {
    eigenvalues: Vec<f64>,
    basis: Vec<Vec<f64>>,
    sigma: SymMat,
    gap_min: f64,
    gap_max: f64,
}

impl CovarianceModel {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Column `j` is the unit eigenvector paired with eigenvalue `j`.
    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    pub fn sigma(&self) -> &SymMat {
        &self.sigma
    }

    /// Eigen-gap adjacent to the targeted eigenvalue; 0 when d == 1.
    pub fn gap(&self, side: ExtremeSide) -> f64 {
        match side {
            ExtremeSide::Smallest => self.gap_min,
            ExtremeSide::Largest => self.gap_max,
        }
    }

    pub fn target_eigenvalue(&self, side: ExtremeSide) -> f64 {
        match side {
            ExtremeSide::Smallest => self.eigenvalues[0],
            ExtremeSide::Largest => *self.eigenvalues.last().unwrap(),
        }
    }

    pub fn target_eigenvector(&self, side: ExtremeSide) -> &[f64] {
        match side {
            ExtremeSide::Smallest => &self.basis[0],
            ExtremeSide::Largest => self.basis.last().unwrap(),
        }
    }

    /// Wraps an already-computed spectrum (typically from [`sym_eigen`] of an
    /// empirical covariance) as a model, keeping `sigma` as supplied.
    pub fn from_spectrum(spectrum: crate::linalg::Spectrum, sigma: SymMat) -> Self {
        let d = spectrum.dim();
        let gap_min = if d >= 2 {
            spectrum.eigenvalues[1] - spectrum.eigenvalues[0]
        } else {
            0.0
        };
        let gap_max = if d >= 2 {
            spectrum.eigenvalues[d - 1] - spectrum.eigenvalues[d - 2]
        } else {
            0.0
        };
        Self {
            eigenvalues: spectrum.eigenvalues,
            basis: spectrum.eigenvectors,
            sigma,
            gap_min,
            gap_max,
        }
    }
}

pub(crate) fn validate_spectrum(eigenvalues: &[f64]) -> Result<()> {
    if eigenvalues.is_empty() {
        return Err(Error::InvalidSpectrum("spectrum is empty"));
    }
    if !linalg::all_finite(eigenvalues) {
        return Err(Error::InvalidSpectrum("non-finite eigenvalue"));
    }
    if eigenvalues[0] < 0.0 {
        return Err(Error::InvalidSpectrum("negative eigenvalue"));
    }
    if eigenvalues.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidSpectrum("eigenvalues not ascending"));
    }
    Ok(())
}

/// Builds a covariance model with the given ascending nonnegative eigenvalues
/// and a seeded Haar-distributed orthogonal eigenbasis.
pub fn make_covariance(eigenvalues: &[f64], seed: u64) -> Result<CovarianceModel> {
    validate_spectrum(eigenvalues)?;
    let d = eigenvalues.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis = random_orthogonal(d, &mut rng);
    let sigma = SymMat::from_fn(d, |i, j| {
        (0..d).map(|k| eigenvalues[k] * basis[k][i] * basis[k][j]).sum()
    });
    let gap_min = if d >= 2 { eigenvalues[1] - eigenvalues[0] } else { 0.0 };
    let gap_max = if d >= 2 { eigenvalues[d - 1] - eigenvalues[d - 2] } else { 0.0 };
    Ok(CovarianceModel {
        eigenvalues: eigenvalues.to_vec(),
        basis,
        sigma,
        gap_min,
        gap_max,
    })
}

// ---------------------------------------------------------------------------
// Random orthogonal factors
// ---------------------------------------------------------------------------

/// `cols` orthonormal columns of length `rows`, from Gram-Schmidt on a
/// Gaussian matrix. Two projection passes per column keep orthogonality at
/// machine precision; the diagonal of the implicit R factor is positive, so
/// the result carries the usual Haar sign convention.
fn orthonormal_columns(rows: usize, cols: usize, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    assert!(cols <= rows);
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(cols);
    for _ in 0..cols {
        loop {
            let mut col: Vec<f64> = (0..rows).map(|_| rng.sample(StandardNormal)).collect();
            for _ in 0..2 {
                for prev in &q {
                    let r = linalg::dot(&col, prev);
                    for (x, p) in col.iter_mut().zip(prev) {
                        *x -= r * p;
                    }
                }
            }
            if linalg::normalize(&mut col).is_ok() {
                q.push(col);
                break;
            }
            // Degenerate draw (measure zero): take the next Gaussian column.
        }
    }
    q
}

/// Haar-distributed orthogonal matrix, returned as `d` orthonormal columns.
pub fn random_orthogonal(d: usize, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    assert!(d >= 1, "dimension must be at least 1");
    orthonormal_columns(d, d, rng)
}

// ---------------------------------------------------------------------------
// Gaussian sampling
// ---------------------------------------------------------------------------

/// Draws `X = Theta diag(sqrt(lambda)) z` with `z` standard normal, so that
/// `E[X] = 0` and `E[X X^T] = Sigma`.
pub fn sample_gaussian(model: &CovarianceModel, rng: &mut impl Rng) -> Vec<f64> {
    let mut out = vec![0.0; model.dim()];
    sample_gaussian_into(model, rng, &mut out);
    out
}

/// Allocation-free variant of [`sample_gaussian`].
pub fn sample_gaussian_into(model: &CovarianceModel, rng: &mut impl Rng, out: &mut [f64]) {
    debug_assert_eq!(out.len(), model.dim());
    out.fill(0.0);
    for (k, col) in model.basis.iter().enumerate() {
        let z: f64 = rng.sample(StandardNormal);
        let s = model.eigenvalues[k].sqrt() * z;
        for (o, b) in out.iter_mut().zip(col) {
            *o += b * s;
        }
    }
}

// ---------------------------------------------------------------------------
// Dataset (fixed rows served in order)
// ---------------------------------------------------------------------------

/// A finite set of observations, one per row, served in order as a sample
/// stream.
#[derive(Clone, Debug)]
pub struct Dataset {
    d: usize,
    data: Vec<f64>, // row-major, n * d
}

impl Dataset {
    pub fn n_rows(&self) -> usize {
        self.data.len() / self.d
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.d..(i + 1) * self.d]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.d)
    }

    /// Sample covariance `(1/n) X^T X`, accumulated in row order.
    pub fn covariance(&self) -> SymMat {
        let n = self.n_rows();
        assert!(n > 0, "covariance of an empty dataset");
        let d = self.d;
        let mut acc = vec![0.0; d * d];
        for row in self.rows() {
            for i in 0..d {
                for j in i..d {
                    acc[i * d + j] += row[i] * row[j];
                }
            }
        }
        let inv = 1.0 / n as f64;
        SymMat::from_fn(d, |i, j| acc[i * d + j] * inv)
    }
}

/// Builds the fixed dataset `X = sqrt(n) U diag(s) Theta^T` with `U` a random
/// n-by-d matrix with orthonormal columns and `Theta` the model's eigenbasis,
/// so that `(1/n) X^T X` reproduces the model covariance exactly: its
/// eigenvalues are the model's eigenvalues (for [`SvdScale::Sqrt`]) and its
/// eigenvectors are the model basis.
pub fn build_fixed_dataset(model: &CovarianceModel, n: usize, seed: u64) -> Result<Dataset> {
    build_fixed_dataset_scaled(model, n, seed, SvdScale::Sqrt)
}

/// [`build_fixed_dataset`] with an explicit singular-value convention.
pub fn build_fixed_dataset_scaled(
    model: &CovarianceModel,
    n: usize,
    seed: u64,
    scale: SvdScale,
) -> Result<Dataset> {
    let d = model.dim();
    if n < d {
        return Err(Error::InsufficientSamples { need: d, have: n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = orthonormal_columns(n, d, &mut rng);
    let root_n = (n as f64).sqrt();
    let singular: Vec<f64> = model
        .eigenvalues
        .iter()
        .map(|&l| match scale {
            SvdScale::Sqrt => root_n * l.sqrt(),
            SvdScale::Literal => root_n * l,
        })
        .collect();

    let mut data = vec![0.0; n * d];
    for (k, u_col) in u.iter().enumerate() {
        let s = singular[k];
        let theta = &model.basis[k];
        for (r, &ur) in u_col.iter().enumerate() {
            let w = s * ur;
            let row = &mut data[r * d..(r + 1) * d];
            for (x, t) in row.iter_mut().zip(theta) {
                *x += w * t;
            }
        }
    }
    Ok(Dataset { d, data })
}

/// Derives the oracle spectrum of a dataset from its sample covariance.
pub fn dataset_oracle(dataset: &Dataset) -> Result<CovarianceModel> {
    let sigma = dataset.covariance();
    let spectrum = sym_eigen(&sigma, DEFAULT_EIGEN_TOL)?;
    Ok(CovarianceModel::from_spectrum(spectrum, sigma))
}

// ---------------------------------------------------------------------------
// CSV ingestion
// ---------------------------------------------------------------------------

/// Reads a CSV sample file: one observation per row, comma-separated decimal
/// floats. A header row is auto-detected (first row non-numeric) and skipped.
/// Rows must all have the same width; blank lines are ignored.
pub fn stream_from_csv(path: &Path) -> Result<Dataset> {
    let text = std::fs::read_to_string(path)?;
    let mut d: Option<usize> = None;
    let mut data = Vec::new();
    let mut first_content_row = true;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let row_no = idx + 1;
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed: std::result::Result<Vec<f64>, _> =
            fields.iter().map(|f| f.parse::<f64>()).collect();
        let values = match parsed {
            Ok(v) => v,
            Err(_) if first_content_row => {
                // Header row.
                first_content_row = false;
                continue;
            }
            Err(e) => {
                return Err(Error::Parse { row: row_no, reason: e.to_string() });
            }
        };
        first_content_row = false;
        if !linalg::all_finite(&values) {
            return Err(Error::Parse { row: row_no, reason: "non-finite value".into() });
        }
        match d {
            None => d = Some(values.len()),
            Some(w) if w != values.len() => {
                return Err(Error::Parse {
                    row: row_no,
                    reason: format!("expected {w} fields, found {}", values.len()),
                });
            }
            _ => {}
        }
        data.extend_from_slice(&values);
    }
    match d {
        None => Err(Error::EmptyStream),
        Some(d) => Ok(Dataset { d, data }),
    }
}

/// Formats a float with 17 significant digits, which round-trips exactly
/// through `f64::from_str`. Shared by every CSV the tools emit.
pub fn csv_float(x: f64) -> String {
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{dot, norm, operator_norm};
    use std::io::Write;

    #[test]
    fn random_orthogonal_is_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let q = random_orthogonal(10, &mut rng);
        for j in 0..10 {
            assert!((norm(&q[j]) - 1.0).abs() <= 1e-10);
            for k in 0..j {
                assert!(dot(&q[j], &q[k]).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn random_orthogonal_one_dimensional() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let q = random_orthogonal(1, &mut rng);
        assert!((q[0][0].abs() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn random_orthogonal_determinant_is_unit() {
        // det via 2x2 closed form on a couple of dimensions.
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let q = random_orthogonal(2, &mut rng);
        let det = q[0][0] * q[1][1] - q[1][0] * q[0][1];
        assert!((det.abs() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn make_covariance_paper_spectrum() {
        let mut lams = vec![0.9; 10];
        lams[9] = 1.0;
        let model = make_covariance(&lams, 42).unwrap();
        assert!((model.gap(ExtremeSide::Largest) - 0.1).abs() < 1e-15);
        assert_eq!(model.gap(ExtremeSide::Smallest), 0.0);
        // sym_eigen recovers the spectrum.
        let spec = sym_eigen(model.sigma(), DEFAULT_EIGEN_TOL).unwrap();
        for (a, b) in spec.eigenvalues.iter().zip(&lams) {
            assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn make_covariance_isotropic_ignores_seed() {
        for seed in [1u64, 99] {
            let model = make_covariance(&[2.0; 6], seed).unwrap();
            for i in 0..6 {
                for j in 0..6 {
                    let want = if i == j { 2.0 } else { 0.0 };
                    assert!((model.sigma().get(i, j) - want).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn make_covariance_is_deterministic() {
        let lams = [0.1, 0.5, 2.0];
        let a = make_covariance(&lams, 7).unwrap();
        let b = make_covariance(&lams, 7).unwrap();
        assert_eq!(a.sigma(), b.sigma());
        assert_eq!(a.basis(), b.basis());
    }

    #[test]
    fn make_covariance_rejects_bad_spectra() {
        assert!(matches!(
            make_covariance(&[2.0, 1.0], 0),
            Err(Error::InvalidSpectrum(_))
        ));
        assert!(matches!(
            make_covariance(&[-1.0, 1.0], 0),
            Err(Error::InvalidSpectrum(_))
        ));
        assert!(matches!(make_covariance(&[], 0), Err(Error::InvalidSpectrum(_))));
    }

    #[test]
    fn gaussian_sampler_zero_model_is_exactly_zero() {
        let model = make_covariance(&[0.0; 4], 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let x = sample_gaussian(&model, &mut rng);
        assert_eq!(x, vec![0.0; 4]);
    }

    #[test]
    fn gaussian_sampler_matches_identity_covariance() {
        let d = 8;
        let model = make_covariance(&[1.0; 8], 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let n = 100_000;
        let d_f = d as f64;
        let mut acc = SymMat::zeros(d);
        let mut x = vec![0.0; d];
        for _ in 0..n {
            sample_gaussian_into(&model, &mut rng, &mut x);
            for i in 0..d {
                for j in i..d {
                    acc.set(i, j, acc.get(i, j) + x[i] * x[j]);
                }
            }
        }
        let emp = SymMat::from_fn(d, |i, j| {
            acc.get(i, j) / n as f64 - if i == j { 1.0 } else { 0.0 }
        });
        let err = operator_norm(&emp).unwrap();
        assert!(err < 0.05, "empirical covariance error {err} too large");
        let _ = d_f;
    }

    #[test]
    fn gaussian_fourth_moment_matches_formula() {
        // E||X||^4 = 2 tr(Sigma^2) + tr(Sigma)^2 = 99.39 for the paper
        // spectrum {0.9 x9, 1.0}.
        let mut lams = vec![0.9; 10];
        lams[9] = 1.0;
        let model = make_covariance(&lams, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let n = 100_000;
        let mut acc = 0.0;
        let mut x = vec![0.0; 10];
        for _ in 0..n {
            sample_gaussian_into(&model, &mut rng, &mut x);
            let s = crate::linalg::norm_sq(&x);
            acc += s * s;
        }
        let mean = acc / n as f64;
        assert!((mean - 99.39).abs() < 3.0, "E||X||^4 = {mean}, expected about 99.39");
    }

    #[test]
    fn empirical_covariance_concentrates() {
        let lams = [0.2, 0.5, 1.0, 1.5];
        let model = make_covariance(&lams, 11).unwrap();
        let tr: f64 = lams.iter().sum();
        let d = 4.0;
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut x = vec![0.0; 4];
        for &n in &[1_000usize, 10_000, 100_000] {
            let mut acc = SymMat::zeros(4);
            for _ in 0..n {
                sample_gaussian_into(&model, &mut rng, &mut x);
                for i in 0..4 {
                    for j in i..4 {
                        acc.set(i, j, acc.get(i, j) + x[i] * x[j]);
                    }
                }
            }
            let diff = SymMat::from_fn(4, |i, j| acc.get(i, j) / n as f64 - model.sigma().get(i, j));
            let err = operator_norm(&diff).unwrap();
            let envelope = 5.0 * tr * (d / n as f64).sqrt();
            assert!(err <= envelope, "n={n}: error {err} above envelope {envelope}");
        }
    }

    #[test]
    fn fixed_dataset_covariance_is_exact() {
        let mut lams = vec![0.9; 10];
        lams[9] = 1.0;
        let model = make_covariance(&lams, 21).unwrap();
        let ds = build_fixed_dataset(&model, 1000, 22).unwrap();
        let spec = sym_eigen(&ds.covariance(), DEFAULT_EIGEN_TOL).unwrap();
        for (got, want) in spec.eigenvalues.iter().zip(&lams) {
            assert!((got - want).abs() < 1e-8, "eigenvalue {got} vs {want}");
        }
    }

    #[test]
    fn fixed_dataset_zero_spectrum_is_zero_matrix() {
        let model = make_covariance(&[0.0; 3], 1).unwrap();
        let ds = build_fixed_dataset(&model, 5, 2).unwrap();
        assert!(ds.rows().all(|r| r.iter().all(|&x| x == 0.0)));
    }

    #[test]
    fn fixed_dataset_one_dimensional_singular_values() {
        let model = make_covariance(&[4.0], 1).unwrap();
        let ds = build_fixed_dataset(&model, 10, 3).unwrap();
        // All singular values of X equal sqrt(10 * 4); in 1-d that means
        // sum of squares equals 40.
        let ss: f64 = ds.rows().map(|r| r[0] * r[0]).sum();
        assert!((ss - 40.0).abs() < 1e-9);
    }

    #[test]
    fn fixed_dataset_literal_scale_squares_eigenvalues() {
        let lams = [0.25, 1.0];
        let model = make_covariance(&lams, 9).unwrap();
        let ds = build_fixed_dataset_scaled(&model, 50, 10, SvdScale::Literal).unwrap();
        let spec = sym_eigen(&ds.covariance(), DEFAULT_EIGEN_TOL).unwrap();
        assert!((spec.eigenvalues[0] - 0.0625).abs() < 1e-10);
        assert!((spec.eigenvalues[1] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn fixed_dataset_requires_enough_rows() {
        let model = make_covariance(&[1.0; 5], 1).unwrap();
        assert!(matches!(
            build_fixed_dataset(&model, 4, 1),
            Err(Error::InsufficientSamples { .. })
        ));
    }

    #[test]
    fn fixed_dataset_is_deterministic() {
        let model = make_covariance(&[0.5, 1.0], 7).unwrap();
        let a = build_fixed_dataset(&model, 16, 8).unwrap();
        let b = build_fixed_dataset(&model, 16, 8).unwrap();
        assert_eq!(a.data, b.data);
    }

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f.flush().unwrap();
        f
    }

    #[test]
    fn csv_basic_rows() {
        let f = write_temp("1,2\n3,4\n");
        let ds = stream_from_csv(f.path()).unwrap();
        assert_eq!(ds.n_rows(), 2);
        assert_eq!(ds.row(0), &[1.0, 2.0]);
        assert_eq!(ds.row(1), &[3.0, 4.0]);
    }

    #[test]
    fn csv_header_is_skipped() {
        let f = write_temp("a,b\n1,2\n");
        let ds = stream_from_csv(f.path()).unwrap();
        assert_eq!(ds.n_rows(), 1);
        assert_eq!(ds.row(0), &[1.0, 2.0]);
    }

    #[test]
    fn csv_empty_file_errors() {
        let f = write_temp("");
        assert!(matches!(stream_from_csv(f.path()), Err(Error::EmptyStream)));
        let f = write_temp("x0,x1\n");
        assert!(matches!(stream_from_csv(f.path()), Err(Error::EmptyStream)));
    }

    #[test]
    fn csv_ragged_row_reports_row_number() {
        let f = write_temp("1,2\n3\n");
        match stream_from_csv(f.path()) {
            Err(Error::Parse { row, .. }) => assert_eq!(row, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn csv_non_numeric_after_header_reports_row() {
        let f = write_temp("x0,x1\n1,2\nfoo,3\n");
        match stream_from_csv(f.path()) {
            Err(Error::Parse { row, .. }) => assert_eq!(row, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn csv_missing_file_is_io_error() {
        assert!(matches!(
            stream_from_csv(Path::new("/nonexistent/samples.csv")),
            Err(Error::Io(_))
        ));
    }

    #[test]
    fn csv_float_round_trips_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..1000 {
            let x: f64 = rng.gen_range(-1e6..1e6);
            let back: f64 = csv_float(x).parse().unwrap();
            assert_eq!(x.to_bits(), back.to_bits());
        }
        assert_eq!(csv_float(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn dataset_round_trips_through_csv_bit_for_bit() {
        let model = make_covariance(&[0.3, 0.9, 2.0], 13).unwrap();
        let ds = build_fixed_dataset(&model, 20, 14).unwrap();
        let mut text = String::from("x0,x1,x2\n");
        for row in ds.rows() {
            let fields: Vec<String> = row.iter().map(|&x| csv_float(x)).collect();
            text.push_str(&fields.join(","));
            text.push('\n');
        }
        let f = write_temp(&text);
        let back = stream_from_csv(f.path()).unwrap();
        assert_eq!(ds.data, back.data);
    }
}
