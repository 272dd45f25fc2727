//! Dense vector and symmetric-matrix primitives plus a cyclic-Jacobi
//! eigensolver used as the offline ground-truth oracle.
//!
//! The solver is plain row-cyclic Jacobi: at desk scale (d up to a few
//! hundred) it is fast enough and produces orthonormal eigenvectors
//! essentially for free, which is exactly what an oracle needs. Eigenpairs
//! are returned ascending, and each eigenvector is sign-fixed so that its
//! largest-magnitude entry is positive — eigenvectors are only identifiable
//! up to sign, and tests need determinism.

use crate::error::{Error, Result};

/// Relative off-diagonal threshold used when no explicit tolerance is given.
pub const DEFAULT_EIGEN_TOL: f64 = 1e-12;

const MAX_SWEEPS: usize = 100;

// ---------------------------------------------------------------------------
// Vector helpers
// ---------------------------------------------------------------------------

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm_sq(v: &[f64]) -> f64 {
    dot(v, v)
}

#[inline]
pub fn norm(v: &[f64]) -> f64 {
    norm_sq(v).sqrt()
}

pub fn all_finite(v: &[f64]) -> bool {
    v.iter().all(|x| x.is_finite())
}

/// Scales `v` to unit norm in place. Errors on the zero vector.
pub fn normalize(v: &mut [f64]) -> Result<()> {
    let n = norm(v);
    if n == 0.0 {
        return Err(Error::ZeroVector);
    }
    for x in v.iter_mut() {
        *x /= n;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// SymMat
// ---------------------------------------------------------------------------

/// Dense symmetric matrix with exact symmetry as stored: every write goes to
/// both triangles, so `get(i, j) == get(j, i)` bit for bit.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMat {
    d: usize,
    a: Vec<f64>, // row-major, d*d
}

impl SymMat {
    pub fn zeros(d: usize) -> Self {
        assert!(d >= 1, "dimension must be at least 1");
        Self { d, a: vec![0.0; d * d] }
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m.a[i * m.d + i] = v;
        }
        m
    }

    /// Builds from `f` evaluated on the upper triangle (i <= j) and mirrored.
    pub fn from_fn(d: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(d);
        for i in 0..d {
            for j in i..d {
                let v = f(i, j);
                m.a[i * d + j] = v;
                m.a[j * d + i] = v;
            }
        }
        m
    }

    /// Builds from full rows, which must be square and exactly symmetric.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let d = rows.len();
        if d == 0 || rows.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidMatrix("matrix must be square"));
        }
        for (i, row) in rows.iter().enumerate() {
            for (j, other) in rows.iter().enumerate().take(i) {
                if row[j] != other[i] {
                    return Err(Error::InvalidMatrix("matrix is not symmetric"));
                }
            }
        }
        let mut m = Self::zeros(d);
        for (i, r) in rows.iter().enumerate() {
            m.a[i * d..(i + 1) * d].copy_from_slice(r);
        }
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.d + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.d + j] = v;
        self.a[j * self.d + i] = v;
    }

    pub fn is_finite(&self) -> bool {
        all_finite(&self.a)
    }

    pub fn frobenius_norm(&self) -> f64 {
        norm(&self.a)
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.d);
        let mut out = vec![0.0; self.d];
        self.mul_vec_into(v, &mut out);
        out
    }

    pub fn mul_vec_into(&self, v: &[f64], out: &mut [f64]) {
        debug_assert_eq!(v.len(), self.d);
        debug_assert_eq!(out.len(), self.d);
        for (o, row) in out.iter_mut().zip(self.a.chunks_exact(self.d)) {
            *o = dot(row, v);
        }
    }
}

/// Sum of diagonal entries.
pub fn trace(m: &SymMat) -> f64 {
    (0..m.dim()).map(|i| m.get(i, i)).sum()
}

/// `<Mv, v> / ||v||^2`; lies between the extreme eigenvalues of `M`.
pub fn rayleigh_quotient(m: &SymMat, v: &[f64]) -> Result<f64> {
    let ns = norm_sq(v);
    if ns == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(dot(&m.mul_vec(v), v) / ns)
}

// ---------------------------------------------------------------------------
// Spectrum
// ---------------------------------------------------------------------------

/// Eigenpairs sorted ascending; `eigenvectors[j]` is the unit eigenvector
/// paired with `eigenvalues[j]`.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<f64>>,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }
}

/// Cyclic Jacobi diagonalization of a symmetric matrix.
///
/// Sweeps in row-cyclic pivot order until the largest off-diagonal magnitude
/// drops below `tol * ||M||_F`, then returns ascending-sorted eigenpairs.
/// `tol` must be positive; [`DEFAULT_EIGEN_TOL`] is a good choice.
pub fn sym_eigen(m: &SymMat, tol: f64) -> Result<Spectrum> {
    assert!(tol > 0.0, "tolerance must be positive");
    if !m.is_finite() {
        return Err(Error::InvalidMatrix("non-finite entries"));
    }
    let d = m.dim();
    let mut a = m.clone();
    // q[j] accumulates eigenvector j (column j of the rotation product).
    let mut q: Vec<Vec<f64>> = (0..d)
        .map(|j| {
            let mut e = vec![0.0; d];
            e[j] = 1.0;
            e
        })
        .collect();

    let thresh = tol * m.frobenius_norm();
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut off_max = 0.0f64;
        for p in 0..d {
            for r in (p + 1)..d {
                off_max = off_max.max(a.get(p, r).abs());
            }
        }
        if off_max <= thresh {
            converged = true;
            break;
        }
        for p in 0..d.saturating_sub(1) {
            for r in (p + 1)..d {
                let apr = a.get(p, r);
                if apr == 0.0 {
                    continue;
                }
                // Rotation angle chosen to annihilate a[p][r].
                let theta = (a.get(r, r) - a.get(p, p)) / (2.0 * apr);
                let t = if theta.abs() > 1e150 {
                    // Avoid overflow in theta^2; the rotation is tiny.
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                let app = a.get(p, p);
                let arr = a.get(r, r);
                for k in 0..d {
                    if k == p || k == r {
                        continue;
                    }
                    let akp = a.get(k, p);
                    let akr = a.get(k, r);
                    a.set(k, p, c * akp - s * akr);
                    a.set(k, r, s * akp + c * akr);
                }
                a.set(p, p, c * c * app - 2.0 * s * c * apr + s * s * arr);
                a.set(r, r, s * s * app + 2.0 * s * c * apr + c * c * arr);
                a.set(p, r, 0.0);

                let (head, tail) = q.split_at_mut(r);
                let (qp, qr) = (&mut head[p], &mut tail[0]);
                for (xp, xr) in qp.iter_mut().zip(qr.iter_mut()) {
                    let (gp, gr) = (*xp, *xr);
                    *xp = c * gp - s * gr;
                    *xr = s * gp + c * gr;
                }
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| a.get(i, i).partial_cmp(&a.get(j, j)).unwrap());

    let eigenvalues: Vec<f64> = order.iter().map(|&i| a.get(i, i)).collect();
    let mut eigenvectors: Vec<Vec<f64>> = order.into_iter().map(|i| std::mem::take(&mut q[i])).collect();
    for v in &mut eigenvectors {
        fix_sign(v);
    }
    Ok(Spectrum { eigenvalues, eigenvectors })
}

/// Flips `v` so its largest-magnitude entry (first on ties) is positive.
fn fix_sign(v: &mut [f64]) {
    let mut idx = 0;
    let mut best = -1.0f64;
    for (i, &x) in v.iter().enumerate() {
        if x.abs() > best {
            best = x.abs();
            idx = i;
        }
    }
    if v[idx] < 0.0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}

/// Largest eigenvalue magnitude, computed through [`sym_eigen`].
pub fn operator_norm(m: &SymMat) -> Result<f64> {
    let spec = sym_eigen(m, DEFAULT_EIGEN_TOL)?;
    Ok(spec
        .eigenvalues
        .iter()
        .fold(0.0f64, |acc, &l| acc.max(l.abs())))
}
