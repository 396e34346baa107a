//! Laplacian eigendecomposition and the graph Fourier transform.

use std::ops::Range;

use nalgebra::{DMatrix, SymmetricEigen};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::{Graph, LaplacianKind};
use crate::operators::{Complex64, Signal, Spectrum};

/// Eigenvalues below `ZERO_TOL * max(1, lambda_max)` are treated as zero.
pub const ZERO_TOL: f64 = 1e-10;
const ORTHONORMALITY_TOL: f64 = 1e-10;
const SIGN_TIE_TOL: f64 = 1e-10;

/// Orthonormal Laplacian eigenbasis with ascending eigenvalues.
///
/// Column `l` of the eigenvector matrix is the Fourier mode `chi_l`. Each
/// column is oriented so that its largest-magnitude entry (lowest index on
/// ties) is positive, which makes the constant mode of a connected graph's
/// unnormalized Laplacian equal to `1/sqrt(N)` everywhere.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralBasis {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<f64>,
    kind: LaplacianKind,
}

/// Sup-norm quantities of the eigenvector matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralMagnitudes {
    /// Largest entry modulus of the whole eigenvector matrix.
    pub mu: f64,
    /// `mu_ell[l] = max_i |chi_l(i)|`, the per-mode column maxima.
    pub mu_ell: Vec<f64>,
    /// `nu[n] = max_l |chi_l(n)|`, the per-vertex row maxima.
    pub nu: Vec<f64>,
}

impl SpectralBasis {
    /// Builds the Laplacian of `graph` and decomposes it.
    pub fn from_graph(graph: &Graph, kind: LaplacianKind) -> Result<Self> {
        eigendecompose(&graph.laplacian(kind)?, kind)
    }

    /// Wraps an externally supplied eigenbasis after validating it.
    ///
    /// Eigenvalues must be ascending and the columns orthonormal; no sign
    /// convention is imposed, so rotated bases within an eigenspace survive
    /// unchanged.
    pub fn from_parts(
        eigenvalues: Vec<f64>,
        eigenvectors: DMatrix<f64>,
        kind: LaplacianKind,
    ) -> Result<Self> {
        let n = eigenvalues.len();
        if n < 2 {
            return Err(Error::InvalidSize(n));
        }
        if eigenvectors.nrows() != n || eigenvectors.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: eigenvectors.nrows().max(eigenvectors.ncols()),
            });
        }
        if eigenvalues.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidParameter(
                "eigenvalues must be ascending".into(),
            ));
        }
        let gram = eigenvectors.transpose() * &eigenvectors;
        let defect = (gram - DMatrix::<f64>::identity(n, n)).amax();
        if defect > ORTHONORMALITY_TOL {
            return Err(Error::InvalidParameter(format!(
                "eigenvectors are not orthonormal (defect {defect:e})"
            )));
        }
        Ok(SpectralBasis {
            eigenvalues,
            eigenvectors,
            kind,
        })
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn kind(&self) -> LaplacianKind {
        self.kind
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues[self.len() - 1]
    }

    /// Eigenvector matrix `U`, one mode per column.
    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    /// `chi_l(i)`.
    pub fn mode(&self, l: usize, i: usize) -> f64 {
        self.eigenvectors[(i, l)]
    }

    /// Groups of consecutive indices whose eigenvalues agree within
    /// `rel_tol * max(1, lambda_max)`. Only groups of size two or more are returned.
    pub fn degenerate_eigenspaces(&self, rel_tol: f64) -> Vec<Range<usize>> {
        let tol = rel_tol * self.lambda_max().max(1.0);
        let mut out = Vec::new();
        let mut start = 0;
        for l in 1..=self.len() {
            if l == self.len() || self.eigenvalues[l] - self.eigenvalues[l - 1] > tol {
                if l - start > 1 {
                    out.push(start..l);
                }
                start = l;
            }
        }
        out
    }

    /// Stable hex digest of the eigenvalues and eigenvectors, used to check
    /// that coefficient files are paired with the basis that produced them.
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update((self.len() as u64).to_le_bytes());
        hasher.update([self.kind as u8]);
        for &lambda in &self.eigenvalues {
            hasher.update(lambda.to_bits().to_le_bytes());
        }
        for &x in self.eigenvectors.iter() {
            hasher.update(x.to_bits().to_le_bytes());
        }
        hasher.finalize()[..16]
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    /// Graph Fourier transform `f_hat(l) = <f, chi_l>`.
    pub fn gft(&self, f: &Signal) -> Result<Spectrum> {
        self.check_len(f.len())?;
        let out = self
            .eigenvectors
            .column_iter()
            .map(|chi| {
                chi.iter()
                    .zip(f.iter())
                    .fold(Complex64::new(0.0, 0.0), |acc, (&c, &v)| acc + v * c)
            })
            .collect();
        Ok(Spectrum(out))
    }

    /// Inverse transform `f(i) = sum_l f_hat(l) chi_l(i)`.
    pub fn igft(&self, spectrum: &Spectrum) -> Result<Signal> {
        self.check_len(spectrum.len())?;
        let mut out = vec![Complex64::new(0.0, 0.0); self.len()];
        for (chi, &coef) in self.eigenvectors.column_iter().zip(spectrum.iter()) {
            for (o, &c) in out.iter_mut().zip(chi.iter()) {
                *o += coef * c;
            }
        }
        Ok(Signal(out))
    }

    pub fn magnitudes(&self) -> SpectralMagnitudes {
        let n = self.len();
        let abs = self.eigenvectors.map(f64::abs);
        let mu_ell: Vec<f64> = (0..n).map(|l| abs.column(l).max()).collect();
        let nu: Vec<f64> = (0..n).map(|i| abs.row(i).max()).collect();
        let mu = mu_ell.iter().copied().fold(0.0, f64::max);
        SpectralMagnitudes { mu, mu_ell, nu }
    }

    pub(crate) fn check_len(&self, actual: usize) -> Result<()> {
        if actual != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                actual,
            });
        }
        Ok(())
    }
}

/// Full dense eigendecomposition of a symmetric Laplacian.
///
/// The pipeline is fixed (nalgebra's symmetric QR solver, stable ascending
/// sort, sign normalization), so identical input gives bit-identical output.
pub fn eigendecompose(laplacian: &DMatrix<f64>, kind: LaplacianKind) -> Result<SpectralBasis> {
    let n = laplacian.nrows();
    if n != laplacian.ncols() {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: laplacian.ncols(),
        });
    }
    if n < 2 {
        return Err(Error::InvalidSize(n));
    }
    let eig = SymmetricEigen::try_new(laplacian.clone(), f64::EPSILON, 0)
        .ok_or_else(|| Error::EigSolverFailure("symmetric QR did not converge".into()))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let lambda_max = eig.eigenvalues[order[n - 1]];
    let zero_tol = ZERO_TOL * lambda_max.max(1.0);
    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let lambda = eig.eigenvalues[src];
        eigenvalues.push(if lambda.abs() <= zero_tol {
            0.0
        } else {
            lambda
        });
        let col = eig.eigenvectors.column(src);
        let peak = col.amax();
        let pivot = col
            .iter()
            .position(|x| x.abs() >= peak - SIGN_TIE_TOL)
            .unwrap_or(0);
        let sign = if col[pivot] < 0.0 { -1.0 } else { 1.0 };
        eigenvectors.set_column(dst, &(col * sign));
    }
    if eigenvalues[1] <= zero_tol {
        return Err(Error::MultipleZeroEigenvalues(eigenvalues[1]));
    }
    Ok(SpectralBasis {
        eigenvalues,
        eigenvectors,
        kind,
    })
}
