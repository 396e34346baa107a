//! Windowed graph Fourier analysis, exact multi-window synthesis, frame
//! bounds and spectrograms.
//!
//! Coefficient matrices are `N x N` with rows indexed by vertex `n` and
//! columns by eigenmode `k`: `S(n, k) = <f, g_{n,k}>`.
//!
//! Neither analysis nor synthesis forms individual atoms. With
//! `A = U diag(g_hat) U^*` (so that `T_n g = sqrt(N) A[:, n]`):
//!
//! * analysis: `S(n, k) = N sum_i f(i) conj(A(i, n)) chi_k(i)`, one matrix
//!   product per window;
//! * synthesis: with `B` the synthesis filter matrix and `Q = S U^T`,
//!   `p(i) = N sum_n B(i, n) Q(n, i)`.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::operators::{
    filter_matrix, translate_energies, translation_inner_products, Complex64, Signal, Spectrum,
};
use crate::spectral::SpectralBasis;
use crate::windows::{check_nondegeneracy, WindowFamily};

/// Multiplies a complex matrix by a real one using two real products.
pub(crate) fn mul_complex_real(a: &DMatrix<Complex64>, b: &DMatrix<f64>) -> DMatrix<Complex64> {
    let re = a.map(|z| z.re) * b;
    let im = a.map(|z| z.im) * b;
    re.zip_map(&im, Complex64::new)
}

/// WGFT coefficients for every window of a family.
#[derive(Debug, Clone, PartialEq)]
pub struct WgftCoefficients {
    matrices: Vec<DMatrix<Complex64>>,
    fingerprint: String,
}

impl WgftCoefficients {
    /// Wraps raw matrices, e.g. read back from disk.
    pub fn new(matrices: Vec<DMatrix<Complex64>>, fingerprint: String) -> Result<Self> {
        let n = matrices
            .first()
            .ok_or_else(|| Error::InvalidParameter("no coefficient matrices".into()))?
            .nrows();
        for m in &matrices {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: m.nrows().max(m.ncols()),
                });
            }
        }
        Ok(WgftCoefficients {
            matrices,
            fingerprint,
        })
    }

    pub fn window_count(&self) -> usize {
        self.matrices.len()
    }

    pub fn signal_len(&self) -> usize {
        self.matrices[0].nrows()
    }

    pub fn matrices(&self) -> &[DMatrix<Complex64>] {
        &self.matrices
    }

    pub fn window(&self, j: usize) -> &DMatrix<Complex64> {
        &self.matrices[j]
    }

    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    /// `sum_{j,n,k} |S_j(n, k)|^2`.
    pub fn energy(&self) -> f64 {
        self.matrices
            .iter()
            .flat_map(|m| m.iter())
            .map(|z| z.norm_sqr())
            .sum()
    }

    /// Element-wise sum with another coefficient set on the same basis.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(&other.fingerprint)?;
        if self.window_count() != other.window_count() {
            return Err(Error::DimensionMismatch {
                expected: self.window_count(),
                actual: other.window_count(),
            });
        }
        Ok(WgftCoefficients {
            matrices: self
                .matrices
                .iter()
                .zip(&other.matrices)
                .map(|(a, b)| a + b)
                .collect(),
            fingerprint: self.fingerprint.clone(),
        })
    }

    fn check_compatible(&self, expected: &str) -> Result<()> {
        if self.fingerprint != expected {
            return Err(Error::FingerprintMismatch {
                expected: expected.to_string(),
                found: self.fingerprint.clone(),
            });
        }
        Ok(())
    }
}

/// Single-window WGFT `S(n, k) = <f, g_{n,k}>`.
pub fn wgft(basis: &SpectralBasis, g_hat: &Spectrum, f: &Signal) -> Result<DMatrix<Complex64>> {
    basis.check_len(f.len())?;
    let a = filter_matrix(basis, g_hat)?;
    let n = basis.len();
    let scale = n as f64;
    // H(n, i) = N f(i) conj(A(i, n))
    let mut h = a.adjoint();
    for (mut col, &fi) in h.column_iter_mut().zip(f.iter()) {
        col *= fi * scale;
    }
    Ok(mul_complex_real(&h, basis.eigenvectors()))
}

/// Analysis step of the multi-window transform: one WGFT per analysis window.
pub fn mwgft_analyze(
    basis: &SpectralBasis,
    family: &WindowFamily,
    f: &Signal,
) -> Result<WgftCoefficients> {
    basis.check_len(family.signal_len())?;
    let matrices = family
        .analysis()
        .par_iter()
        .map(|g| wgft(basis, &g.samples, f))
        .collect::<Result<Vec<_>>>()?;
    Ok(WgftCoefficients {
        matrices,
        fingerprint: basis.fingerprint(),
    })
}

/// `p(i) = sum_{n,k} S(n, k) gamma_{n,k}(i)` for one synthesis window.
fn synthesis_numerator(
    basis: &SpectralBasis,
    gamma_hat: &Spectrum,
    coeffs: &DMatrix<Complex64>,
) -> Result<Vec<Complex64>> {
    let b = filter_matrix(basis, gamma_hat)?;
    let q = mul_complex_real(coeffs, &basis.eigenvectors().transpose());
    let n = basis.len();
    Ok((0..n)
        .map(|i| {
            let acc: Complex64 = (0..n).map(|m| b[(i, m)] * q[(m, i)]).sum();
            acc * n as f64
        })
        .collect())
}

/// Sum of the per-window synthesis numerators, accumulated in window order.
pub fn synthesis_numerators(
    basis: &SpectralBasis,
    family: &WindowFamily,
    coeffs: &WgftCoefficients,
) -> Result<Vec<Complex64>> {
    coeffs.check_compatible(&basis.fingerprint())?;
    if coeffs.window_count() != family.len() {
        return Err(Error::DimensionMismatch {
            expected: family.len(),
            actual: coeffs.window_count(),
        });
    }
    let parts = family
        .synthesis()
        .par_iter()
        .zip(coeffs.matrices.par_iter())
        .map(|(gamma, s)| synthesis_numerator(basis, &gamma.samples, s))
        .collect::<Result<Vec<_>>>()?;
    let mut p = vec![Complex64::new(0.0, 0.0); basis.len()];
    for part in parts {
        for (acc, v) in p.iter_mut().zip(part) {
            *acc += v;
        }
    }
    Ok(p)
}

/// Multi-window synthesis `f(i) = p(i) / (N d(i))`.
///
/// Fails with [`Error::DegenerateDenominator`] when some `|d(i)|` is at or
/// below the default non-degeneracy tolerance.
pub fn mwgft_synthesize(
    basis: &SpectralBasis,
    family: &WindowFamily,
    coeffs: &WgftCoefficients,
) -> Result<Signal> {
    coeffs.check_compatible(&basis.fingerprint())?;
    let report = check_nondegeneracy(basis, family, None)?;
    if !report.satisfied {
        return Err(Error::DegenerateDenominator {
            vertices: report.failing_vertices,
        });
    }
    let p = synthesis_numerators(basis, family, coeffs)?;
    let n = basis.len() as f64;
    Ok(p.iter()
        .zip(&report.denominators)
        .map(|(num, den)| num / (den * n))
        .collect())
}

/// Two-window reconstruction from single-window coefficients.
pub fn reconstruct_two_window(
    basis: &SpectralBasis,
    g_hat: &Spectrum,
    gamma_hat: &Spectrum,
    coeffs: &DMatrix<Complex64>,
) -> Result<Signal> {
    let family = WindowFamily::single(
        crate::windows::SpectralWindow::new(g_hat.clone(), "g")?,
        crate::windows::SpectralWindow::new(gamma_hat.clone(), "gamma")?,
    )?;
    let wrapped = WgftCoefficients::new(vec![coeffs.clone()], basis.fingerprint())?;
    mwgft_synthesize(basis, &family, &wrapped)
}

/// Frame bounds of the atom system generated by one window.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameBounds {
    /// Optimal lower bound `N min_i ||T_i g||^2`.
    pub lower: f64,
    /// Optimal upper bound `N max_i ||T_i g||^2`.
    pub upper: f64,
    /// `||T_i g||^2` per vertex.
    pub translate_energies: Vec<f64>,
    /// Vertex attaining the lower bound (0-based).
    pub argmin: usize,
    /// Vertex attaining the upper bound (0-based).
    pub argmax: usize,
    /// `(a^2 N, b^2 N)` with `a = min_i |<T_i gamma, T_i g>| / ||T_i gamma||`
    /// and `b = max_i ||T_i g||`, when a dual window is supplied.
    pub dual_pair_bounds: Option<(f64, f64)>,
}

impl FrameBounds {
    pub fn is_tight(&self, rel_tol: f64) -> bool {
        self.upper - self.lower <= rel_tol * self.upper
    }
}

/// Frame bounds from `sum |<f, g_{n,k}>|^2 = N sum_i |f(i)|^2 ||T_i g||^2`,
/// attained by deltas at the extreme vertices.
pub fn frame_bounds(
    basis: &SpectralBasis,
    g_hat: &Spectrum,
    gamma_hat: Option<&Spectrum>,
) -> Result<FrameBounds> {
    let energies = translate_energies(basis, g_hat)?;
    let n = basis.len() as f64;
    let (argmin, min) = extreme(&energies, |a, b| a < b);
    let (argmax, max) = extreme(&energies, |a, b| a > b);
    let tolerance = 1e-10 * n * g_hat.norm_sqr();
    if min.is_nan() || min <= tolerance {
        return Err(Error::NotAFrame(min));
    }
    let dual_pair_bounds = match gamma_hat {
        Some(gamma_hat) => {
            let cross = translation_inner_products(basis, g_hat, gamma_hat)?;
            let gamma_energies = translate_energies(basis, gamma_hat)?;
            let a = cross
                .iter()
                .zip(&gamma_energies)
                .map(|(c, &e)| if e > 0.0 { c.norm() / e.sqrt() } else { 0.0 })
                .fold(f64::INFINITY, f64::min);
            Some((a * a * n, max * n))
        }
        None => None,
    };
    Ok(FrameBounds {
        lower: n * min,
        upper: n * max,
        translate_energies: energies,
        argmin,
        argmax,
        dual_pair_bounds,
    })
}

fn extreme(values: &[f64], better: impl Fn(f64, f64) -> bool) -> (usize, f64) {
    values
        .iter()
        .copied()
        .enumerate()
        .fold((0, values[0]), |best, (i, v)| {
            if better(v, best.1) {
                (i, v)
            } else {
                best
            }
        })
}

/// Squared coefficient magnitudes, rows = vertices, columns = eigenmodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrogram {
    pub per_window: Vec<DMatrix<f64>>,
    pub averaged: DMatrix<f64>,
}

impl Spectrogram {
    /// `(vertex, mode)` of the largest averaged entry (0-based, first on ties).
    pub fn argmax(&self) -> (usize, usize) {
        let mut best = (0, 0);
        for k in 0..self.averaged.ncols() {
            for n in 0..self.averaged.nrows() {
                if self.averaged[(n, k)] > self.averaged[best] {
                    best = (n, k);
                }
            }
        }
        best
    }
}

pub fn spectrogram(coeffs: &WgftCoefficients) -> Spectrogram {
    let per_window: Vec<DMatrix<f64>> = coeffs
        .matrices
        .iter()
        .map(|m| m.map(|z| z.norm_sqr()))
        .collect();
    let n = coeffs.signal_len();
    let mut averaged = DMatrix::zeros(n, n);
    for m in &per_window {
        averaged += m;
    }
    averaged /= per_window.len() as f64;
    Spectrogram {
        per_window,
        averaged,
    }
}

/// `||a - b||_2 / ||a||_2`, or the absolute error when `a` is zero.
pub fn relative_error(reference: &Signal, approx: &Signal) -> f64 {
    let norm = reference.norm();
    let diff = reference.distance(approx);
    if norm > 0.0 {
        diff / norm
    } else {
        diff
    }
}
