//! Shared fixtures and brute-force oracles for the integration tests.
//!
//! The oracles below work straight from the eigenvector matrix with explicit
//! loops and never call the crate's operator or transform code.

#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wgft::graph::{random_connected_graph, LaplacianKind};
use wgft::{Complex64, Signal, SpectralBasis, Spectrum};

pub const KINDS: [LaplacianKind; 2] = [
    LaplacianKind::Unnormalized,
    LaplacianKind::SymmetricNormalized,
];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_basis(rng: &mut ChaCha8Rng, n: usize, kind: LaplacianKind) -> SpectralBasis {
    let extra = rng.random_range(0..=n);
    let graph = random_connected_graph(n, extra, rng.random()).unwrap();
    SpectralBasis::from_graph(&graph, kind).unwrap()
}

pub fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn random_spectrum(rng: &mut ChaCha8Rng, n: usize) -> Spectrum {
    (0..n).map(|_| random_complex(rng)).collect()
}

pub fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Signal {
    (0..n).map(|_| random_complex(rng)).collect()
}

/// `(T_n g)(i) = sqrt(N) sum_l g_hat(l) chi_l(n) chi_l(i)`.
pub fn oracle_translate(basis: &SpectralBasis, g_hat: &Spectrum, n: usize) -> Vec<Complex64> {
    let u = basis.eigenvectors();
    let size = basis.len();
    let root = (size as f64).sqrt();
    (0..size)
        .map(|i| {
            let mut acc = Complex64::new(0.0, 0.0);
            for l in 0..size {
                acc += g_hat[l] * (u[(n, l)] * u[(i, l)]);
            }
            acc * root
        })
        .collect()
}

/// `g_{n,k}(i) = sqrt(N) chi_k(i) (T_n g)(i)`.
pub fn oracle_atom(basis: &SpectralBasis, g_hat: &Spectrum, n: usize, k: usize) -> Vec<Complex64> {
    let u = basis.eigenvectors();
    let root = (basis.len() as f64).sqrt();
    oracle_translate(basis, g_hat, n)
        .into_iter()
        .enumerate()
        .map(|(i, t)| t * (root * u[(i, k)]))
        .collect()
}

/// Every atom of a window, indexed `[n * N + k]`.
pub fn oracle_atoms(basis: &SpectralBasis, g_hat: &Spectrum) -> Vec<Vec<Complex64>> {
    let n = basis.len();
    let mut out = Vec::with_capacity(n * n);
    for v in 0..n {
        for k in 0..n {
            out.push(oracle_atom(basis, g_hat, v, k));
        }
    }
    out
}

/// `<a, b> = sum_i a(i) conj(b(i))`.
pub fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

pub fn norm_sqr(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

/// `S(n, k) = <f, g_{n,k}>` from precomputed atoms.
pub fn oracle_coefficients(atoms: &[Vec<Complex64>], f: &[Complex64]) -> DMatrix<Complex64> {
    let n = f.len();
    DMatrix::from_fn(n, n, |v, k| dot(f, &atoms[v * n + k]))
}

/// `p(i) = sum_{n,k} S(n,k) gamma_{n,k}(i)` by summing atoms.
pub fn oracle_numerator(atoms: &[Vec<Complex64>], s: &DMatrix<Complex64>) -> Vec<Complex64> {
    let n = s.nrows();
    let mut p = vec![Complex64::new(0.0, 0.0); n];
    for v in 0..n {
        for k in 0..n {
            let c = s[(v, k)];
            for (acc, a) in p.iter_mut().zip(&atoms[v * n + k]) {
                *acc += c * a;
            }
        }
    }
    p
}

/// `nu_n = max_l |chi_l(n)|`.
pub fn oracle_nu(basis: &SpectralBasis, n: usize) -> f64 {
    basis
        .eigenvectors()
        .row(n)
        .iter()
        .fold(0.0, |m, v| f64::max(m, v.abs()))
}

/// `mu = max_{l,i} |chi_l(i)|`.
pub fn oracle_mu(basis: &SpectralBasis) -> f64 {
    basis
        .eigenvectors()
        .iter()
        .fold(0.0, |m, v| f64::max(m, v.abs()))
}

pub fn relative_error(reference: &[Complex64], approx: &[Complex64]) -> f64 {
    let diff: f64 = reference
        .iter()
        .zip(approx)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum();
    (diff / norm_sqr(reference)).sqrt()
}

pub fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Haar-ish random orthogonal matrix from the QR factor of a random matrix.
pub fn random_orthogonal(rng: &mut ChaCha8Rng, m: usize) -> DMatrix<f64> {
    let a = DMatrix::from_fn(m, m, |_, _| rng.random_range(-1.0..1.0));
    a.qr().q()
}

/// Rotates the columns of `basis` inside each repeated eigenspace.
pub fn rotate_eigenspaces(rng: &mut ChaCha8Rng, basis: &SpectralBasis) -> SpectralBasis {
    let mut u = basis.eigenvectors().clone();
    for range in basis.degenerate_eigenspaces(1e-9) {
        let q = random_orthogonal(rng, range.len());
        let block = u.columns(range.start, range.len()) * q;
        u.columns_mut(range.start, range.len()).copy_from(&block);
    }
    SpectralBasis::from_parts(basis.eigenvalues().to_vec(), u, basis.kind()).unwrap()
}
