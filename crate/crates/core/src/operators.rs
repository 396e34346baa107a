//! Generalized modulation, convolution and translation on a graph, and the
//! windowed Fourier atoms built from them.
//!
//! Everything here is a pure function of an immutable [`SpectralBasis`].
//! Windows enter through their spectra; vertex-domain windows are converted
//! once with [`SpectralBasis::gft`].

use std::ops::{Deref, DerefMut};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::spectral::SpectralBasis;

pub use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

macro_rules! complex_vector {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq)]
        pub struct $name(pub Vec<Complex64>);

        impl $name {
            pub fn zeros(n: usize) -> Self {
                Self(vec![ZERO; n])
            }

            /// Unit coordinate vector `e_k`.
            pub fn unit(n: usize, k: usize) -> Self {
                let mut v = Self::zeros(n);
                v.0[k] = Complex64::new(1.0, 0.0);
                v
            }

            pub fn from_real(values: impl IntoIterator<Item = f64>) -> Self {
                Self(values.into_iter().map(|x| Complex64::new(x, 0.0)).collect())
            }

            pub fn norm_sqr(&self) -> f64 {
                self.0.iter().map(|z| z.norm_sqr()).sum()
            }

            pub fn norm(&self) -> f64 {
                self.norm_sqr().sqrt()
            }

            /// `<self, other>`, conjugate-linear in the second argument.
            pub fn inner(&self, other: &Self) -> Complex64 {
                self.0.iter().zip(&other.0).map(|(a, b)| a * b.conj()).sum()
            }

            /// Euclidean distance `||self - other||_2`.
            pub fn distance(&self, other: &Self) -> f64 {
                self.0
                    .iter()
                    .zip(&other.0)
                    .map(|(a, b)| (a - b).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            }

            pub fn scale(&self, factor: Complex64) -> Self {
                Self(self.0.iter().map(|z| z * factor).collect())
            }

            pub fn add(&self, other: &Self) -> Self {
                Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
            }
        }

        impl Deref for $name {
            type Target = [Complex64];
            fn deref(&self) -> &[Complex64] {
                &self.0
            }
        }

        impl DerefMut for $name {
            fn deref_mut(&mut self) -> &mut [Complex64] {
                &mut self.0
            }
        }

        impl From<Vec<Complex64>> for $name {
            fn from(v: Vec<Complex64>) -> Self {
                Self(v)
            }
        }

        impl FromIterator<Complex64> for $name {
            fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
                Self(iter.into_iter().collect())
            }
        }
    };
}

complex_vector!(
    /// Complex signal indexed by vertex.
    Signal
);
complex_vector!(
    /// Complex spectrum indexed by Laplacian eigenvalue index.
    Spectrum
);

impl Signal {
    /// Kronecker delta at vertex `n`.
    pub fn delta(len: usize, n: usize) -> Self {
        Self::unit(len, n)
    }
}

fn check_vertex(basis: &SpectralBasis, n: usize) -> Result<()> {
    if n >= basis.len() {
        return Err(Error::IndexOutOfRange {
            index: n,
            len: basis.len(),
        });
    }
    Ok(())
}

/// Generalized modulation `(M_k f)(i) = sqrt(N) f(i) chi_k(i)`.
pub fn modulate(basis: &SpectralBasis, k: usize, f: &Signal) -> Result<Signal> {
    check_vertex(basis, k)?;
    basis.check_len(f.len())?;
    let scale = (basis.len() as f64).sqrt();
    Ok(f.iter()
        .enumerate()
        .map(|(i, &v)| v * (scale * basis.mode(k, i)))
        .collect())
}

/// Generalized convolution `(f * g)(i) = sum_l f_hat(l) g_hat(l) chi_l(i)`.
pub fn convolve(basis: &SpectralBasis, f: &Signal, g: &Signal) -> Result<Signal> {
    let f_hat = basis.gft(f)?;
    let g_hat = basis.gft(g)?;
    let product: Spectrum = f_hat.iter().zip(g_hat.iter()).map(|(a, b)| a * b).collect();
    basis.igft(&product)
}

/// Generalized translation `T_n` of a signal given by its spectrum:
/// `(T_n f)(i) = sqrt(N) sum_l f_hat(l) chi_l(n) chi_l(i)`.
pub fn translate_spectrum(basis: &SpectralBasis, n: usize, f_hat: &Spectrum) -> Result<Signal> {
    check_vertex(basis, n)?;
    basis.check_len(f_hat.len())?;
    let scale = (basis.len() as f64).sqrt();
    let weighted: Spectrum = f_hat
        .iter()
        .enumerate()
        .map(|(l, &c)| c * (scale * basis.mode(l, n)))
        .collect();
    basis.igft(&weighted)
}

/// Generalized translation `T_n f` of a vertex-domain signal.
pub fn translate(basis: &SpectralBasis, n: usize, f: &Signal) -> Result<Signal> {
    translate_spectrum(basis, n, &basis.gft(f)?)
}

/// Windowed graph Fourier atom `g_{n,k} = M_k T_n g`, for a window given by
/// its spectrum.
pub fn atom(basis: &SpectralBasis, g_hat: &Spectrum, n: usize, k: usize) -> Result<Signal> {
    modulate(basis, k, &translate_spectrum(basis, n, g_hat)?)
}

/// Applies the graph filter `U diag(g_hat) U^*` to `f` without forming the
/// operator.
pub fn apply_filter(basis: &SpectralBasis, g_hat: &Spectrum, f: &Signal) -> Result<Signal> {
    basis.check_len(g_hat.len())?;
    let f_hat = basis.gft(f)?;
    let filtered: Spectrum = f_hat.iter().zip(g_hat.iter()).map(|(a, b)| a * b).collect();
    basis.igft(&filtered)
}

/// Dense filter matrix `U diag(g_hat) U^*`.
///
/// Column `n` scaled by `sqrt(N)` is the translate `T_n g`.
pub fn filter_matrix(basis: &SpectralBasis, g_hat: &Spectrum) -> Result<DMatrix<Complex64>> {
    basis.check_len(g_hat.len())?;
    let u = basis.eigenvectors();
    let ut = u.transpose();
    let mut scaled_re = u.clone();
    let mut scaled_im = u.clone();
    for (l, c) in g_hat.iter().enumerate() {
        scaled_re.column_mut(l).scale_mut(c.re);
        scaled_im.column_mut(l).scale_mut(c.im);
    }
    let re = scaled_re * &ut;
    let im = scaled_im * &ut;
    Ok(re.zip_map(&im, Complex64::new))
}

/// `<T_n gamma, T_n g> = N sum_l gamma_hat(l) conj(g_hat(l)) |chi_l(n)|^2`.
pub fn translation_inner_product(
    basis: &SpectralBasis,
    g_hat: &Spectrum,
    gamma_hat: &Spectrum,
    n: usize,
) -> Result<Complex64> {
    check_vertex(basis, n)?;
    basis.check_len(g_hat.len())?;
    basis.check_len(gamma_hat.len())?;
    Ok(translation_inner_product_unchecked(
        basis, g_hat, gamma_hat, n,
    ))
}

/// [`translation_inner_product`] at every vertex.
pub fn translation_inner_products(
    basis: &SpectralBasis,
    g_hat: &Spectrum,
    gamma_hat: &Spectrum,
) -> Result<Vec<Complex64>> {
    basis.check_len(g_hat.len())?;
    basis.check_len(gamma_hat.len())?;
    Ok((0..basis.len())
        .map(|n| translation_inner_product_unchecked(basis, g_hat, gamma_hat, n))
        .collect())
}

fn translation_inner_product_unchecked(
    basis: &SpectralBasis,
    g_hat: &Spectrum,
    gamma_hat: &Spectrum,
    n: usize,
) -> Complex64 {
    let sum: Complex64 = g_hat
        .iter()
        .zip(gamma_hat.iter())
        .enumerate()
        .map(|(l, (g, gamma))| {
            let chi = basis.mode(l, n);
            gamma * g.conj() * (chi * chi)
        })
        .sum();
    sum * basis.len() as f64
}

/// `||T_i g||_2^2 = N sum_l |g_hat(l)|^2 chi_l(i)^2` for every vertex `i`.
pub fn translate_energies(basis: &SpectralBasis, g_hat: &Spectrum) -> Result<Vec<f64>> {
    Ok(translation_inner_products(basis, g_hat, g_hat)?
        .into_iter()
        .map(|z| z.re)
        .collect())
}
