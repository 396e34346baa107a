//! Test signal generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::{Complex64, Signal, Spectrum};
use crate::spectral::SpectralBasis;

/// Declarative description of a test signal. Vertex ids are 1-based, as in
/// configuration files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SignalSpec {
    Impulse {
        vertex: usize,
    },
    /// Heat profile `f_hat(l) = exp(-tau lambda_l)`. `tau` defaults to
    /// `10 / lambda_max`.
    Heat {
        tau: Option<f64>,
    },
    Chirp {
        center: usize,
        sigma: f64,
        alpha: f64,
    },
    /// Explicit spectral samples `(re, im)` per eigenvalue index.
    SpectralProfile {
        samples: Vec<[f64; 2]>,
    },
    Random {
        seed: u64,
        #[serde(default = "default_true")]
        complex: bool,
    },
}

fn default_true() -> bool {
    true
}

impl SignalSpec {
    pub fn generate(&self, basis: &SpectralBasis) -> Result<Signal> {
        let n = basis.len();
        let vertex = |v: usize| {
            if v == 0 || v > n {
                Err(Error::VertexOutOfRange { vertex: v, len: n })
            } else {
                Ok(v - 1)
            }
        };
        match self {
            SignalSpec::Impulse { vertex: v } => impulse(n, vertex(*v)?),
            SignalSpec::Heat { tau } => {
                heat_signal(basis, tau.unwrap_or_else(|| default_heat_tau(basis)))
            }
            SignalSpec::Chirp {
                center,
                sigma,
                alpha,
            } => chirp_signal(n, vertex(*center)?, *sigma, *alpha),
            SignalSpec::SpectralProfile { samples } => {
                let spectrum = samples
                    .iter()
                    .map(|&[re, im]| Complex64::new(re, im))
                    .collect();
                spectral_signal(basis, &spectrum)
            }
            SignalSpec::Random { seed, complex } => Ok(random_signal(n, *seed, *complex)),
        }
    }
}

pub fn default_heat_tau(basis: &SpectralBasis) -> f64 {
    10.0 / basis.lambda_max()
}

/// Kronecker delta at 0-based vertex `vertex`.
pub fn impulse(n: usize, vertex: usize) -> Result<Signal> {
    if vertex >= n {
        return Err(Error::VertexOutOfRange { vertex, len: n });
    }
    Ok(Signal::delta(n, vertex))
}

/// Smooth signal with spectrum `exp(-tau lambda_l)`.
pub fn heat_signal(basis: &SpectralBasis, tau: f64) -> Result<Signal> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "heat tau must be positive, got {tau}"
        )));
    }
    let spectrum = Spectrum::from_real(basis.eigenvalues().iter().map(|l| (-tau * l).exp()));
    basis.igft(&spectrum)
}

/// Vertex-localized chirp
/// `f(v) = exp(-(v - center)^2 / (2 sigma^2)) exp(i alpha (v - center))`.
///
/// The profile follows vertex numbering, so it is only geometrically
/// meaningful when the numbering follows the graph (paths, rings, grids).
pub fn chirp_signal(n: usize, center: usize, sigma: f64, alpha: f64) -> Result<Signal> {
    if center >= n {
        return Err(Error::VertexOutOfRange {
            vertex: center,
            len: n,
        });
    }
    if !(sigma > 0.0 && sigma.is_finite()) || !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "chirp needs sigma > 0 and finite alpha (sigma = {sigma}, alpha = {alpha})"
        )));
    }
    Ok((0..n)
        .map(|v| {
            let d = v as f64 - center as f64;
            Complex64::from_polar((-d * d / (2.0 * sigma * sigma)).exp(), alpha * d)
        })
        .collect())
}

/// Signal with prescribed spectrum, `f = U f_hat`.
pub fn spectral_signal(basis: &SpectralBasis, spectrum: &Spectrum) -> Result<Signal> {
    basis.igft(spectrum)
}

/// Seeded signal with entries uniform in `[-1, 1)` (real and imaginary parts).
pub fn random_signal(n: usize, seed: u64, complex: bool) -> Signal {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let re = rng.random_range(-1.0..1.0);
            let im = if complex {
                rng.random_range(-1.0..1.0)
            } else {
                0.0
            };
            Complex64::new(re, im)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{path_graph, random_connected_graph, LaplacianKind};

    #[test]
    fn impulse_properties() {
        let basis =
            SpectralBasis::from_graph(&path_graph(50).unwrap(), LaplacianKind::SymmetricNormalized)
                .unwrap();
        let d = impulse(50, 24).unwrap();
        assert_eq!(d.norm(), 1.0);
        let hat = basis.gft(&d).unwrap();
        for l in 0..50 {
            assert_eq!(hat[l].re, basis.mode(l, 24));
        }
        assert!(impulse(50, 50).is_err());
    }

    #[test]
    fn heat_is_real_and_smoothing() {
        let g = random_connected_graph(30, 40, 1).unwrap();
        let basis = SpectralBasis::from_graph(&g, LaplacianKind::Unnormalized).unwrap();
        let mut prev = f64::INFINITY;
        for tau in [1.0, 5.0, 10.0] {
            let f = heat_signal(&basis, tau).unwrap();
            assert!(f.iter().all(|z| z.im.abs() <= 1e-12));
            let hat = basis.gft(&f).unwrap();
            let dc = basis.igft(&Spectrum::unit(30, 0).scale(hat[0])).unwrap();
            let residual = f.distance(&dc);
            assert!(residual < prev);
            prev = residual;
        }
        let tiny = heat_signal(&basis, 1e-14).unwrap();
        let hat = basis.gft(&tiny).unwrap();
        assert!(hat
            .iter()
            .all(|z| (z - Complex64::new(1.0, 0.0)).norm() < 1e-10));
        assert!(heat_signal(&basis, 0.0).is_err());
    }

    #[test]
    fn heat_spectrum_decreasing() {
        let basis =
            SpectralBasis::from_graph(&path_graph(20).unwrap(), LaplacianKind::Unnormalized)
                .unwrap();
        let f = heat_signal(&basis, 2.0).unwrap();
        let hat = basis.gft(&f).unwrap();
        assert!(hat.windows(2).all(|w| w[0].re > w[1].re && w[1].re > 0.0));
    }

    #[test]
    fn chirp_envelope() {
        let f = chirp_signal(50, 24, 6.0, 0.3).unwrap();
        assert!((f[24].norm() - 1.0).abs() < 1e-15);
        for v in 0..50 {
            let d = v as f64 - 24.0;
            assert!((f[v].norm() - (-d * d / 72.0).exp()).abs() < 1e-15);
        }
        let argmax = (0..50)
            .max_by(|&a, &b| f[a].norm().total_cmp(&f[b].norm()))
            .unwrap();
        assert_eq!(argmax, 24);
        let real = chirp_signal(50, 24, 6.0, 0.0).unwrap();
        assert!(real.iter().all(|z| z.im == 0.0));
        assert!(chirp_signal(50, 24, 0.0, 0.3).is_err());
    }

    #[test]
    fn spectral_profile_round_trip() {
        let g = random_connected_graph(20, 15, 3).unwrap();
        let basis = SpectralBasis::from_graph(&g, LaplacianKind::SymmetricNormalized).unwrap();
        let hat = Spectrum(random_signal(20, 4, true).0);
        let f = spectral_signal(&basis, &hat).unwrap();
        assert!(basis.gft(&f).unwrap().distance(&hat) < 1e-12);
        let chi5 = spectral_signal(&basis, &Spectrum::unit(20, 5)).unwrap();
        assert!((0..20).all(|i| chi5[i].re == basis.mode(5, i)));
        assert_eq!(
            spectral_signal(&basis, &Spectrum::zeros(20)).unwrap(),
            Signal::zeros(20)
        );
        assert!(spectral_signal(&basis, &Spectrum::zeros(3)).is_err());
    }

    #[test]
    fn spec_generation_uses_one_based_vertices() {
        let basis = SpectralBasis::from_graph(&path_graph(5).unwrap(), LaplacianKind::Unnormalized)
            .unwrap();
        let f = SignalSpec::Impulse { vertex: 5 }.generate(&basis).unwrap();
        assert_eq!(f[4].re, 1.0);
        assert!(SignalSpec::Impulse { vertex: 0 }.generate(&basis).is_err());
        let r1 = SignalSpec::Random {
            seed: 3,
            complex: false,
        }
        .generate(&basis)
        .unwrap();
        assert!(r1.iter().all(|z| z.im == 0.0));
    }
}
