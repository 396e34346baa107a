//! Windowed and multi-windowed graph Fourier transforms.
//!
//! The crate builds the Laplacian eigenbasis of a weighted undirected graph,
//! defines generalized translation and modulation on it, and implements the
//! windowed graph Fourier transform (WGFT) together with its multi-window
//! extension. Reconstruction is exact whenever the per-vertex denominator
//! `sum_j <T_i gamma_j, T_i g_j>` is nonzero, which [`windows::check_nondegeneracy`]
//! verifies and [`windows::sufficient_conditions`] certifies from the window
//! spectra alone.
//!
//! ```
//! use wgft::graph::{path_graph, LaplacianKind};
//! use wgft::spectral::SpectralBasis;
//! use wgft::windows::{rbf_prototype, shifted_family, uniform_shifts, Pairing, WindowFamily};
//! use wgft::transform::{mwgft_analyze, mwgft_synthesize, relative_error};
//! use wgft::signals::impulse;
//!
//! let basis = SpectralBasis::from_graph(&path_graph(50)?, LaplacianKind::SymmetricNormalized)?;
//! let kernel = rbf_prototype(basis.lambda_max(), 0.7)?;
//! let analysis = shifted_family(&kernel, &uniform_shifts(3, basis.lambda_max()), &basis);
//! let family = WindowFamily::paired(analysis, Pairing::NormalizedSynthesis)?;
//!
//! let f = impulse(50, 24)?;
//! let coeffs = mwgft_analyze(&basis, &family, &f)?;
//! let rec = mwgft_synthesize(&basis, &family, &coeffs)?;
//! assert!(relative_error(&f, &rec) < 1e-10);
//! # Ok::<(), wgft::Error>(())
//! ```

pub mod error;
pub mod experiment;
pub mod graph;
pub mod io;
pub mod operators;
pub mod signals;
pub mod spectral;
pub mod transform;
pub mod windows;

pub use error::{Error, Result};
pub use operators::{Complex64, Signal, Spectrum};
pub use spectral::SpectralBasis;
