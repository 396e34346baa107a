//! End-to-end experiment runner driven by TOML configuration files.
//!
//! A config names a graph, a Laplacian, a test signal and a window design.
//! [`run_experiment`] analyzes the signal, writes every intermediate
//! artifact as CSV, reconstructs it and reports the relative error together
//! with the smallest reconstruction denominator.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{
    load_graph, path_graph, random_connected_graph, star_graph, Graph, LaplacianKind, LoadOptions,
};
use crate::io;
use crate::operators::Complex64;
use crate::signals::SignalSpec;
use crate::spectral::SpectralBasis;
use crate::transform::{mwgft_analyze, mwgft_synthesize, relative_error, spectrogram};
use crate::windows::{
    check_nondegeneracy, rbf_prototype, shifted_family, uniform_shifts, Pairing, SpectralWindow,
    WindowFamily,
};

/// Coefficient files are only written automatically up to this many vertices.
pub const COEFFICIENT_DUMP_LIMIT: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "kebab-case")]
pub enum GraphSource {
    Path {
        size: usize,
    },
    Star {
        size: usize,
    },
    Random {
        size: usize,
        extra_edges: usize,
        seed: u64,
    },
    EdgeList {
        path: PathBuf,
        #[serde(default)]
        coordinates: Option<PathBuf>,
        #[serde(default)]
        largest_component: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kernel", rename_all = "kebab-case")]
pub enum KernelConfig {
    /// Shifted quartic RBF windows. Shifts default to a uniform grid on
    /// `[0, lambda_max]`.
    Rbf {
        count: usize,
        l_fac: f64,
        #[serde(default)]
        shifts: Option<Vec<f64>>,
    },
    /// A single flat window, `1/sqrt(N)` unless given.
    Constant {
        #[serde(default)]
        value: Option<f64>,
    },
    /// Analysis and synthesis spectra read from a window CSV; `pairing` is
    /// ignored.
    File { path: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowConfig {
    #[serde(flatten)]
    pub kernel: KernelConfig,
    #[serde(default = "default_pairing")]
    pub pairing: Pairing,
}

fn default_pairing() -> Pairing {
    Pairing::NormalizedSynthesis
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Write coefficients even above [`COEFFICIENT_DUMP_LIMIT`] vertices.
    #[serde(default)]
    pub force_coefficients: bool,
    #[serde(default = "default_true")]
    pub pgm: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            force_coefficients: false,
            pgm: true,
        }
    }
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_reconstruction_tol")]
    pub reconstruction: f64,
    /// Non-degeneracy threshold on `|d(n)|`; scaled default when absent.
    #[serde(default)]
    pub nondegeneracy: Option<f64>,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            reconstruction: default_reconstruction_tol(),
            nondegeneracy: None,
        }
    }
}

fn default_reconstruction_tol() -> f64 {
    1e-10
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub graph: GraphSource,
    pub laplacian: LaplacianKind,
    pub signal: SignalSpec,
    pub windows: WindowConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
}

const PRESETS: &[(&str, &str)] = &[
    ("path-impulse", include_str!("../presets/path-impulse.toml")),
    ("path-chirp", include_str!("../presets/path-chirp.toml")),
    (
        "irregular-heat",
        include_str!("../presets/irregular-heat.toml"),
    ),
    (
        "minnesota-heat",
        include_str!("../presets/minnesota-heat.toml"),
    ),
];

pub fn preset_names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|(name, _)| *name)
}

pub fn preset(name: &str) -> Result<ExperimentConfig> {
    let (_, text) = PRESETS.iter().find(|(n, _)| *n == name).ok_or_else(|| {
        let known: Vec<_> = preset_names().collect();
        Error::Config(format!(
            "unknown preset `{name}` (known: {})",
            known.join(", ")
        ))
    })?;
    ExperimentConfig::from_toml(text)
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Replaces the seed of a random graph and of a random signal.
    pub fn set_seed(&mut self, new_seed: u64) {
        if let GraphSource::Random { seed, .. } = &mut self.graph {
            *seed = new_seed;
        }
        if let SignalSpec::Random { seed, .. } = &mut self.signal {
            *seed = new_seed;
        }
    }

    /// Points the config at an edge-list file, keeping the component option
    /// of an existing edge-list source.
    pub fn set_graph_file(&mut self, file: PathBuf) {
        match &mut self.graph {
            GraphSource::EdgeList { path, .. } => *path = file,
            other => {
                *other = GraphSource::EdgeList {
                    path: file,
                    coordinates: None,
                    largest_component: false,
                }
            }
        }
    }

    /// Builds the graph; relative file paths resolve against `base_dir`.
    pub fn build_graph(&self, base_dir: &Path) -> Result<Graph> {
        match &self.graph {
            GraphSource::Path { size } => path_graph(*size),
            GraphSource::Star { size } => star_graph(*size),
            GraphSource::Random {
                size,
                extra_edges,
                seed,
            } => random_connected_graph(*size, *extra_edges, *seed),
            GraphSource::EdgeList {
                path,
                coordinates,
                largest_component,
            } => load_graph(
                &base_dir.join(path),
                &LoadOptions {
                    coordinates: coordinates.as_ref().map(|c| base_dir.join(c)),
                    largest_component: *largest_component,
                },
            ),
        }
    }

    pub fn build_basis(&self, base_dir: &Path) -> Result<SpectralBasis> {
        let graph = self.build_graph(base_dir).map_err(|e| e.at("graph"))?;
        SpectralBasis::from_graph(&graph, self.laplacian).map_err(|e| e.at("eigendecomposition"))
    }

    pub fn design_family(&self, basis: &SpectralBasis, base_dir: &Path) -> Result<WindowFamily> {
        let n = basis.len();
        match &self.windows.kernel {
            KernelConfig::Rbf {
                count,
                l_fac,
                shifts,
            } => {
                let prototype = rbf_prototype(basis.lambda_max(), *l_fac)?;
                let shifts = match shifts {
                    Some(s) if s.len() != *count => {
                        return Err(Error::Config(format!(
                            "{} shifts given for {count} windows",
                            s.len()
                        )))
                    }
                    Some(s) => s.clone(),
                    None => uniform_shifts(*count, basis.lambda_max()),
                };
                if shifts.is_empty() {
                    return Err(Error::Config("window count must be at least 1".into()));
                }
                WindowFamily::paired(
                    shifted_family(&prototype, &shifts, basis),
                    self.windows.pairing,
                )
            }
            KernelConfig::Constant { value } => {
                let v = value.unwrap_or(1.0 / (n as f64).sqrt());
                let w = SpectralWindow::constant(n, Complex64::new(v, 0.0));
                WindowFamily::paired(vec![w], self.windows.pairing)
            }
            KernelConfig::File { path } => {
                let family = io::read_window_family(&base_dir.join(path))?;
                basis.check_len(family.signal_len())?;
                Ok(family)
            }
        }
    }
}

/// Outcome of [`run_experiment`]; also written as `summary.toml`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub name: String,
    pub vertices: usize,
    pub edges: usize,
    pub laplacian: LaplacianKind,
    pub windows: usize,
    pub lambda_max: f64,
    pub relative_error: f64,
    pub max_pointwise_error: f64,
    pub min_abs_denominator: f64,
    /// 1-based vertex of the smallest denominator.
    pub min_denominator_vertex: usize,
    pub nondegeneracy_satisfied: bool,
    pub sufficient_condition_guarantee: bool,
    /// 1-based vertex and 0-based mode of the averaged spectrogram maximum.
    pub spectrogram_peak_vertex: usize,
    pub spectrogram_peak_mode: usize,
    pub reconstruction_tolerance: f64,
    pub passed: bool,
    pub basis_fingerprint: String,
    pub files: Vec<String>,
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Runs the full analysis/synthesis pipeline and writes its artifacts to `out_dir`.
///
/// A degenerate window family is an error (after the condition report has
/// been written). A reconstruction error above tolerance is not; it shows up
/// as `passed = false`.
pub fn run_experiment(
    config: &ExperimentConfig,
    base_dir: &Path,
    out_dir: &Path,
) -> Result<ExperimentReport> {
    let start = Instant::now();
    create_dir(out_dir)?;
    let mut files = Vec::new();
    let mut record = |name: &str| -> PathBuf {
        files.push(name.to_string());
        out_dir.join(name)
    };

    let graph = config.build_graph(base_dir).map_err(|e| e.at("graph"))?;
    let basis = SpectralBasis::from_graph(&graph, config.laplacian)
        .map_err(|e| e.at("eigendecomposition"))?;
    log::info!(
        "{}: N = {}, lambda_max = {:.6}, eigendecomposition done in {:.2?}",
        config.name,
        basis.len(),
        basis.lambda_max(),
        start.elapsed()
    );
    io::write_eigenvalues(&record("eigenvalues.csv"), &basis)?;

    let family = config
        .design_family(&basis, base_dir)
        .map_err(|e| e.at("windows"))?;
    io::write_window_family(&record("windows.csv"), &basis, &family)?;

    let report = check_nondegeneracy(&basis, &family, config.tolerances.nondegeneracy)
        .map_err(|e| e.at("windows-check"))?;
    io::write_condition_report(&record("denominators.csv"), &report)?;
    fs::write(record("condition.txt"), io::condition_summary(&report))
        .map_err(|e| Error::io(out_dir.join("condition.txt"), e))?;
    if !report.satisfied {
        return Err(Error::DegenerateDenominator {
            vertices: report.failing_vertices,
        }
        .at("windows-check"));
    }

    let f = config.signal.generate(&basis).map_err(|e| e.at("signal"))?;
    io::write_signal(&record("signal.csv"), &f)?;

    let coeffs = mwgft_analyze(&basis, &family, &f).map_err(|e| e.at("analysis"))?;
    if basis.len() <= COEFFICIENT_DUMP_LIMIT || config.output.force_coefficients {
        io::write_coefficients(&record("coefficients.csv"), &coeffs)?;
    }

    let sg = spectrogram(&coeffs);
    for (j, m) in sg.per_window.iter().enumerate() {
        io::write_spectrogram(&record(&format!("spectrogram_window_{}.csv", j + 1)), m)?;
    }
    io::write_spectrogram(&record("spectrogram_averaged.csv"), &sg.averaged)?;
    if config.output.pgm {
        io::write_pgm(&record("spectrogram_averaged.pgm"), &sg.averaged)?;
    }
    let (peak_vertex, peak_mode) = sg.argmax();

    let rec = mwgft_synthesize(&basis, &family, &coeffs).map_err(|e| e.at("synthesis"))?;
    io::write_signal(&record("reconstructed.csv"), &rec)?;
    io::write_pointwise_error(&record("pointwise_error.csv"), &f, &rec)?;

    let relative_error = relative_error(&f, &rec);
    let max_pointwise_error = f
        .iter()
        .zip(rec.iter())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    files.push("summary.toml".into());
    let summary = ExperimentReport {
        name: config.name.clone(),
        vertices: basis.len(),
        edges: graph.num_edges(),
        laplacian: config.laplacian,
        windows: family.len(),
        lambda_max: basis.lambda_max(),
        relative_error,
        max_pointwise_error,
        min_abs_denominator: report.min_abs,
        min_denominator_vertex: report.argmin + 1,
        nondegeneracy_satisfied: report.satisfied,
        sufficient_condition_guarantee: report.sufficient.guarantees_nondegeneracy(),
        spectrogram_peak_vertex: peak_vertex + 1,
        spectrogram_peak_mode: peak_mode,
        reconstruction_tolerance: config.tolerances.reconstruction,
        passed: relative_error <= config.tolerances.reconstruction,
        basis_fingerprint: basis.fingerprint(),
        files,
    };
    let text = toml::to_string(&summary).map_err(|e| Error::Config(e.to_string()))?;
    let summary_path = out_dir.join("summary.toml");
    fs::write(&summary_path, text).map_err(|e| Error::io(&summary_path, e))?;
    log::info!(
        "{}: relative error {:e}, min |d| {:e}, total {:.2?}",
        config.name,
        relative_error,
        report.min_abs,
        start.elapsed()
    );
    Ok(summary)
}
