//! Spectral window families and the conditions that make multi-window
//! reconstruction well defined.
//!
//! A window is a multiplier sampled on the Laplacian eigenvalues. Families
//! pair analysis windows `g_j` with synthesis windows `gamma_j`; exact
//! reconstruction needs the per-vertex denominator
//! `d(n) = sum_j <T_n gamma_j, T_n g_j>` to be nonzero everywhere.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::LaplacianKind;
use crate::operators::{Complex64, Spectrum};
use crate::spectral::SpectralBasis;

/// Families whose energy response dips to this level are rejected.
pub const COVERAGE_FLOOR: f64 = 1e-12;

/// Where a window came from.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct WindowDesign {
    pub kernel: String,
    pub shift: Option<f64>,
    pub l_fac: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralWindow {
    pub samples: Spectrum,
    pub label: String,
    pub design: WindowDesign,
}

impl SpectralWindow {
    pub fn new(samples: Spectrum, label: impl Into<String>) -> Result<Self> {
        if samples
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InvalidParameter(
                "window samples must be finite".into(),
            ));
        }
        Ok(SpectralWindow {
            samples,
            label: label.into(),
            design: WindowDesign::default(),
        })
    }

    /// `g_hat ≡ value` on every eigenvalue.
    pub fn constant(n: usize, value: Complex64) -> Self {
        SpectralWindow {
            samples: Spectrum(vec![value; n]),
            label: "constant".into(),
            design: WindowDesign {
                kernel: "constant".into(),
                ..Default::default()
            },
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// How synthesis windows are derived from analysis windows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pairing {
    /// `gamma_j = g_j / m`, with `m` the energy response.
    NormalizedSynthesis,
    /// `gamma_j = g_j`.
    SameAsAnalysis,
}

/// `J` analysis windows paired by index with `J` synthesis windows.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowFamily {
    analysis: Vec<SpectralWindow>,
    synthesis: Vec<SpectralWindow>,
}

impl WindowFamily {
    pub fn new(analysis: Vec<SpectralWindow>, synthesis: Vec<SpectralWindow>) -> Result<Self> {
        if analysis.is_empty() {
            return Err(Error::InvalidParameter("window family is empty".into()));
        }
        if analysis.len() != synthesis.len() {
            return Err(Error::InvalidParameter(format!(
                "{} analysis windows but {} synthesis windows",
                analysis.len(),
                synthesis.len()
            )));
        }
        let n = analysis[0].len();
        for w in analysis.iter().chain(&synthesis) {
            if w.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: w.len(),
                });
            }
        }
        Ok(WindowFamily {
            analysis,
            synthesis,
        })
    }

    pub fn paired(analysis: Vec<SpectralWindow>, pairing: Pairing) -> Result<Self> {
        let synthesis = match pairing {
            Pairing::NormalizedSynthesis => synthesis_family(&analysis)?,
            Pairing::SameAsAnalysis => analysis.clone(),
        };
        Self::new(analysis, synthesis)
    }

    /// Single-window family `(g, gamma)`.
    pub fn single(g: SpectralWindow, gamma: SpectralWindow) -> Result<Self> {
        Self::new(vec![g], vec![gamma])
    }

    pub fn len(&self) -> usize {
        self.analysis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.analysis.is_empty()
    }

    /// Signal length the windows are sampled for.
    pub fn signal_len(&self) -> usize {
        self.analysis[0].len()
    }

    pub fn analysis(&self) -> &[SpectralWindow] {
        &self.analysis
    }

    pub fn synthesis(&self) -> &[SpectralWindow] {
        &self.synthesis
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&SpectralWindow, &SpectralWindow)> {
        self.analysis.iter().zip(&self.synthesis)
    }
}

/// Quartic radial kernel `exp(-(lambda / (l_fac lambda_max))^4)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RbfKernel {
    scale: f64,
    l_fac: f64,
}

impl RbfKernel {
    pub fn eval(&self, lambda: f64) -> f64 {
        let x = lambda / self.scale;
        (-(x * x) * (x * x)).exp()
    }

    pub fn l_fac(&self) -> f64 {
        self.l_fac
    }
}

pub fn rbf_prototype(lambda_max: f64, l_fac: f64) -> Result<RbfKernel> {
    if !(lambda_max > 0.0 && lambda_max.is_finite()) || !(l_fac > 0.0 && l_fac.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "rbf kernel needs lambda_max > 0 and l_fac > 0 (got {lambda_max}, {l_fac})"
        )));
    }
    Ok(RbfKernel {
        scale: l_fac * lambda_max,
        l_fac,
    })
}

/// `K` shifts spread uniformly over `[0, lambda_max]`; a single window sits at 0.
pub fn uniform_shifts(count: usize, lambda_max: f64) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..count)
            .map(|k| k as f64 * lambda_max / (count - 1) as f64)
            .collect(),
    }
}

/// Samples `prototype(lambda_l - tau_k)` on the basis eigenvalues for every shift.
pub fn shifted_family(
    prototype: &RbfKernel,
    shifts: &[f64],
    basis: &SpectralBasis,
) -> Vec<SpectralWindow> {
    shifts
        .iter()
        .enumerate()
        .map(|(k, &tau)| SpectralWindow {
            samples: Spectrum::from_real(
                basis.eigenvalues().iter().map(|&l| prototype.eval(l - tau)),
            ),
            label: format!("g{}", k + 1),
            design: WindowDesign {
                kernel: "rbf".into(),
                shift: Some(tau),
                l_fac: Some(prototype.l_fac()),
            },
        })
        .collect()
}

/// `m(lambda_l) = sum_k |g_k(lambda_l)|^2`.
pub fn energy_response(windows: &[SpectralWindow]) -> Result<Vec<f64>> {
    let first = windows
        .first()
        .ok_or_else(|| Error::InvalidParameter("window family is empty".into()))?;
    let mut m = vec![0.0; first.len()];
    for w in windows {
        if w.len() != m.len() {
            return Err(Error::DimensionMismatch {
                expected: m.len(),
                actual: w.len(),
            });
        }
        for (acc, z) in m.iter_mut().zip(w.samples.iter()) {
            *acc += z.norm_sqr();
        }
    }
    let min = m.iter().copied().fold(f64::INFINITY, f64::min);
    if min.is_nan() || min <= COVERAGE_FLOOR {
        return Err(Error::DegenerateCoverage(min));
    }
    Ok(m)
}

/// Synthesis windows `gamma_k = g_k / m`, so that
/// `sum_k gamma_k conj(g_k) = 1` at every eigenvalue.
pub fn synthesis_family(analysis: &[SpectralWindow]) -> Result<Vec<SpectralWindow>> {
    let m = energy_response(analysis)?;
    Ok(analysis
        .iter()
        .enumerate()
        .map(|(k, w)| SpectralWindow {
            samples: w.samples.iter().zip(&m).map(|(z, &e)| z / e).collect(),
            label: format!("gamma{}", k + 1),
            design: w.design.clone(),
        })
        .collect())
}

/// Per-vertex denominators `d(n) = sum_j <T_n gamma_j, T_n g_j>`.
///
/// Uses `d = N (U ∘ U) w` with `w(l) = sum_j gamma_j(l) conj(g_j(l))`, which is
/// the translation inner product formula summed over windows.
pub fn denominators(basis: &SpectralBasis, family: &WindowFamily) -> Result<Vec<Complex64>> {
    basis.check_len(family.signal_len())?;
    let n = basis.len();
    let mut weights = DVector::<Complex64>::zeros(n);
    for (g, gamma) in family.pairs() {
        for l in 0..n {
            weights[l] += gamma.samples[l] * g.samples[l].conj();
        }
    }
    let squares = basis.eigenvectors().map(|x| Complex64::new(x * x, 0.0));
    let d = squares * weights;
    Ok(d.iter().map(|z| z * n as f64).collect())
}

/// Outcome of the non-degeneracy check.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub denominators: Vec<Complex64>,
    pub min_abs: f64,
    /// 0-based vertex where `|d(n)|` is smallest.
    pub argmin: usize,
    pub tolerance: f64,
    pub satisfied: bool,
    /// 0-based vertices with `|d(n)| <= tolerance`.
    pub failing_vertices: Vec<usize>,
    pub sufficient: SufficientConditions,
}

/// `1e-10 N max_j ||g_j|| ||gamma_j||`.
pub fn default_tolerance(basis: &SpectralBasis, family: &WindowFamily) -> f64 {
    let scale = family
        .pairs()
        .map(|(g, gamma)| g.samples.norm() * gamma.samples.norm())
        .fold(0.0, f64::max);
    1e-10 * basis.len() as f64 * scale
}

/// Evaluates every denominator and reports whether reconstruction is
/// possible. `tolerance` defaults to [`default_tolerance`].
pub fn check_nondegeneracy(
    basis: &SpectralBasis,
    family: &WindowFamily,
    tolerance: Option<f64>,
) -> Result<ConditionReport> {
    let denominators = denominators(basis, family)?;
    let tolerance = tolerance.unwrap_or_else(|| default_tolerance(basis, family));
    let (argmin, min_abs) = denominators.iter().map(|z| z.norm()).enumerate().fold(
        (0, f64::INFINITY),
        |best, (i, a)| if a < best.1 { (i, a) } else { best },
    );
    let failing_vertices: Vec<usize> = denominators
        .iter()
        .enumerate()
        .filter(|(_, z)| z.norm().is_nan() || z.norm() <= tolerance)
        .map(|(i, _)| i)
        .collect();
    Ok(ConditionReport {
        satisfied: failing_vertices.is_empty(),
        denominators,
        min_abs,
        argmin,
        tolerance,
        failing_vertices,
        sufficient: sufficient_conditions(basis, family)?,
    })
}

/// Two-window sufficient conditions for one `(g, gamma)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PairConditions {
    /// `Re(conj(g) gamma) >= 0` off the DC index and `> 0` at it.
    pub csuff1: bool,
    /// As `csuff1` with the signs reversed.
    pub csuff1a: bool,
    /// As `csuff1` on the imaginary part.
    pub csuff1b: bool,
    /// As `csuff1b` with the signs reversed.
    pub csuff1c: bool,
    /// `|g(0) + gamma(0)| > sqrt(N) mu ||g - gamma||`.
    pub csuff2: bool,
}

/// Literal evaluation of every sufficient condition on the sampled spectra.
#[derive(Debug, Clone, PartialEq)]
pub struct SufficientConditions {
    pub pairs: Vec<PairConditions>,
    /// Multi-window version of `csuff1`, summed over windows.
    pub csuff3: bool,
    /// `sum_j |g_j(0) + gamma_j(0)|^2 - N mu^2 ||g_j - gamma_j||^2 > 0`.
    pub csuff4: bool,
    /// Every pair meets the `csuff2` inequality non-strictly and one strictly.
    pub csuff5: bool,
    /// Whether the DC lower bound `|f_hat(0)| <= ||T_n f||` holds on this
    /// basis, which the `csuff2`/`csuff4`/`csuff5` guarantees rely on. True
    /// only for the unnormalized Laplacian, whose DC mode is constant.
    pub dc_bound_applies: bool,
}

impl SufficientConditions {
    /// True when some condition that provably implies non-degeneracy on
    /// this basis holds.
    pub fn guarantees_nondegeneracy(&self) -> bool {
        let single = self.pairs.len() == 1;
        let sign_variants = single
            && self
                .pairs
                .first()
                .is_some_and(|p| p.csuff1 || p.csuff1a || p.csuff1b || p.csuff1c);
        let norm_variants = self.dc_bound_applies
            && (self.csuff4 || self.csuff5 || (single && self.pairs[0].csuff2));
        self.csuff3 || sign_variants || norm_variants
    }
}

fn sign_condition(mut values: impl Iterator<Item = f64>, dc: f64, positive: bool) -> bool {
    if positive {
        dc > 0.0 && values.all(|v| v >= 0.0)
    } else {
        dc < 0.0 && values.all(|v| v <= 0.0)
    }
}

pub fn sufficient_conditions(
    basis: &SpectralBasis,
    family: &WindowFamily,
) -> Result<SufficientConditions> {
    basis.check_len(family.signal_len())?;
    let n = basis.len();
    let root_n_mu = (n as f64).sqrt() * basis.magnitudes().mu;

    let mut pairs = Vec::with_capacity(family.len());
    let mut summed_re = vec![0.0; n];
    let mut csuff4_sum = 0.0;
    let mut margins = Vec::with_capacity(family.len());
    for (g, gamma) in family.pairs() {
        let products: Vec<Complex64> = g
            .samples
            .iter()
            .zip(gamma.samples.iter())
            .map(|(a, b)| a.conj() * b)
            .collect();
        for (acc, p) in summed_re.iter_mut().zip(&products) {
            *acc += p.re;
        }
        let rest = &products[1..];
        let dc = products[0];
        let sum_dc = (g.samples[0] + gamma.samples[0]).norm();
        let diff = g.samples.distance(&gamma.samples);
        pairs.push(PairConditions {
            csuff1: sign_condition(rest.iter().map(|p| p.re), dc.re, true),
            csuff1a: sign_condition(rest.iter().map(|p| p.re), dc.re, false),
            csuff1b: sign_condition(rest.iter().map(|p| p.im), dc.im, true),
            csuff1c: sign_condition(rest.iter().map(|p| p.im), dc.im, false),
            csuff2: sum_dc > root_n_mu * diff,
        });
        csuff4_sum += sum_dc * sum_dc - root_n_mu * root_n_mu * diff * diff;
        margins.push((sum_dc, root_n_mu * diff));
    }

    let csuff3 = sign_condition(summed_re[1..].iter().copied(), summed_re[0], true);
    let csuff5 =
        margins.iter().all(|&(lhs, rhs)| lhs >= rhs) && margins.iter().any(|&(lhs, rhs)| lhs > rhs);
    Ok(SufficientConditions {
        pairs,
        csuff3,
        csuff4: csuff4_sum > 0.0,
        csuff5,
        dc_bound_applies: basis.kind() == LaplacianKind::Unnormalized,
    })
}
