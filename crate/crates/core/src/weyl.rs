//! Weyl-law machinery: the spectral counting function, least-squares slope
//! fits against smooth counting models, measure recovery, and the fluctuation
//! series that feeds the length-spectrum analysis.
//!
//! The slope fit regresses the raw count `k` on a smooth model of `λ_k`. For
//! an index-offset sample the count axis shifts by an unknown constant, which
//! lands entirely in the intercept and leaves the slope — and hence the
//! recovered area/volume — untouched. That offset-invariance carries through
//! to the fluctuations up to an additive constant, which the oscillatory
//! analysis downstream does not see.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use crate::math;
use crate::spectrum::{Dim, SpectrumSample};

/// Minimum number of points the slope fit will accept after discarding the
/// pre-asymptotic head.
pub const MIN_FIT_POINTS: usize = 8;

/// Smooth counting models fit to `N(λ)`.
///
/// `Linear` is the leading Weyl term plus a constant; `ThreeTerm` adds the
/// boundary-correction shape (`√λ` in 2-D; `λ` and `√λ` in 3-D), which soaks
/// up the perimeter/surface bias and sharpens both the slope and the
/// fluctuation series on realistic sample sizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SmoothModel {
    Linear,
    ThreeTerm,
}

impl SmoothModel {
    pub fn name(self) -> &'static str {
        match self {
            SmoothModel::Linear => "linear",
            SmoothModel::ThreeTerm => "three_term",
        }
    }
}

impl fmt::Display for SmoothModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Number of eigenvalues less than or equal to `lambda` (duplicates counted
/// with multiplicity), by binary search on the sorted sample.
pub fn counting_at(sample: &SpectrumSample, lambda: f64) -> usize {
    sample.values().partition_point(|&v| v <= lambda)
}

/// Result of a smooth-model fit to the counting staircase.
#[derive(Clone, Debug, PartialEq)]
pub struct WeylFit {
    slope: f64,
    intercept: f64,
    fit_start_fraction: f64,
    residual_rms: f64,
    dim: Dim,
    model: SmoothModel,
    coefficients: Vec<f64>,
}

impl WeylFit {
    /// Coefficient of the leading Weyl regressor (`λ` in 2-D, `λ^{3/2}` in 3-D).
    pub fn slope(&self) -> f64 {
        self.slope
    }

    /// Coefficient of the constant regressor; absorbs any index offset.
    pub fn intercept(&self) -> f64 {
        self.intercept
    }

    pub fn fit_start_fraction(&self) -> f64 {
        self.fit_start_fraction
    }

    /// Root-mean-square residual of the fit over the fitted tail.
    pub fn residual_rms(&self) -> f64 {
        self.residual_rms
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn model(&self) -> SmoothModel {
        self.model
    }

    /// All fitted coefficients, ordered as the model's basis.
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// The fitted smooth counting function evaluated at `lambda`.
    pub fn n_smooth(&self, lambda: f64) -> f64 {
        let mut basis = [0.0; 4];
        let p = basis_into(self.dim, self.model, lambda, &mut basis);
        let mut acc = 0.0;
        for (c, b) in self.coefficients.iter().zip(&basis[..p]) {
            acc += c * b;
        }
        acc
    }
}

/// Fill `out` with the model's regressors at `lambda`; returns how many are
/// used. The leading Weyl regressor always comes first and the constant last.
fn basis_into(dim: Dim, model: SmoothModel, lambda: f64, out: &mut [f64; 4]) -> usize {
    let root = math::sqrt(lambda);
    match (dim, model) {
        (Dim::Two, SmoothModel::Linear) => {
            out[0] = lambda;
            out[1] = 1.0;
            2
        }
        (Dim::Two, SmoothModel::ThreeTerm) => {
            out[0] = lambda;
            out[1] = root;
            out[2] = 1.0;
            3
        }
        (Dim::Three, SmoothModel::Linear) => {
            out[0] = lambda * root;
            out[1] = 1.0;
            2
        }
        (Dim::Three, SmoothModel::ThreeTerm) => {
            out[0] = lambda * root;
            out[1] = lambda;
            out[2] = root;
            out[3] = 1.0;
            4
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FitError {
    InvalidFraction { fraction: f64 },
    TooFewPoints { available: usize, needed: usize },
    DegenerateDesign,
    NonPositiveSlope { slope: f64 },
}

impl fmt::Display for FitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FitError::InvalidFraction { fraction } => {
                write!(
                    f,
                    "fit start fraction must lie strictly in (0, 1), got {fraction}"
                )
            }
            FitError::TooFewPoints { available, needed } => write!(
                f,
                "fit tail has {available} points but at least {needed} are required"
            ),
            FitError::DegenerateDesign => {
                write!(
                    f,
                    "design matrix is numerically singular; spectrum lacks spread"
                )
            }
            FitError::NonPositiveSlope { slope } => write!(
                f,
                "fitted Weyl slope {slope} is not positive; input is not a plausible spectrum"
            ),
        }
    }
}

impl core::error::Error for FitError {}

/// Least-squares fit of the counting staircase `(λ_k, k)` for
/// `k = start+1 ..= K`, where `start = ⌊fraction·K⌋` discards the
/// pre-asymptotic head. The count axis uses the sample-local index, so a
/// truncated spectrum simply shifts the intercept.
pub fn fit_weyl_slope(
    sample: &SpectrumSample,
    fit_start_fraction: f64,
    model: SmoothModel,
) -> Result<WeylFit, FitError> {
    if !(fit_start_fraction > 0.0 && fit_start_fraction < 1.0) {
        return Err(FitError::InvalidFraction {
            fraction: fit_start_fraction,
        });
    }
    let values = sample.values();
    let k_total = values.len();
    let start = math::floor(fit_start_fraction * k_total as f64) as usize;
    let n = k_total - start;
    if n < MIN_FIT_POINTS {
        return Err(FitError::TooFewPoints {
            available: n,
            needed: MIN_FIT_POINTS,
        });
    }

    let mut basis = [0.0; 4];
    let p = basis_into(sample.dim(), model, values[start], &mut basis);
    let mut cols: Vec<Vec<f64>> = vec![Vec::with_capacity(n); p];
    let mut rhs = Vec::with_capacity(n);
    for (i, &lambda) in values[start..].iter().enumerate() {
        basis_into(sample.dim(), model, lambda, &mut basis);
        for (col, &b) in cols.iter_mut().zip(&basis[..p]) {
            col.push(b);
        }
        rhs.push((start + i + 1) as f64);
    }
    let col_refs: Vec<&[f64]> = cols.iter().map(Vec::as_slice).collect();
    let coefficients = math::least_squares(&col_refs, &rhs).ok_or(FitError::DegenerateDesign)?;

    let slope = coefficients[0];
    let intercept = coefficients[p - 1];
    if !(slope.is_finite() && slope > 0.0) {
        return Err(FitError::NonPositiveSlope { slope });
    }

    let mut ss = 0.0;
    for (row, &y) in rhs.iter().enumerate() {
        let mut fitted = 0.0;
        for (c, col) in coefficients.iter().zip(&cols) {
            fitted += c * col[row];
        }
        let r = y - fitted;
        ss += r * r;
    }
    let residual_rms = math::sqrt(ss / n as f64);

    Ok(WeylFit {
        slope,
        intercept,
        fit_start_fraction,
        residual_rms,
        dim: sample.dim(),
        model,
        coefficients,
    })
}

/// Invert the leading Weyl coefficient into the geometric measure:
/// `area = 4π·slope` in 2-D, `volume = 6π²·slope` in 3-D.
pub fn estimate_measure(fit: &WeylFit) -> f64 {
    match fit.dim() {
        Dim::Two => 4.0 * PI * fit.slope,
        Dim::Three => 6.0 * PI * PI * fit.slope,
    }
}

/// The oscillatory remainder of the counting function, sampled at the
/// eigenvalues and re-parameterized by `√λ` (the natural conjugate variable
/// of geometric lengths), with per-point weights for windowing.
#[derive(Clone, Debug, PartialEq)]
pub struct FluctuationSeries {
    pub(crate) sqrt_values: Vec<f64>,
    pub(crate) fluct: Vec<f64>,
    pub(crate) weights: Vec<f64>,
}

impl FluctuationSeries {
    /// Build a series from raw `√λ` abscissas and fluctuation values; weights
    /// start uniform. Abscissas must be finite, positive, and nondecreasing.
    pub fn new(sqrt_values: Vec<f64>, fluct: Vec<f64>) -> Result<Self, SeriesError> {
        if sqrt_values.is_empty() {
            return Err(SeriesError::Empty);
        }
        if sqrt_values.len() != fluct.len() {
            return Err(SeriesError::LengthMismatch {
                abscissas: sqrt_values.len(),
                values: fluct.len(),
            });
        }
        for (i, &x) in sqrt_values.iter().enumerate() {
            if !x.is_finite() {
                return Err(SeriesError::NonFinite { index: i });
            }
            if x <= 0.0 {
                return Err(SeriesError::NonPositiveAbscissa { index: i });
            }
            if i > 0 && x < sqrt_values[i - 1] {
                return Err(SeriesError::DecreasingAbscissa { index: i });
            }
        }
        for (i, &v) in fluct.iter().enumerate() {
            if !v.is_finite() {
                return Err(SeriesError::NonFinite { index: i });
            }
        }
        let weights = vec![1.0; sqrt_values.len()];
        Ok(Self {
            sqrt_values,
            fluct,
            weights,
        })
    }

    pub fn len(&self) -> usize {
        self.sqrt_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sqrt_values.is_empty()
    }

    pub fn sqrt_values(&self) -> &[f64] {
        &self.sqrt_values
    }

    pub fn fluct(&self) -> &[f64] {
        &self.fluct
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesError {
    Empty,
    LengthMismatch { abscissas: usize, values: usize },
    NonFinite { index: usize },
    NonPositiveAbscissa { index: usize },
    DecreasingAbscissa { index: usize },
}

impl fmt::Display for SeriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesError::Empty => write!(f, "fluctuation series is empty"),
            SeriesError::LengthMismatch { abscissas, values } => {
                write!(f, "abscissa/value length mismatch: {abscissas} vs {values}")
            }
            SeriesError::NonFinite { index } => {
                write!(f, "series entry at index {index} is not finite")
            }
            SeriesError::NonPositiveAbscissa { index } => {
                write!(f, "abscissa at index {index} is not positive")
            }
            SeriesError::DecreasingAbscissa { index } => {
                write!(
                    f,
                    "abscissas must be nondecreasing (violated at index {index})"
                )
            }
        }
    }
}

impl core::error::Error for SeriesError {}

/// Fluctuation of the observed count around the fitted smooth model:
/// `F_k = k − N_smooth(λ_k)` with the sample-local count `k = i+1`.
pub fn fluctuations(sample: &SpectrumSample, fit: &WeylFit) -> FluctuationSeries {
    let values = sample.values();
    let mut sqrt_values = Vec::with_capacity(values.len());
    let mut fluct = Vec::with_capacity(values.len());
    for (i, &lambda) in values.iter().enumerate() {
        sqrt_values.push(math::sqrt(lambda));
        fluct.push((i + 1) as f64 - fit.n_smooth(lambda));
    }
    let weights = vec![1.0; values.len()];
    FluctuationSeries {
        sqrt_values,
        fluct,
        weights,
    }
}
