//! End-to-end inverse pipeline: fit the Weyl slope, project fluctuations onto
//! trial lengths, and pick the peak pair (or triple) whose implied sides
//! reproduce the estimated area (or volume).
//!
//! The selection step is what makes the pipeline self-consistent: peaks alone
//! say "some orbit has length L", but only the combination test
//! `(L₁/2)(L₂/2) ≈ Â` singles out the two fundamental bounce orbits `2a`, `2b`
//! among diagonals and repetitions.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::lengthspec::{
    apply_window, evaluate_length_spectrum, find_peaks, GridError, LengthGrid, LengthSpectrum,
    Peak, WindowKind,
};
use crate::math;
use crate::spectrum::{Dim, SpectrumSample, MIN_SPECTRUM_LEN};
use crate::weyl::{estimate_measure, fit_weyl_slope, fluctuations, FitError, SmoothModel, WeylFit};

/// Fraction of the spectrum head excluded from the Weyl fit by default. The
/// first fifth of realistic samples is dominated by pre-asymptotic curvature.
pub const DEFAULT_FIT_START_FRACTION: f64 = 0.2;
/// Default lower edge of the automatic trial-length grid; fundamental orbits
/// of any plausibly scaled domain sit well above it.
pub const DEFAULT_GRID_L_MIN: f64 = 0.25;
/// Default number of grid points.
pub const DEFAULT_GRID_STEPS: usize = 4096;
/// Default peak-prominence threshold (fraction of the global power maximum)
/// for rectangle spectra.
pub const DEFAULT_MIN_PROMINENCE_2D: f64 = 0.05;
/// Default prominence threshold for box spectra. The third dimension spreads
/// power over many more orbits, so the longest-side peak is relatively weak
/// and needs a lower gate.
pub const DEFAULT_MIN_PROMINENCE_3D: f64 = 0.01;
/// Default cap on peaks considered by the selector.
pub const DEFAULT_MAX_PEAKS: usize = 16;
/// Default relative mismatch between the combined peak product and the
/// estimated measure beyond which the selection is reported ambiguous.
pub const DEFAULT_PAIR_TOLERANCE: f64 = 0.1;

/// Two candidate scores closer than this are a tie, broken by power then by
/// shortness.
const SCORE_TIE_EPS: f64 = 1e-9;
/// Automatic grids run out to this multiple of √measure, which covers the
/// longest side of any rectangle with aspect ratio up to 1:16.
const AUTO_L_MAX_FACTOR: f64 = 4.0;

/// How the trial-length grid is chosen: sized from the estimated measure, or
/// pinned explicitly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GridSpec {
    Auto { l_min: f64, steps: usize },
    Explicit(LengthGrid),
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec::Auto {
            l_min: DEFAULT_GRID_L_MIN,
            steps: DEFAULT_GRID_STEPS,
        }
    }
}

/// Concrete grid for a measure estimate: automatic grids span
/// `[l_min, 4√measure]` so the `2b` (or `2c`) peak of any moderate aspect
/// ratio is in range.
pub fn resolve_grid(spec: &GridSpec, measure: f64) -> Result<LengthGrid, GridError> {
    match *spec {
        GridSpec::Auto { l_min, steps } => {
            LengthGrid::new(l_min, AUTO_L_MAX_FACTOR * math::sqrt(measure), steps)
        }
        GridSpec::Explicit(grid) => Ok(grid),
    }
}

/// Tunable knobs of the inverse pipeline, preloaded with defaults that hold
/// across the tested geometry range.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReconstructionConfig {
    pub fit_start_fraction: f64,
    pub smooth_model: SmoothModel,
    pub window: WindowKind,
    pub grid: GridSpec,
    pub min_prominence: f64,
    pub max_peaks: usize,
    pub pair_tolerance: f64,
}

impl ReconstructionConfig {
    /// Defaults for the given dimension; only the prominence gate differs.
    pub fn for_dim(dim: Dim) -> Self {
        Self {
            fit_start_fraction: DEFAULT_FIT_START_FRACTION,
            smooth_model: SmoothModel::ThreeTerm,
            window: WindowKind::Hann,
            grid: GridSpec::default(),
            min_prominence: match dim {
                Dim::Two => DEFAULT_MIN_PROMINENCE_2D,
                Dim::Three => DEFAULT_MIN_PROMINENCE_3D,
            },
            max_peaks: DEFAULT_MAX_PEAKS,
            pair_tolerance: DEFAULT_PAIR_TOLERANCE,
        }
    }
}

impl Default for ReconstructionConfig {
    fn default() -> Self {
        Self::for_dim(Dim::Two)
    }
}

/// Winning peak pair, ordered `l_short ≤ l_long`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairSelection {
    pub l_short: f64,
    pub l_long: f64,
    pub score: f64,
}

/// Winning peak triple, lengths ascending.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TripleSelection {
    pub lengths: [f64; 3],
    pub score: f64,
}

/// A scored combination, reported when no combination clears the tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub lengths: Vec<f64>,
    pub score: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SelectionError {
    NoPeaks,
    Ambiguous {
        best_score: f64,
        tolerance: f64,
        candidates: Vec<Candidate>,
    },
}

impl fmt::Display for SelectionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SelectionError::NoPeaks => write!(f, "no peaks available for side selection"),
            SelectionError::Ambiguous {
                best_score,
                tolerance,
                ..
            } => write!(
                f,
                "no combination matched the measure within tolerance {tolerance} \
                 (best relative mismatch {best_score:.6})"
            ),
        }
    }
}

impl core::error::Error for SelectionError {}

struct Scored {
    lengths: Vec<f64>,
    score: f64,
    combined_power: f64,
}

/// `a` strictly preferable to `b`: smaller score; on a near-tie the pairing
/// backed by more spectral power, and failing that the shorter short side.
fn better(a: &Scored, b: &Scored) -> bool {
    let d = a.score - b.score;
    if math::abs(d) > SCORE_TIE_EPS {
        return d < 0.0;
    }
    if a.combined_power != b.combined_power {
        return a.combined_power > b.combined_power;
    }
    for (la, lb) in a.lengths.iter().zip(&b.lengths) {
        if la != lb {
            return la < lb;
        }
    }
    false
}

fn pick(mut scored: Vec<Scored>, tolerance: f64) -> Result<Scored, SelectionError> {
    debug_assert!(!scored.is_empty());
    let mut best = 0;
    for i in 1..scored.len() {
        if better(&scored[i], &scored[best]) {
            best = i;
        }
    }
    if scored[best].score > tolerance {
        // Deterministic candidate ranking for the report: score, then power,
        // then lengths — a plain lexicographic order, no tie epsilon.
        scored.sort_by(|a, b| {
            a.score
                .total_cmp(&b.score)
                .then(b.combined_power.total_cmp(&a.combined_power))
                .then_with(|| {
                    for (la, lb) in a.lengths.iter().zip(&b.lengths) {
                        let c = la.total_cmp(lb);
                        if c != core::cmp::Ordering::Equal {
                            return c;
                        }
                    }
                    core::cmp::Ordering::Equal
                })
        });
        let best_score = scored[0].score;
        return Err(SelectionError::Ambiguous {
            best_score,
            tolerance,
            candidates: scored
                .into_iter()
                .take(3)
                .map(|s| Candidate {
                    lengths: s.lengths,
                    score: s.score,
                })
                .collect(),
        });
    }
    Ok(scored.swap_remove(best))
}

/// Choose the peak pair whose product best matches the area estimate:
/// `score = |L₁L₂/4 − Â| / Â` over all unordered pairs, self-pairs included
/// (a square's two sides share one peak). Errors as ambiguous when even the
/// best score exceeds `tolerance`, carrying the top three candidates.
pub fn select_side_pair(
    peaks: &[Peak],
    measure_hat: f64,
    tolerance: f64,
) -> Result<PairSelection, SelectionError> {
    if peaks.is_empty() {
        return Err(SelectionError::NoPeaks);
    }
    let mut scored = Vec::with_capacity(peaks.len() * (peaks.len() + 1) / 2);
    for (i, pi) in peaks.iter().enumerate() {
        for pj in &peaks[i..] {
            let (l1, l2) = if pi.location <= pj.location {
                (pi.location, pj.location)
            } else {
                (pj.location, pi.location)
            };
            let score = math::abs(l1 * l2 / 4.0 - measure_hat) / measure_hat;
            scored.push(Scored {
                lengths: alloc::vec![l1, l2],
                score,
                combined_power: pi.power + pj.power,
            });
        }
    }
    let winner = pick(scored, tolerance)?;
    Ok(PairSelection {
        l_short: winner.lengths[0],
        l_long: winner.lengths[1],
        score: winner.score,
    })
}

/// Box analogue of [`select_side_pair`]: unordered triples with repetition,
/// scored by `|L₁L₂L₃/8 − V̂| / V̂`.
pub fn select_side_triple(
    peaks: &[Peak],
    measure_hat: f64,
    tolerance: f64,
) -> Result<TripleSelection, SelectionError> {
    if peaks.is_empty() {
        return Err(SelectionError::NoPeaks);
    }
    let mut scored = Vec::new();
    for (i, pi) in peaks.iter().enumerate() {
        for (dj, pj) in peaks[i..].iter().enumerate() {
            for pk in &peaks[i + dj..] {
                let mut lengths = [pi.location, pj.location, pk.location];
                lengths.sort_unstable_by(f64::total_cmp);
                let product = lengths[0] * lengths[1] * lengths[2];
                let score = math::abs(product / 8.0 - measure_hat) / measure_hat;
                scored.push(Scored {
                    lengths: lengths.to_vec(),
                    score,
                    combined_power: pi.power + pj.power + pk.power,
                });
            }
        }
    }
    let winner = pick(scored, tolerance)?;
    Ok(TripleSelection {
        lengths: [winner.lengths[0], winner.lengths[1], winner.lengths[2]],
        score: winner.score,
    })
}

/// Full result of a reconstruction, including the diagnostics needed to
/// render or audit it.
#[derive(Clone, Debug)]
pub struct ReconstructionReport {
    /// Shortest recovered side.
    pub a_hat: f64,
    /// Next side, `a_hat ≤ b_hat`.
    pub b_hat: f64,
    /// Longest box side; `None` for rectangles.
    pub c_hat: Option<f64>,
    /// Area (2-D) or volume (3-D) from the Weyl slope.
    pub measure_hat: f64,
    /// Shortest over longest side.
    pub aspect_ratio: f64,
    /// Relative measure mismatch of the winning combination.
    pub pair_score: f64,
    /// Detected peaks, power-descending.
    pub peaks: Vec<Peak>,
    /// The underlying smooth-model fit.
    pub fit: WeylFit,
    /// Non-fatal observations (degenerate pairs, truncated peak lists, …).
    pub warnings: Vec<String>,
    /// The evaluated power curve, for plotting or export.
    pub spectrum: LengthSpectrum,
}

/// Everything known at the point a selection came back ambiguous.
#[derive(Clone, Debug)]
pub struct AmbiguousReconstruction {
    pub candidates: Vec<Candidate>,
    pub best_score: f64,
    pub tolerance: f64,
    pub measure_hat: f64,
    pub fit: WeylFit,
    pub peaks: Vec<Peak>,
    pub warnings: Vec<String>,
    pub spectrum: LengthSpectrum,
}

#[derive(Debug)]
pub enum ReconstructError {
    WrongDim { expected: Dim, got: Dim },
    TooFewValues { found: usize },
    Fit(FitError),
    Grid(GridError),
    NoPeaks { threshold_fraction: f64 },
    Ambiguous(Box<AmbiguousReconstruction>),
}

impl fmt::Display for ReconstructError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReconstructError::WrongDim { expected, got } => write!(
                f,
                "input stage: sample is marked {got}-dimensional but this \
                 reconstruction expects {expected}-dimensional input"
            ),
            ReconstructError::TooFewValues { found } => write!(
                f,
                "input stage: fewer than {MIN_SPECTRUM_LEN} eigenvalues in input \
                 (found {found}); the fit would be meaningless"
            ),
            ReconstructError::Fit(e) => write!(f, "weyl-fit stage: {e}"),
            ReconstructError::Grid(e) => write!(f, "grid stage: {e}"),
            ReconstructError::NoPeaks { threshold_fraction } => write!(
                f,
                "peak stage: no peak cleared the prominence gate \
                 ({threshold_fraction} of the power maximum); lower the gate or \
                 supply more eigenvalues"
            ),
            ReconstructError::Ambiguous(a) => write!(
                f,
                "selection stage: no peak combination matched the measure within \
                 tolerance {} (best relative mismatch {:.6})",
                a.tolerance, a.best_score
            ),
        }
    }
}

impl core::error::Error for ReconstructError {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        match self {
            ReconstructError::Fit(e) => Some(e),
            ReconstructError::Grid(e) => Some(e),
            _ => None,
        }
    }
}

struct Pipeline {
    fit: WeylFit,
    measure_hat: f64,
    peaks: Vec<Peak>,
    spectrum: LengthSpectrum,
    warnings: Vec<String>,
}

fn run_pipeline(
    sample: &SpectrumSample,
    config: &ReconstructionConfig,
) -> Result<Pipeline, ReconstructError> {
    if sample.len() < MIN_SPECTRUM_LEN {
        return Err(ReconstructError::TooFewValues {
            found: sample.len(),
        });
    }
    let fit = fit_weyl_slope(sample, config.fit_start_fraction, config.smooth_model)
        .map_err(ReconstructError::Fit)?;
    let measure_hat = estimate_measure(&fit);
    let grid = resolve_grid(&config.grid, measure_hat).map_err(ReconstructError::Grid)?;

    let series = apply_window(fluctuations(sample, &fit), config.window);
    let spectrum = evaluate_length_spectrum(&series, grid);

    let mut warnings = Vec::new();
    let mut peaks = find_peaks(&spectrum, config.min_prominence, usize::MAX);
    if peaks.is_empty() {
        return Err(ReconstructError::NoPeaks {
            threshold_fraction: config.min_prominence,
        });
    }
    if peaks.len() > config.max_peaks {
        warnings.push(format!(
            "peak list truncated to the {} strongest of {} detected peaks",
            config.max_peaks,
            peaks.len()
        ));
        peaks.truncate(config.max_peaks);
    }

    Ok(Pipeline {
        fit,
        measure_hat,
        peaks,
        spectrum,
        warnings,
    })
}

fn ambiguous(
    p: Pipeline,
    best_score: f64,
    tolerance: f64,
    candidates: Vec<Candidate>,
) -> ReconstructError {
    ReconstructError::Ambiguous(Box::new(AmbiguousReconstruction {
        candidates,
        best_score,
        tolerance,
        measure_hat: p.measure_hat,
        fit: p.fit,
        peaks: p.peaks,
        warnings: p.warnings,
        spectrum: p.spectrum,
    }))
}

/// Recover rectangle sides from an eigenvalue sample. The sides come back
/// sorted (`a_hat ≤ b_hat`); the sample's index offset, if any, is absorbed
/// by the fit and never consulted.
pub fn reconstruct_rectangle(
    sample: &SpectrumSample,
    config: &ReconstructionConfig,
) -> Result<ReconstructionReport, ReconstructError> {
    if sample.dim() != Dim::Two {
        return Err(ReconstructError::WrongDim {
            expected: Dim::Two,
            got: sample.dim(),
        });
    }
    let mut p = run_pipeline(sample, config)?;
    let selection = match select_side_pair(&p.peaks, p.measure_hat, config.pair_tolerance) {
        Ok(s) => s,
        Err(SelectionError::NoPeaks) => {
            return Err(ReconstructError::NoPeaks {
                threshold_fraction: config.min_prominence,
            })
        }
        Err(SelectionError::Ambiguous {
            best_score,
            tolerance,
            candidates,
        }) => return Err(ambiguous(p, best_score, tolerance, candidates)),
    };
    if selection.l_short.to_bits() == selection.l_long.to_bits() {
        p.warnings.push(String::from(
            "degenerate pair: one peak supplied both sides (square-like geometry)",
        ));
    }
    let a_hat = selection.l_short / 2.0;
    let b_hat = selection.l_long / 2.0;
    Ok(ReconstructionReport {
        a_hat,
        b_hat,
        c_hat: None,
        measure_hat: p.measure_hat,
        aspect_ratio: a_hat / b_hat,
        pair_score: selection.score,
        peaks: p.peaks,
        fit: p.fit,
        warnings: p.warnings,
        spectrum: p.spectrum,
    })
}

/// Box analogue of [`reconstruct_rectangle`]: three sides from a peak triple
/// matched against the volume estimate.
pub fn reconstruct_box(
    sample: &SpectrumSample,
    config: &ReconstructionConfig,
) -> Result<ReconstructionReport, ReconstructError> {
    if sample.dim() != Dim::Three {
        return Err(ReconstructError::WrongDim {
            expected: Dim::Three,
            got: sample.dim(),
        });
    }
    let mut p = run_pipeline(sample, config)?;
    let selection = match select_side_triple(&p.peaks, p.measure_hat, config.pair_tolerance) {
        Ok(s) => s,
        Err(SelectionError::NoPeaks) => {
            return Err(ReconstructError::NoPeaks {
                threshold_fraction: config.min_prominence,
            })
        }
        Err(SelectionError::Ambiguous {
            best_score,
            tolerance,
            candidates,
        }) => return Err(ambiguous(p, best_score, tolerance, candidates)),
    };
    let [l1, l2, l3] = selection.lengths;
    if l1.to_bits() == l2.to_bits() || l2.to_bits() == l3.to_bits() {
        p.warnings.push(String::from(
            "degenerate triple: one peak supplied multiple sides (cube-like geometry)",
        ));
    }
    let a_hat = l1 / 2.0;
    let b_hat = l2 / 2.0;
    let c_hat = l3 / 2.0;
    Ok(ReconstructionReport {
        a_hat,
        b_hat,
        c_hat: Some(c_hat),
        measure_hat: p.measure_hat,
        aspect_ratio: a_hat / c_hat,
        pair_score: selection.score,
        peaks: p.peaks,
        fit: p.fit,
        warnings: p.warnings,
        spectrum: p.spectrum,
    })
}
