//! Length-spectrum analysis: projects the counting-function fluctuations onto
//! trial lengths and finds the peaks that mark periodic-orbit lengths.
//!
//! The power at a trial length `L` is the squared magnitude of
//! `Σ_k w_k F_k e^{−i L √λ_k}` over the fluctuation series. Rectangles put
//! their shortest periodic orbits at `2a` and `2b` (one bounce between a pair
//! of parallel walls), so the two corresponding peaks recover the sides.
//!
//! Evaluation is a direct sum rather than an FFT: the abscissas `√λ_k` are
//! irregular, the grid is small (a few thousand points), and the direct sum
//! keeps a fixed accumulation order per grid point so results are
//! bit-reproducible across thread counts.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use crate::math;
use crate::spectrum::{BoxGeometry, RectangleGeometry};
use crate::weyl::FluctuationSeries;

/// Minimum number of grid points; coarser grids alias peaks badly enough that
/// refinement cannot rescue them.
pub const MIN_GRID_STEPS: usize = 64;

/// Uniform grid of trial lengths `L_j = l_min + j·Δ`, `Δ = (l_max−l_min)/(steps−1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LengthGrid {
    l_min: f64,
    l_max: f64,
    steps: usize,
}

impl LengthGrid {
    pub fn new(l_min: f64, l_max: f64, steps: usize) -> Result<Self, GridError> {
        if !(l_min.is_finite() && l_max.is_finite() && l_min > 0.0 && l_min < l_max) {
            return Err(GridError::InvalidRange { l_min, l_max });
        }
        if steps < MIN_GRID_STEPS {
            return Err(GridError::TooFewSteps {
                steps,
                min: MIN_GRID_STEPS,
            });
        }
        Ok(Self {
            l_min,
            l_max,
            steps,
        })
    }

    pub fn l_min(&self) -> f64 {
        self.l_min
    }

    pub fn l_max(&self) -> f64 {
        self.l_max
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn spacing(&self) -> f64 {
        (self.l_max - self.l_min) / (self.steps - 1) as f64
    }

    pub fn point(&self, j: usize) -> f64 {
        self.l_min + j as f64 * self.spacing()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.steps).map(|j| self.point(j)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GridError {
    InvalidRange { l_min: f64, l_max: f64 },
    TooFewSteps { steps: usize, min: usize },
}

impl fmt::Display for GridError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridError::InvalidRange { l_min, l_max } => write!(
                f,
                "length grid needs 0 < l_min < l_max, got [{l_min}, {l_max}]"
            ),
            GridError::TooFewSteps { steps, min } => {
                write!(f, "length grid needs at least {min} steps, got {steps}")
            }
        }
    }
}

impl core::error::Error for GridError {}

/// Taper applied to the fluctuation series before the length projection.
///
/// The Hann window suppresses the spectral leakage of the hard series
/// truncation, sharpening nearby peaks at the cost of a slightly wider main
/// lobe; rectangular leaves the series untouched.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WindowKind {
    Rectangular,
    Hann,
}

impl WindowKind {
    pub fn name(self) -> &'static str {
        match self {
            WindowKind::Rectangular => "rectangular",
            WindowKind::Hann => "hann",
        }
    }
}

impl fmt::Display for WindowKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Replace the series weights with the chosen window, indexed by sample
/// position: `w_i = ½(1 − cos(2πi/(K−1)))` for Hann (a single point gets
/// weight 1), all ones for rectangular.
pub fn apply_window(mut series: FluctuationSeries, kind: WindowKind) -> FluctuationSeries {
    let k = series.weights.len();
    match kind {
        WindowKind::Rectangular => {
            for w in &mut series.weights {
                *w = 1.0;
            }
        }
        WindowKind::Hann => {
            if k == 1 {
                series.weights[0] = 1.0;
            } else {
                let scale = 2.0 * PI / (k - 1) as f64;
                for (i, w) in series.weights.iter_mut().enumerate() {
                    *w = 0.5 * (1.0 - math::cos(scale * i as f64));
                }
            }
        }
    }
    series
}

/// Power of the length projection sampled on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct LengthSpectrum {
    grid: LengthGrid,
    power: Vec<f64>,
}

impl LengthSpectrum {
    pub fn grid(&self) -> &LengthGrid {
        &self.grid
    }

    pub fn power(&self) -> &[f64] {
        &self.power
    }

    pub fn max_power(&self) -> f64 {
        let mut m = 0.0;
        for &p in &self.power {
            if p > m {
                m = p;
            }
        }
        m
    }
}

/// Power `|Σ_k w_k F_k e^{−i L √λ_k}|²` at each trial length, by direct
/// summation in sample order (fixed order keeps the result bit-reproducible
/// regardless of how the lengths themselves are parallelized).
pub fn evaluate_power_at(series: &FluctuationSeries, lengths: &[f64]) -> Vec<f64> {
    let weighted: Vec<(f64, f64)> = series
        .sqrt_values
        .iter()
        .zip(series.fluct.iter().zip(&series.weights))
        .map(|(&x, (&f, &w))| (x, w * f))
        .collect();

    let one = |&l: &f64| -> f64 {
        let mut s_re = 0.0;
        let mut s_im = 0.0;
        for &(x, wf) in &weighted {
            let (sin, cos) = math::sin_cos(l * x);
            s_re += wf * cos;
            s_im -= wf * sin;
        }
        s_re * s_re + s_im * s_im
    };

    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        lengths.par_iter().map(one).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        lengths.iter().map(one).collect()
    }
}

/// [`evaluate_power_at`] over a whole grid.
pub fn evaluate_length_spectrum(series: &FluctuationSeries, grid: LengthGrid) -> LengthSpectrum {
    let power = evaluate_power_at(series, &grid.points());
    LengthSpectrum { grid, power }
}

/// A detected peak: sub-cell refined location, raw power at the grid maximum,
/// and topographic prominence.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Peak {
    pub location: f64,
    pub power: f64,
    pub prominence: f64,
}

/// Interior local maxima of the power curve (plateaus count once, at their
/// first index), kept when their prominence reaches
/// `min_prominence_fraction` of the global power maximum, refined by a
/// three-point log-parabola, sorted by power descending, and truncated to
/// `max_peaks`.
///
/// Prominence is topographic: descend from the peak in each direction until a
/// strictly higher sample (or the boundary), take the minimum seen, and
/// measure the drop to the higher of the two minima.
pub fn find_peaks(
    spectrum: &LengthSpectrum,
    min_prominence_fraction: f64,
    max_peaks: usize,
) -> Vec<Peak> {
    let p = spectrum.power();
    let n = p.len();
    if n < 3 || max_peaks == 0 {
        return Vec::new();
    }
    let threshold = min_prominence_fraction * spectrum.max_power();

    let mut peaks = Vec::new();
    let mut j = 1;
    while j + 1 < n {
        if p[j - 1] < p[j] {
            // Extend across a flat summit; a peak needs a strict drop after it.
            let mut end = j;
            while end + 1 < n && p[end + 1] == p[j] {
                end += 1;
            }
            if end + 1 < n && p[end + 1] < p[j] {
                let prominence = prominence_at(p, j);
                if prominence >= threshold && prominence > 0.0 {
                    peaks.push(Peak {
                        location: refine_location(spectrum, j),
                        power: p[j],
                        prominence,
                    });
                }
                j = end + 1;
                continue;
            }
            j = end + 1;
            continue;
        }
        j += 1;
    }

    peaks.sort_by(|a, b| b.power.total_cmp(&a.power));
    peaks.truncate(max_peaks);
    peaks
}

fn prominence_at(p: &[f64], peak: usize) -> f64 {
    let height = p[peak];

    let mut left_min = height;
    let mut i = peak;
    loop {
        if p[i] < left_min {
            left_min = p[i];
        }
        if i == 0 {
            break;
        }
        if p[i - 1] > height {
            break;
        }
        i -= 1;
    }

    let mut right_min = height;
    let mut i = peak;
    while i + 1 < p.len() && p[i + 1] <= height {
        i += 1;
        if p[i] < right_min {
            right_min = p[i];
        }
    }

    let base = if left_min > right_min {
        left_min
    } else {
        right_min
    };
    height - base
}

/// Sub-cell peak location from a parabola through the logs of the three
/// samples around the maximum; falls back to the grid point when a neighbor
/// is nonpositive or the curvature vanishes. The shift is clamped to half a
/// cell — anything larger means the parabola model broke down.
fn refine_location(spectrum: &LengthSpectrum, j: usize) -> f64 {
    let p = spectrum.power();
    let grid = spectrum.grid();
    let center = grid.point(j);
    if j == 0 || j + 1 >= p.len() {
        return center;
    }
    let (pl, pc, pr) = (p[j - 1], p[j], p[j + 1]);
    if !(pl > 0.0 && pc > 0.0 && pr > 0.0) {
        return center;
    }
    let (yl, yc, yr) = (math::ln(pl), math::ln(pc), math::ln(pr));
    let denom = yl - 2.0 * yc + yr;
    if math::abs(denom) < 1e-300 {
        return center;
    }
    let d = (0.5 * (yl - yr) / denom).clamp(-0.5, 0.5);
    center + d * grid.spacing()
}

/// One periodic-orbit length of a rectangle: `L = 2√((m₁a)² + (m₂b)²)` for a
/// winding pair, or the box analogue when `m3` is set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrbitLength {
    pub m1: u32,
    pub m2: u32,
    pub m3: Option<u32>,
    pub length: f64,
}

/// All rectangle orbit lengths with winding indices up to `max_index` and
/// length at most `l_max`, sorted by length (ties by index pair). The
/// fundamental bouncing-ball orbits are `(1,0) → 2a` and `(0,1) → 2b`.
pub fn orbit_lengths(geom: &RectangleGeometry, max_index: u32, l_max: f64) -> Vec<OrbitLength> {
    let mut orbits = Vec::new();
    for m1 in 0..=max_index {
        for m2 in 0..=max_index {
            if m1 == 0 && m2 == 0 {
                continue;
            }
            let dx = m1 as f64 * geom.a();
            let dy = m2 as f64 * geom.b();
            let length = 2.0 * math::sqrt(dx * dx + dy * dy);
            if length <= l_max {
                orbits.push(OrbitLength {
                    m1,
                    m2,
                    m3: None,
                    length,
                });
            }
        }
    }
    sort_orbits(&mut orbits);
    orbits
}

/// Box analogue of [`orbit_lengths`] over winding triples.
pub fn orbit_lengths_box(geom: &BoxGeometry, max_index: u32, l_max: f64) -> Vec<OrbitLength> {
    let mut orbits = Vec::new();
    for m1 in 0..=max_index {
        for m2 in 0..=max_index {
            for m3 in 0..=max_index {
                if m1 == 0 && m2 == 0 && m3 == 0 {
                    continue;
                }
                let dx = m1 as f64 * geom.a();
                let dy = m2 as f64 * geom.b();
                let dz = m3 as f64 * geom.c();
                let length = 2.0 * math::sqrt(dx * dx + dy * dy + dz * dz);
                if length <= l_max {
                    orbits.push(OrbitLength {
                        m1,
                        m2,
                        m3: Some(m3),
                        length,
                    });
                }
            }
        }
    }
    sort_orbits(&mut orbits);
    orbits
}

fn sort_orbits(orbits: &mut [OrbitLength]) {
    orbits.sort_unstable_by(|a, b| {
        a.length
            .total_cmp(&b.length)
            .then(a.m1.cmp(&b.m1))
            .then(a.m2.cmp(&b.m2))
            .then(a.m3.cmp(&b.m3))
    });
}
