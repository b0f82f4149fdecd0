//! Forward-problem eigenvalue generation for rectangles and boxes (the exact
//! oracle), plus ingestion of externally supplied eigenvalue lists.
//!
//! Dirichlet eigenvalues of the rectangle `(0,a)×(0,b)` are
//! `λ_{m,n} = π²(m²/a² + n²/b²)` over integer indices `m,n ≥ 1`; the box adds
//! a third index. Generation enumerates a finite index grid, which is only a
//! *prefix-complete* view of the spectrum: modes just outside the grid can be
//! smaller than modes inside it. Every generator call therefore proves the
//! requested slice complete against [`RectangleGeometry::truncation_safe_cutoff`]
//! (resp. the box variant) and refuses loudly instead of silently dropping
//! eigenvalues, which would corrupt every downstream count-based fit.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use crate::math;

/// Minimum sample length accepted by the fitting/reconstruction pipeline.
pub const MIN_SPECTRUM_LEN: usize = 16;

/// Ceiling on index-grid cells (cap² in 2-D, cap³ in 3-D) so absurd caps fail
/// fast with an explicit error instead of exhausting memory (2²⁷ f64 ≈ 1 GiB).
pub const MAX_GRID_CELLS: usize = 1 << 27;

/// Safety factor applied to the Weyl-predicted λ target when deriving an
/// index cap automatically; absorbs the (negative) perimeter/surface
/// corrections that the leading term ignores.
const AUTO_CAP_SAFETY: f64 = 1.25;
/// Growth retries for the automatic index cap before giving up.
const AUTO_CAP_ATTEMPTS: usize = 8;

/// Spatial dimension of a spectrum: rectangle (2) or box (3).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dim {
    Two,
    Three,
}

impl Dim {
    pub fn as_u8(self) -> u8 {
        match self {
            Dim::Two => 2,
            Dim::Three => 3,
        }
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u8())
    }
}

/// Side lengths of the rectangle `(0,a)×(0,b)`: the ground truth for the
/// forward problem and for oracles in tests.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RectangleGeometry {
    a: f64,
    b: f64,
}

impl RectangleGeometry {
    pub fn new(a: f64, b: f64) -> Result<Self, GeometryError> {
        check_side("a", a)?;
        check_side("b", b)?;
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn area(&self) -> f64 {
        self.a * self.b
    }

    /// The Dirichlet eigenvalue `λ_{m,n} = π²(m²/a² + n²/b²)`.
    pub fn eigenvalue(&self, m: u32, n: u32) -> f64 {
        self.eigenvalue_f(m as f64, n as f64)
    }

    fn eigenvalue_f(&self, m: f64, n: f64) -> f64 {
        PI * PI * ((m * m) / (self.a * self.a) + (n * n) / (self.b * self.b))
    }

    /// Smallest eigenvalue *excluded* by the index cap, `Λ*`. Every true
    /// eigenvalue strictly below the returned value is guaranteed present in
    /// the generated index grid, so a requested slice is provably complete
    /// exactly when its last entry is `< Λ*`.
    pub fn truncation_safe_cutoff(&self, index_cap: u32) -> f64 {
        let next = index_cap as f64 + 1.0;
        let c1 = self.eigenvalue_f(next, 1.0);
        let c2 = self.eigenvalue_f(1.0, next);
        if c1 < c2 {
            c1
        } else {
            c2
        }
    }

    /// Copy with sides sorted ascending (the canonical reporting orientation).
    pub fn normalized(&self) -> Self {
        if self.a <= self.b {
            *self
        } else {
            Self {
                a: self.b,
                b: self.a,
            }
        }
    }
}

/// Side lengths of the box `(0,a)×(0,b)×(0,c)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoxGeometry {
    a: f64,
    b: f64,
    c: f64,
}

impl BoxGeometry {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self, GeometryError> {
        check_side("a", a)?;
        check_side("b", b)?;
        check_side("c", c)?;
        Ok(Self { a, b, c })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn volume(&self) -> f64 {
        self.a * self.b * self.c
    }

    /// The Dirichlet eigenvalue `λ_{l,n,m} = π²(l²/a² + n²/b² + m²/c²)`.
    pub fn eigenvalue(&self, l: u32, n: u32, m: u32) -> f64 {
        self.eigenvalue_f(l as f64, n as f64, m as f64)
    }

    fn eigenvalue_f(&self, l: f64, n: f64, m: f64) -> f64 {
        PI * PI
            * ((l * l) / (self.a * self.a)
                + (n * n) / (self.b * self.b)
                + (m * m) / (self.c * self.c))
    }

    /// Smallest eigenvalue excluded by the index cap; see the rectangle
    /// variant for the completeness contract.
    pub fn truncation_safe_cutoff(&self, index_cap: u32) -> f64 {
        let next = index_cap as f64 + 1.0;
        let mut cutoff = self.eigenvalue_f(next, 1.0, 1.0);
        for candidate in [
            self.eigenvalue_f(1.0, next, 1.0),
            self.eigenvalue_f(1.0, 1.0, next),
        ] {
            if candidate < cutoff {
                cutoff = candidate;
            }
        }
        cutoff
    }

    /// Copy with sides sorted ascending.
    pub fn normalized(&self) -> Self {
        let mut s = [self.a, self.b, self.c];
        s.sort_unstable_by(f64::total_cmp);
        Self {
            a: s[0],
            b: s[1],
            c: s[2],
        }
    }
}

fn check_side(name: &'static str, value: f64) -> Result<(), GeometryError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(GeometryError::NonPositiveSide { name, value })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GeometryError {
    NonPositiveSide { name: &'static str, value: f64 },
}

impl fmt::Display for GeometryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometryError::NonPositiveSide { name, value } => {
                write!(
                    f,
                    "side {name} must be a positive finite length, got {value}"
                )
            }
        }
    }
}

impl core::error::Error for GeometryError {}

/// An ordered eigenvalue list: the sole input to the inverse pipeline.
///
/// `offset` is the number of missing leading eigenvalues *when known* (the
/// generator records its `skip`); externally loaded spectra carry `None`, and
/// nothing downstream depends on it — the pipeline is index-free.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumSample {
    values: Vec<f64>,
    offset: Option<usize>,
    dim: Dim,
}

impl SpectrumSample {
    /// Validates that `values` is a nonempty, finite, positive, nondecreasing
    /// sequence. Duplicates are allowed (multiplicities matter).
    pub fn new(values: Vec<f64>, offset: Option<usize>, dim: Dim) -> Result<Self, SampleError> {
        if values.is_empty() {
            return Err(SampleError::Empty);
        }
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(SampleError::NonFinite { index: i });
            }
            if v <= 0.0 {
                return Err(SampleError::NonPositive { index: i });
            }
            if i > 0 && v < values[i - 1] {
                return Err(SampleError::Decreasing { index: i });
            }
        }
        Ok(Self {
            values,
            offset,
            dim,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn offset(&self) -> Option<usize> {
        self.offset
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleError {
    Empty,
    NonFinite { index: usize },
    NonPositive { index: usize },
    Decreasing { index: usize },
}

impl fmt::Display for SampleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SampleError::Empty => write!(f, "sample contains no eigenvalues"),
            SampleError::NonFinite { index } => {
                write!(f, "eigenvalue at index {index} is not finite")
            }
            SampleError::NonPositive { index } => {
                write!(f, "eigenvalue at index {index} is not positive")
            }
            SampleError::Decreasing { index } => {
                write!(
                    f,
                    "eigenvalues must be nondecreasing (violated at index {index})"
                )
            }
        }
    }
}

impl core::error::Error for SampleError {}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GenerateError {
    ZeroCount,
    ZeroIndexCap,
    GridTooLarge {
        cells: u128,
        limit: usize,
    },
    IncompleteTail {
        requested: usize,
        complete: usize,
        cutoff: f64,
    },
}

impl fmt::Display for GenerateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenerateError::ZeroCount => write!(f, "count must be at least 1"),
            GenerateError::ZeroIndexCap => write!(f, "index_cap must be at least 1"),
            GenerateError::GridTooLarge { cells, limit } => write!(
                f,
                "index grid of {cells} cells exceeds the {limit}-cell memory guard; lower index_cap"
            ),
            GenerateError::IncompleteTail {
                requested,
                complete,
                cutoff,
            } => write!(
                f,
                "requested tail (skip + count = {requested}) extends past the provably complete \
                 prefix: only {complete} eigenvalues lie below truncation_safe_cutoff = {cutoff:.6e}; \
                 increase index_cap"
            ),
        }
    }
}

impl core::error::Error for GenerateError {}

/// Sorted slice `skip+1 … skip+count` of the rectangle spectrum, enumerated
/// over the `index_cap × index_cap` grid, with completeness proven against
/// the truncation cutoff. Duplicate eigenvalues are kept with multiplicity.
pub fn generate_rectangle_spectrum(
    geom: &RectangleGeometry,
    count: usize,
    skip: usize,
    index_cap: u32,
) -> Result<SpectrumSample, GenerateError> {
    if count == 0 {
        return Err(GenerateError::ZeroCount);
    }
    if index_cap == 0 {
        return Err(GenerateError::ZeroIndexCap);
    }
    let cells = (index_cap as u128) * (index_cap as u128);
    if cells > MAX_GRID_CELLS as u128 {
        return Err(GenerateError::GridTooLarge {
            cells,
            limit: MAX_GRID_CELLS,
        });
    }
    let mut values = rectangle_grid(geom, index_cap);
    values.sort_unstable_by(f64::total_cmp);
    finish_sample(
        values,
        count,
        skip,
        geom.truncation_safe_cutoff(index_cap),
        Dim::Two,
    )
}

/// Box analogue of [`generate_rectangle_spectrum`] over the cubic index grid.
pub fn generate_box_spectrum(
    geom: &BoxGeometry,
    count: usize,
    skip: usize,
    index_cap: u32,
) -> Result<SpectrumSample, GenerateError> {
    if count == 0 {
        return Err(GenerateError::ZeroCount);
    }
    if index_cap == 0 {
        return Err(GenerateError::ZeroIndexCap);
    }
    let cells = (index_cap as u128).pow(3);
    if cells > MAX_GRID_CELLS as u128 {
        return Err(GenerateError::GridTooLarge {
            cells,
            limit: MAX_GRID_CELLS,
        });
    }
    let mut values = box_grid(geom, index_cap);
    values.sort_unstable_by(f64::total_cmp);
    finish_sample(
        values,
        count,
        skip,
        geom.truncation_safe_cutoff(index_cap),
        Dim::Three,
    )
}

/// [`generate_rectangle_spectrum`] with the index cap derived from the
/// leading Weyl term `λ(N) ≈ 4πN/area` (padded by a safety factor), growing
/// geometrically on a completeness failure.
pub fn generate_rectangle_spectrum_auto(
    geom: &RectangleGeometry,
    count: usize,
    skip: usize,
) -> Result<SpectrumSample, GenerateError> {
    if count == 0 {
        return Err(GenerateError::ZeroCount);
    }
    let needed = skip.saturating_add(count);
    let lambda = 4.0 * PI * needed as f64 / geom.area() * AUTO_CAP_SAFETY;
    let side = if geom.a > geom.b { geom.a } else { geom.b };
    let mut cap = initial_cap(side * math::sqrt(lambda) / PI);
    let mut last = GenerateError::ZeroIndexCap;
    for _ in 0..AUTO_CAP_ATTEMPTS {
        match generate_rectangle_spectrum(geom, count, skip, cap) {
            Err(err @ GenerateError::IncompleteTail { .. }) => {
                last = err;
                cap = grow_cap(cap);
            }
            other => return other,
        }
    }
    Err(last)
}

/// Box analogue of [`generate_rectangle_spectrum_auto`], inverting
/// `λ(N) ≈ (6π²N/volume)^{2/3}`.
pub fn generate_box_spectrum_auto(
    geom: &BoxGeometry,
    count: usize,
    skip: usize,
) -> Result<SpectrumSample, GenerateError> {
    if count == 0 {
        return Err(GenerateError::ZeroCount);
    }
    let needed = skip.saturating_add(count);
    let base = math::cbrt(6.0 * PI * PI * needed as f64 / geom.volume());
    let lambda = base * base * AUTO_CAP_SAFETY;
    let mut side = geom.a;
    for s in [geom.b, geom.c] {
        if s > side {
            side = s;
        }
    }
    let mut cap = initial_cap(side * math::sqrt(lambda) / PI);
    let mut last = GenerateError::ZeroIndexCap;
    for _ in 0..AUTO_CAP_ATTEMPTS {
        match generate_box_spectrum(geom, count, skip, cap) {
            Err(err @ GenerateError::IncompleteTail { .. }) => {
                last = err;
                cap = grow_cap(cap);
            }
            other => return other,
        }
    }
    Err(last)
}

fn initial_cap(estimate: f64) -> u32 {
    let c = math::ceil(estimate);
    if c < 1.0 {
        1
    } else if c >= u32::MAX as f64 {
        u32::MAX
    } else {
        c as u32
    }
}

fn grow_cap(cap: u32) -> u32 {
    cap.saturating_mul(3) / 2 + 1
}

fn finish_sample(
    sorted: Vec<f64>,
    count: usize,
    skip: usize,
    cutoff: f64,
    dim: Dim,
) -> Result<SpectrumSample, GenerateError> {
    let requested = skip.saturating_add(count);
    let complete = sorted.partition_point(|&v| v < cutoff);
    if requested > complete {
        return Err(GenerateError::IncompleteTail {
            requested,
            complete,
            cutoff,
        });
    }
    Ok(SpectrumSample {
        values: sorted[skip..requested].to_vec(),
        offset: Some(skip),
        dim,
    })
}

fn rectangle_grid(geom: &RectangleGeometry, cap: u32) -> Vec<f64> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (1..=cap)
            .into_par_iter()
            .flat_map_iter(|m| (1..=cap).map(move |n| geom.eigenvalue(m, n)))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let mut values = Vec::with_capacity(cap as usize * cap as usize);
        for m in 1..=cap {
            for n in 1..=cap {
                values.push(geom.eigenvalue(m, n));
            }
        }
        values
    }
}

fn box_grid(geom: &BoxGeometry, cap: u32) -> Vec<f64> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (1..=cap)
            .into_par_iter()
            .flat_map_iter(|l| {
                (1..=cap).flat_map(move |n| (1..=cap).map(move |m| geom.eigenvalue(l, n, m)))
            })
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let mut values = Vec::with_capacity((cap as usize).pow(3));
        for l in 1..=cap {
            for n in 1..=cap {
                for m in 1..=cap {
                    values.push(geom.eigenvalue(l, n, m));
                }
            }
        }
        values
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LoadError {
    Parse { line: usize },
    NonFinite { line: usize },
    NonPositive { line: usize },
    TooFew { found: usize },
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoadError::Parse { line } => write!(f, "line {line}: not a decimal number"),
            LoadError::NonFinite { line } => write!(f, "line {line}: eigenvalue is not finite"),
            LoadError::NonPositive { line } => {
                write!(f, "line {line}: eigenvalue must be positive")
            }
            LoadError::TooFew { found } => write!(
                f,
                "fewer than {MIN_SPECTRUM_LEN} eigenvalues in input (found {found})"
            ),
        }
    }
}

impl core::error::Error for LoadError {}

/// Parse an eigenvalue list: one decimal per line, `#` comment lines and
/// blank lines ignored. Input order is not trusted — values are sorted — and
/// the offset is recorded as unknown.
pub fn load_spectrum(text: &str, dim: Dim) -> Result<SpectrumSample, LoadError> {
    let mut values = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let value: f64 = line
            .parse()
            .map_err(|_| LoadError::Parse { line: idx + 1 })?;
        if !value.is_finite() {
            return Err(LoadError::NonFinite { line: idx + 1 });
        }
        if value <= 0.0 {
            return Err(LoadError::NonPositive { line: idx + 1 });
        }
        values.push(value);
    }
    if values.len() < MIN_SPECTRUM_LEN {
        return Err(LoadError::TooFew {
            found: values.len(),
        });
    }
    values.sort_unstable_by(f64::total_cmp);
    Ok(SpectrumSample {
        values,
        offset: None,
        dim,
    })
}

/// Render a sample in the eigenvalue file format: one value per line with 17
/// significant digits, which round-trips `f64` exactly through
/// [`load_spectrum`].
pub fn serialize_spectrum(sample: &SpectrumSample) -> String {
    use core::fmt::Write;
    let mut out = String::with_capacity(sample.values.len() * 26);
    for &v in &sample.values {
        let _ = writeln!(out, "{v:.16e}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const FOUR_DP: f64 = 5e-5;

    #[test]
    fn lowest_rectangle_mode_is_two_pi_squared() {
        let geom = RectangleGeometry::new(1.0, 1.0).unwrap();
        let sample = generate_rectangle_spectrum(&geom, 1, 0, 8).unwrap();
        assert_eq!(sample.len(), 1);
        assert!((sample.values()[0] - 2.0 * PI * PI).abs() < 1e-12);
        assert!((sample.values()[0] - 19.7392).abs() < FOUR_DP);
        assert_eq!(sample.offset(), Some(0));
        assert_eq!(sample.dim(), Dim::Two);
    }

    #[test]
    fn rectangle_matches_brute_force_enumeration() {
        // Independent oracle: exhaustive enumeration over a generous index
        // square, sorted, compared on the leading entries.
        let geom = RectangleGeometry::new(1.0, 2.0).unwrap();
        let mut oracle = Vec::new();
        for m in 1u32..=50 {
            for n in 1u32..=50 {
                let (mf, nf) = (m as f64, n as f64);
                oracle.push(PI * PI * (mf * mf / 1.0 + nf * nf / 4.0));
            }
        }
        oracle.sort_unstable_by(f64::total_cmp);
        let sample = generate_rectangle_spectrum(&geom, 5, 0, 50).unwrap();
        assert_eq!(sample.values(), &oracle[..5]);
    }

    #[test]
    fn lowest_box_modes_and_degeneracy() {
        let geom = BoxGeometry::new(1.0, 1.0, 1.0).unwrap();
        let one = generate_box_spectrum(&geom, 1, 0, 8).unwrap();
        assert!((one.values()[0] - 3.0 * PI * PI).abs() < 1e-12);
        assert!((one.values()[0] - 29.6088).abs() < FOUR_DP);

        // (2,1,1) and its permutations give 6π² with multiplicity 3.
        let three = generate_box_spectrum(&geom, 3, 0, 8).unwrap();
        let expected = [3.0 * PI * PI, 6.0 * PI * PI, 6.0 * PI * PI];
        for (got, want) in three.values().iter().zip(expected) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn box_matches_brute_force_enumeration() {
        let geom = BoxGeometry::new(1.0, 2.0, 3.0).unwrap();
        let mut oracle = Vec::new();
        for l in 1u32..=20 {
            for n in 1u32..=20 {
                for m in 1u32..=20 {
                    let (lf, nf, mf) = (l as f64, n as f64, m as f64);
                    oracle.push(PI * PI * (lf * lf + nf * nf / 4.0 + mf * mf / 9.0));
                }
            }
        }
        oracle.sort_unstable_by(f64::total_cmp);
        let sample = generate_box_spectrum(&geom, 10, 0, 20).unwrap();
        assert_eq!(sample.values(), &oracle[..10]);
    }

    #[test]
    fn cutoff_picks_the_cheapest_excluded_mode() {
        // Long side dominates: for (1,3) the (1, cap+1) mode is far cheaper
        // than (cap+1, 1).
        let geom = RectangleGeometry::new(1.0, 3.0).unwrap();
        let cutoff = geom.truncation_safe_cutoff(800);
        let expected = PI * PI * (1.0 + 801.0_f64 * 801.0 / 9.0);
        assert_eq!(cutoff, expected);
        assert!((cutoff - 7.036e5).abs() < 1e2);

        let unit = RectangleGeometry::new(1.0, 1.0).unwrap();
        assert!((unit.truncation_safe_cutoff(1) - 5.0 * PI * PI).abs() < 1e-12);

        let geom12 = RectangleGeometry::new(1.0, 2.0).unwrap();
        let c = geom12.truncation_safe_cutoff(3);
        let m41 = geom12.eigenvalue(4, 1);
        let m14 = geom12.eigenvalue(1, 4);
        assert_eq!(c, if m41 < m14 { m41 } else { m14 });
    }

    #[test]
    fn box_cutoff_scans_all_three_axes() {
        let geom = BoxGeometry::new(1.0, 2.0, 3.0).unwrap();
        let cutoff = geom.truncation_safe_cutoff(5);
        let candidates = [
            geom.eigenvalue(6, 1, 1),
            geom.eigenvalue(1, 6, 1),
            geom.eigenvalue(1, 1, 6),
        ];
        let min = candidates.iter().fold(f64::INFINITY, |a, &b| a.min(b));
        assert_eq!(cutoff, min);
        // Longest axis c=3 is the cheapest place to spend an index.
        assert_eq!(cutoff, candidates[2]);
    }

    #[test]
    fn incomplete_tail_is_refused_loudly() {
        // With b ≫ a and a tiny cap, the grid misses (1,3) which is smaller
        // than the in-grid (2,1): the third requested value is not provable.
        let geom = RectangleGeometry::new(1.0, 10.0).unwrap();
        let err = generate_rectangle_spectrum(&geom, 3, 0, 2).unwrap_err();
        match err {
            GenerateError::IncompleteTail {
                requested,
                complete,
                ..
            } => {
                assert_eq!(requested, 3);
                assert_eq!(complete, 2);
            }
            other => panic!("expected IncompleteTail, got {other:?}"),
        }
        let message = alloc::format!("{err}");
        assert!(message.contains("truncation_safe_cutoff"), "{message}");
    }

    #[test]
    fn skip_is_a_pure_front_drop() {
        let geom = RectangleGeometry::new(1.0, 2.0).unwrap();
        let skipped = generate_rectangle_spectrum(&geom, 30, 7, 64).unwrap();
        let full = generate_rectangle_spectrum(&geom, 37, 0, 64).unwrap();
        assert_eq!(skipped.values(), &full.values()[7..]);
        assert_eq!(skipped.offset(), Some(7));
    }

    #[test]
    fn larger_cap_leaves_complete_prefix_bit_identical() {
        let geom = RectangleGeometry::new(1.0, 3.0).unwrap();
        let small = generate_rectangle_spectrum(&geom, 100, 0, 50).unwrap();
        let large = generate_rectangle_spectrum(&geom, 100, 0, 200).unwrap();
        assert_eq!(small.values(), large.values());
    }

    #[test]
    fn every_generated_value_is_a_grid_eigenvalue() {
        use std::collections::HashSet;
        let geom = RectangleGeometry::new(1.0, 2.0).unwrap();
        let sample = generate_rectangle_spectrum(&geom, 200, 0, 60).unwrap();
        let mut grid = HashSet::new();
        for m in 1u32..=60 {
            for n in 1u32..=60 {
                grid.insert(geom.eigenvalue(m, n).to_bits());
            }
        }
        for &v in sample.values() {
            assert!(grid.contains(&v.to_bits()), "{v} not on the index grid");
        }
    }

    #[test]
    fn auto_cap_matches_explicit_generation() {
        let geom = RectangleGeometry::new(1.0, 3.0).unwrap();
        let auto = generate_rectangle_spectrum_auto(&geom, 500, 5).unwrap();
        let explicit = generate_rectangle_spectrum(&geom, 500, 5, 400).unwrap();
        assert_eq!(auto.values(), explicit.values());
    }

    #[test]
    fn generation_argument_gates() {
        let geom = RectangleGeometry::new(1.0, 1.0).unwrap();
        assert_eq!(
            generate_rectangle_spectrum(&geom, 0, 0, 8),
            Err(GenerateError::ZeroCount)
        );
        assert_eq!(
            generate_rectangle_spectrum(&geom, 1, 0, 0),
            Err(GenerateError::ZeroIndexCap)
        );
        assert!(matches!(
            generate_rectangle_spectrum(&geom, 1, 0, u32::MAX),
            Err(GenerateError::GridTooLarge { .. })
        ));
    }

    #[test]
    fn geometry_and_sample_validation() {
        assert!(RectangleGeometry::new(0.0, 1.0).is_err());
        assert!(RectangleGeometry::new(1.0, f64::NAN).is_err());
        assert!(BoxGeometry::new(1.0, -2.0, 3.0).is_err());

        assert_eq!(
            SpectrumSample::new(alloc::vec![], None, Dim::Two),
            Err(SampleError::Empty)
        );
        assert_eq!(
            SpectrumSample::new(alloc::vec![1.0, 0.5], None, Dim::Two),
            Err(SampleError::Decreasing { index: 1 })
        );
        assert_eq!(
            SpectrumSample::new(alloc::vec![-1.0], None, Dim::Two),
            Err(SampleError::NonPositive { index: 0 })
        );
        assert_eq!(
            SpectrumSample::new(alloc::vec![1.0, f64::INFINITY], None, Dim::Two),
            Err(SampleError::NonFinite { index: 1 })
        );
    }

    #[test]
    fn load_parses_comments_blanks_and_sorts() {
        // Sorting contract: values come back ascending regardless of input
        // order; comments and blank lines are skipped.
        let mut text = String::from("# header comment\n\n10\n5\n");
        for k in 1..=14 {
            text.push_str(&alloc::format!("{}\n", 100 + k));
        }
        let sample = load_spectrum(&text, Dim::Two).unwrap();
        assert_eq!(sample.len(), 16);
        assert_eq!(sample.values()[0], 5.0);
        assert_eq!(sample.values()[1], 10.0);
        assert_eq!(sample.offset(), None);
    }

    #[test]
    fn load_reports_line_numbers_and_gates() {
        let bad = "# c\n\n40.5\nnot-a-number\n";
        assert_eq!(
            load_spectrum(bad, Dim::Two),
            Err(LoadError::Parse { line: 4 })
        );
        assert_eq!(
            load_spectrum("1\n-2\n", Dim::Two),
            Err(LoadError::NonPositive { line: 2 })
        );
        assert_eq!(
            load_spectrum("1\ninf\n", Dim::Two),
            Err(LoadError::NonFinite { line: 2 })
        );
        let few = load_spectrum("40.575\n43.8649\n", Dim::Two);
        assert_eq!(few, Err(LoadError::TooFew { found: 2 }));
        let message = alloc::format!("{}", few.unwrap_err());
        assert!(message.contains("fewer than 16 eigenvalues"), "{message}");
    }

    #[test]
    fn serialize_round_trips_bit_exactly() {
        let geom = RectangleGeometry::new(1.0, 2.0).unwrap();
        let sample = generate_rectangle_spectrum(&geom, 20, 0, 32).unwrap();
        let reloaded = load_spectrum(&serialize_spectrum(&sample), Dim::Two).unwrap();
        assert_eq!(sample.values(), reloaded.values());
    }
}
