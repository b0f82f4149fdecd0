//! Reconstruct the side lengths of a rectangle (or box) from a finite,
//! ordered, possibly offset-truncated list of its Dirichlet Laplacian
//! eigenvalues.
//!
//! The pipeline is the classical inverse-spectral recipe for separable
//! domains, made operational:
//!
//! 1. **Weyl slope** ([`weyl`]) — fit the counting function's tail,
//!    `N(λ) ≈ s·λ + …` in 2-D (`s·λ^{3/2}` in 3-D), and invert the leading
//!    Weyl coefficient to estimate the area (or volume).
//! 2. **Fluctuations** ([`weyl::fluctuations`]) — subtract the fitted smooth
//!    term to expose the oscillatory remainder `F(λ_k)`.
//! 3. **Length spectrum** ([`lengthspec`]) — evaluate
//!    `S(L) = |Σ_k w_k F(λ_k) e^{−iL√λ_k}|²` on a grid; its peaks sit at the
//!    lengths of classical periodic billiard orbits, in particular the
//!    bouncing-ball fundamentals `2a` and `2b`.
//! 4. **Side selection** ([`reconstruct`]) — among detected peaks, choose the
//!    pair (triple in 3-D) whose implied side product matches the measure
//!    estimate, then read off `a = L_short/2`, `b = L_long/2`.
//!
//! Because the fit regresses the *local* index `k` against `λ_k`, an unknown
//! number of missing leading eigenvalues only shifts the fit intercept; slope,
//! fluctuation phases, and therefore the recovered sides are offset-agnostic.
//!
//! ```
//! use hearbox_core::{
//!     generate_rectangle_spectrum_auto, reconstruct_rectangle, ReconstructionConfig,
//!     RectangleGeometry,
//! };
//!
//! let geom = RectangleGeometry::new(1.0, 1.0).unwrap();
//! let sample = generate_rectangle_spectrum_auto(&geom, 5_000, 0).unwrap();
//! let report = reconstruct_rectangle(&sample, &ReconstructionConfig::default()).unwrap();
//! assert!((report.a_hat - 1.0).abs() < 5e-3);
//! assert!((report.b_hat - 1.0).abs() < 5e-3);
//! ```
//!
//! The crate is `no_std`-compatible (`alloc` required): disable the default
//! `std` feature to build against `core + alloc`, with transcendentals
//! supplied by `libm`. The default `parallel` feature (implies `std`)
//! parallelizes the two data-parallel loops via rayon; per-point sums stay in
//! fixed index order, so results are bit-identical for any worker count.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

mod math;

pub mod lengthspec;
pub mod reconstruct;
pub mod spectrum;
pub mod weyl;

pub use lengthspec::{
    apply_window, evaluate_length_spectrum, evaluate_power_at, find_peaks, orbit_lengths,
    orbit_lengths_box, GridError, LengthGrid, LengthSpectrum, OrbitLength, Peak, WindowKind,
    MIN_GRID_STEPS,
};
pub use reconstruct::{
    reconstruct_box, reconstruct_rectangle, resolve_grid, select_side_pair, select_side_triple,
    AmbiguousReconstruction, Candidate, GridSpec, PairSelection, ReconstructError,
    ReconstructionConfig, ReconstructionReport, SelectionError, TripleSelection,
    DEFAULT_FIT_START_FRACTION, DEFAULT_GRID_L_MIN, DEFAULT_GRID_STEPS, DEFAULT_MAX_PEAKS,
    DEFAULT_MIN_PROMINENCE_2D, DEFAULT_MIN_PROMINENCE_3D, DEFAULT_PAIR_TOLERANCE,
};
pub use spectrum::{
    generate_box_spectrum, generate_box_spectrum_auto, generate_rectangle_spectrum,
    generate_rectangle_spectrum_auto, load_spectrum, serialize_spectrum, BoxGeometry, Dim,
    GenerateError, GeometryError, LoadError, RectangleGeometry, SampleError, SpectrumSample,
    MAX_GRID_CELLS, MIN_SPECTRUM_LEN,
};
pub use weyl::{
    counting_at, estimate_measure, fit_weyl_slope, fluctuations, FitError, FluctuationSeries,
    SeriesError, SmoothModel, WeylFit, MIN_FIT_POINTS,
};
