//! `hearbox` — generate Dirichlet spectra of rectangles and boxes, and run
//! the inverse pipeline that recovers side lengths from an eigenvalue list.
//!
//! Exit codes are a stable scripting contract: 0 success, 2 input or
//! configuration error, 3 ambiguous reconstruction (the JSON report is still
//! written, with `"status": "ambiguous"`).

mod io;
mod report;
mod svg;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hearbox_core::lengthspec::{
    apply_window, evaluate_length_spectrum, WindowKind, MIN_GRID_STEPS,
};
use hearbox_core::reconstruct::{
    reconstruct_box, reconstruct_rectangle, resolve_grid, GridSpec, ReconstructError,
    ReconstructionConfig, DEFAULT_GRID_L_MIN, DEFAULT_GRID_STEPS,
};
use hearbox_core::spectrum::{
    generate_box_spectrum, generate_box_spectrum_auto, generate_rectangle_spectrum,
    generate_rectangle_spectrum_auto, load_spectrum, serialize_spectrum, BoxGeometry, Dim,
    RectangleGeometry, SpectrumSample,
};
use hearbox_core::weyl::{estimate_measure, fit_weyl_slope, fluctuations, SmoothModel};

#[derive(Parser)]
#[command(
    name = "hearbox",
    version,
    about = "Recover rectangle and box side lengths from Dirichlet eigenvalue lists"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic eigenvalue list for a rectangle or box
    Generate(GenerateArgs),
    /// Reconstruct side lengths from an eigenvalue list; writes a JSON report
    Reconstruct(ReconstructArgs),
    /// Export the trial-length power spectrum of an eigenvalue list as CSV
    LengthSpectrum(LengthSpectrumArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModelArg {
    Linear,
    #[value(name = "three_term")]
    ThreeTerm,
}

impl From<ModelArg> for SmoothModel {
    fn from(value: ModelArg) -> Self {
        match value {
            ModelArg::Linear => SmoothModel::Linear,
            ModelArg::ThreeTerm => SmoothModel::ThreeTerm,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum WindowArg {
    Rectangular,
    Hann,
}

impl From<WindowArg> for WindowKind {
    fn from(value: WindowArg) -> Self {
        match value {
            WindowArg::Rectangular => WindowKind::Rectangular,
            WindowArg::Hann => WindowKind::Hann,
        }
    }
}

#[derive(Args)]
struct GenerateArgs {
    /// First side length
    #[arg(long)]
    a: f64,
    /// Second side length
    #[arg(long)]
    b: f64,
    /// Third side length (boxes only, with --dim 3)
    #[arg(long)]
    c: Option<f64>,
    /// Spatial dimension: 2 for rectangles, 3 for boxes
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(2..=3))]
    dim: u8,
    /// Number of eigenvalues to emit
    #[arg(long)]
    count: usize,
    /// Number of leading eigenvalues to drop before emitting
    #[arg(long, default_value_t = 0)]
    skip: usize,
    /// Index-grid cap per axis; derived from Weyl's law when omitted
    #[arg(long)]
    index_cap: Option<u32>,
    /// Output path, or - for standard output
    #[arg(short = 'o', long = "output", default_value = "-")]
    output: String,
}

#[derive(Args)]
struct TuningArgs {
    /// Fraction of the spectrum head excluded from the Weyl fit, in (0, 1)
    #[arg(long)]
    fit_start_fraction: Option<f64>,
    /// Smooth counting model fitted to the staircase
    #[arg(long, value_enum)]
    smooth_model: Option<ModelArg>,
    /// Taper applied to the fluctuation series
    #[arg(long, value_enum)]
    window: Option<WindowArg>,
    /// Lower edge of the trial-length grid
    #[arg(long)]
    l_min: Option<f64>,
    /// Upper edge of the trial-length grid; defaults to 4·√measure
    #[arg(long)]
    l_max: Option<f64>,
    /// Number of grid points
    #[arg(long)]
    steps: Option<usize>,
}

#[derive(Args)]
struct ReconstructArgs {
    /// Eigenvalue list (one per line), or - for standard input
    #[arg(value_name = "INPUT")]
    input: String,
    /// Spatial dimension of the spectrum
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(2..=3))]
    dim: u8,
    #[command(flatten)]
    tuning: TuningArgs,
    /// Peak prominence gate as a fraction of the power maximum, in (0, 1)
    #[arg(long)]
    min_prominence: Option<f64>,
    /// Keep at most this many peaks for side selection
    #[arg(long)]
    max_peaks: Option<usize>,
    /// Relative measure mismatch beyond which the selection is ambiguous
    #[arg(long)]
    pair_tolerance: Option<f64>,
    /// JSON report path, or - for standard output
    #[arg(short = 'o', long = "output", default_value = "-")]
    output: String,
    /// Also write the power curve as CSV to this path
    #[arg(long)]
    csv: Option<String>,
    /// Also write an SVG plot of the power curve to this path
    #[arg(long)]
    svg: Option<String>,
}

#[derive(Args)]
struct LengthSpectrumArgs {
    /// Eigenvalue list (one per line), or - for standard input
    #[arg(value_name = "INPUT")]
    input: String,
    /// Spatial dimension of the spectrum
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(2..=3))]
    dim: u8,
    #[command(flatten)]
    tuning: TuningArgs,
    /// CSV output path, or - for standard output
    #[arg(short = 'o', long = "output", default_value = "-")]
    output: String,
}

struct Failure {
    message: String,
    code: u8,
}

impl Failure {
    fn config(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
            code: 2,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = configure_thread_pool().and_then(|()| match cli.command {
        Command::Generate(args) => run_generate(args).map(|()| 0),
        Command::Reconstruct(args) => run_reconstruct(args),
        Command::LengthSpectrum(args) => run_length_spectrum(args).map(|()| 0),
    });
    match run {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

/// Honor `SPECTRAL_THREADS`: 0 or unset means automatic sizing, anything else
/// pins the rayon pool width.
fn configure_thread_pool() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("SPECTRAL_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().map_err(|_| {
        Failure::config(format!(
            "SPECTRAL_THREADS must be a nonnegative integer, got {raw:?}"
        ))
    })?;
    if threads == 0 {
        return Ok(());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::config(format!("cannot size the thread pool: {e}")))
}

fn parse_dim(dim: u8) -> Dim {
    match dim {
        2 => Dim::Two,
        _ => Dim::Three,
    }
}

fn run_generate(args: GenerateArgs) -> Result<(), Failure> {
    let sample = match (parse_dim(args.dim), args.c) {
        (Dim::Two, Some(_)) => {
            return Err(Failure::config("--c only makes sense with --dim 3"));
        }
        (Dim::Two, None) => {
            let geom = RectangleGeometry::new(args.a, args.b)
                .map_err(|e| Failure::config(e.to_string()))?;
            match args.index_cap {
                Some(cap) => generate_rectangle_spectrum(&geom, args.count, args.skip, cap),
                None => generate_rectangle_spectrum_auto(&geom, args.count, args.skip),
            }
            .map_err(|e| Failure::config(e.to_string()))?
        }
        (Dim::Three, None) => {
            return Err(Failure::config("--dim 3 needs all of --a, --b and --c"));
        }
        (Dim::Three, Some(c)) => {
            let geom =
                BoxGeometry::new(args.a, args.b, c).map_err(|e| Failure::config(e.to_string()))?;
            match args.index_cap {
                Some(cap) => generate_box_spectrum(&geom, args.count, args.skip, cap),
                None => generate_box_spectrum_auto(&geom, args.count, args.skip),
            }
            .map_err(|e| Failure::config(e.to_string()))?
        }
    };
    write_file(&args.output, &serialize_spectrum(&sample))
}

fn run_reconstruct(args: ReconstructArgs) -> Result<u8, Failure> {
    let dim = parse_dim(args.dim);
    let config = build_config(dim, &args)?;
    let sample = read_sample(&args.input, dim)?;

    let outcome = match dim {
        Dim::Two => reconstruct_rectangle(&sample, &config),
        Dim::Three => reconstruct_box(&sample, &config),
    };
    match outcome {
        Ok(result) => {
            write_file(&args.output, &report::render(&report::success(&result)))?;
            if let Some(path) = &args.csv {
                write_file(path, &io::spectrum_csv(&result.spectrum))?;
            }
            if let Some(path) = &args.svg {
                write_file(path, &svg::render(&result.spectrum, &result.peaks))?;
            }
            Ok(0)
        }
        Err(err @ ReconstructError::Ambiguous(_)) => {
            let message = err.to_string();
            let ReconstructError::Ambiguous(amb) = err else {
                unreachable!();
            };
            write_file(&args.output, &report::render(&report::ambiguous(&amb)))?;
            if let Some(path) = &args.csv {
                write_file(path, &io::spectrum_csv(&amb.spectrum))?;
            }
            if let Some(path) = &args.svg {
                write_file(path, &svg::render(&amb.spectrum, &amb.peaks))?;
            }
            eprintln!("error: {message}; report written with status \"ambiguous\"");
            Ok(3)
        }
        Err(err) => Err(Failure::config(err.to_string())),
    }
}

fn run_length_spectrum(args: LengthSpectrumArgs) -> Result<(), Failure> {
    let dim = parse_dim(args.dim);
    let fraction = validated_fraction(&args.tuning)?;
    let grid_spec = build_grid_spec(&args.tuning)?;
    let model: SmoothModel = args
        .tuning
        .smooth_model
        .map_or(SmoothModel::ThreeTerm, Into::into);
    let window: WindowKind = args.tuning.window.map_or(WindowKind::Hann, Into::into);
    let sample = read_sample(&args.input, dim)?;

    let fit =
        fit_weyl_slope(&sample, fraction, model).map_err(|e| Failure::config(e.to_string()))?;
    let grid = resolve_grid(&grid_spec, estimate_measure(&fit))
        .map_err(|e| Failure::config(e.to_string()))?;
    let series = apply_window(fluctuations(&sample, &fit), window);
    let spectrum = evaluate_length_spectrum(&series, grid);
    write_file(&args.output, &io::spectrum_csv(&spectrum))
}

fn read_sample(input: &str, dim: Dim) -> Result<SpectrumSample, Failure> {
    let text =
        io::read_input(input).map_err(|e| Failure::config(format!("cannot read {input}: {e}")))?;
    load_spectrum(&text, dim).map_err(|e| Failure::config(e.to_string()))
}

fn write_file(path: &str, content: &str) -> Result<(), Failure> {
    io::write_output(path, content)
        .map_err(|e| Failure::config(format!("cannot write {path}: {e}")))
}

fn validated_fraction(tuning: &TuningArgs) -> Result<f64, Failure> {
    let fraction = tuning
        .fit_start_fraction
        .unwrap_or(hearbox_core::reconstruct::DEFAULT_FIT_START_FRACTION);
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Failure::config(format!(
            "--fit-start-fraction must lie strictly in (0, 1), got {fraction}"
        )));
    }
    Ok(fraction)
}

fn build_grid_spec(tuning: &TuningArgs) -> Result<GridSpec, Failure> {
    let l_min = tuning.l_min.unwrap_or(DEFAULT_GRID_L_MIN);
    let steps = tuning.steps.unwrap_or(DEFAULT_GRID_STEPS);
    if !(l_min.is_finite() && l_min > 0.0) {
        return Err(Failure::config(format!(
            "--l-min must be a positive finite length, got {l_min}"
        )));
    }
    if steps < MIN_GRID_STEPS {
        return Err(Failure::config(format!(
            "--steps must be at least {MIN_GRID_STEPS}, got {steps}"
        )));
    }
    match tuning.l_max {
        None => Ok(GridSpec::Auto { l_min, steps }),
        Some(l_max) => {
            let grid = hearbox_core::lengthspec::LengthGrid::new(l_min, l_max, steps)
                .map_err(|e| Failure::config(e.to_string()))?;
            Ok(GridSpec::Explicit(grid))
        }
    }
}

fn build_config(dim: Dim, args: &ReconstructArgs) -> Result<ReconstructionConfig, Failure> {
    let mut config = ReconstructionConfig::for_dim(dim);
    config.fit_start_fraction = validated_fraction(&args.tuning)?;
    if let Some(model) = args.tuning.smooth_model {
        config.smooth_model = model.into();
    }
    if let Some(window) = args.tuning.window {
        config.window = window.into();
    }
    config.grid = build_grid_spec(&args.tuning)?;
    if let Some(p) = args.min_prominence {
        if !(p > 0.0 && p < 1.0) {
            return Err(Failure::config(format!(
                "--min-prominence must lie strictly in (0, 1), got {p}"
            )));
        }
        config.min_prominence = p;
    }
    if let Some(n) = args.max_peaks {
        if n == 0 {
            return Err(Failure::config("--max-peaks must be at least 1"));
        }
        config.max_peaks = n;
    }
    if let Some(t) = args.pair_tolerance {
        if !(t.is_finite() && t > 0.0) {
            return Err(Failure::config(format!(
                "--pair-tolerance must be a positive finite number, got {t}"
            )));
        }
        config.pair_tolerance = t;
    }
    Ok(config)
}
