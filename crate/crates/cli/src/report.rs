//! The machine-readable reconstruction report. Field order is fixed by the
//! struct layout, so identical runs serialize byte-identically.

use serde::Serialize;

use hearbox_core::lengthspec::Peak;
use hearbox_core::reconstruct::{AmbiguousReconstruction, Candidate, ReconstructionReport};
use hearbox_core::weyl::WeylFit;

#[derive(Serialize)]
pub struct ReportJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_hat: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_hat: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_hat: Option<f64>,
    pub measure_hat: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aspect_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair_score: Option<f64>,
    pub peaks: Vec<PeakJson>,
    pub fit: FitJson,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub best_score: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub candidates: Option<Vec<CandidateJson>>,
    pub status: &'static str,
}

#[derive(Serialize)]
pub struct PeakJson {
    #[serde(rename = "L")]
    pub l: f64,
    pub power: f64,
    pub prominence: f64,
}

#[derive(Serialize)]
pub struct FitJson {
    pub slope: f64,
    pub intercept: f64,
    pub model: &'static str,
    pub fraction: f64,
}

#[derive(Serialize)]
pub struct CandidateJson {
    pub lengths: Vec<f64>,
    pub score: f64,
}

fn peaks_json(peaks: &[Peak]) -> Vec<PeakJson> {
    peaks
        .iter()
        .map(|p| PeakJson {
            l: p.location,
            power: p.power,
            prominence: p.prominence,
        })
        .collect()
}

fn fit_json(fit: &WeylFit) -> FitJson {
    FitJson {
        slope: fit.slope(),
        intercept: fit.intercept(),
        model: fit.model().name(),
        fraction: fit.fit_start_fraction(),
    }
}

fn candidates_json(candidates: &[Candidate]) -> Vec<CandidateJson> {
    candidates
        .iter()
        .map(|c| CandidateJson {
            lengths: c.lengths.clone(),
            score: c.score,
        })
        .collect()
}

pub fn success(report: &ReconstructionReport) -> ReportJson {
    ReportJson {
        a_hat: Some(report.a_hat),
        b_hat: Some(report.b_hat),
        c_hat: report.c_hat,
        measure_hat: report.measure_hat,
        aspect_ratio: Some(report.aspect_ratio),
        pair_score: Some(report.pair_score),
        peaks: peaks_json(&report.peaks),
        fit: fit_json(&report.fit),
        warnings: report.warnings.clone(),
        best_score: None,
        tolerance: None,
        candidates: None,
        status: "ok",
    }
}

pub fn ambiguous(amb: &AmbiguousReconstruction) -> ReportJson {
    ReportJson {
        a_hat: None,
        b_hat: None,
        c_hat: None,
        measure_hat: amb.measure_hat,
        aspect_ratio: None,
        pair_score: None,
        peaks: peaks_json(&amb.peaks),
        fit: fit_json(&amb.fit),
        warnings: amb.warnings.clone(),
        best_score: Some(amb.best_score),
        tolerance: Some(amb.tolerance),
        candidates: Some(candidates_json(&amb.candidates)),
        status: "ambiguous",
    }
}

pub fn render(report: &ReportJson) -> String {
    let mut text =
        serde_json::to_string_pretty(report).expect("report serialization is infallible");
    text.push('\n');
    text
}
