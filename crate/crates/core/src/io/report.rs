//! EP reports and sweep manifests, written in the same TOML dialect as the
//! model configs. Nothing time-dependent is recorded, so identical runs give
//! identical files.

use serde::Serialize;

use crate::eplocate::{Classification, EpReport};
use crate::model::SweepAxis;
use crate::scalar::Real;
use crate::sweep::SweepResult;

fn f<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocationRecord {
    pub a_star: f64,
    pub kind: String,
    /// 1-based state indices.
    pub pair: [usize; 2],
    pub min_gap: f64,
    pub r_at: f64,
    pub non_unimodal: bool,
    pub verdict: String,
    pub collinearity: f64,
}

#[derive(Serialize)]
struct ReportDoc {
    source: String,
    axis_name: String,
    range: [f64; 2],
    whole_line_degenerate: bool,
    real_spectrum_windows: Vec<[f64; 2]>,
    location: Vec<LocationRecord>,
}

fn records<T: Real>(report: &EpReport<T>, classes: &[Classification<T>]) -> Vec<LocationRecord> {
    report
        .locations
        .iter()
        .zip(classes)
        .map(|(l, c)| LocationRecord {
            a_star: f(l.a_star),
            kind: l.kind.name().into(),
            pair: [l.pair.0 + 1, l.pair.1 + 1],
            min_gap: f(l.min_gap),
            r_at: f(l.r_at),
            non_unimodal: l.non_unimodal,
            verdict: c.verdict.name().into(),
            collinearity: f(c.collinearity),
        })
        .collect()
}

fn report_doc<T: Real>(
    source: &str,
    axis: &SweepAxis<T>,
    report: &EpReport<T>,
    classes: &[Classification<T>],
) -> ReportDoc {
    ReportDoc {
        source: source.into(),
        axis_name: axis.name.clone(),
        range: [f(axis.min), f(axis.max)],
        whole_line_degenerate: report.whole_line_degenerate,
        real_spectrum_windows: report.real_spectrum_windows.iter().map(|&(a, b)| [f(a), f(b)]).collect(),
        location: records(report, classes),
    }
}

/// EP report document; `classes[k]` classifies `report.locations[k]`.
pub fn ep_report_toml<T: Real>(
    source: &str,
    axis: &SweepAxis<T>,
    report: &EpReport<T>,
    classes: &[Classification<T>],
) -> String {
    toml::to_string(&report_doc(source, axis, report, classes)).expect("report serializes")
}

#[derive(Serialize)]
struct GridDoc {
    axis_name: String,
    min: f64,
    max: f64,
    points: usize,
    rows: usize,
    extra_points: usize,
    failed_rows: usize,
}

#[derive(Serialize)]
struct RefineDoc {
    enable: bool,
    gap_factor: f64,
    gap_threshold: f64,
    max_extra_points: usize,
    rounds: usize,
}

#[derive(Serialize)]
struct ManifestDoc {
    source: String,
    version: String,
    n: usize,
    topology: String,
    omega: [f64; 2],
    bifurcation: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_bifurcation_at: Option<f64>,
    candidates: Vec<f64>,
    grid: GridDoc,
    refine: RefineDoc,
    ep_report: ReportDoc,
}

/// Sidecar describing how a sweep was produced.
pub fn manifest_toml<T: Real>(source: &str, result: &SweepResult<T>, classes: &[Classification<T>]) -> String {
    let cfg = &result.config;
    let doc = ManifestDoc {
        source: source.into(),
        version: env!("CARGO_PKG_VERSION").into(),
        n: cfg.spec.n(),
        topology: cfg.spec.topology().name().into(),
        omega: [f(cfg.spec.coupling().re), f(cfg.spec.coupling().im)],
        bifurcation: cfg.bifurcation.name().into(),
        max_bifurcation_at: result.max_bifurcation_at.map(f),
        candidates: result.candidates.iter().map(|c| f(c.a_guess)).collect(),
        grid: GridDoc {
            axis_name: cfg.axis.name.clone(),
            min: f(cfg.axis.min),
            max: f(cfg.axis.max),
            points: cfg.axis.points,
            rows: result.rows.len(),
            extra_points: result.extra_points,
            failed_rows: result.failed_rows(),
        },
        refine: RefineDoc {
            enable: cfg.refine.enable,
            gap_factor: f(cfg.refine.gap_factor),
            gap_threshold: f(result.gap_threshold),
            max_extra_points: cfg.refine.max_extra_points,
            rounds: cfg.refine.rounds,
        },
        ep_report: report_doc(source, &cfg.axis, &result.ep_report, classes),
    };
    toml::to_string(&doc).expect("manifest serializes")
}
