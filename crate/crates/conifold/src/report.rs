//! Machine-readable report documents.
//!
//! Every command-line subcommand (and the C API's JSON entry point) emits
//! one of the document structs below. Serialization is deterministic:
//! struct field order fixes the key order, floats print as the shortest
//! decimal that round-trips to the same binary64, and exact rationals print
//! as `p` or `p/q` strings. Identical inputs therefore produce byte-
//! identical JSON.

use serde::Serialize;

use crate::laurent::LaurentPolynomial;
use crate::moments::{
    growth_estimate, moment_sequence_with, MomentOptions, MomentSequence, MomentsError,
};
use crate::polytope::{nonvanishing_certificate, validate_support, SupportValidation};
use crate::rational::format_rational;
use crate::solver::{find_conifold_point, ConifoldReport, SolverError, SolverOptions, TraceEntry};
use crate::toric::{toric_report, FanInput, ToricError, ToricReport};

/// Crate version stamped into every document.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Failures while assembling a document, classified the way the process
/// exit code needs them.
#[derive(Debug, Clone, PartialEq)]
pub enum ReportError {
    /// Problem with what the user supplied (budget guard included).
    Input(String),
    /// The computation itself failed (iteration budget, factorization...).
    Numerical(String),
}

impl std::fmt::Display for ReportError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ReportError::Input(msg) | ReportError::Numerical(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for ReportError {}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateEntryView {
    pub e: Vec<i64>,
    pub weight: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationView {
    pub polytope_dim: usize,
    pub origin_interior: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Vec<CertificateEntryView>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure_direction: Option<Vec<i64>>,
}

impl From<&SupportValidation> for ValidationView {
    fn from(validation: &SupportValidation) -> Self {
        ValidationView {
            polytope_dim: validation.polytope_dim,
            origin_interior: validation.origin_interior,
            certificate: validation.certificate.as_ref().map(|map| {
                map.iter()
                    .map(|(e, lambda)| CertificateEntryView {
                        e: e.clone(),
                        weight: format_rational(lambda),
                    })
                    .collect()
            }),
            failure_direction: validation.failure_direction.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NonvanishingView {
    pub weights: Vec<CertificateEntryView>,
    pub period: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceEntryView {
    pub value: f64,
    pub gradient_norm: f64,
    pub step: f64,
}

impl From<&TraceEntry> for TraceEntryView {
    fn from(entry: &TraceEntry) -> Self {
        TraceEntryView {
            value: entry.value,
            gradient_norm: entry.gradient_norm,
            step: entry.step,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConifoldView {
    pub point_log: Vec<f64>,
    pub point_mult: Vec<f64>,
    pub critical_value: f64,
    pub hessian_spectrum: Vec<f64>,
    pub iterations: usize,
    pub final_gradient_norm: f64,
    pub trace: Vec<TraceEntryView>,
}

impl From<&ConifoldReport> for ConifoldView {
    fn from(report: &ConifoldReport) -> Self {
        ConifoldView {
            point_log: report.point_log.coords().to_vec(),
            point_mult: report.point_mult.clone(),
            critical_value: report.critical_value,
            hessian_spectrum: report.hessian_spectrum.clone(),
            iterations: report.iterations,
            final_gradient_norm: report.final_gradient_norm,
            trace: report.trace.iter().map(TraceEntryView::from).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MomentSummaryView {
    pub kmax: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub period: Option<u64>,
    pub nonzero_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub largest_nonzero: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimate: Option<f64>,
}

impl MomentSummaryView {
    fn build(sequence: &MomentSequence) -> Self {
        MomentSummaryView {
            kmax: sequence.kmax,
            period: sequence.period,
            nonzero_count: sequence.support.len(),
            largest_nonzero: sequence.support.last().copied(),
            estimate: growth_estimate(sequence).ok(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DkView {
    pub critical_value: f64,
    pub estimate: f64,
    pub relative_gap: f64,
    pub radius: f64,
}

/// Full analysis of one polynomial: validation, then conditionally the
/// critical point and moment data. `conifold` is present exactly when the
/// hypothesis holds.
#[derive(Debug, Clone, Serialize)]
pub struct AnalysisDocument {
    pub tool_version: &'static str,
    /// Canonical text form of the parsed input.
    pub input_echo: String,
    pub validation: ValidationView,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conifold: Option<ConifoldView>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub moments: Option<MomentSummaryView>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dk: Option<DkView>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidateDocument {
    pub tool_version: &'static str,
    pub input_echo: String,
    pub validation: ValidationView,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nonvanishing: Option<NonvanishingView>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MomentsDocument {
    pub tool_version: &'static str,
    pub input_echo: String,
    pub origin_interior: bool,
    pub kmax: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub period: Option<u64>,
    pub support: Vec<usize>,
    /// Exact values `M_0..M_kmax` as rational strings.
    pub values: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimate: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ToricReportView {
    pub critical_value: f64,
    pub ray_count: usize,
    pub upper_bound: usize,
    pub lower_bound_conjecture: f64,
    pub upper_ok: bool,
    pub lower_ok: bool,
    pub assumption_note: &'static str,
    pub conifold: ConifoldView,
}

impl From<&ToricReport> for ToricReportView {
    fn from(report: &ToricReport) -> Self {
        ToricReportView {
            critical_value: report.critical_value,
            ray_count: report.ray_count,
            upper_bound: report.upper_bound,
            lower_bound_conjecture: report.lower_bound_conjecture,
            upper_ok: report.upper_ok,
            lower_ok: report.lower_ok,
            assumption_note: report.assumption_note,
            conifold: ConifoldView::from(&report.conifold),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ToricDocument {
    pub tool_version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fan_name: Option<String>,
    pub fan: FanInput,
    pub potential: String,
    /// Present only when the potential failed the hypothesis check.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationView>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<ToricReportView>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dk: Option<DkView>,
}

fn solver_failure(error: SolverError) -> ReportError {
    ReportError::Numerical(error.to_string())
}

fn moments_failure(error: MomentsError) -> ReportError {
    match error {
        MomentsError::TermBudgetExceeded { .. } => ReportError::Input(error.to_string()),
        MomentsError::Solver(e) => solver_failure(e),
        MomentsError::InsufficientData { .. } => ReportError::Input(error.to_string()),
    }
}

/// Build the full analysis document. The hypothesis outcome is data, not an
/// error: the caller reads `validation.origin_interior` for its exit status.
pub fn analysis_document(
    w: &LaurentPolynomial,
    solver_options: &SolverOptions,
    moments_kmax: Option<usize>,
    moment_options: &MomentOptions,
) -> Result<AnalysisDocument, ReportError> {
    let validation = validate_support(w);
    let conifold = if validation.origin_interior {
        match find_conifold_point(w, solver_options) {
            Ok(report) => Some(report),
            Err(e) => return Err(solver_failure(e)),
        }
    } else {
        None
    };

    let mut moments = None;
    let mut dk = None;
    if let Some(kmax) = moments_kmax {
        let sequence = moment_sequence_with(w, kmax, moment_options).map_err(moments_failure)?;
        let summary = MomentSummaryView::build(&sequence);
        if let (Some(report), Some(estimate)) = (&conifold, summary.estimate) {
            let critical_value = report.critical_value;
            dk = Some(DkView {
                critical_value,
                estimate,
                relative_gap: (estimate - critical_value).abs() / critical_value,
                radius: 1.0 / critical_value,
            });
        }
        moments = Some(summary);
    }

    Ok(AnalysisDocument {
        tool_version: TOOL_VERSION,
        input_echo: w.to_string(),
        validation: ValidationView::from(&validation),
        conifold: conifold.as_ref().map(ConifoldView::from),
        moments,
        dk,
    })
}

/// Build the hypothesis-check document (always succeeds; all outcomes are
/// reported as data).
pub fn validate_document(w: &LaurentPolynomial) -> ValidateDocument {
    let validation = validate_support(w);
    let nonvanishing = nonvanishing_certificate(&validation).ok().map(|certificate| {
        NonvanishingView {
            weights: certificate
                .weights
                .iter()
                .map(|(e, m)| CertificateEntryView { e: e.clone(), weight: m.to_string() })
                .collect(),
            period: certificate.period,
        }
    });
    ValidateDocument {
        tool_version: TOOL_VERSION,
        input_echo: w.to_string(),
        validation: ValidationView::from(&validation),
        nonvanishing,
    }
}

/// Build the exact moment document; also returns the sequence so the caller
/// can export CSV without recomputing.
pub fn moments_document(
    w: &LaurentPolynomial,
    kmax: usize,
    moment_options: &MomentOptions,
) -> Result<(MomentsDocument, MomentSequence), ReportError> {
    let sequence = moment_sequence_with(w, kmax, moment_options).map_err(moments_failure)?;
    let document = MomentsDocument {
        tool_version: TOOL_VERSION,
        input_echo: w.to_string(),
        origin_interior: sequence.period.is_some(),
        kmax: sequence.kmax,
        period: sequence.period,
        support: sequence.support.clone(),
        values: sequence.values.iter().map(format_rational).collect(),
        estimate: growth_estimate(&sequence).ok(),
    };
    Ok((document, sequence))
}

/// Build the toric document. Fan-shape problems are `Err(Input)`;
/// hypothesis violations are reported in the document with `report` absent.
pub fn toric_document(
    fan: &FanInput,
    fan_name: Option<&str>,
    solver_options: &SolverOptions,
    moments_kmax: Option<usize>,
    moment_options: &MomentOptions,
) -> Result<ToricDocument, ReportError> {
    let report = match toric_report(fan, solver_options) {
        Ok(report) => report,
        Err(ToricError::Solver(SolverError::HypothesisViolated(validation))) => {
            let potential = crate::toric::potential_from_fan(fan)
                .expect("hypothesis violation implies the fan itself validated");
            return Ok(ToricDocument {
                tool_version: TOOL_VERSION,
                fan_name: fan_name.map(str::to_string),
                fan: fan.clone(),
                potential: potential.to_string(),
                validation: Some(ValidationView::from(&validation)),
                report: None,
                dk: None,
            });
        }
        Err(ToricError::Solver(e)) => return Err(solver_failure(e)),
        Err(shape) => return Err(ReportError::Input(shape.to_string())),
    };

    let potential = crate::toric::potential_from_fan(fan)
        .expect("a successful report implies a valid fan");
    let dk = match moments_kmax {
        Some(kmax) => {
            let sequence =
                moment_sequence_with(&potential, kmax, moment_options).map_err(moments_failure)?;
            let estimate = growth_estimate(&sequence).map_err(moments_failure)?;
            let critical_value = report.critical_value;
            Some(DkView {
                critical_value,
                estimate,
                relative_gap: (estimate - critical_value).abs() / critical_value,
                radius: 1.0 / critical_value,
            })
        }
        None => None,
    };
    Ok(ToricDocument {
        tool_version: TOOL_VERSION,
        fan_name: fan_name.map(str::to_string),
        fan: fan.clone(),
        potential: potential.to_string(),
        validation: None,
        report: Some(ToricReportView::from(&report)),
        dk,
    })
}

/// Serialize any document; infallible for these plain data trees.
pub fn to_json_pretty<T: Serialize>(document: &T) -> String {
    let mut text = serde_json::to_string_pretty(document).expect("documents serialize");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(text: &str) -> LaurentPolynomial {
        LaurentPolynomial::parse(text).unwrap()
    }

    #[test]
    fn analysis_document_shape_for_a_valid_input() {
        let document = analysis_document(
            &poly("x1 + x1^-1"),
            &SolverOptions::default(),
            None,
            &MomentOptions::default(),
        )
        .unwrap();
        assert!(document.validation.origin_interior);
        let conifold = document.conifold.as_ref().expect("hypothesis holds");
        assert!((conifold.critical_value - 2.0).abs() < 1e-12);
        assert!(document.moments.is_none() && document.dk.is_none());
        let json = to_json_pretty(&document);
        assert!(json.contains("\"input_echo\": \"x1^-1 + x1\""));
    }

    #[test]
    fn analysis_document_reports_violations_without_a_conifold_section() {
        let document = analysis_document(
            &poly("x1 + x2"),
            &SolverOptions::default(),
            None,
            &MomentOptions::default(),
        )
        .unwrap();
        assert!(!document.validation.origin_interior);
        assert!(document.conifold.is_none());
        let json = to_json_pretty(&document);
        assert!(!json.contains("\"conifold\""));
    }

    #[test]
    fn analysis_document_with_moments_fills_dk() {
        let document = analysis_document(
            &poly("x1 + x1^-1"),
            &SolverOptions::default(),
            Some(60),
            &MomentOptions::default(),
        )
        .unwrap();
        let dk = document.dk.expect("estimate available at kmax 60");
        assert!((dk.radius - 0.5).abs() < 1e-12);
        assert!(dk.relative_gap < 0.02);
        assert_eq!(document.moments.unwrap().period, Some(2));
    }

    #[test]
    fn serialization_is_deterministic() {
        let w = poly("2*x1^2*x2 + x1^-1*x2 + x2^-1");
        let options = SolverOptions::default();
        let a = to_json_pretty(
            &analysis_document(&w, &options, Some(40), &MomentOptions::default()).unwrap(),
        );
        let b = to_json_pretty(
            &analysis_document(&w, &options, Some(40), &MomentOptions::default()).unwrap(),
        );
        assert_eq!(a, b);
    }

    #[test]
    fn validate_document_carries_certificates() {
        let document = validate_document(&poly("x1 + x2 + x1^-1*x2^-1"));
        assert!(document.validation.origin_interior);
        let nonvanishing = document.nonvanishing.unwrap();
        assert_eq!(nonvanishing.period, 3);
        assert!(nonvanishing.weights.iter().all(|w| w.weight == "1"));

        let rejected = validate_document(&poly("x1 + x2"));
        assert!(rejected.nonvanishing.is_none());
        assert!(!rejected.validation.origin_interior);
    }

    #[test]
    fn toric_document_for_a_builtin() {
        let fan = crate::toric::builtin_fan("P2").unwrap();
        let document = toric_document(
            &fan,
            Some("P2"),
            &SolverOptions::default(),
            None,
            &MomentOptions::default(),
        )
        .unwrap();
        let report = document.report.unwrap();
        assert!((report.critical_value - 3.0).abs() < 1e-9);
        assert_eq!(report.ray_count, 3);
        assert_eq!(document.potential, "x1^-1*x2^-1 + x2 + x1");
    }

    #[test]
    fn toric_document_reports_hypothesis_violations() {
        let fan = FanInput { dimension: 2, rays: vec![vec![1, 0], vec![0, 1]] };
        let document = toric_document(
            &fan,
            None,
            &SolverOptions::default(),
            None,
            &MomentOptions::default(),
        )
        .unwrap();
        assert!(document.report.is_none());
        assert_eq!(document.validation.unwrap().polytope_dim, 1);
    }
}
