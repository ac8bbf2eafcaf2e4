//! Command-line front end.
//!
//! Four subcommands: `analyze` (validation, critical point, optional moment
//! comparison), `validate` (hypothesis check only), `moments` (exact moment
//! sequence), and `toric` (builtin or user fans). Output is JSON by default
//! and deterministic: running the same invocation twice yields identical
//! bytes. `--format text` renders the same data for reading.
//!
//! Exit codes: 0 success, 1 hypothesis violated (the report is still
//! printed, with the certificate of failure inside), 2 malformed input,
//! 3 numerical failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::laurent::LaurentPolynomial;
use crate::moments::{write_csv, MomentOptions};
use crate::report::{
    analysis_document, moments_document, to_json_pretty, toric_document, validate_document,
    AnalysisDocument, ConifoldView, DkView, MomentsDocument, ReportError, ToricDocument,
    ValidateDocument, ValidationView,
};
use crate::solver::SolverOptions;
use crate::toric::{builtin_fan, builtin_fan_names, FanInput};

pub const EXIT_OK: i32 = 0;
pub const EXIT_HYPOTHESIS_VIOLATED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Parser)]
#[command(name = "conifold", version, about = "Critical points and moment growth for Laurent polynomials with positive coefficients")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

/// Polynomial source: inline text or a file (text grammar, or the JSON
/// term-list form when the file starts with `{`).
#[derive(Args)]
#[group(required = true, multiple = false)]
struct PolyInput {
    /// Polynomial, e.g. "x1 + x2 + x1^-1*x2^-1".
    #[arg(long, value_name = "POLY")]
    poly: Option<String>,
    /// File containing the polynomial.
    #[arg(long, value_name = "PATH")]
    poly_file: Option<PathBuf>,
}

impl PolyInput {
    fn load(&self) -> Result<LaurentPolynomial, ReportError> {
        let text = match (&self.poly, &self.poly_file) {
            (Some(text), None) => text.clone(),
            (None, Some(path)) => std::fs::read_to_string(path).map_err(|e| {
                ReportError::Input(format!("cannot read {}: {e}", path.display()))
            })?,
            _ => unreachable!("argument group guarantees exactly one source"),
        };
        if text.trim_start().starts_with('{') {
            serde_json::from_str(&text)
                .map_err(|e| ReportError::Input(format!("invalid polynomial JSON: {e}")))
        } else {
            LaurentPolynomial::parse(&text).map_err(|e| ReportError::Input(e.to_string()))
        }
    }
}

/// Fan source: builtin name or a JSON file `{"d": ..., "rays": [[...]]}`.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct FanSource {
    /// Builtin fan name: P1, P2, P3, P4, P1xP1, P1xP2, dP5, dP6, dP7.
    #[arg(long, value_name = "NAME")]
    fan: Option<String>,
    /// JSON fan description file.
    #[arg(long, value_name = "PATH")]
    fan_file: Option<PathBuf>,
}

impl FanSource {
    fn load(&self) -> Result<(FanInput, Option<String>), ReportError> {
        match (&self.fan, &self.fan_file) {
            (Some(name), None) => {
                let fan = builtin_fan(name).map_err(|e| ReportError::Input(e.to_string()))?;
                Ok((fan, Some(name.clone())))
            }
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    ReportError::Input(format!("cannot read {}: {e}", path.display()))
                })?;
                let fan = serde_json::from_str(&text)
                    .map_err(|e| ReportError::Input(format!("invalid fan JSON: {e}")))?;
                Ok((fan, None))
            }
            _ => unreachable!("argument group guarantees exactly one source"),
        }
    }
}

#[derive(Args)]
struct SolverFlags {
    /// Gradient sup-norm tolerance, relative to max(1, W).
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Newton iteration budget.
    #[arg(long, default_value_t = 200)]
    max_iter: usize,
}

impl SolverFlags {
    fn options(&self) -> Result<SolverOptions, ReportError> {
        let options = SolverOptions {
            gradient_tolerance: self.tol,
            max_iterations: self.max_iter,
            ..SolverOptions::default()
        };
        options.check().map_err(|e| ReportError::Input(e.to_string()))?;
        Ok(options)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Validate the support, locate the critical point, and optionally
    /// compare against exact moment growth.
    Analyze {
        #[command(flatten)]
        input: PolyInput,
        #[command(flatten)]
        solver: SolverFlags,
        /// Also compute moments up to this order and report the growth gap.
        #[arg(long, value_name = "K")]
        kmax: Option<usize>,
        /// Abort if the moment computation would exceed this many terms.
        #[arg(long, default_value_t = 10_000_000)]
        term_budget: u64,
    },
    /// Check the interiority hypothesis and print the certificate or the
    /// failing direction.
    Validate {
        #[command(flatten)]
        input: PolyInput,
    },
    /// Compute the exact moment sequence M_0..M_kmax.
    Moments {
        #[command(flatten)]
        input: PolyInput,
        /// Largest moment order.
        #[arg(long, default_value_t = 100)]
        kmax: usize,
        /// Also write the sequence as CSV to this path.
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
        /// Abort if the moment computation would exceed this many terms.
        #[arg(long, default_value_t = 10_000_000)]
        term_budget: u64,
    },
    /// Analyze the standard potential of a toric fan and check the
    /// Betti-number bounds on its critical value.
    Toric {
        #[command(flatten)]
        source: FanSource,
        #[command(flatten)]
        solver: SolverFlags,
        /// Also compute moments of the potential up to this order.
        #[arg(long, value_name = "K")]
        moments: Option<usize>,
        /// Abort if the moment computation would exceed this many terms.
        #[arg(long, default_value_t = 10_000_000)]
        term_budget: u64,
    },
}

/// Parse `args` and run one command, returning the process exit code.
/// The binary wraps this in `std::process::exit`.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let format = cli.format;
    match cli.command {
        Command::Analyze { input, solver, kmax, term_budget } => {
            run_analyze(format, &input, &solver, kmax, term_budget)
        }
        Command::Validate { input } => run_validate(format, &input),
        Command::Moments { input, kmax, csv, term_budget } => {
            run_moments(format, &input, kmax, csv.as_deref(), term_budget)
        }
        Command::Toric { source, solver, moments, term_budget } => {
            run_toric(format, &source, &solver, moments, term_budget)
        }
    }
}

fn fail(error: &ReportError) -> i32 {
    eprintln!("error: {error}");
    match error {
        ReportError::Input(_) => EXIT_INPUT,
        ReportError::Numerical(_) => EXIT_NUMERICAL,
    }
}

fn run_analyze(
    format: Format,
    input: &PolyInput,
    solver: &SolverFlags,
    kmax: Option<usize>,
    term_budget: u64,
) -> i32 {
    let result = input.load().and_then(|w| {
        let options = solver.options()?;
        analysis_document(&w, &options, kmax, &MomentOptions { term_budget })
    });
    match result {
        Ok(document) => {
            print!("{}", render_analysis(format, &document));
            if document.validation.origin_interior {
                EXIT_OK
            } else {
                EXIT_HYPOTHESIS_VIOLATED
            }
        }
        Err(e) => fail(&e),
    }
}

fn run_validate(format: Format, input: &PolyInput) -> i32 {
    match input.load() {
        Ok(w) => {
            let document = validate_document(&w);
            print!("{}", render_validate(format, &document));
            if document.validation.origin_interior {
                EXIT_OK
            } else {
                EXIT_HYPOTHESIS_VIOLATED
            }
        }
        Err(e) => fail(&e),
    }
}

fn run_moments(
    format: Format,
    input: &PolyInput,
    kmax: usize,
    csv: Option<&std::path::Path>,
    term_budget: u64,
) -> i32 {
    let result = input
        .load()
        .and_then(|w| moments_document(&w, kmax, &MomentOptions { term_budget }));
    match result {
        Ok((document, sequence)) => {
            print!("{}", render_moments(format, &document));
            if let Some(path) = csv {
                let mut file = match std::fs::File::create(path) {
                    Ok(file) => file,
                    Err(e) => {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return EXIT_NUMERICAL;
                    }
                };
                if let Err(e) = write_csv(&sequence, &mut file) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return EXIT_NUMERICAL;
                }
            }
            // Moments are well-defined without the interiority hypothesis,
            // but the command still signals its absence in the exit code.
            if document.origin_interior {
                EXIT_OK
            } else {
                EXIT_HYPOTHESIS_VIOLATED
            }
        }
        Err(e) => fail(&e),
    }
}

fn run_toric(
    format: Format,
    source: &FanSource,
    solver: &SolverFlags,
    moments: Option<usize>,
    term_budget: u64,
) -> i32 {
    let result = source.load().and_then(|(fan, name)| {
        let options = solver.options()?;
        toric_document(
            &fan,
            name.as_deref(),
            &options,
            moments,
            &MomentOptions { term_budget },
        )
    });
    match result {
        Ok(document) => {
            print!("{}", render_toric(format, &document));
            if document.report.is_some() {
                EXIT_OK
            } else {
                EXIT_HYPOTHESIS_VIOLATED
            }
        }
        Err(e) => fail(&e),
    }
}

fn render_analysis(format: Format, document: &AnalysisDocument) -> String {
    match format {
        Format::Json => to_json_pretty(document),
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "input: {}", document.input_echo);
            text_validation(&mut out, &document.validation);
            if let Some(conifold) = &document.conifold {
                text_conifold(&mut out, conifold);
            }
            if let Some(moments) = &document.moments {
                let _ = writeln!(
                    out,
                    "moments: kmax {} | nonzero {} | period {}",
                    moments.kmax,
                    moments.nonzero_count,
                    moments.period.map_or_else(|| "-".into(), |k| k.to_string()),
                );
                if let Some(estimate) = moments.estimate {
                    let _ = writeln!(out, "growth estimate: {estimate}");
                }
            }
            if let Some(dk) = &document.dk {
                text_dk(&mut out, dk);
            }
            out
        }
    }
}

fn render_validate(format: Format, document: &ValidateDocument) -> String {
    match format {
        Format::Json => to_json_pretty(document),
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "input: {}", document.input_echo);
            text_validation(&mut out, &document.validation);
            if let Some(nonvanishing) = &document.nonvanishing {
                let weights: Vec<String> = nonvanishing
                    .weights
                    .iter()
                    .map(|entry| format!("{:?}:{}", entry.e, entry.weight))
                    .collect();
                let _ = writeln!(
                    out,
                    "nonvanishing: period {} | weights {}",
                    nonvanishing.period,
                    weights.join(" "),
                );
            }
            out
        }
    }
}

fn render_moments(format: Format, document: &MomentsDocument) -> String {
    match format {
        Format::Json => to_json_pretty(document),
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "input: {}", document.input_echo);
            let _ = writeln!(
                out,
                "origin interior: {} | kmax {} | period {}",
                if document.origin_interior { "yes" } else { "no" },
                document.kmax,
                document.period.map_or_else(|| "-".into(), |k| k.to_string()),
            );
            if let Some(estimate) = document.estimate {
                let _ = writeln!(out, "growth estimate: {estimate}");
            }
            for &k in &document.support {
                let _ = writeln!(out, "M_{k} = {}", document.values[k]);
            }
            out
        }
    }
}

fn render_toric(format: Format, document: &ToricDocument) -> String {
    match format {
        Format::Json => to_json_pretty(document),
        Format::Text => {
            let mut out = String::new();
            if let Some(name) = &document.fan_name {
                let _ = writeln!(out, "fan: {name}");
            }
            let _ = writeln!(
                out,
                "dimension {} | rays {:?}",
                document.fan.dimension, document.fan.rays
            );
            let _ = writeln!(out, "potential: {}", document.potential);
            if let Some(validation) = &document.validation {
                text_validation(&mut out, validation);
            }
            if let Some(report) = &document.report {
                text_conifold(&mut out, &report.conifold);
                let _ = writeln!(
                    out,
                    "bounds: {} <= {} <= {} | lower {} | upper {}",
                    report.lower_bound_conjecture,
                    report.critical_value,
                    report.upper_bound,
                    if report.lower_ok { "ok" } else { "VIOLATED" },
                    if report.upper_ok { "ok" } else { "VIOLATED" },
                );
                let _ = writeln!(out, "note: {}", report.assumption_note);
            }
            if let Some(dk) = &document.dk {
                text_dk(&mut out, dk);
            }
            out
        }
    }
}

fn text_validation(out: &mut String, validation: &ValidationView) {
    let _ = writeln!(
        out,
        "polytope dimension: {} | origin interior: {}",
        validation.polytope_dim,
        if validation.origin_interior { "yes" } else { "no" },
    );
    if let Some(certificate) = &validation.certificate {
        let entries: Vec<String> = certificate
            .iter()
            .map(|entry| format!("{:?}:{}", entry.e, entry.weight))
            .collect();
        let _ = writeln!(out, "certificate: {}", entries.join(" "));
    }
    if let Some(direction) = &validation.failure_direction {
        let _ = writeln!(out, "failure direction: {direction:?}");
    }
}

fn text_conifold(out: &mut String, conifold: &ConifoldView) {
    let _ = writeln!(out, "conifold point (log): {:?}", conifold.point_log);
    let _ = writeln!(out, "conifold point: {:?}", conifold.point_mult);
    let _ = writeln!(out, "critical value: {}", conifold.critical_value);
    let _ = writeln!(out, "hessian spectrum: {:?}", conifold.hessian_spectrum);
    let _ = writeln!(
        out,
        "iterations: {} | final gradient norm: {}",
        conifold.iterations, conifold.final_gradient_norm,
    );
}

fn text_dk(out: &mut String, dk: &DkView) {
    let _ = writeln!(
        out,
        "growth vs critical value: estimate {} | T {} | relative gap {} | radius {}",
        dk.estimate, dk.critical_value, dk.relative_gap, dk.radius,
    );
}

/// Names accepted by `toric --fan`, exposed for help text and tests.
pub fn known_fans() -> &'static [&'static str] {
    builtin_fan_names()
}
