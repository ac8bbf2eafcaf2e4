//! Damped Newton minimization in logarithmic coordinates.
//!
//! With strictly positive coefficients and the origin strictly inside the
//! Newton polytope, `u ↦ W(e^u)` is strongly convex and coercive, so it has
//! exactly one critical point — the conifold point `P` — and that point is a
//! nondegenerate minimum. The solver runs plain damped Newton from `u = 0`:
//! solve `H·Δ = −g` by Cholesky (with a tiny ridge retry for floating-point
//! hiccups; the exact Hessian is positive-definite), cap the step, and
//! backtrack until the Armijo decrease test holds. Termination is a sup-norm
//! gradient test relative to the current value, so rescaling `W` does not
//! change iteration counts materially.

use std::fmt;

use crate::laurent::{LaurentError, LaurentPolynomial, LogPoint};
use crate::linalg::{cholesky_solve, jacobi_eigenvalues};
use crate::polytope::{validate_support, SupportValidation};

/// Eigenvalues must exceed this fraction of the Hessian trace for the
/// critical point to be certified nondegenerate.
pub const MORSE_RELATIVE_FLOOR: f64 = 1e-12;

/// Tuning knobs for the damped Newton iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    /// Sup-norm gradient bound, relative to `max(1, W(u))`.
    pub gradient_tolerance: f64,
    pub max_iterations: usize,
    /// Sup-norm cap on a single Newton step.
    pub max_step: f64,
    /// Armijo sufficient-decrease constant.
    pub armijo_c: f64,
    /// Step shrink factor during backtracking; must lie in (0, 1).
    pub backtrack_factor: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            gradient_tolerance: 1e-10,
            max_iterations: 200,
            max_step: 10.0,
            armijo_c: 1e-4,
            backtrack_factor: 0.5,
        }
    }
}

impl SolverOptions {
    /// Reject nonsensical settings before any iteration runs.
    pub fn check(&self) -> Result<(), SolverError> {
        let positive = self.gradient_tolerance > 0.0
            && self.max_iterations > 0
            && self.max_step > 0.0
            && self.armijo_c > 0.0
            && self.backtrack_factor > 0.0;
        if !positive {
            return Err(SolverError::InvalidOptions("all options must be strictly positive"));
        }
        if self.backtrack_factor >= 1.0 {
            return Err(SolverError::InvalidOptions("backtrack_factor must be below 1"));
        }
        Ok(())
    }
}

/// One row of the iteration log: objective value, gradient sup-norm, and the
/// sup-norm length of the step that produced this iterate (0 for the start).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEntry {
    pub value: f64,
    pub gradient_norm: f64,
    pub step: f64,
}

/// Everything the minimization produces about the conifold point.
#[derive(Debug, Clone, PartialEq)]
pub struct ConifoldReport {
    /// The critical point in log coordinates.
    pub point_log: LogPoint,
    /// Its multiplicative coordinates `x_i = exp(u_i)`.
    pub point_mult: Vec<f64>,
    /// `T = W(P)`.
    pub critical_value: f64,
    /// Eigenvalues of the Hessian at `P`, ascending; all strictly positive.
    pub hessian_spectrum: Vec<f64>,
    pub iterations: usize,
    pub final_gradient_norm: f64,
    pub trace: Vec<TraceEntry>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolverError {
    /// The support hypothesis failed; the full validation is attached.
    HypothesisViolated(SupportValidation),
    InvalidOptions(&'static str),
    /// Tolerance unreached — pathological scaling; the trace is attached.
    MaxIterations { iterations: usize, final_gradient_norm: f64, trace: Vec<TraceEntry> },
    /// Evaluation failed (overflow guard, dimension mismatch).
    Evaluation(LaurentError),
    /// Cholesky failed even after ridge retries.
    LinearSolve,
    /// An eigenvalue at the critical point fell below the Morse floor.
    NotPositiveDefinite { eigenvalue: f64, threshold: f64 },
}

impl fmt::Display for SolverError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolverError::HypothesisViolated(v) => write!(
                f,
                "origin not strictly inside a full-dimensional Newton polytope (dim {})",
                v.polytope_dim
            ),
            SolverError::InvalidOptions(msg) => write!(f, "invalid solver options: {msg}"),
            SolverError::MaxIterations { iterations, final_gradient_norm, .. } => write!(
                f,
                "no convergence after {iterations} iterations (gradient norm {final_gradient_norm:e})"
            ),
            SolverError::Evaluation(e) => write!(f, "evaluation failed: {e}"),
            SolverError::LinearSolve => write!(f, "Newton system could not be factorized"),
            SolverError::NotPositiveDefinite { eigenvalue, threshold } => write!(
                f,
                "Hessian eigenvalue {eigenvalue:e} below the Morse floor {threshold:e}"
            ),
        }
    }
}

impl std::error::Error for SolverError {}

impl From<LaurentError> for SolverError {
    fn from(e: LaurentError) -> Self {
        SolverError::Evaluation(e)
    }
}

/// Find the conifold point starting from the unit point `u = 0`.
///
/// Validates the support hypothesis first and refuses to run when it fails.
pub fn find_conifold_point(
    w: &LaurentPolynomial,
    options: &SolverOptions,
) -> Result<ConifoldReport, SolverError> {
    find_conifold_point_from(w, &LogPoint::origin(w.dimension()), options)
}

/// Find the conifold point from an arbitrary start; convexity makes every
/// start equivalent, which the test suite exercises directly.
pub fn find_conifold_point_from(
    w: &LaurentPolynomial,
    start: &LogPoint,
    options: &SolverOptions,
) -> Result<ConifoldReport, SolverError> {
    let validation = validate_support(w);
    if !validation.origin_interior {
        return Err(SolverError::HypothesisViolated(validation));
    }
    minimize_unchecked(w, start, options)
}

/// Run the minimization without the hypothesis gate.
///
/// On inputs that violate the hypothesis the objective has no critical
/// point, and the returned "solution" is an artifact of the stopping rule:
/// tightening the tolerance moves it arbitrarily far. Useful for studying
/// exactly that behavior; everything else should call the checked entry
/// points.
pub fn minimize_unchecked(
    w: &LaurentPolynomial,
    start: &LogPoint,
    options: &SolverOptions,
) -> Result<ConifoldReport, SolverError> {
    options.check()?;
    let d = w.dimension();
    let mut u = start.clone();
    let (mut value, mut gradient, mut hessian) = w.jet_log(&u)?;
    let mut trace = vec![TraceEntry {
        value,
        gradient_norm: sup_norm(&gradient),
        step: 0.0,
    }];

    let mut iterations = 0;
    loop {
        let gradient_norm = sup_norm(&gradient);
        if gradient_norm <= options.gradient_tolerance * value.max(1.0) {
            let hessian_spectrum = certify_morse(w, &u)?;
            return Ok(ConifoldReport {
                point_mult: u.to_multiplicative(),
                point_log: u,
                critical_value: value,
                hessian_spectrum,
                iterations,
                final_gradient_norm: gradient_norm,
                trace,
            });
        }
        if iterations == options.max_iterations {
            return Err(SolverError::MaxIterations {
                iterations,
                final_gradient_norm: gradient_norm,
                trace,
            });
        }

        let mut direction = newton_direction(&hessian, &gradient).ok_or(SolverError::LinearSolve)?;
        // Descent is guaranteed for the exact Newton direction; a ridge
        // retry can in principle spoil it, so fall back to steepest descent.
        let mut slope: f64 = gradient.iter().zip(&direction).map(|(g, s)| g * s).sum();
        if slope >= 0.0 {
            direction = gradient.iter().map(|g| -g).collect();
            slope = -gradient.iter().map(|g| g * g).sum::<f64>();
        }
        let length = sup_norm(&direction);
        if length > options.max_step {
            let shrink = options.max_step / length;
            for s in direction.iter_mut() {
                *s *= shrink;
            }
            slope *= shrink;
        }

        // Armijo backtracking; a trial point past the overflow guard simply
        // counts as insufficient decrease. One ulp of slack: close to the
        // minimum the true decrease of a Newton step (~|g|²) sinks below the
        // resolution of the value (~ε·W), and rounding jitter in the trial
        // evaluation must not veto the step — without the slack the line
        // search degenerates into ulp-sized crawling while the gradient is
        // still orders of magnitude above the tolerance.
        let slack = f64::EPSILON * value;
        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..100 {
            let coords: Vec<f64> = u
                .coords()
                .iter()
                .zip(&direction)
                .map(|(ui, si)| ui + alpha * si)
                .collect();
            let trial = LogPoint::new(coords)?;
            match w.evaluate_log(&trial) {
                Ok(trial_value)
                    if trial_value <= value + options.armijo_c * alpha * slope + slack => {
                    accepted = Some(trial);
                    break;
                }
                Ok(_) | Err(LaurentError::OverflowRisk { .. }) => alpha *= options.backtrack_factor,
                Err(other) => return Err(other.into()),
            }
        }
        let Some(next) = accepted else {
            return Err(SolverError::MaxIterations {
                iterations,
                final_gradient_norm: gradient_norm,
                trace,
            });
        };
        let step = alpha * length.min(options.max_step);
        u = next;
        let jet = w.jet_log(&u)?;
        value = jet.0;
        gradient = jet.1;
        hessian = jet.2;
        debug_assert_eq!(gradient.len(), d);
        iterations += 1;
        trace.push(TraceEntry { value, gradient_norm: sup_norm(&gradient), step });
    }
}

/// Certify nondegeneracy: eigenvalues of the Hessian at `point`, ascending,
/// all required to exceed `MORSE_RELATIVE_FLOOR` times the trace.
pub fn certify_morse(
    w: &LaurentPolynomial,
    point: &LogPoint,
) -> Result<Vec<f64>, SolverError> {
    let hessian = w.hessian_log(point)?;
    let trace: f64 = (0..hessian.len()).map(|i| hessian[i][i]).sum();
    let threshold = MORSE_RELATIVE_FLOOR * trace;
    let eigenvalues = jacobi_eigenvalues(&hessian);
    match eigenvalues.first() {
        Some(&smallest) if smallest <= threshold => {
            Err(SolverError::NotPositiveDefinite { eigenvalue: smallest, threshold })
        }
        _ => Ok(eigenvalues),
    }
}

fn sup_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

fn newton_direction(hessian: &[Vec<f64>], gradient: &[f64]) -> Option<Vec<f64>> {
    let rhs: Vec<f64> = gradient.iter().map(|g| -g).collect();
    if let Some(direction) = cholesky_solve(hessian, &rhs) {
        return Some(direction);
    }
    let trace: f64 = (0..hessian.len()).map(|i| hessian[i][i]).sum();
    let mut ridge = 1e-12 * trace.max(f64::MIN_POSITIVE);
    for _ in 0..10 {
        let mut damped = hessian.to_vec();
        for (i, row) in damped.iter_mut().enumerate() {
            row[i] += ridge;
        }
        if let Some(direction) = cholesky_solve(&damped, &rhs) {
            return Some(direction);
        }
        ridge *= 2.0;
    }
    None
}
