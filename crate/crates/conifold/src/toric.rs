//! Toric Fano potentials built from fan rays.
//!
//! For a fan with primitive ray generators `v`, the mirror potential of the
//! associated variety (with its monotone symplectic form) is
//! `W = Σ_v x^v`, all coefficients 1. Its critical value `T` satisfies
//! `T ≤ ray_count`: the value at the unit point is the number of rays, and
//! the minimum can only be lower, with equality exactly when the rays sum to
//! zero (that sum is the gradient at the unit point). The conjectured lower
//! bound is `T ≥ d + 1`, with equality for projective space.
//!
//! A builtin corpus of low-dimensional fans ships as JSON data files in the
//! same format accepted from the command line:
//! `{"d": int, "rays": [[int, ...], ...]}`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::laurent::LaurentPolynomial;
use crate::linalg::integer_rank;
use crate::solver::{find_conifold_point, ConifoldReport, SolverError, SolverOptions};

/// Slack for the bound verdicts, which compare floating-point `T` against
/// exact integers.
pub const BOUND_TOLERANCE: f64 = 1e-9;

/// Primitive ray generators of a complete fan, as plain data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanInput {
    #[serde(rename = "d")]
    pub dimension: usize,
    pub rays: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ToricError {
    /// A ray whose entries have gcd ≠ 1 (the zero ray included).
    NonPrimitiveRay { ray: Vec<i64> },
    DuplicateRay { ray: Vec<i64> },
    /// A ray of the wrong length for the declared dimension.
    RayShape { expected: usize, found: usize },
    /// Rays do not linearly span the whole space.
    DegenerateSpan,
    UnknownName { name: String },
    /// Hypothesis violation or numerical failure from the solver.
    Solver(SolverError),
}

impl fmt::Display for ToricError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ToricError::NonPrimitiveRay { ray } => write!(f, "ray {ray:?} is not primitive"),
            ToricError::DuplicateRay { ray } => write!(f, "ray {ray:?} appears twice"),
            ToricError::RayShape { expected, found } => {
                write!(f, "ray has {found} entries, expected {expected}")
            }
            ToricError::DegenerateSpan => write!(f, "rays do not span the space"),
            ToricError::UnknownName { name } => write!(f, "unknown builtin fan {name:?}"),
            ToricError::Solver(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ToricError {}

impl From<SolverError> for ToricError {
    fn from(e: SolverError) -> Self {
        ToricError::Solver(e)
    }
}

/// Critical-value report for a fan potential with both bound verdicts.
#[derive(Debug, Clone, PartialEq)]
pub struct ToricReport {
    pub conifold: ConifoldReport,
    /// `T = W(P)`, duplicated from the conifold report for convenience.
    pub critical_value: f64,
    pub ray_count: usize,
    /// `ray_count`, read as dimension + second Betti number.
    pub upper_bound: usize,
    /// `d + 1`, the conjectured floor.
    pub lower_bound_conjecture: f64,
    pub upper_ok: bool,
    pub lower_ok: bool,
    /// Standing caveat about what the bounds assume; carried into reports.
    pub assumption_note: &'static str,
}

/// The upper bound reads `ray_count` as `dim + b₂`, which is only valid for
/// smooth projective toric varieties; this tool checks neither smoothness
/// nor completeness of the fan, so the report says so.
const ASSUMPTION_NOTE: &str = "upper bound reads ray_count as dimension + second Betti number, \
     which assumes a smooth projective toric fan; smoothness and completeness are not verified";

fn validate_fan(fan: &FanInput) -> Result<(), ToricError> {
    if fan.dimension == 0 || fan.rays.is_empty() {
        return Err(ToricError::DegenerateSpan);
    }
    let mut seen: BTreeSet<&[i64]> = BTreeSet::new();
    for ray in &fan.rays {
        if ray.len() != fan.dimension {
            return Err(ToricError::RayShape { expected: fan.dimension, found: ray.len() });
        }
        let gcd = ray.iter().fold(0i64, |acc, &x| acc.gcd(&x));
        if gcd != 1 {
            return Err(ToricError::NonPrimitiveRay { ray: ray.clone() });
        }
        if !seen.insert(ray) {
            return Err(ToricError::DuplicateRay { ray: ray.clone() });
        }
    }
    let matrix: Vec<Vec<BigInt>> = fan
        .rays
        .iter()
        .map(|ray| ray.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    if integer_rank(&matrix) != fan.dimension {
        return Err(ToricError::DegenerateSpan);
    }
    Ok(())
}

/// The monotone potential `Σ_v x^v` of a validated fan.
pub fn potential_from_fan(fan: &FanInput) -> Result<LaurentPolynomial, ToricError> {
    validate_fan(fan)?;
    let terms = fan
        .rays
        .iter()
        .map(|ray| (ray.clone(), BigRational::one()));
    Ok(LaurentPolynomial::new(fan.dimension, terms)
        .expect("validated rays are distinct vectors of the declared length"))
}

/// Solve for the critical value of the fan potential and evaluate both
/// bounds: `T ≤ ray_count` and the conjectured `T ≥ d + 1`.
pub fn toric_report(fan: &FanInput, options: &SolverOptions) -> Result<ToricReport, ToricError> {
    let potential = potential_from_fan(fan)?;
    let conifold = find_conifold_point(&potential, options)?;
    let critical_value = conifold.critical_value;
    let ray_count = fan.rays.len();
    let lower_bound_conjecture = (fan.dimension + 1) as f64;
    Ok(ToricReport {
        critical_value,
        ray_count,
        upper_bound: ray_count,
        lower_bound_conjecture,
        upper_ok: critical_value <= ray_count as f64 + BOUND_TOLERANCE,
        lower_ok: critical_value >= lower_bound_conjecture - BOUND_TOLERANCE,
        assumption_note: ASSUMPTION_NOTE,
        conifold,
    })
}

/// Names accepted by [`builtin_fan`], in a stable order.
pub fn builtin_fan_names() -> &'static [&'static str] {
    &["P1", "P2", "P3", "P4", "P1xP1", "P1xP2", "dP7", "dP6", "dP5"]
}

/// Load one of the shipped fans by name (case-insensitive; "hexagon" is an
/// alias for "dP5").
pub fn builtin_fan(name: &str) -> Result<FanInput, ToricError> {
    let source = match name.to_ascii_lowercase().as_str() {
        "p1" => include_str!("../data/fans/p1.json"),
        "p2" => include_str!("../data/fans/p2.json"),
        "p3" => include_str!("../data/fans/p3.json"),
        "p4" => include_str!("../data/fans/p4.json"),
        "p1xp1" => include_str!("../data/fans/p1xp1.json"),
        "p1xp2" => include_str!("../data/fans/p1xp2.json"),
        "dp7" => include_str!("../data/fans/dp7.json"),
        "dp6" => include_str!("../data/fans/dp6.json"),
        "dp5" | "hexagon" => include_str!("../data/fans/dp5.json"),
        _ => return Err(ToricError::UnknownName { name: name.to_string() }),
    };
    Ok(serde_json::from_str(source).expect("shipped fan files are well-formed"))
}

/// The fan of d-dimensional projective space: the standard basis plus the
/// all-minus-ones ray.
pub fn projective_space_fan(dimension: usize) -> FanInput {
    let mut rays: Vec<Vec<i64>> = (0..dimension)
        .map(|i| (0..dimension).map(|j| i64::from(j == i)).collect())
        .collect();
    rays.push(vec![-1; dimension]);
    FanInput { dimension, rays }
}
