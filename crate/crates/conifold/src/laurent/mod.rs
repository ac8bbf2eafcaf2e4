//! Laurent polynomials with strictly positive rational coefficients.
//!
//! A polynomial `W = Σ_n a_n x^n` is stored as a sparse map from integer
//! exponent vectors `n ∈ Z^d` to exact positive rationals `a_n`. All
//! analysis happens in logarithmic coordinates `x_i = exp(u_i)`, where the
//! pullback is the smooth positive function `Σ_n a_n e^{⟨u,n⟩}` and the
//! derivative in `u_i` agrees with the logarithmic derivative `x_i ∂/∂x_i`.
//!
//! Coefficients stay exact rationals internally; evaluation converts to
//! binary64 on demand.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::linalg;
use crate::rational::{format_rational, parse_rational, rational_to_f64};

mod parse;

/// Largest admissible `⟨u,n⟩`: `exp(709)` is near the binary64 ceiling, so
/// anything past 700 is reported instead of silently saturating.
pub const EXP_ARG_LIMIT: f64 = 700.0;

/// Errors from construction, parsing, and evaluation of Laurent polynomials.
#[derive(Debug, Clone, PartialEq)]
pub enum LaurentError {
    /// Input text does not conform to the polynomial grammar.
    Syntax { position: usize, message: String },
    /// A term's coefficient is `≤ 0` after merging equal exponents.
    NegativeCoefficient { exponent: Vec<i64>, coefficient: String },
    /// `⟨u,n⟩` exceeds [`EXP_ARG_LIMIT`] for some term.
    OverflowRisk { exponent: Vec<i64>, dot: f64 },
    /// Monomial substitution matrix is not unimodular.
    NotUnimodular,
    /// Log coordinates contain a NaN or infinity.
    NonFinitePoint,
    /// Point or matrix size does not match the polynomial dimension.
    DimensionMismatch { expected: usize, found: usize },
}

impl fmt::Display for LaurentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LaurentError::Syntax { position, message } => {
                write!(f, "syntax error at byte {position}: {message}")
            }
            LaurentError::NegativeCoefficient { exponent, coefficient } => write!(
                f,
                "coefficient {coefficient} of exponent {exponent:?} is not strictly positive"
            ),
            LaurentError::OverflowRisk { exponent, dot } => write!(
                f,
                "exponent {exponent:?} gives <u,n> = {dot}, past the exp overflow guard of {EXP_ARG_LIMIT}"
            ),
            LaurentError::NotUnimodular => write!(f, "substitution matrix is not unimodular"),
            LaurentError::NonFinitePoint => write!(f, "log point has a non-finite coordinate"),
            LaurentError::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
        }
    }
}

impl std::error::Error for LaurentError {}

/// A point of the positive locus in logarithmic coordinates: `x_i = exp(u_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogPoint {
    coords: Vec<f64>,
}

impl LogPoint {
    /// Build a log point, rejecting non-finite coordinates.
    pub fn new(coords: Vec<f64>) -> Result<Self, LaurentError> {
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(LaurentError::NonFinitePoint);
        }
        Ok(LogPoint { coords })
    }

    /// The unit point `x = (1,…,1)`, i.e. `u = 0`.
    pub fn origin(dimension: usize) -> Self {
        LogPoint { coords: vec![0.0; dimension] }
    }

    pub fn dimension(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Multiplicative coordinates `x_i = exp(u_i)`.
    pub fn to_multiplicative(&self) -> Vec<f64> {
        self.coords.iter().map(|u| u.exp()).collect()
    }
}

/// Sparse Laurent polynomial over exact positive rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPolynomial {
    dimension: usize,
    terms: BTreeMap<Vec<i64>, BigRational>,
}

impl LaurentPolynomial {
    /// Build a polynomial from `(exponent, coefficient)` pairs.
    ///
    /// Equal exponents are merged by summation. Every merged coefficient
    /// must come out strictly positive and every exponent vector must have
    /// length `dimension`.
    pub fn new(
        dimension: usize,
        terms: impl IntoIterator<Item = (Vec<i64>, BigRational)>,
    ) -> Result<Self, LaurentError> {
        if dimension == 0 {
            return Err(LaurentError::DimensionMismatch { expected: 1, found: 0 });
        }
        let mut merged: BTreeMap<Vec<i64>, BigRational> = BTreeMap::new();
        for (exponent, coefficient) in terms {
            if exponent.len() != dimension {
                return Err(LaurentError::DimensionMismatch {
                    expected: dimension,
                    found: exponent.len(),
                });
            }
            *merged.entry(exponent).or_insert_with(BigRational::zero) += coefficient;
        }
        if merged.is_empty() {
            return Err(LaurentError::Syntax {
                position: 0,
                message: "polynomial needs at least one term".into(),
            });
        }
        for (exponent, coefficient) in &merged {
            if !coefficient.is_positive() {
                return Err(LaurentError::NegativeCoefficient {
                    exponent: exponent.clone(),
                    coefficient: format_rational(coefficient),
                });
            }
        }
        Ok(LaurentPolynomial { dimension, terms: merged })
    }

    /// Parse the text grammar; see the module docs of [`parse`](self) and
    /// the CLI help for the accepted syntax.
    ///
    /// The dimension is inferred as the highest variable index mentioned,
    /// so text round-trips through [`Display`](std::fmt::Display) exactly
    /// when some term has a nonzero exponent in the last coordinate. A
    /// polynomial silent about its final variable — a constant, say — has
    /// no exact text form; use the JSON representation, which carries the
    /// dimension explicitly.
    pub fn parse(text: &str) -> Result<Self, LaurentError> {
        parse::parse_polynomial(text)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Terms in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&[i64], &BigRational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    /// Exponent vectors in lexicographic order.
    pub fn exponents(&self) -> impl Iterator<Item = &[i64]> {
        self.terms.keys().map(|e| e.as_slice())
    }

    pub fn coefficient(&self, exponent: &[i64]) -> Option<&BigRational> {
        self.terms.get(exponent)
    }

    /// Multiply every coefficient by a positive rational.
    pub fn scale(&self, factor: &BigRational) -> Result<Self, LaurentError> {
        Self::new(
            self.dimension,
            self.terms.iter().map(|(e, c)| (e.clone(), c * factor)),
        )
    }

    fn check_point(&self, point: &LogPoint) -> Result<(), LaurentError> {
        if point.dimension() != self.dimension {
            return Err(LaurentError::DimensionMismatch {
                expected: self.dimension,
                found: point.dimension(),
            });
        }
        Ok(())
    }

    /// Per-term weights `a_n e^{⟨u,n⟩}` with the overflow guard applied.
    fn term_weights(&self, point: &LogPoint) -> Result<Vec<(&[i64], f64)>, LaurentError> {
        self.check_point(point)?;
        let u = point.coords();
        let mut weights = Vec::with_capacity(self.terms.len());
        for (exponent, coefficient) in &self.terms {
            let dot: f64 = exponent.iter().zip(u).map(|(&n, &u)| n as f64 * u).sum();
            if dot > EXP_ARG_LIMIT {
                return Err(LaurentError::OverflowRisk { exponent: exponent.clone(), dot });
            }
            weights.push((exponent.as_slice(), rational_to_f64(coefficient) * dot.exp()));
        }
        Ok(weights)
    }

    /// `W(u) = Σ_n a_n e^{⟨u,n⟩}`, always strictly positive.
    pub fn evaluate_log(&self, point: &LogPoint) -> Result<f64, LaurentError> {
        Ok(self.term_weights(point)?.iter().map(|(_, w)| w).sum())
    }

    /// Gradient in log coordinates: entry `i` is `Σ_n n_i a_n e^{⟨u,n⟩}`.
    pub fn gradient_log(&self, point: &LogPoint) -> Result<Vec<f64>, LaurentError> {
        let mut gradient = vec![0.0; self.dimension];
        for (exponent, weight) in self.term_weights(point)? {
            for (g, &n) in gradient.iter_mut().zip(exponent) {
                *g += n as f64 * weight;
            }
        }
        Ok(gradient)
    }

    /// Hessian in log coordinates: entry `(i,j)` is `Σ_n n_i n_j a_n e^{⟨u,n⟩}`.
    ///
    /// The matrix is exactly symmetric as stored: both triangles are filled
    /// from the same product.
    pub fn hessian_log(&self, point: &LogPoint) -> Result<Vec<Vec<f64>>, LaurentError> {
        let d = self.dimension;
        let mut hessian = vec![vec![0.0; d]; d];
        for (exponent, weight) in self.term_weights(point)? {
            for i in 0..d {
                let row_factor = exponent[i] as f64 * weight;
                hessian[i][i] += exponent[i] as f64 * row_factor;
                for j in (i + 1)..d {
                    let entry = exponent[j] as f64 * row_factor;
                    hessian[i][j] += entry;
                    hessian[j][i] = hessian[i][j];
                }
            }
        }
        for i in 0..d {
            for j in (i + 1)..d {
                hessian[j][i] = hessian[i][j];
            }
        }
        Ok(hessian)
    }

    /// Value, gradient, and Hessian at one point, sharing the term weights.
    pub fn jet_log(&self, point: &LogPoint) -> Result<(f64, Vec<f64>, Vec<Vec<f64>>), LaurentError> {
        let weights = self.term_weights(point)?;
        let d = self.dimension;
        let mut value = 0.0;
        let mut gradient = vec![0.0; d];
        let mut hessian = vec![vec![0.0; d]; d];
        for (exponent, weight) in weights {
            value += weight;
            for i in 0..d {
                let ni = exponent[i] as f64;
                gradient[i] += ni * weight;
                hessian[i][i] += ni * ni * weight;
                for j in (i + 1)..d {
                    hessian[i][j] += ni * exponent[j] as f64 * weight;
                }
            }
        }
        for i in 0..d {
            for j in (i + 1)..d {
                hessian[j][i] = hessian[i][j];
            }
        }
        Ok((value, gradient, hessian))
    }

    /// Apply the torus automorphism `n ↦ M·n` to every exponent.
    ///
    /// `matrix` is row-major `d×d` and must be unimodular (`|det| = 1`), so
    /// the exponent map is injective and no merging can occur.
    pub fn substitute_monomial(&self, matrix: &[Vec<i64>]) -> Result<Self, LaurentError> {
        let d = self.dimension;
        if matrix.len() != d || matrix.iter().any(|row| row.len() != d) {
            return Err(LaurentError::DimensionMismatch {
                expected: d,
                found: matrix.len(),
            });
        }
        let big: Vec<Vec<BigInt>> = matrix
            .iter()
            .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let det = linalg::integer_determinant(&big);
        if det.abs() != BigInt::from(1) {
            return Err(LaurentError::NotUnimodular);
        }
        let mut terms = BTreeMap::new();
        for (exponent, coefficient) in &self.terms {
            let image: Vec<i64> = matrix
                .iter()
                .map(|row| row.iter().zip(exponent).map(|(&m, &n)| m * n).sum())
                .collect();
            let previous = terms.insert(image, coefficient.clone());
            debug_assert!(previous.is_none(), "unimodular map cannot merge exponents");
        }
        Ok(LaurentPolynomial { dimension: d, terms })
    }
}

/// Canonical text form: terms in lexicographic exponent order, coefficients
/// as `p` or `p/q`. Parsing this output reproduces the identical term map.
impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (index, (exponent, coefficient)) in self.terms.iter().enumerate() {
            if index > 0 {
                write!(f, " + ")?;
            }
            let mut factors = Vec::new();
            for (i, &e) in exponent.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("x{}", i + 1)),
                    _ => factors.push(format!("x{}^{}", i + 1, e)),
                }
            }
            let coeff_text = format_rational(coefficient);
            if factors.is_empty() {
                write!(f, "{coeff_text}")?;
            } else if coeff_text == "1" {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", coeff_text, factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    e: Vec<i64>,
    c: String,
}

#[derive(Serialize, Deserialize)]
struct PolynomialRepr {
    d: usize,
    terms: Vec<TermRepr>,
}

/// JSON form `{"d": int, "terms": [{"e": [int,...], "c": "rational"}]}`.
impl Serialize for LaurentPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let repr = PolynomialRepr {
            d: self.dimension,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermRepr { e: e.clone(), c: format_rational(c) })
                .collect(),
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LaurentPolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = PolynomialRepr::deserialize(deserializer)?;
        let terms = repr
            .terms
            .into_iter()
            .map(|term| {
                let coefficient = parse_rational(&term.c)
                    .ok_or_else(|| D::Error::custom(format!("bad rational {:?}", term.c)))?;
                Ok((term.e, coefficient))
            })
            .collect::<Result<Vec<_>, D::Error>>()?;
        LaurentPolynomial::new(repr.d, terms).map_err(D::Error::custom)
    }
}
