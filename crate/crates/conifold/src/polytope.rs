//! Newton-polytope hypothesis checking.
//!
//! The analysis pipeline requires the origin to lie strictly inside the
//! Newton polytope Δ_W (the convex hull of the exponent vectors) and Δ_W to
//! be full-dimensional. Both questions are decided exactly: an interior
//! point yields a rational convex-combination certificate `λ` with
//! `Σλ_n = 1`, `Σλ_n·n = 0`, all `λ_n > 0`, found by maximizing the common
//! floor `ε ≤ λ_n` with the exact simplex; full-dimensionality is an exact
//! integer rank computation. Clearing denominators in `λ` gives integer
//! weights `m_n` whose total `K` certifies that the constant term of `W^{jK}`
//! is positive for every `j ≥ 1` (all products of positive coefficients —
//! nothing can cancel).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::laurent::LaurentPolynomial;
use crate::linalg::integer_rank;
use crate::simplex::{maximize, LpOutcome};

/// Outcome of the support hypothesis check. All findings are data; nothing
/// here is an error.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportValidation {
    /// Affine dimension of the convex hull of the exponent vectors.
    pub polytope_dim: usize,
    /// True when the origin is strictly inside a full-dimensional hull.
    pub origin_interior: bool,
    /// Strictly positive rationals with `Σλ = 1`, `Σλ_n·n = 0`;
    /// present exactly when `origin_interior`.
    pub certificate: Option<BTreeMap<Vec<i64>, BigRational>>,
    /// Witness of failure for a full-dimensional hull: integer `v` with
    /// `⟨v,n⟩ ≤ 0` for every exponent `n`, so the function does not grow in
    /// the direction `u = t·v`. Present exactly when the hull is
    /// full-dimensional and the origin is not interior.
    pub failure_direction: Option<Vec<i64>>,
}

/// Integer form of the interior certificate: weights `m_n ≥ 1` with
/// `Σm_n·n = 0`, total `period = Σm_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct NonvanishingCertificate {
    pub weights: BTreeMap<Vec<i64>, BigInt>,
    pub period: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolytopeError {
    /// Requested the integer certificate of a validation that has none.
    NoCertificate,
}

impl fmt::Display for PolytopeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolytopeError::NoCertificate => {
                write!(f, "origin is not interior, so no nonvanishing certificate exists")
            }
        }
    }
}

impl std::error::Error for PolytopeError {}

/// Decide the standing hypothesis for `W`: full-dimensional Newton polytope
/// with the origin strictly inside, certified exactly.
pub fn validate_support(w: &LaurentPolynomial) -> SupportValidation {
    let d = w.dimension();
    let exponents: Vec<Vec<i64>> = w.exponents().map(<[i64]>::to_vec).collect();
    let m = exponents.len();

    let as_bigint = |rows: &[Vec<i64>]| -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    };
    let linear_rank = integer_rank(&as_bigint(&exponents));
    // Affine dimension: rank of the differences against the first exponent.
    let differences: Vec<Vec<i64>> = exponents[1..]
        .iter()
        .map(|n| n.iter().zip(&exponents[0]).map(|(a, b)| a - b).collect())
        .collect();
    let polytope_dim = integer_rank(&as_bigint(&differences));

    // Maximize ε subject to λ_n ≥ ε ≥ 0, Σλ = 1, Σλ_n·n = 0.
    // Columns: λ_1..λ_m, ε, slacks s_1..s_m.
    let cols = 2 * m + 1;
    let zero = BigRational::zero;
    let mut a: Vec<Vec<BigRational>> = Vec::with_capacity(1 + d + m);
    let mut b: Vec<BigRational> = Vec::with_capacity(1 + d + m);
    let mut total_row = vec![zero(); cols];
    for j in 0..m {
        total_row[j] = BigRational::one();
    }
    a.push(total_row);
    b.push(BigRational::one());
    for i in 0..d {
        let mut row = vec![zero(); cols];
        for (j, n) in exponents.iter().enumerate() {
            row[j] = BigRational::from(BigInt::from(n[i]));
        }
        a.push(row);
        b.push(zero());
    }
    for j in 0..m {
        let mut row = vec![zero(); cols];
        row[j] = BigRational::one();
        row[m] = -BigRational::one();
        row[m + 1 + j] = -BigRational::one();
        a.push(row);
        b.push(zero());
    }
    let mut objective = vec![zero(); cols];
    objective[m] = BigRational::one();

    let lp = maximize(&a, &b, &objective);
    let interior_solution = match lp {
        LpOutcome::Optimal { objective, solution } if objective.is_positive() => Some(solution),
        LpOutcome::Unbounded => unreachable!("ε is bounded by every λ_n ≤ 1"),
        _ => None,
    };

    let origin_interior = interior_solution.is_some() && linear_rank == d;
    let certificate = if origin_interior {
        let solution = interior_solution.unwrap();
        let map: BTreeMap<Vec<i64>, BigRational> = exponents
            .iter()
            .cloned()
            .zip(solution.into_iter().take(m))
            .collect();
        debug_assert!(certificate_is_exact(&map, d));
        Some(map)
    } else {
        None
    };
    let failure_direction = if !origin_interior && polytope_dim == d {
        Some(separating_direction(&exponents, d))
    } else {
        None
    };

    SupportValidation { polytope_dim, origin_interior, certificate, failure_direction }
}

fn certificate_is_exact(map: &BTreeMap<Vec<i64>, BigRational>, d: usize) -> bool {
    let total: BigRational = map.values().sum();
    let mut moment = vec![BigRational::zero(); d];
    for (n, lambda) in map {
        if !lambda.is_positive() {
            return false;
        }
        for (mi, &ni) in moment.iter_mut().zip(n) {
            *mi += lambda * BigRational::from(BigInt::from(ni));
        }
    }
    total.is_one() && moment.iter().all(Zero::is_zero)
}

/// Solve the feasibility problem `⟨v,n⟩ ≤ 0` for all exponents with the
/// normalization `Σ_n ⟨v,n⟩ = −1`, and scale the rational solution to a
/// primitive integer vector. Always solvable when the hull is
/// full-dimensional and the origin is not strictly inside.
fn separating_direction(exponents: &[Vec<i64>], d: usize) -> Vec<i64> {
    // Columns: p_1..p_d, q_1..q_d (v = p − q), slacks s_1..s_m.
    let m = exponents.len();
    let cols = 2 * d + m;
    let zero = BigRational::zero;
    let mut a: Vec<Vec<BigRational>> = Vec::with_capacity(m + 1);
    let mut b: Vec<BigRational> = Vec::with_capacity(m + 1);
    for (j, n) in exponents.iter().enumerate() {
        let mut row = vec![zero(); cols];
        for i in 0..d {
            row[i] = BigRational::from(BigInt::from(n[i]));
            row[d + i] = -row[i].clone();
        }
        row[2 * d + j] = BigRational::one();
        a.push(row);
        b.push(zero());
    }
    let mut sum_row = vec![zero(); cols];
    for i in 0..d {
        let total: i64 = exponents.iter().map(|n| n[i]).sum();
        sum_row[i] = BigRational::from(BigInt::from(total));
        sum_row[d + i] = -sum_row[i].clone();
    }
    a.push(sum_row);
    b.push(-BigRational::one());

    match maximize(&a, &b, &vec![zero(); cols]) {
        LpOutcome::Optimal { solution, .. } => {
            let v: Vec<BigRational> = (0..d).map(|i| &solution[i] - &solution[d + i]).collect();
            let scale = v
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let mut ints: Vec<BigInt> = v.iter().map(|x| x.numer() * &scale / x.denom()).collect();
            let gcd = ints
                .iter()
                .fold(BigInt::zero(), |acc, x| acc.gcd(x));
            if !gcd.is_zero() {
                for x in ints.iter_mut() {
                    *x /= &gcd;
                }
            }
            ints.iter()
                .map(|x| x.to_i64().expect("separating direction fits in i64"))
                .collect()
        }
        // A separating vector exists by convex duality in this branch.
        other => unreachable!("separating LP must be feasible, got {other:?}"),
    }
}

/// Clear denominators in the interior certificate: integer weights `m_n`
/// with `Σm_n·n = 0`, reduced by their common gcd; `period = Σm_n`.
pub fn nonvanishing_certificate(
    validation: &SupportValidation,
) -> Result<NonvanishingCertificate, PolytopeError> {
    let certificate = validation.certificate.as_ref().ok_or(PolytopeError::NoCertificate)?;
    let common: BigInt = certificate
        .values()
        .fold(BigInt::one(), |acc, lambda| acc.lcm(lambda.denom()));
    let mut weights: BTreeMap<Vec<i64>, BigInt> = certificate
        .iter()
        .map(|(n, lambda)| (n.clone(), lambda.numer() * &common / lambda.denom()))
        .collect();
    let gcd = weights.values().fold(BigInt::zero(), |acc, w| acc.gcd(w));
    if gcd > BigInt::one() {
        for w in weights.values_mut() {
            *w /= &gcd;
        }
    }
    let total: BigInt = weights.values().sum();
    let period = total.to_u64().expect("certificate period fits in u64");
    Ok(NonvanishingCertificate { weights, period })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(text: &str) -> LaurentPolynomial {
        LaurentPolynomial::parse(text).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn balanced_pair_is_interior() {
        let v = validate_support(&poly("x1 + x1^-1"));
        assert_eq!(v.polytope_dim, 1);
        assert!(v.origin_interior);
        let cert = v.certificate.unwrap();
        assert_eq!(cert.get(&vec![1]), Some(&rat(1, 2)));
        assert_eq!(cert.get(&vec![-1]), Some(&rat(1, 2)));
        assert!(v.failure_direction.is_none());
    }

    #[test]
    fn segment_in_the_plane_is_rejected() {
        let v = validate_support(&poly("x1 + x2"));
        assert_eq!(v.polytope_dim, 1);
        assert!(!v.origin_interior);
        assert!(v.certificate.is_none());
        // Hull is not full-dimensional, so no separating direction is owed.
        assert!(v.failure_direction.is_none());
    }

    #[test]
    fn symmetric_triangle_certificates() {
        for text in ["x1 + x2 + x1^-1*x2^-1", "x1^2*x2^-1 + x1^-1*x2^2 + x1^-1*x2^-1"] {
            let w = poly(text);
            let v = validate_support(&w);
            assert_eq!(v.polytope_dim, 2);
            assert!(v.origin_interior);
            let cert = v.certificate.unwrap();
            assert!(cert.values().all(|lambda| *lambda == rat(1, 3)), "{text}");
        }
    }

    #[test]
    fn certificate_identities_are_exact_on_an_asymmetric_case() {
        // Exponents (2,1), (−1,1), (0,−1) force λ = (1/6, 1/3, 1/2).
        let w = poly("2*x1^2*x2 + x1^-1*x2 + x2^-1");
        let v = validate_support(&w);
        assert!(v.origin_interior);
        let cert = v.certificate.unwrap();
        assert_eq!(cert.get(&vec![2, 1]), Some(&rat(1, 6)));
        assert_eq!(cert.get(&vec![-1, 1]), Some(&rat(1, 3)));
        assert_eq!(cert.get(&vec![0, -1]), Some(&rat(1, 2)));
        let total: BigRational = cert.values().sum();
        assert_eq!(total, rat(1, 1));
        for i in 0..2 {
            let moment: BigRational = cert
                .iter()
                .map(|(n, l)| l * BigRational::from(BigInt::from(n[i])))
                .sum();
            assert_eq!(moment, rat(0, 1));
        }
    }

    #[test]
    fn full_dimensional_failures_carry_a_direction() {
        // 0 outside the hull: every exponent is ≥ 1 in the first variable.
        let off = poly("x1 + x1^2 + x1*x2 + x1*x2^-1");
        let v = validate_support(&off);
        assert_eq!(v.polytope_dim, 2);
        assert!(!v.origin_interior);
        let dir = v.failure_direction.expect("direction owed for full-dimensional failure");
        for n in off.exponents() {
            let dot: i64 = dir.iter().zip(n).map(|(a, b)| a * b).sum();
            assert!(dot <= 0, "direction {dir:?} fails on exponent {n:?}");
        }

        // 0 on the boundary: hull of {0, 1} in one variable.
        let boundary = poly("1 + x1");
        let v = validate_support(&boundary);
        assert_eq!(v.polytope_dim, 1);
        assert!(!v.origin_interior);
        assert_eq!(v.failure_direction, Some(vec![-1]));
    }

    #[test]
    fn single_term_is_degenerate() {
        let v = validate_support(&poly("x1^3"));
        assert_eq!(v.polytope_dim, 0);
        assert!(!v.origin_interior);
        assert!(v.failure_direction.is_none());
    }

    #[test]
    fn origin_interior_requires_spanning_exponents() {
        // In two variables, x1 + 1/x1 has 0 in its hull but spans only a line.
        let w = LaurentPolynomial::new(
            2,
            vec![(vec![1, 0], rat(1, 1)), (vec![-1, 0], rat(1, 1))],
        )
        .unwrap();
        let v = validate_support(&w);
        assert_eq!(v.polytope_dim, 1);
        assert!(!v.origin_interior);
        assert!(v.failure_direction.is_none());
    }

    #[test]
    fn integer_certificates_match_hand_values() {
        let cases: [(&str, &[(&[i64], i64)], u64); 3] = [
            ("x1 + x1^-1", &[(&[1], 1), (&[-1], 1)], 2),
            (
                "x1 + x2 + x1^-1*x2^-1",
                &[(&[1, 0], 1), (&[0, 1], 1), (&[-1, -1], 1)],
                3,
            ),
            (
                // Exponents of the once-blown-up plane potential force
                // λ = (1/5, 1/5, 2/5, 1/5).
                "x1 + x2 + x1^-1*x2^-1 + x1*x2",
                &[(&[1, 0], 1), (&[0, 1], 1), (&[-1, -1], 2), (&[1, 1], 1)],
                5,
            ),
        ];
        for (text, expected, period) in cases {
            let v = validate_support(&poly(text));
            let cert = nonvanishing_certificate(&v).unwrap();
            assert_eq!(cert.period, period, "{text}");
            for (exponent, weight) in expected {
                assert_eq!(
                    cert.weights.get(*exponent),
                    Some(&BigInt::from(*weight)),
                    "{text}: weight of {exponent:?}"
                );
            }
            let mut balance = vec![BigInt::zero(); 2];
            for (n, w) in &cert.weights {
                for (bi, &ni) in balance.iter_mut().zip(n) {
                    *bi += w * BigInt::from(ni);
                }
            }
            assert!(balance.iter().take(v.polytope_dim).all(Zero::is_zero));
        }
    }

    #[test]
    fn no_certificate_without_interior() {
        let v = validate_support(&poly("x1 + x2"));
        assert_eq!(nonvanishing_certificate(&v), Err(PolytopeError::NoCertificate));
    }
}
