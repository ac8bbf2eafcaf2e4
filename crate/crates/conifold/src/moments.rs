//! Exact constant-term sequences and their growth rate.
//!
//! The k-th moment `M_k` is the constant term (exponent-zero coefficient) of
//! `W^k`. Coefficients being positive, `M_k` counts weighted lattice walks
//! and can never cancel, so `M_{jK} > 0` for the certificate period `K` of
//! the support validation, and `M_k ≤ T^k` by evaluating `W^k ≥ its constant
//! term` at the conifold point. The sequence grows like `T^k` up to a
//! subexponential factor; taking ratios one period apart cancels that factor
//! to first order, which is why the estimator converges far faster than
//! plain k-th roots.
//!
//! Arithmetic is exact: coefficients are scaled to big integers by the
//! common denominator and powers accumulate in a sparse exponent map.

use std::collections::HashMap;
use std::fmt;
use std::io;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::laurent::LaurentPolynomial;
use crate::polytope::{nonvanishing_certificate, validate_support};
use crate::rational::{format_rational, rational_ln, rational_to_f64};
use crate::solver::{find_conifold_point, SolverError, SolverOptions};

/// Exact moments `M_0..M_kmax` plus the nonvanishing bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSequence {
    pub kmax: usize,
    /// `values[k] = M_k`, exact.
    pub values: Vec<BigRational>,
    /// Certificate period `K` with `M_{jK} > 0`; absent when the origin is
    /// not interior to the Newton polytope.
    pub period: Option<u64>,
    /// Sorted indices with `M_k ≠ 0`.
    pub support: Vec<usize>,
}

/// Resource guard for the power iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentOptions {
    /// Upper bound on `(kmax·diameter + 1)^d`, the predicted term count of
    /// the final power.
    pub term_budget: u64,
}

impl Default for MomentOptions {
    fn default() -> Self {
        MomentOptions { term_budget: 10_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MomentsError {
    /// Predicted term count exceeds the budget; nothing was computed.
    TermBudgetExceeded { predicted: u128, budget: u64 },
    /// Too few nonzero moments to estimate growth.
    InsufficientData { nonzero: usize },
    Solver(SolverError),
}

impl fmt::Display for MomentsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MomentsError::TermBudgetExceeded { predicted, budget } => write!(
                f,
                "predicted {predicted} terms in the final power exceeds the budget of {budget}"
            ),
            MomentsError::InsufficientData { nonzero } => {
                write!(f, "only {nonzero} nonzero moments; at least 10 are needed")
            }
            MomentsError::Solver(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for MomentsError {}

impl From<SolverError> for MomentsError {
    fn from(e: SolverError) -> Self {
        MomentsError::Solver(e)
    }
}

/// Compute `M_0..M_kmax` exactly with the default term budget.
pub fn moment_sequence(
    w: &LaurentPolynomial,
    kmax: usize,
) -> Result<MomentSequence, MomentsError> {
    moment_sequence_with(w, kmax, &MomentOptions::default())
}

/// Compute `M_0..M_kmax` exactly by iterated sparse multiplication.
pub fn moment_sequence_with(
    w: &LaurentPolynomial,
    kmax: usize,
    options: &MomentOptions,
) -> Result<MomentSequence, MomentsError> {
    let d = w.dimension();
    let diameter = (0..d)
        .map(|i| {
            let max = w.exponents().map(|n| n[i]).max().unwrap();
            let min = w.exponents().map(|n| n[i]).min().unwrap();
            (max - min) as u128
        })
        .max()
        .unwrap_or(0);
    let predicted = (kmax as u128 * diameter + 1)
        .checked_pow(d as u32)
        .unwrap_or(u128::MAX);
    if predicted > u128::from(options.term_budget) {
        return Err(MomentsError::TermBudgetExceeded {
            predicted,
            budget: options.term_budget,
        });
    }

    // Scale to integer coefficients: W = W_int / scale.
    let scale: BigInt = w
        .terms()
        .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let integral: Vec<(Vec<i64>, BigInt)> = w
        .terms()
        .map(|(n, c)| (n.to_vec(), c.numer() * (&scale / c.denom())))
        .collect();

    let zero_exponent = vec![0i64; d];
    let mut power: HashMap<Vec<i64>, BigInt> = HashMap::new();
    power.insert(zero_exponent.clone(), BigInt::one());
    let mut scale_power = BigInt::one();
    let mut values = Vec::with_capacity(kmax + 1);
    values.push(BigRational::one());
    for _ in 1..=kmax {
        let mut next: HashMap<Vec<i64>, BigInt> =
            HashMap::with_capacity(power.len() * integral.len() / 2 + 1);
        for (exponent, coefficient) in &power {
            for (step, weight) in &integral {
                let key: Vec<i64> = exponent.iter().zip(step).map(|(a, b)| a + b).collect();
                let product = coefficient * weight;
                match next.entry(key) {
                    std::collections::hash_map::Entry::Occupied(mut slot) => {
                        *slot.get_mut() += product;
                    }
                    std::collections::hash_map::Entry::Vacant(slot) => {
                        slot.insert(product);
                    }
                }
            }
        }
        power = next;
        scale_power *= &scale;
        let constant_term = power.get(&zero_exponent).cloned().unwrap_or_else(BigInt::zero);
        values.push(BigRational::new(constant_term, scale_power.clone()));
    }

    let support: Vec<usize> = values
        .iter()
        .enumerate()
        .filter(|(_, m)| !m.is_zero())
        .map(|(k, _)| k)
        .collect();
    let period = nonvanishing_certificate(&validate_support(w))
        .ok()
        .map(|certificate| certificate.period);
    Ok(MomentSequence { kmax, values, period, support })
}

/// Estimate `limsup M_k^{1/k}` from the tail of the sequence.
///
/// Preferred form: the ratio `(M_{k₂}/M_{k₁})^{1/K}` across the last
/// available full period `K = k₂ − k₁`, which cancels the subexponential
/// factor to first order. Falls back to the plain root `M_k^{1/k}` at the
/// largest nonzero index when no period ratio is available.
pub fn growth_estimate(sequence: &MomentSequence) -> Result<f64, MomentsError> {
    if sequence.support.len() < 10 {
        return Err(MomentsError::InsufficientData { nonzero: sequence.support.len() });
    }
    if let Some(period) = sequence.period {
        let period = period as usize;
        for &high in sequence.support.iter().rev() {
            if high < period {
                break;
            }
            let low = high - period;
            if sequence.support.binary_search(&low).is_ok() {
                let ratio = &sequence.values[high] / &sequence.values[low];
                return Ok(rational_to_f64(&ratio).powf(1.0 / period as f64));
            }
        }
    }
    let largest = *sequence.support.last().unwrap();
    debug_assert!(largest > 0, "ten nonzero moments force a positive index");
    Ok((rational_ln(&sequence.values[largest]) / largest as f64).exp())
}

/// All per-period ratios `(k, M_{k+K}/M_k)` available in the sequence, in
/// ascending `k`. Empty when no certificate period exists.
pub fn period_ratios(sequence: &MomentSequence) -> Vec<(usize, f64)> {
    let Some(period) = sequence.period else {
        return Vec::new();
    };
    let period = period as usize;
    let mut ratios = Vec::new();
    for &k in &sequence.support {
        let next = k + period;
        if next <= sequence.kmax && sequence.support.binary_search(&next).is_ok() {
            let ratio = &sequence.values[next] / &sequence.values[k];
            ratios.push((k, rational_to_f64(&ratio)));
        }
    }
    ratios
}

/// Side-by-side comparison of the critical value and the moment growth rate.
#[derive(Debug, Clone, PartialEq)]
pub struct DkReport {
    /// `T = W(P)` from the solver.
    pub critical_value: f64,
    /// Moment growth estimate of `limsup M_k^{1/k}`.
    pub estimate: f64,
    /// `|estimate − T| / T`.
    pub relative_gap: f64,
    /// Implied radius of convergence `1/T` of the moment generating series.
    pub radius: f64,
}

/// Run the solver and the moment engine and report both growth numbers.
pub fn dk_report(
    w: &LaurentPolynomial,
    kmax: usize,
    solver_options: &SolverOptions,
) -> Result<DkReport, MomentsError> {
    let conifold = find_conifold_point(w, solver_options)?;
    let sequence = moment_sequence(w, kmax)?;
    let estimate = growth_estimate(&sequence)?;
    let critical_value = conifold.critical_value;
    Ok(DkReport {
        critical_value,
        estimate,
        relative_gap: (estimate - critical_value).abs() / critical_value,
        radius: 1.0 / critical_value,
    })
}

/// Write the sequence as `k,M_k` CSV rows with exact rational values.
pub fn write_csv(sequence: &MomentSequence, out: &mut impl io::Write) -> io::Result<()> {
    writeln!(out, "k,M_k")?;
    for (k, value) in sequence.values.iter().enumerate() {
        writeln!(out, "{k},{}", format_rational(value))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(text: &str) -> LaurentPolynomial {
        LaurentPolynomial::parse(text).unwrap()
    }

    fn int(v: i64) -> BigRational {
        BigRational::from(BigInt::from(v))
    }

    #[test]
    fn central_binomial_prefix() {
        let seq = moment_sequence(&poly("x1 + x1^-1"), 4).unwrap();
        assert_eq!(seq.values, vec![int(1), int(0), int(2), int(0), int(6)]);
        assert_eq!(seq.support, vec![0, 2, 4]);
        assert_eq!(seq.period, Some(2));
    }

    #[test]
    fn trinomial_walk_counts() {
        let seq = moment_sequence(&poly("x1 + x2 + x1^-1*x2^-1"), 3).unwrap();
        assert_eq!(seq.values, vec![int(1), int(0), int(0), int(6)]);
        let constant = moment_sequence(&poly("1 + x1 + x1^-1"), 1).unwrap();
        assert_eq!(constant.values, vec![int(1), int(1)]);
    }

    #[test]
    fn central_binomials_exact_to_sixty() {
        let seq = moment_sequence(&poly("x1 + x1^-1"), 60).unwrap();
        let mut binomial = BigInt::one();
        for m in 0..=30usize {
            // binomial = C(2m, m), updated multiplicatively.
            if m > 0 {
                binomial = binomial * BigInt::from(2 * m - 1) * BigInt::from(2 * m)
                    / (BigInt::from(m) * BigInt::from(m));
            }
            assert_eq!(seq.values[2 * m], BigRational::from(binomial.clone()));
            if 2 * m < 60 {
                assert!(seq.values[2 * m + 1].is_zero());
            }
        }
    }

    #[test]
    fn rational_coefficients_stay_exact() {
        // (3/2·x + 1/2·x^{−2})³ has constant term 3·(3/2)²·(1/2) = 27/8.
        let seq = moment_sequence(&poly("3/2*x1 + 1/2*x1^-2"), 3).unwrap();
        assert_eq!(seq.values[3], BigRational::new(BigInt::from(27), BigInt::from(8)));
        assert_eq!(seq.period, Some(3));
    }

    #[test]
    fn budget_guardrail_trips_before_any_work() {
        let err = moment_sequence(&poly("x1 + x2 + x3 + x1^-1*x2^-1*x3^-1"), 300).unwrap_err();
        match err {
            MomentsError::TermBudgetExceeded { predicted, budget } => {
                assert!(predicted > u128::from(budget));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn growth_estimate_uses_period_ratio() {
        let seq = moment_sequence(&poly("x1 + x1^-1"), 60).unwrap();
        let estimate = growth_estimate(&seq).unwrap();
        // (C(60,30)/C(58,29))^{1/2} = ((59·60)/(30·30))^{1/2}.
        let expected = (59.0 * 60.0 / 900.0f64).sqrt();
        assert!((estimate - expected).abs() < 1e-12);
        assert!((estimate - 2.0).abs() / 2.0 < 0.02);
    }

    #[test]
    fn growth_estimate_falls_back_to_roots() {
        // 1 + x1 is not origin-interior (no period), but all moments are 1.
        let seq = moment_sequence(&poly("1 + x1"), 12).unwrap();
        assert_eq!(seq.period, None);
        assert_eq!(growth_estimate(&seq).unwrap(), 1.0);
    }

    #[test]
    fn growth_estimate_needs_data() {
        let seq = moment_sequence(&poly("x1 + x1^-1"), 10).unwrap();
        assert!(matches!(
            growth_estimate(&seq),
            Err(MomentsError::InsufficientData { nonzero: 6 })
        ));
    }

    #[test]
    fn ratios_increase_toward_the_square_of_the_growth_rate() {
        let seq = moment_sequence(&poly("x1 + x1^-1"), 40).unwrap();
        let ratios = period_ratios(&seq);
        assert!(!ratios.is_empty());
        for pair in ratios.windows(2) {
            assert!(pair[1].1 > pair[0].1);
        }
        assert!(ratios.last().unwrap().1 < 4.0);
    }

    #[test]
    fn unimodular_substitution_preserves_moments() {
        let w = poly("x1^2*x2^-1 + x1^-1*x2^2 + x1^-1*x2^-1");
        let sheared = w.substitute_monomial(&[vec![1, 1], vec![0, 1]]).unwrap();
        let a = moment_sequence(&w, 15).unwrap();
        let b = moment_sequence(&sheared, 15).unwrap();
        assert_eq!(a.values, b.values);
        assert_eq!(a.support, b.support);
    }

    #[test]
    fn dk_report_on_the_balanced_pair() {
        let report = dk_report(&poly("x1 + x1^-1"), 200, &SolverOptions::default()).unwrap();
        assert!((report.critical_value - 2.0).abs() < 1e-12);
        assert!((report.radius - 0.5).abs() < 1e-12);
        assert!(report.relative_gap <= 0.02);
    }

    #[test]
    fn csv_layout() {
        let seq = moment_sequence(&poly("3/2*x1 + 1/2*x1^-2"), 3).unwrap();
        let mut buffer = Vec::new();
        write_csv(&seq, &mut buffer).unwrap();
        let text = String::from_utf8(buffer).unwrap();
        assert_eq!(text, "k,M_k\n0,1\n1,0\n2,0\n3,27/8\n");
    }
}
