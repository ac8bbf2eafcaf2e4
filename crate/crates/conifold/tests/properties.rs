//! Cross-module properties: invariants that tie the exact combinatorial
//! layer, the float solver, and the moment engine to each other. The
//! randomized loops use fixed seeds; the proptest cases shrink on failure.

mod common;

use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{corpus, random_unimodular, sup_distance};
use conifold::laurent::{LaurentError, LaurentPolynomial, LogPoint};
use conifold::moments::{growth_estimate, moment_sequence, period_ratios};
use conifold::polytope::{nonvanishing_certificate, validate_support};
use conifold::rational::rational_to_f64;
use conifold::solver::{find_conifold_point, SolverError, SolverOptions};

/// Exponentials computed by the solver and the exact moments agree: every
/// moment is bounded by the corresponding power of the critical value,
/// because the constant term of `W^k` cannot exceed its value at the
/// minimizer of `W`.
#[test]
fn moments_are_bounded_by_critical_value_powers() {
    let options = SolverOptions::default();
    for (name, w) in &corpus() {
        let kmax = if w.dimension() >= 3 { 30 } else { 48 };
        let report = find_conifold_point(w, &options).unwrap();
        let sequence = moment_sequence(w, kmax).unwrap();
        let mut power = 1.0f64;
        for (k, value) in sequence.values.iter().enumerate() {
            assert!(
                rational_to_f64(value) <= power * (1.0 + 1e-9),
                "{name}: moment {k} exceeds T^{k}"
            );
            power *= report.critical_value;
        }
    }
}

/// Per-period moment ratios stay below `T^K` and settle monotonically from
/// below once the sequence is past its initial transient.
#[test]
fn period_ratios_approach_the_critical_value_from_below() {
    let options = SolverOptions::default();
    for (name, w) in &corpus() {
        if w.dimension() > 2 {
            continue;
        }
        let report = find_conifold_point(w, &options).unwrap();
        let sequence = moment_sequence(w, 60).unwrap();
        let period = sequence.period.expect("corpus satisfies the hypothesis") as usize;
        let ratios = period_ratios(&sequence);
        assert!(ratios.len() >= 5, "{name}: not enough ratios to test");
        let ceiling = report.critical_value.powi(period as i32) * (1.0 + 1e-9);
        for &(k, ratio) in &ratios {
            assert!(ratio <= ceiling, "{name}: ratio at {k} exceeds T^K");
        }
        for pair in ratios[ratios.len() - 5..].windows(2) {
            assert!(
                pair[1].1 >= pair[0].1 * (1.0 - 1e-9),
                "{name}: late ratios not monotone: {:?} then {:?}",
                pair[0],
                pair[1]
            );
        }
    }
}

/// The hypothesis verdict is a property of the support lattice geometry,
/// so lattice basis changes and coefficient rescalings cannot move it.
#[test]
fn validation_is_invariant_under_basis_change_and_scaling() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let inputs: Vec<LaurentPolynomial> = corpus()
        .into_iter()
        .map(|(_, w)| w)
        .chain([
            LaurentPolynomial::parse("x1 + x2").unwrap(),
            LaurentPolynomial::parse("1 + x1 + x2 + x1*x2").unwrap(),
        ])
        .collect();
    for w in &inputs {
        let validation = validate_support(w);
        for _ in 0..3 {
            let (matrix, _) = random_unimodular(&mut rng, w.dimension(), 5);
            let mapped = validate_support(&w.substitute_monomial(&matrix).unwrap());
            assert_eq!(mapped.origin_interior, validation.origin_interior);
            assert_eq!(mapped.polytope_dim, validation.polytope_dim);
        }
        let scaled = w.scale(&BigRational::new(9.into(), 7.into())).unwrap();
        // The certificate depends on the support alone, so it is not merely
        // an equivalent witness — it is the identical map.
        assert_eq!(validate_support(&scaled), validation);
    }
}

/// Nonvanishing holds where the certificate says it must: `M_{jK} > 0`
/// exactly, for every corpus entry.
#[test]
fn certified_moments_do_not_vanish_on_the_corpus() {
    for (name, w) in &corpus() {
        let certificate = nonvanishing_certificate(&validate_support(w)).unwrap();
        let period = certificate.period as usize;
        let sequence = moment_sequence(w, 3 * period).unwrap();
        for j in 1..=3usize {
            assert!(
                sequence.values[j * period] > BigRational::zero(),
                "{name}: M at {} vanished",
                j * period
            );
        }
        // The weights themselves recompute the period.
        let weight_total: num_bigint::BigInt = certificate.weights.values().sum();
        assert_eq!(weight_total, certificate.period.into(), "{name}");
    }
}

/// Rejections carry usable evidence: the failure direction is a nonzero
/// integer vector pairing nonpositively with the entire support, and the
/// function really is non-increasing along it.
#[test]
fn failure_directions_certify_descent() {
    for text in [
        "1 + x1",
        "x1 + x1^2 + x1*x2 + x1*x2^-1",
        "x1*x2 + x1^2*x2 + x1*x2^2",
    ] {
        let w = LaurentPolynomial::parse(text).unwrap();
        let error = find_conifold_point(&w, &SolverOptions::default()).unwrap_err();
        let SolverError::HypothesisViolated(validation) = error else {
            panic!("{text}: expected a hypothesis violation");
        };
        let direction = validation.failure_direction.expect("full-dimensional failure");
        assert!(direction.iter().any(|&c| c != 0), "{text}: zero direction");
        for exponent in w.exponents() {
            let dot: i64 = direction.iter().zip(exponent).map(|(v, n)| v * n).sum();
            assert!(dot <= 0, "{text}: direction pairs positively with {exponent:?}");
        }
        let mut previous = f64::INFINITY;
        for t in [0.0, 1.0, 10.0, 100.0] {
            let point =
                LogPoint::new(direction.iter().map(|&v| t * v as f64).collect()).unwrap();
            let value = w.evaluate_log(&point).unwrap();
            assert!(
                value <= previous * (1.0 + 1e-12),
                "{text}: value rose along the failure direction at t = {t}"
            );
            previous = value;
        }
    }
}

/// Scaling the polynomial scales every moment by `c^k`, so the growth
/// estimate scales by exactly `c`.
#[test]
fn growth_estimate_scales_linearly() {
    let w = LaurentPolynomial::parse("x1 + x2 + x1^-1*x2^-1").unwrap();
    let factor = BigRational::new(5.into(), 2.into());
    let base = growth_estimate(&moment_sequence(&w, 60).unwrap()).unwrap();
    let scaled =
        growth_estimate(&moment_sequence(&w.scale(&factor).unwrap(), 60).unwrap()).unwrap();
    assert!(
        (scaled - 2.5 * base).abs() <= 1e-12 * scaled.abs(),
        "scaling moved the estimate from {base} to {scaled}"
    );
}

/// Stretching a lattice direction (determinant 2) must be refused: the
/// substitution would not be invertible over the lattice.
#[test]
fn non_unimodular_substitutions_are_refused() {
    let w = LaurentPolynomial::parse("x1 + x2 + x1^-1*x2^-1").unwrap();
    let error = w
        .substitute_monomial(&[vec![2, 0], vec![0, 1]])
        .unwrap_err();
    assert_eq!(error, LaurentError::NotUnimodular);
}

/// Solving commutes with solving-after-substitution on a concrete shear:
/// the two minimizers describe the same torus point in different bases.
#[test]
fn shear_transports_the_minimizer() {
    let w = LaurentPolynomial::parse("2*x1^2*x2 + x1^-1*x2 + x2^-1").unwrap();
    let matrix = vec![vec![1, 1], vec![0, 1]];
    let sheared = w.substitute_monomial(&matrix).unwrap();
    let options = SolverOptions::default();
    let base = find_conifold_point(&w, &options).unwrap();
    let mapped = find_conifold_point(&sheared, &options).unwrap();
    // v = M^{-T} u with M = [[1,1],[0,1]]: M^{-T} = [[1,0],[-1,1]].
    let expected = [
        base.point_log.coords()[0],
        base.point_log.coords()[1] - base.point_log.coords()[0],
    ];
    assert!(sup_distance(mapped.point_log.coords(), &expected) <= 1e-8);
    assert!((mapped.critical_value - base.critical_value).abs() <= 1e-9 * base.critical_value);
}

/// Random-start agreement for a handful of seeds beyond the acceptance
/// sweep, checking the multiplicative coordinates as well.
#[test]
fn multiplicative_coordinates_exponentiate_the_log_point() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let options = SolverOptions::default();
    for (name, w) in &corpus() {
        let start = common::random_point(&mut rng, w.dimension(), 2.0);
        let report = conifold::solver::find_conifold_point_from(w, &start, &options).unwrap();
        for (log, mult) in report.point_log.coords().iter().zip(&report.point_mult) {
            assert!(
                (log.exp() - mult).abs() <= 1e-12 * mult.abs().max(1.0),
                "{name}: multiplicative point out of sync"
            );
        }
    }
}

fn coefficient_strategy() -> impl Strategy<Value = BigRational> {
    (1i64..200, 1i64..200)
        .prop_map(|(p, q)| BigRational::new(p.into(), q.into()))
}

fn polynomial_strategy() -> impl Strategy<Value = LaurentPolynomial> {
    (1usize..=3)
        .prop_flat_map(|d| {
            (
                Just(d),
                proptest::collection::vec(
                    (
                        proptest::collection::vec(-5i64..=5, d),
                        coefficient_strategy(),
                    ),
                    1..6,
                ),
            )
        })
        .prop_map(|(d, terms)| {
            LaurentPolynomial::new(d, terms).expect("positive coefficients always build")
        })
}

proptest! {
    /// The canonical text form parses back to the identical polynomial —
    /// provided the text mentions the last variable at all. The grammar
    /// infers the dimension from the highest variable index, so inputs
    /// silent about their final coordinate (constants, say) have no exact
    /// text form; the JSON form is the lossless one.
    #[test]
    fn display_parse_round_trip(
        w in polynomial_strategy().prop_filter(
            "display must pin the dimension",
            |w| w.exponents().any(|n| n[w.dimension() - 1] != 0),
        )
    ) {
        let reparsed = LaurentPolynomial::parse(&w.to_string()).unwrap();
        prop_assert_eq!(reparsed, w);
    }

    /// The JSON form deserializes back to the identical polynomial.
    #[test]
    fn json_round_trip(w in polynomial_strategy()) {
        let json = serde_json::to_string(&w).unwrap();
        let reparsed: LaurentPolynomial = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(reparsed, w);
    }

    /// The zeroth moment is one and a lone moment run never panics.
    #[test]
    fn moment_sequences_start_at_one(w in polynomial_strategy()) {
        if let Ok(sequence) = moment_sequence(&w, 6) {
            prop_assert!(sequence.values[0].is_one());
            prop_assert!(sequence.support.first() == Some(&0));
            prop_assert_eq!(sequence.values.len(), 7);
        }
    }

    /// The interiority verdict never depends on coefficient values.
    #[test]
    fn validation_ignores_coefficients(
        w in polynomial_strategy(),
        factor in coefficient_strategy(),
    ) {
        let scaled = w.scale(&factor).unwrap();
        prop_assert_eq!(validate_support(&scaled), validate_support(&w));
    }
}
