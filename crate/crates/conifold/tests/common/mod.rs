//! Shared fixtures for the integration suites: a corpus of polynomials
//! satisfying the interiority hypothesis, random lattice-basis changes with
//! tracked inverses, and exact coefficient twists.
//!
//! Each test binary compiles this module independently, so helpers used by
//! one suite look dead to another.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::Rng;

use conifold::laurent::{LaurentPolynomial, LogPoint};

/// Named polynomials whose Newton polytope strictly contains the origin.
/// Dimensions 1 through 3, symmetric and lopsided, unit and non-unit
/// coefficients.
pub fn corpus() -> Vec<(&'static str, LaurentPolynomial)> {
    [
        ("circle", "x1 + x1^-1"),
        ("lopsided-circle", "2*x1 + x1^-1"),
        ("circle-with-center", "1 + x1 + x1^-1"),
        ("cubic-tail", "3/2*x1 + 1/2*x1^-2"),
        ("plane", "x1 + x2 + x1^-1*x2^-1"),
        ("orbifold", "x1^2*x2^-1 + x1^-1*x2^2 + x1^-1*x2^-1"),
        ("hexagon", "x1 + x2 + x1^-1 + x2^-1 + x1*x2 + x1^-1*x2^-1"),
        ("square", "x1 + x1^-1 + x2 + x2^-1"),
        ("blowup", "x1 + x2 + x1^-1*x2^-1 + x1*x2"),
        ("asymmetric", "2*x1^2*x2 + x1^-1*x2 + x2^-1"),
        ("space", "x1 + x2 + x3 + x1^-1*x2^-1*x3^-1"),
    ]
    .into_iter()
    .map(|(name, text)| {
        (
            name,
            LaurentPolynomial::parse(text).expect("corpus entries parse"),
        )
    })
    .collect()
}

/// Uniform point in `[-radius, radius]^d`.
pub fn random_point(rng: &mut impl Rng, d: usize, radius: f64) -> LogPoint {
    LogPoint::new((0..d).map(|_| rng.gen_range(-radius..=radius)).collect())
        .expect("bounded coordinates are finite")
}

fn identity(d: usize) -> Vec<Vec<i64>> {
    (0..d)
        .map(|i| (0..d).map(|j| i64::from(i == j)).collect())
        .collect()
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let d = a.len();
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| (0..d).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// Random product of shears, swaps, and sign flips, returned together with
/// its exact inverse. Determinant is ±1 by construction and entries stay
/// small (few factors, shear offsets in ±2).
pub fn random_unimodular(rng: &mut impl Rng, d: usize, steps: usize) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let mut m = identity(d);
    let mut m_inv = identity(d);
    for _ in 0..steps {
        let mut e = identity(d);
        let mut e_inv = identity(d);
        match rng.gen_range(0..3) {
            0 if d > 1 => {
                let i = rng.gen_range(0..d);
                let mut j = rng.gen_range(0..d - 1);
                if j >= i {
                    j += 1;
                }
                let c = *[-2i64, -1, 1, 2].get(rng.gen_range(0..4)).unwrap();
                e[i][j] = c;
                e_inv[i][j] = -c;
            }
            1 if d > 1 => {
                let i = rng.gen_range(0..d);
                let mut j = rng.gen_range(0..d - 1);
                if j >= i {
                    j += 1;
                }
                e[i][i] = 0;
                e[j][j] = 0;
                e[i][j] = 1;
                e[j][i] = 1;
                e_inv = e.clone();
            }
            _ => {
                let i = rng.gen_range(0..d);
                e[i][i] = -1;
                e_inv = e.clone();
            }
        }
        m = mat_mul(&e, &m);
        m_inv = mat_mul(&m_inv, &e_inv);
    }
    (m, m_inv)
}

pub fn mat_vec(m: &[Vec<i64>], v: &[f64]) -> Vec<f64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(&a, x)| a as f64 * x).sum())
        .collect()
}

pub fn transpose(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let d = m.len();
    (0..d)
        .map(|j| (0..d).map(|i| m[i][j]).collect())
        .collect()
}

/// `base^exponent` for signed integer exponents.
pub fn rational_pow(base: &BigRational, exponent: i64) -> BigRational {
    let positive = BigRational::new(
        base.numer().pow(exponent.unsigned_abs() as u32),
        base.denom().pow(exponent.unsigned_abs() as u32),
    );
    if exponent < 0 {
        positive.recip()
    } else {
        positive
    }
}

/// Twist every coefficient by `ratios^n` — exactly the substitution
/// `x_i ↦ ratios_i · x_i`, which in log coordinates translates the
/// function by `(ln ratios_1, ..., ln ratios_d)`.
pub fn twist(w: &LaurentPolynomial, ratios: &[BigRational]) -> LaurentPolynomial {
    let terms: Vec<(Vec<i64>, BigRational)> = w
        .terms()
        .map(|(n, a)| {
            let multiplier = n
                .iter()
                .zip(ratios)
                .fold(BigRational::one(), |acc, (&e, r)| acc * rational_pow(r, e));
            (n.to_vec(), a.clone() * multiplier)
        })
        .collect();
    LaurentPolynomial::new(w.dimension(), terms).expect("positive times positive is positive")
}

/// Exact central binomial coefficient `C(2m, m)`.
pub fn central_binomial(m: usize) -> BigInt {
    let mut value = BigInt::one();
    for i in 1..=m {
        value = value * BigInt::from(m + i) / BigInt::from(i);
    }
    value
}

pub fn sup_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
