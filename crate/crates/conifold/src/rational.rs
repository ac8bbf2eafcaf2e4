//! Parsing and formatting of exact rational scalars.
//!
//! Coefficients live as `BigRational` everywhere in this crate. Text input
//! accepts integers (`3`), fractions (`3/2`), and decimal literals (`0.5`);
//! a decimal is converted to an exact fraction, never to a float. Output is
//! always `p` or `p/q` in lowest terms with a positive denominator.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Parse an integer, fraction, or decimal literal into an exact rational.
///
/// Signs are accepted here; the caller decides whether a negative value is
/// legal in its position.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some((numer, denom)) = text.split_once('/') {
        let numer: BigInt = numer.trim().parse().ok()?;
        let denom: BigInt = denom.trim().parse().ok()?;
        if denom.is_zero() {
            return None;
        }
        return Some(BigRational::new(numer, denom));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        // "0.5" -> 5/10; the fractional digits must all be decimal.
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let whole_int: BigInt = if whole.is_empty() || whole == "-" || whole == "+" {
            return None;
        } else {
            whole.parse().ok()?
        };
        let frac_int: BigInt = frac.parse().ok()?;
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let negative = whole.starts_with('-');
        let magnitude = whole_int.abs() * &scale + frac_int;
        let signed = if negative { -magnitude } else { magnitude };
        return Some(BigRational::new(signed, scale));
    }
    let value: BigInt = text.parse().ok()?;
    Some(BigRational::from_integer(value))
}

/// Format a rational as `p` (integer) or `p/q` (lowest terms, q > 0).
pub fn format_rational(value: &BigRational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Natural logarithm of a positive rational, robust to values far outside
/// the binary64 range.
pub fn rational_ln(value: &BigRational) -> f64 {
    debug_assert!(value.is_positive());
    bigint_ln(value.numer()) - bigint_ln(value.denom())
}

/// Convert to binary64, falling back to an exp/ln round-trip for magnitudes
/// outside the direct conversion range.
pub fn rational_to_f64(value: &BigRational) -> f64 {
    match value.to_f64() {
        Some(x) if x.is_finite() => x,
        _ => {
            if value.is_zero() {
                0.0
            } else {
                let magnitude = rational_ln(&value.abs()).exp();
                if value.is_negative() {
                    -magnitude
                } else {
                    magnitude
                }
            }
        }
    }
}

fn bigint_ln(value: &BigInt) -> f64 {
    debug_assert!(value.is_positive());
    let bits = value.bits();
    if bits <= 1000 {
        value.to_f64().expect("small BigInt converts").ln()
    } else {
        let shift = bits - 64;
        let mantissa = (value >> shift).to_f64().expect("64-bit mantissa converts");
        mantissa.ln() + shift as f64 * std::f64::consts::LN_2
    }
}
