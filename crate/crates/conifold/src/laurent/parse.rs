//! Text parser for Laurent polynomials.
//!
//! Grammar (ASCII whitespace is allowed between tokens):
//!
//! ```text
//! polynomial := sign? term (('+' | '-') term)*
//! term       := coeff ('*' factor)* | factor ('*' factor)*
//! coeff      := digits | digits '/' digits | digits '.' digits
//! factor     := 'x' index ('^' sign? digits)?
//! ```
//!
//! Variable indices are 1-based (`x1`, `x2`, …) and the dimension of the
//! result is the largest index that appears. A `-` sign is accepted by the
//! grammar but rejected afterwards by the positivity check, so `x1 - x2`
//! fails with a coefficient error rather than a syntax error. Decimal
//! coefficients are converted exactly (`0.5` is the rational `1/2`).

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::One;

use super::{LaurentError, LaurentPolynomial};
use crate::rational::parse_rational;

pub(super) fn parse_polynomial(text: &str) -> Result<LaurentPolynomial, LaurentError> {
    Parser { bytes: text.as_bytes(), text, pos: 0 }.run()
}

struct Parser<'a> {
    bytes: &'a [u8],
    text: &'a str,
    pos: usize,
}

/// One parsed term: signed coefficient and exponents keyed by 1-based index.
struct RawTerm {
    coefficient: BigRational,
    exponents: BTreeMap<usize, i64>,
}

impl<'a> Parser<'a> {
    fn run(mut self) -> Result<LaurentPolynomial, LaurentError> {
        let mut raw_terms = Vec::new();
        self.skip_whitespace();
        let mut negative = self.take_sign();
        loop {
            raw_terms.push(self.term(negative)?);
            self.skip_whitespace();
            match self.peek() {
                None => break,
                Some(b'+') => {
                    self.pos += 1;
                    negative = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    negative = true;
                }
                Some(_) => return Err(self.error("expected '+', '-', or end of input")),
            }
            self.skip_whitespace();
        }

        let dimension = raw_terms
            .iter()
            .flat_map(|t| t.exponents.keys())
            .max()
            .copied()
            .ok_or_else(|| LaurentError::Syntax {
                position: 0,
                message: "polynomial must mention at least one variable".into(),
            })?;
        LaurentPolynomial::new(
            dimension,
            raw_terms.into_iter().map(|t| {
                let mut exponent = vec![0i64; dimension];
                for (index, e) in t.exponents {
                    exponent[index - 1] = e;
                }
                (exponent, t.coefficient)
            }),
        )
    }

    fn term(&mut self, negative: bool) -> Result<RawTerm, LaurentError> {
        self.skip_whitespace();
        let mut coefficient = BigRational::one();
        let mut exponents: BTreeMap<usize, i64> = BTreeMap::new();
        match self.peek() {
            Some(b'0'..=b'9') => coefficient = self.number()?,
            Some(b'x') => {
                let (index, e) = self.factor()?;
                *exponents.entry(index).or_insert(0) += e;
            }
            _ => return Err(self.error("expected a coefficient or a variable")),
        }
        loop {
            self.skip_whitespace();
            if self.peek() != Some(b'*') {
                break;
            }
            self.pos += 1;
            let (index, e) = self.factor()?;
            *exponents.entry(index).or_insert(0) += e;
        }
        if negative {
            coefficient = -coefficient;
        }
        Ok(RawTerm { coefficient, exponents })
    }

    /// `digits`, `digits/digits`, or `digits.digits`, converted exactly.
    fn number(&mut self) -> Result<BigRational, LaurentError> {
        let start = self.pos;
        self.digits("coefficient")?;
        match self.peek() {
            Some(b'/') => {
                self.pos += 1;
                self.digits("denominator")?;
            }
            Some(b'.') => {
                self.pos += 1;
                self.digits("fractional part")?;
            }
            _ => {}
        }
        let slice = &self.text[start..self.pos];
        parse_rational(slice).ok_or_else(|| LaurentError::Syntax {
            position: start,
            message: format!("invalid coefficient {slice:?}"),
        })
    }

    /// `'x' index ('^' sign? digits)?` with a 1-based index.
    fn factor(&mut self) -> Result<(usize, i64), LaurentError> {
        self.skip_whitespace();
        if self.peek() != Some(b'x') {
            return Err(self.error("expected a variable like x1"));
        }
        self.pos += 1;
        let index_start = self.pos;
        self.digits("variable index")?;
        let index: usize = self.text[index_start..self.pos]
            .parse()
            .map_err(|_| LaurentError::Syntax {
                position: index_start,
                message: "variable index out of range".into(),
            })?;
        if index == 0 {
            return Err(LaurentError::Syntax {
                position: index_start,
                message: "variable indices start at x1".into(),
            });
        }
        let mut exponent = 1i64;
        let checkpoint = self.pos;
        self.skip_whitespace();
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_whitespace();
            let exp_start = self.pos;
            if matches!(self.peek(), Some(b'+') | Some(b'-')) {
                self.pos += 1;
            }
            self.digits("exponent")?;
            exponent = self.text[exp_start..self.pos]
                .parse()
                .map_err(|_| LaurentError::Syntax {
                    position: exp_start,
                    message: "exponent out of range".into(),
                })?;
        } else {
            self.pos = checkpoint;
        }
        Ok((index, exponent))
    }

    fn digits(&mut self, what: &str) -> Result<(), LaurentError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error(&format!("expected digits for {what}")));
        }
        Ok(())
    }

    fn take_sign(&mut self) -> bool {
        match self.peek() {
            Some(b'+') => {
                self.pos += 1;
                self.skip_whitespace();
                false
            }
            Some(b'-') => {
                self.pos += 1;
                self.skip_whitespace();
                true
            }
            _ => false,
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_whitespace(&mut self) {
        while matches!(self.peek(), Some(b' ') | Some(b'\t') | Some(b'\n') | Some(b'\r')) {
            self.pos += 1;
        }
    }

    fn error(&self, message: &str) -> LaurentError {
        LaurentError::Syntax { position: self.pos, message: message.into() }
    }
}
