//! Exact symbolic scalar arithmetic over formal irrational generators.
//!
//! `SymbolicScalar` is a fraction of multivariate polynomials with exact
//! rational coefficients in the declared generators.  Equality is decided by
//! cross-multiplication; signs are certified by interval arithmetic against
//! the anchors stored in a [`GeneratorEnv`], refining until the interval
//! excludes zero or the budget runs out.

mod env;
mod interval;
mod poly;
mod scalar;

pub use env::{Anchor, GeneratorEnv, DEFAULT_MAX_REFINEMENTS};
pub use interval::Interval;
pub use poly::{Mono, Poly};
pub use scalar::{scalar_arith, ScalarOp, Sign, SignVerdict, SymbolicScalar};

use num_bigint::BigInt;
use num_rational::BigRational;

/// Shorthand for an exact rational from an integer pair.
pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses "p/q" or a plain integer or decimal string into an exact rational.
///
/// Decimal and scientific forms ("0.618", "1e-6") convert exactly.
pub fn parse_rational(s: &str) -> crate::Result<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let num = parse_decimal(p)?;
        let den = parse_decimal(q)?;
        if den == BigRational::from(BigInt::from(0)) {
            return Err(crate::Error::ConfigParse(format!("zero denominator in `{s}`")));
        }
        return Ok(num / den);
    }
    parse_decimal(s)
}

fn parse_decimal(s: &str) -> crate::Result<BigRational> {
    let s = s.trim();
    let bad = || crate::Error::ConfigParse(format!("cannot parse rational `{s}`"));
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (sign, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (-1i64, rest),
        None => (1i64, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let joined = format!("{int_part}{frac_part}");
    let n: BigInt = joined.parse().map_err(|_| bad())?;
    let scale = frac_part.len() as i32;
    let mut value = BigRational::from(n * BigInt::from(sign));
    let net = exp - scale;
    let ten = BigInt::from(10);
    if net >= 0 {
        value *= BigRational::from(ten.pow(net as u32));
    } else {
        value /= BigRational::from(ten.pow((-net) as u32));
    }
    Ok(value)
}

/// Serializes a rational as a decimal-free "p/q" string ("p" when q = 1).
pub fn rational_string(r: &BigRational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses a scalar expression over the environment's generators.
///
/// Grammar: sums/differences of terms, terms are products/quotients of
/// factors, factors are rational literals, generator names, or
/// parenthesized expressions.  Examples: `theta`, `1/2`, `1 - theta`,
/// `theta/(2+theta)`, `3*alpha*beta`.
pub fn parse_scalar_expr(input: &str, env: &GeneratorEnv) -> crate::Result<SymbolicScalar> {
    let mut p = ExprParser {
        src: input.as_bytes(),
        pos: 0,
        env,
    };
    let value = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(crate::Error::ConfigParse(format!(
            "trailing input at byte {} in `{input}`",
            p.pos
        )));
    }
    Ok(value)
}

struct ExprParser<'a> {
    src: &'a [u8],
    pos: usize,
    env: &'a GeneratorEnv,
}

impl ExprParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> crate::Result<SymbolicScalar> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> crate::Result<SymbolicScalar> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    acc = acc.div(&self.factor()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> crate::Result<SymbolicScalar> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(crate::Error::ConfigParse("missing `)`".into()));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self
                    .src
                    .get(self.pos)
                    .is_some_and(|c| c.is_ascii_digit() || *c == b'.')
                {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Ok(SymbolicScalar::from_rational(parse_rational(text)?))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self
                    .src
                    .get(self.pos)
                    .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let idx = self.env.index_of(name).ok_or_else(|| {
                    crate::Error::ConfigParse(format!("unknown generator `{name}`"))
                })?;
                Ok(SymbolicScalar::generator(idx, self.env.len()))
            }
            other => Err(crate::Error::ConfigParse(format!(
                "unexpected token {other:?} in scalar expression"
            ))),
        }
    }
}
