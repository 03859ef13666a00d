use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::interval::Interval;
use super::poly::{univariate_div_exact, univariate_gcd, Poly};
use super::{Anchor, GeneratorEnv};
use crate::{Error, Result};

/// Certified sign of a symbolic scalar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

/// Outcome of interval-certified sign determination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum SignVerdict {
    Known(Sign),
    Undecided,
}

impl SignVerdict {
    pub fn is_positive(&self) -> bool {
        matches!(self, SignVerdict::Known(Sign::Positive))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, SignVerdict::Known(Sign::Zero))
    }

    pub fn is_nonnegative(&self) -> bool {
        matches!(self, SignVerdict::Known(Sign::Positive) | SignVerdict::Known(Sign::Zero))
    }
}

/// Element of the rational-function tower over the declared generators.
///
/// Canonical form: a zero numerator forces denominator 1; fractions in at
/// most one generator are gcd-reduced; the pair is scaled so the denominator
/// has integer coefficients with content one and positive graded-lex leading
/// coefficient.  Fractions over two or more generators stay unreduced and
/// equality is decided by cross-multiplication.
#[derive(Debug, Clone)]
pub struct SymbolicScalar {
    num: Poly,
    den: Poly,
}

impl SymbolicScalar {
    pub fn from_polys(num: Poly, den: Poly) -> Result<SymbolicScalar> {
        if den.is_zero() {
            return Err(Error::DivisionByZeroScalar);
        }
        Ok(SymbolicScalar { num, den }.canonicalized())
    }

    pub fn from_rational(r: BigRational) -> SymbolicScalar {
        SymbolicScalar {
            num: Poly::constant(r, 0),
            den: Poly::one(0),
        }
    }

    pub fn from_int(n: i64) -> SymbolicScalar {
        SymbolicScalar::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> SymbolicScalar {
        SymbolicScalar::from_int(0)
    }

    pub fn one() -> SymbolicScalar {
        SymbolicScalar::from_int(1)
    }

    /// The generator with the given index in an ambient of `nvars` generators.
    pub fn generator(idx: usize, nvars: usize) -> SymbolicScalar {
        SymbolicScalar {
            num: Poly::var(idx, nvars),
            den: Poly::one(nvars),
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self == &SymbolicScalar::one()
    }

    /// Rational value when the fraction carries no generator dependence.
    pub fn as_rational(&self) -> Option<BigRational> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n / d)
    }

    /// Integer value when the fraction is an exact integer constant.
    pub fn as_integer(&self) -> Option<BigInt> {
        let r = self.as_rational()?;
        if r.denom().is_one() {
            Some(r.numer().clone())
        } else {
            None
        }
    }

    fn canonicalized(self) -> SymbolicScalar {
        let mut num = self.num;
        let mut den = self.den;
        if num.is_zero() {
            return SymbolicScalar {
                num: Poly::zero(0),
                den: Poly::one(0),
            };
        }
        // univariate fractions are gcd-reduced
        let mut vars = num.support_vars();
        for v in den.support_vars() {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        if vars.len() == 1 {
            let v = vars[0];
            let a = num.univariate_coeffs(v).expect("support is univariate");
            let b = den.univariate_coeffs(v).expect("support is univariate");
            let g = univariate_gcd(&a, &b);
            if g.len() > 1 {
                let qa = univariate_div_exact(&a, &g);
                let qb = univariate_div_exact(&b, &g);
                num = Poly::from_univariate(&qa, v, num.nvars().max(v + 1));
                den = Poly::from_univariate(&qb, v, den.nvars().max(v + 1));
            }
        }
        // scale so the denominator is integer-primitive with positive lead
        let c = den.signed_content();
        let inv = BigRational::one() / c;
        num = num.scale(&inv);
        den = den.scale(&inv);
        SymbolicScalar { num, den }
    }

    pub fn add(&self, other: &SymbolicScalar) -> SymbolicScalar {
        let num = self
            .num
            .mul(&other.den)
            .add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        SymbolicScalar { num, den }.canonicalized()
    }

    pub fn sub(&self, other: &SymbolicScalar) -> SymbolicScalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> SymbolicScalar {
        SymbolicScalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
        .canonicalized()
    }

    pub fn mul(&self, other: &SymbolicScalar) -> SymbolicScalar {
        SymbolicScalar {
            num: self.num.mul(&other.num),
            den: self.den.mul(&other.den),
        }
        .canonicalized()
    }

    pub fn div(&self, other: &SymbolicScalar) -> Result<SymbolicScalar> {
        if other.is_zero() {
            return Err(Error::DivisionByZeroScalar);
        }
        Ok(SymbolicScalar {
            num: self.num.mul(&other.den),
            den: self.den.mul(&other.num),
        }
        .canonicalized())
    }

    pub fn scale_rational(&self, r: &BigRational) -> SymbolicScalar {
        SymbolicScalar {
            num: self.num.scale(r),
            den: self.den.clone(),
        }
        .canonicalized()
    }

    fn poly_interval(p: &Poly, env: &GeneratorEnv) -> Result<Interval> {
        let mut anchors: Vec<Option<&Anchor>> = vec![None; p.nvars()];
        for v in p.support_vars() {
            if v >= env.len() {
                return Err(Error::MissingAnchor(format!("generator #{v}")));
            }
            anchors[v] = Some(env.anchor(v)?);
        }
        let mut total = Interval::point(BigRational::zero());
        for (mono, coeff) in p.terms() {
            let mut term = Interval::point(BigRational::one());
            for (i, &e) in mono.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let a = anchors[i].expect("anchored above");
                let iv = Interval::new(&a.midpoint - &a.radius, &a.midpoint + &a.radius);
                term = term.mul(&iv.pow(e));
            }
            total = total.add(&term.scale(coeff));
        }
        Ok(total)
    }

    /// Sound rational enclosure of the value over the anchor boxes.
    ///
    /// The denominator must separate from zero; if the anchors are too coarse
    /// for that, they are refined up to the default budget before giving up.
    pub fn interval_eval(&self, env: &GeneratorEnv) -> Result<Interval> {
        if self.is_zero() {
            return Ok(Interval::point(BigRational::zero()));
        }
        let mut env = env.clone();
        for _ in 0..=super::DEFAULT_MAX_REFINEMENTS {
            let den_iv = Self::poly_interval(&self.den, &env)?;
            if let Some(den_recip) = den_iv.recip() {
                let num_iv = Self::poly_interval(&self.num, &env)?;
                return Ok(num_iv.mul(&den_recip));
            }
            env = env.refined();
        }
        Err(Error::IntervalUndefined)
    }

    /// Interval-certified sign; exact zeros are decided symbolically first.
    pub fn sign(&self, env: &GeneratorEnv, max_refinements: usize) -> Result<SignVerdict> {
        if self.is_zero() {
            return Ok(SignVerdict::Known(Sign::Zero));
        }
        let mut env = env.clone();
        for _ in 0..=max_refinements {
            let num_iv = Self::poly_interval(&self.num, &env)?;
            let den_iv = Self::poly_interval(&self.den, &env)?;
            if !num_iv.contains_zero() && !den_iv.contains_zero() {
                let positive = num_iv.is_positive() == den_iv.is_positive();
                return Ok(SignVerdict::Known(if positive {
                    Sign::Positive
                } else {
                    Sign::Negative
                }));
            }
            env = env.refined();
        }
        Ok(SignVerdict::Undecided)
    }

    /// Evaluates at the anchor midpoints in f64; spectral-layer plumbing.
    pub fn midpoint_f64(&self, env: &GeneratorEnv) -> Result<f64> {
        let eval_poly = |p: &Poly| -> Result<f64> {
            let mut acc = 0.0;
            for (mono, coeff) in p.terms() {
                let mut t = rational_to_f64(coeff);
                for (i, &e) in mono.0.iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    let a = env.anchor(i)?;
                    t *= rational_to_f64(&a.midpoint).powi(e as i32);
                }
                acc += t;
            }
            Ok(acc)
        };
        Ok(eval_poly(&self.num)? / eval_poly(&self.den)?)
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    let num = r.numer();
    let den = r.denom();
    // exact for desk-scale magnitudes; falls back to string parsing otherwise
    match (num.to_string().parse::<f64>(), den.to_string().parse::<f64>()) {
        (Ok(n), Ok(d)) => n / d,
        _ => f64::NAN,
    }
}

impl PartialEq for SymbolicScalar {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

fn poly_map(p: &Poly) -> std::collections::BTreeMap<String, String> {
    p.terms()
        .map(|(mono, coeff)| {
            let key = mono
                .0
                .iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(",");
            (key, super::rational_string(coeff))
        })
        .collect()
}

impl serde::Serialize for SymbolicScalar {
    /// Sparse {exponent-vector: coefficient} maps for numerator and
    /// denominator; coefficients are decimal-free "p/q" strings.
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("SymbolicScalar", 2)?;
        st.serialize_field("num", &poly_map(&self.num))?;
        st.serialize_field("den", &poly_map(&self.den))?;
        st.end()
    }
}

impl Eq for SymbolicScalar {}

impl fmt::Display for SymbolicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.as_constant().map(|c| c.is_one()).unwrap_or(false) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

/// Field operation selector for the scalar arithmetic entry point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Exact field arithmetic on symbolic scalars; results are canonical.
pub fn scalar_arith(
    op: ScalarOp,
    a: &SymbolicScalar,
    b: &SymbolicScalar,
) -> Result<SymbolicScalar> {
    match op {
        ScalarOp::Add => Ok(a.add(b)),
        ScalarOp::Sub => Ok(a.sub(b)),
        ScalarOp::Mul => Ok(a.mul(b)),
        ScalarOp::Div => a.div(b),
    }
}
