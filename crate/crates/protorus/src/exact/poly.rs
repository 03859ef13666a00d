use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exponent vector under graded-lexicographic order.
///
/// The vector length is the ambient number of generators; comparisons first
/// use total degree, then lexicographic order on the exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Mono) -> Mono {
        let n = self.0.len().max(other.0.len());
        let mut out = vec![0u32; n];
        for (i, e) in self.0.iter().enumerate() {
            out[i] += e;
        }
        for (i, e) in other.0.iter().enumerate() {
            out[i] += e;
        }
        Mono(out)
    }

    fn padded(&self, n: usize) -> Mono {
        let mut v = self.0.clone();
        v.resize(n.max(v.len()), 0);
        Mono(v)
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Mono, BigRational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Poly {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(c: BigRational, nvars: usize) -> Poly {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Mono(vec![0; nvars]), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Poly {
        Poly::constant(BigRational::one(), nvars)
    }

    /// The generator with the given index, in an ambient of `nvars` variables.
    pub fn var(idx: usize, nvars: usize) -> Poly {
        assert!(idx < nvars, "generator index out of range");
        let mut exps = vec![0u32; nvars];
        exps[idx] = 1;
        let mut p = Poly::zero(nvars);
        p.terms.insert(Mono(exps), BigRational::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &BigRational)> {
        self.terms.iter()
    }

    /// Constant value when the polynomial has no generator dependence.
    pub fn as_constant(&self) -> Option<BigRational> {
        if self.terms.is_empty() {
            return Some(BigRational::zero());
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.is_constant() {
                return Some(c.clone());
            }
        }
        None
    }

    /// Leading coefficient under the graded-lex order.
    pub fn leading_coeff(&self) -> BigRational {
        self.terms
            .iter()
            .next_back()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigRational::zero)
    }

    /// Positive rational c such that self/c has integer coefficients with
    /// content one; carries the sign of the leading coefficient.
    pub fn signed_content(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::one();
        }
        let mut gcd_num = BigInt::zero();
        let mut lcm_den = BigInt::one();
        for c in self.terms.values() {
            gcd_num = gcd_num.gcd(&c.numer().abs());
            lcm_den = lcm_den.lcm(c.denom());
        }
        let mut content = BigRational::new(gcd_num, lcm_den);
        if self.leading_coeff().is_negative() {
            content = -content;
        }
        content
    }

    pub fn scale(&self, factor: &BigRational) -> Poly {
        if factor.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * factor))
                .collect(),
        }
    }

    pub fn neg(&self) -> Poly {
        self.scale(&-BigRational::one())
    }

    fn unify(a: &Poly, b: &Poly) -> (Poly, Poly) {
        let n = a.nvars.max(b.nvars);
        (a.pad(n), b.pad(n))
    }

    fn pad(&self, nvars: usize) -> Poly {
        if nvars == self.nvars {
            return self.clone();
        }
        Poly {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.padded(nvars), c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let (a, b) = Poly::unify(self, other);
        let mut terms = a.terms;
        for (m, c) in b.terms {
            let entry = terms.entry(m).or_insert_with(BigRational::zero);
            *entry += c;
        }
        terms.retain(|_, c| !c.is_zero());
        Poly { nvars: a.nvars, terms }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let (a, b) = Poly::unify(self, other);
        let mut terms: BTreeMap<Mono, BigRational> = BTreeMap::new();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let m = ma.mul(mb);
                let entry = terms.entry(m).or_insert_with(BigRational::zero);
                *entry += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Poly { nvars: a.nvars, terms }
    }

    /// Indices of generators that actually occur.
    pub fn support_vars(&self) -> Vec<usize> {
        let mut seen = vec![false; self.nvars];
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    seen[i] = true;
                }
            }
        }
        seen.iter()
            .enumerate()
            .filter_map(|(i, &s)| s.then_some(i))
            .collect()
    }

    /// Dense coefficient vector when the polynomial involves at most the
    /// single generator `var` (constants allowed); ascending degree.
    pub fn univariate_coeffs(&self, var: usize) -> Option<Vec<BigRational>> {
        let mut deg = 0u32;
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 && i != var {
                    return None;
                }
            }
            deg = deg.max(m.0.get(var).copied().unwrap_or(0));
        }
        let mut coeffs = vec![BigRational::zero(); deg as usize + 1];
        for (m, c) in &self.terms {
            coeffs[m.0.get(var).copied().unwrap_or(0) as usize] = c.clone();
        }
        Some(coeffs)
    }

    pub fn from_univariate(coeffs: &[BigRational], var: usize, nvars: usize) -> Poly {
        let mut p = Poly::zero(nvars);
        for (d, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut exps = vec![0u32; nvars];
            exps[var] = d as u32;
            p.terms.insert(Mono(exps), c.clone());
        }
        p
    }
}

/// Monic gcd of two univariate rational polynomials (dense, ascending).
pub fn univariate_gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    fn trim(v: &mut Vec<BigRational>) {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
    }
    fn rem(num: &[BigRational], den: &[BigRational]) -> Vec<BigRational> {
        let mut r = num.to_vec();
        trim(&mut r);
        let dd = den.len() - 1;
        let dl = den.last().unwrap().clone();
        while r.len() > dd {
            let k = r.len() - 1 - dd;
            let q = r.last().unwrap() / &dl;
            for (i, c) in den.iter().enumerate() {
                let v = &r[k + i] - &q * c;
                r[k + i] = v;
            }
            trim(&mut r);
            if r.is_empty() {
                break;
            }
        }
        r
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    if a.is_empty() {
        return a;
    }
    let lead = a.last().unwrap().clone();
    for c in &mut a {
        *c /= lead.clone();
    }
    a
}

/// Exact division of univariate polynomials; panics if not exact.
pub fn univariate_div_exact(num: &[BigRational], den: &[BigRational]) -> Vec<BigRational> {
    let mut r: Vec<BigRational> = num.to_vec();
    while r.last().is_some_and(|c| c.is_zero()) {
        r.pop();
    }
    let mut den = den.to_vec();
    while den.last().is_some_and(|c| c.is_zero()) {
        den.pop();
    }
    assert!(!den.is_empty(), "division by zero polynomial");
    if r.is_empty() {
        return vec![];
    }
    let dd = den.len() - 1;
    assert!(r.len() > dd || r.len() == den.len(), "degree too small for exact division");
    let mut q = vec![BigRational::zero(); r.len() - dd];
    let dl = den.last().unwrap().clone();
    while r.len() > dd || (!r.is_empty() && r.len() == den.len()) {
        let k = r.len() - 1 - dd;
        let c = r.last().unwrap() / &dl;
        q[k] = c.clone();
        for (i, dc) in den.iter().enumerate() {
            let v = &r[k + i] - &c * dc;
            r[k + i] = v;
        }
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
        if r.is_empty() {
            break;
        }
        if r.len() <= dd {
            break;
        }
    }
    assert!(r.is_empty(), "division was not exact");
    q
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if m.is_constant() {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*")?;
                let mut sep = false;
                for (i, &e) in m.0.iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    if sep {
                        write!(f, "*")?;
                    }
                    sep = true;
                    if e == 1 {
                        write!(f, "g{i}")?;
                    } else {
                        write!(f, "g{i}^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
