//! Noncommutative-torus parameter objects: symbolic skew forms,
//! nondegeneracy decision, Pfaffians of principal submatrices, and the
//! trace pairing on the even subset basis.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::exact::{GeneratorEnv, Poly, SymbolicScalar};
use crate::intlat::{integer_kernel_rank, IntMatrix, Parity, SubsetBasis};
use crate::{Error, Result};

/// Symbolic skew-symmetric matrix; only the strict upper triangle is stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewForm {
    size: usize,
    upper: Vec<SymbolicScalar>, // (j,k) with j < k, row-major
}

impl SkewForm {
    pub fn zero(size: usize) -> SkewForm {
        let n = size * (size - 1) / 2;
        SkewForm {
            size,
            upper: vec![SymbolicScalar::zero(); n],
        }
    }

    /// The 2x2 rotation form J(t) with upper entry t.
    pub fn j(t: SymbolicScalar) -> SkewForm {
        SkewForm { size: 2, upper: vec![t] }
    }

    pub fn from_upper_fn(size: usize, mut f: impl FnMut(usize, usize) -> SymbolicScalar) -> SkewForm {
        let mut upper = Vec::with_capacity(size * (size - 1) / 2);
        for j in 0..size {
            for k in j + 1..size {
                upper.push(f(j, k));
            }
        }
        SkewForm { size, upper }
    }

    pub fn direct_sum(&self, other: &SkewForm) -> SkewForm {
        let n = self.size;
        SkewForm::from_upper_fn(n + other.size, |j, k| {
            if k < n {
                self.entry(j, k)
            } else if j >= n {
                other.entry(j - n, k - n)
            } else {
                SymbolicScalar::zero()
            }
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    fn upper_index(&self, j: usize, k: usize) -> usize {
        debug_assert!(j < k && k < self.size);
        // offset of row j in the packed strict upper triangle
        j * self.size - j * (j + 1) / 2 + (k - j - 1)
    }

    /// Entry (j,k) of the full matrix, reconstructed by antisymmetry.
    pub fn entry(&self, j: usize, k: usize) -> SymbolicScalar {
        use std::cmp::Ordering::*;
        match j.cmp(&k) {
            Equal => SymbolicScalar::zero(),
            Less => self.upper[self.upper_index(j, k)].clone(),
            Greater => self.upper[self.upper_index(k, j)].neg(),
        }
    }

    pub fn upper_entries(&self) -> impl Iterator<Item = (usize, usize, &SymbolicScalar)> {
        let size = self.size;
        (0..size)
            .flat_map(move |j| (j + 1..size).map(move |k| (j, k)))
            .zip(self.upper.iter())
            .map(|((j, k), s)| (j, k, s))
    }

    /// Pfaffian of the principal submatrix with rows/columns `subset`
    /// (strictly increasing), by recursive first-row expansion.
    pub fn pfaffian(&self, subset: &[usize]) -> Result<SymbolicScalar> {
        if !subset.len().is_multiple_of(2) {
            return Err(Error::OddSubset);
        }
        debug_assert!(subset.windows(2).all(|w| w[0] < w[1]));
        Ok(self.pf_rec(subset))
    }

    fn pf_rec(&self, subset: &[usize]) -> SymbolicScalar {
        if subset.is_empty() {
            return SymbolicScalar::one();
        }
        let first = subset[0];
        let mut acc = SymbolicScalar::zero();
        for (pos, &k) in subset.iter().enumerate().skip(1) {
            let coeff = self.entry(first, k);
            if coeff.is_zero() {
                continue;
            }
            let rest: Vec<usize> = subset
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != 0 && i != pos)
                .map(|(_, &v)| v)
                .collect();
            let term = coeff.mul(&self.pf_rec(&rest));
            // first-row expansion alternates signs: + for the second index,
            // - for the third, and so on
            if pos % 2 == 1 {
                acc = acc.add(&term);
            } else {
                acc = acc.sub(&term);
            }
        }
        acc
    }

    /// Determinant of the principal submatrix, by Leibniz expansion; test
    /// oracle for the Pfaffian identity pf^2 = det (sizes <= 8).
    pub fn principal_det(&self, subset: &[usize]) -> SymbolicScalar {
        let n = subset.len();
        let mut acc = SymbolicScalar::zero();
        let mut perm: Vec<usize> = (0..n).collect();
        permute_det(&mut perm, 0, &mut acc, &mut |perm, sign, acc| {
            let mut term = SymbolicScalar::one();
            for (i, &p) in perm.iter().enumerate() {
                term = term.mul(&self.entry(subset[i], subset[p]));
                if term.is_zero() {
                    break;
                }
            }
            if sign {
                *acc = acc.add(&term);
            } else {
                *acc = acc.sub(&term);
            }
        });
        acc
    }
}

fn permute_det(
    perm: &mut Vec<usize>,
    k: usize,
    acc: &mut SymbolicScalar,
    visit: &mut impl FnMut(&[usize], bool, &mut SymbolicScalar),
) {
    let n = perm.len();
    if k == n {
        let sign = permutation_sign(perm);
        visit(perm, sign, acc);
        return;
    }
    for i in k..n {
        perm.swap(k, i);
        permute_det(perm, k + 1, acc, visit);
        perm.swap(k, i);
    }
}

fn permutation_sign(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    let mut even = true;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len % 2 == 0 {
            even = !even;
        }
    }
    even
}

/// A matrix-amplified torus: the skew form plus the amplification r >= 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusDescriptor {
    pub form: SkewForm,
    pub amplification: BigInt,
}

impl TorusDescriptor {
    pub fn new(form: SkewForm, amplification: u64) -> TorusDescriptor {
        assert!(amplification >= 1, "amplification must be >= 1");
        TorusDescriptor {
            form,
            amplification: BigInt::from(amplification),
        }
    }

    pub fn unamplified(form: SkewForm) -> TorusDescriptor {
        TorusDescriptor::new(form, 1)
    }

    pub fn even_rank(&self) -> usize {
        1 << (self.form.size() - 1)
    }

    pub fn odd_rank(&self) -> usize {
        1 << (self.form.size() - 1)
    }

    /// K0 class of the unit of M_r(A): r times the empty-subset basis vector.
    pub fn unit_class(&self) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.even_rank()];
        v[0] = self.amplification.clone();
        v
    }
}

/// Verdict of the nondegeneracy decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Nondegeneracy {
    Nondegenerate,
    DegenerateWitness(Vec<BigInt>),
    UndecidedAtBound,
}

/// Decides whether a nonzero integer vector x with (form)x integral exists.
///
/// Each row condition sum_j entry(i,j) x_j in Z is brought over the row's
/// common denominator; requiring the value to be a rational integer n_i
/// yields integer-linear conditions on (x, n_i) per monomial of the support.
/// The combined integer kernel decides the question exactly under the
/// environment's independence assertion.
pub fn is_nondegenerate(
    form: &SkewForm,
    env: &GeneratorEnv,
    box_bound: u64,
) -> Result<Nondegeneracy> {
    if !env.independence_asserted() {
        return Err(Error::InvalidParameter(
            "nondegeneracy decision requires the independence assertion".into(),
        ));
    }
    let m = form.size();
    // unknowns: x_0..x_{m-1}, n_0..n_{m-1}
    let mut constraint_rows: Vec<Vec<BigInt>> = Vec::new();
    for i in 0..m {
        // bring row i over the product of its entry denominators; the j-th
        // numerator picks up every other denominator as a polynomial factor
        let entries: Vec<SymbolicScalar> = (0..m).map(|j| form.entry(i, j)).collect();
        let mut den = Poly::one(0);
        for e in &entries {
            den = den.mul(e.den());
        }
        let mut numerators: Vec<Poly> = Vec::new();
        for j in 0..m {
            let mut p = entries[j].num().clone();
            for (k, e) in entries.iter().enumerate() {
                if k != j {
                    p = p.mul(e.den());
                }
            }
            numerators.push(p);
        }
        // monomial support of the row (numerators and denominator)
        let mut monos: Vec<crate::exact::Mono> = Vec::new();
        for p in numerators.iter().chain(std::iter::once(&den)) {
            for (mono, _) in p.terms() {
                let padded = pad_mono(mono, ambient(&numerators, &den));
                if !monos.contains(&padded) {
                    monos.push(padded);
                }
            }
        }
        monos.sort();
        // per-monomial linear condition: sum_j coeff(p_j, mono) x_j - coeff(den, mono) n_i = 0
        // with exact rational coefficients; scale rows to integers.
        for mono in &monos {
            let mut row_rat: Vec<BigRational> = Vec::with_capacity(2 * m);
            for p in &numerators {
                row_rat.push(coeff_of(p, mono));
            }
            let mut n_part = vec![BigRational::zero(); m];
            n_part[i] = -coeff_of(&den, mono);
            row_rat.extend(n_part);
            constraint_rows.push(clear_denominators(&row_rat));
        }
    }
    let nrows = constraint_rows.len();
    let mat = IntMatrix::from_fn(nrows, 2 * m, |i, j| constraint_rows[i][j].clone());
    let (_, kernel) = integer_kernel_rank(&mat);
    let witnesses: Vec<Vec<BigInt>> = kernel
        .iter()
        .map(|v| v[..m].to_vec())
        .filter(|x| x.iter().any(|c| !c.is_zero()))
        .collect();
    if witnesses.is_empty() {
        return Ok(Nondegeneracy::Nondegenerate);
    }
    // prefer a witness inside the reporting box; the kernel basis is already
    // in Hermite form, so the first row is the canonical choice
    let bound = BigInt::from(box_bound);
    for w in &witnesses {
        if w.iter().all(|c| c.abs() <= bound) {
            return Ok(Nondegeneracy::DegenerateWitness(normalize_sign(w.clone())));
        }
    }
    Ok(Nondegeneracy::DegenerateWitness(normalize_sign(
        witnesses[0].clone(),
    )))
}

fn ambient(nums: &[Poly], den: &Poly) -> usize {
    nums.iter()
        .map(|p| p.nvars())
        .chain(std::iter::once(den.nvars()))
        .max()
        .unwrap_or(0)
}

fn pad_mono(m: &crate::exact::Mono, nvars: usize) -> crate::exact::Mono {
    let mut v = m.0.clone();
    v.resize(nvars.max(v.len()), 0);
    crate::exact::Mono(v)
}

fn coeff_of(p: &Poly, mono: &crate::exact::Mono) -> BigRational {
    for (m, c) in p.terms() {
        if &pad_mono(m, mono.0.len()) == mono {
            return c.clone();
        }
    }
    BigRational::zero()
}

fn clear_denominators(row: &[BigRational]) -> Vec<BigInt> {
    use num_integer::Integer;
    let mut lcm = BigInt::from(1);
    for c in row {
        lcm = lcm.lcm(c.denom());
    }
    row.iter()
        .map(|c| {
            let scaled = c * BigRational::from_integer(lcm.clone());
            debug_assert!(scaled.denom() == &BigInt::from(1));
            scaled.numer().clone()
        })
        .collect()
}

fn normalize_sign(mut v: Vec<BigInt>) -> Vec<BigInt> {
    if let Some(first) = v.iter().find(|c| !c.is_zero()) {
        if first.is_negative() {
            for c in &mut v {
                *c = -c.clone();
            }
        }
    }
    v
}

/// Row vector of Pfaffians over the even subset basis.
pub fn trace_pairing_vector(descriptor: &TorusDescriptor) -> Vec<SymbolicScalar> {
    let basis = SubsetBasis::with_parity(descriptor.form.size(), Parity::Even);
    basis
        .subsets
        .iter()
        .map(|s| descriptor.form.pfaffian(s).expect("even subsets"))
        .collect()
}

/// Normalized trace of a K0 class: <v, pf-vector> / amplification.
///
/// Only the nonzero coordinates of v touch Pfaffians, so sparse classes on
/// high-dimensional tori stay cheap.
pub fn trace_of_class(descriptor: &TorusDescriptor, v: &[BigInt]) -> Result<SymbolicScalar> {
    let basis = SubsetBasis::with_parity(descriptor.form.size(), Parity::Even);
    if v.len() != basis.len() {
        return Err(Error::DimensionMismatch(format!(
            "class has {} coordinates, even basis has {}",
            v.len(),
            basis.len()
        )));
    }
    let mut acc = SymbolicScalar::zero();
    for (i, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let pf = descriptor.form.pfaffian(&basis.subsets[i])?;
        acc = acc.add(&pf.scale_rational(&BigRational::from_integer(c.clone())));
    }
    acc.div(&SymbolicScalar::from_rational(BigRational::from_integer(
        descriptor.amplification.clone(),
    )))
}
