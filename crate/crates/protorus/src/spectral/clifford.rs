use num_complex::Complex64;

use super::hermitian::{CMatrix, HermitianMatrix};
use crate::{Error, Result};

fn pauli_x() -> CMatrix {
    CMatrix::from_fn(2, 2, |i, j| match (i, j) {
        (0, 1) | (1, 0) => Complex64::new(1.0, 0.0),
        _ => Complex64::new(0.0, 0.0),
    })
}

fn pauli_y() -> CMatrix {
    CMatrix::from_fn(2, 2, |i, j| match (i, j) {
        (0, 1) => Complex64::new(0.0, -1.0),
        (1, 0) => Complex64::new(0.0, 1.0),
        _ => Complex64::new(0.0, 0.0),
    })
}

fn pauli_z() -> CMatrix {
    CMatrix::from_fn(2, 2, |i, j| match (i, j) {
        (0, 0) => Complex64::new(1.0, 0.0),
        (1, 1) => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 0.0),
    })
}

/// Selfadjoint Clifford generators for R^d by the standard tensor recursion:
/// gamma_{2i-1} = sz^(i-1) (x) sx (x) 1, gamma_{2i} = sz^(i-1) (x) sy (x) 1,
/// and for odd d the extra chirality sz^k.  Fiber dimension 2^max(1, floor(d/2)),
/// so d = 3 acts on C^2 by the three Pauli matrices.
pub fn clifford_generators(d: usize) -> Result<Vec<HermitianMatrix>> {
    if !(1..=10).contains(&d) {
        return Err(Error::InvalidParameter("Clifford degree must be 1..=10".into()));
    }
    let k = (d / 2).max(1);
    let dim = 1usize << k;
    let factors = |pos: usize, middle: CMatrix| -> CMatrix {
        // sz^(pos) (x) middle (x) identity on the rest
        let mut acc = CMatrix::identity(1);
        for _ in 0..pos {
            acc = acc.kron(&pauli_z());
        }
        acc = acc.kron(&middle);
        let used = acc.rows();
        if used < dim {
            acc = acc.kron(&CMatrix::identity(dim / used));
        }
        acc
    };
    let mut out = Vec::with_capacity(d);
    if d == 1 {
        out.push(HermitianMatrix::new(pauli_x())?);
        return Ok(out);
    }
    for i in 1..=(d / 2) {
        out.push(HermitianMatrix::new(factors(i - 1, pauli_x()))?);
        out.push(HermitianMatrix::new(factors(i - 1, pauli_y()))?);
    }
    if d % 2 == 1 {
        let mut acc = CMatrix::identity(1);
        for _ in 0..k {
            acc = acc.kron(&pauli_z());
        }
        out.push(HermitianMatrix::new(acc)?);
    }
    Ok(out)
}

/// Clifford multiplication gamma(v) = sum_a v_a gamma_a.
pub fn clifford_vector(gammas: &[HermitianMatrix], v: &[f64]) -> HermitianMatrix {
    assert_eq!(gammas.len(), v.len());
    let dim = gammas[0].dim();
    let mut acc = HermitianMatrix::zero(dim);
    for (g, &c) in gammas.iter().zip(v) {
        acc = acc.add(&g.scale_real(c));
    }
    acc
}

/// Max Frobenius defect of the anticommutation relations over all pairs.
pub fn anticommutation_defect(gammas: &[HermitianMatrix]) -> f64 {
    let dim = gammas[0].dim();
    let mut worst = 0.0f64;
    for (i, gi) in gammas.iter().enumerate() {
        for (j, gj) in gammas.iter().enumerate() {
            let mut anti = gi.anticommutator(gj);
            if i == j {
                anti = anti.sub(&CMatrix::identity(dim).scale(Complex64::new(2.0, 0.0)));
            }
            worst = worst.max(anti.frobenius());
        }
    }
    worst
}
