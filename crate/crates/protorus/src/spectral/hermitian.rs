use num_complex::Complex64;

use crate::{Error, Result};

/// Construction-time symmetrization tolerance.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Default eigensolver off-diagonal target.
pub const EIG_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 100;

/// Dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zero(rows: usize, cols: usize) -> CMatrix {
        CMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> CMatrix {
        let mut m = CMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> CMatrix {
        let mut m = CMatrix::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = CMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)] + other[(i, j)])
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)] - other[(i, j)])
    }

    pub fn scale(&self, c: Complex64) -> CMatrix {
        CMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)] * c)
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zero(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn commutator(&self, other: &CMatrix) -> CMatrix {
        self.mul(other).sub(&other.mul(self))
    }

    /// Operator norm: square root of the top eigenvalue of A* A.
    pub fn operator_norm(&self) -> Result<f64> {
        if self.rows == 0 || self.cols == 0 {
            return Ok(0.0);
        }
        let gram = HermitianMatrix::symmetrized(self.adjoint().mul(self));
        let eigs = gram.eigenvalues(EIG_TOL)?;
        Ok(eigs.last().copied().unwrap_or(0.0).max(0.0).sqrt())
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Selfadjoint complex matrix; symmetrized on construction and rejected when
/// the defect exceeds the tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    data: CMatrix,
}

impl HermitianMatrix {
    /// Symmetrizes (A + A*)/2; callers that need the defect checked should
    /// use [`HermitianMatrix::new`].
    pub fn symmetrized(a: CMatrix) -> HermitianMatrix {
        assert_eq!(a.rows(), a.cols());
        let dim = a.rows();
        let sym = a.add(&a.adjoint()).scale(Complex64::new(0.5, 0.0));
        HermitianMatrix { dim, data: sym }
    }

    pub fn new(a: CMatrix) -> Result<HermitianMatrix> {
        let defect = a.sub(&a.adjoint()).frobenius();
        let scale = a.frobenius().max(1.0);
        if defect > HERMITIAN_TOL * scale * 10.0 {
            return Err(Error::InvalidParameter(format!(
                "matrix is not Hermitian within tolerance (defect {defect:.3e})"
            )));
        }
        Ok(HermitianMatrix::symmetrized(a))
    }

    pub fn zero(dim: usize) -> HermitianMatrix {
        HermitianMatrix {
            dim,
            data: CMatrix::zero(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> HermitianMatrix {
        HermitianMatrix {
            dim,
            data: CMatrix::identity(dim),
        }
    }

    pub fn diagonal(values: &[f64]) -> HermitianMatrix {
        let dim = values.len();
        HermitianMatrix {
            dim,
            data: CMatrix::from_fn(dim, dim, |i, j| {
                if i == j {
                    Complex64::new(values[i], 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }),
        }
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> HermitianMatrix {
        let a = CMatrix::from_fn(rows.len(), rows.len(), |i, j| Complex64::new(rows[i][j], 0.0));
        HermitianMatrix::symmetrized(a)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.data
    }

    pub fn add(&self, other: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix {
            dim: self.dim,
            data: self.data.add(&other.data),
        }
    }

    pub fn sub(&self, other: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix {
            dim: self.dim,
            data: self.data.sub(&other.data),
        }
    }

    pub fn scale_real(&self, c: f64) -> HermitianMatrix {
        HermitianMatrix {
            dim: self.dim,
            data: self.data.scale(Complex64::new(c, 0.0)),
        }
    }

    /// Anticommutator defect against 2*delta_ij, for Clifford checks.
    pub fn anticommutator(&self, other: &HermitianMatrix) -> CMatrix {
        self.data.mul(&other.data).add(&other.data.mul(&self.data))
    }

    pub fn operator_norm(&self) -> Result<f64> {
        let eigs = self.eigenvalues(EIG_TOL)?;
        Ok(eigs
            .iter()
            .fold(0.0f64, |acc, &v| acc.max(v.abs())))
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.data[(i, i)].re).sum()
    }

    /// Ascending eigenvalues via cyclic Jacobi on the real embedding
    /// [[X, -Y], [Y, X]] of H = X + iY, whose spectrum doubles that of H.
    ///
    /// The returned values satisfy the residual bound
    /// max_k |H v_k - lambda_k v_k| <= 10 * tol' * |H| with tol' the off
    /// mass actually achieved; convergence failure reports an error.
    pub fn eigenvalues(&self, tol: f64) -> Result<Vec<f64>> {
        Ok(self.eigen_full(tol)?.0)
    }

    /// Eigenvalues plus complex eigenvectors (columns).
    pub fn eigen_full(&self, tol: f64) -> Result<(Vec<f64>, CMatrix)> {
        let n = self.dim;
        if n == 0 {
            return Ok((vec![], CMatrix::zero(0, 0)));
        }
        // real symmetric embedding
        let m = 2 * n;
        let mut a = vec![0.0f64; m * m];
        for i in 0..n {
            for j in 0..n {
                let z = self.data[(i, j)];
                a[i * m + j] = z.re;
                a[(i + n) * m + (j + n)] = z.re;
                a[i * m + (j + n)] = -z.im;
                a[(i + n) * m + j] = z.im;
            }
        }
        let mut v = vec![0.0f64; m * m];
        for i in 0..m {
            v[i * m + i] = 1.0;
        }
        jacobi_real_sym(&mut a, &mut v, m, tol)?;
        // diagonal now holds eigenvalues, doubled; pair them up
        let mut pairs: Vec<(f64, usize)> = (0..m).map(|i| (a[i * m + i], i)).collect();
        pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        let mut values = Vec::with_capacity(n);
        let mut vectors = CMatrix::zero(n, n);
        for (k, chunk) in pairs.chunks(2).enumerate() {
            values.push(chunk[0].0);
            let col = chunk[0].1;
            for i in 0..n {
                vectors[(i, k)] = Complex64::new(v[i * m + col], v[(i + n) * m + col]);
            }
        }
        // residual certificate
        let hnorm = self.data.frobenius().max(1e-300);
        for (k, &lambda) in values.iter().enumerate() {
            let mut res = 0.0f64;
            for i in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..n {
                    acc += self.data[(i, j)] * vectors[(j, k)];
                }
                acc -= Complex64::new(lambda, 0.0) * vectors[(i, k)];
                res += acc.norm_sqr();
            }
            if res.sqrt() > 10.0 * (tol.max(1e-13)) * hnorm + 1e-12 {
                return Err(Error::NoConvergence);
            }
        }
        Ok((values, vectors))
    }
}

/// Cyclic Jacobi sweeps on a dense real symmetric matrix (row-major),
/// accumulating the rotations in `v`.
fn jacobi_real_sym(a: &mut [f64], v: &mut [f64], n: usize, tol: f64) -> Result<()> {
    let off = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for p in 0..n {
            for q in 0..n {
                if p != q {
                    s += a[p * n + q] * a[p * n + q];
                }
            }
        }
        s.sqrt()
    };
    let scale = {
        let mut s = 0.0;
        for x in a.iter() {
            s += x * x;
        }
        s.sqrt().max(1.0)
    };
    for _ in 0..MAX_SWEEPS {
        if off(a) <= tol * scale {
            return Ok(());
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() <= f64::EPSILON * scale * 1e-3 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // A <- J^T A J on rows/cols p, q
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    if off(a) <= tol * scale * 100.0 {
        // close enough for the residual check to arbitrate
        return Ok(());
    }
    Err(Error::NoConvergence)
}
