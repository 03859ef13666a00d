//! Exact integer-lattice linear algebra: exterior powers over subset bases,
//! Smith normal form with unimodular transforms, coset representatives, and
//! integer kernels.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Dense exact integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> IntMatrix {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            for v in row {
                data.push(v.clone().into());
            }
        }
        IntMatrix { rows: r, cols: c, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> IntMatrix {
        let mut m = IntMatrix::zero(rows, cols);
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

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self[(i, j)].is_one()
                    } else {
                        self[(i, j)].is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in matrix product");
        IntMatrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = BigInt::zero();
            for k in 0..self.cols {
                acc += &self[(i, k)] * &other[(k, j)];
            }
            acc
        })
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] + &other[(i, j)])
    }

    pub fn scale(&self, c: &BigInt) -> IntMatrix {
        IntMatrix::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] * c)
    }

    pub fn neg(&self) -> IntMatrix {
        self.scale(&BigInt::from(-1))
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = BigInt::zero();
                for j in 0..self.cols {
                    acc += &self[(i, j)] * &v[j];
                }
                acc
            })
            .collect()
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| self[(i, j)].clone()).collect())
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                let swap = (k + 1..n).find(|&i| !a[i][k].is_zero());
                match swap {
                    Some(i) => {
                        a.swap(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        sign * a[n - 1][n - 1].clone()
    }

    /// Determinant of the minor with the given rows and columns.
    pub fn minor_det(&self, row_idx: &[usize], col_idx: &[usize]) -> BigInt {
        assert_eq!(row_idx.len(), col_idx.len());
        let k = row_idx.len();
        IntMatrix::from_fn(k, k, |i, j| self[(row_idx[i], col_idx[j])].clone()).det()
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        (0..self.cols).map(|j| self[(i, j)].clone()).collect()
    }

    pub fn to_string_grid(&self) -> String {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self[(i, j)].to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect::<Vec<_>>()
            .join("; ")
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_string_grid())
    }
}

/// Parity selector for exterior-power assemblies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn matches(&self, k: usize) -> bool {
        match self {
            Parity::Even => k.is_multiple_of(2),
            Parity::Odd => k % 2 == 1,
        }
    }
}

/// Ordered basis of index subsets of {1..m}, cardinality-then-lex.
///
/// The even basis starts with the empty set; even and odd bases each have
/// 2^(m-1) elements.  Subsets are stored 0-based and strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetBasis {
    pub ambient_rank: usize,
    pub parity: Option<Parity>,
    pub subsets: Vec<Vec<usize>>,
}

fn subsets_of_size(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(m: usize, k: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..m {
            current.push(i);
            rec(m, k, i + 1, current, out);
            current.pop();
        }
    }
    rec(m, k, 0, &mut current, &mut out);
    out
}

impl SubsetBasis {
    pub fn with_parity(m: usize, parity: Parity) -> SubsetBasis {
        let mut subsets = Vec::new();
        for k in 0..=m {
            if parity.matches(k) {
                subsets.extend(subsets_of_size(m, k));
            }
        }
        SubsetBasis {
            ambient_rank: m,
            parity: Some(parity),
            subsets,
        }
    }

    pub fn full(m: usize) -> SubsetBasis {
        let mut subsets = Vec::new();
        for k in 0..=m {
            subsets.extend(subsets_of_size(m, k));
        }
        SubsetBasis {
            ambient_rank: m,
            parity: None,
            subsets,
        }
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn position(&self, subset: &[usize]) -> Option<usize> {
        self.subsets.iter().position(|s| s == subset)
    }
}

/// Matrix of the k-th exterior power in subset-basis coordinates.
///
/// Entry at (row subset I, column subset J) is the determinant of the minor
/// of `m` with rows I and columns J; k = 0 yields the 1x1 identity.
pub fn exterior_power(m: &IntMatrix, k: usize) -> IntMatrix {
    let row_subsets = subsets_of_size(m.rows(), k);
    let col_subsets = subsets_of_size(m.cols(), k);
    let mut out = IntMatrix::zero(row_subsets.len(), col_subsets.len());
    for (i, ri) in row_subsets.iter().enumerate() {
        for (j, cj) in col_subsets.iter().enumerate() {
            out[(i, j)] = m.minor_det(ri, cj);
        }
    }
    out
}

/// Block-diagonal assembly of exterior powers over all degrees of a parity.
pub fn exterior_parity(m: &IntMatrix, parity: Parity) -> IntMatrix {
    let max_deg = m.rows().max(m.cols());
    let blocks: Vec<IntMatrix> = (0..=max_deg)
        .filter(|&k| parity.matches(k))
        .map(|k| exterior_power(m, k))
        .collect();
    let rows: usize = blocks.iter().map(|b| b.rows()).sum();
    let cols: usize = blocks.iter().map(|b| b.cols()).sum();
    let mut out = IntMatrix::zero(rows, cols);
    let (mut r0, mut c0) = (0, 0);
    for b in &blocks {
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                out[(r0 + i, c0 + j)] = b[(i, j)].clone();
            }
        }
        r0 += b.rows();
        c0 += b.cols();
    }
    out
}

/// Smith normal form: U * M * V = D with U, V unimodular and the diagonal of
/// D a nonnegative divisibility chain.
#[derive(Debug, Clone)]
pub struct Smith {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl Smith {
    pub fn rank(&self) -> usize {
        let n = self.d.rows().min(self.d.cols());
        (0..n).take_while(|&i| !self.d[(i, i)].is_zero()).count()
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d[(i, i)].clone()).collect()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let rows = m.rows();
    let cols = m.cols();
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut u_inv = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut v_inv = IntMatrix::identity(cols);

    // elementary operations, mirrored on the transform carriers
    let swap_rows = |d: &mut IntMatrix, u: &mut IntMatrix, u_inv: &mut IntMatrix, a: usize, b: usize| {
        for j in 0..d.cols() {
            let (x, y) = (d[(a, j)].clone(), d[(b, j)].clone());
            d[(a, j)] = y;
            d[(b, j)] = x;
        }
        for j in 0..u.cols() {
            let (x, y) = (u[(a, j)].clone(), u[(b, j)].clone());
            u[(a, j)] = y;
            u[(b, j)] = x;
        }
        for i in 0..u_inv.rows() {
            let (x, y) = (u_inv[(i, a)].clone(), u_inv[(i, b)].clone());
            u_inv[(i, a)] = y;
            u_inv[(i, b)] = x;
        }
    };
    let swap_cols = |d: &mut IntMatrix, v: &mut IntMatrix, v_inv: &mut IntMatrix, a: usize, b: usize| {
        for i in 0..d.rows() {
            let (x, y) = (d[(i, a)].clone(), d[(i, b)].clone());
            d[(i, a)] = y;
            d[(i, b)] = x;
        }
        for i in 0..v.rows() {
            let (x, y) = (v[(i, a)].clone(), v[(i, b)].clone());
            v[(i, a)] = y;
            v[(i, b)] = x;
        }
        for j in 0..v_inv.cols() {
            let (x, y) = (v_inv[(a, j)].clone(), v_inv[(b, j)].clone());
            v_inv[(a, j)] = y;
            v_inv[(b, j)] = x;
        }
    };
    // row a += c * row b  (so U <- E*U, U_inv <- U_inv * E^{-1})
    let add_row = |d: &mut IntMatrix, u: &mut IntMatrix, u_inv: &mut IntMatrix, a: usize, b: usize, c: &BigInt| {
        for j in 0..d.cols() {
            let v2 = &d[(a, j)] + c * &d[(b, j)];
            d[(a, j)] = v2;
        }
        for j in 0..u.cols() {
            let v2 = &u[(a, j)] + c * &u[(b, j)];
            u[(a, j)] = v2;
        }
        for i in 0..u_inv.rows() {
            let v2 = &u_inv[(i, b)] - c * &u_inv[(i, a)];
            u_inv[(i, b)] = v2;
        }
    };
    // col a += c * col b
    let add_col = |d: &mut IntMatrix, v: &mut IntMatrix, v_inv: &mut IntMatrix, a: usize, b: usize, c: &BigInt| {
        for i in 0..d.rows() {
            let v2 = &d[(i, a)] + c * &d[(i, b)];
            d[(i, a)] = v2;
        }
        for i in 0..v.rows() {
            let v2 = &v[(i, a)] + c * &v[(i, b)];
            v[(i, a)] = v2;
        }
        for j in 0..v_inv.cols() {
            let v2 = &v_inv[(b, j)] - c * &v_inv[(a, j)];
            v_inv[(b, j)] = v2;
        }
    };
    let negate_row = |d: &mut IntMatrix, u: &mut IntMatrix, u_inv: &mut IntMatrix, a: usize| {
        for j in 0..d.cols() {
            let v2 = -d[(a, j)].clone();
            d[(a, j)] = v2;
        }
        for j in 0..u.cols() {
            let v2 = -u[(a, j)].clone();
            u[(a, j)] = v2;
        }
        for i in 0..u_inv.rows() {
            let v2 = -u_inv[(i, a)].clone();
            u_inv[(i, a)] = v2;
        }
    };

    let n = rows.min(cols);
    let mut t = 0;
    while t < n {
        // pivot: nonzero entry of minimal absolute value in the working block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !d[(i, j)].is_zero() {
                    let better = match pivot {
                        None => true,
                        Some((pi, pj)) => d[(i, j)].abs() < d[(pi, pj)].abs(),
                    };
                    if better {
                        pivot = Some((i, j));
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        if pi != t {
            swap_rows(&mut d, &mut u, &mut u_inv, t, pi);
        }
        if pj != t {
            swap_cols(&mut d, &mut v, &mut v_inv, t, pj);
        }

        // clear row and column t by division with remainder; restart when a
        // remainder becomes the new smaller pivot
        let mut clean = false;
        while !clean {
            clean = true;
            for i in t + 1..rows {
                if !d[(i, t)].is_zero() {
                    let q = div_round(&d[(i, t)], &d[(t, t)]);
                    add_row(&mut d, &mut u, &mut u_inv, i, t, &(-q));
                    if !d[(i, t)].is_zero() {
                        swap_rows(&mut d, &mut u, &mut u_inv, t, i);
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                if !d[(t, j)].is_zero() {
                    let q = div_round(&d[(t, j)], &d[(t, t)]);
                    add_col(&mut d, &mut v, &mut v_inv, j, t, &(-q));
                    if !d[(t, j)].is_zero() {
                        swap_cols(&mut d, &mut v, &mut v_inv, t, j);
                        clean = false;
                    }
                }
            }
        }

        // enforce divisibility: pivot must divide the remaining block
        let mut disturbed = false;
        'scan: for i in t + 1..rows {
            for j in t + 1..cols {
                if !(&d[(i, j)] % &d[(t, t)]).is_zero() {
                    add_row(&mut d, &mut u, &mut u_inv, t, i, &BigInt::one());
                    disturbed = true;
                    break 'scan;
                }
            }
        }
        if disturbed {
            continue; // redo this pivot position
        }
        if d[(t, t)].is_negative() {
            negate_row(&mut d, &mut u, &mut u_inv, t);
        }
        t += 1;
    }

    Smith { u, u_inv, d, v, v_inv }
}

/// Rounded integer division, used to shrink remainders fast.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = (a / b, a % b);
    if r.is_zero() {
        return q;
    }
    let two_r = r.abs() * BigInt::from(2);
    if two_r > b.abs() {
        if (a.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Exact rank and a Z-basis of the integer kernel lattice.
pub fn integer_kernel_rank(m: &IntMatrix) -> (usize, Vec<Vec<BigInt>>) {
    let s = smith_normal_form(m);
    let rank = s.rank();
    let mut kernel = Vec::new();
    for j in rank..m.cols() {
        let col: Vec<BigInt> = (0..m.cols()).map(|i| s.v[(i, j)].clone()).collect();
        kernel.push(col);
    }
    (rank, hnf_rows(kernel))
}

/// Row-style Hermite normalization of a basis list (canonical presentation).
fn hnf_rows(basis: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    if basis.is_empty() {
        return basis;
    }
    let cols = basis[0].len();
    let mut rows = basis;
    let mut pivot_row = 0;
    for col in 0..cols {
        // find row with nonzero entry in this column at/below pivot_row
        let mut best: Option<usize> = None;
        for (i, row) in rows.iter().enumerate().skip(pivot_row) {
            if !row[col].is_zero() {
                let better = match best {
                    None => true,
                    Some(b) => rows[b][col].abs() > row[col].abs(),
                };
                if better {
                    best = Some(i);
                }
            }
        }
        let Some(mut b) = best else { continue };
        // gcd out the column below pivot_row
        loop {
            rows.swap(pivot_row, b);
            let mut done = true;
            for i in pivot_row + 1..rows.len() {
                if !rows[i][col].is_zero() {
                    let q = div_round(&rows[i][col], &rows[pivot_row][col]);
                    for j in 0..cols {
                        let v = &rows[i][j] - &q * &rows[pivot_row][j];
                        rows[i][j] = v;
                    }
                    if !rows[i][col].is_zero() {
                        done = false;
                        b = i;
                        break;
                    }
                }
            }
            if done {
                break;
            }
        }
        if rows[pivot_row][col].is_negative() {
            for j in 0..cols {
                let v = -rows[pivot_row][j].clone();
                rows[pivot_row][j] = v;
            }
        }
        // reduce entries above the pivot
        for i in 0..pivot_row {
            if !rows[i][col].is_zero() {
                let q = num_integer::Integer::div_floor(&rows[i][col], &rows[pivot_row][col]);
                for j in 0..cols {
                    let v = &rows[i][j] - &q * &rows[pivot_row][j];
                    rows[i][j] = v;
                }
            }
        }
        pivot_row += 1;
        if pivot_row == rows.len() {
            break;
        }
    }
    rows.retain(|r| r.iter().any(|v| !v.is_zero()));
    rows
}

/// Coset data for Z^n / M Z^m computed through the Smith decomposition.
///
/// `torsion` is a complete irredundant set of representatives for the torsion
/// part; `free_basis` spans a complement on which the quotient is free.  For
/// square full-rank M the free part is empty and `index` = |det M|.
#[derive(Debug, Clone)]
pub struct CosetReps {
    pub torsion: Vec<Vec<BigInt>>,
    pub free_basis: Vec<Vec<BigInt>>,
    pub index: Option<BigInt>,
    smith: Smith,
    ambient: usize,
}

impl CosetReps {
    /// Canonical representative of `v` modulo the column lattice.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.ambient);
        let w = self.smith.u.apply(v);
        let diag = self.smith.diagonal();
        let mut reduced = w;
        for (i, r) in reduced.iter_mut().enumerate() {
            if i < diag.len() && !diag[i].is_zero() {
                *r = r.mod_floor_big(&diag[i]);
            }
        }
        self.smith.u_inv.apply(&reduced)
    }
}

trait ModFloor {
    fn mod_floor_big(&self, m: &BigInt) -> BigInt;
}

impl ModFloor for BigInt {
    fn mod_floor_big(&self, m: &BigInt) -> BigInt {
        let r = self % m;
        if r.is_negative() {
            r + m.abs()
        } else {
            r
        }
    }
}

/// Complete coset representatives for Z^n / M Z^m; M must have full column
/// rank.  Representatives are canonical: componentwise reduced through the
/// Smith decomposition.
pub fn coset_representatives(m: &IntMatrix) -> Result<CosetReps> {
    let s = smith_normal_form(m);
    let rank = s.rank();
    if rank < m.cols() {
        return Err(Error::NotFullColumnRank);
    }
    let n = m.rows();
    let diag = s.diagonal();

    // torsion representatives: boxes [0, d_i) pulled back through U^{-1}
    let mut boxes: Vec<Vec<BigInt>> = vec![vec![]];
    for d in diag.iter() {
        let mut next = Vec::new();
        for b in &boxes {
            let mut k = BigInt::zero();
            while &k < d {
                let mut row = b.clone();
                row.push(k.clone());
                next.push(row);
                k += 1;
            }
        }
        boxes = next;
    }
    let torsion: Vec<Vec<BigInt>> = boxes
        .into_iter()
        .map(|b| {
            let mut w = b;
            w.resize(n, BigInt::zero());
            s.u_inv.apply(&w)
        })
        .collect();

    let free_basis: Vec<Vec<BigInt>> = (rank..n)
        .map(|i| {
            let mut e = vec![BigInt::zero(); n];
            e[i] = BigInt::one();
            s.u_inv.apply(&e)
        })
        .collect();

    let index = if rank == n {
        Some(diag.iter().product())
    } else {
        None
    };

    Ok(CosetReps {
        torsion,
        free_basis,
        index,
        smith: s,
        ambient: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows)
    }

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn det_two_by_two() {
        assert_eq!(m(&[vec![1, 2], vec![3, 4]]).det(), big(-2));
    }

    #[test]
    fn exterior_top_degree_is_det() {
        let a = m(&[vec![1, 2], vec![3, 4]]);
        let top = exterior_power(&a, 2);
        assert_eq!(top, m(&[vec![-2]]));
    }

    #[test]
    fn exterior_preserves_identity() {
        for dim in 1..=4usize {
            for k in 0..=dim {
                let e = exterior_power(&IntMatrix::identity(dim), k);
                assert!(e.is_identity());
            }
        }
    }

    #[test]
    fn exterior_of_doubled_identity() {
        let a = IntMatrix::identity(2).scale(&big(2));
        assert_eq!(exterior_power(&a, 2), m(&[vec![4]]));
        assert_eq!(exterior_parity(&a, Parity::Even), m(&[vec![1, 0], vec![0, 4]]));
        assert_eq!(exterior_parity(&a, Parity::Odd), a);
    }

    #[test]
    fn exterior_parity_of_shear() {
        // D_N for N = 2
        let d = m(&[vec![1, 0], vec![-1, 2]]);
        assert_eq!(exterior_parity(&d, Parity::Even), m(&[vec![1, 0], vec![0, 2]]));
        assert_eq!(exterior_parity(&d, Parity::Odd), d);
        let generic = m(&[vec![1, 2], vec![3, 4]]);
        assert_eq!(exterior_parity(&generic, Parity::Odd), generic);
    }

    #[test]
    fn subset_basis_shape() {
        let even = SubsetBasis::with_parity(4, Parity::Even);
        assert_eq!(even.len(), 8);
        assert_eq!(even.subsets[0], Vec::<usize>::new());
        assert_eq!(even.subsets[1], vec![0, 1]);
        assert_eq!(even.subsets[7], vec![0, 1, 2, 3]);
        let odd = SubsetBasis::with_parity(4, Parity::Odd);
        assert_eq!(odd.len(), 8);
        assert_eq!(odd.subsets[0], vec![0]);
        assert_eq!(odd.subsets[4], vec![0, 1, 2]);
    }

    fn check_snf(a: &IntMatrix) {
        let s = smith_normal_form(a);
        assert_eq!(s.u.mul(a).mul(&s.v), s.d, "U*M*V = D fails for {a}");
        assert_eq!(s.u.det().abs(), big(1));
        assert_eq!(s.v.det().abs(), big(1));
        assert!(s.u.mul(&s.u_inv).is_identity());
        assert!(s.v.mul(&s.v_inv).is_identity());
        let diag = s.diagonal();
        for w in diag.windows(2) {
            if !w[1].is_zero() {
                assert!(!w[0].is_zero(), "zero before nonzero in chain");
                assert!((&w[1] % &w[0]).is_zero(), "divisibility fails: {} | {}", w[0], w[1]);
            }
        }
        for d in diag {
            assert!(!d.is_negative());
        }
    }

    #[test]
    fn snf_examples() {
        let a = m(&[vec![2, 4], vec![6, 8]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.diagonal(), vec![big(2), big(4)]);
        check_snf(&a);

        let s = smith_normal_form(&IntMatrix::identity(3));
        assert!(s.d.is_identity());
        assert!(s.u.is_identity());
        assert!(s.v.is_identity());

        let diag2 = m(&[vec![2, 0], vec![0, 2]]);
        let s = smith_normal_form(&diag2);
        assert_eq!(s.diagonal(), vec![big(2), big(2)]);
        assert!(s.u.is_identity());
        assert!(s.v.is_identity());
    }

    #[test]
    fn kernel_examples() {
        let (rank, kernel) = integer_kernel_rank(&m(&[vec![1, 0], vec![0, 0]]));
        assert_eq!(rank, 1);
        assert_eq!(kernel, vec![vec![big(0), big(1)]]);

        let (rank, kernel) = integer_kernel_rank(&m(&[vec![1, 0], vec![-1, 2]]));
        assert_eq!(rank, 2);
        assert!(kernel.is_empty());

        let (rank, kernel) = integer_kernel_rank(&m(&[vec![2, 4]]));
        assert_eq!(rank, 1);
        assert_eq!(kernel, vec![vec![big(2), big(-1)]]);
    }

    #[test]
    fn coset_reps_of_doubled_identity() {
        let reps = coset_representatives(&IntMatrix::identity(2).scale(&big(2))).unwrap();
        assert_eq!(reps.index, Some(big(4)));
        let mut got: Vec<Vec<BigInt>> = reps.torsion.clone();
        got.sort();
        let want: Vec<Vec<BigInt>> = vec![
            vec![big(0), big(0)],
            vec![big(0), big(1)],
            vec![big(1), big(0)],
            vec![big(1), big(1)],
        ];
        assert_eq!(got, want);
        assert!(reps.free_basis.is_empty());
    }

    #[test]
    fn coset_reps_mixed_diagonal() {
        let reps = coset_representatives(&m(&[vec![1, 0], vec![0, 2]])).unwrap();
        assert_eq!(reps.index, Some(big(2)));
        let mut got = reps.torsion.clone();
        got.sort();
        assert_eq!(got, vec![vec![big(0), big(0)], vec![big(0), big(1)]]);
    }

    #[test]
    fn coset_reps_coordinate_inclusion() {
        // Z^2 -> Z^4, infinite index: unit torsion, free complement rank 2
        let incl = IntMatrix::from_fn(4, 2, |i, j| if i == j { big(1) } else { big(0) });
        let reps = coset_representatives(&incl).unwrap();
        assert_eq!(reps.index, None);
        assert_eq!(reps.torsion.len(), 1);
        assert_eq!(reps.free_basis.len(), 2);
    }

    #[test]
    fn coset_not_full_rank_rejected() {
        let bad = m(&[vec![1, 2], vec![2, 4]]);
        assert!(matches!(coset_representatives(&bad), Err(Error::NotFullColumnRank)));
    }

    #[test]
    fn coset_completeness_brute_force() {
        // every lattice point in a box is congruent to exactly one representative
        for mat in [
            m(&[vec![2, 0], vec![0, 2]]),
            m(&[vec![1, 0], vec![-1, 2]]),
            m(&[vec![3, 1], vec![0, 2]]),
            m(&[vec![2, 1], vec![1, 2]]),
        ] {
            let reps = coset_representatives(&mat).unwrap();
            let det = mat.det().abs();
            assert_eq!(reps.index.clone().unwrap(), det);
            let bound: i64 = 6;
            for x in -bound..=bound {
                for y in -bound..=bound {
                    let v = vec![big(x), big(y)];
                    let r = reps.reduce(&v);
                    // r must be one of the torsion reps
                    assert!(reps.torsion.contains(&r), "reduce({x},{y}) not a rep for {mat}");
                    // and v - r must lie in the column lattice: solve M z = v - r
                    let diff: Vec<BigInt> =
                        v.iter().zip(&r).map(|(a, b)| a - b).collect();
                    assert!(in_column_lattice(&mat, &diff));
                }
            }
            // irredundance: distinct reps are incongruent
            for (i, a) in reps.torsion.iter().enumerate() {
                for b in reps.torsion.iter().skip(i + 1) {
                    let diff: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x - y).collect();
                    assert!(!in_column_lattice(&mat, &diff));
                }
            }
        }
    }

    fn in_column_lattice(mat: &IntMatrix, v: &[BigInt]) -> bool {
        // solve M z = v over Z via the Smith decomposition
        let s = smith_normal_form(mat);
        let w = s.u.apply(v);
        let diag = s.diagonal();
        for (i, wi) in w.iter().enumerate() {
            if i < diag.len() && !diag[i].is_zero() {
                if !(wi % &diag[i]).is_zero() {
                    return false;
                }
            } else if !wi.is_zero() {
                return false;
            }
        }
        true
    }

    proptest::proptest! {
        #[test]
        fn exterior_functoriality(
            a_entries in proptest::collection::vec(-3i64..=3, 16),
            b_entries in proptest::collection::vec(-3i64..=3, 16),
            n in 1usize..=4, k in 1usize..=4, l in 1usize..=4
        ) {
            let a = IntMatrix::from_fn(n, k, |i, j| big(a_entries[i * 4 + j]));
            let b = IntMatrix::from_fn(k, l, |i, j| big(b_entries[i * 4 + j]));
            let ab = a.mul(&b);
            for parity in [Parity::Even, Parity::Odd] {
                let lhs = exterior_parity(&ab, parity);
                let rhs = exterior_parity(&a, parity).mul(&exterior_parity(&b, parity));
                proptest::prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn snf_validity_random(entries in proptest::collection::vec(-9i64..=9, 25), r in 1usize..=5, c in 1usize..=5) {
            let a = IntMatrix::from_fn(r, c, |i, j| big(entries[i * 5 + j]));
            check_snf(&a);
        }
    }
}
