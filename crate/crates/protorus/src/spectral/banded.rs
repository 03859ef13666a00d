use num_complex::Complex64;

use super::hermitian::CMatrix;
use super::ASSERT_TOL;
use crate::Result;

/// Result of the banded commutator inequality check.
#[derive(Debug, Clone, Copy)]
pub struct BandedCheck {
    /// operator norm of [D, T] on the finite truncation
    pub lhs: f64,
    /// the propagation bound R(R+1) |T|
    pub rhs: f64,
    pub band: u32,
    pub norm_t: f64,
    pub pass: bool,
}

/// Checks |[D, T]| <= R(R+1) |T| for D = diag(levels) and a matrix T whose
/// propagation R is measured against the level filtration.
pub fn banded_commutator_check(t: &CMatrix, levels: &[u32]) -> Result<BandedCheck> {
    assert_eq!(t.rows(), levels.len());
    assert_eq!(t.cols(), levels.len());
    let n = levels.len();
    let mut band = 0u32;
    for i in 0..n {
        for j in 0..n {
            if t[(i, j)].norm_sqr() > 0.0 {
                band = band.max(levels[i].abs_diff(levels[j]));
            }
        }
    }
    let commutator = CMatrix::from_fn(n, n, |i, j| {
        Complex64::new(levels[i] as f64 - levels[j] as f64, 0.0) * t[(i, j)]
    });
    let lhs = commutator.operator_norm()?;
    let norm_t = t.operator_norm()?;
    let rhs = band as f64 * (band as f64 + 1.0) * norm_t;
    Ok(BandedCheck {
        lhs,
        rhs,
        band,
        norm_t,
        pass: lhs <= rhs + ASSERT_TOL,
    })
}
