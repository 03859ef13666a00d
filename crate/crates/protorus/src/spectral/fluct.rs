use num_complex::Complex64;

use super::hermitian::CMatrix;
use super::label::SolenoidLabel;
use super::ASSERT_TOL;
use crate::{Error, Result};

/// Square Fourier block [-b, b]^2 of a solenoid stage, with the twisted
/// shift operators of that stage's rotation parameter.
struct StageBlock {
    b: i64,
    side: usize,
    theta_stage: f64,
    n: u64,
    stage: usize,
}

impl StageBlock {
    fn new(n: u64, theta: f64, stage: usize, truncation: usize) -> Result<StageBlock> {
        if stage == 0 {
            return Err(Error::InvalidParameter("stages are 1-based here".into()));
        }
        if truncation > 512 {
            return Err(Error::InvalidParameter(
                "truncation dimension is capped at 512".into(),
            ));
        }
        if truncation < 9 {
            return Err(Error::TruncationTooSmall);
        }
        let mut b = 1i64;
        while ((2 * (b + 1) + 1) * (2 * (b + 1) + 1)) as usize <= truncation {
            b += 1;
        }
        let side = (2 * b + 1) as usize;
        let theta_stage = theta / (n as f64).powi(2 * (stage as i32 - 1));
        Ok(StageBlock {
            b,
            side,
            theta_stage,
            n,
            stage,
        })
    }

    fn dim(&self) -> usize {
        self.side * self.side
    }

    fn index(&self, x: [i64; 2]) -> Option<usize> {
        if x[0].abs() > self.b || x[1].abs() > self.b {
            return None;
        }
        Some(((x[0] + self.b) as usize) * self.side + (x[1] + self.b) as usize)
    }

    fn coords(&self, idx: usize) -> [i64; 2] {
        let x0 = (idx / self.side) as i64 - self.b;
        let x1 = (idx % self.side) as i64 - self.b;
        [x0, x1]
    }

    /// ordered-monomial cocycle sigma(a, b) = exp(2 pi i theta a_2 b_1)
    fn cocycle(&self, a: [i64; 2], b: [i64; 2]) -> Complex64 {
        let phase = 2.0 * std::f64::consts::PI * self.theta_stage * (a[1] as f64) * (b[0] as f64);
        Complex64::new(phase.cos(), phase.sin())
    }

    /// stage length multiplier l_s(x) = |x/N^(s-1)| + depth(x/N^(s-1))
    fn length(&self, x: [i64; 2]) -> f64 {
        let g = SolenoidLabel::new(x, self.stage as u32 - 1, self.n);
        g.length(self.n)
    }

    fn diag_length(&self) -> CMatrix {
        let d = self.dim();
        CMatrix::from_fn(d, d, |i, j| {
            if i == j {
                Complex64::new(self.length(self.coords(i)), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// left regular monomial: delta_x -> sigma(a, x) delta_{a+x}
    fn left_shift(&self, a: [i64; 2]) -> CMatrix {
        let d = self.dim();
        let mut m = CMatrix::zero(d, d);
        for col in 0..d {
            let x = self.coords(col);
            if let Some(row) = self.index([a[0] + x[0], a[1] + x[1]]) {
                m[(row, col)] = self.cocycle(a, x);
            }
        }
        m
    }

    /// right regular monomial: delta_x -> sigma(x, a) delta_{x+a}
    fn right_shift(&self, a: [i64; 2]) -> CMatrix {
        let d = self.dim();
        let mut m = CMatrix::zero(d, d);
        for col in 0..d {
            let x = self.coords(col);
            if let Some(row) = self.index([x[0] + a[0], x[1] + a[1]]) {
                m[(row, col)] = self.cocycle(x, a);
            }
        }
        m
    }

    /// orthogonal projection onto the sub-block [-b+margin, b-margin]^2
    fn interior(&self, margin: i64) -> Result<(CMatrix, usize)> {
        let inner = self.b - margin;
        if inner < 0 {
            return Err(Error::TruncationTooSmall);
        }
        let d = self.dim();
        let mut count = 0usize;
        let p = CMatrix::from_fn(d, d, |i, j| {
            if i != j {
                return Complex64::new(0.0, 0.0);
            }
            let x = self.coords(i);
            if x[0].abs() <= inner && x[1].abs() <= inner {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        for i in 0..d {
            if p[(i, i)].re > 0.5 {
                count += 1;
            }
        }
        Ok((p, count))
    }
}

/// Report of the truncated inner-fluctuation check.
#[derive(Debug, Clone, Copy)]
pub struct FluctuationReport {
    /// operator norm of the interior compression of B
    pub norm_b: f64,
    /// |lambda| * (|h| + depth(h)), the stage-independent bound
    pub bound: f64,
    pub selfadjoint_defect: f64,
    pub interior_dim: usize,
    pub pass: bool,
}

/// Builds the truncated one-form B = lambda * U_h [D, U_h^*] on a finite
/// Fourier block of the stage representing h integrally, and checks
/// |B| <= |lambda| * (|h| + h_N(h)) together with B = B^*.
pub fn inner_fluctuation_check(
    n: u64,
    theta: f64,
    h: SolenoidLabel,
    lambda: f64,
    truncation: usize,
) -> Result<FluctuationReport> {
    let stage = h.depth as usize + 1;
    let block = StageBlock::new(n, theta, stage, truncation)?;
    // h at this stage is integral with the stored numerator
    let h_vec = h.num;
    let d = block.diag_length();
    let u = block.left_shift(h_vec);
    let u_star = u.adjoint();
    let b_matrix = u
        .mul(&d.mul(&u_star).sub(&u_star.mul(&d)))
        .scale(Complex64::new(lambda, 0.0));
    let margin = h_vec[0].abs().max(h_vec[1].abs());
    let (p, interior_dim) = block.interior(margin)?;
    if interior_dim == 0 {
        return Err(Error::TruncationTooSmall);
    }
    let compressed = p.mul(&b_matrix).mul(&p);
    let norm_b = compressed.operator_norm()?;
    let selfadjoint_defect = compressed.sub(&compressed.adjoint()).operator_norm()?;
    let bound = lambda.abs() * (h.norm_f64(n) + h.depth as f64);
    Ok(FluctuationReport {
        norm_b,
        bound,
        selfadjoint_defect,
        interior_dim,
        pass: norm_b <= bound + ASSERT_TOL && selfadjoint_defect <= ASSERT_TOL,
    })
}

/// Report of the truncated right-conformal transport check.
#[derive(Debug, Clone, Copy)]
pub struct ConformalReport {
    /// |P([R_k D R_k, pi(a)] - R_k [D, pi(a)] R_k) P| on the interior block
    pub transport_residual: f64,
    /// |P [R_k, pi(a)] P| on the interior block
    pub commutation_residual: f64,
    pub interior_dim: usize,
    pub pass: bool,
}

/// Checks the right-conformal transport identity on a finite Fourier block:
/// with k = 1 + epsilon (W_h + W_h^*) acting on the right and a the monomial
/// of shift `a_shift`, the interior compressions of [R_k D R_k, pi(a)] and
/// R_k [D, pi(a)] R_k agree, and R_k commutes with pi(a).
pub fn right_conformal_check(
    n: u64,
    theta: f64,
    stage: usize,
    epsilon: f64,
    h_shift: [i64; 2],
    a_shift: [i64; 2],
    truncation: usize,
) -> Result<ConformalReport> {
    if epsilon.abs() >= 0.5 {
        return Err(Error::InvalidParameter(
            "conformal coefficient must satisfy |epsilon| < 1/2".into(),
        ));
    }
    let block = StageBlock::new(n, theta, stage, truncation)?;
    let dim = block.dim();
    let d = block.diag_length();
    let r_k = {
        let plus = block.right_shift(h_shift);
        let minus = block.right_shift([-h_shift[0], -h_shift[1]]);
        CMatrix::identity(dim).add(&plus.add(&minus).scale(Complex64::new(epsilon, 0.0)))
    };
    let pi_a = block.left_shift(a_shift);
    let d_conf = r_k.mul(&d).mul(&r_k);
    let t1 = d_conf.commutator(&pi_a);
    let t2 = r_k.mul(&d.commutator(&pi_a)).mul(&r_k);
    let margin = a_shift[0].abs().max(a_shift[1].abs())
        + 2 * h_shift[0].abs().max(h_shift[1].abs());
    let (p, interior_dim) = block.interior(margin)?;
    if interior_dim == 0 {
        return Err(Error::TruncationTooSmall);
    }
    let transport_residual = p.mul(&t1.sub(&t2)).mul(&p).operator_norm()?;
    let commutation_residual = p.mul(&r_k.commutator(&pi_a)).mul(&p).operator_norm()?;
    Ok(ConformalReport {
        transport_residual,
        commutation_residual,
        interior_dim,
        pass: transport_residual <= ASSERT_TOL && commutation_residual <= ASSERT_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const THETA: f64 = 0.6180339887498949;

    #[test]
    fn fluctuation_bound_for_basic_shift() {
        let h = SolenoidLabel::new([1, 0], 0, 2);
        let report = inner_fluctuation_check(2, THETA, h, 1.0, 128).unwrap();
        assert!(report.pass, "{report:?}");
        assert!((report.bound - 1.0).abs() < 1e-12);
        assert!(report.norm_b <= 1.0 + 1e-9);
        // the sup is achieved on the axis inside the interior
        assert!(report.norm_b >= 1.0 - 1e-9, "norm {report:?}");
        assert!(report.selfadjoint_defect <= 1e-12);
    }

    #[test]
    fn fluctuation_scales_with_lambda() {
        let h = SolenoidLabel::new([1, 0], 0, 2);
        let report = inner_fluctuation_check(2, THETA, h, -2.5, 128).unwrap();
        assert!(report.pass);
        assert!((report.bound - 2.5).abs() < 1e-12);
    }

    #[test]
    fn fluctuation_deeper_label() {
        // h = (1/2, 0): bound |h| + depth = 0.5 + 1
        let h = SolenoidLabel::new([1, 0], 1, 2);
        let report = inner_fluctuation_check(2, THETA, h, 1.0, 256).unwrap();
        assert!(report.pass, "{report:?}");
        assert!((report.bound - 1.5).abs() < 1e-12);
    }

    #[test]
    fn conformal_identity_for_identity_k() {
        // epsilon = 0: deformation is D itself, residuals vanish
        let report = right_conformal_check(2, THETA, 1, 0.0, [1, 0], [0, 1], 128).unwrap();
        assert!(report.pass);
        assert!(report.transport_residual <= 1e-12);
        assert!(report.commutation_residual <= 1e-12);
    }

    #[test]
    fn conformal_transport_for_quarter_deformation() {
        let report = right_conformal_check(2, THETA, 1, 0.25, [1, 0], [0, 1], 128).unwrap();
        assert!(report.pass, "{report:?}");
        assert!(report.transport_residual <= 1e-9);
        assert!(report.commutation_residual <= 1e-9);
        assert!(report.interior_dim > 0);
    }

    #[test]
    fn conformal_at_later_stage() {
        let report = right_conformal_check(2, THETA, 3, 0.25, [1, 0], [1, 1], 200).unwrap();
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn truncation_too_small_reported() {
        // margin eats the whole block
        let err = right_conformal_check(2, THETA, 1, 0.25, [3, 0], [3, 3], 64);
        assert!(matches!(err, Err(Error::TruncationTooSmall)));
    }

    #[test]
    fn epsilon_range_checked() {
        let err = right_conformal_check(2, THETA, 1, 0.75, [1, 0], [0, 1], 128);
        assert!(matches!(err, Err(Error::InvalidParameter(_))));
    }
}
