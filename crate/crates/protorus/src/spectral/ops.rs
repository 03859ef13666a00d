use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::hermitian::{CMatrix, HermitianMatrix, EIG_TOL};
use super::label::Label;
use super::multiplier::{Ball, FourierMultiplier, Increment};
use super::ASSERT_TOL;
use crate::intlat::{coset_representatives, IntMatrix};
use crate::{Error, Result};

/// Outcome of the finite-multiplicity test at radius R.
#[derive(Debug, Clone)]
pub enum MultiplicityCheck {
    /// exact dimension count over a certified ball
    CertifiedFinite { count: usize },
    /// the oracle only samples; the count is a lower bound over the box
    SampledPass { count: usize, box_note: String },
    /// the symbol is not proper: a witness region accumulates spectrum
    Fail { witness: Vec<(Label, f64)> },
}

/// Counts eigenvalues of the fiber symbols inside [-R, R] over the ball.
pub fn finite_multiplicity_check(
    f: &FourierMultiplier,
    radius: f64,
) -> Result<MultiplicityCheck> {
    match f.ball(radius)? {
        Ball::Certified(labels) => {
            let count = count_eigs(f, &labels, radius)?;
            Ok(MultiplicityCheck::CertifiedFinite { count })
        }
        Ball::SampledOnly { labels, box_note } => {
            let count = count_eigs(f, &labels, radius)?;
            Ok(MultiplicityCheck::SampledPass { count, box_note })
        }
        Ball::NotProper { witness } => Ok(MultiplicityCheck::Fail { witness }),
    }
}

fn count_eigs(f: &FourierMultiplier, labels: &[Label], radius: f64) -> Result<usize> {
    let mut count = 0;
    for label in labels {
        let eigs = f.symbol(label)?.eigenvalues(EIG_TOL)?;
        count += eigs.iter().filter(|v| v.abs() <= radius + ASSERT_TOL).count();
    }
    Ok(count)
}

/// Exact enumeration of (label, eigenvalue) pairs with |eigenvalue| <= R,
/// sorted canonically.  Requires a certified ball oracle.
pub fn spectrum_enumerate(
    f: &FourierMultiplier,
    radius: f64,
) -> Result<Vec<(Label, f64)>> {
    let labels = match f.ball(radius)? {
        Ball::Certified(labels) => labels,
        _ => return Err(Error::UncertifiedBall),
    };
    let mut out = Vec::new();
    for label in labels {
        let eigs = f.symbol(&label)?.eigenvalues(EIG_TOL)?;
        for v in eigs {
            if v.abs() <= radius + ASSERT_TOL {
                out.push((label.clone(), v));
            }
        }
    }
    out.sort_by(|a, b| {
        a.0.sort_key()
            .cmp(&b.0.sort_key())
            .then(a.1.partial_cmp(&b.1).unwrap())
    });
    Ok(out)
}

/// Upper and sampled lower bound for the commutator norm with the monomial
/// of shift a; for diagonal multipliers the norm is sup_x |F(x+a) - F(x)|.
#[derive(Debug, Clone, Copy)]
pub struct CommutatorNorm {
    pub upper: f64,
    pub lower: f64,
    /// the family formula gives the sup exactly (constant increments)
    pub exact: bool,
}

pub fn monomial_commutator_norm(
    f: &FourierMultiplier,
    shift: &Label,
    sample_radius: f64,
) -> Result<CommutatorNorm> {
    let bound = f.increment(shift)?;
    let upper = bound.value();
    if matches!(shift, Label::Lattice(v) if v.iter().all(|c| *c == 0)) {
        return Ok(CommutatorNorm { upper: 0.0, lower: 0.0, exact: true });
    }
    // flat increments are constant in x: the bound is the norm
    if f.domain_name() == "lattice" && f.fiber_dim() > 1 {
        return Ok(CommutatorNorm { upper, lower: upper, exact: true });
    }
    let labels = match f.ball(sample_radius)? {
        Ball::Certified(labels) | Ball::SampledOnly { labels, .. } => labels,
        Ball::NotProper { witness } => witness.into_iter().map(|(l, _)| l).collect(),
    };
    let mut lower = 0.0f64;
    for x in &labels {
        let shifted = f.label_add(x, shift)?;
        let diff = f.symbol(&shifted)?.sub(&f.symbol(x)?);
        lower = lower.max(diff.operator_norm()?);
    }
    let _ = matches!(bound, Increment::Exact(_));
    Ok(CommutatorNorm { upper, lower, exact: false })
}

/// Per-coset restriction data for a full-column-rank lattice map.
#[derive(Debug, Clone)]
pub struct CosetBlock {
    pub representative: Vec<BigInt>,
    /// set when G(r + Mx) - F(x) is x-independent over the tested ball
    pub constant_offset_norm: Option<f64>,
    pub sup_defect: f64,
}

#[derive(Debug, Clone)]
pub struct CosetAnalysis {
    pub blocks: Vec<CosetBlock>,
    pub aggregate: f64,
}

/// Decomposes the target lattice into cosets of M Z^m and reports, per
/// representative, the offset G(r + Mx) - F(x) over the ball of F at R:
/// its norm when constant, and the ball sup otherwise.
pub fn coset_analysis(
    m: &IntMatrix,
    g: &FourierMultiplier,
    f: &FourierMultiplier,
    radius: f64,
) -> Result<CosetAnalysis> {
    let reps = coset_representatives(m)?;
    if reps.index.is_none() {
        return Err(Error::NotFullColumnRank);
    }
    let ball = match f.ball(radius)? {
        Ball::Certified(labels) => labels,
        _ => return Err(Error::UncertifiedBall),
    };
    let mut blocks = Vec::new();
    let mut aggregate = 0.0f64;
    for rep in &reps.torsion {
        let mut first: Option<HermitianMatrix> = None;
        let mut constant = true;
        let mut sup = 0.0f64;
        for x in &ball {
            let Label::Lattice(xv) = x else {
                return Err(Error::DimensionMismatch("coset analysis needs lattice labels".into()));
            };
            // r + M x in the target lattice
            let mx = m.apply(&xv.iter().map(|c| BigInt::from(*c)).collect::<Vec<_>>());
            let target: Vec<i64> = rep
                .iter()
                .zip(&mx)
                .map(|(r, v)| {
                    (r + v)
                        .to_i64()
                        .ok_or_else(|| Error::InvalidParameter("coset label overflows i64".into()))
                })
                .collect::<Result<_>>()?;
            let delta = g
                .symbol(&Label::Lattice(target))?
                .sub(&f.symbol(x)?);
            sup = sup.max(delta.operator_norm()?);
            match &first {
                None => first = Some(delta),
                Some(d0) => {
                    if d0.sub(&delta).matrix().frobenius() > 1e-12 {
                        constant = false;
                    }
                }
            }
        }
        aggregate = aggregate.max(sup);
        blocks.push(CosetBlock {
            representative: rep.clone(),
            constant_offset_norm: (constant && first.is_some()).then_some(sup),
            sup_defect: sup,
        });
    }
    Ok(CosetAnalysis { blocks, aggregate })
}

/// Outcome of the inductive compatibility test.
#[derive(Debug, Clone)]
pub enum Compatibility {
    ExactOnBall,
    MaxDefect { value: f64, witness: Label },
}

/// Evaluates |F_next(Mx) J - J F(x)| over the certified ball of F at R;
/// exact when every defect is at most 1e-10.
pub fn compatibility_check(
    f: &FourierMultiplier,
    f_next: &FourierMultiplier,
    m: &IntMatrix,
    j_iso: &CMatrix,
    radius: f64,
) -> Result<Compatibility> {
    // isometry: J* J = I within 1e-12
    let gram = j_iso.adjoint().mul(j_iso);
    let defect = gram.sub(&CMatrix::identity(j_iso.cols())).frobenius();
    if defect > 1e-12 {
        return Err(Error::NonIsometry);
    }
    let ball = match f.ball(radius)? {
        Ball::Certified(labels) => labels,
        _ => return Err(Error::UncertifiedBall),
    };
    let mut worst: Option<(f64, Label)> = None;
    for x in &ball {
        let Label::Lattice(xv) = x else {
            return Err(Error::DimensionMismatch(
                "compatibility check needs lattice labels".into(),
            ));
        };
        let mx: Vec<i64> = m
            .apply(&xv.iter().map(|c| BigInt::from(*c)).collect::<Vec<_>>())
            .iter()
            .map(|v| v.to_i64().unwrap())
            .collect();
        let lhs = f_next.symbol(&Label::Lattice(mx))?.matrix().mul(j_iso);
        let rhs = j_iso.mul(f.symbol(x)?.matrix());
        let d = lhs.sub(&rhs).operator_norm()?;
        if worst.as_ref().map(|(w, _)| d > *w).unwrap_or(true) {
            worst = Some((d, x.clone()));
        }
    }
    match worst {
        Some((value, witness)) if value > 1e-10 => Ok(Compatibility::MaxDefect { value, witness }),
        _ => Ok(Compatibility::ExactOnBall),
    }
}

/// Compact-resolvent diagnostic across a radius sequence.
#[derive(Debug, Clone)]
pub enum ResolventDiagnostic {
    CompactEvidence { counts: Vec<(f64, usize)> },
    NonCompactWitness { witness: Vec<(Label, f64)> },
}

/// For proper symbols, certified ball counts per radius; for the flat limit
/// symbol, the explicit witness sequence with eigenvalues tending to zero.
pub fn resolvent_diagnostic(
    f: &FourierMultiplier,
    radii: &[f64],
    depth: usize,
) -> Result<ResolventDiagnostic> {
    // probe once to distinguish proper from non-proper
    let probe = f.ball(radii.first().copied().unwrap_or(1.0))?;
    if let Ball::NotProper { witness } = probe {
        let truncated: Vec<(Label, f64)> = witness.into_iter().take(depth).collect();
        return Ok(ResolventDiagnostic::NonCompactWitness { witness: truncated });
    }
    let mut counts = Vec::new();
    for &r in radii {
        match finite_multiplicity_check(f, r)? {
            MultiplicityCheck::CertifiedFinite { count } => counts.push((r, count)),
            _ => return Err(Error::UncertifiedBall),
        }
    }
    Ok(ResolventDiagnostic::CompactEvidence { counts })
}

/// Outcome of the stage-cut counting for the nonunital models.
#[derive(Debug, Clone)]
pub enum CutdownCount {
    Finite { count: u64 },
    /// without the left-index cut the count grows without bound; the witness
    /// fixes one ball label and lets the free index run
    Unbounded { witness: String },
}

/// Exact count of spectral states at value <= R with the left index cut to
/// `cut` values; `None` reports the unbounded free-index witness.
pub fn cutdown_count(
    model: &FourierMultiplier,
    cut: Option<u64>,
    radius: f64,
) -> Result<CutdownCount> {
    let labels = match model.ball(radius)? {
        Ball::Certified(labels) => labels,
        _ => return Err(Error::UncertifiedBall),
    };
    match cut {
        Some(m) => {
            let per_index = count_eigs(model, &labels, radius)? as u64;
            Ok(CutdownCount::Finite { count: m * per_index })
        }
        None => {
            let anchor = labels
                .first()
                .map(|l| l.to_string())
                .unwrap_or_else(|| "(empty ball)".into());
            Ok(CutdownCount::Unbounded {
                witness: format!(
                    "left index unbounded at fixed ball label {anchor}: the cut was omitted"
                ),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::spectral::multiplier::{make_multiplier, MultiplierSpec};
    use crate::spectral::SolenoidLabel;

    const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

    fn flat_i2() -> FourierMultiplier {
        make_multiplier(&MultiplierSpec::Flat {
            l: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            d: 2,
        })
        .unwrap()
    }

    #[test]
    fn flat_multiplicity_count() {
        match finite_multiplicity_check(&flat_i2(), TWO_PI).unwrap() {
            MultiplicityCheck::CertifiedFinite { count } => assert_eq!(count, 10),
            other => panic!("expected certified count, got {other:?}"),
        }
    }

    #[test]
    fn flat_spectrum_values() {
        let spec = spectrum_enumerate(&flat_i2(), TWO_PI).unwrap();
        assert_eq!(spec.len(), 10);
        let zeros = spec.iter().filter(|(_, v)| v.abs() <= 1e-9).count();
        let plus = spec
            .iter()
            .filter(|(_, v)| (v - TWO_PI).abs() <= 1e-9)
            .count();
        let minus = spec
            .iter()
            .filter(|(_, v)| (v + TWO_PI).abs() <= 1e-9)
            .count();
        assert_eq!((zeros, plus, minus), (2, 4, 4));
        // flat spectrum law: each value is +-2pi|x| within 1e-9
        for (label, v) in &spec {
            let Label::Lattice(x) = label else { panic!() };
            let norm = ((x[0] * x[0] + x[1] * x[1]) as f64).sqrt();
            assert!(
                (v.abs() - TWO_PI * norm).abs() <= 1e-9,
                "flat law fails at {label}: {v}"
            );
        }
    }

    #[test]
    fn multiplicity_monotone_in_radius() {
        let f = make_multiplier(&MultiplierSpec::LengthSolenoid { n: 2 }).unwrap();
        let mut last = 0usize;
        for r in [0.5, 1.0, 1.5, 2.0, 2.5, 3.0] {
            match finite_multiplicity_check(&f, r).unwrap() {
                MultiplicityCheck::CertifiedFinite { count } => {
                    assert!(count >= last, "count decreased at R={r}");
                    last = count;
                }
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn solenoid_length_count_at_one() {
        let f = make_multiplier(&MultiplierSpec::LengthSolenoid { n: 2 }).unwrap();
        match finite_multiplicity_check(&f, 1.0).unwrap() {
            MultiplicityCheck::CertifiedFinite { count } => assert_eq!(count, 5),
            other => panic!("{other:?}"),
        }
        // eigenvalues {0, 1 x4}
        let spec = spectrum_enumerate(&f, 1.0).unwrap();
        let zeros = spec.iter().filter(|(_, v)| v.abs() < 1e-12).count();
        let ones = spec.iter().filter(|(_, v)| (v - 1.0).abs() < 1e-12).count();
        assert_eq!((zeros, ones), (1, 4));
    }

    #[test]
    fn sampled_oracle_refused_for_enumeration() {
        let f = flat_i2().declare_sampled_only();
        assert!(matches!(
            spectrum_enumerate(&f, TWO_PI),
            Err(Error::UncertifiedBall)
        ));
        match finite_multiplicity_check(&f, TWO_PI).unwrap() {
            MultiplicityCheck::SampledPass { count, .. } => assert_eq!(count, 10),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn flat_commutator_exact() {
        let f = flat_i2();
        let c = monomial_commutator_norm(&f, &Label::lattice(&[1, 0]), TWO_PI).unwrap();
        assert!(c.exact);
        assert!((c.upper - TWO_PI).abs() < 1e-12);
        assert!((c.lower - TWO_PI).abs() < 1e-12);
        let z = monomial_commutator_norm(&f, &Label::lattice(&[0, 0]), TWO_PI).unwrap();
        assert_eq!(z.upper, 0.0);
    }

    #[test]
    fn solenoid_commutator_bounds() {
        let f = make_multiplier(&MultiplierSpec::LengthSolenoid { n: 2 }).unwrap();
        let a = Label::Solenoid(SolenoidLabel::new([1, 0], 0, 2));
        let c = monomial_commutator_norm(&f, &a, 3.0).unwrap();
        assert!((c.upper - 1.0).abs() < 1e-12);
        // the sup is achieved on the axis: lower bound reaches 1 exactly
        assert!(c.lower >= 1.0 - 1e-9);
        assert!(c.lower <= c.upper + 1e-12);
    }

    #[test]
    fn solenoid_coset_offsets() {
        // rescaled flat stage symbols: F_n(x) = 2 pi gamma(x / N^(n-1));
        // on the coset r + N x the offset is the constant 2 pi gamma(r / N^n)
        let n = 2i64;
        let stage = 1usize;
        let scale = |s: usize| (n as f64).powi(-(s as i32 - 1));
        let f = make_multiplier(&MultiplierSpec::Flat {
            l: vec![vec![scale(stage), 0.0], vec![0.0, scale(stage)]],
            d: 2,
        })
        .unwrap();
        let g = make_multiplier(&MultiplierSpec::Flat {
            l: vec![vec![scale(stage + 1), 0.0], vec![0.0, scale(stage + 1)]],
            d: 2,
        })
        .unwrap();
        let m = IntMatrix::identity(2).scale(&BigInt::from(n));
        let analysis = coset_analysis(&m, &g, &f, TWO_PI).unwrap();
        assert_eq!(analysis.blocks.len(), 4);
        for block in &analysis.blocks {
            let r_norm = block
                .representative
                .iter()
                .map(|v| v.to_i64().unwrap() as f64)
                .map(|v| v * v)
                .sum::<f64>()
                .sqrt();
            let want = TWO_PI * r_norm / (n as f64).powi(stage as i32);
            let got = block.constant_offset_norm.expect("offset should be constant");
            assert!((got - want).abs() < 1e-9, "coset {:?}", block.representative);
        }
        // identity map, same symbol: single coset, zero offset
        let id = IntMatrix::identity(2);
        let analysis = coset_analysis(&id, &f, &f, TWO_PI).unwrap();
        assert_eq!(analysis.blocks.len(), 1);
        assert!(analysis.aggregate < 1e-12);
    }

    #[test]
    fn length_step_coset_offsets_bounded() {
        // per-coset diagonal offsets of the length step are bounded by
        // |r / N^n| + h_N(r / N^n)
        let n = 2u64;
        let stage = 1usize;
        let f = make_multiplier(&MultiplierSpec::LengthSolenoidStage { n, stage }).unwrap();
        let g = make_multiplier(&MultiplierSpec::LengthSolenoidStage { n, stage: stage + 1 })
            .unwrap();
        let m = IntMatrix::identity(2).scale(&BigInt::from(n as i64));
        let analysis = coset_analysis(&m, &g, &f, 3.0).unwrap();
        assert_eq!(analysis.blocks.len(), 4);
        for block in &analysis.blocks {
            let r: Vec<i64> = block
                .representative
                .iter()
                .map(|v| v.to_i64().unwrap())
                .collect();
            let shifted = SolenoidLabel::new([r[0], r[1]], stage as u32, n);
            let bound = shifted.norm_f64(n) + shifted.depth as f64;
            assert!(
                block.sup_defect <= bound + 1e-9,
                "coset {r:?}: defect {} > bound {bound}",
                block.sup_defect
            );
            // the zero coset has zero offset; nonzero cosets vary with x
            if r == [0, 0] {
                assert!(block.sup_defect < 1e-12);
            } else {
                assert!(block.constant_offset_norm.is_none());
            }
        }
    }

    #[test]
    fn rescaled_family_compatible() {
        // F_{n+1}(N x) = F_n(x) exactly for the rescaled flat family
        let n = 2i64;
        for stage in 1..=4usize {
            let scale = |s: usize| (n as f64).powi(-(s as i32 - 1));
            let f = make_multiplier(&MultiplierSpec::Flat {
                l: vec![vec![scale(stage), 0.0], vec![0.0, scale(stage)]],
                d: 2,
            })
            .unwrap();
            let g = make_multiplier(&MultiplierSpec::Flat {
                l: vec![vec![scale(stage + 1), 0.0], vec![0.0, scale(stage + 1)]],
                d: 2,
            })
            .unwrap();
            let m = IntMatrix::identity(2).scale(&BigInt::from(n));
            let j = CMatrix::identity(f.fiber_dim());
            match compatibility_check(&f, &g, &m, &j, 8.0 * std::f64::consts::PI).unwrap() {
                Compatibility::ExactOnBall => {}
                Compatibility::MaxDefect { value, witness } => {
                    panic!("stage {stage}: defect {value} at {witness}")
                }
            }
        }
    }

    #[test]
    fn unrescaled_family_defect() {
        // without rescaling the defect is 2 pi (N-1) at |x| = 1
        let n = 2i64;
        let f = flat_i2();
        let m = IntMatrix::identity(2).scale(&BigInt::from(n));
        let j = CMatrix::identity(f.fiber_dim());
        match compatibility_check(&f, &f, &m, &j, TWO_PI).unwrap() {
            Compatibility::MaxDefect { value, .. } => {
                let want = TWO_PI * (n as f64 - 1.0);
                assert!((value - want).abs() < 1e-9, "defect {value} vs {want}");
            }
            Compatibility::ExactOnBall => panic!("expected a defect"),
        }
    }

    #[test]
    fn zero_symbol_compatible() {
        // F = 0 on both sides intertwines trivially
        let f = make_multiplier(&MultiplierSpec::LengthEuclid {
            weights: vec![rat(1, 1), rat(1, 1)],
        })
        .unwrap();
        let m = IntMatrix::identity(2);
        let j = CMatrix::identity(1);
        match compatibility_check(&f, &f, &m, &j, 1.0).unwrap() {
            Compatibility::ExactOnBall => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn non_isometry_rejected() {
        let f = flat_i2();
        let m = IntMatrix::identity(2);
        let j = CMatrix::identity(2).scale(num_complex::Complex64::new(2.0, 0.0));
        assert!(matches!(
            compatibility_check(&f, &f, &m, &j, 1.0),
            Err(Error::NonIsometry)
        ));
    }

    #[test]
    fn resolvent_witness_for_flat_limit() {
        let f = make_multiplier(&MultiplierSpec::FlatSolenoid { n: 2 }).unwrap();
        match resolvent_diagnostic(&f, &[1.0], 10).unwrap() {
            ResolventDiagnostic::NonCompactWitness { witness } => {
                assert_eq!(witness.len(), 10);
                for (k, (label, eig)) in witness.iter().enumerate() {
                    let Label::Solenoid(g) = label else { panic!() };
                    assert_eq!(g.num, [1, 0]);
                    assert_eq!(g.depth as usize, k + 1);
                    let want = TWO_PI / 2f64.powi(k as i32 + 1);
                    assert!((eig - want).abs() < 1e-12);
                }
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn resolvent_counts_for_length() {
        let f = make_multiplier(&MultiplierSpec::LengthSolenoid { n: 2 }).unwrap();
        match resolvent_diagnostic(&f, &[1.0, 2.0, 4.0], 10).unwrap() {
            ResolventDiagnostic::CompactEvidence { counts } => {
                assert_eq!(counts[0], (1.0, 5));
                assert!(counts[1].1 > counts[0].1);
                assert!(counts[2].1 > counts[1].1);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn weighted_omega_resolvent_evidence() {
        let f = make_multiplier(&MultiplierSpec::WeightedOmega {
            w_slope: rat(1, 1),
            lambda_slope: rat(1, 1),
        })
        .unwrap();
        match resolvent_diagnostic(&f, &[2.0, 3.0], 5).unwrap() {
            ResolventDiagnostic::CompactEvidence { counts } => {
                assert_eq!(counts[0].1, 4);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn cutdown_counts() {
        let f = make_multiplier(&MultiplierSpec::WeightedOmega {
            w_slope: rat(1, 1),
            lambda_slope: rat(1, 1),
        })
        .unwrap();
        match cutdown_count(&f, Some(2), 2.0).unwrap() {
            CutdownCount::Finite { count } => assert_eq!(count, 8),
            other => panic!("{other:?}"),
        }
        match cutdown_count(&f, None, 2.0).unwrap() {
            CutdownCount::Unbounded { witness } => {
                assert!(witness.contains("unbounded"));
            }
            other => panic!("{other:?}"),
        }
        let sq = make_multiplier(&MultiplierSpec::StableCornerSquare { d: 2 }).unwrap();
        match cutdown_count(&sq, Some(2), 2.0).unwrap() {
            CutdownCount::Finite { count } => assert_eq!(count, 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn boundary_audit_for_builtin_oracles() {
        // labels inside an enlarged ball but outside the certified ball must
        // have spectrum strictly above the radius
        let multipliers: Vec<(FourierMultiplier, f64)> = vec![
            (
                make_multiplier(&MultiplierSpec::LengthEuclid {
                    weights: vec![rat(1, 1), rat(2, 1)],
                })
                .unwrap(),
                3.0,
            ),
            (
                make_multiplier(&MultiplierSpec::LengthSolenoid { n: 3 }).unwrap(),
                2.0,
            ),
            (
                make_multiplier(&MultiplierSpec::WeightedOmega {
                    w_slope: rat(1, 1),
                    lambda_slope: rat(1, 2),
                })
                .unwrap(),
                3.0,
            ),
            (
                make_multiplier(&MultiplierSpec::StableCornerSquare { d: 2 }).unwrap(),
                8.0,
            ),
            (
                make_multiplier(&MultiplierSpec::LengthSolenoidStage { n: 2, stage: 2 }).unwrap(),
                2.0,
            ),
        ];
        for (f, radius) in &multipliers {
            let inside: std::collections::HashSet<Label> = match f.ball(*radius).unwrap() {
                Ball::Certified(l) => l.into_iter().collect(),
                other => panic!("{other:?}"),
            };
            let enlarged = match f.ball(radius + 1.5).unwrap() {
                Ball::Certified(l) => l,
                other => panic!("{other:?}"),
            };
            assert!(enlarged.len() > inside.len(), "audit needs a shell");
            for label in &enlarged {
                if inside.contains(label) {
                    continue;
                }
                let eigs = f.symbol(label).unwrap().eigenvalues(EIG_TOL).unwrap();
                assert!(
                    eigs.iter().all(|v| v.abs() > *radius),
                    "completeness violated at {label}"
                );
            }
        }
    }

    #[test]
    fn square_model_spectrum_law() {
        // eigenvalues are sqrt(4 pi^2 |x|^2 + j^2)
        let sq = make_multiplier(&MultiplierSpec::StableCornerSquare { d: 2 }).unwrap();
        let spec = spectrum_enumerate(&sq, 7.0).unwrap();
        assert!(!spec.is_empty());
        for (label, v) in &spec {
            let Label::Square { x, j } = label else { panic!() };
            let n2: f64 = x.iter().map(|c| (*c as f64).powi(2)).sum();
            let want = (4.0 * std::f64::consts::PI.powi(2) * n2 + (*j as f64).powi(2)).sqrt();
            assert!((v - want).abs() < 1e-9);
        }
        // and labels with |x| = 1 appear once R exceeds sqrt(4 pi^2 + 1)
        assert!(spec.iter().any(|(l, _)| matches!(l, Label::Square { x, .. } if x.iter().any(|c| *c != 0))));
    }
}
