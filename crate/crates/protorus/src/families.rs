//! Builders for the worked inductive systems and their classification
//! checkers: the unital toric solenoid, the stable pure-corner system, the
//! dimension-changing corner model, the same-dimensional noncorner family,
//! the abstract K1 engine, and the four-dimensional trace-kernel killer.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exact::{GeneratorEnv, SymbolicScalar};
use crate::homk::{build_connecting_map, CaseData};
use crate::intlat::IntMatrix;
use crate::prolimit::{
    ClosedFormSummary, FamilyCertificate, ProtoralSystem, Stage, DEFAULT_HORIZON,
};
use crate::torus::{SkewForm, TorusDescriptor};
use crate::{Error, Result};

/// Parameter record for one of the built-in families.
#[derive(Debug, Clone)]
pub enum FamilyTag {
    /// Unital toric system with matrix N*I2 on J(theta / N^(2n)).
    Solenoid { theta: SymbolicScalar, n: u64 },
    /// Pure-corner doubling on a fixed nondegenerate form.
    StableCorner { form: SkewForm },
    /// Coordinate-inclusion corner system over a list of block parameters;
    /// the horizon is capped by the number of declared parameters.
    DimChanging { thetas: Vec<SymbolicScalar> },
    /// Same-dimensional proper system with the recurrence
    /// theta_{n+1} = theta_n / (N + theta_n).
    Ax7 { n: u64, theta0: SymbolicScalar },
    /// Abstract unital maps: identity on K0, the given matrices on K1.
    /// A sequence shorter than the horizon repeats its last entry.
    K1Engine { theta: SymbolicScalar, p_seq: Vec<IntMatrix> },
    /// Abstract unital idempotent killing the trace-zero even summand of
    /// J(alpha) + J(beta); zero on K1.
    InfinitesimalKilling { alpha: SymbolicScalar, beta: SymbolicScalar },
}

fn rational_power(base: u64, exp: u32) -> SymbolicScalar {
    SymbolicScalar::from_rational(BigRational::from_integer(BigInt::from(base).pow(exp)))
}

/// Partial geometric sum s_i = sum_{k=1}^{i} N^{-k} as an exact rational.
pub fn geometric_tail(n: u64, i: usize) -> BigRational {
    let mut acc = BigRational::zero();
    let mut power = BigRational::from_integer(BigInt::from(n));
    for _ in 0..i {
        acc += BigRational::from_integer(BigInt::one()) / &power;
        power *= BigRational::from_integer(BigInt::from(n));
    }
    acc
}

/// theta_i in closed form: theta0 / (N^i * (1 + theta0 * s_i)).
pub fn ax7_theta(theta0: &SymbolicScalar, n: u64, i: usize) -> SymbolicScalar {
    let s_i = SymbolicScalar::from_rational(geometric_tail(n, i));
    let c_i = SymbolicScalar::one().add(&theta0.mul(&s_i));
    theta0
        .div(&rational_power(n, i as u32).mul(&c_i))
        .expect("c_i is nonzero")
}

fn require_interval_in_unit(theta: &SymbolicScalar, env: &GeneratorEnv, what: &str) -> Result<()> {
    let iv = theta.interval_eval(env)?;
    if !(iv.lo.is_positive() && iv.hi < BigRational::one()) {
        return Err(Error::InvalidParameter(format!(
            "{what} must be anchored inside (0,1)"
        )));
    }
    Ok(())
}

/// The idempotent even K0-map of the trace-kernel killer: fixes the empty
/// set, both complete blocks, and the top class; kills the cross terms.
pub fn killing_idempotent() -> IntMatrix {
    let mut m = IntMatrix::zero(8, 8);
    for idx in [0usize, 1, 6, 7] {
        m[(idx, idx)] = BigInt::one();
    }
    m
}

/// Builds the inductive system for a family tag.
pub fn build_family(
    tag: &FamilyTag,
    env: &GeneratorEnv,
    horizon: usize,
) -> Result<ProtoralSystem> {
    match tag {
        FamilyTag::Solenoid { theta, n } => {
            if *n < 2 {
                return Err(Error::InvalidParameter("N must be >= 2".into()));
            }
            let n = *n;
            let theta = theta.clone();
            let env_inner = env.clone();
            let builder = move |i: usize| -> Result<Stage> {
                let form = SkewForm::j(theta.div(&rational_power(n, 2 * i as u32))?);
                let next = SkewForm::j(theta.div(&rational_power(n, 2 * (i as u32 + 1)))?);
                let source = TorusDescriptor::unamplified(form);
                let target = TorusDescriptor::unamplified(next);
                let map = build_connecting_map(
                    CaseData::UnitalToric {
                        source: source.clone(),
                        target,
                        matrix: IntMatrix::identity(2).scale(&BigInt::from(n)),
                        phases: vec![],
                        blocks: None,
                    },
                    &env_inner,
                    crate::exact::DEFAULT_MAX_REFINEMENTS,
                )?;
                Ok(Stage { descriptor: source, map })
            };
            Ok(ProtoralSystem::new(Box::new(builder), env.clone(), horizon)
                .with_certificate(FamilyCertificate::Unital)
                .with_summary(ClosedFormSummary {
                    family: format!("solenoid(N={n})"),
                    k0: format!("Z + Z[1/{n}] with order unit (1,0)"),
                    k1: format!("Z[1/{n}]^2"),
                    trace_range: format!("a + theta*q, q in Z[1/{n}]"),
                    scale: "unital (scale 1)".into(),
                }))
        }
        FamilyTag::StableCorner { form } => {
            let rank = 1usize << (form.size() - 1);
            let form = form.clone();
            let env_inner = env.clone();
            let builder = move |i: usize| -> Result<Stage> {
                if i >= 63 {
                    return Err(Error::HorizonExceeded { stage: i, horizon: 62 });
                }
                let source = TorusDescriptor::new(form.clone(), 1u64 << i);
                let target = TorusDescriptor::new(form.clone(), 1u64 << (i + 1));
                let map = build_connecting_map(
                    CaseData::PureCorner {
                        source: source.clone(),
                        target,
                        corner_trace: SymbolicScalar::from_rational(BigRational::new(
                            BigInt::one(),
                            BigInt::from(2),
                        )),
                        beta0: None,
                        beta1: None,
                    },
                    &env_inner,
                    crate::exact::DEFAULT_MAX_REFINEMENTS,
                )?;
                Ok(Stage { descriptor: source, map })
            };
            let half = SymbolicScalar::from_rational(BigRational::new(
                BigInt::one(),
                BigInt::from(2),
            ));
            Ok(ProtoralSystem::new(Box::new(builder), env.clone(), horizon)
                .with_certificate(FamilyCertificate::GeometricCorner { t: half })
                .with_summary(ClosedFormSummary {
                    family: "stable-corner".into(),
                    k0: format!("rank {rank}, stationary identity maps"),
                    k1: format!("rank {rank}, stationary identity maps"),
                    trace_range: "Pfaffian minors of the fixed form".into(),
                    scale: "infinite; full projection scale".into(),
                }))
        }
        FamilyTag::DimChanging { thetas } => {
            if thetas.len() < 2 {
                return Err(Error::InvalidParameter(
                    "dimension-changing family needs at least two block parameters".into(),
                ));
            }
            let capped = horizon.min(thetas.len().saturating_sub(2));
            let thetas = thetas.clone();
            let env_inner = env.clone();
            let builder = move |i: usize| -> Result<Stage> {
                if i + 2 > thetas.len() {
                    return Err(Error::HorizonExceeded {
                        stage: i,
                        horizon: thetas.len().saturating_sub(2),
                    });
                }
                let block_sum = |count: usize| -> SkewForm {
                    let mut form = SkewForm::j(thetas[0].clone());
                    for t in thetas.iter().take(count).skip(1) {
                        form = form.direct_sum(&SkewForm::j(t.clone()));
                    }
                    form
                };
                let source_form = block_sum(i + 1);
                let target_form = block_sum(i + 2);
                let source = TorusDescriptor::new(source_form, 1u64 << i);
                let target = TorusDescriptor::new(target_form.clone(), 1u64 << (i + 1));
                let rows = 2 * (i + 2);
                let cols = 2 * (i + 1);
                let inclusion = IntMatrix::from_fn(rows, cols, |r, c| {
                    if r == c {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                });
                let map = build_connecting_map(
                    CaseData::DimChangingCorner {
                        source: source.clone(),
                        target,
                        intermediate: target_form,
                        matrix: inclusion,
                        corner_trace: SymbolicScalar::from_rational(BigRational::new(
                            BigInt::one(),
                            BigInt::from(2),
                        )),
                        beta0: None,
                        beta1: None,
                    },
                    &env_inner,
                    crate::exact::DEFAULT_MAX_REFINEMENTS,
                )?;
                Ok(Stage { descriptor: source, map })
            };
            let half = SymbolicScalar::from_rational(BigRational::new(
                BigInt::one(),
                BigInt::from(2),
            ));
            Ok(ProtoralSystem::new(Box::new(builder), env.clone(), capped)
                .with_certificate(FamilyCertificate::GeometricCorner { t: half })
                .with_summary(ClosedFormSummary {
                    family: "dimension-changing".into(),
                    k0: "even exterior algebra on a growing lattice".into(),
                    k1: "odd exterior algebra on a growing lattice".into(),
                    trace_range: "squarefree products of the block parameters".into(),
                    scale: "infinite; full projection scale".into(),
                }))
        }
        FamilyTag::Ax7 { n, theta0 } => {
            if *n < 2 {
                return Err(Error::InvalidParameter("N must be >= 2".into()));
            }
            require_interval_in_unit(theta0, env, "theta0")?;
            let n = *n;
            let limit = SymbolicScalar::one().add(
                &theta0.div(&SymbolicScalar::from_int(n as i64 - 1))?,
            );
            let theta0 = theta0.clone();
            let env_inner = env.clone();
            let shear = IntMatrix::from_rows(&[vec![1i64, 0], vec![-1, 1]]);
            let builder = move |i: usize| -> Result<Stage> {
                let theta_i = ax7_theta(&theta0, n, i);
                let theta_next = ax7_theta(&theta0, n, i + 1);
                let eta = theta_i.div(&SymbolicScalar::from_int(n as i64))?;
                let source = TorusDescriptor::unamplified(SkewForm::j(theta_i));
                let target = TorusDescriptor::unamplified(SkewForm::j(theta_next.clone()));
                let mut matrix = IntMatrix::identity(2);
                matrix[(1, 1)] = BigInt::from(n);
                let map = build_connecting_map(
                    CaseData::SameDimProper {
                        source: source.clone(),
                        target,
                        intermediate: SkewForm::j(eta),
                        matrix,
                        corner_trace: SymbolicScalar::one().sub(&theta_next),
                        beta0: Some(shear.clone()),
                        beta1: None,
                    },
                    &env_inner,
                    crate::exact::DEFAULT_MAX_REFINEMENTS,
                )?;
                Ok(Stage { descriptor: source, map })
            };
            Ok(ProtoralSystem::new(Box::new(builder), env.clone(), horizon)
                .with_certificate(FamilyCertificate::Telescoping { limit })
                .with_summary(ClosedFormSummary {
                    family: format!("noncorner(N={n})"),
                    k0: format!("Z + Z[1/{n}] via (a,b) -> (a, b/{n}^n + a*s_n)"),
                    k1: format!("Z + Z[1/{n}]"),
                    trace_range: "m + theta0*q".into(),
                    scale: format!("finite: 1 + theta0/{}", n - 1),
                }))
        }
        FamilyTag::K1Engine { theta, p_seq } => {
            if p_seq.is_empty() {
                return Err(Error::InvalidParameter(
                    "K1 engine needs at least one matrix".into(),
                ));
            }
            for (i, p) in p_seq.iter().enumerate() {
                if p.rows() != 2 || p.cols() != 2 {
                    return Err(Error::InvalidParameter(format!(
                        "K1 matrix #{i} must be 2x2"
                    )));
                }
            }
            let theta = theta.clone();
            let p_seq = p_seq.clone();
            let env_inner = env.clone();
            let builder = move |i: usize| -> Result<Stage> {
                let descriptor = TorusDescriptor::unamplified(SkewForm::j(theta.clone()));
                let p = p_seq.get(i).unwrap_or_else(|| p_seq.last().unwrap());
                let map = build_connecting_map(
                    CaseData::AbstractK {
                        source: descriptor.clone(),
                        target: descriptor.clone(),
                        k0: IntMatrix::identity(2),
                        k1: p.clone(),
                        t: SymbolicScalar::one(),
                    },
                    &env_inner,
                    crate::exact::DEFAULT_MAX_REFINEMENTS,
                )?;
                Ok(Stage { descriptor, map })
            };
            Ok(ProtoralSystem::new(Box::new(builder), env.clone(), horizon)
                .with_certificate(FamilyCertificate::Unital)
                .with_summary(ClosedFormSummary {
                    family: "K1-engine".into(),
                    k0: "Z^2, order unit (1,0), stationary".into(),
                    k1: "colimit of Z^2 along the given matrices".into(),
                    trace_range: "a + theta*b".into(),
                    scale: "unital (scale 1)".into(),
                }))
        }
        FamilyTag::InfinitesimalKilling { alpha, beta } => {
            let form = SkewForm::j(alpha.clone()).direct_sum(&SkewForm::j(beta.clone()));
            if !env.independence_asserted() {
                return Err(Error::InvalidParameter(
                    "trace-kernel killer requires the independence assertion".into(),
                ));
            }
            let env_inner = env.clone();
            let builder = move |_i: usize| -> Result<Stage> {
                let descriptor = TorusDescriptor::unamplified(form.clone());
                let map = build_connecting_map(
                    CaseData::AbstractK {
                        source: descriptor.clone(),
                        target: descriptor.clone(),
                        k0: killing_idempotent(),
                        k1: IntMatrix::zero(8, 8),
                        t: SymbolicScalar::one(),
                    },
                    &env_inner,
                    crate::exact::DEFAULT_MAX_REFINEMENTS,
                )?;
                Ok(Stage { descriptor, map })
            };
            Ok(ProtoralSystem::new(Box::new(builder), env.clone(), horizon)
                .with_certificate(FamilyCertificate::Unital)
                .with_summary(ClosedFormSummary {
                    family: "trace-kernel-killer".into(),
                    k0: "Z^4 on the classes 1, e12, e34, e1234".into(),
                    k1: "0".into(),
                    trace_range: "a + b*alpha + c*beta + d*alpha*beta".into(),
                    scale: "unital (scale 1)".into(),
                }))
        }
    }
}

/// Convenience: build with the default horizon.
pub fn build_family_default(tag: &FamilyTag, env: &GeneratorEnv) -> Result<ProtoralSystem> {
    build_family(tag, env, DEFAULT_HORIZON)
}

/// Closed-form stage data used as an oracle against the recurrence outputs.
#[derive(Debug, Clone)]
pub struct ClosedFormStage {
    pub t: SymbolicScalar,
    pub c: SymbolicScalar,
    pub unit_trace: SymbolicScalar,
    pub k0: Option<IntMatrix>,
    pub k1: Option<IntMatrix>,
}

/// Per-family closed forms at a 0-based stage index, computed directly from
/// the stated formulas rather than by running the recurrences.
pub fn family_closed_forms(tag: &FamilyTag, stage: usize) -> Result<ClosedFormStage> {
    let one = SymbolicScalar::one();
    let half = SymbolicScalar::from_rational(BigRational::new(BigInt::one(), BigInt::from(2)));
    let two_pow = |i: usize| {
        SymbolicScalar::from_rational(BigRational::from_integer(BigInt::from(2).pow(i as u32)))
    };
    match tag {
        FamilyTag::Solenoid { n, .. } => {
            let mut k0 = IntMatrix::identity(2);
            k0[(1, 1)] = BigInt::from(n * n);
            let k1 = IntMatrix::identity(2).scale(&BigInt::from(*n));
            Ok(ClosedFormStage {
                t: one.clone(),
                c: one.clone(),
                unit_trace: one,
                k0: Some(k0),
                k1: Some(k1),
            })
        }
        FamilyTag::StableCorner { form } => {
            let rank = 1usize << (form.size() - 1);
            let id = (rank <= 64).then(|| IntMatrix::identity(rank));
            Ok(ClosedFormStage {
                t: half,
                c: two_pow(stage),
                unit_trace: two_pow(stage),
                k0: id.clone(),
                k1: id,
            })
        }
        FamilyTag::DimChanging { .. } => {
            let rows = 2 * (stage + 2);
            let cols = 2 * (stage + 1);
            let make = |parity| {
                let incl = IntMatrix::from_fn(rows, cols, |r, c| {
                    if r == c {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                });
                crate::intlat::exterior_parity(&incl, parity)
            };
            let small = 1usize << (rows - 1) <= 64;
            Ok(ClosedFormStage {
                t: half,
                c: two_pow(stage),
                unit_trace: two_pow(stage),
                k0: small.then(|| make(crate::intlat::Parity::Even)),
                k1: small.then(|| make(crate::intlat::Parity::Odd)),
            })
        }
        FamilyTag::Ax7 { n, theta0 } => {
            let s_i = SymbolicScalar::from_rational(geometric_tail(*n, stage));
            let c = one.add(&theta0.mul(&s_i));
            let t = one.sub(&ax7_theta(theta0, *n, stage + 1));
            let mut k1 = IntMatrix::identity(2);
            k1[(1, 1)] = BigInt::from(*n);
            let mut k0 = IntMatrix::identity(2);
            k0[(1, 0)] = BigInt::from(-1);
            k0[(1, 1)] = BigInt::from(*n);
            Ok(ClosedFormStage {
                t,
                c: c.clone(),
                unit_trace: c,
                k0: Some(k0),
                k1: Some(k1),
            })
        }
        FamilyTag::K1Engine { p_seq, .. } => Ok(ClosedFormStage {
            t: one.clone(),
            c: one.clone(),
            unit_trace: one,
            k0: Some(IntMatrix::identity(2)),
            k1: Some(
                p_seq
                    .get(stage)
                    .unwrap_or_else(|| p_seq.last().unwrap())
                    .clone(),
            ),
        }),
        FamilyTag::InfinitesimalKilling { .. } => Ok(ClosedFormStage {
            t: one.clone(),
            c: one.clone(),
            unit_trace: one,
            k0: Some(killing_idempotent()),
            k1: Some(IntMatrix::zero(8, 8)),
        }),
    }
}

/// Why a solenoid pair fails to be isomorphic.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub enum SolenoidObstruction {
    PrimeSets { left: Vec<u64>, right: Vec<u64> },
    RatioNotUnit { ratio: String },
    TraceRange,
}

/// Outcome of the solenoid pair classification.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub enum SolenoidClassification {
    Isomorphic { unit: String },
    NotIsomorphic(SolenoidObstruction),
    UnknownAtBound,
}

pub fn prime_set(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn is_unit_over(c: &BigRational, primes: &[u64]) -> bool {
    let strip = |mut v: BigInt| -> bool {
        v = v.abs();
        for &p in primes {
            let p = BigInt::from(p);
            while (&v % &p).is_zero() {
                v /= &p;
            }
        }
        v.is_one()
    };
    !c.is_zero() && strip(c.numer().clone()) && strip(c.denom().clone())
}

/// Classifies a pair of unital toric solenoid systems.
///
/// The reported witness u satisfies theta_right = u * theta_left.  When the
/// ratio of the parameters is an exact rational, unit-ness is decided by
/// factorization; a symbolically non-constant ratio is refuted by the
/// independence assertion.  Without the assertion, a bounded unit search
/// runs and survivors yield `UnknownAtBound`.
pub fn classify_solenoid_pair(
    theta_left: &SymbolicScalar,
    n_left: u64,
    theta_right: &SymbolicScalar,
    n_right: u64,
    env: &GeneratorEnv,
    unit_exponent_bound: u32,
) -> Result<SolenoidClassification> {
    if n_left < 2 || n_right < 2 {
        return Err(Error::InvalidParameter("N must be >= 2".into()));
    }
    let left_primes = prime_set(n_left);
    let right_primes = prime_set(n_right);
    if left_primes != right_primes {
        return Ok(SolenoidClassification::NotIsomorphic(
            SolenoidObstruction::PrimeSets {
                left: left_primes,
                right: right_primes,
            },
        ));
    }
    let ratio = theta_right.div(theta_left)?;
    if let Some(c) = ratio.as_rational() {
        if is_unit_over(&c, &left_primes) {
            return Ok(SolenoidClassification::Isomorphic {
                unit: crate::exact::rational_string(&c),
            });
        }
        return Ok(SolenoidClassification::NotIsomorphic(
            SolenoidObstruction::RatioNotUnit {
                ratio: crate::exact::rational_string(&c),
            },
        ));
    }
    if env.independence_asserted() {
        // a non-constant ratio cannot be rational under independence
        return Ok(SolenoidClassification::NotIsomorphic(
            SolenoidObstruction::TraceRange,
        ));
    }
    // bounded search over units
    for unit in unit_candidates(&left_primes, unit_exponent_bound) {
        let candidate = theta_left.scale_rational(&unit);
        if &candidate == theta_right {
            return Ok(SolenoidClassification::Isomorphic {
                unit: crate::exact::rational_string(&unit),
            });
        }
    }
    Ok(SolenoidClassification::UnknownAtBound)
}

fn unit_candidates(primes: &[u64], bound: u32) -> Vec<BigRational> {
    let mut units = vec![BigRational::one()];
    for &p in primes {
        let mut next = Vec::new();
        for u in &units {
            for k in -(bound as i64)..=(bound as i64) {
                let mut v = u.clone();
                if k >= 0 {
                    v *= BigRational::from_integer(BigInt::from(p).pow(k as u32));
                } else {
                    v /= BigRational::from_integer(BigInt::from(p).pow((-k) as u32));
                }
                next.push(v);
            }
        }
        units = next;
    }
    let mut signed = Vec::with_capacity(units.len() * 2);
    for u in units {
        signed.push(u.clone());
        signed.push(-u);
    }
    signed
}

/// Why a noncorner pair fails to be isomorphic.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub enum Ax7Obstruction {
    PrimeSets { left: Vec<u64>, right: Vec<u64> },
    /// the trace/scale equation system has no rational solution under the
    /// independence assertion
    TraceEquations,
}

/// Outcome of the noncorner pair classification.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub enum Ax7Classification {
    Isomorphic {
        epsilon: i8,
        v: String,
        unit: String,
        lambda: SymbolicScalar,
    },
    NotIsomorphic(Ax7Obstruction),
    UnknownAtBound,
}

/// Search bounds for the noncorner classification witnesses.
#[derive(Debug, Clone, Copy)]
pub struct Ax7Bounds {
    /// |numerator| cap for v in Z[1/N]
    pub v_numerator: i64,
    /// denominator exponent cap for v
    pub v_denominator_exp: u32,
    /// exponent cap per prime for the unit u
    pub unit_exponent: u32,
}

impl Default for Ax7Bounds {
    fn default() -> Self {
        Ax7Bounds {
            v_numerator: 8,
            v_denominator_exp: 3,
            unit_exponent: 3,
        }
    }
}

/// Classifies a pair of same-dimensional noncorner systems by searching for
/// witnesses (epsilon, v, u, lambda) of the trace and scale identities
/// lambda = epsilon + theta0'*v, theta0'*u = lambda*theta0, and
/// L' = lambda*L with L = 1 + theta0/(N-1).
pub fn classify_ax7_pair(
    n_left: u64,
    theta_left: &SymbolicScalar,
    n_right: u64,
    theta_right: &SymbolicScalar,
    env: &GeneratorEnv,
    bounds: Ax7Bounds,
) -> Result<Ax7Classification> {
    if n_left < 2 || n_right < 2 {
        return Err(Error::InvalidParameter("N must be >= 2".into()));
    }
    let left_primes = prime_set(n_left);
    let right_primes = prime_set(n_right);
    if left_primes != right_primes {
        return Ok(Ax7Classification::NotIsomorphic(Ax7Obstruction::PrimeSets {
            left: left_primes,
            right: right_primes,
        }));
    }
    let scale_left = SymbolicScalar::one().add(
        &theta_left.div(&SymbolicScalar::from_int(n_left as i64 - 1))?,
    );
    let scale_right = SymbolicScalar::one().add(
        &theta_right.div(&SymbolicScalar::from_int(n_right as i64 - 1))?,
    );

    // bounded witness search
    let mut v_values = Vec::new();
    for num in -bounds.v_numerator..=bounds.v_numerator {
        for dexp in 0..=bounds.v_denominator_exp {
            let v = BigRational::new(
                BigInt::from(num),
                BigInt::from(n_left).pow(dexp),
            );
            if !v_values.contains(&v) {
                v_values.push(v);
            }
        }
    }
    let units = unit_candidates(&left_primes, bounds.unit_exponent);
    for epsilon in [1i8, -1] {
        for v in &v_values {
            let lambda = SymbolicScalar::from_int(epsilon as i64)
                .add(&theta_right.scale_rational(v));
            // theta0' * u = lambda * theta0
            let rhs = lambda.mul(theta_left);
            for u in &units {
                if theta_right.scale_rational(u) != rhs {
                    continue;
                }
                if scale_right != lambda.mul(&scale_left) {
                    continue;
                }
                return Ok(Ax7Classification::Isomorphic {
                    epsilon,
                    v: crate::exact::rational_string(v),
                    unit: crate::exact::rational_string(u),
                    lambda,
                });
            }
        }
    }
    // structural refutation: for parameters supported on disjoint generator
    // sets, theta0'*u - epsilon*theta0 - v*theta0*theta0' cannot vanish for
    // any rational (epsilon, v, u) with epsilon nonzero
    if env.independence_asserted() && disjoint_single_generators(theta_left, theta_right) {
        return Ok(Ax7Classification::NotIsomorphic(Ax7Obstruction::TraceEquations));
    }
    Ok(Ax7Classification::UnknownAtBound)
}

/// Verifies a witness for the trace-kernel-killer classification: G must lie
/// in GL4(Z), fix the unit column (1,0,0,0)^t, and satisfy the row identity
/// (1, alpha', beta', alpha'*beta') * G = (1, alpha, beta, alpha*beta)
/// symbolically.  Searching GL4(Z) is out of scope; the caller supplies G.
pub fn verify_killing_witness(
    g: &IntMatrix,
    left: (&SymbolicScalar, &SymbolicScalar),
    right: (&SymbolicScalar, &SymbolicScalar),
) -> Result<bool> {
    if g.rows() != 4 || g.cols() != 4 {
        return Err(Error::DimensionMismatch("witness must be 4x4".into()));
    }
    if g.det().abs() != BigInt::one() {
        return Ok(false);
    }
    let unit = vec![BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::zero()];
    if g.apply(&unit) != unit {
        return Ok(false);
    }
    let (alpha, beta) = left;
    let (alpha_p, beta_p) = right;
    let row_left = [
        SymbolicScalar::one(),
        alpha_p.clone(),
        beta_p.clone(),
        alpha_p.mul(beta_p),
    ];
    let row_right = [
        SymbolicScalar::one(),
        alpha.clone(),
        beta.clone(),
        alpha.mul(beta),
    ];
    for j in 0..4 {
        let mut acc = SymbolicScalar::zero();
        for (i, entry) in row_left.iter().enumerate() {
            acc = acc.add(
                &entry.scale_rational(&BigRational::from_integer(g[(i, j)].clone())),
            );
        }
        if acc != row_right[j] {
            return Ok(false);
        }
    }
    Ok(true)
}

fn disjoint_single_generators(a: &SymbolicScalar, b: &SymbolicScalar) -> bool {
    let vars = |s: &SymbolicScalar| {
        let mut v = s.num().support_vars();
        for w in s.den().support_vars() {
            if !v.contains(&w) {
                v.push(w);
            }
        }
        v
    };
    let va = vars(a);
    let vb = vars(b);
    !va.is_empty() && !vb.is_empty() && va.iter().all(|x| !vb.contains(x))
}
