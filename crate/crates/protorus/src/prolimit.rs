//! Inductive systems of free abelian K-groups with connecting maps:
//! direct-limit element arithmetic, the rescaled limit trace, scaling
//! constants, projection-scale membership, and invariant reports.

use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::exact::{GeneratorEnv, Sign, SignVerdict, SymbolicScalar, DEFAULT_MAX_REFINEMENTS};
use crate::homk::{ConnectingMap, MapCase};
use crate::intlat::Parity;
use crate::torus::{is_nondegenerate, trace_of_class, Nondegeneracy, TorusDescriptor};
use crate::{Error, Result};

/// Default stage horizon; all horizon-limited verdicts are tagged as such.
pub const DEFAULT_HORIZON: usize = 32;

/// One stage of a system: the torus at stage n and the map into stage n+1.
#[derive(Debug, Clone)]
pub struct Stage {
    pub descriptor: TorusDescriptor,
    pub map: ConnectingMap,
}

/// Family-level facts a builder can certify about its system; these back the
/// scale classification and projection-scale refutations.
#[derive(Debug, Clone)]
pub enum FamilyCertificate {
    /// every connecting map is unital (t identically 1)
    Unital,
    /// constant trace-scaling factor strictly below 1, so c_n diverges
    GeometricCorner { t: SymbolicScalar },
    /// the products telescope: sup_n c_n equals this finite limit, and scale
    /// membership is the strict inequality rho(x) < limit
    Telescoping { limit: SymbolicScalar },
}

/// Human-readable closed forms attached by a family recognizer.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ClosedFormSummary {
    pub family: String,
    pub k0: String,
    pub k1: String,
    pub trace_range: String,
    pub scale: String,
}

type StageBuilder = dyn Fn(usize) -> Result<Stage> + Send + Sync;

/// An inductive system of matrix-amplified tori with lazily materialized,
/// memoized stages.  Stage generation is internally synchronized; queries
/// are safe to run concurrently.
pub struct ProtoralSystem {
    builder: Box<StageBuilder>,
    cache: RwLock<Vec<Arc<Stage>>>,
    horizon: usize,
    env: GeneratorEnv,
    certificate: Option<FamilyCertificate>,
    summary: Option<ClosedFormSummary>,
    max_refinements: usize,
}

impl std::fmt::Debug for ProtoralSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ProtoralSystem")
            .field("horizon", &self.horizon)
            .field("cached_stages", &self.cache.read().unwrap().len())
            .finish()
    }
}

impl ProtoralSystem {
    pub fn new(
        builder: Box<StageBuilder>,
        env: GeneratorEnv,
        horizon: usize,
    ) -> ProtoralSystem {
        ProtoralSystem {
            builder,
            cache: RwLock::new(Vec::new()),
            horizon,
            env,
            certificate: None,
            summary: None,
            max_refinements: DEFAULT_MAX_REFINEMENTS,
        }
    }

    /// Finite explicit system from a stage list; the horizon is capped by
    /// the number of provided connecting maps.
    pub fn from_stages(stages: Vec<Stage>, env: GeneratorEnv) -> ProtoralSystem {
        let horizon = stages.len().saturating_sub(1);
        let stages: Vec<Arc<Stage>> = stages.into_iter().map(Arc::new).collect();
        ProtoralSystem {
            builder: Box::new(move |_| Err(Error::HorizonExceeded { stage: 0, horizon: 0 })),
            cache: RwLock::new(stages),
            horizon,
            env,
            certificate: None,
            summary: None,
            max_refinements: DEFAULT_MAX_REFINEMENTS,
        }
    }

    pub fn with_certificate(mut self, certificate: FamilyCertificate) -> Self {
        self.certificate = Some(certificate);
        self
    }

    pub fn with_summary(mut self, summary: ClosedFormSummary) -> Self {
        self.summary = Some(summary);
        self
    }

    pub fn with_max_refinements(mut self, budget: usize) -> Self {
        self.max_refinements = budget;
        self
    }

    pub fn env(&self) -> &GeneratorEnv {
        &self.env
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn certificate(&self) -> Option<&FamilyCertificate> {
        self.certificate.as_ref()
    }

    pub fn summary(&self) -> Option<&ClosedFormSummary> {
        self.summary.as_ref()
    }

    pub fn max_refinements(&self) -> usize {
        self.max_refinements
    }

    /// The stage at index n (0-based), materializing and validating through
    /// the cache.
    pub fn stage(&self, n: usize) -> Result<Arc<Stage>> {
        if n > self.horizon {
            return Err(Error::HorizonExceeded {
                stage: n,
                horizon: self.horizon,
            });
        }
        {
            let cache = self.cache.read().unwrap();
            if let Some(s) = cache.get(n) {
                return Ok(s.clone());
            }
        }
        let mut cache = self.cache.write().unwrap();
        while cache.len() <= n {
            let idx = cache.len();
            let stage = (self.builder)(idx)?;
            self.validate_stage(idx, &stage, cache.last().map(|s| s.as_ref()))?;
            cache.push(Arc::new(stage));
        }
        Ok(cache[n].clone())
    }

    fn validate_stage(&self, idx: usize, stage: &Stage, prev: Option<&Stage>) -> Result<()> {
        // nondegeneracy of the stage form
        match is_nondegenerate(&stage.descriptor.form, &self.env, 8)? {
            Nondegeneracy::Nondegenerate => {}
            Nondegeneracy::DegenerateWitness(w) => {
                return Err(Error::DegenerateForm(format!(
                    "stage {idx} form has integral direction {w:?}"
                )))
            }
            Nondegeneracy::UndecidedAtBound => {
                return Err(Error::DegenerateForm(format!(
                    "stage {idx} nondegeneracy undecided"
                )))
            }
        }
        // adjacency of descriptors
        if stage.map.source != stage.descriptor {
            return Err(Error::DimensionMismatch(format!(
                "stage {idx}: connecting map source does not match the stage descriptor"
            )));
        }
        if let Some(p) = prev {
            if p.map.target != stage.descriptor {
                return Err(Error::DimensionMismatch(format!(
                    "stage {idx}: previous connecting map target does not match"
                )));
            }
        }
        // trace-scaling identity on basis vectors, at desk scale only
        if stage.descriptor.even_rank() <= 64 && stage.map.k0.rows() <= 64 {
            let k0 = stage.map.k0.get();
            for i in 0..stage.descriptor.even_rank() {
                let mut e = vec![BigInt::zero(); stage.descriptor.even_rank()];
                e[i] = BigInt::from(1);
                let pushed = trace_of_class(&stage.map.target, &k0.apply(&e))?;
                let want = stage.map.t.mul(&trace_of_class(&stage.descriptor, &e)?);
                if pushed != want {
                    return Err(Error::DimensionMismatch(format!(
                        "stage {idx}: trace scaling fails on basis vector {i}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A class in the direct limit: stage-tagged integer coordinates over that
/// stage's subset basis of the given parity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitElement {
    pub stage: usize,
    pub parity: Parity,
    pub coords: Vec<BigInt>,
}

impl LimitElement {
    pub fn even(stage: usize, coords: Vec<i64>) -> LimitElement {
        LimitElement {
            stage,
            parity: Parity::Even,
            coords: coords.into_iter().map(BigInt::from).collect(),
        }
    }

    pub fn odd(stage: usize, coords: Vec<i64>) -> LimitElement {
        LimitElement {
            stage,
            parity: Parity::Odd,
            coords: coords.into_iter().map(BigInt::from).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

/// The unit class [e_n] at the given stage.
pub fn unit_element(sys: &ProtoralSystem, stage: usize) -> Result<LimitElement> {
    let s = sys.stage(stage)?;
    Ok(LimitElement {
        stage,
        parity: Parity::Even,
        coords: s.descriptor.unit_class(),
    })
}

/// Applies the composite parity-matched K-maps from x.stage up to stage m.
pub fn push_to_stage(x: &LimitElement, m: usize, sys: &ProtoralSystem) -> Result<LimitElement> {
    if m < x.stage {
        return Err(Error::InvalidParameter(
            "cannot push to an earlier stage".into(),
        ));
    }
    let mut coords = x.coords.clone();
    for n in x.stage..m {
        let stage = sys.stage(n)?;
        let k = match x.parity {
            Parity::Even => stage.map.k0.get(),
            Parity::Odd => stage.map.k1.get(),
        };
        if k.cols() != coords.len() {
            return Err(Error::DimensionMismatch(format!(
                "stage {n}: map expects {} coordinates, class has {}",
                k.cols(),
                coords.len()
            )));
        }
        coords = k.apply(&coords);
    }
    Ok(LimitElement {
        stage: m,
        parity: x.parity,
        coords,
    })
}

/// Three-valued verdicts for direct-limit comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum EqVerdict {
    True,
    False,
    UnknownAtHorizon,
}

/// Direct-limit equality: pushes to a common stage and, on disagreement,
/// follows the images to the horizon.  Disagreement under injective maps is
/// final; if a non-injective map was crossed the verdict stays open.
pub fn elem_eq(x: &LimitElement, y: &LimitElement, sys: &ProtoralSystem) -> Result<EqVerdict> {
    if x.parity != y.parity {
        return Err(Error::DimensionMismatch(
            "cannot compare classes of different parity".into(),
        ));
    }
    let start = x.stage.max(y.stage);
    let mut xv = push_to_stage(x, start, sys)?;
    let mut yv = push_to_stage(y, start, sys)?;
    if xv.coords == yv.coords {
        return Ok(EqVerdict::True);
    }
    let mut crossed_noninjective = false;
    for n in start..sys.horizon() {
        let stage = sys.stage(n)?;
        let k = match x.parity {
            Parity::Even => stage.map.k0.get(),
            Parity::Odd => stage.map.k1.get(),
        };
        let (rank, _) = crate::intlat::integer_kernel_rank(k);
        if rank < k.cols() {
            crossed_noninjective = true;
        }
        xv = push_to_stage(&xv, n + 1, sys)?;
        yv = push_to_stage(&yv, n + 1, sys)?;
        if xv.coords == yv.coords {
            return Ok(EqVerdict::True);
        }
        if !crossed_noninjective {
            // distinctness persists under injective maps
            return Ok(EqVerdict::False);
        }
    }
    if crossed_noninjective {
        Ok(EqVerdict::UnknownAtHorizon)
    } else {
        Ok(EqVerdict::False)
    }
}

/// Exact trace-scaling constants: t[n] for the map n -> n+1 (0-based) and
/// the rescaling sequence c with c[0] = 1, c[n+1] = c[n] / t[n].
pub fn scaling_constants(
    sys: &ProtoralSystem,
    horizon: usize,
) -> Result<(Vec<SymbolicScalar>, Vec<SymbolicScalar>)> {
    let mut t = Vec::with_capacity(horizon);
    let mut c = vec![SymbolicScalar::one()];
    for n in 0..horizon {
        let stage = sys.stage(n)?;
        t.push(stage.map.t.clone());
        let next = c[n].div(&stage.map.t)?;
        c.push(next);
    }
    Ok((t, c))
}

/// The rescaled limit trace c_n * tau_n on an even class at stage n.
pub fn limit_trace(x: &LimitElement, sys: &ProtoralSystem) -> Result<SymbolicScalar> {
    if x.parity != Parity::Even {
        return Err(Error::InvalidParameter(
            "the limit trace pairs with even classes only".into(),
        ));
    }
    let (_, c) = scaling_constants(sys, x.stage)?;
    let stage = sys.stage(x.stage)?;
    Ok(c[x.stage].mul(&trace_of_class(&stage.descriptor, &x.coords)?))
}

/// Verdict of the trace-determined order comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum OrderVerdict {
    True,
    False,
    Undecided,
}

/// x <= y in the trace-determined order: equality, or rho(y - x) > 0.
pub fn order_leq(
    x: &LimitElement,
    y: &LimitElement,
    sys: &ProtoralSystem,
) -> Result<OrderVerdict> {
    if x.parity != Parity::Even || y.parity != Parity::Even {
        return Err(Error::InvalidParameter("order compares even classes only".into()));
    }
    let diff = limit_trace(y, sys)?.sub(&limit_trace(x, sys)?);
    match diff.sign(sys.env(), sys.max_refinements())? {
        SignVerdict::Known(Sign::Positive) => Ok(OrderVerdict::True),
        SignVerdict::Known(Sign::Negative) => Ok(OrderVerdict::False),
        SignVerdict::Known(Sign::Zero) => match elem_eq(x, y, sys)? {
            EqVerdict::True => Ok(OrderVerdict::True),
            EqVerdict::False => Ok(OrderVerdict::False),
            EqVerdict::UnknownAtHorizon => Ok(OrderVerdict::Undecided),
        },
        SignVerdict::Undecided => Ok(OrderVerdict::Undecided),
    }
}

/// Verdict of projection-scale membership for a positive class.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub enum ScaleMembership {
    Member { stage: usize },
    NotMemberCertified,
    UnknownAtHorizon,
}

/// Decides membership of x in the union of order intervals [0, [e_n]].
///
/// A family certificate can refute membership: for a finite telescoping
/// scale the criterion is the strict inequality rho(x) < limit, and for a
/// unital system the single interval [0, [1]] decides.
pub fn projection_scale_member(
    x: &LimitElement,
    sys: &ProtoralSystem,
    horizon: usize,
) -> Result<ScaleMembership> {
    let zero = LimitElement {
        stage: x.stage,
        parity: Parity::Even,
        coords: vec![BigInt::zero(); x.coords.len()],
    };
    match order_leq(&zero, x, sys)? {
        OrderVerdict::True => {}
        OrderVerdict::False => {
            return Err(Error::InvalidParameter(
                "projection-scale membership requires a positive class".into(),
            ))
        }
        OrderVerdict::Undecided => return Err(Error::UndecidedSign),
    }
    for m in x.stage..=horizon.min(sys.horizon()) {
        let unit = unit_element(sys, m)?;
        if order_leq(x, &unit, sys)? == OrderVerdict::True {
            return Ok(ScaleMembership::Member { stage: m });
        }
    }
    match sys.certificate() {
        Some(FamilyCertificate::Telescoping { limit }) => {
            let slack = limit.sub(&limit_trace(x, sys)?);
            match slack.sign(sys.env(), sys.max_refinements())? {
                // the scale is the strict sublevel set of the limit
                SignVerdict::Known(Sign::Negative) | SignVerdict::Known(Sign::Zero) => {
                    Ok(ScaleMembership::NotMemberCertified)
                }
                SignVerdict::Known(Sign::Positive) => Ok(ScaleMembership::UnknownAtHorizon),
                SignVerdict::Undecided => Ok(ScaleMembership::UnknownAtHorizon),
            }
        }
        Some(FamilyCertificate::Unital) => {
            // all stage units coincide; x lay above it at every tested stage
            Ok(ScaleMembership::NotMemberCertified)
        }
        _ => Ok(ScaleMembership::UnknownAtHorizon),
    }
}

/// Scale classification of the system.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub enum ScaleVerdict {
    Unital,
    Finite { limit: SymbolicScalar },
    Infinite,
    UnknownAtHorizon { partial_sup: SymbolicScalar },
}

pub fn scale_classification(sys: &ProtoralSystem, horizon: usize) -> Result<ScaleVerdict> {
    let horizon = horizon.min(sys.horizon());
    let (t, c) = scaling_constants(sys, horizon)?;
    match sys.certificate() {
        Some(FamilyCertificate::Unital) => {
            // sanity: the certificate must agree with the data at the horizon
            for (n, tn) in t.iter().enumerate() {
                if !tn.is_one() {
                    return Err(Error::InvalidParameter(format!(
                        "unital certificate contradicted at stage {n}"
                    )));
                }
            }
            Ok(ScaleVerdict::Unital)
        }
        Some(FamilyCertificate::GeometricCorner { t: t0 }) => {
            for (n, tn) in t.iter().enumerate() {
                if tn != t0 {
                    return Err(Error::InvalidParameter(format!(
                        "geometric certificate contradicted at stage {n}"
                    )));
                }
            }
            match SymbolicScalar::one()
                .sub(t0)
                .sign(sys.env(), sys.max_refinements())?
            {
                SignVerdict::Known(Sign::Positive) => Ok(ScaleVerdict::Infinite),
                _ => Err(Error::InvalidParameter(
                    "geometric certificate requires t strictly below 1".into(),
                )),
            }
        }
        Some(FamilyCertificate::Telescoping { limit }) => Ok(ScaleVerdict::Finite {
            limit: limit.clone(),
        }),
        None => Ok(ScaleVerdict::UnknownAtHorizon {
            partial_sup: c.last().cloned().unwrap_or_else(SymbolicScalar::one),
        }),
    }
}

/// Verdict of the p-divisibility probe.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub enum Divisibility {
    DivisibleToDepth,
    ObstructedAt { step: usize },
}

/// Repeatedly divides x by p in the limit group, searching each division
/// step for a stage where all pushed coordinates are divisible.
pub fn divisibility_probe(
    x: &LimitElement,
    p: u64,
    depth: usize,
    sys: &ProtoralSystem,
) -> Result<Divisibility> {
    let p_big = BigInt::from(p);
    let mut current = x.clone();
    for step in 1..=depth {
        let mut divided = None;
        for m in current.stage..=sys.horizon() {
            let pushed = push_to_stage(&current, m, sys)?;
            if pushed.coords.iter().all(|c| (c % &p_big).is_zero()) {
                divided = Some(LimitElement {
                    stage: m,
                    parity: pushed.parity,
                    coords: pushed.coords.iter().map(|c| c / &p_big).collect(),
                });
                break;
            }
        }
        match divided {
            Some(next) => current = next,
            None => return Ok(Divisibility::ObstructedAt { step }),
        }
    }
    Ok(Divisibility::DivisibleToDepth)
}

/// Per-stage slice of the invariant report.
#[derive(Debug, Clone, serde::Serialize)]
pub struct StageReport {
    pub index: usize,
    pub torus_dim: usize,
    pub amplification: String,
    pub even_rank: usize,
    pub odd_rank: usize,
    pub t: SymbolicScalar,
    pub c: SymbolicScalar,
    pub unit_trace: SymbolicScalar,
    pub case: MapCase,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k0: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k1: Option<Vec<Vec<String>>>,
}

/// The assembled Elliott-invariant data of a system up to a horizon.
#[derive(Debug, Clone, serde::Serialize)]
pub struct InvariantReport {
    pub horizon: usize,
    pub stages: Vec<StageReport>,
    pub scale: ScaleVerdict,
    /// limit traces of the even basis classes, per stage (small stages only)
    pub trace_range_generators: Vec<Vec<SymbolicScalar>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<ClosedFormSummary>,
}

fn matrix_grid(m: &crate::intlat::IntMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m[(i, j)].to_string()).collect())
        .collect()
}

/// Assembles ranks, maps, scaling constants, unit traces, the scale verdict,
/// and the trace-range generators up to the horizon.
pub fn elliott_report(sys: &ProtoralSystem, horizon: usize) -> Result<InvariantReport> {
    let horizon = horizon.min(sys.horizon());
    let (t, c) = scaling_constants(sys, horizon)?;
    let mut stages = Vec::new();
    let mut trace_range = Vec::new();
    for n in 0..=horizon {
        let stage = sys.stage(n)?;
        let unit = unit_element(sys, n)?;
        let unit_trace = limit_trace(&unit, sys)?;
        let include_matrices = stage.descriptor.even_rank() <= 64 && n < horizon;
        let (k0, k1) = if include_matrices {
            (
                Some(matrix_grid(stage.map.k0.get())),
                Some(matrix_grid(stage.map.k1.get())),
            )
        } else {
            (None, None)
        };
        let t_n = if n < horizon {
            t[n].clone()
        } else {
            stage.map.t.clone()
        };
        stages.push(StageReport {
            index: n,
            torus_dim: stage.descriptor.form.size(),
            amplification: stage.descriptor.amplification.to_string(),
            even_rank: stage.descriptor.even_rank(),
            odd_rank: stage.descriptor.odd_rank(),
            t: t_n,
            c: c[n].clone(),
            unit_trace,
            case: stage.map.case,
            k0,
            k1,
        });
        if stage.descriptor.even_rank() <= 32 {
            let mut gens = Vec::new();
            for i in 0..stage.descriptor.even_rank() {
                let mut e = vec![BigInt::zero(); stage.descriptor.even_rank()];
                e[i] = BigInt::from(1);
                let el = LimitElement {
                    stage: n,
                    parity: Parity::Even,
                    coords: e,
                };
                gens.push(limit_trace(&el, sys)?);
            }
            trace_range.push(gens);
        }
    }
    let scale = scale_classification(sys, horizon)?;
    Ok(InvariantReport {
        horizon,
        stages,
        scale,
        trace_range_generators: trace_range,
        family: sys.summary().cloned(),
    })
}
