//! Command implementations: each one consumes the normalized config and
//! produces a JSON result plus the exit outcome.

use serde_json::{json, Value};

use protorus::families::{
    build_family, classify_ax7_pair, classify_solenoid_pair, Ax7Bounds, Ax7Classification,
    SolenoidClassification,
};
use protorus::homk::{
    check_congruence, check_nonunital_existence, check_unital_existence, Congruence,
    MonomialMap, NonunitalExistence, UnitalExistence,
};
use protorus::intlat::IntMatrix;
use protorus::prolimit::{elliott_report, ProtoralSystem, ScaleVerdict};
use protorus::spectral::{
    cutdown_count, finite_multiplicity_check, make_multiplier, monomial_commutator_norm,
    resolvent_diagnostic, spectrum_enumerate, CutdownCount, Label, MultiplicityCheck,
    ResolventDiagnostic, SolenoidLabel,
};
use protorus::torus::TorusDescriptor;
use protorus::Error as ProtorusError;

use crate::config::{build_explicit_system, PairSpec, RunConfig, ShiftSpec};

/// Exit disposition: fully answered, or honestly partial (exit 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Done,
    Partial,
}

#[derive(Debug)]
pub enum CommandError {
    Hard(String),
    Undecided(String),
}

impl From<ProtorusError> for CommandError {
    fn from(e: ProtorusError) -> Self {
        match e {
            ProtorusError::UndecidedSign => CommandError::Undecided(e.to_string()),
            other => CommandError::Hard(other.to_string()),
        }
    }
}

pub fn dispatch(name: &str, cfg: &RunConfig) -> Result<(Value, Outcome), CommandError> {
    match name {
        "check-hom" => check_hom(cfg),
        "invariant" => invariant(cfg),
        "classify" => classify(cfg),
        "spectrum" => spectrum(cfg),
        "commutator" => commutator(cfg),
        "cutdown" => cutdown(cfg),
        "report" => report(cfg),
        other => Err(CommandError::Hard(format!("unknown command {other}"))),
    }
}

fn matrix_value(m: &IntMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| {
                Value::Array(
                    (0..m.cols())
                        .map(|j| Value::String(m[(i, j)].to_string()))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn check_hom(cfg: &RunConfig) -> Result<(Value, Outcome), CommandError> {
    let hom = cfg
        .hom
        .as_ref()
        .ok_or_else(|| CommandError::Hard("config needs a `hom` section".into()))?;
    let congruence = check_congruence(&hom.source, &hom.target, &hom.matrix)?;
    let mut result = json!({});
    match congruence {
        Congruence::Fails { row, col, difference } => {
            result["congruence"] = json!({
                "holds": false,
                "witness_entry": [row + 1, col + 1],
                "difference": serde_json::to_value(&difference).unwrap(),
            });
            return Ok((result, Outcome::Done));
        }
        Congruence::Holds { residue } => {
            result["congruence"] = json!({
                "holds": true,
                "residue": matrix_value(&residue),
            });
        }
    }
    let map = MonomialMap::new(
        TorusDescriptor::unamplified(hom.source.clone()),
        TorusDescriptor::unamplified(hom.target.clone()),
        hom.matrix.clone(),
        vec![],
    )?;
    let (k0, k1) = protorus::homk::induced_k_maps(&map);
    result["k0"] = matrix_value(&k0);
    result["k1"] = matrix_value(&k1);
    let unital = check_unital_existence(&k0, &hom.source, &hom.target)?;
    result["unital_existence"] = match unital {
        UnitalExistence::Exists => json!({"verdict": "exists"}),
        UnitalExistence::FailUnit { image_of_unit } => json!({
            "verdict": "fail-unit",
            "image_of_unit": image_of_unit.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        }),
        UnitalExistence::FailTrace { subset, difference } => json!({
            "verdict": "fail-trace",
            "subset": subset.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "difference": serde_json::to_value(&difference).unwrap(),
        }),
    };
    if let Some(k) = hom.amplification {
        let nonunital = check_nonunital_existence(
            &k0,
            &k1,
            &hom.source,
            &hom.target,
            k,
            &cfg.env,
            cfg.max_refinements,
        )?;
        result["nonunital_existence"] = match nonunital {
            NonunitalExistence::ZeroMap => json!({"verdict": "zero-map"}),
            NonunitalExistence::Exists { eta, t } => json!({
                "verdict": "exists",
                "eta": eta.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                "t": serde_json::to_value(&t).unwrap(),
            }),
            NonunitalExistence::FailOrder(reason) => json!({
                "verdict": "fail-order",
                "reason": format!("{reason:?}"),
            }),
            NonunitalExistence::FailTrace { subset, difference } => json!({
                "verdict": "fail-trace",
                "subset": subset.iter().map(|i| i + 1).collect::<Vec<_>>(),
                "difference": serde_json::to_value(&difference).unwrap(),
            }),
        };
    }
    Ok((result, Outcome::Done))
}

fn load_system(cfg: &RunConfig) -> Result<ProtoralSystem, CommandError> {
    if let Some(tag) = &cfg.family {
        let horizon = cfg.horizon.unwrap_or(protorus::prolimit::DEFAULT_HORIZON);
        let sys = build_family(tag, &cfg.env, horizon)?;
        return Ok(sys.with_max_refinements(cfg.max_refinements));
    }
    if let Some(spec) = &cfg.system {
        return build_explicit_system(spec, &cfg.env, cfg.max_refinements)
            .map_err(CommandError::from);
    }
    Err(CommandError::Hard(
        "config needs a `family` or `system` section".into(),
    ))
}

fn invariant(cfg: &RunConfig) -> Result<(Value, Outcome), CommandError> {
    let sys = load_system(cfg)?;
    let horizon = cfg.horizon.unwrap_or(8).min(sys.horizon());
    let report = elliott_report(&sys, horizon)?;
    let partial = matches!(report.scale, ScaleVerdict::UnknownAtHorizon { .. });
    let value = serde_json::to_value(&report)
        .map_err(|e| CommandError::Hard(format!("serialize: {e}")))?;
    Ok((
        value,
        if partial { Outcome::Partial } else { Outcome::Done },
    ))
}

fn classify(cfg: &RunConfig) -> Result<(Value, Outcome), CommandError> {
    let pair = cfg
        .pair
        .as_ref()
        .ok_or_else(|| CommandError::Hard("config needs a `pair` section".into()))?;
    match pair {
        PairSpec::Solenoid { left, right, bound } => {
            let res = classify_solenoid_pair(&left.0, left.1, &right.0, right.1, &cfg.env, *bound)?;
            let partial = matches!(res, SolenoidClassification::UnknownAtBound);
            let value = serde_json::to_value(&res)
                .map_err(|e| CommandError::Hard(format!("serialize: {e}")))?;
            Ok((
                json!({"classification": value}),
                if partial { Outcome::Partial } else { Outcome::Done },
            ))
        }
        PairSpec::Noncorner { left, right } => {
            let res = classify_ax7_pair(
                left.0,
                &left.1,
                right.0,
                &right.1,
                &cfg.env,
                Ax7Bounds::default(),
            )?;
            let partial = matches!(res, Ax7Classification::UnknownAtBound);
            let value = serde_json::to_value(&res)
                .map_err(|e| CommandError::Hard(format!("serialize: {e}")))?;
            Ok((
                json!({"classification": value}),
                if partial { Outcome::Partial } else { Outcome::Done },
            ))
        }
    }
}

fn spectrum(cfg: &RunConfig) -> Result<(Value, Outcome), CommandError> {
    let spec = cfg
        .multiplier
        .as_ref()
        .ok_or_else(|| CommandError::Hard("config needs a `multiplier` section".into()))?;
    let f = make_multiplier(spec)?;
    let radius = cfg.radius.unwrap_or(2.0 * std::f64::consts::PI);
    let depth = cfg.depth.unwrap_or(8);
    let diag = resolvent_diagnostic(&f, &[radius], depth)?;
    let mut result = json!({});
    match diag {
        ResolventDiagnostic::NonCompactWitness { witness } => {
            result["verdict"] = json!("non-compact-witness");
            result["witness"] = Value::Array(
                witness
                    .iter()
                    .map(|(l, v)| json!({"label": l.to_string(), "eigenvalue": v}))
                    .collect(),
            );
        }
        ResolventDiagnostic::CompactEvidence { counts } => {
            result["verdict"] = json!("compact-evidence");
            result["counts"] = Value::Array(
                counts
                    .iter()
                    .map(|(r, c)| json!({"radius": r, "count": c}))
                    .collect(),
            );
            let spectrum = spectrum_enumerate(&f, radius)?;
            result["spectrum"] = Value::Array(
                spectrum
                    .iter()
                    .map(|(l, v)| json!({"label": l.to_string(), "eigenvalue": v}))
                    .collect(),
            );
            if let MultiplicityCheck::CertifiedFinite { count } =
                finite_multiplicity_check(&f, radius)?
            {
                result["multiplicity"] = json!(count);
            }
        }
    }
    Ok((result, Outcome::Done))
}

fn resolve_shift(cfg: &RunConfig) -> Result<Label, CommandError> {
    match &cfg.shift {
        Some(ShiftSpec::Lattice(v)) => Ok(Label::Lattice(v.clone())),
        Some(ShiftSpec::Solenoid { num, depth }) => {
            // normalization needs N; take it from the multiplier when present
            let n = match &cfg.multiplier {
                Some(protorus::spectral::MultiplierSpec::LengthSolenoid { n })
                | Some(protorus::spectral::MultiplierSpec::FlatSolenoid { n }) => *n,
                _ => 2,
            };
            Ok(Label::Solenoid(SolenoidLabel::new(*num, *depth, n)))
        }
        None => Err(CommandError::Hard("config needs a `shift` entry".into())),
    }
}

fn commutator(cfg: &RunConfig) -> Result<(Value, Outcome), CommandError> {
    let spec = cfg
        .multiplier
        .as_ref()
        .ok_or_else(|| CommandError::Hard("config needs a `multiplier` section".into()))?;
    let f = make_multiplier(spec)?;
    let shift = resolve_shift(cfg)?;
    let radius = cfg.radius.unwrap_or(4.0);
    let increment = f.increment(&shift)?;
    let norm = monomial_commutator_norm(&f, &shift, radius)?;
    Ok((
        json!({
            "shift": shift.to_string(),
            "increment_bound": increment.value(),
            "commutator_upper": norm.upper,
            "commutator_lower_sampled": norm.lower,
            "exact": norm.exact,
        }),
        Outcome::Done,
    ))
}

fn cutdown(cfg: &RunConfig) -> Result<(Value, Outcome), CommandError> {
    let spec = cfg
        .multiplier
        .as_ref()
        .ok_or_else(|| CommandError::Hard("config needs a `multiplier` section".into()))?;
    let f = make_multiplier(spec)?;
    let radius = cfg.radius.unwrap_or(2.0);
    let no_cut = cfg
        .raw
        .get("no_cut")
        .and_then(|v| v.as_bool())
        .unwrap_or(false);
    let cut = if no_cut { None } else { cfg.cut };
    if cut.is_none() && !no_cut {
        return Err(CommandError::Hard(
            "config needs a `cut` value (or pass --no-cut)".into(),
        ));
    }
    let res = cutdown_count(&f, cut, radius)?;
    let value = match res {
        CutdownCount::Finite { count } => json!({"verdict": "finite", "count": count}),
        CutdownCount::Unbounded { witness } => {
            json!({"verdict": "unbounded", "witness": witness})
        }
    };
    Ok((value, Outcome::Done))
}

fn report(cfg: &RunConfig) -> Result<(Value, Outcome), CommandError> {
    let mut combined = json!({});
    let mut outcome = Outcome::Done;
    if cfg.family.is_some() || cfg.system.is_some() {
        let (inv, o) = invariant(cfg)?;
        combined["invariant"] = inv;
        if o == Outcome::Partial {
            outcome = Outcome::Partial;
        }
    }
    if cfg.multiplier.is_some() {
        let (spec, _) = spectrum(cfg)?;
        combined["spectrum"] = spec;
    }
    if combined.as_object().map(|o| o.is_empty()).unwrap_or(true) {
        return Err(CommandError::Hard(
            "report needs a `family`, `system`, or `multiplier` section".into(),
        ));
    }
    Ok((combined, outcome))
}
