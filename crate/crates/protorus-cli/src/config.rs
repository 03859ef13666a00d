//! Config loading and validation: JSON in, normalized run data out, with
//! path-anchored diagnostics collected rather than bailed on.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::Value;

use protorus::exact::{parse_rational, parse_scalar_expr, GeneratorEnv, SymbolicScalar};
use protorus::families::FamilyTag;
use protorus::homk::{build_connecting_map, CaseData};
use protorus::intlat::IntMatrix;
use protorus::prolimit::{ProtoralSystem, Stage};
use protorus::spectral::MultiplierSpec;
use protorus::torus::{SkewForm, TorusDescriptor};

/// Normalized configuration shared by the commands.
pub struct RunConfig {
    pub env: GeneratorEnv,
    pub raw: Value,
    pub family: Option<FamilyTag>,
    pub system: Option<SystemSpec>,
    pub hom: Option<HomSpec>,
    pub multiplier: Option<MultiplierSpec>,
    pub shift: Option<ShiftSpec>,
    pub pair: Option<PairSpec>,
    pub cut: Option<u64>,
    pub horizon: Option<usize>,
    pub radius: Option<f64>,
    pub depth: Option<usize>,
    pub max_refinements: usize,
}

pub struct SystemSpec {
    pub descriptors: Vec<TorusDescriptor>,
    pub maps: Vec<Value>,
}

pub struct HomSpec {
    pub source: SkewForm,
    pub target: SkewForm,
    pub matrix: IntMatrix,
    pub amplification: Option<u64>,
}

pub enum ShiftSpec {
    Lattice(Vec<i64>),
    Solenoid { num: [i64; 2], depth: u32 },
}

pub enum PairSpec {
    Solenoid {
        left: (SymbolicScalar, u64),
        right: (SymbolicScalar, u64),
        bound: u32,
    },
    Noncorner {
        left: (u64, SymbolicScalar),
        right: (u64, SymbolicScalar),
    },
}

pub struct Diagnostics {
    pub errors: Vec<String>,
}

impl Diagnostics {
    fn new() -> Self {
        Diagnostics { errors: Vec::new() }
    }

    fn push(&mut self, path: &str, msg: impl std::fmt::Display) {
        self.errors.push(format!("{path}: {msg}"));
    }
}

/// Parses and validates a config document; all schema problems are
/// collected into the error list.
pub fn validate_config(text: &str) -> Result<RunConfig, Vec<String>> {
    let raw: Value = match serde_json::from_str(text) {
        Ok(v) => v,
        Err(e) => {
            return Err(vec![format!(
                "config (line {}, column {}): {}",
                e.line(),
                e.column(),
                e
            )])
        }
    };
    let mut diags = Diagnostics::new();
    let mut env = GeneratorEnv::new();

    if let Some(generators) = raw.get("generators") {
        match generators.as_object() {
            Some(map) => {
                for (name, spec) in map {
                    let path = format!("generators.{name}");
                    match parse_anchor(spec) {
                        Ok(Some((mid, rad))) => {
                            if let Err(e) = env.declare(name, mid, rad) {
                                diags.push(&path, e);
                            }
                        }
                        Ok(None) => {
                            if let Err(e) = env.declare_formal(name) {
                                diags.push(&path, e);
                            }
                        }
                        Err(e) => diags.push(&path, e),
                    }
                }
            }
            None => diags.push("generators", "must be an object"),
        }
    }
    if let Some(flag) = raw.get("independence_assertion") {
        match flag.as_bool() {
            Some(b) => env.set_independence_assertion(b),
            None => diags.push("independence_assertion", "must be a boolean"),
        }
    }

    let family = match raw.get("family") {
        Some(v) => match parse_family(v, &env) {
            Ok(f) => Some(f),
            Err(msgs) => {
                for m in msgs {
                    diags.push("family", m);
                }
                None
            }
        },
        None => None,
    };

    let system = match raw.get("system") {
        Some(v) => match parse_system(v, &env) {
            Ok(s) => Some(s),
            Err(msgs) => {
                for m in msgs {
                    diags.push("system", m);
                }
                None
            }
        },
        None => None,
    };

    let hom = match raw.get("hom") {
        Some(v) => match parse_hom(v, &env) {
            Ok(h) => Some(h),
            Err(msgs) => {
                for m in msgs {
                    diags.push("hom", m);
                }
                None
            }
        },
        None => None,
    };

    let multiplier = match raw.get("multiplier") {
        Some(v) => match parse_multiplier(v) {
            Ok(m) => Some(m),
            Err(msgs) => {
                for m in msgs {
                    diags.push("multiplier", m);
                }
                None
            }
        },
        None => None,
    };

    let shift = match raw.get("shift") {
        Some(v) => match parse_shift(v) {
            Ok(s) => Some(s),
            Err(e) => {
                diags.push("shift", e);
                None
            }
        },
        None => None,
    };

    let pair = match raw.get("pair") {
        Some(v) => match parse_pair(v, &env) {
            Ok(p) => Some(p),
            Err(msgs) => {
                for m in msgs {
                    diags.push("pair", m);
                }
                None
            }
        },
        None => None,
    };

    let horizon = match raw.get("horizon") {
        Some(v) => match v.as_u64() {
            Some(h) => Some(h as usize),
            None => {
                diags.push("horizon", "must be a nonnegative integer");
                None
            }
        },
        None => None,
    };
    let radius = match raw.get("radius") {
        Some(v) => match parse_radius(v) {
            Ok(r) => Some(r),
            Err(e) => {
                diags.push("radius", e);
                None
            }
        },
        None => None,
    };
    let depth = raw.get("depth").and_then(|v| v.as_u64()).map(|d| d as usize);
    let cut = raw.get("cut").and_then(|v| v.as_u64());

    if !diags.errors.is_empty() {
        return Err(diags.errors);
    }
    Ok(RunConfig {
        env,
        raw,
        family,
        system,
        hom,
        multiplier,
        shift,
        pair,
        cut,
        horizon,
        radius,
        depth,
        max_refinements: protorus::exact::DEFAULT_MAX_REFINEMENTS,
    })
}

fn parse_radius(v: &Value) -> Result<f64, String> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        _ => return Err("must be a rational string or number".into()),
    };
    let r = parse_rational(&text).map_err(|e| e.to_string())?;
    rational_to_f64(&r).ok_or_else(|| "radius out of range".into())
}

fn rational_to_f64(r: &BigRational) -> Option<f64> {
    let n = r.numer().to_string().parse::<f64>().ok()?;
    let d = r.denom().to_string().parse::<f64>().ok()?;
    Some(n / d)
}

/// Accepts "mid/rad" strings or {"midpoint": ..., "radius": ...} objects;
/// `"formal"` or null declares an unanchored generator.
fn parse_anchor(v: &Value) -> Result<Option<(BigRational, BigRational)>, String> {
    match v {
        Value::Null => Ok(None),
        Value::String(s) if s == "formal" => Ok(None),
        Value::String(s) => {
            let (m, r) = s
                .rsplit_once('/')
                .ok_or_else(|| "anchor required (use \"midpoint/radius\")".to_string())?;
            let mid = parse_rational(m).map_err(|e| e.to_string())?;
            let rad = parse_rational(r).map_err(|e| e.to_string())?;
            Ok(Some((mid, rad)))
        }
        Value::Object(map) => {
            let mid = map
                .get("midpoint")
                .and_then(|x| x.as_str())
                .ok_or_else(|| "anchor required (midpoint missing)".to_string())?;
            let rad = map
                .get("radius")
                .and_then(|x| x.as_str())
                .ok_or_else(|| "anchor required (radius missing)".to_string())?;
            Ok(Some((
                parse_rational(mid).map_err(|e| e.to_string())?,
                parse_rational(rad).map_err(|e| e.to_string())?,
            )))
        }
        _ => Err("anchor required".into()),
    }
}

fn get_str<'a>(v: &'a Value, key: &str, errs: &mut Vec<String>) -> Option<&'a str> {
    match v.get(key).and_then(|x| x.as_str()) {
        Some(s) => Some(s),
        None => {
            errs.push(format!("{key} (string) required"));
            None
        }
    }
}

fn get_n(v: &Value, errs: &mut Vec<String>) -> Option<u64> {
    match v.get("N").and_then(|x| x.as_u64()) {
        Some(n) if n >= 2 => Some(n),
        Some(_) => {
            errs.push("N must be >= 2".into());
            None
        }
        None => {
            errs.push("N must be >= 2".into());
            None
        }
    }
}

fn parse_scalar_field(
    v: &Value,
    key: &str,
    env: &GeneratorEnv,
    errs: &mut Vec<String>,
) -> Option<SymbolicScalar> {
    let text = get_str(v, key, errs)?;
    match parse_scalar_expr(text, env) {
        Ok(s) => Some(s),
        Err(e) => {
            errs.push(format!("{key}: {e}"));
            None
        }
    }
}

pub fn parse_family(v: &Value, env: &GeneratorEnv) -> Result<FamilyTag, Vec<String>> {
    let mut errs = Vec::new();
    let kind = v.get("kind").and_then(|x| x.as_str()).unwrap_or_default();
    let tag = match kind {
        "solenoid" => {
            let theta = parse_scalar_field(v, "theta", env, &mut errs);
            let n = get_n(v, &mut errs);
            match (theta, n) {
                (Some(theta), Some(n)) => Some(FamilyTag::Solenoid { theta, n }),
                _ => None,
            }
        }
        "stable-corner" => parse_form(v.get("form").unwrap_or(&Value::Null), env)
            .map_err(|mut e| errs.append(&mut e))
            .ok()
            .map(|form| FamilyTag::StableCorner { form }),
        "dim-changing" => {
            let mut thetas = Vec::new();
            match v.get("thetas").and_then(|x| x.as_array()) {
                Some(arr) => {
                    for (i, t) in arr.iter().enumerate() {
                        match t.as_str().ok_or("must be a string".to_string()).and_then(
                            |s| parse_scalar_expr(s, env).map_err(|e| e.to_string()),
                        ) {
                            Ok(s) => thetas.push(s),
                            Err(e) => errs.push(format!("thetas[{i}]: {e}")),
                        }
                    }
                    (!thetas.is_empty()).then_some(FamilyTag::DimChanging { thetas })
                }
                None => {
                    errs.push("thetas (array) required".into());
                    None
                }
            }
        }
        "noncorner" | "ax7" => {
            let theta0 = parse_scalar_field(v, "theta0", env, &mut errs);
            let n = get_n(v, &mut errs);
            match (theta0, n) {
                (Some(theta0), Some(n)) => Some(FamilyTag::Ax7 { n, theta0 }),
                _ => None,
            }
        }
        "k1-engine" => {
            let theta = parse_scalar_field(v, "theta", env, &mut errs);
            let mut p_seq = Vec::new();
            if let Some(arr) = v.get("p_seq").and_then(|x| x.as_array()) {
                for (i, m) in arr.iter().enumerate() {
                    match parse_matrix(m) {
                        Ok(mat) => p_seq.push(mat),
                        Err(e) => errs.push(format!("p_seq[{i}]: {e}")),
                    }
                }
            } else {
                errs.push("p_seq (array of matrices) required".into());
            }
            match theta {
                Some(theta) if !p_seq.is_empty() => Some(FamilyTag::K1Engine { theta, p_seq }),
                _ => None,
            }
        }
        "killing" => {
            let alpha = parse_scalar_field(v, "alpha", env, &mut errs);
            let beta = parse_scalar_field(v, "beta", env, &mut errs);
            match (alpha, beta) {
                (Some(alpha), Some(beta)) => Some(FamilyTag::InfinitesimalKilling { alpha, beta }),
                _ => None,
            }
        }
        other => {
            errs.push(format!(
                "unknown kind `{other}` (expected solenoid | stable-corner | dim-changing | noncorner | k1-engine | killing)"
            ));
            None
        }
    };
    match tag {
        Some(t) if errs.is_empty() => Ok(t),
        _ => Err(errs),
    }
}

/// SkewForm JSON: {"size": m, "upper": [[j, k, "expr"], ...]} with 1-based
/// indices j < k.
pub fn parse_form(v: &Value, env: &GeneratorEnv) -> Result<SkewForm, Vec<String>> {
    let mut errs = Vec::new();
    let size = match v.get("size").and_then(|x| x.as_u64()) {
        Some(s) if s >= 2 => s as usize,
        _ => {
            errs.push("size must be an integer >= 2".into());
            return Err(errs);
        }
    };
    let mut entries = vec![vec![None::<SymbolicScalar>; size]; size];
    if let Some(upper) = v.get("upper").and_then(|x| x.as_array()) {
        for (i, triple) in upper.iter().enumerate() {
            let arr = match triple.as_array() {
                Some(a) if a.len() == 3 => a,
                _ => {
                    errs.push(format!("upper[{i}] must be [j, k, scalar]"));
                    continue;
                }
            };
            let j = arr[0].as_u64().unwrap_or(0) as usize;
            let k = arr[1].as_u64().unwrap_or(0) as usize;
            if j == 0 || k == 0 || j >= k || k > size {
                errs.push(format!("upper[{i}]: need 1 <= j < k <= {size}"));
                continue;
            }
            let text = match arr[2].as_str() {
                Some(t) => t,
                None => {
                    errs.push(format!("upper[{i}]: scalar must be a string"));
                    continue;
                }
            };
            match parse_scalar_expr(text, env) {
                Ok(s) => entries[j - 1][k - 1] = Some(s),
                Err(e) => errs.push(format!("upper[{i}]: {e}")),
            }
        }
    } else {
        errs.push("upper (array) required".into());
    }
    if !errs.is_empty() {
        return Err(errs);
    }
    Ok(SkewForm::from_upper_fn(size, |j, k| {
        entries[j][k].clone().unwrap_or_else(SymbolicScalar::zero)
    }))
}

/// Matrices as arrays of arrays of integer strings.
pub fn parse_matrix(v: &Value) -> Result<IntMatrix, String> {
    let rows = v.as_array().ok_or("matrix must be an array of rows")?;
    let mut data: Vec<Vec<BigInt>> = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let cells = row
            .as_array()
            .ok_or_else(|| format!("row {i} must be an array"))?;
        let mut out = Vec::new();
        for (j, cell) in cells.iter().enumerate() {
            let text = match cell {
                Value::String(s) => s.clone(),
                Value::Number(n) => n.to_string(),
                _ => return Err(format!("entry ({i},{j}) must be an integer string")),
            };
            out.push(
                text.parse::<BigInt>()
                    .map_err(|_| format!("entry ({i},{j}): bad integer `{text}`"))?,
            );
        }
        data.push(out);
    }
    if data.is_empty() || data.iter().any(|r| r.len() != data[0].len()) {
        return Err("matrix rows must be nonempty and equal length".into());
    }
    Ok(IntMatrix::from_fn(data.len(), data[0].len(), |i, j| {
        data[i][j].clone()
    }))
}

fn parse_hom(v: &Value, env: &GeneratorEnv) -> Result<HomSpec, Vec<String>> {
    let mut errs = Vec::new();
    let source = v
        .get("source")
        .ok_or(())
        .map_err(|_| errs.push("source (form) required".into()))
        .and_then(|f| parse_form(f, env).map_err(|mut e| errs.append(&mut e)));
    let target = v
        .get("target")
        .ok_or(())
        .map_err(|_| errs.push("target (form) required".into()))
        .and_then(|f| parse_form(f, env).map_err(|mut e| errs.append(&mut e)));
    let matrix = v
        .get("matrix")
        .ok_or(())
        .map_err(|_| errs.push("matrix required".into()))
        .and_then(|m| parse_matrix(m).map_err(|e| errs.push(format!("matrix: {e}"))));
    let amplification = v.get("amplification").and_then(|x| x.as_u64());
    match (source, target, matrix) {
        (Ok(source), Ok(target), Ok(matrix)) if errs.is_empty() => Ok(HomSpec {
            source,
            target,
            matrix,
            amplification,
        }),
        _ => Err(errs),
    }
}

fn parse_multiplier(v: &Value) -> Result<MultiplierSpec, Vec<String>> {
    let mut errs = Vec::new();
    let kind = v.get("kind").and_then(|x| x.as_str()).unwrap_or_default();
    let rational_field = |key: &str, errs: &mut Vec<String>| -> Option<BigRational> {
        match v.get(key) {
            Some(Value::String(s)) => parse_rational(s)
                .map_err(|e| errs.push(format!("{key}: {e}")))
                .ok(),
            Some(Value::Number(n)) => parse_rational(&n.to_string())
                .map_err(|e| errs.push(format!("{key}: {e}")))
                .ok(),
            _ => {
                errs.push(format!("{key} (rational) required"));
                None
            }
        }
    };
    let spec = match kind {
        "flat" => {
            let d = v.get("d").and_then(|x| x.as_u64()).unwrap_or(0) as usize;
            let l = match v.get("l").and_then(|x| x.as_array()) {
                Some(rows) => {
                    let mut out = Vec::new();
                    for row in rows {
                        let cells: Option<Vec<f64>> = row
                            .as_array()
                            .map(|r| r.iter().filter_map(|c| c.as_f64()).collect());
                        match cells {
                            Some(c) => out.push(c),
                            None => errs.push("l rows must be numeric arrays".into()),
                        }
                    }
                    out
                }
                None => {
                    // default L = identity
                    (0..d)
                        .map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
                        .collect()
                }
            };
            if d == 0 {
                errs.push("d (dimension) required".into());
                None
            } else {
                Some(MultiplierSpec::Flat { l, d })
            }
        }
        "flat-limit" => v
            .get("N")
            .and_then(|x| x.as_u64())
            .map(|n| MultiplierSpec::FlatSolenoid { n })
            .or_else(|| {
                errs.push("N must be >= 2".into());
                None
            }),
        "length-solenoid" => v
            .get("N")
            .and_then(|x| x.as_u64())
            .map(|n| MultiplierSpec::LengthSolenoid { n })
            .or_else(|| {
                errs.push("N must be >= 2".into());
                None
            }),
        "length-euclid" => {
            let weights = match v.get("weights").and_then(|x| x.as_array()) {
                Some(arr) => arr
                    .iter()
                    .filter_map(|w| w.as_str().and_then(|s| parse_rational(s).ok()))
                    .collect(),
                None => {
                    errs.push("weights (array of rationals) required".into());
                    vec![]
                }
            };
            Some(MultiplierSpec::LengthEuclid { weights })
        }
        "weighted-omega" => {
            let w = rational_field("w", &mut errs);
            let lam = rational_field("lambda", &mut errs);
            match (w, lam) {
                (Some(w_slope), Some(lambda_slope)) => Some(MultiplierSpec::WeightedOmega {
                    w_slope,
                    lambda_slope,
                }),
                _ => None,
            }
        }
        "square" => v
            .get("d")
            .and_then(|x| x.as_u64())
            .map(|d| MultiplierSpec::StableCornerSquare { d: d as usize })
            .or_else(|| {
                errs.push("d (dimension) required".into());
                None
            }),
        other => {
            errs.push(format!(
                "unknown kind `{other}` (expected flat | flat-limit | length-solenoid | length-euclid | weighted-omega | square)"
            ));
            None
        }
    };
    match spec {
        Some(s) if errs.is_empty() => Ok(s),
        _ => Err(errs),
    }
}

fn parse_shift(v: &Value) -> Result<ShiftSpec, String> {
    if let Some(arr) = v.as_array() {
        let coords: Option<Vec<i64>> = arr.iter().map(|c| c.as_i64()).collect();
        return coords
            .map(ShiftSpec::Lattice)
            .ok_or_else(|| "lattice shift must be an integer array".into());
    }
    if let Some(obj) = v.get("solenoid") {
        let num = obj
            .get("num")
            .and_then(|x| x.as_array())
            .and_then(|a| {
                let v: Option<Vec<i64>> = a.iter().map(|c| c.as_i64()).collect();
                v
            })
            .ok_or("solenoid shift needs num: [a, b]")?;
        if num.len() != 2 {
            return Err("solenoid shift num must have two entries".into());
        }
        let depth = obj.get("depth").and_then(|x| x.as_u64()).unwrap_or(0) as u32;
        return Ok(ShiftSpec::Solenoid {
            num: [num[0], num[1]],
            depth,
        });
    }
    Err("shift must be an integer array or {\"solenoid\": {...}}".into())
}

fn parse_pair(v: &Value, env: &GeneratorEnv) -> Result<PairSpec, Vec<String>> {
    let mut errs = Vec::new();
    let kind = v.get("kind").and_then(|x| x.as_str()).unwrap_or_default();
    let side = |key: &str, errs: &mut Vec<String>| -> Option<(SymbolicScalar, u64)> {
        let obj = v.get(key)?;
        let theta = parse_scalar_field(obj, "theta", env, errs)?;
        let n = get_n(obj, errs)?;
        Some((theta, n))
    };
    match kind {
        "solenoid" => {
            let left = side("left", &mut errs);
            let right = side("right", &mut errs);
            let bound = v.get("bound").and_then(|x| x.as_u64()).unwrap_or(6) as u32;
            match (left, right) {
                (Some(left), Some(right)) if errs.is_empty() => Ok(PairSpec::Solenoid {
                    left,
                    right,
                    bound,
                }),
                _ => {
                    if errs.is_empty() {
                        errs.push("left and right sides required".into());
                    }
                    Err(errs)
                }
            }
        }
        "noncorner" | "ax7" => {
            let side = |key: &str, errs: &mut Vec<String>| -> Option<(u64, SymbolicScalar)> {
                let obj = v.get(key)?;
                let theta = parse_scalar_field(obj, "theta0", env, errs)?;
                let n = get_n(obj, errs)?;
                Some((n, theta))
            };
            let left = side("left", &mut errs);
            let right = side("right", &mut errs);
            match (left, right) {
                (Some(left), Some(right)) if errs.is_empty() => {
                    Ok(PairSpec::Noncorner { left, right })
                }
                _ => {
                    if errs.is_empty() {
                        errs.push("left and right sides required".into());
                    }
                    Err(errs)
                }
            }
        }
        other => {
            errs.push(format!("unknown pair kind `{other}`"));
            Err(errs)
        }
    }
}

fn parse_system(v: &Value, env: &GeneratorEnv) -> Result<SystemSpec, Vec<String>> {
    let mut errs = Vec::new();
    let mut descriptors = Vec::new();
    match v.get("stages").and_then(|x| x.as_array()) {
        Some(arr) => {
            for (i, stage) in arr.iter().enumerate() {
                match parse_form(stage.get("form").unwrap_or(&Value::Null), env) {
                    Ok(form) => {
                        let amp = stage
                            .get("amplification")
                            .and_then(|x| x.as_u64())
                            .unwrap_or(1);
                        descriptors.push(TorusDescriptor::new(form, amp));
                    }
                    Err(mut e) => {
                        for msg in e.drain(..) {
                            errs.push(format!("stages[{i}].{msg}"));
                        }
                    }
                }
            }
        }
        None => errs.push("stages (array) required".into()),
    }
    let maps: Vec<Value> = v
        .get("maps")
        .and_then(|x| x.as_array())
        .cloned()
        .unwrap_or_default();
    if maps.len() + 1 != descriptors.len() && errs.is_empty() {
        errs.push(format!(
            "need exactly {} maps for {} stages",
            descriptors.len().saturating_sub(1),
            descriptors.len()
        ));
    }
    if !errs.is_empty() {
        return Err(errs);
    }
    Ok(SystemSpec { descriptors, maps })
}

/// Builds an explicit system from descriptors + map records.
pub fn build_explicit_system(
    spec: &SystemSpec,
    env: &GeneratorEnv,
    max_refinements: usize,
) -> Result<ProtoralSystem, protorus::Error> {
    let bad = |msg: String| protorus::Error::ConfigParse(msg);
    let mut stages = Vec::new();
    for (i, map_v) in spec.maps.iter().enumerate() {
        let source = spec.descriptors[i].clone();
        let target = spec.descriptors[i + 1].clone();
        let case = map_v.get("case").and_then(|x| x.as_str()).unwrap_or_default();
        let data = match case {
            "unital-toric" => {
                let matrix = parse_matrix(map_v.get("matrix").unwrap_or(&Value::Null))
                    .map_err(|e| bad(format!("maps[{i}].matrix: {e}")))?;
                CaseData::UnitalToric {
                    source: source.clone(),
                    target,
                    matrix,
                    phases: vec![],
                    blocks: map_v.get("blocks").and_then(|x| x.as_u64()),
                }
            }
            "pure-corner" => {
                let t_text = map_v
                    .get("corner_trace")
                    .and_then(|x| x.as_str())
                    .ok_or_else(|| bad(format!("maps[{i}].corner_trace required")))?;
                let corner_trace = parse_scalar_expr(t_text, env)?;
                CaseData::PureCorner {
                    source: source.clone(),
                    target,
                    corner_trace,
                    beta0: None,
                    beta1: None,
                }
            }
            "abstract" => {
                let k0 = parse_matrix(map_v.get("k0").unwrap_or(&Value::Null))
                    .map_err(|e| bad(format!("maps[{i}].k0: {e}")))?;
                let k1 = parse_matrix(map_v.get("k1").unwrap_or(&Value::Null))
                    .map_err(|e| bad(format!("maps[{i}].k1: {e}")))?;
                let t_text = map_v
                    .get("t")
                    .and_then(|x| x.as_str())
                    .ok_or_else(|| bad(format!("maps[{i}].t required")))?;
                let t = parse_scalar_expr(t_text, env)?;
                CaseData::AbstractK {
                    source: source.clone(),
                    target,
                    k0,
                    k1,
                    t,
                }
            }
            other => return Err(bad(format!("maps[{i}].case: unknown `{other}`"))),
        };
        let map = build_connecting_map(data, env, max_refinements)?;
        stages.push(Stage {
            descriptor: source,
            map,
        });
    }
    Ok(ProtoralSystem::from_stages(stages, env.clone())
        .with_max_refinements(max_refinements))
}
