mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::commands::{CommandError, Outcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "protorus", version, about = "Elliott-invariant and spectral computations for inductive limits of noncommutative tori")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, clap::Args)]
struct CommonArgs {
    /// JSON configuration file
    #[arg(long)]
    config: Option<PathBuf>,
    /// stage horizon override
    #[arg(long)]
    horizon: Option<usize>,
    /// radius override (rational, e.g. "2" or "5/2")
    #[arg(long)]
    radius: Option<String>,
    /// output format
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// declare a generator anchor inline: midpoint/radius (e.g. 0.618/1e-6)
    #[arg(long, value_name = "MID/RAD")]
    theta_anchor: Option<String>,
    /// integer parameter N for the inline family/multiplier forms
    #[arg(long = "N", value_name = "N")]
    n: Option<u64>,
    /// witness/truncation depth
    #[arg(long)]
    depth: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a toric homomorphism: congruence, induced K-maps, existence
    #[command(name = "check-hom")]
    CheckHom {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Elliott-invariant report of a family or explicit system
    Invariant {
        #[command(flatten)]
        common: CommonArgs,
        /// inline family name (solenoid | stable-corner | noncorner | ...)
        #[arg(long)]
        family: Option<String>,
    },
    /// Classify a pair of systems by their invariants
    Classify {
        #[command(flatten)]
        common: CommonArgs,
        /// inline pair, e.g. --pair "solenoid(theta,2)" "solenoid(theta,4)"
        #[arg(long, num_args = 2)]
        pair: Option<Vec<String>>,
    },
    /// Spectral enumeration / resolvent diagnostics of a multiplier
    Spectrum {
        #[command(flatten)]
        common: CommonArgs,
        /// inline multiplier name (flat | flat-limit | length-solenoid | ...)
        #[arg(long)]
        multiplier: Option<String>,
    },
    /// Increment and commutator bounds for a monomial shift
    Commutator {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Stage-cut counting for the nonunital spectral models
    Cutdown {
        #[command(flatten)]
        common: CommonArgs,
        /// left-index cut; omit via --no-cut to demonstrate unboundedness
        #[arg(long)]
        cut: Option<u64>,
        /// omit the left-index cut
        #[arg(long, default_value_t = false)]
        no_cut: bool,
    },
    /// Combined invariant + spectral report
    Report {
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Partial) => ExitCode::from(2),
        Err(CommandError::Undecided(msg)) => {
            eprintln!("undecided: {msg}");
            ExitCode::from(2)
        }
        Err(CommandError::Hard(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<Outcome, CommandError> {
    let (common, inline, name) = match &cli.command {
        Command::CheckHom { common } => (common, json!({}), "check-hom"),
        Command::Invariant { common, family } => {
            let inline = match family {
                Some(f) => inline_family(f, common)?,
                None => json!({}),
            };
            (common, inline, "invariant")
        }
        Command::Classify { common, pair } => {
            let inline = match pair {
                Some(p) => inline_pair(p, common)?,
                None => json!({}),
            };
            (common, inline, "classify")
        }
        Command::Spectrum { common, multiplier } => {
            let inline = match multiplier {
                Some(m) => inline_multiplier(m, common)?,
                None => json!({}),
            };
            (common, inline, "spectrum")
        }
        Command::Commutator { common } => (common, json!({}), "commutator"),
        Command::Cutdown { common, cut, no_cut } => {
            let mut inline = json!({});
            if let Some(c) = cut {
                inline["cut"] = json!(c);
            }
            if *no_cut {
                inline["no_cut"] = json!(true);
            }
            (common, inline, "cutdown")
        }
        Command::Report { common } => (common, json!({}), "report"),
    };

    // assemble the raw config: file first, inline flags layered on top
    let mut raw: Value = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CommandError::Hard(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| CommandError::Hard(format!("config parse: {e}")))?
        }
        None => json!({}),
    };
    merge(&mut raw, &inline);
    if let Some(anchor) = &common.theta_anchor {
        raw["generators"]["theta"] = json!(anchor);
    }
    if let Some(h) = common.horizon {
        raw["horizon"] = json!(h);
    }
    if let Some(r) = &common.radius {
        raw["radius"] = json!(r);
    }
    if let Some(d) = common.depth {
        raw["depth"] = json!(d);
    }

    let mut cfg = config::validate_config(&raw.to_string()).map_err(|errs| {
        CommandError::Hard(format!("invalid config:\n  {}", errs.join("\n  ")))
    })?;
    if let Ok(budget) = std::env::var("PROTORUS_MAX_REFINE") {
        cfg.max_refinements = budget
            .parse()
            .map_err(|_| CommandError::Hard("PROTORUS_MAX_REFINE must be an integer".into()))?;
    }

    let (result, outcome) = commands::dispatch(name, &cfg)?;
    let doc = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "command": name,
        "config": cfg.raw,
        "result": result,
    });
    let rendered = match common.format {
        Format::Json => output::render_json(&doc),
        Format::Table => output::render_table(&doc),
        Format::Csv => output::render_csv(&doc),
    };
    match &common.out {
        Some(path) => std::fs::write(path, rendered)
            .map_err(|e| CommandError::Hard(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{rendered}"),
    }
    Ok(outcome)
}

fn merge(base: &mut Value, layer: &Value) {
    if let (Value::Object(b), Value::Object(l)) = (base, layer) {
        for (k, v) in l {
            b.insert(k.clone(), v.clone());
        }
    }
}

fn inline_family(name: &str, common: &CommonArgs) -> Result<Value, CommandError> {
    let n = common.n.unwrap_or(2);
    let fam = match name {
        "solenoid" => json!({"kind": "solenoid", "theta": "theta", "N": n}),
        "noncorner" | "ax7" => json!({"kind": "noncorner", "theta0": "theta", "N": n}),
        "stable-corner" => json!({
            "kind": "stable-corner",
            "form": {"size": 2, "upper": [[1, 2, "theta"]]}
        }),
        other => {
            return Err(CommandError::Hard(format!(
                "inline family `{other}` not recognized; use a config file for the other families"
            )))
        }
    };
    Ok(json!({ "family": fam }))
}

fn inline_pair(pair: &[String], _common: &CommonArgs) -> Result<Value, CommandError> {
    let parse_side = |text: &str| -> Result<(String, String, u64), CommandError> {
        let bad = || CommandError::Hard(format!("cannot parse pair side `{text}`; expected name(param,N)"));
        let open = text.find('(').ok_or_else(bad)?;
        let name = text[..open].trim().to_string();
        let inner = text[open + 1..].strip_suffix(')').ok_or_else(bad)?;
        let (param, n) = inner.rsplit_once(',').ok_or_else(bad)?;
        let n: u64 = n.trim().parse().map_err(|_| bad())?;
        Ok((name, param.trim().to_string(), n))
    };
    let (name_l, param_l, n_l) = parse_side(&pair[0])?;
    let (name_r, param_r, n_r) = parse_side(&pair[1])?;
    if name_l != name_r {
        return Err(CommandError::Hard(
            "pair sides must belong to the same family".into(),
        ));
    }
    let pair_value = match name_l.as_str() {
        "solenoid" => json!({
            "kind": "solenoid",
            "left": {"theta": param_l, "N": n_l},
            "right": {"theta": param_r, "N": n_r},
        }),
        "noncorner" | "ax7" => json!({
            "kind": "noncorner",
            "left": {"theta0": param_l, "N": n_l},
            "right": {"theta0": param_r, "N": n_r},
        }),
        other => {
            return Err(CommandError::Hard(format!(
                "pair family `{other}` not recognized"
            )))
        }
    };
    Ok(json!({ "pair": pair_value }))
}

fn inline_multiplier(name: &str, common: &CommonArgs) -> Result<Value, CommandError> {
    let n = common.n.unwrap_or(2);
    let m = match name {
        "flat" => json!({"kind": "flat", "d": 2}),
        "flat-limit" => json!({"kind": "flat-limit", "N": n}),
        "length-solenoid" => json!({"kind": "length-solenoid", "N": n}),
        "weighted-omega" => json!({"kind": "weighted-omega", "w": "1", "lambda": "1"}),
        "square" => json!({"kind": "square", "d": 2}),
        other => {
            return Err(CommandError::Hard(format!(
                "inline multiplier `{other}` not recognized"
            )))
        }
    };
    Ok(json!({ "multiplier": m }))
}
