//! Flag/config-file resolution and model construction.
//!
//! The config file is a flat `key = value` text format whose keys mirror
//! the long flag names. The model (family plus its parameters) must come
//! from exactly one source — command line or file — while every other key
//! may appear in both, with the command line winning.

use std::path::{Path, PathBuf};

use krein::dispersion::{ComovingDispersion, DispersionRelation};
use krein::models::{gkdv_dispersion, hokdv_dispersion, BalancedModel};
use krein::rat::{parse_rational, rat_int};
use krein::Rat;

use crate::Cli;

const MODEL_KEYS: [&str; 7] = ["family", "k", "p", "q", "beta", "alpha", "alpha-coeffs"];
const OTHER_KEYS: [&str; 9] = [
    "dn-max",
    "tol",
    "format",
    "out",
    "seed",
    "mu",
    "n-window",
    "m-max",
    "beta-steps",
];

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Raw model parameters from whichever source won; validated per family
/// when a command actually needs the model.
#[derive(Default)]
pub struct ModelSpec {
    pub family: Option<String>,
    pub k: Option<u32>,
    pub p: Option<u32>,
    pub q: Option<u32>,
    pub beta: Option<String>,
    pub alpha: Option<String>,
    pub alpha_coeffs: Option<String>,
}

pub struct Resolved {
    pub model: ModelSpec,
    pub dn_max: u32,
    pub tol: f64,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub mu: Vec<f64>,
    pub n_window: i64,
    pub m_max: Option<usize>,
    pub beta_steps: u32,
    pub inject_s3_sign_flip: bool,
}

/// A constructed model: the comoving dispersion relation plus a human
/// description, with the balanced structure kept when present.
pub enum Model {
    Plain {
        dispersion: ComovingDispersion,
        describe: String,
    },
    Balanced {
        model: BalancedModel,
        describe: String,
    },
}

impl Model {
    pub fn dispersion(&self) -> ComovingDispersion {
        match self {
            Model::Plain { dispersion, .. } => dispersion.clone(),
            Model::Balanced { model, .. } => model.dispersion(),
        }
    }

    pub fn describe(&self) -> &str {
        match self {
            Model::Plain { describe, .. } | Model::Balanced { describe, .. } => describe,
        }
    }
}

pub fn resolve(cli: &Cli) -> Result<Resolved, String> {
    let file_entries = match &cli.config {
        Some(path) => parse_config_file(path)?,
        None => Vec::new(),
    };

    let cli_has_model = cli.family.is_some()
        || cli.k.is_some()
        || cli.p.is_some()
        || cli.q.is_some()
        || cli.beta.is_some()
        || cli.alpha.is_some()
        || cli.alpha_coeffs.is_some();
    let file_has_model = file_entries
        .iter()
        .any(|(key, _)| MODEL_KEYS.contains(&key.as_str()));
    if cli_has_model && file_has_model {
        return Err(
            "model parameters given both on the command line and in the config file; \
             supply the model through exactly one source"
                .into(),
        );
    }

    let file_get = |key: &str| -> Option<&str> {
        file_entries
            .iter()
            .rev()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    };

    let model = if file_has_model {
        ModelSpec {
            family: file_get("family").map(str::to_owned),
            k: parse_opt(file_get("k"), "k")?,
            p: parse_opt(file_get("p"), "p")?,
            q: parse_opt(file_get("q"), "q")?,
            beta: file_get("beta").map(str::to_owned),
            alpha: file_get("alpha").map(str::to_owned),
            alpha_coeffs: file_get("alpha-coeffs").map(str::to_owned),
        }
    } else {
        ModelSpec {
            family: cli.family.clone(),
            k: cli.k,
            p: cli.p,
            q: cli.q,
            beta: cli.beta.clone(),
            alpha: cli.alpha.clone(),
            alpha_coeffs: cli.alpha_coeffs.clone(),
        }
    };

    let dn_max = match cli.dn_max {
        Some(v) => v,
        None => parse_opt(file_get("dn-max"), "dn-max")?.unwrap_or(100),
    };
    if dn_max == 0 {
        return Err("dn-max must be at least 1".into());
    }

    let tol = match cli.tol {
        Some(v) => v,
        None => parse_opt(file_get("tol"), "tol")?.unwrap_or(1e-10),
    };
    if !tol.is_finite() || tol <= 0.0 {
        return Err(format!("tolerance must be positive and finite, got {tol}"));
    }

    let format_str = cli
        .format
        .clone()
        .or_else(|| file_get("format").map(str::to_owned));
    let format = match format_str.as_deref() {
        None => None,
        Some("csv") => Some(Format::Csv),
        Some("json") => Some(Format::Json),
        Some(other) => return Err(format!("unknown format {other:?} (expected csv or json)")),
    };

    let out = cli
        .out
        .clone()
        .or_else(|| file_get("out").map(PathBuf::from));

    let seed = match cli.seed {
        Some(v) => v,
        None => parse_opt(file_get("seed"), "seed")?.unwrap_or(0),
    };

    let mu_str = cli.mu.clone().or_else(|| file_get("mu").map(str::to_owned));
    let mu = match mu_str {
        None => vec![0.0],
        Some(s) => parse_mu_list(&s)?,
    };

    let n_window = match cli.n_window {
        Some(v) => v,
        None => parse_opt(file_get("n-window"), "n-window")?.unwrap_or(30),
    };

    let m_max = match cli.m_max {
        Some(v) => Some(v),
        None => parse_opt(file_get("m-max"), "m-max")?,
    };

    let beta_steps = match cli.beta_steps {
        Some(v) => v,
        None => parse_opt(file_get("beta-steps"), "beta-steps")?.unwrap_or(200),
    };
    if beta_steps == 0 {
        return Err("beta-steps must be at least 1".into());
    }

    Ok(Resolved {
        model,
        dn_max,
        tol,
        format,
        out,
        seed,
        mu,
        n_window,
        m_max,
        beta_steps,
        inject_s3_sign_flip: cli.inject_s3_sign_flip,
    })
}

fn parse_opt<T: std::str::FromStr>(value: Option<&str>, key: &str) -> Result<Option<T>, String>
where
    T::Err: std::fmt::Display,
{
    match value {
        None => Ok(None),
        Some(raw) => raw
            .parse::<T>()
            .map(Some)
            .map_err(|e| format!("config key {key}: cannot parse {raw:?}: {e}")),
    }
}

fn parse_mu_list(s: &str) -> Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        let value: f64 = part
            .parse()
            .map_err(|e| format!("cannot parse mu value {part:?}: {e}"))?;
        out.push(value);
    }
    if out.is_empty() {
        return Err("mu list is empty".into());
    }
    Ok(out)
}

fn parse_config_file(path: &Path) -> Result<Vec<(String, String)>, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let mut entries = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!(
                "config {} line {}: expected key = value",
                path.display(),
                idx + 1
            ));
        };
        let key = key.trim().to_owned();
        let value = value.trim().to_owned();
        if !MODEL_KEYS.contains(&key.as_str()) && !OTHER_KEYS.contains(&key.as_str()) {
            return Err(format!(
                "config {} line {}: unknown key {key:?}",
                path.display(),
                idx + 1
            ));
        }
        entries.push((key, value));
    }
    Ok(entries)
}

fn parse_rat_flag(value: &str, what: &str) -> Result<Rat, String> {
    parse_rational(value).map_err(|e| format!("{what}: {e}"))
}

fn reject_inapplicable(family: &str, fields: &[(&str, bool)]) -> Result<(), String> {
    for (name, present) in fields {
        if *present {
            return Err(format!("--{name} does not apply to family {family}"));
        }
    }
    Ok(())
}

/// Builds the comoving dispersion relation the resolved model describes.
pub fn build_model(spec: &ModelSpec) -> Result<Model, String> {
    let family = spec
        .family
        .as_deref()
        .ok_or("missing --family (gkdv | hokdv | balanced | custom)")?;
    match family {
        "gkdv" => {
            reject_inapplicable(
                family,
                &[
                    ("p", spec.p.is_some()),
                    ("q", spec.q.is_some()),
                    ("beta", spec.beta.is_some()),
                    ("alpha-coeffs", spec.alpha_coeffs.is_some()),
                ],
            )?;
            let k = spec.k.ok_or("family gkdv requires --k")?;
            let alpha = match &spec.alpha {
                Some(s) => parse_rat_flag(s, "--alpha")?,
                None => rat_int(1),
            };
            let dispersion = gkdv_dispersion(alpha.clone(), k).map_err(|e| e.to_string())?;
            Ok(Model::Plain {
                dispersion,
                describe: format!("gkdv (alpha = {alpha}, k = {k})"),
            })
        }
        "hokdv" => {
            reject_inapplicable(
                family,
                &[
                    ("q", spec.q.is_some()),
                    ("beta", spec.beta.is_some()),
                    ("alpha-coeffs", spec.alpha_coeffs.is_some()),
                ],
            )?;
            let p = spec.p.ok_or("family hokdv requires --p")?;
            let k = spec.k.ok_or("family hokdv requires --k")?;
            let alpha = match &spec.alpha {
                Some(s) => parse_rat_flag(s, "--alpha")?,
                None => rat_int(1),
            };
            let dispersion = hokdv_dispersion(p, alpha.clone(), k).map_err(|e| e.to_string())?;
            Ok(Model::Plain {
                dispersion,
                describe: format!("hokdv (p = {p}, alpha = {alpha}, k = {k})"),
            })
        }
        "balanced" => {
            reject_inapplicable(
                family,
                &[
                    ("alpha", spec.alpha.is_some()),
                    ("alpha-coeffs", spec.alpha_coeffs.is_some()),
                ],
            )?;
            if let Some(k) = spec.k {
                if k != 1 {
                    return Err("the balanced family is defined at branch k = 1".into());
                }
            }
            let p = spec.p.ok_or("family balanced requires --p")?;
            let q = spec.q.ok_or("family balanced requires --q")?;
            let beta_str = spec
                .beta
                .as_deref()
                .ok_or("family balanced requires --beta")?;
            let beta = parse_rat_flag(beta_str, "--beta")?;
            let model = BalancedModel::new(p, q, beta.clone()).map_err(|e| e.to_string())?;
            Ok(Model::Balanced {
                describe: format!("balanced (p = {p}, q = {q}, beta = {beta})"),
                model,
            })
        }
        "custom" => {
            reject_inapplicable(
                family,
                &[
                    ("p", spec.p.is_some()),
                    ("q", spec.q.is_some()),
                    ("beta", spec.beta.is_some()),
                    ("alpha", spec.alpha.is_some()),
                ],
            )?;
            let raw = spec
                .alpha_coeffs
                .as_deref()
                .ok_or("family custom requires --alpha-coeffs")?;
            let k = spec.k.ok_or("family custom requires --k")?;
            let mut coeffs = Vec::new();
            for part in raw.split(',') {
                coeffs.push(parse_rat_flag(part.trim(), "--alpha-coeffs")?);
            }
            let lab = DispersionRelation::new(coeffs.clone()).map_err(|e| e.to_string())?;
            let dispersion = lab.at_branch(k).map_err(|e| e.to_string())?;
            let shown: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
            Ok(Model::Plain {
                dispersion,
                describe: format!("custom (coefficients [{}], k = {k})", shown.join(", ")),
            })
        }
        other => Err(format!(
            "unknown family {other:?} (expected gkdv, hokdv, balanced, or custom)"
        )),
    }
}

/// Balanced-family parameters for `region`, which sweeps beta itself.
pub fn balanced_exponents(spec: &ModelSpec) -> Result<(u32, u32), String> {
    let family = spec
        .family
        .as_deref()
        .ok_or("missing --family (region requires the balanced family)")?;
    if family != "balanced" {
        return Err(format!("region requires --family balanced, got {family}"));
    }
    if spec.beta.is_some() {
        return Err("region sweeps beta over a grid; --beta does not apply".into());
    }
    if let Some(k) = spec.k {
        if k != 1 {
            return Err("the balanced family is defined at branch k = 1".into());
        }
    }
    let p = spec.p.ok_or("region requires --p")?;
    let q = spec.q.ok_or("region requires --q")?;
    Ok((p, q))
}
