//! `krein` — classify spectral collisions of small-amplitude periodic
//! traveling waves directly from a dispersion relation.
//!
//! Subcommands:
//!   classify  per-separation collision records and a stability verdict
//!   spectrum  plot-ready spectrum slices (CSV/JSON)
//!   region    balanced-family regime map plus exact thresholds (CSV/JSON)
//!   verify    self-checking suites (seeded, deterministic)
//!   lemmas    exact inequality groups underlying the classification
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error.

mod commands;
mod config;
mod fmt;

use clap::{Parser, Subcommand};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "krein",
    version,
    about = "Spectral collision classification for periodic traveling waves",
    arg_required_else_help = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Model family: gkdv | hokdv | balanced | custom.
    #[arg(long, global = true)]
    pub family: Option<String>,

    /// Branch index k (gkdv, hokdv, custom; balanced is fixed at k = 1).
    #[arg(long, global = true)]
    pub k: Option<u32>,

    /// Higher exponent p (hokdv order, or balanced leading index).
    #[arg(long, global = true)]
    pub p: Option<u32>,

    /// Lower exponent q (balanced family, q < p).
    #[arg(long, global = true)]
    pub q: Option<u32>,

    /// Balanced-family coefficient beta > 0, parsed exactly ("0.2" = 1/5).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub beta: Option<String>,

    /// Leading coefficient alpha for gkdv/hokdv (default 1), exact rational.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub alpha: Option<String>,

    /// Comma-separated odd-power coefficients of a custom dispersion
    /// relation, lowest first: "a0,a1,..." means a0 x + a1 x^3 + ...
    #[arg(long = "alpha-coeffs", global = true, allow_hyphen_values = true)]
    pub alpha_coeffs: Option<String>,

    /// Largest separation dn to examine (default 100).
    #[arg(long = "dn-max", global = true)]
    pub dn_max: Option<u32>,

    /// Numerical tolerance for eigenvalue-zero detection (default 1e-10).
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Output format (classify defaults to a text report).
    #[arg(long, global = true, value_parser = ["csv", "json"])]
    pub format: Option<String>,

    /// Write output to this path instead of stdout; `region` also writes a
    /// companion thresholds file with `_thresholds` before the extension.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// RNG seed for the verification suites (default 0).
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Flat key=value config file mirroring the long flag names. The model
    /// must come from exactly one source (flags or file); other keys from
    /// the file are overridden by flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Comma-separated Floquet exponents in (-1/2, 1/2] for `spectrum`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub mu: Option<String>,

    /// Branch window: emit modes |n| <= n-window (default 30; negative
    /// yields a header-only table).
    #[arg(long = "n-window", global = true, allow_hyphen_values = true)]
    pub n_window: Option<i64>,

    /// Maximum recurrence index for the inequality groups
    /// (`lemmas` default 50, `verify` default 12).
    #[arg(long = "m-max", global = true)]
    pub m_max: Option<usize>,

    /// Number of beta grid steps for `region`: beta = j/steps, j = 1..=steps
    /// (default 200).
    #[arg(long = "beta-steps", global = true)]
    pub beta_steps: Option<u32>,

    /// Test fixture: corrupt one recurrence term of a claimed reduced
    /// polynomial before verification; a healthy verifier must detect it.
    #[arg(long = "inject-s3-sign-flip", global = true, hide = true)]
    pub inject_s3_sign_flip: bool,
}

#[derive(Subcommand, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Collision records per separation and a stability verdict.
    Classify,
    /// Spectrum slices lambda_im(n; mu_tilde), plot-ready.
    Spectrum,
    /// Balanced-family regime grid and exact thresholds.
    Region,
    /// Seeded self-verification suites (identity, cross-check, doubling,
    /// inequalities).
    Verify,
    /// Exact inequality groups for the recurrence polynomials.
    Lemmas,
}

fn main() {
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            2
        }
    };
    std::process::exit(code);
}

fn run(cli: &Cli) -> Result<i32, String> {
    let resolved = config::resolve(cli)?;
    match cli.command {
        Command::Classify => commands::classify(&resolved),
        Command::Spectrum => commands::spectrum(&resolved),
        Command::Region => commands::region(&resolved),
        Command::Verify => commands::verify(&resolved),
        Command::Lemmas => commands::lemmas(&resolved),
    }
}
