//! End-to-end tests of the `krein` binary: subcommand behavior, output
//! contracts, exit codes, config handling, and determinism.

use std::process::{Command, Output};

use krein::models::{balanced_thresholds, gkdv_dispersion};
use krein::oracle::spectrum_slice;
use krein::rat::{rat, rat_int, to_f64};

fn krein_bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_krein"))
        .args(args)
        .output()
        .expect("binary should run")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn round_trip(x: f64) -> String {
    format!("{x:.16e}")
}

#[test]
fn classify_fundamental_branch_reports_stable() {
    let out = krein_bin(&["classify", "--family", "gkdv", "--k", "1"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("no opposite-signature collisions"), "{text}");
    assert!(text.contains("dn <= 100"), "{text}");
    assert!(text.contains("spectrally stable at onset"), "{text}");
}

#[test]
fn classify_second_branch_flags_band() {
    let out = krein_bin(&[
        "classify", "--family", "gkdv", "--k", "2", "--dn-max", "10",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    let verdict = text
        .lines()
        .find(|l| l.starts_with("verdict:"))
        .expect("verdict line");
    assert_eq!(
        verdict,
        "verdict: Hopf candidates at dn = 3: opposite-signature collisions \
         (necessary, not sufficient, for instability)"
    );
    assert!(text.contains("krein=-1"), "{text}");
    assert!(text.contains("exact -5/27"), "{text}");
}

#[test]
fn classify_balanced_quintic_band_is_exactly_three() {
    let out = krein_bin(&[
        "classify", "--family", "balanced", "--p", "2", "--q", "1", "--beta", "0.3", "--dn-max",
        "12",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    let verdict = text
        .lines()
        .find(|l| l.starts_with("verdict:"))
        .expect("verdict line");
    assert_eq!(
        verdict,
        "verdict: Hopf candidates at dn = 3: opposite-signature collisions \
         (necessary, not sufficient, for instability)"
    );
}

#[test]
fn classify_balanced_degenerate_beta_is_not_a_candidate() {
    // At beta = 1/5 the dn = 3 root lands on a rational pair whose
    // eigenvalue vanishes exactly, so it must not be counted.
    let out = krein_bin(&[
        "classify", "--family", "balanced", "--p", "2", "--q", "1", "--beta", "0.2", "--dn-max",
        "12",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("no opposite-signature collisions"), "{text}");
    assert!(text.contains("exact -2/9"), "{text}");
    assert!(
        text.contains("class=origin (root location: opposite-signature)"),
        "{text}"
    );
}

#[test]
fn classify_csv_has_contract_header_and_exact_root() {
    let out = krein_bin(&[
        "classify", "--family", "gkdv", "--k", "2", "--dn-max", "4", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("dn,gamma,gamma_exact,gamma_class,class,mu1,mu2,lambda_im,krein_product,hopf_candidate")
    );
    assert!(text.contains(",-5/27,"), "{text}");
    assert!(text.contains(",true"), "{text}");
}

#[test]
fn classify_json_lists_candidates() {
    let out = krein_bin(&[
        "classify", "--family", "gkdv", "--k", "2", "--dn-max", "6", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("valid json");
    assert_eq!(doc["hopf_candidates"], serde_json::json!([3]));
    assert!(doc["verdict"].as_str().unwrap().contains("Hopf candidates"));
    assert_eq!(doc["records"].as_array().unwrap().len(), 6);
}

#[test]
fn spectrum_csv_header_and_spot_value() {
    let out = krein_bin(&[
        "spectrum", "--family", "gkdv", "--k", "2", "--mu", "-0.4", "--n-window", "6",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "mu_tilde,n,lambda_im");
    assert_eq!(lines.len(), 1 + 13, "one row per mode in |n| <= 6");

    // The n = 4 row must agree byte-for-byte with the library value.
    let cd = gkdv_dispersion(rat_int(1), 2).unwrap();
    let slice = spectrum_slice(&cd, -0.4, 6).unwrap();
    let (_, lambda) = slice
        .entries
        .iter()
        .find(|(n, _)| *n == 4)
        .expect("n = 4 in window");
    let expected = format!("{},4,{}", round_trip(slice.mu_tilde), round_trip(*lambda));
    assert!(text.contains(&expected), "missing {expected:?} in {text}");
}

#[test]
fn spectrum_negative_window_is_header_only() {
    let out = krein_bin(&[
        "spectrum", "--family", "gkdv", "--k", "1", "--n-window", "-1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_of(&out), "mu_tilde,n,lambda_im\n");
}

#[test]
fn spectrum_rejects_exponent_outside_range() {
    let out = krein_bin(&["spectrum", "--family", "gkdv", "--k", "1", "--mu", "0.7"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("outside"), "{}", stderr_of(&out));
}

#[test]
fn region_writes_grid_and_thresholds_files() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("map.csv");
    let out = krein_bin(&[
        "region",
        "--family",
        "balanced",
        "--p",
        "2",
        "--q",
        "1",
        "--dn-max",
        "4",
        "--beta-steps",
        "10",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    assert!(stdout_of(&out).is_empty());

    let grid = std::fs::read_to_string(&out_path).unwrap();
    let thresholds =
        std::fs::read_to_string(dir.path().join("map_thresholds.csv")).unwrap();

    assert_eq!(grid.lines().next(), Some("dn,beta,regime"));
    assert_eq!(grid.lines().count(), 1 + 4 * 10);
    let b02 = round_trip(to_f64(&rat(2, 10)));
    let b05 = round_trip(to_f64(&rat(5, 10)));
    assert!(grid.contains(&format!("3,{b02},opposite-signature")), "{grid}");
    assert!(grid.contains(&format!("3,{b05},no-collision")), "{grid}");

    assert_eq!(thresholds.lines().next(), Some("dn,beta0,beta_quarter"));
    for dn in 1..=4u32 {
        let t = balanced_thresholds(2, 1, dn).unwrap();
        let row = format!(
            "{dn},{},{}",
            round_trip(to_f64(&t.beta0)),
            round_trip(to_f64(&t.beta_quarter))
        );
        assert!(thresholds.contains(&row), "missing {row:?} in {thresholds}");
    }
}

#[test]
fn region_stdout_separates_grid_and_thresholds() {
    let out = krein_bin(&[
        "region", "--family", "balanced", "--p", "2", "--q", "1", "--dn-max", "2",
        "--beta-steps", "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.starts_with("dn,beta,regime\n"), "{text}");
    assert!(text.contains("\n\ndn,beta0,beta_quarter\n"), "{text}");
}

#[test]
fn region_requires_balanced_family() {
    let out = krein_bin(&["region", "--family", "gkdv", "--k", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("balanced"), "{}", stderr_of(&out));
}

#[test]
fn verify_is_deterministic_for_a_seed() {
    let first = krein_bin(&["verify", "--seed", "7"]);
    let second = krein_bin(&["verify", "--seed", "7"]);
    assert_eq!(first.status.code(), Some(0), "stderr: {}", stderr_of(&first));
    assert_eq!(second.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout, "same seed, same bytes");
    let text = stdout_of(&first);
    assert!(text.contains("seed: 7"), "{text}");
    assert!(text.ends_with("verify: PASS\n"), "{text}");
}

#[test]
fn verify_detects_injected_corruption() {
    let out = krein_bin(&["verify", "--seed", "7", "--inject-s3-sign-flip"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout_of(&out);
    assert!(text.contains("injected corruption: detected"), "{text}");
    assert!(
        text.contains("separation identity fails at dn=2"),
        "counterexample missing: {text}"
    );
    assert!(text.ends_with("verify: FAIL\n"), "{text}");
}

#[test]
fn lemmas_pass_and_name_every_group() {
    let out = krein_bin(&["lemmas", "--m-max", "15"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    for group in [
        "scalar-bounds",
        "step-bounds",
        "weighted-combination",
        "monotone-sequences",
        "ratio-functions",
    ] {
        assert!(text.contains(&format!("group {group}: PASS")), "{text}");
    }
    assert!(text.ends_with("lemmas: PASS\n"), "{text}");
}

#[test]
fn usage_errors_exit_two() {
    let cases: &[&[&str]] = &[
        // Missing family parameter.
        &["classify", "--family", "balanced", "--q", "1", "--beta", "0.3"],
        // Unknown family.
        &["classify", "--family", "nosuch", "--k", "1"],
        // Missing branch index.
        &["classify", "--family", "gkdv"],
        // Parameter from another family.
        &["classify", "--family", "gkdv", "--k", "1", "--beta", "0.3"],
        // Branch zero has no bifurcation speed.
        &["classify", "--family", "gkdv", "--k", "0"],
        // Unknown flag (clap-level).
        &["classify", "--nope"],
        // No subcommand at all.
        &[],
    ];
    for args in cases {
        let out = krein_bin(args);
        assert_eq!(out.status.code(), Some(2), "args {args:?}: {}", stderr_of(&out));
    }
}

#[test]
fn config_file_supplies_model_and_flags_override_the_rest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# model under test\nfamily = gkdv\nk = 2\n\ndn-max = 10\n").unwrap();

    let out = krein_bin(&["classify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("dn-max: 10"), "{text}");
    assert!(text.contains("Hopf candidates at dn = 3"), "{text}");

    // A non-model flag overrides the same key from the file.
    let out = krein_bin(&[
        "classify", "--config", cfg.to_str().unwrap(), "--dn-max", "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("dn-max: 4"), "{text}");
    assert!(text.contains("Hopf candidates at dn = 3"), "{text}");
}

#[test]
fn config_file_model_conflicts_with_model_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "family = gkdv\nk = 2\n").unwrap();
    let out = krein_bin(&[
        "classify", "--config", cfg.to_str().unwrap(), "--family", "gkdv", "--k", "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr_of(&out).contains("exactly one source"),
        "{}",
        stderr_of(&out)
    );
}

#[test]
fn config_file_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "familly = gkdv\n").unwrap();
    let out = krein_bin(&["classify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("unknown key"), "{}", stderr_of(&out));
}

#[test]
fn custom_family_matches_gkdv() {
    // omega(x) = x^3 written as a raw coefficient list reproduces gkdv.
    let custom = krein_bin(&[
        "spectrum", "--family", "custom", "--alpha-coeffs", "0,1", "--k", "2", "--mu", "0.25",
        "--n-window", "5",
    ]);
    let gkdv = krein_bin(&[
        "spectrum", "--family", "gkdv", "--k", "2", "--mu", "0.25", "--n-window", "5",
    ]);
    assert_eq!(custom.status.code(), Some(0), "stderr: {}", stderr_of(&custom));
    assert_eq!(custom.stdout, gkdv.stdout);
}

#[test]
fn json_spectrum_and_region_parse() {
    let out = krein_bin(&[
        "spectrum", "--family", "gkdv", "--k", "1", "--mu", "0.1,0.3", "--n-window", "3",
        "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["slices"].as_array().unwrap().len(), 2);
    assert_eq!(doc["slices"][0]["entries"].as_array().unwrap().len(), 7);

    let out = krein_bin(&[
        "region", "--family", "balanced", "--p", "2", "--q", "1", "--dn-max", "3",
        "--beta-steps", "5", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["grid"].as_array().unwrap().len(), 15);
    assert_eq!(doc["thresholds"].as_array().unwrap().len(), 3);
}
