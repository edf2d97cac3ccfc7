//! The five subcommands.

use std::fmt::Write as _;

use krein::dispersion::ComovingDispersion;
use krein::identities::run_all;
use krein::models::{balanced_classify, balanced_thresholds, BalancedModel, Regime};
use krein::oracle::{
    cross_check_collisions, kdv_subharmonic_check, spectrum_slice, verify_reduction,
    verify_reduction_against,
};
use krein::rat::{rat, rat_int, to_f64};
use krein::reduction::{build_reduced, collision_report, CollisionRecord};
use krein::spoly::s_poly;
use krein::Rat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::config::{balanced_exponents, build_model, Format, Model, Resolved};
use crate::fmt::{emit, round_trip, short, thresholds_path};

// ---------------------------------------------------------------------------
// classify

pub fn classify(cfg: &Resolved) -> Result<i32, String> {
    let model = build_model(&cfg.model)?;
    let cd = model.dispersion();
    let mut by_dn: Vec<(u32, Vec<CollisionRecord>)> = Vec::new();
    for dn in 1..=cfg.dn_max {
        let report = collision_report(&cd, dn, cfg.tol).map_err(|e| e.to_string())?;
        by_dn.push((dn, report));
    }
    let candidates: Vec<u32> = by_dn
        .iter()
        .filter(|(_, records)| records.iter().any(|r| r.hopf_candidate))
        .map(|(dn, _)| *dn)
        .collect();
    let verdict = verdict_line(&candidates, cfg.dn_max);
    let content = match cfg.format {
        None => classify_text(&model, &cd, cfg, &by_dn, &verdict),
        Some(Format::Csv) => classify_csv(&by_dn),
        Some(Format::Json) => classify_json(&model, &cd, cfg, &by_dn, &candidates, &verdict),
    };
    emit(&cfg.out, &content)?;
    Ok(0)
}

fn verdict_line(candidates: &[u32], dn_max: u32) -> String {
    if candidates.is_empty() {
        format!(
            "no opposite-signature collisions with nonzero eigenvalue for dn <= {dn_max} \
             (high-frequency spectrally stable at onset)"
        )
    } else {
        let list: Vec<String> = candidates.iter().map(u32::to_string).collect();
        format!(
            "Hopf candidates at dn = {}: opposite-signature collisions \
             (necessary, not sufficient, for instability)",
            list.join(", ")
        )
    }
}

fn record_line(r: &CollisionRecord) -> String {
    let mut line = format!("dn={}  gamma={}", r.dn, short(r.gamma));
    if let Some(exact) = &r.gamma_exact {
        write!(line, " (exact {exact})").unwrap();
    }
    write!(line, "  class={}", r.class).unwrap();
    if r.class != r.gamma_class {
        write!(line, " (root location: {})", r.gamma_class).unwrap();
    }
    match r.mu_pair {
        Some((a, b)) => write!(line, "  pair=({}, {})", short(a), short(b)).unwrap(),
        None => write!(line, "  pair=none").unwrap(),
    }
    match r.lambda_im {
        Some(l) => write!(line, "  lambda_im={}", short(l)).unwrap(),
        None => write!(line, "  lambda_im=none").unwrap(),
    }
    match r.krein_product {
        Some(s) => write!(line, "  krein={s:+}").unwrap(),
        None => write!(line, "  krein=none").unwrap(),
    }
    write!(line, "  hopf={}", if r.hopf_candidate { "yes" } else { "no" }).unwrap();
    line
}

fn classify_text(
    model: &Model,
    cd: &ComovingDispersion,
    cfg: &Resolved,
    by_dn: &[(u32, Vec<CollisionRecord>)],
    verdict: &str,
) -> String {
    let coeffs: Vec<String> = cd.coeffs().iter().map(Rat::to_string).collect();
    let mut s = String::new();
    writeln!(s, "model: {}", model.describe()).unwrap();
    writeln!(s, "comoving coefficients: [{}]", coeffs.join(", ")).unwrap();
    writeln!(s, "speed: {}", cd.speed()).unwrap();
    writeln!(s, "dn-max: {}, tolerance: {:e}", cfg.dn_max, cfg.tol).unwrap();
    writeln!(s).unwrap();
    for (dn, records) in by_dn {
        if records.is_empty() {
            writeln!(s, "dn={dn}  (no real roots)").unwrap();
        }
        for r in records {
            writeln!(s, "{}", record_line(r)).unwrap();
        }
    }
    writeln!(s).unwrap();
    writeln!(s, "verdict: {verdict}").unwrap();
    s
}

fn classify_csv(by_dn: &[(u32, Vec<CollisionRecord>)]) -> String {
    let mut s = String::from(
        "dn,gamma,gamma_exact,gamma_class,class,mu1,mu2,lambda_im,krein_product,hopf_candidate\n",
    );
    for (_, records) in by_dn {
        for r in records {
            let exact = r.gamma_exact.as_ref().map(Rat::to_string).unwrap_or_default();
            let (mu1, mu2) = match r.mu_pair {
                Some((a, b)) => (round_trip(a), round_trip(b)),
                None => (String::new(), String::new()),
            };
            let lambda = r.lambda_im.map(round_trip).unwrap_or_default();
            let krein = r.krein_product.map(|k| k.to_string()).unwrap_or_default();
            writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{}",
                r.dn,
                round_trip(r.gamma),
                exact,
                r.gamma_class,
                r.class,
                mu1,
                mu2,
                lambda,
                krein,
                r.hopf_candidate
            )
            .unwrap();
        }
    }
    s
}

fn classify_json(
    model: &Model,
    cd: &ComovingDispersion,
    cfg: &Resolved,
    by_dn: &[(u32, Vec<CollisionRecord>)],
    candidates: &[u32],
    verdict: &str,
) -> String {
    let records: Vec<serde_json::Value> = by_dn
        .iter()
        .flat_map(|(_, records)| records.iter())
        .map(|r| {
            json!({
                "dn": r.dn,
                "gamma": r.gamma,
                "gamma_exact": r.gamma_exact.as_ref().map(Rat::to_string),
                "gamma_class": r.gamma_class.to_string(),
                "class": r.class.to_string(),
                "mu_pair": r.mu_pair.map(|(a, b)| vec![a, b]),
                "lambda_im": r.lambda_im,
                "krein_product": r.krein_product,
                "hopf_candidate": r.hopf_candidate,
            })
        })
        .collect();
    let coeffs: Vec<String> = cd.coeffs().iter().map(Rat::to_string).collect();
    let doc = json!({
        "model": model.describe(),
        "comoving_coefficients": coeffs,
        "speed": cd.speed().to_string(),
        "dn_max": cfg.dn_max,
        "tol": cfg.tol,
        "records": records,
        "hopf_candidates": candidates,
        "verdict": verdict,
    });
    serde_json::to_string_pretty(&doc).unwrap() + "\n"
}

// ---------------------------------------------------------------------------
// spectrum

pub fn spectrum(cfg: &Resolved) -> Result<i32, String> {
    let model = build_model(&cfg.model)?;
    let cd = model.dispersion();
    let mut slices = Vec::new();
    for &mu in &cfg.mu {
        slices.push(spectrum_slice(&cd, mu, cfg.n_window).map_err(|e| e.to_string())?);
    }
    let content = match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("mu_tilde,n,lambda_im\n");
            for slice in &slices {
                for (n, lam) in &slice.entries {
                    writeln!(
                        s,
                        "{},{},{}",
                        round_trip(slice.mu_tilde),
                        n,
                        round_trip(*lam)
                    )
                    .unwrap();
                }
            }
            s
        }
        Format::Json => {
            let arr: Vec<serde_json::Value> = slices
                .iter()
                .map(|sl| {
                    json!({
                        "mu_tilde": sl.mu_tilde,
                        "entries": sl
                            .entries
                            .iter()
                            .map(|(n, lam)| json!({"n": n, "lambda_im": lam}))
                            .collect::<Vec<_>>(),
                    })
                })
                .collect();
            let doc = json!({"model": model.describe(), "slices": arr});
            serde_json::to_string_pretty(&doc).unwrap() + "\n"
        }
    };
    emit(&cfg.out, &content)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// region

pub fn region(cfg: &Resolved) -> Result<i32, String> {
    let (p, q) = balanced_exponents(&cfg.model)?;
    let steps = cfg.beta_steps;
    let betas: Vec<Rat> = (1..=steps).map(|j| rat(j as i64, steps as i64)).collect();
    let models: Vec<BalancedModel> = betas
        .iter()
        .map(|b| BalancedModel::new(p, q, b.clone()))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;

    let mut grid_rows: Vec<(u32, &Rat, Regime)> = Vec::new();
    for dn in 1..=cfg.dn_max {
        for (beta, model) in betas.iter().zip(&models) {
            let regime = balanced_classify(model, dn).map_err(|e| e.to_string())?;
            grid_rows.push((dn, beta, regime));
        }
    }
    let thresholds: Vec<_> = (1..=cfg.dn_max)
        .map(|dn| balanced_thresholds(p, q, dn))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;

    match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut grid = String::from("dn,beta,regime\n");
            for (dn, beta, regime) in &grid_rows {
                writeln!(grid, "{},{},{}", dn, round_trip(to_f64(beta)), regime).unwrap();
            }
            let mut th = String::from("dn,beta0,beta_quarter\n");
            for t in &thresholds {
                writeln!(
                    th,
                    "{},{},{}",
                    t.dn,
                    round_trip(to_f64(&t.beta0)),
                    round_trip(to_f64(&t.beta_quarter))
                )
                .unwrap();
            }
            match &cfg.out {
                Some(path) => {
                    emit(&Some(path.clone()), &grid)?;
                    emit(&Some(thresholds_path(path)), &th)?;
                }
                None => print!("{grid}\n{th}"),
            }
        }
        Format::Json => {
            let grid_json: Vec<serde_json::Value> = grid_rows
                .iter()
                .map(|(dn, beta, regime)| {
                    json!({"dn": dn, "beta": to_f64(beta), "regime": regime.to_string()})
                })
                .collect();
            let th_json: Vec<serde_json::Value> = thresholds
                .iter()
                .map(|t| {
                    json!({
                        "dn": t.dn,
                        "beta0": to_f64(&t.beta0),
                        "beta_quarter": to_f64(&t.beta_quarter),
                    })
                })
                .collect();
            let doc = json!({
                "family": format!("balanced (p = {p}, q = {q})"),
                "grid": grid_json,
                "thresholds": th_json,
            });
            emit(&cfg.out, &(serde_json::to_string_pretty(&doc).unwrap() + "\n"))?;
        }
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// verify

fn random_dispersion(
    rng: &mut ChaCha8Rng,
    num_bound: i64,
    den_bound: i64,
) -> ComovingDispersion {
    let top = rng.gen_range(1..=5usize);
    let mut coeffs = Vec::with_capacity(top + 1);
    for j in 0..=top {
        let mut num = rng.gen_range(-num_bound..=num_bound);
        if j == top {
            while num == 0 {
                num = rng.gen_range(-num_bound..=num_bound);
            }
        }
        coeffs.push(rat(num, rng.gen_range(1..=den_bound)));
    }
    ComovingDispersion::from_coeffs(coeffs)
}

pub fn verify(cfg: &Resolved) -> Result<i32, String> {
    let mut failed = false;
    let mut out = String::new();
    writeln!(out, "seed: {}", cfg.seed).unwrap();

    if cfg.inject_s3_sign_flip {
        // Fixture: hand the verifier a reduced polynomial whose cubic
        // recurrence term has the wrong sign. A healthy verifier must
        // reject it, and the run reports failure either way.
        let cd = krein::models::gkdv_dispersion(rat_int(1), 1).map_err(|e| e.to_string())?;
        let dn = 2u32;
        let truth = build_reduced(&cd, dn).map_err(|e| e.to_string())?;
        let s3 = s_poly(3).map_err(|e| e.to_string())?;
        // Flipping the sign of the cubic term subtracts it twice:
        // eta_1 * dn^3 = 8, so the correction is 16 * s_3.
        let corrupted = truth.poly() - &s3.poly().scale(&rat_int(16));
        let samples = [rat(1, 3), rat(-2, 5), rat(7, 4)];
        match verify_reduction_against(&cd, dn, &corrupted, &samples) {
            Err(e) => {
                writeln!(out, "[verify] injected corruption: detected ({e})").unwrap();
            }
            Ok(()) => {
                writeln!(
                    out,
                    "[verify] injected corruption: NOT detected (verifier is unsound)"
                )
                .unwrap();
            }
        }
        failed = true;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    // Separation identity, exact arithmetic, random ensemble.
    let mut identity_fail: Option<String> = None;
    for _ in 0..100 {
        let cd = random_dispersion(&mut rng, 9, 9);
        let dn = rng.gen_range(1..=8u32);
        let mus: Vec<Rat> = (0..3)
            .map(|_| rat(rng.gen_range(-20..=20), rng.gen_range(1..=12)))
            .collect();
        if let Err(e) = verify_reduction(&cd, dn, &mus) {
            identity_fail = Some(e.to_string());
            break;
        }
    }
    match identity_fail {
        None => writeln!(
            out,
            "[verify] separation identity: 100 random dispersion relations, 3 exact samples each: ok"
        )
        .unwrap(),
        Some(e) => {
            failed = true;
            writeln!(out, "[verify] separation identity: FAILED ({e})").unwrap();
        }
    }

    // Reduced roots against a brute-force spectral scan.
    let mut matched = 0usize;
    let mut outside = 0usize;
    let mut cross_fail: Option<String> = None;
    for case in 0..6 {
        let cd = random_dispersion(&mut rng, 3, 3);
        match cross_check_collisions(&cd, 8, 2000, 1e-8, 1e-8) {
            Err(e) => {
                cross_fail = Some(format!("case {case}: {e}"));
                break;
            }
            Ok(check) => {
                if !check.unmatched_brute.is_empty() || !check.unmatched_records.is_empty() {
                    cross_fail = Some(format!(
                        "case {case}: {} scan hits without a reduced root, {} reduced roots the scan missed",
                        check.unmatched_brute.len(),
                        check.unmatched_records.len()
                    ));
                    break;
                }
                matched += check.matched;
                outside += check.uncovered_records.len();
            }
        }
    }
    match cross_fail {
        None => writeln!(
            out,
            "[verify] collision cross-check: 6 random dispersion relations \
             (window 8, resolution 2000): ok (matched {matched}, outside window {outside})"
        )
        .unwrap(),
        Some(e) => {
            failed = true;
            writeln!(out, "[verify] collision cross-check: FAILED ({e})").unwrap();
        }
    }

    // Period-doubling identity across the exponent range.
    let mut doubling_fail: Option<String> = None;
    for j in 1..=24 {
        let mu = -0.5 + j as f64 / 24.0;
        match kdv_subharmonic_check(mu, 20, 1e-10) {
            Ok(true) => {}
            Ok(false) => {
                doubling_fail = Some(format!("multiset mismatch at mu_tilde = {mu}"));
                break;
            }
            Err(e) => {
                doubling_fail = Some(e.to_string());
                break;
            }
        }
    }
    match doubling_fail {
        None => writeln!(
            out,
            "[verify] period-doubling identity: 24 exponents (window 20): ok"
        )
        .unwrap(),
        Some(e) => {
            failed = true;
            writeln!(out, "[verify] period-doubling identity: FAILED ({e})").unwrap();
        }
    }

    // Exact inequality groups.
    let m_max = cfg.m_max.unwrap_or(12);
    let reports = run_all(m_max);
    let bad: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| {
            let first = &r.violations[0];
            format!("{} at {} (lhs {}, rhs {})", r.lemma_id, first.params, first.lhs, first.rhs)
        })
        .collect();
    if bad.is_empty() {
        writeln!(
            out,
            "[verify] inequality groups through index {m_max}: ok ({} groups)",
            reports.len()
        )
        .unwrap();
    } else {
        failed = true;
        writeln!(out, "[verify] inequality groups: FAILED ({})", bad.join("; ")).unwrap();
    }

    writeln!(out, "verify: {}", if failed { "FAIL" } else { "PASS" }).unwrap();
    emit(&cfg.out, &out)?;
    Ok(if failed { 1 } else { 0 })
}

// ---------------------------------------------------------------------------
// lemmas

pub fn lemmas(cfg: &Resolved) -> Result<i32, String> {
    let m_max = cfg.m_max.unwrap_or(50);
    let reports = run_all(m_max);
    let all_ok = reports.iter().all(|r| r.passed());
    let content = match cfg.format {
        None => {
            let mut s = String::new();
            for r in &reports {
                if r.passed() {
                    writeln!(s, "group {}: PASS ({})", r.lemma_id, r.domain_sampled).unwrap();
                } else {
                    let first = &r.violations[0];
                    writeln!(
                        s,
                        "group {}: FAIL ({} violations; first at {} with lhs {} vs rhs {})",
                        r.lemma_id,
                        r.violations.len(),
                        first.params,
                        first.lhs,
                        first.rhs
                    )
                    .unwrap();
                }
            }
            writeln!(s, "lemmas: {}", if all_ok { "PASS" } else { "FAIL" }).unwrap();
            s
        }
        Some(Format::Csv) => {
            let mut s = String::from("group,passed,violations\n");
            for r in &reports {
                writeln!(s, "{},{},{}", r.lemma_id, r.passed(), r.violations.len()).unwrap();
            }
            s
        }
        Some(Format::Json) => {
            let arr: Vec<serde_json::Value> = reports
                .iter()
                .map(|r| {
                    json!({
                        "group": r.lemma_id.to_string(),
                        "domain": r.domain_sampled,
                        "passed": r.passed(),
                        "violations": r.violations.len(),
                    })
                })
                .collect();
            let doc = json!({"m_max": m_max, "groups": arr, "passed": all_ok});
            serde_json::to_string_pretty(&doc).unwrap() + "\n"
        }
    };
    emit(&cfg.out, &content)?;
    Ok(if all_ok { 0 } else { 1 })
}
