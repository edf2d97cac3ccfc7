//! Brute-force spectral verification, independent of the reduction
//! machinery.
//!
//! The zero-amplitude spectrum is explicit: at Floquet exponent `mt` the
//! eigenvalues are `lambda = -i W(n + mt)` over integers `n`. Everything
//! here works on that formula directly: scanning for collisions on a dense
//! `mt` grid, spot-checking the reduction identity in exact arithmetic, and
//! checking the period-doubling spectrum identity for the cubic family.
//! None of it consults the recurrent-polynomial machinery, which is what
//! makes agreement between the two paths evidence.

use crate::dispersion::ComovingDispersion;
use crate::error::{Error, Result};
use crate::poly::RatPoly;
use crate::rat::{rat_int, Rat};
use crate::reduction::{self, build_reduced};

/// One Floquet slice of the zero-amplitude spectrum over a finite index
/// window, as pairs `(n, lambda_im)` sorted by `n`.
#[derive(Debug, Clone)]
pub struct SpectrumSlice {
    pub mu_tilde: f64,
    pub entries: Vec<(i64, f64)>,
}

/// Evaluates the spectrum slice at `mu_tilde` for `|n| <= n_window`.
/// A negative window produces an empty slice.
pub fn spectrum_slice(
    cd: &ComovingDispersion,
    mu_tilde: f64,
    n_window: i64,
) -> Result<SpectrumSlice> {
    check_mu_tilde(mu_tilde)?;
    let mut entries = Vec::new();
    if n_window >= 0 {
        for n in -n_window..=n_window {
            entries.push((n, cd.floquet_eigenvalue(n, mu_tilde).lambda_im));
        }
    }
    Ok(SpectrumSlice { mu_tilde, entries })
}

fn check_mu_tilde(mu_tilde: f64) -> Result<()> {
    if !(mu_tilde > -0.5 && mu_tilde <= 0.5) {
        return Err(Error::InvalidInput(format!(
            "Floquet exponent {mu_tilde} outside (-1/2, 1/2]"
        )));
    }
    Ok(())
}

/// A collision found by direct scanning: two spectrum branches `n1 < n2`
/// crossing at the same eigenvalue.
///
/// `lambda_im` is evaluated on the `n1` branch at the refined crossing;
/// the residual between the two branches is at the floating-point noise
/// floor of evaluating the dispersion at that magnitude. `matched_gamma`
/// is `(n1 + mt)(n2 + mt) / (n2 - n1)^2`, the quantity a reduced-polynomial
/// root predicts.
#[derive(Debug, Clone)]
pub struct BruteCollision {
    pub mu_tilde: f64,
    pub n1: i64,
    pub n2: i64,
    pub lambda_im: f64,
    pub kappa1: i8,
    pub kappa2: i8,
    pub matched_gamma: f64,
}

/// Scans all branch pairs in `|n| <= n_window` for collisions, bisecting
/// each detected sign change of the branch difference to floating-point
/// precision. Collisions with `|lambda| <= tol` (origin crossings) are
/// excluded. The scan covers `mt` in `(-1/2, 1/2]` with `resolution`
/// steps per unit; `resolution` below 1000 is rejected.
pub fn brute_collisions(
    cd: &ComovingDispersion,
    n_window: i64,
    resolution: u32,
    tol: f64,
) -> Result<Vec<BruteCollision>> {
    if resolution < 1000 {
        return Err(Error::InvalidInput(format!(
            "grid resolution {resolution} below the minimum of 1000"
        )));
    }
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "tolerance {tol} must be positive"
        )));
    }
    if cd.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = Vec::new();
    if n_window < 0 {
        return Ok(out);
    }
    let w = n_window;
    let res = resolution as usize;
    let step = 1.0 / resolution as f64;
    let count = (2 * w + 1) as usize;
    // Branch values over the closed grid; index 0 sits at mt = -1/2, which
    // anchors sign changes but is never itself reported (that exponent is
    // represented by +1/2 of the shifted pair).
    let mut vals = vec![vec![0.0f64; res + 1]; count];
    for (i, row) in vals.iter_mut().enumerate() {
        let n = i as i64 - w;
        for (j, v) in row.iter_mut().enumerate() {
            *v = cd.eval_f64(n as f64 + (-0.5 + j as f64 * step));
        }
    }
    for i1 in 0..count {
        for i2 in i1 + 1..count {
            let (n1, n2) = (i1 as i64 - w, i2 as i64 - w);
            for j in 1..=res {
                let d_prev = vals[i1][j - 1] - vals[i2][j - 1];
                let d = vals[i1][j] - vals[i2][j];
                let crossing = if d == 0.0 {
                    Some(-0.5 + j as f64 * step)
                } else if d_prev != 0.0 && (d_prev < 0.0) != (d < 0.0) {
                    Some(bisect_pair(
                        cd,
                        n1,
                        n2,
                        -0.5 + (j - 1) as f64 * step,
                        -0.5 + j as f64 * step,
                        d_prev,
                    ))
                } else {
                    None
                };
                let Some(mt) = crossing else { continue };
                let x1 = n1 as f64 + mt;
                let x2 = n2 as f64 + mt;
                let lambda_im = -cd.eval_f64(x1);
                if lambda_im.abs() <= tol {
                    continue;
                }
                let kappa1 = cd.krein_signature(x1)?;
                let kappa2 = cd.krein_signature(x2)?;
                let dn = (n2 - n1) as f64;
                out.push(BruteCollision {
                    mu_tilde: mt,
                    n1,
                    n2,
                    lambda_im,
                    kappa1,
                    kappa2,
                    matched_gamma: x1 * x2 / (dn * dn),
                });
            }
        }
    }
    Ok(out)
}

fn bisect_pair(
    cd: &ComovingDispersion,
    n1: i64,
    n2: i64,
    mut lo: f64,
    mut hi: f64,
    mut flo: f64,
) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = cd.eval_f64(n1 as f64 + mid) - cd.eval_f64(n2 as f64 + mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Exact spot check of the separation identity: for every sample `mu`,
/// `W(mu + dn) - W(mu)` must equal `claimed(g)` with
/// `g = mu (mu + dn) / dn^2`, in rational arithmetic. The first failing
/// sample is returned as the error.
pub fn verify_reduction_against(
    cd: &ComovingDispersion,
    dn: u32,
    claimed: &RatPoly,
    mu_samples: &[Rat],
) -> Result<()> {
    if dn == 0 {
        return Err(Error::InvalidInput("separation dn must be positive".into()));
    }
    let dn_rat = rat_int(dn as i64);
    let dn_sq = &dn_rat * &dn_rat;
    for mu in mu_samples {
        let shifted = mu + &dn_rat;
        let lhs = cd.eval(&shifted) - cd.eval(mu);
        let gamma = mu * &shifted / &dn_sq;
        let rhs = claimed.eval(&gamma);
        if lhs != rhs {
            return Err(Error::Verification(format!(
                "separation identity fails at dn={dn}, mu={mu}: \
                 direct difference {lhs} but reduced value {rhs}"
            )));
        }
    }
    Ok(())
}

/// Exact spot check of the separation identity against the reduced
/// polynomial built by the library itself.
pub fn verify_reduction(cd: &ComovingDispersion, dn: u32, mu_samples: &[Rat]) -> Result<()> {
    let reduced = build_reduced(cd, dn)?;
    verify_reduction_against(cd, dn, reduced.poly(), mu_samples)
}

/// Checks the period-doubling identity for the cubic family: one eighth of
/// the `k = 2` slice at `mu_tilde` equals the union of the two `k = 1`
/// slices at `mu_tilde / 2` and `mu_tilde / 2 + 1/2`, as multisets.
///
/// The comparison runs over truncated windows, so containment of the
/// scaled left slice is checked in full while the converse direction
/// excludes indices within 2 of where the finite window stops covering
/// the union.
pub fn kdv_subharmonic_check(mu_tilde: f64, n_window: i64, tol: f64) -> Result<bool> {
    subharmonic_check_scaled(2, mu_tilde, n_window, tol)
}

/// Experimental generalization to arbitrary branch `k >= 2`: compares
/// `1/k^3` of the `k` slice against the union of `k` base slices at
/// `(mu_tilde + j) / k`. Same windowing rules as the `k = 2` check.
pub fn kdv_subharmonic_check_general(
    k: u32,
    mu_tilde: f64,
    n_window: i64,
    tol: f64,
) -> Result<bool> {
    if k < 2 {
        return Err(Error::InvalidInput("branch k must be at least 2".into()));
    }
    subharmonic_check_scaled(k, mu_tilde, n_window, tol)
}

fn subharmonic_check_scaled(k: u32, mu_tilde: f64, n_window: i64, tol: f64) -> Result<bool> {
    check_mu_tilde(mu_tilde)?;
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "tolerance {tol} must be positive"
        )));
    }
    if n_window < k as i64 {
        return Err(Error::InvalidInput(
            "window too small to compare the slices".into(),
        ));
    }
    let kk = k as i64;
    let base = ComovingDispersion::from_coeffs(vec![rat_int(-1), rat_int(1)]);
    let scaled = ComovingDispersion::from_coeffs(vec![rat_int(-(kk * kk)), rat_int(1)]);
    let scale = (kk * kk * kk) as f64;

    let left: Vec<f64> = spectrum_slice(&scaled, mu_tilde, n_window)?
        .entries
        .iter()
        .map(|&(_, lam)| lam / scale)
        .collect();

    let mut right_all = Vec::new();
    let mut right_interior = Vec::new();
    // Indices this far inside the base window are guaranteed to have their
    // counterpart inside the scaled window.
    let interior_limit = (n_window - 1) / kk - 2;
    for j in 0..kk {
        let mu_j = normalize_mu((mu_tilde + j as f64) / k as f64);
        let slice = spectrum_slice(&base, mu_j, n_window)?;
        for (n, lam) in slice.entries {
            right_all.push(lam);
            if n.abs() <= interior_limit {
                right_interior.push(lam);
            }
        }
    }
    Ok(multiset_covered(&left, &right_all, tol)
        && multiset_covered(&right_interior, &left, tol))
}

/// Shifts a real number into the Floquet window `(-1/2, 1/2]`.
fn normalize_mu(x: f64) -> f64 {
    x - (x - 0.5).ceil()
}

/// Whether every element of `a` can be matched to a distinct element of
/// `b` within `tol`. Greedy matching on sorted copies, which is optimal
/// for interval bipartite matching.
fn multiset_covered(a: &[f64], b: &[f64], tol: f64) -> bool {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(|x, y| x.partial_cmp(y).unwrap());
    b.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let mut j = 0;
    for x in &a {
        while j < b.len() && b[j] < x - tol {
            j += 1;
        }
        if j >= b.len() || b[j] > x + tol {
            return false;
        }
        j += 1;
    }
    true
}

/// Outcome of reconciling brute-force collisions with reduced-polynomial
/// roots over a shared window.
#[derive(Debug, Clone)]
pub struct CrossCheck {
    /// Brute collisions that matched a reduced root.
    pub matched: usize,
    /// Brute collisions with no reduced root within `gamma_tol`.
    pub unmatched_brute: Vec<BruteCollision>,
    /// Reduced roots `(dn, gamma)` with an in-window real pair and nonzero
    /// eigenvalue that no brute collision reproduced.
    pub unmatched_records: Vec<(u32, f64)>,
    /// Reduced roots whose real pair falls outside the scanned window;
    /// reported honestly rather than counted as absent.
    pub uncovered_records: Vec<(u32, f64)>,
}

/// Runs both directions of the oracle comparison: every brute collision
/// must correspond to a reduced-polynomial root (match on the collision
/// invariant `gamma`), and every reduced root with a real, in-window,
/// nonzero-eigenvalue pair must be found by the scan.
pub fn cross_check_collisions(
    cd: &ComovingDispersion,
    n_window: i64,
    resolution: u32,
    tol: f64,
    gamma_tol: f64,
) -> Result<CrossCheck> {
    if n_window < 1 {
        return Err(Error::InvalidInput("window must be at least 1".into()));
    }
    if !gamma_tol.is_finite() || gamma_tol <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "gamma tolerance {gamma_tol} must be positive"
        )));
    }
    let brute = brute_collisions(cd, n_window, resolution, tol)?;
    let mut records: Vec<(u32, reduction::CollisionRecord)> = Vec::new();
    for dn in 1..=(2 * n_window) as u32 {
        for rec in reduction::collision_report(cd, dn, tol)? {
            records.push((dn, rec));
        }
    }

    let mut matched = 0;
    let mut unmatched_brute = Vec::new();
    for b in &brute {
        let dn = (b.n2 - b.n1) as u32;
        let hit = records.iter().any(|(rdn, rec)| {
            *rdn == dn
                && rec.mu_pair.is_some()
                && (rec.gamma - b.matched_gamma).abs() <= gamma_tol
        });
        if hit {
            matched += 1;
        } else {
            unmatched_brute.push(b.clone());
        }
    }

    let mut unmatched_records = Vec::new();
    let mut uncovered_records = Vec::new();
    for (dn, rec) in &records {
        let Some((x1, _)) = rec.mu_pair else { continue };
        if rec.lambda_im.is_none_or(|l| l.abs() <= tol) {
            continue;
        }
        let n1 = (x1 - 0.5).ceil() as i64;
        let in_window = n1 >= -n_window && n1 + *dn as i64 <= n_window;
        if !in_window {
            uncovered_records.push((*dn, rec.gamma));
            continue;
        }
        let found = brute.iter().any(|b| {
            (b.n2 - b.n1) as u32 == *dn && (b.matched_gamma - rec.gamma).abs() <= gamma_tol
        });
        if !found {
            unmatched_records.push((*dn, rec.gamma));
        }
    }

    Ok(CrossCheck {
        matched,
        unmatched_brute,
        unmatched_records,
        uncovered_records,
    })
}
