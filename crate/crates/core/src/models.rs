//! Named dispersion families and the balanced-model regime map.
//!
//! Three families cover the standard examples: the generalized KdV cubic
//! `w(x) = a x^3`, its higher-order relatives `w(x) = (-1)^(p+1) a x^(2p+1)`,
//! and the two-term balanced family `w(x) = -x^(2q+1) + b x^(2p+1)` whose
//! stability regimes trade off the two dispersive scales through `b`.
//! Everything downstream of the constructors is exact rational arithmetic.

use num::traits::{One, Signed, Zero};

use crate::dispersion::{ComovingDispersion, DispersionRelation};
use crate::error::{Error, Result};
use crate::rat::{pow_u, rat, rat_int, two_pow, Rat};
use crate::reduction::{self, CollisionClass, CollisionRecord};

/// Generalized KdV family: lab dispersion `w(x) = a x^3`.
#[derive(Debug, Clone)]
pub struct GkdvModel {
    alpha: Rat,
    k: u32,
}

impl GkdvModel {
    pub fn new(alpha: Rat, k: u32) -> Result<Self> {
        if alpha.is_zero() {
            return Err(Error::InvalidInput(
                "dispersion coefficient alpha must be nonzero".into(),
            ));
        }
        if k == 0 {
            return Err(Error::InvalidInput("branch index k must be positive".into()));
        }
        Ok(Self { alpha, k })
    }

    pub fn alpha(&self) -> &Rat {
        &self.alpha
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn lab_dispersion(&self) -> DispersionRelation {
        DispersionRelation::new(vec![Rat::zero(), self.alpha.clone()])
            .expect("nonzero cubic coefficient")
    }

    /// Comoving dispersion on the branch of `2 pi / k`-periodic waves.
    pub fn dispersion(&self) -> ComovingDispersion {
        self.lab_dispersion()
            .at_branch(self.k)
            .expect("positive branch index")
    }
}

/// Comoving generalized KdV dispersion at branch `k`.
pub fn gkdv_dispersion(alpha: Rat, k: u32) -> Result<ComovingDispersion> {
    Ok(GkdvModel::new(alpha, k)?.dispersion())
}

/// The collision root for the generalized KdV family at separation `dn`:
/// `g = (k^2 / dn^2 - 1) / 3`, independent of `a`.
pub fn gkdv_gamma(k: u32, dn: u32) -> Result<Rat> {
    if k == 0 || dn == 0 {
        return Err(Error::InvalidInput("k and dn must be positive".into()));
    }
    let k2 = rat_int((k as i64) * (k as i64));
    let dn2 = rat_int((dn as i64) * (dn as i64));
    Ok((k2 / dn2 - Rat::one()) / rat_int(3))
}

/// Separations with an opposite-signature collision on the generalized KdV
/// branch `k`: the integers strictly between `k` and `2k`.
pub fn gkdv_band(k: u32) -> Vec<u32> {
    (k + 1..2 * k).collect()
}

/// Higher-order family: lab dispersion `w(x) = (-1)^(p+1) a x^(2p+1)`.
#[derive(Debug, Clone)]
pub struct HigherGkdvModel {
    p: u32,
    alpha: Rat,
    k: u32,
}

impl HigherGkdvModel {
    pub fn new(p: u32, alpha: Rat, k: u32) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidInput("half-order p must be positive".into()));
        }
        if alpha.is_zero() {
            return Err(Error::InvalidInput(
                "dispersion coefficient alpha must be nonzero".into(),
            ));
        }
        if k == 0 {
            return Err(Error::InvalidInput("branch index k must be positive".into()));
        }
        Ok(Self { p, alpha, k })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn lab_dispersion(&self) -> DispersionRelation {
        let mut coeffs = vec![Rat::zero(); self.p as usize + 1];
        let signed = if self.p % 2 == 1 {
            self.alpha.clone()
        } else {
            -self.alpha.clone()
        };
        coeffs[self.p as usize] = signed;
        DispersionRelation::new(coeffs).expect("nonzero leading coefficient")
    }

    pub fn dispersion(&self) -> ComovingDispersion {
        self.lab_dispersion()
            .at_branch(self.k)
            .expect("positive branch index")
    }
}

/// Comoving higher-order dispersion at branch `k`.
pub fn hokdv_dispersion(p: u32, alpha: Rat, k: u32) -> Result<ComovingDispersion> {
    Ok(HigherGkdvModel::new(p, alpha, k)?.dispersion())
}

/// The opposite-signature band is the same for every half-order `p`: the
/// single-term reduced polynomial is `-k^(2p) + dn^(2p) s_(2p+1)(g)` up to
/// a nonzero factor, and monotonicity of `s_(2p+1)` pins its root to
/// `(-1/4, 0)` exactly when `k < dn < 2k`.
pub fn hokdv_band(_p: u32, k: u32) -> Vec<u32> {
    gkdv_band(k)
}

/// Balanced two-term family: lab dispersion `w(x) = -x^(2q+1) + b x^(2p+1)`
/// with `p > q >= 1` and `b > 0`, on the branch `k = 1` (speed `c = b - 1`).
#[derive(Debug, Clone)]
pub struct BalancedModel {
    p: u32,
    q: u32,
    beta: Rat,
}

impl BalancedModel {
    pub fn new(p: u32, q: u32, beta: Rat) -> Result<Self> {
        if q == 0 || p <= q {
            return Err(Error::InvalidInput(format!(
                "balanced exponents need p > q >= 1, got p={p}, q={q}"
            )));
        }
        if !beta.is_positive() {
            return Err(Error::InvalidInput(format!(
                "balance coefficient beta must be positive, got {beta}"
            )));
        }
        Ok(Self { p, q, beta })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn beta(&self) -> &Rat {
        &self.beta
    }

    pub fn lab_dispersion(&self) -> DispersionRelation {
        let mut coeffs = vec![Rat::zero(); self.p as usize + 1];
        coeffs[self.q as usize] = -Rat::one();
        coeffs[self.p as usize] = self.beta.clone();
        DispersionRelation::new(coeffs).expect("nonzero leading coefficient")
    }

    pub fn dispersion(&self) -> ComovingDispersion {
        self.lab_dispersion().at_branch(1).expect("branch one")
    }

    pub fn thresholds(&self, dn: u32) -> Result<RegimeThresholds> {
        balanced_thresholds(self.p, self.q, dn)
    }

    pub fn classify(&self, dn: u32) -> Result<Regime> {
        balanced_classify(self, dn)
    }
}

/// Comoving balanced dispersion (branch `k = 1`).
pub fn balanced_dispersion(model: &BalancedModel) -> ComovingDispersion {
    model.dispersion()
}

/// The two `b`-thresholds bounding the opposite-signature window at one
/// separation: `beta0` marks a collision crossing the spectral origin,
/// `beta_quarter` marks the degenerate double point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegimeThresholds {
    pub dn: u32,
    pub beta0: Rat,
    pub beta_quarter: Rat,
}

/// Exact thresholds for the balanced family at separation `dn`.
///
/// Separations 1 and 2 carry structural roots (the pair `(0, dn)` or
/// `(-dn/2, dn/2)` always collides there because the branch pins
/// `W(1) = 0`), so their thresholds come from the double-root conditions
/// instead of the generic value conditions:
///
/// * `dn >= 3`: `beta0 = (dn^2q - 1) / (dn^2p - 1)`,
///   `beta_quarter = ((dn/2)^2q - 1) / ((dn/2)^2p - 1)`;
/// * `dn = 1`: `beta0 = (2q+1) / (2p+1)`,
///   `beta_quarter = (1 - 2^-2q) / (1 - 2^-2p)`;
/// * `dn = 2`: `beta0 = (2^2q - 1) / (2^2p - 1)`,
///   `beta_quarter = 2q (2q+1) / (2p (2p+1))`.
pub fn balanced_thresholds(p: u32, q: u32, dn: u32) -> Result<RegimeThresholds> {
    if q == 0 || p <= q {
        return Err(Error::InvalidInput(format!(
            "balanced exponents need p > q >= 1, got p={p}, q={q}"
        )));
    }
    if dn == 0 {
        return Err(Error::InvalidInput("separation dn must be positive".into()));
    }
    let (beta0, beta_quarter) = match dn {
        1 => {
            let beta0 = rat(2 * q as i64 + 1, 2 * p as i64 + 1);
            let bq = (Rat::one() - two_pow(-2 * q as i64))
                / (Rat::one() - two_pow(-2 * p as i64));
            (beta0, bq)
        }
        2 => {
            let beta0 = (two_pow(2 * q as i64) - Rat::one())
                / (two_pow(2 * p as i64) - Rat::one());
            let bq = rat(
                2 * q as i64 * (2 * q as i64 + 1),
                2 * p as i64 * (2 * p as i64 + 1),
            );
            (beta0, bq)
        }
        _ => {
            let d = rat_int(dn as i64);
            let beta0 = (pow_u(&d, 2 * q) - Rat::one()) / (pow_u(&d, 2 * p) - Rat::one());
            let h = rat(dn as i64, 2);
            let bq = (pow_u(&h, 2 * q) - Rat::one()) / (pow_u(&h, 2 * p) - Rat::one());
            (beta0, bq)
        }
    };
    Ok(RegimeThresholds {
        dn,
        beta0,
        beta_quarter,
    })
}

/// Collision character of one balanced-model cell `(b, dn)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    SameSignatureCollision,
    OppositeSignatureCollision,
    NoCollision,
    /// `b` sits exactly on the origin-crossing threshold.
    AtThreshold,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Regime::SameSignatureCollision => "same-signature",
            Regime::OppositeSignatureCollision => "opposite-signature",
            Regime::NoCollision => "no-collision",
            Regime::AtThreshold => "at-threshold",
        };
        f.write_str(s)
    }
}

/// Interval classification of one separation, exact in `b`.
///
/// The opposite-signature window is closed at `beta_quarter` for
/// `dn >= 3` and open for `dn` in `{1, 2}`; at `beta_quarter` itself the
/// colliding pair degenerates to a zero eigenvalue either way, so the
/// closed endpoint marks a collision that can no longer leave the axis.
pub fn balanced_classify(model: &BalancedModel, dn: u32) -> Result<Regime> {
    let th = balanced_thresholds(model.p, model.q, dn)?;
    let b = &model.beta;
    Ok(if *b == th.beta0 {
        Regime::AtThreshold
    } else if *b < th.beta0 {
        Regime::SameSignatureCollision
    } else if (dn >= 3 && *b <= th.beta_quarter) || (dn < 3 && *b < th.beta_quarter) {
        Regime::OppositeSignatureCollision
    } else {
        Regime::NoCollision
    })
}

/// Derives the regime of one separation from its collision records,
/// classifying by root location.
///
/// The structural roots forced by the branch condition `W(1) = 0` (the
/// root at `g = 0` when `dn = 1` and at `g = -1/4` when `dn = 2`) say
/// nothing about the regime and are dropped first. Any remaining root
/// sitting exactly on a marker means the cell is on a threshold.
pub fn regime_from_records(dn: u32, records: &[CollisionRecord]) -> Regime {
    let structural: Option<Rat> = match dn {
        1 => Some(Rat::zero()),
        2 => Some(rat(-1, 4)),
        _ => None,
    };
    let relevant: Vec<&CollisionRecord> = records
        .iter()
        .filter(|r| match (&structural, &r.gamma_exact) {
            (Some(s), Some(g)) => g != s,
            _ => true,
        })
        .collect();
    if relevant
        .iter()
        .any(|r| r.gamma_class == CollisionClass::OppositeSignature)
    {
        Regime::OppositeSignatureCollision
    } else if relevant.iter().any(|r| {
        matches!(
            r.gamma_class,
            CollisionClass::OriginCollision | CollisionClass::DegenerateBoundary
        )
    }) {
        Regime::AtThreshold
    } else if relevant
        .iter()
        .any(|r| r.gamma_class == CollisionClass::SameSignature)
    {
        Regime::SameSignatureCollision
    } else {
        Regime::NoCollision
    }
}

/// One cell of a balanced-model parameter sweep.
#[derive(Debug, Clone)]
pub struct RegionCell {
    pub dn: u32,
    pub beta: Rat,
    /// Interval classification.
    pub regime: Regime,
    /// Classification re-derived from the collision records.
    pub report_regime: Regime,
    /// `beta` sits exactly on one of the cell's two thresholds.
    pub at_endpoint: bool,
    pub agree: bool,
}

/// Classifies every `(dn, b)` cell both ways: by exact interval tests and
/// by locating the roots of the reduced polynomial. Off the threshold
/// endpoints the two must agree; endpoint cells are flagged instead,
/// because the closed-endpoint convention and the degenerate zero
/// eigenvalue pull the two descriptions apart there.
pub fn region_sweep(
    p: u32,
    q: u32,
    beta_grid: &[Rat],
    dn_max: u32,
) -> Result<Vec<RegionCell>> {
    if dn_max == 0 {
        return Err(Error::InvalidInput("dn_max must be positive".into()));
    }
    let models: Vec<BalancedModel> = beta_grid
        .iter()
        .map(|b| BalancedModel::new(p, q, b.clone()))
        .collect::<Result<_>>()?;
    let dispersions: Vec<ComovingDispersion> =
        models.iter().map(|m| m.dispersion()).collect();
    let mut cells = Vec::with_capacity(beta_grid.len() * dn_max as usize);
    for dn in 1..=dn_max {
        let th = balanced_thresholds(p, q, dn)?;
        for (model, cd) in models.iter().zip(&dispersions) {
            let regime = balanced_classify(model, dn)?;
            let records = reduction::collision_report(cd, dn, reduction::DEFAULT_TOL)?;
            let report_regime = regime_from_records(dn, &records);
            let at_endpoint =
                model.beta == th.beta0 || model.beta == th.beta_quarter;
            let agree = regime == report_regime;
            debug_assert!(
                agree || at_endpoint,
                "cell dn={dn} beta={} disagrees: {regime} vs {report_regime}",
                model.beta
            );
            cells.push(RegionCell {
                dn,
                beta: model.beta.clone(),
                regime,
                report_regime,
                at_endpoint,
                agree,
            });
        }
    }
    Ok(cells)
}
