//! Collision analysis through the reduced polynomial.
//!
//! A pair of Floquet exponents `x_1 = mu` and `x_2 = mu + dn` collide
//! exactly when `W(mu + dn) - W(mu) = 0`, where `W` is the comoving
//! dispersion polynomial. Writing `g = mu (mu + dn) / dn^2` turns that
//! difference into a polynomial `R_dn(g)`, one fixed polynomial per integer
//! separation `dn`, whose roots locate every collision at that separation.
//! The location of a root `g` relative to the two markers `0` and `-1/4`
//! determines the signature structure of the collision:
//!
//! * `g > 0`: both eigenvalues carry the same signature,
//! * `g = 0`: the collision happens at the spectral origin,
//! * `-1/4 < g < 0`: the signatures are opposite,
//! * `g = -1/4`: the pair degenerates to a double point with `lambda = 0`,
//! * `g < -1/4`: no real collision exists at this separation.
//!
//! An opposite-signature collision away from the origin is a necessary
//! condition for spectral instability, not a sufficient one.

use num::traits::{One, Signed, Zero};

use crate::dispersion::ComovingDispersion;
use crate::error::{Error, Result};
use crate::poly::RatPoly;
use crate::rat::{rat, rat_int, sqrt_exact, to_f64, Rat};
use crate::rootfind::{self, RootInterval};
use crate::spoly;

/// Default absolute tolerance for deciding that an eigenvalue vanishes.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Width to which isolating intervals for roots of the reduced polynomial
/// are refined before being handed to floating-point post-processing.
const ISOLATION_TOL: f64 = 1e-13;

/// The reduced polynomial `R_dn(g)` for one integer separation.
#[derive(Debug, Clone)]
pub struct ReducedPolynomial {
    dn: u32,
    poly: RatPoly,
}

impl ReducedPolynomial {
    pub fn dn(&self) -> u32 {
        self.dn
    }

    pub fn poly(&self) -> &RatPoly {
        &self.poly
    }

    pub fn eval(&self, gamma: &Rat) -> Rat {
        self.poly.eval(gamma)
    }

    pub fn eval_f64(&self, gamma: f64) -> f64 {
        self.poly.eval_f64(gamma)
    }
}

/// Builds the reduced polynomial for separation `dn`.
///
/// With comoving coefficients `e_j` (so `W(x) = sum_j e_j x^(2j+1)`),
/// the difference `W(mu + dn) - W(mu)` equals
/// `sum_j e_j dn^(2j+1) s_(2j+1)(g)` identically in `mu`, which is what
/// this assembles. Its constant term is therefore `W(dn)`.
pub fn build_reduced(cd: &ComovingDispersion, dn: u32) -> Result<ReducedPolynomial> {
    if dn == 0 {
        return Err(Error::InvalidInput("separation dn must be positive".into()));
    }
    if cd.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let dn_rat = rat_int(dn as i64);
    let mut acc = RatPoly::zero();
    let mut dn_odd = dn_rat.clone();
    let dn_sq = &dn_rat * &dn_rat;
    for (j, e) in cd.coeffs().iter().enumerate() {
        if !e.is_zero() {
            let s = spoly::s_poly(2 * j + 1)?;
            acc = &acc + &s.poly().scale(&(e * &dn_odd));
        }
        dn_odd *= &dn_sq;
    }
    Ok(ReducedPolynomial { dn, poly: acc })
}

/// Signature structure of a collision, read off from the location of the
/// reduced-polynomial root `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CollisionClass {
    /// `g > 0`: colliding eigenvalues share their signature.
    SameSignature,
    /// `g = 0`: the collision sits at the spectral origin (`lambda = 0`).
    OriginCollision,
    /// `-1/4 < g < 0`: signatures are opposite.
    OppositeSignature,
    /// `g = -1/4`: double Floquet point, eigenvalue exactly zero.
    DegenerateBoundary,
    /// `g < -1/4`: the root produces no real collision.
    NoRealCollision,
}

impl std::fmt::Display for CollisionClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CollisionClass::SameSignature => "same-signature",
            CollisionClass::OriginCollision => "origin",
            CollisionClass::OppositeSignature => "opposite-signature",
            CollisionClass::DegenerateBoundary => "degenerate-boundary",
            CollisionClass::NoRealCollision => "no-real-collision",
        };
        f.write_str(s)
    }
}

/// Classifies a root location given as `f64`. Comparisons are exact in the
/// floating-point sense; prefer [`classify_gamma_exact`] when the value is
/// known as a rational.
pub fn classify_gamma(gamma: f64) -> CollisionClass {
    if gamma > 0.0 {
        CollisionClass::SameSignature
    } else if gamma == 0.0 {
        CollisionClass::OriginCollision
    } else if gamma > -0.25 {
        CollisionClass::OppositeSignature
    } else if gamma == -0.25 {
        CollisionClass::DegenerateBoundary
    } else {
        CollisionClass::NoRealCollision
    }
}

/// Exact-rational version of [`classify_gamma`].
pub fn classify_gamma_exact(gamma: &Rat) -> CollisionClass {
    let quarter = rat(-1, 4);
    if gamma.is_positive() {
        CollisionClass::SameSignature
    } else if gamma.is_zero() {
        CollisionClass::OriginCollision
    } else if *gamma > quarter {
        CollisionClass::OppositeSignature
    } else if *gamma == quarter {
        CollisionClass::DegenerateBoundary
    } else {
        CollisionClass::NoRealCollision
    }
}

/// Recovers the colliding Floquet pair `(x_1, x_2)` from a root `g` of the
/// reduced polynomial at separation `dn`.
///
/// The quadratic `mu^2 + dn mu - g dn^2 = 0` gives
/// `mu = (dn / 2) (-1 + sqrt(1 + 4 g))` for the branch reported here, and
/// the partner sits at `mu + dn`. Roots with `g < -1/4` have no real pair.
pub fn recover_mu(gamma: f64, dn: u32) -> Result<(f64, f64)> {
    if dn == 0 {
        return Err(Error::InvalidInput("separation dn must be positive".into()));
    }
    let disc = 1.0 + 4.0 * gamma;
    if disc < 0.0 {
        return Err(Error::Domain(format!(
            "gamma = {gamma} lies below -1/4: no real collision pair"
        )));
    }
    let half_dn = dn as f64 / 2.0;
    let mu = half_dn * (-1.0 + disc.sqrt());
    Ok((mu, mu + dn as f64))
}

/// One root of the reduced polynomial together with everything the
/// classification pipeline can say about it.
#[derive(Debug, Clone)]
pub struct CollisionRecord {
    /// Separation of the colliding pair.
    pub dn: u32,
    /// Root of the reduced polynomial (floating-point view).
    pub gamma: f64,
    /// Exact value when the root is rational.
    pub gamma_exact: Option<Rat>,
    /// Classification by root location alone.
    pub gamma_class: CollisionClass,
    /// Final classification: roots whose collision eigenvalue vanishes are
    /// folded into [`CollisionClass::OriginCollision`].
    pub class: CollisionClass,
    /// The colliding pair `(x_1, x_2)`, absent when no real pair exists.
    pub mu_pair: Option<(f64, f64)>,
    /// Imaginary part of the eigenvalue at the collision.
    pub lambda_im: Option<f64>,
    /// Product of the two Krein signatures, where both are defined.
    pub krein_product: Option<i8>,
    /// Opposite-signature collision with a nonzero eigenvalue: the
    /// necessary condition for a Hamiltonian-Hopf instability.
    pub hopf_candidate: bool,
}

/// Classifies every real root of the reduced polynomial at separation `dn`.
///
/// `tol` is the absolute scale-aware threshold under which the collision
/// eigenvalue is declared zero; rational roots whose eigenvalue is exactly
/// representable bypass it entirely. Records are sorted by `gamma`.
pub fn collision_report(
    cd: &ComovingDispersion,
    dn: u32,
    tol: f64,
) -> Result<Vec<CollisionRecord>> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "tolerance {tol} must be positive"
        )));
    }
    let reduced = build_reduced(cd, dn)?;
    if reduced.poly().degree().is_none_or(|d| d == 0) {
        return Ok(Vec::new());
    }
    let roots = rootfind::isolate_and_refine(reduced.poly(), ISOLATION_TOL)?;
    let mut out = Vec::with_capacity(roots.len());
    for (iv, approx) in &roots {
        out.push(build_record(cd, dn, reduced.poly(), iv, *approx, tol)?);
    }
    Ok(out)
}

fn build_record(
    cd: &ComovingDispersion,
    dn: u32,
    rpoly: &RatPoly,
    iv: &RootInterval,
    approx: f64,
    tol: f64,
) -> Result<CollisionRecord> {
    let (gamma_exact, gamma_class) = if iv.is_exact() {
        (Some(iv.lo.clone()), classify_gamma_exact(&iv.lo))
    } else {
        (None, classify_interval_root(rpoly, iv)?)
    };

    if gamma_class == CollisionClass::NoRealCollision {
        return Ok(CollisionRecord {
            dn,
            gamma: approx,
            gamma_exact,
            gamma_class,
            class: CollisionClass::NoRealCollision,
            mu_pair: None,
            lambda_im: None,
            krein_product: None,
            hopf_candidate: false,
        });
    }

    // Recover the pair and the eigenvalue, exactly when possible.
    let mut mu_pair: (f64, f64);
    let lambda_im: f64;
    let mut lambda_exactly_zero = false;
    let mut resolved_exactly = false;
    if let Some(g) = &gamma_exact {
        let disc = Rat::one() + rat_int(4) * g;
        if let Some(root) = sqrt_exact(&disc) {
            let mu = rat(dn as i64, 2) * (root - Rat::one());
            let x2 = &mu + rat_int(dn as i64);
            let lam = -cd.eval(&mu);
            debug_assert_eq!(lam, -cd.eval(&x2), "pair must share its eigenvalue");
            mu_pair = (to_f64(&mu), to_f64(&x2));
            lambda_im = to_f64(&lam);
            lambda_exactly_zero = lam.is_zero();
            resolved_exactly = true;
        } else {
            mu_pair = recover_mu(to_f64(g), dn)?;
            lambda_im = -cd.eval_f64(mu_pair.0);
        }
    } else {
        mu_pair = recover_mu(approx, dn)?;
        lambda_im = -cd.eval_f64(mu_pair.0);
    }

    // A double root at the boundary has eigenvalue exactly zero: the
    // reduced polynomial vanishing at -1/4 forces W(dn / 2) = 0.
    if gamma_class == CollisionClass::DegenerateBoundary {
        debug_assert!(lambda_exactly_zero, "boundary collision must have lambda = 0");
        let half = dn as f64 / 2.0;
        mu_pair = (-half, half);
    }

    let lambda_is_zero = if resolved_exactly {
        lambda_exactly_zero
    } else {
        lambda_im.abs() <= tol * eigenvalue_scale(cd, mu_pair)
    };

    let class = if lambda_is_zero {
        CollisionClass::OriginCollision
    } else {
        gamma_class
    };
    let krein_product = match class {
        CollisionClass::SameSignature => Some(1),
        CollisionClass::OppositeSignature => Some(-1),
        _ => None,
    };
    Ok(CollisionRecord {
        dn,
        gamma: approx,
        gamma_exact,
        gamma_class,
        class,
        mu_pair: Some(mu_pair),
        lambda_im: Some(if lambda_is_zero { 0.0 } else { lambda_im }),
        krein_product,
        hopf_candidate: class == CollisionClass::OppositeSignature,
    })
}

/// Magnitude scale of evaluating the comoving polynomial near the pair,
/// used to make the zero-eigenvalue test scale-aware.
fn eigenvalue_scale(cd: &ComovingDispersion, pair: (f64, f64)) -> f64 {
    let x = pair.0.abs().max(pair.1.abs()).max(1.0);
    let mut scale = 1.0;
    let mut xp = x;
    for c in cd.coeffs() {
        scale += to_f64(c).abs() * xp;
        xp *= x * x;
    }
    scale
}

/// Locates an irrational root relative to the markers `-1/4` and `0` by
/// narrowing its isolating interval until it lies inside a single region.
fn classify_interval_root(rpoly: &RatPoly, iv: &RootInterval) -> Result<CollisionClass> {
    let mut lo = iv.lo.clone();
    let mut hi = iv.hi.clone();
    for marker in [rat(-1, 4), Rat::zero()] {
        if lo < marker && marker < hi {
            // The root is irrational, so it sits strictly on one side.
            if rootfind::count_roots_in(rpoly, &lo, &marker)? == 1 {
                hi = marker;
            } else {
                lo = marker;
            }
        }
    }
    let mid = (&lo + &hi) / rat_int(2);
    Ok(classify_gamma_exact(&mid))
}

/// Separations in `1..=dn_max` carrying at least one opposite-signature
/// collision with nonzero eigenvalue.
pub fn hopf_candidates(cd: &ComovingDispersion, dn_max: u32) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    for dn in 1..=dn_max {
        let records = collision_report(cd, dn, DEFAULT_TOL)?;
        if records.iter().any(|r| r.hopf_candidate) {
            out.push(dn);
        }
    }
    Ok(out)
}
