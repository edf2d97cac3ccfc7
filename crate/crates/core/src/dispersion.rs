//! Odd polynomial dispersion relations and the comoving-frame spectrum.
//!
//! A scalar Hamiltonian dispersive equation linearized about zero has purely
//! imaginary spectrum `lambda = -i W(n + mu)` in the frame moving with a
//! near-trivial periodic wave, where `W(x) = w(x) - c x`, `w` is the odd
//! polynomial dispersion relation of the equation, and `c` is the wave speed.
//! The branch of waves with base wavenumber `k` bifurcates at `c = w(k)/k`.
//!
//! Oddness is enforced structurally: only the coefficients of the odd powers
//! `x, x^3, x^5, ...` are stored, and every evaluation has the form
//! `x * P(x^2)`.

use num::traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::RatPoly;
use crate::rat::{rat_int, to_f64, Rat};

/// Odd polynomial dispersion relation `w(k) = sum_j a_j k^(2j+1)`.
///
/// `coeffs[j]` multiplies `k^(2j+1)`; the list is trimmed so the last entry
/// is nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct DispersionRelation {
    coeffs: Vec<Rat>,
}

impl DispersionRelation {
    /// Rejects a list that is empty or all zero: the trivial dispersion
    /// relation has no bifurcating branches to analyze.
    pub fn new(mut coeffs: Vec<Rat>) -> Result<Self> {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::InvalidInput(
                "dispersion relation must have a nonzero coefficient".into(),
            ));
        }
        Ok(DispersionRelation { coeffs })
    }

    /// Coefficients of the odd powers, lowest first.
    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Index of the highest odd power: `w` has degree `2N + 1` where `N`
    /// is the returned value.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, k: &Rat) -> Rat {
        eval_odd(&self.coeffs, k)
    }

    pub fn eval_f64(&self, k: f64) -> f64 {
        eval_odd_f64(&self.coeffs, k)
    }

    /// Speed `c_k = w(k)/k` at which the branch of `2 pi / k`-periodic waves
    /// bifurcates from zero. `k = 0` has no associated branch.
    pub fn bifurcation_speed(&self, k: u32) -> Result<Rat> {
        if k == 0 {
            return Err(Error::InvalidInput(
                "bifurcation speed is undefined at wavenumber zero".into(),
            ));
        }
        let kr = rat_int(k as i64);
        Ok(self.eval(&kr) / kr)
    }

    /// Frame moving at speed `c`: `W(k) = w(k) - c k`.
    pub fn comoving(&self, speed: Rat) -> ComovingDispersion {
        let mut coeffs = self.coeffs.clone();
        coeffs[0] = &coeffs[0] - &speed;
        ComovingDispersion::with_speed(coeffs, speed)
    }

    /// Comoving frame at the bifurcation speed of branch `k`, so `W(k) = 0`.
    pub fn at_branch(&self, k: u32) -> Result<ComovingDispersion> {
        Ok(self.comoving(self.bifurcation_speed(k)?))
    }
}

/// Comoving dispersion `W(x) = sum_j e_j x^(2j+1)`, with the speed of the
/// frame it was built in.
///
/// Unlike [`DispersionRelation`] this may be identically zero (a linear
/// dispersion relation observed from its own phase speed).
#[derive(Debug, Clone, PartialEq)]
pub struct ComovingDispersion {
    coeffs: Vec<Rat>,
    speed: Rat,
}

impl ComovingDispersion {
    /// Wraps comoving coefficients directly; the implied lab frame is the
    /// one at speed zero.
    pub fn from_coeffs(coeffs: Vec<Rat>) -> Self {
        Self::with_speed(coeffs, Rat::zero())
    }

    fn with_speed(mut coeffs: Vec<Rat>, speed: Rat) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        ComovingDispersion { coeffs, speed }
    }

    /// Comoving coefficients `e_j`, lowest first (may be empty).
    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn speed(&self) -> &Rat {
        &self.speed
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        eval_odd(&self.coeffs, x)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        eval_odd_f64(&self.coeffs, x)
    }

    /// The full odd polynomial in `x` (degree `2N + 1`).
    pub fn as_poly(&self) -> RatPoly {
        let mut full = vec![Rat::zero(); 2 * self.coeffs.len()];
        for (j, c) in self.coeffs.iter().enumerate() {
            full[2 * j + 1] = c.clone();
        }
        RatPoly::from_coeffs(full)
    }

    /// Eigenvalue of the zero-amplitude spectrum at Floquet index `(n, mu)`:
    /// `lambda = -i W(n + mu)`, stored as its imaginary part.
    ///
    /// `mu_tilde` is expected in the fundamental window `(-1/2, 1/2]`.
    pub fn floquet_eigenvalue(&self, n: i64, mu_tilde: f64) -> FloquetEigenvalue {
        debug_assert!(
            -0.5 < mu_tilde && mu_tilde <= 0.5,
            "Floquet exponent outside (-1/2, 1/2]"
        );
        let x = n as f64 + mu_tilde;
        FloquetEigenvalue {
            n,
            mu_tilde,
            x,
            lambda_im: -self.eval_f64(x),
        }
    }

    /// Krein signature `kappa = -sign(W(x)/x)` of the eigenvalue at `x`.
    ///
    /// Undefined at the origin and wherever the eigenvalue itself vanishes;
    /// both cases are rejected rather than given an arbitrary sign.
    pub fn krein_signature(&self, x: f64) -> Result<i8> {
        if x == 0.0 {
            return Err(Error::SignatureUndefined(
                "signature is not defined at x = 0".into(),
            ));
        }
        let w = self.eval_f64(x);
        if w == 0.0 {
            return Err(Error::SignatureUndefined(format!(
                "eigenvalue at x = {x} sits at the origin"
            )));
        }
        Ok(if w / x > 0.0 { -1 } else { 1 })
    }

    /// Exact-arithmetic variant of [`Self::krein_signature`].
    pub fn krein_signature_exact(&self, x: &Rat) -> Result<i8> {
        if x.is_zero() {
            return Err(Error::SignatureUndefined(
                "signature is not defined at x = 0".into(),
            ));
        }
        let w = self.eval(x);
        if w.is_zero() {
            return Err(Error::SignatureUndefined(format!(
                "eigenvalue at x = {x} sits at the origin"
            )));
        }
        Ok(if w.is_positive() == x.is_positive() {
            -1
        } else {
            1
        })
    }
}

/// One eigenvalue of the zero-amplitude spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloquetEigenvalue {
    pub n: i64,
    pub mu_tilde: f64,
    /// `n + mu_tilde`.
    pub x: f64,
    /// `lambda = i * lambda_im` would be the eigenvalue; the real part is
    /// identically zero at zero amplitude.
    pub lambda_im: f64,
}

fn eval_odd(coeffs: &[Rat], x: &Rat) -> Rat {
    let x2 = x * x;
    let mut acc = Rat::zero();
    for c in coeffs.iter().rev() {
        acc = acc * &x2 + c;
    }
    acc * x
}

fn eval_odd_f64(coeffs: &[Rat], x: f64) -> f64 {
    let x2 = x * x;
    let mut acc = 0.0;
    for c in coeffs.iter().rev() {
        acc = acc * x2 + to_f64(c);
    }
    acc * x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn disp(coeffs: &[i64]) -> DispersionRelation {
        DispersionRelation::new(coeffs.iter().map(|&c| rat_int(c)).collect()).unwrap()
    }

    #[test]
    fn rejects_zero_dispersion() {
        assert!(DispersionRelation::new(vec![]).is_err());
        assert!(DispersionRelation::new(vec![Rat::zero(), Rat::zero()]).is_err());
    }

    #[test]
    fn evaluates_odd_powers_only() {
        // w = 2k + k^5
        let d = disp(&[2, 0, 1]);
        assert_eq!(d.eval(&rat_int(2)), rat_int(36));
        assert_eq!(d.eval(&rat(1, 2)), rat(33, 32));
        assert_eq!(d.order(), 2);
    }

    #[test]
    fn bifurcation_speeds() {
        // Cubic: w = k^3 gives c_k = k^2.
        let cubic = disp(&[0, 1]);
        assert_eq!(cubic.bifurcation_speed(1).unwrap(), rat_int(1));
        assert_eq!(cubic.bifurcation_speed(2).unwrap(), rat_int(4));
        // Quintic: w = k^5 gives c_2 = 16.
        let quintic = disp(&[0, 0, 1]);
        assert_eq!(quintic.bifurcation_speed(2).unwrap(), rat_int(16));
        // Pure transport: w = k gives c_k = 1 for every branch.
        let linear = disp(&[1]);
        assert_eq!(linear.bifurcation_speed(7).unwrap(), rat_int(1));
        assert!(linear.bifurcation_speed(0).is_err());
    }

    #[test]
    fn comoving_shifts_only_the_linear_coefficient() {
        let d = disp(&[2, 0, 1]);
        let cd = d.comoving(rat_int(2));
        assert_eq!(cd.coeffs(), &[rat_int(0), rat_int(0), rat_int(1)]);
        // Check W = w - c k pointwise at a few rationals.
        for x in [rat_int(3), rat(-1, 2), rat(7, 5)] {
            assert_eq!(cd.eval(&x), d.eval(&x) - rat_int(2) * &x);
        }
    }

    #[test]
    fn comoving_of_linear_dispersion_can_vanish() {
        let linear = disp(&[1]);
        let cd = linear.comoving(rat_int(1));
        assert!(cd.is_zero());
        assert_eq!(cd.eval(&rat_int(5)), rat_int(0));
    }

    #[test]
    fn branch_frame_annihilates_the_base_mode() {
        let d = disp(&[0, 1]);
        for k in 1..=6u32 {
            let cd = d.at_branch(k).unwrap();
            assert!(cd.eval(&rat_int(k as i64)).is_zero());
            assert!(cd.eval(&rat_int(-(k as i64))).is_zero());
        }
    }

    #[test]
    fn floquet_eigenvalues_on_the_cubic_branch() {
        // W = x^3 - x: zero exactly at the collided modes n = -1, 0, 1.
        let cd = disp(&[0, 1]).at_branch(1).unwrap();
        assert_eq!(cd.coeffs(), &[rat_int(-1), rat_int(1)]);
        let e = cd.floquet_eigenvalue(1, 0.0);
        assert_eq!(e.lambda_im, 0.0);
        let e = cd.floquet_eigenvalue(2, 0.0);
        assert_eq!(e.lambda_im, -6.0);
        let e = cd.floquet_eigenvalue(0, 0.25);
        assert!((e.lambda_im - (0.25 - 0.25_f64.powi(3))).abs() < 1e-15);
    }

    #[test]
    fn krein_signature_matches_sign_rule() {
        let cd = disp(&[0, 1]).at_branch(1).unwrap();
        assert_eq!(cd.krein_signature(2.0).unwrap(), -1);
        assert_eq!(cd.krein_signature(0.5).unwrap(), 1);
        assert_eq!(cd.krein_signature_exact(&rat_int(2)).unwrap(), -1);
        assert_eq!(cd.krein_signature_exact(&rat(1, 2)).unwrap(), 1);
        assert!(cd.krein_signature(0.0).is_err());
        assert!(cd.krein_signature(1.0).is_err());
        assert!(cd.krein_signature_exact(&rat_int(-1)).is_err());
    }

    #[test]
    fn signature_is_even_in_x() {
        let cd = disp(&[3, -2, 1]).comoving(rat(5, 2));
        for x in [0.3, 0.9, 1.7, 2.4, 6.1] {
            match (cd.krein_signature(x), cd.krein_signature(-x)) {
                (Ok(a), Ok(b)) => assert_eq!(a, b),
                (a, b) => panic!("signature failed unexpectedly: {a:?} {b:?}"),
            }
        }
    }

    #[test]
    fn as_poly_matches_direct_evaluation() {
        let cd = disp(&[2, 0, 1]).comoving(rat(1, 3));
        let p = cd.as_poly();
        for x in [rat_int(0), rat(3, 2), rat(-7, 4)] {
            assert_eq!(p.eval(&x), cd.eval(&x));
        }
    }
}
