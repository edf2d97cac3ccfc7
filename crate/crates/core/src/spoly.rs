//! The recurrent polynomial family `s_m` that homogenizes differences of
//! odd powers.
//!
//! The family is defined by
//!
//! ```text
//! s_0 = 2,   s_1 = 1,   s_{m+1}(g) = s_m(g) + g * s_{m-1}(g),
//! ```
//!
//! and satisfies `a^m + (-b)^m = (a - b)^m s_m(a b / (a - b)^2)` for all
//! reals `a, b` with `a != b`. On `g >= -1/4` it also has the closed form
//! `s_m = psi_+^m + psi_-^m` with `psi_± = (1 ± sqrt(1 + 4 g)) / 2`, which
//! pins the anchor values `s_m(0) = 1` and `s_m(-1/4) = 2^(1-m)`.
//!
//! Polynomial coefficients are produced through a shared memoized ladder;
//! point evaluation runs the recurrence on values and never builds
//! coefficients.

use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::poly::RatPoly;
use crate::rat::{pow_u, rat_int, Rat};

/// Largest index for which coefficient vectors are produced. Point
/// evaluation is uncapped.
pub const INDEX_CAP: usize = 1000;

/// Member of the family, carrying its index and coefficient vector.
#[derive(Debug, Clone, PartialEq)]
pub struct SPolynomial {
    m: usize,
    poly: RatPoly,
}

impl SPolynomial {
    pub fn index(&self) -> usize {
        self.m
    }

    pub fn poly(&self) -> &RatPoly {
        &self.poly
    }

    /// Coefficients in ascending powers of `g`.
    pub fn coeffs(&self) -> &[Rat] {
        self.poly.coeffs()
    }

    /// `m/2` for even `m`, `(m-1)/2` for odd `m` (and 0 for `m <= 1`).
    pub fn degree(&self) -> usize {
        self.poly.degree().unwrap_or(0)
    }

    pub fn eval(&self, gamma: &Rat) -> Rat {
        self.poly.eval(gamma)
    }

    pub fn eval_f64(&self, gamma: f64) -> f64 {
        self.poly.eval_f64(gamma)
    }
}

static LADDER: OnceLock<Mutex<Vec<RatPoly>>> = OnceLock::new();

fn with_ladder<T>(m: usize, f: impl FnOnce(&[RatPoly]) -> T) -> T {
    let lock = LADDER.get_or_init(|| {
        Mutex::new(vec![
            RatPoly::constant(rat_int(2)),
            RatPoly::constant(rat_int(1)),
        ])
    });
    let mut ladder = lock.lock().expect("s_m ladder lock poisoned");
    while ladder.len() <= m {
        let n = ladder.len();
        let next = &ladder[n - 1] + &ladder[n - 2].mul_x();
        ladder.push(next);
    }
    f(&ladder)
}

/// The polynomial `s_m` as coefficients. Fails beyond [`INDEX_CAP`].
pub fn s_poly(m: usize) -> Result<SPolynomial> {
    if m > INDEX_CAP {
        return Err(Error::IndexCap { m, cap: INDEX_CAP });
    }
    with_ladder(m, |ladder| {
        Ok(SPolynomial {
            m,
            poly: ladder[m].clone(),
        })
    })
}

/// Exact value of `s_m` at a rational point, by running the recurrence on
/// values.
pub fn s_eval(m: usize, gamma: &Rat) -> Rat {
    let mut prev = rat_int(2);
    let mut cur = rat_int(1);
    if m == 0 {
        return prev;
    }
    for _ in 1..m {
        let next = &cur + gamma * &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// All of `s_0(gamma), ..., s_top(gamma)` in one pass.
pub fn s_values(gamma: &Rat, top: usize) -> Vec<Rat> {
    let mut vals = Vec::with_capacity(top + 1);
    vals.push(rat_int(2));
    if top == 0 {
        return vals;
    }
    vals.push(rat_int(1));
    for m in 1..top {
        let next = &vals[m] + gamma * &vals[m - 1];
        vals.push(next);
    }
    vals
}

/// Floating-point recurrence evaluation.
pub fn s_eval_f64(m: usize, gamma: f64) -> f64 {
    let mut prev = 2.0;
    let mut cur = 1.0;
    if m == 0 {
        return prev;
    }
    for _ in 1..m {
        let next = cur + gamma * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// The characteristic pair `psi_± = (1 ± sqrt(1 + 4 gamma)) / 2`, real only
/// for `gamma >= -1/4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiPair {
    pub plus: f64,
    pub minus: f64,
}

/// Fails for `gamma < -1/4`, where the pair leaves the real line.
pub fn psi_pair(gamma: f64) -> Result<PsiPair> {
    let disc = 1.0 + 4.0 * gamma;
    if disc < 0.0 {
        return Err(Error::Domain(format!(
            "psi pair is complex for gamma = {gamma} < -1/4"
        )));
    }
    let s = disc.sqrt();
    Ok(PsiPair {
        plus: (1.0 + s) / 2.0,
        minus: (1.0 - s) / 2.0,
    })
}

/// Closed-form evaluation `psi_+^m + psi_-^m`; same domain as [`psi_pair`].
pub fn s_eval_closed(m: usize, gamma: f64) -> Result<f64> {
    let psi = psi_pair(gamma)?;
    Ok(psi.plus.powi(m as i32) + psi.minus.powi(m as i32))
}

/// `t_m(a, b) = a^m + (-b)^m`, the inhomogeneous quantity that `s_m`
/// represents after division by `(a - b)^m`.
pub fn t_value(a: &Rat, b: &Rat, m: usize) -> Rat {
    pow_u(a, m as u32) + pow_u(&-b.clone(), m as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, two_pow};
    use num::traits::{One, Zero};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Coefficient table for the low-index members, cross-checked against
    /// both the recurrence and the closed form (e.g. `s_6(2) = 65 = 2^6 + 1`
    /// via `a = 2, b = 1`).
    const TABLE: &[&[i64]] = &[
        &[2],
        &[1],
        &[1, 2],
        &[1, 3],
        &[1, 4, 2],
        &[1, 5, 5],
        &[1, 6, 9, 2],
        &[1, 7, 14, 7],
    ];

    #[test]
    fn coefficient_table_through_m7() {
        for (m, want) in TABLE.iter().enumerate() {
            let s = s_poly(m).unwrap();
            let want: Vec<Rat> = want.iter().map(|&c| rat_int(c)).collect();
            assert_eq!(s.coeffs(), &want[..], "s_{m}");
        }
    }

    #[test]
    fn degrees_follow_floor_of_half() {
        for m in 0..=60 {
            let s = s_poly(m).unwrap();
            let want = if m % 2 == 0 { m / 2 } else { (m - 1) / 2 };
            assert_eq!(s.degree(), want, "degree of s_{m}");
            if m >= 1 {
                // Leading coefficient of the odd members is the index itself.
                if m % 2 == 1 {
                    assert_eq!(s.coeffs().last().unwrap(), &rat_int(m as i64));
                }
            }
        }
    }

    #[test]
    fn recurrence_holds_as_polynomials() {
        for m in 1..=60 {
            let lhs = s_poly(m + 1).unwrap();
            let sm = s_poly(m).unwrap();
            let sm1 = s_poly(m - 1).unwrap();
            let rhs = sm.poly() + &sm1.poly().mul_x();
            assert_eq!(lhs.poly(), &rhs, "recurrence at m = {m}");
        }
    }

    #[test]
    fn anchor_values_exact_through_m50() {
        let quarter = rat(-1, 4);
        assert_eq!(s_eval(0, &Rat::zero()), rat_int(2));
        for m in 0..=50usize {
            if m >= 1 {
                assert!(s_eval(m, &Rat::zero()).is_one(), "s_{m}(0)");
            }
            assert_eq!(
                s_eval(m, &quarter),
                two_pow(1 - m as i64),
                "s_{m}(-1/4) = 2^(1-m)"
            );
        }
    }

    #[test]
    fn index_cap_is_enforced() {
        assert!(s_poly(INDEX_CAP).is_ok());
        match s_poly(INDEX_CAP + 1) {
            Err(crate::Error::IndexCap { m, cap }) => {
                assert_eq!((m, cap), (INDEX_CAP + 1, INDEX_CAP));
            }
            other => panic!("expected index cap error, got {other:?}"),
        }
    }

    #[test]
    fn point_values() {
        assert_eq!(s_eval(3, &rat_int(2)), rat_int(7));
        assert_eq!(s_eval(5, &rat(-1, 10)), rat(11, 20));
        assert_eq!(s_eval(0, &rat_int(123)), rat_int(2));
        assert_eq!(s_eval(1, &rat_int(123)), rat_int(1));
        assert!((s_eval_f64(5, -0.1) - 0.55).abs() < 1e-14);
    }

    #[test]
    fn s_values_matches_pointwise_eval() {
        let g = rat(-3, 16);
        let vals = s_values(&g, 30);
        assert_eq!(vals.len(), 31);
        for (m, v) in vals.iter().enumerate() {
            assert_eq!(v, &s_eval(m, &g));
        }
    }

    #[test]
    fn closed_form_agrees_with_recurrence_on_grid() {
        // gamma spans [-1/4, 4]; relative error stays near machine epsilon.
        for i in 0..=170 {
            let gamma = -0.25 + i as f64 * 0.025;
            for m in 0..=40usize {
                let rec = s_eval_f64(m, gamma);
                let closed = s_eval_closed(m, gamma).unwrap();
                let scale = rec.abs().max(1.0);
                assert!(
                    (rec - closed).abs() <= 1e-10 * scale,
                    "m = {m}, gamma = {gamma}: {rec} vs {closed}"
                );
            }
        }
    }

    #[test]
    fn closed_form_domain_boundary() {
        assert!(s_eval_closed(3, -0.2500001).is_err());
        assert!(psi_pair(-0.3).is_err());
        let psi = psi_pair(-0.25).unwrap();
        assert_eq!(psi.plus, 0.5);
        assert_eq!(psi.minus, 0.5);
        assert_eq!(s_eval_closed(6, 0.0).unwrap(), 1.0);
        // At the left endpoint the closed form collapses to 2^(1-m).
        assert!((s_eval_closed(6, -0.25).unwrap() - 2f64.powi(-5)).abs() < 1e-15);
    }

    #[test]
    fn psi_pair_sum_and_product() {
        for i in 0..=100 {
            let gamma = -0.25 + i as f64 * 0.05;
            let psi = psi_pair(gamma).unwrap();
            assert!((psi.plus + psi.minus - 1.0).abs() < 1e-15);
            assert!((psi.plus * psi.minus + gamma).abs() < 1e-13);
        }
    }

    #[test]
    fn t_value_examples() {
        assert_eq!(t_value(&rat_int(3), &rat_int(1), 3), rat_int(26));
        assert_eq!(t_value(&rat_int(3), &rat_int(1), 0), rat_int(2));
        assert_eq!(t_value(&rat_int(2), &rat_int(2), 4), rat_int(32));
        // Odd index flips the sign of the b-power.
        assert_eq!(t_value(&rat(1, 2), &rat(3, 2), 3), rat(-26, 8));
    }

    #[test]
    fn homogenization_identity_500_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5f017);
        let mut done = 0;
        while done < 500 {
            let a = rat(rng.gen_range(-30..=30), rng.gen_range(1..=6));
            let b = rat(rng.gen_range(-30..=30), rng.gen_range(1..=6));
            if a == b {
                continue;
            }
            let m = rng.gen_range(0..=25usize);
            let diff = &a - &b;
            let gamma = &a * &b / (&diff * &diff);
            let lhs = t_value(&a, &b, m);
            let rhs = pow_u(&diff, m as u32) * s_eval(m, &gamma);
            assert_eq!(lhs, rhs, "a = {a}, b = {b}, m = {m}");
            done += 1;
        }
    }

    #[test]
    fn strictly_increasing_on_the_negative_window() {
        // 1000 exact grid points spanning (-1/4, 0); every member with
        // m >= 2 is strictly increasing there.
        let pts: Vec<Rat> = (1..1000).map(|i| rat(-1, 4) + rat(i, 4000)).collect();
        let ladders: Vec<Vec<Rat>> = pts.iter().map(|g| s_values(g, 40)).collect();
        for m in 2..=40usize {
            for w in ladders.windows(2) {
                assert!(
                    w[0][m] < w[1][m],
                    "s_{m} not strictly increasing on (-1/4, 0)"
                );
            }
        }
    }
}
