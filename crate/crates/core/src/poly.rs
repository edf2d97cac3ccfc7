//! Dense univariate polynomials over the rationals.
//!
//! Coefficients are stored in ascending order with trailing zeros trimmed;
//! the zero polynomial has an empty coefficient vector and no degree.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::traits::{One, Signed, Zero};

use crate::rat::{to_f64, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<Rat>,
}

impl RatPoly {
    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The monic linear factor `x - r`.
    pub fn x_minus(r: &Rat) -> Self {
        RatPoly {
            coeffs: vec![-r.clone(), Rat::one()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Sign of the exact value at `x`: -1, 0, or +1.
    pub fn sign_at(&self, x: &Rat) -> i8 {
        let v = self.eval(x);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + to_f64(c);
        }
        acc
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(to_f64).collect()
    }

    pub fn derivative(&self) -> RatPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * Rat::from_integer(i.into()))
            .collect();
        RatPoly::from_coeffs(coeffs)
    }

    pub fn scale(&self, s: &Rat) -> RatPoly {
        if s.is_zero() {
            return RatPoly::zero();
        }
        RatPoly {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Multiplication by `x`: shifts coefficients up one degree.
    pub fn mul_x(&self) -> RatPoly {
        if self.is_zero() {
            return RatPoly::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rat::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        RatPoly { coeffs }
    }

    /// Euclidean division; panics on a zero divisor (internal misuse).
    pub fn div_rem(&self, d: &RatPoly) -> (RatPoly, RatPoly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.degree().unwrap();
        if self.degree().is_none_or(|n| n < dd) {
            return (RatPoly::zero(), self.clone());
        }
        let lead = d.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rat::zero(); rem.len() - dd];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let factor = rem.last().unwrap() / &lead;
            if !factor.is_zero() {
                for (i, dc) in d.coeffs.iter().enumerate() {
                    let t = dc * &factor;
                    rem[k + i] -= t;
                }
                quot[k] = factor;
            }
            rem.pop();
        }
        (RatPoly::from_coeffs(quot), RatPoly::from_coeffs(rem))
    }

    /// Exact quotient; panics if `d` does not divide `self`.
    pub fn div_exact(&self, d: &RatPoly) -> RatPoly {
        let (q, r) = self.div_rem(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor; `gcd(0, 0)` is zero.
    pub fn gcd(a: &RatPoly, b: &RatPoly) -> RatPoly {
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r.normalized_positive();
        }
        a.monic()
    }

    /// Scales so the leading coefficient is one; zero stays zero.
    pub fn monic(&self) -> RatPoly {
        match self.leading() {
            None => RatPoly::zero(),
            Some(l) => self.scale(&l.recip()),
        }
    }

    /// Scales by a positive rational so coefficients are small integers with
    /// unit content; the sign pattern is untouched.
    pub fn normalized_positive(&self) -> RatPoly {
        if self.is_zero() {
            return RatPoly::zero();
        }
        let mut den_lcm = num::bigint::BigInt::one();
        for c in &self.coeffs {
            den_lcm = num::integer::lcm(den_lcm, c.denom().clone());
        }
        let mut content = num::bigint::BigInt::zero();
        for c in &self.coeffs {
            let as_int = c.numer() * (&den_lcm / c.denom());
            content = num::integer::gcd(content, as_int);
        }
        let factor = Rat::new(den_lcm, content);
        self.scale(&factor.abs())
    }

    /// `self / gcd(self, self')`: same distinct roots, all simple.
    pub fn squarefree_part(&self) -> RatPoly {
        if self.is_zero() {
            return RatPoly::zero();
        }
        if self.degree() == Some(0) {
            return self.clone();
        }
        let g = RatPoly::gcd(self, &self.derivative());
        if g.degree() == Some(0) {
            self.clone()
        } else {
            self.div_exact(&g)
        }
    }
}

impl Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) + rhs.coeff(i));
        }
        RatPoly::from_coeffs(coeffs)
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) - rhs.coeff(i));
        }
        RatPoly::from_coeffs(coeffs)
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut coeffs = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        RatPoly::from_coeffs(coeffs)
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    if i == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    fn p(coeffs: &[i64]) -> RatPoly {
        RatPoly::from_coeffs(coeffs.iter().map(|&c| rat_int(c)).collect())
    }

    #[test]
    fn trims_trailing_zeros_and_tracks_degree() {
        let q = p(&[1, 2, 0, 0]);
        assert_eq!(q.degree(), Some(1));
        assert_eq!(RatPoly::zero().degree(), None);
        assert!(p(&[0]).is_zero());
    }

    #[test]
    fn evaluation_matches_hand_computation() {
        let q = p(&[6, 24]);
        assert_eq!(q.eval(&rat(-1, 4)), rat_int(0));
        assert_eq!(q.eval(&rat_int(1)), rat_int(30));
        assert!((q.eval_f64(0.5) - 18.0).abs() < 1e-12);
    }

    #[test]
    fn div_rem_reconstructs_dividend() {
        let a = p(&[2, -3, 0, 1, 5]);
        let b = p(&[1, 0, 2]);
        let (q, r) = a.div_rem(&b);
        let back = &(&q * &b) + &r;
        assert_eq!(back, a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn gcd_of_coprime_is_one() {
        let a = p(&[-1, 1]);
        let b = p(&[1, 1]);
        let g = RatPoly::gcd(&a, &b);
        assert_eq!(g.degree(), Some(0));
        assert_eq!(g.coeff(0), rat_int(1));
    }

    #[test]
    fn squarefree_part_drops_multiplicity() {
        // (x + 1)^2 (x - 2) -> (x + 1)(x - 2)
        let sq = &(&p(&[1, 1]) * &p(&[1, 1])) * &p(&[-2, 1]);
        let sf = sq.squarefree_part();
        assert_eq!(sf.degree(), Some(2));
        assert!(sf.eval(&rat_int(-1)).is_zero());
        assert!(sf.eval(&rat_int(2)).is_zero());
        assert!(!sf.derivative().eval(&rat_int(-1)).is_zero());
    }

    #[test]
    fn squarefree_part_of_squarefree_is_identity() {
        let q = p(&[6, 24]);
        assert_eq!(q.squarefree_part(), q);
    }

    #[test]
    fn normalization_keeps_signs() {
        let q = RatPoly::from_coeffs(vec![rat(-3, 4), rat(9, 2)]);
        let n = q.normalized_positive();
        assert_eq!(n.coeffs(), &[rat_int(-1), rat_int(6)]);
    }
}
