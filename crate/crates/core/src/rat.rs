//! Exact rational scalars and small conversion helpers.

use num::bigint::BigInt;
use num::traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number used throughout the crate.
pub type Rat = num::rational::BigRational;

/// `n` as a rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `n / d` as a reduced rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Nearest `f64` to `r` (NaN only if the magnitude overflows conversion).
pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `base^exp` by repeated squaring.
pub fn pow_u(base: &Rat, exp: u32) -> Rat {
    let mut acc = Rat::from_integer(BigInt::from(1));
    let mut sq = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &sq;
        }
        e >>= 1;
        if e > 0 {
            sq = &sq * &sq;
        }
    }
    acc
}

/// `2^e` for a possibly negative exponent.
pub fn two_pow(e: i64) -> Rat {
    let p = pow_u(&rat_int(2), e.unsigned_abs() as u32);
    if e >= 0 {
        p
    } else {
        p.recip()
    }
}

/// Exact square root when `r` is a perfect square of a rational, else `None`.
pub fn sqrt_exact(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    if r.is_zero() {
        return Some(Rat::zero());
    }
    let num = r.numer();
    let den = r.denom();
    let sn = num.sqrt();
    let sd = den.sqrt();
    if &(&sn * &sn) == num && &(&sd * &sd) == den {
        Some(Rat::new(sn, sd))
    } else {
        None
    }
}

/// Parses `"3"`, `"-1/4"`, or an exact decimal such as `"0.25"` (so `"0.2"`
/// means one fifth, not the nearest binary float).
pub fn parse_rational(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("cannot parse rational from {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::InvalidInput(format!("zero denominator in {s:?}")));
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int_part: BigInt = if int == "-" || int == "+" || int.is_empty() {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| bad())?
        };
        let frac_num: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num::pow::pow(BigInt::from(10), frac.len());
        let magnitude = int_part.abs() * &scale + frac_num;
        let signed = if negative { -magnitude } else { magnitude };
        return Ok(Rat::new(signed, scale));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rat::from_integer(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_accepts_integers_fractions_and_decimals() {
        assert_eq!(parse_rational("3").unwrap(), rat_int(3));
        assert_eq!(parse_rational("-1/4").unwrap(), rat(-1, 4));
        assert_eq!(parse_rational("0.2").unwrap(), rat(1, 5));
        assert_eq!(parse_rational("-2.75").unwrap(), rat(-11, 4));
        assert_eq!(parse_rational(" 6/8 ").unwrap(), rat(3, 4));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
    }

    #[test]
    fn parse_rejects_garbage() {
        for s in ["", "abc", "1/0", "1.2.3", "2/", "0x10", "1e-3"] {
            assert!(parse_rational(s).is_err(), "accepted {s:?}");
        }
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(sqrt_exact(&rat(1, 9)), Some(rat(1, 3)));
        assert_eq!(sqrt_exact(&rat(49, 4)), Some(rat(7, 2)));
        assert_eq!(sqrt_exact(&Rat::zero()), Some(Rat::zero()));
        assert_eq!(sqrt_exact(&rat(7, 27)), None);
        assert_eq!(sqrt_exact(&rat(-1, 4)), None);
    }

    #[test]
    fn two_pow_handles_negative_exponents() {
        assert_eq!(two_pow(5), rat_int(32));
        assert_eq!(two_pow(0), rat_int(1));
        assert_eq!(two_pow(-5), rat(1, 32));
    }
}
