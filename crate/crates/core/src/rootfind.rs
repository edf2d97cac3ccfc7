//! Exact real-root counting and isolation for rational polynomials.
//!
//! Everything here is exact: Sturm chains are built over the rationals, the
//! interval convention is half-open `(lo, hi]`, and rational roots are
//! reported as degenerate intervals rather than approximations. Bisection
//! only ever refines an interval that provably contains exactly one root.

use std::collections::BTreeSet;

use num::bigint::BigInt;
use num::traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::RatPoly;
use crate::rat::{rat, to_f64, Rat};

/// Isolating interval for one distinct real root of a polynomial.
///
/// `lo == hi` means the root is known exactly. Otherwise the root lies in
/// the open interval `(lo, hi)` and is the only root of the polynomial
/// there. `multiplicity_hint` is the multiplicity in the original (not
/// squarefree-reduced) polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct RootInterval {
    pub lo: Rat,
    pub hi: Rat,
    pub multiplicity_hint: usize,
}

impl RootInterval {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    /// Whether the (possibly degenerate) interval lies strictly left of `t`.
    pub fn entirely_below(&self, t: &Rat) -> bool {
        if self.is_exact() {
            &self.lo < t
        } else {
            &self.hi <= t
        }
    }

    /// Whether the interval lies strictly right of `t`.
    pub fn entirely_above(&self, t: &Rat) -> bool {
        if self.is_exact() {
            &self.lo > t
        } else {
            &self.lo >= t
        }
    }
}

/// Sturm chain of the squarefree part of `p`.
///
/// The first element is `p / gcd(p, p')`, the second its derivative, and
/// each later element is the negated remainder of the two before it. The
/// zero polynomial has no chain.
pub fn sturm_chain(p: &RatPoly) -> Result<Vec<RatPoly>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(chain_of(&p.squarefree_part()))
}

/// Chain of a polynomial already known to be squarefree.
fn chain_of(q: &RatPoly) -> Vec<RatPoly> {
    let mut chain = vec![q.clone()];
    if q.degree() == Some(0) {
        return chain;
    }
    let mut a = q.clone();
    let mut b = q.derivative();
    chain.push(b.clone());
    while b.degree().is_some_and(|d| d >= 1) {
        let r = a.div_rem(&b).1;
        // Squarefree input: consecutive elements stay coprime, so the
        // remainder cannot vanish before reaching a constant.
        debug_assert!(!r.is_zero(), "unexpected common factor in Sturm chain");
        let nr = -&r;
        chain.push(nr.clone());
        a = b;
        b = nr;
    }
    chain
}

/// Integerized coefficient views of a chain, for fast sign queries.
fn int_chain(chain: &[RatPoly]) -> Vec<Vec<BigInt>> {
    chain.iter().map(integer_coeffs).collect()
}

/// Sign of the polynomial with integer coefficients `ints` (ascending) at
/// the rational `x`, via an integer Horner scheme on the numerator: no
/// intermediate rational normalization.
fn int_sign_at(ints: &[BigInt], x: &Rat) -> i8 {
    let n = x.numer();
    let d = x.denom();
    let deg = ints.len() - 1;
    let mut acc = ints[deg].clone();
    let mut dp = BigInt::one();
    for i in (0..deg).rev() {
        dp *= d;
        acc = acc * n + &ints[i] * &dp;
    }
    if acc.is_zero() {
        0
    } else if acc.is_positive() {
        1
    } else {
        -1
    }
}

/// Sign variations of the integerized chain evaluated at `x`, zeros skipped.
fn variations_at(ichain: &[Vec<BigInt>], x: &Rat) -> usize {
    let mut count = 0;
    let mut last: Option<i8> = None;
    for ints in ichain {
        let s = int_sign_at(ints, x);
        if s == 0 {
            continue;
        }
        if let Some(prev) = last {
            if prev != s {
                count += 1;
            }
        }
        last = Some(s);
    }
    count
}

/// Number of distinct real roots of `p` in the half-open interval
/// `(lo, hi]`.
pub fn count_roots_in(p: &RatPoly, lo: &Rat, hi: &Rat) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if lo >= hi {
        return Err(Error::InvalidInput(format!(
            "empty interval: ({lo}, {hi}]"
        )));
    }
    let mut q = p.squarefree_part();
    if q.degree() == Some(0) {
        return Ok(0);
    }
    // Peel endpoint roots off so the classical variation count applies;
    // `hi` belongs to the interval, `lo` does not.
    let mut at_hi = 0usize;
    if q.eval(hi).is_zero() {
        at_hi = 1;
        q = q.div_exact(&RatPoly::x_minus(hi));
    }
    if !q.is_zero() && q.degree().is_some_and(|d| d >= 1) && q.eval(lo).is_zero() {
        q = q.div_exact(&RatPoly::x_minus(lo));
    }
    if q.degree().is_none_or(|d| d == 0) {
        return Ok(at_hi);
    }
    let ichain = int_chain(&chain_of(&q));
    let interior = variations_at(&ichain, lo) - variations_at(&ichain, hi);
    Ok(interior + at_hi)
}

/// Isolates every distinct real root of `p` and refines each isolating
/// interval to width at most `tol`.
///
/// Rational roots are returned exactly (degenerate intervals); the paired
/// `f64` is a convenience approximation. Constants have no roots; the zero
/// polynomial is rejected.
pub fn isolate_and_refine(p: &RatPoly, tol: f64) -> Result<Vec<(RootInterval, f64)>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::InvalidInput(format!("tolerance {tol} must be positive")));
    }
    let tol_rat = Rat::from_float(tol).expect("finite positive tolerance");
    let q = p.squarefree_part();
    if q.degree() == Some(0) {
        return Ok(Vec::new());
    }

    let mut out: Vec<(RootInterval, f64)> = Vec::new();
    let mut reduced = q.clone();
    for r in rational_roots(&q) {
        reduced = reduced.div_exact(&RatPoly::x_minus(&r));
        let mult = multiplicity_exact(p, &r);
        out.push((
            RootInterval {
                lo: r.clone(),
                hi: r.clone(),
                multiplicity_hint: mult,
            },
            to_f64(&r),
        ));
    }

    if reduced.degree().is_some_and(|d| d >= 1) {
        // No rational roots remain, so no bisection point can ever land on
        // a root: every sign query below is nonzero.
        let ichain = int_chain(&chain_of(&reduced));
        let ireduced = integer_coeffs(&reduced);
        let bound = cauchy_bound(&reduced);
        let lo = -bound.clone();
        let hi = bound;
        let mut stack = vec![(
            lo.clone(),
            hi.clone(),
            variations_at(&ichain, &lo),
            variations_at(&ichain, &hi),
        )];
        let mut isolated: Vec<(Rat, Rat)> = Vec::new();
        while let Some((a, b, va, vb)) = stack.pop() {
            let count = va - vb;
            if count == 0 {
                continue;
            }
            if count == 1 {
                isolated.push((a, b));
                continue;
            }
            let mid = (&a + &b) / rat(2, 1);
            debug_assert!(int_sign_at(&ireduced, &mid) != 0);
            let vm = variations_at(&ichain, &mid);
            stack.push((a, mid.clone(), va, vm));
            stack.push((mid, b, vm, vb));
        }

        for (mut a, mut b) in isolated {
            // The sign at the left endpoint never changes: `a` only ever
            // moves onto a midpoint sharing its sign.
            let sa = int_sign_at(&ireduced, &a);
            debug_assert!(sa != 0 && int_sign_at(&ireduced, &b) != 0);
            while &b - &a > tol_rat {
                let mid = (&a + &b) / rat(2, 1);
                let sm = int_sign_at(&ireduced, &mid);
                debug_assert!(sm != 0, "bisection landed on a rational root");
                if sm == sa {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            let mult = multiplicity_in_interval(p, &a, &b);
            let approx = to_f64(&((&a + &b) / rat(2, 1)));
            out.push((
                RootInterval {
                    lo: a,
                    hi: b,
                    multiplicity_hint: mult,
                },
                approx,
            ));
        }
    }

    out.sort_by(|x, y| x.0.lo.cmp(&y.0.lo));
    Ok(out)
}

/// Strict upper bound on root magnitude: `1 + max |a_i| / |a_n|`.
fn cauchy_bound(q: &RatPoly) -> Rat {
    let lead = q.leading().expect("nonzero polynomial").abs();
    let mut best = Rat::zero();
    let deg = q.degree().unwrap();
    for i in 0..deg {
        let ratio = q.coeff(i).abs() / &lead;
        if ratio > best {
            best = ratio;
        }
    }
    best + Rat::one()
}

/// Multiplicity of the exact root `r` in `p`.
fn multiplicity_exact(p: &RatPoly, r: &Rat) -> usize {
    let mut m = 0;
    let mut cur = p.clone();
    let factor = RatPoly::x_minus(r);
    while !cur.is_zero() && cur.eval(r).is_zero() {
        cur = cur.div_exact(&factor);
        m += 1;
    }
    m
}

/// Multiplicity in `p` of the single root isolated by `(a, b)`.
///
/// Every root of the iterated gcd is a root of `p`, so the chain of gcds
/// can only contain this root or miss the interval entirely.
fn multiplicity_in_interval(p: &RatPoly, a: &Rat, b: &Rat) -> usize {
    let mut m = 1;
    let mut g = RatPoly::gcd(p, &p.derivative());
    while g.degree().is_some_and(|d| d >= 1) {
        match count_roots_in(&g, a, b) {
            Ok(1) => {
                m += 1;
                g = RatPoly::gcd(&g, &g.derivative());
            }
            _ => break,
        }
    }
    m
}

/// All rational roots of a squarefree polynomial, each exactly once.
///
/// Zero and -1/4 are always probed directly (classification downstream
/// depends on recognizing them exactly); the remaining candidates come from
/// the rational root theorem on the integerized polynomial. Divisor
/// enumeration refuses to factor past trial-division scale, in which case
/// those extra candidates are skipped and the affected roots are simply
/// reported as isolating intervals by the caller.
fn rational_roots(q: &RatPoly) -> Vec<Rat> {
    let mut roots = Vec::new();
    let mut cur = q.clone();
    for special in [Rat::zero(), rat(-1, 4)] {
        if cur.degree().is_some_and(|d| d >= 1) && cur.eval(&special).is_zero() {
            cur = cur.div_exact(&RatPoly::x_minus(&special));
            roots.push(special);
        }
    }
    closed_form_roots(&mut cur, &mut roots);
    // Degrees 1 and 2 are fully settled above: what remains of low degree
    // has provably irrational roots. Only higher degrees need candidates.
    if cur.degree().is_some_and(|d| d >= 3) {
        let ints = integer_coeffs(&cur);
        let c0 = ints.first().expect("nonempty").clone();
        let cn = ints.last().expect("nonempty").clone();
        debug_assert!(!c0.is_zero(), "zero root must have been peeled off");
        if let (Some(mut num_divs), Some(den_divs)) =
            (bounded_divisors(&c0.abs()), bounded_divisors(&cn.abs()))
        {
            // Any rational root n/d obeys |n/d| <= the root magnitude
            // bound, which discards almost all divisor pairs up front.
            // Counting survivors first keeps the hopeless case (too many
            // candidates, enumeration abandoned) nearly free.
            num_divs.sort();
            let bound = cauchy_bound(&cur);
            let (bn, bd) = (bound.numer().clone(), bound.denom().clone());
            let cuts: Vec<usize> = den_divs
                .iter()
                .map(|d| {
                    let limit = &bn * d;
                    num_divs.partition_point(|n| n * &bd <= limit)
                })
                .collect();
            if cuts.iter().sum::<usize>() <= MAX_CANDIDATES {
                let mut candidates: BTreeSet<Rat> = BTreeSet::new();
                for (d, cut) in den_divs.iter().zip(&cuts) {
                    for n in &num_divs[..*cut] {
                        let c = Rat::new(n.clone(), d.clone());
                        candidates.insert(-c.clone());
                        candidates.insert(c);
                    }
                }
                for cand in candidates {
                    if cur.degree().is_none_or(|d| d < 1) {
                        break;
                    }
                    if cur.eval(&cand).is_zero() {
                        cur = cur.div_exact(&RatPoly::x_minus(&cand));
                        roots.push(cand);
                    }
                }
                closed_form_roots(&mut cur, &mut roots);
            }
        }
    }
    roots.sort();
    roots
}

/// Peels rational roots off degree 1 and 2 remainders in closed form,
/// leaving either a constant or a polynomial with no rational root of
/// degree <= 2. Input must be squarefree.
fn closed_form_roots(cur: &mut RatPoly, roots: &mut Vec<Rat>) {
    loop {
        match cur.degree() {
            Some(1) => {
                let r = -(cur.coeff(0) / cur.coeff(1));
                *cur = RatPoly::constant(Rat::one());
                roots.push(r);
            }
            Some(2) => {
                let a = cur.coeff(2);
                let b = cur.coeff(1);
                let c = cur.coeff(0);
                let disc = &b * &b - rat(4, 1) * &a * &c;
                debug_assert!(!disc.is_zero(), "double root in squarefree input");
                let Some(s) = crate::rat::sqrt_exact(&disc) else {
                    return;
                };
                let denom = rat(2, 1) * &a;
                roots.push((-&b + &s) / &denom);
                roots.push((-&b - &s) / &denom);
                *cur = RatPoly::constant(Rat::one());
                return;
            }
            _ => return,
        }
    }
}

/// Primitive integer coefficients proportional to `p`'s.
fn integer_coeffs(p: &RatPoly) -> Vec<BigInt> {
    let mut den_lcm = BigInt::one();
    for c in p.coeffs() {
        den_lcm = num::integer::lcm(den_lcm, c.denom().clone());
    }
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| c.numer() * (&den_lcm / c.denom()))
        .collect();
    let mut content = BigInt::zero();
    for c in &ints {
        content = num::integer::gcd(content, c.clone());
    }
    ints.into_iter().map(|c| c / &content).collect()
}

const TRIAL_LIMIT: u64 = 100_000;
const LARGE_PRIME_LIMIT: u64 = 10_000_000_000;
const MAX_DIVISORS: usize = 4096;
const MAX_CANDIDATES: usize = 2000;

/// All positive divisors of `n`, or `None` when `n` resists trial division
/// or has too many divisors to enumerate.
fn bounded_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    use num::traits::ToPrimitive;
    debug_assert!(n.is_positive());
    // Machine arithmetic when the number fits; the arbitrary-precision
    // loop below costs three orders of magnitude more per candidate.
    if let Some(small) = n.to_u64() {
        return bounded_divisors_u64(small);
    }
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut rest = n.clone();
    let mut f: u64 = 2;
    loop {
        let fb = BigInt::from(f);
        if &fb * &fb > rest || f > TRIAL_LIMIT {
            break;
        }
        let mut exp = 0;
        while (&rest % &fb).is_zero() {
            rest /= &fb;
            exp += 1;
        }
        if exp > 0 {
            factors.push((fb, exp));
        }
        if let Some(small) = rest.to_u64() {
            // The cofactor shrank into machine range: finish there.
            let tail = bounded_divisors_u64(small)?;
            return combine_divisors(factors, tail);
        }
        f += if f == 2 { 1 } else { 2 };
    }
    if rest > BigInt::one() {
        // No factor below the trial limit: prime iff small enough to know.
        if rest > BigInt::from(LARGE_PRIME_LIMIT)
            && &BigInt::from(f) * &BigInt::from(f) <= rest
        {
            return None;
        }
        factors.push((rest, 1));
    }
    combine_divisors(factors, vec![BigInt::one()])
}

/// Divisor enumeration entirely in `u64`.
fn bounded_divisors_u64(n: u64) -> Option<Vec<BigInt>> {
    debug_assert!(n > 0);
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut rest = n;
    let mut f: u64 = 2;
    while f.saturating_mul(f) <= rest && f <= TRIAL_LIMIT {
        let mut exp = 0;
        while rest.is_multiple_of(f) {
            rest /= f;
            exp += 1;
        }
        if exp > 0 {
            factors.push((f, exp));
        }
        f += if f == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        if rest > LARGE_PRIME_LIMIT && f.saturating_mul(f) <= rest {
            return None;
        }
        factors.push((rest, 1));
    }
    let mut divisors: Vec<u64> = vec![1];
    for (prime, exp) in factors {
        let mut next = Vec::with_capacity(divisors.len() * (exp as usize + 1));
        let mut power: u64 = 1;
        for _ in 0..=exp {
            for d in &divisors {
                next.push(d * power);
            }
            power = power.saturating_mul(prime);
        }
        if next.len() > MAX_DIVISORS {
            return None;
        }
        divisors = next;
    }
    Some(divisors.into_iter().map(BigInt::from).collect())
}

/// Expands a prime factorization against an already-enumerated tail of
/// divisors, respecting the enumeration cap.
fn combine_divisors(
    factors: Vec<(BigInt, u32)>,
    tail: Vec<BigInt>,
) -> Option<Vec<BigInt>> {
    let mut divisors = tail;
    for (prime, exp) in factors {
        let mut next = Vec::with_capacity(divisors.len() * (exp as usize + 1));
        let mut power = BigInt::one();
        for _ in 0..=exp {
            for d in &divisors {
                next.push(d * &power);
            }
            power *= &prime;
        }
        if next.len() > MAX_DIVISORS {
            return None;
        }
        divisors = next;
    }
    Some(divisors)
}
