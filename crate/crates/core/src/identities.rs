//! Exact-arithmetic verification of the inequality toolbox that underpins
//! the regime classification of the two-term balanced family.
//!
//! Every check below evaluates both sides of a claimed inequality in
//! rational arithmetic over a deterministic rational grid, so a reported
//! pass is a machine check of the inequality at every sampled point, with
//! no rounding in sight. Violations carry the offending parameters and
//! both side values.

use std::collections::BTreeSet;
use std::fmt;

use num::traits::Zero;

use crate::rat::{rat, rat_int, two_pow, pow_u, Rat};
use crate::spoly::s_values;

/// Identifies one group of inequalities, named for what it bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LemmaId {
    /// Pointwise bounds on the recurrent values themselves.
    ScalarBounds,
    /// Bounds relating consecutive recurrent values.
    StepBounds,
    /// The weighted combination that pivots at the origin.
    WeightedCombination,
    /// Monotone auxiliary sequences built from the recurrent values.
    MonotoneSequences,
    /// Monotone rational functions used to order the regime thresholds.
    RatioFunctions,
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            LemmaId::ScalarBounds => "scalar-bounds",
            LemmaId::StepBounds => "step-bounds",
            LemmaId::WeightedCombination => "weighted-combination",
            LemmaId::MonotoneSequences => "monotone-sequences",
            LemmaId::RatioFunctions => "ratio-functions",
        };
        f.write_str(name)
    }
}

/// One failed inequality: the parameters it failed at and both sides.
#[derive(Debug, Clone)]
pub struct Violation {
    pub params: String,
    pub lhs: Rat,
    pub rhs: Rat,
}

/// Outcome of checking one inequality group over its sample domain.
#[derive(Debug, Clone)]
pub struct LemmaReport {
    pub lemma_id: LemmaId,
    pub domain_sampled: String,
    pub violations: Vec<Violation>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

struct Checker {
    report: LemmaReport,
}

impl Checker {
    fn new(lemma_id: LemmaId, domain: String) -> Self {
        Checker {
            report: LemmaReport {
                lemma_id,
                domain_sampled: domain,
                violations: Vec::new(),
            },
        }
    }

    /// Requires `lhs <= rhs` (or strict when asked); records a violation
    /// otherwise.
    fn expect_le(&mut self, strict: bool, params: impl Fn() -> String, lhs: &Rat, rhs: &Rat) {
        let ok = if strict { lhs < rhs } else { lhs <= rhs };
        if !ok {
            self.report.violations.push(Violation {
                params: params(),
                lhs: lhs.clone(),
                rhs: rhs.clone(),
            });
        }
    }

    fn finish(self) -> LemmaReport {
        self.report
    }
}

/// The default exact sample grid: 1/400 steps across `[-1/4, 3/4]` merged
/// with 1/100 steps across `[0, 4]`, deduplicated. It brackets both
/// boundary values `-1/4` and `0` exactly.
pub fn default_gamma_grid() -> Vec<Rat> {
    let mut set = BTreeSet::new();
    for i in 0..=400i64 {
        set.insert(rat(-100 + i, 400));
        set.insert(rat(i, 100));
    }
    set.into_iter().collect()
}

/// Pointwise bounds: `s_m >= 2^(1-m)` on the whole domain (equality at the
/// left endpoint), `s_m < 1` strictly for `m >= 2` on `[-1/4, 0)`, and
/// `s_m > 1` strictly for `m >= 2` on `(0, infinity)`.
pub fn check_scalar_bounds(m_max: usize, grid: &[Rat]) -> LemmaReport {
    let mut c = Checker::new(
        LemmaId::ScalarBounds,
        format!("{} grid points, m up to {m_max}", grid.len()),
    );
    let zero = Rat::zero();
    let one = rat_int(1);
    for g in grid {
        let vals = s_values(g, m_max);
        for (m, v) in vals.iter().enumerate() {
            let floor = two_pow(1 - m as i64);
            c.expect_le(false, || format!("m={m}, gamma={g}, floor"), &floor, v);
            if m >= 2 {
                if g < &zero {
                    c.expect_le(true, || format!("m={m}, gamma={g}, below one"), v, &one);
                } else if g > &zero {
                    c.expect_le(true, || format!("m={m}, gamma={g}, above one"), &one, v);
                }
            }
        }
    }
    c.finish()
}

/// Bounds between consecutive values: `s_(m+2) >= -gamma s_m`,
/// `s_(m+1) >= s_m / 2`, and `s_(m+1) <= (1 + m (1 + 4 gamma)) s_m / 2`,
/// all on the whole domain.
pub fn check_step_bounds(m_max: usize, grid: &[Rat]) -> LemmaReport {
    let mut c = Checker::new(
        LemmaId::StepBounds,
        format!("{} grid points, m up to {m_max}", grid.len()),
    );
    let half = rat(1, 2);
    for g in grid {
        let vals = s_values(g, m_max);
        let weight = rat_int(1) + rat_int(4) * g;
        for m in 0..m_max {
            let lower = &vals[m] * &half;
            c.expect_le(false, || format!("m={m}, gamma={g}, halving"), &lower, &vals[m + 1]);
            let factor = rat_int(1) + rat_int(m as i64) * &weight;
            let upper = &vals[m] * &factor * &half;
            c.expect_le(false, || format!("m={m}, gamma={g}, growth cap"), &vals[m + 1], &upper);
            if m + 2 <= m_max {
                let mixed = -g * &vals[m];
                c.expect_le(
                    false,
                    || format!("m={m}, gamma={g}, two-step"),
                    &mixed,
                    &vals[m + 2],
                );
            }
        }
    }
    c.finish()
}

/// The weighted combination `-gamma (2^m - 1) s_(m-1) + s_(m+1)` is at
/// least 1 on `[-1/4, 0]` and at most 1 on `[0, infinity)`, for `m >= 2`.
pub fn check_weighted_combination(m_max: usize, grid: &[Rat]) -> LemmaReport {
    let mut c = Checker::new(
        LemmaId::WeightedCombination,
        format!("{} grid points, m in 2..={m_max}", grid.len()),
    );
    let zero = Rat::zero();
    let one = rat_int(1);
    for g in grid {
        let vals = s_values(g, m_max + 1);
        for m in 2..=m_max {
            let expr = -g * (two_pow(m as i64) - rat_int(1)) * &vals[m - 1] + vals[m + 1].clone();
            if g <= &zero {
                c.expect_le(false, || format!("m={m}, gamma={g}, lower"), &one, &expr);
            }
            if g >= &zero {
                c.expect_le(false, || format!("m={m}, gamma={g}, upper"), &expr, &one);
            }
        }
    }
    c.finish()
}

/// Monotonicity of four auxiliary sequences in `m`:
/// `a_m = (2^m s_(m+1) - 1)/(2^m - 1)` non-increasing on `[-1/4, 0]`;
/// `b_m = (2^m s_(m+1) - 1)/(m (m + 1))` non-decreasing on the whole
/// domain, with `b_1 = b_2 = (1 + 4 gamma)/2` identically;
/// `c_m = (s_m - 1)/m` non-decreasing from `m = 3` on `[-1/4, 0)`;
/// `d_m = (s_(m+1) - 1)/(2^(-m) - 1)` non-decreasing on `[-1/4, 0)` and
/// non-increasing on `(0, infinity)`.
pub fn check_monotone_sequences(m_max: usize, grid: &[Rat]) -> LemmaReport {
    let mut c = Checker::new(
        LemmaId::MonotoneSequences,
        format!("{} grid points, m up to {m_max}", grid.len()),
    );
    let zero = Rat::zero();
    for g in grid {
        let vals = s_values(g, m_max + 1);
        let a = |m: usize| {
            (two_pow(m as i64) * &vals[m + 1] - rat_int(1)) / (two_pow(m as i64) - rat_int(1))
        };
        let b = |m: usize| {
            (two_pow(m as i64) * &vals[m + 1] - rat_int(1)) / rat_int((m * (m + 1)) as i64)
        };
        let cm = |m: usize| (&vals[m] - rat_int(1)) / rat_int(m as i64);
        let d = |m: usize| (&vals[m + 1] - rat_int(1)) / (two_pow(-(m as i64)) - rat_int(1));

        let expected = (rat_int(1) + rat_int(4) * g) / rat_int(2);
        let b1 = b(1);
        c.expect_le(false, || format!("gamma={g}, b1 pinned low"), &b1, &expected);
        c.expect_le(false, || format!("gamma={g}, b1 pinned high"), &expected, &b1);

        for m in 1..m_max {
            if g <= &zero {
                let (a1, a2) = (a(m), a(m + 1));
                c.expect_le(false, || format!("m={m}, gamma={g}, a"), &a2, &a1);
            }
            let (b1, b2) = (b(m), b(m + 1));
            c.expect_le(false, || format!("m={m}, gamma={g}, b"), &b1, &b2);
            if m >= 3 && g < &zero && m < m_max {
                let (c1, c2) = (cm(m), cm(m + 1));
                c.expect_le(false, || format!("m={m}, gamma={g}, c"), &c1, &c2);
            }
            let (d1, d2) = (d(m), d(m + 1));
            if g < &zero {
                c.expect_le(false, || format!("m={m}, gamma={g}, d neg"), &d1, &d2);
            } else if g > &zero {
                c.expect_le(false, || format!("m={m}, gamma={g}, d pos"), &d2, &d1);
            }
        }
    }
    c.finish()
}

/// Monotonicity of the two rational shapes that order the thresholds:
/// `f(n) = (n^(a-b) - 1)/(n^a - 1)` strictly decreasing in `n > 1` with
/// limit `(a - b)/a` at `n = 1`, and `g(x) = x alpha^x / (alpha^x - 1)`
/// strictly increasing in `x` for any positive base `alpha != 1`.
pub fn check_ratio_functions() -> LemmaReport {
    let mut c = Checker::new(
        LemmaId::RatioFunctions,
        "f over 10 rational n >= 1, exponents a <= 8; g over x = 1..=10, five bases".into(),
    );
    let n_grid: Vec<Rat> = vec![
        rat(9, 8),
        rat(5, 4),
        rat(3, 2),
        rat_int(2),
        rat(5, 2),
        rat_int(3),
        rat_int(4),
        rat_int(6),
        rat_int(8),
    ];
    for a in [2u32, 3, 4, 6, 8] {
        for b in 1..a {
            let f = |n: &Rat| {
                (pow_u(n, a - b) - rat_int(1)) / (pow_u(n, a) - rat_int(1))
            };
            // The n = 1 limit is (a - b)/a and starts the chain.
            let mut prev = rat((a - b) as i64, a as i64);
            for n in &n_grid {
                let cur = f(n);
                c.expect_le(true, || format!("a={a}, b={b}, n={n}, f"), &cur, &prev);
                prev = cur;
            }
        }
    }
    for alpha in [rat(1, 3), rat(1, 2), rat(3, 2), rat_int(2), rat_int(3)] {
        let gfun = |x: u32| {
            let ax = pow_u(&alpha, x);
            rat_int(x as i64) * &ax / (&ax - rat_int(1))
        };
        let mut prev = gfun(1);
        for x in 2..=10u32 {
            let cur = gfun(x);
            c.expect_le(true, || format!("alpha={alpha}, x={x}, g"), &prev, &cur);
            prev = cur;
        }
    }
    c.finish()
}

/// Runs every inequality group over the default grid and returns the five
/// reports in a fixed order.
pub fn run_all(m_max: usize) -> Vec<LemmaReport> {
    let grid = default_gamma_grid();
    vec![
        check_scalar_bounds(m_max, &grid),
        check_step_bounds(m_max, &grid),
        check_weighted_combination(m_max, &grid),
        check_monotone_sequences(m_max, &grid),
        check_ratio_functions(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::to_f64;
    use crate::spoly::s_eval;

    #[test]
    fn grid_shape() {
        let grid = default_gamma_grid();
        assert_eq!(grid.len(), 726);
        assert_eq!(grid.first().unwrap(), &rat(-1, 4));
        assert_eq!(grid.last().unwrap(), &rat_int(4));
        assert!(grid.contains(&Rat::zero()));
        assert!(grid.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn all_groups_pass_on_default_grid() {
        for report in run_all(12) {
            assert!(
                report.passed(),
                "{} violated: {:?}",
                report.lemma_id,
                report.violations.first()
            );
        }
    }

    #[test]
    fn left_endpoint_attains_floor_exactly() {
        let q = rat(-1, 4);
        let vals = s_values(&q, 20);
        for (m, v) in vals.iter().enumerate() {
            assert_eq!(v, &two_pow(1 - m as i64), "m={m}");
        }
    }

    #[test]
    fn weighted_combination_degenerate_case_is_identity() {
        // At m = 2 the combination collapses to 1 for every gamma.
        for g in default_gamma_grid() {
            let vals = s_values(&g, 3);
            let expr = -&g * (two_pow(2) - rat_int(1)) * &vals[1] + vals[3].clone();
            assert_eq!(expr, rat_int(1), "gamma={g}");
        }
    }

    #[test]
    fn point_values_match_hand_computation() {
        // s_5(-1/10) = 1 + 5 gamma + 5 gamma^2 = 11/20.
        assert_eq!(s_eval(5, &rat(-1, 10)), rat(11, 20));
        // The weighted combination at m = 3, gamma = -1/5 is 28/25.
        let g = rat(-1, 5);
        let vals = s_values(&g, 4);
        let expr = -&g * (two_pow(3) - rat_int(1)) * &vals[2] + vals[4].clone();
        assert_eq!(expr, rat(28, 25));
        assert_eq!(to_f64(&expr), 1.12);
    }

    #[test]
    fn ratio_function_point_values() {
        // f with a = 4, b = 2 at n = 2: (4 - 1)/(16 - 1) = 1/5.
        let f = (pow_u(&rat_int(2), 2) - rat_int(1)) / (pow_u(&rat_int(2), 4) - rat_int(1));
        assert_eq!(f, rat(1, 5));
        // g with alpha = 2: g(1) = 2, g(2) = 8/3.
        let g1 = rat_int(1) * rat_int(2) / rat_int(1);
        assert_eq!(g1, rat_int(2));
        let g2 = rat_int(2) * rat_int(4) / rat_int(3);
        assert_eq!(g2, rat(8, 3));
        assert!(g1 < g2);
    }

    #[test]
    fn growth_cap_example() {
        // gamma = 1, m = 3: s_4 = 7 and the cap is (1 + 3 * 5) * s_3 / 2 = 32.
        let vals = s_values(&rat_int(1), 4);
        assert_eq!(vals[4], rat_int(7));
        let cap = (rat_int(1) + rat_int(3) * rat_int(5)) * &vals[3] / rat_int(2);
        assert_eq!(cap, rat_int(32));
        // Equality case of the cap at the left endpoint.
        let q = rat(-1, 4);
        let vals = s_values(&q, 10);
        for m in 0..10 {
            let cap = (rat_int(1)
                + rat_int(m as i64) * (rat_int(1) + rat_int(4) * &q))
                * &vals[m]
                / rat_int(2);
            assert_eq!(vals[m + 1], cap, "m={m}");
        }
    }

    #[test]
    fn b_sequence_shares_first_two_terms() {
        for g in [rat(-1, 4), rat(-1, 8), Rat::zero(), rat(3, 7), rat_int(2)] {
            let vals = s_values(&g, 3);
            let b1 = (two_pow(1) * &vals[2] - rat_int(1)) / rat_int(2);
            let b2 = (two_pow(2) * &vals[3] - rat_int(1)) / rat_int(6);
            assert_eq!(b1, b2, "gamma={g}");
            assert_eq!(b1, (rat_int(1) + rat_int(4) * &g) / rat_int(2));
        }
    }

    #[test]
    fn violations_are_reported_not_panicked() {
        // Deliberately test the checker plumbing with a false claim.
        let mut c = Checker::new(LemmaId::ScalarBounds, "plumbing".into());
        c.expect_le(false, || "two above one".into(), &rat_int(2), &rat_int(1));
        let r = c.finish();
        assert!(!r.passed());
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].lhs, rat_int(2));
        assert!(format!("{}", r.lemma_id).contains("scalar-bounds"));
    }
}
