//! Closed-form rational Khovanov homology of `P(-l, m, n)`.
//!
//! The homology splits as `q^σL t^τL V[L] ⊕ q^σU t^τU V[U]` where `L` lives in the top two
//! δ-gradings and `U` in the bottom two.

use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bigraded::BigradedSpace;
use crate::diagram;
use crate::seqcalc::{basic_sequence, build_space, BasicKind, EMap, GradedSequence, SeqError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormulaError {
    #[error("l must be ≥ 2 (got {0})")]
    LTooSmall(i64),
    #[error("need l ≤ m ≤ n, got ({l},{m},{n}); use the oracle for other pretzels")]
    OutOfRange { l: i64, m: i64, n: i64 },
    #[error("orientation {pattern} is not admissible for P(-{l},{m},{n})")]
    InvalidOrientation {
        l: i64,
        m: i64,
        n: i64,
        pattern: Orientation,
    },
    #[error("shift is not integral")]
    NonIntegralShift,
    #[error(transparent)]
    Seq(#[from] SeqError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    RR,
    LL,
    LR,
    RL,
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Orientation {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_uppercase().as_str() {
            "RR" => Ok(Self::RR),
            "LL" => Ok(Self::LL),
            "LR" => Ok(Self::LR),
            "RL" => Ok(Self::RL),
            _ => Err(format!(
                "unknown orientation `{s}` (expected RR, LL, LR or RL)"
            )),
        }
    }
}

/// `P(-l, m, n)` with an orientation pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PretzelSpec {
    pub l: i64,
    pub m: i64,
    pub n: i64,
    pub pattern: Orientation,
}

impl PretzelSpec {
    /// The default orientation for the parities of `(l, m, n)`.
    pub fn new(l: i64, m: i64, n: i64) -> Self {
        Self {
            l,
            m,
            n,
            pattern: orientation_pattern(l, m, n),
        }
    }

    pub fn with_pattern(l: i64, m: i64, n: i64, pattern: Orientation) -> Self {
        Self { l, m, n, pattern }
    }

    pub fn diagram(&self) -> Result<diagram::LinkDiagram, diagram::DiagramError> {
        diagram::pretzel_diagram(-self.l, self.m, self.n, self.pattern)
    }
}

impl fmt::Display for PretzelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P(-{},{},{})_{}", self.l, self.m, self.n, self.pattern)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GradingShifts {
    pub sigma_l: i64,
    pub tau_l: i64,
    pub sigma_u: i64,
    pub tau_u: i64,
    pub delta_max: i64,
    pub n_minus: i64,
}

fn odd(x: i64) -> bool {
    x.rem_euclid(2) == 1
}

/// The orientation used by the formulas. `(odd, even, even)` defaults to LR; LL is also valid.
pub fn orientation_pattern(l: i64, m: i64, n: i64) -> Orientation {
    use Orientation::*;
    match (odd(l), odd(m), odd(n)) {
        (false, _, _) => RL,
        (true, true, true) => RR,
        (true, true, false) => LR,
        (true, false, true) => LL,
        (true, false, false) => LR,
    }
}

pub fn grading_shifts(p: Orientation, l: i64, m: i64, n: i64) -> GradingShifts {
    use Orientation::*;
    let (sigma_l, tau_l, sigma_u, tau_u, delta_max, n_minus) = match p {
        RR => (
            -2 * m - 2 * n - 1,
            -m - n,
            4 * l - 2 * m - 2 * n - 1,
            2 * l - m - n + 1,
            1,
            m + n,
        ),
        LL => (
            -3 * l - 2 * m + n - 1,
            -l - m,
            l - 2 * m + n - 1,
            l - m + 1,
            n - l + 1,
            l + m,
        ),
        LR => (
            -3 * l + m - 2 * n - 1,
            -l - n,
            l + m - 2 * n - 1,
            l - n + 1,
            m - l + 1,
            l + n,
        ),
        RL => (n + m - 1, 0, 4 * l + m + n - 3, 2 * l, n + m + 1, 0),
    };
    GradingShifts {
        sigma_l,
        tau_l,
        sigma_u,
        tau_u,
        delta_max,
        n_minus,
    }
}

fn seq(v: &[i64]) -> GradedSequence {
    GradedSequence::new(v.to_vec())
}

fn a(k: i64) -> GradedSequence {
    basic_sequence(BasicKind::A, k)
}

fn b(k: i64) -> GradedSequence {
    basic_sequence(BasicKind::B, k)
}

fn c(k: i64) -> GradedSequence {
    basic_sequence(BasicKind::C, k)
}

fn rep(block: &[i64], k: i64) -> GradedSequence {
    GradedSequence::repeat(block, k)
}

fn cat(parts: &[GradedSequence]) -> GradedSequence {
    parts
        .iter()
        .fold(GradedSequence::empty(), |acc, p| acc.concat(p))
}

fn emap(items: &[(i32, u32)]) -> EMap {
    let mut e = EMap::new();
    for &(k, v) in items {
        if v > 0 {
            *e.entry(k).or_insert(0) += v;
        }
    }
    e
}

/// `(1) c_{l-4} ((l-2)/2)^k` for even `l`. At `l = 2` the length of `c_{l-4}` is `-2`,
/// read as dropping two entries of the constant block that follows.
fn even_head(l: i64, k: i64) -> GradedSequence {
    cat(&[seq(&[1]), c(l - 4), rep(&[(l - 2) / 2], k + (l - 4).min(0))])
}

/// The sequence and exceptional map of the lower summand `L_{l,m,n}`.
pub fn lower_summand(l: i64, m: i64, n: i64) -> Result<(GradedSequence, EMap), FormulaError> {
    check_range(l, m, n)?;
    let lo = odd(l);
    let core_odd = || cat(&[a(l - 1), rep(&[(l - 1) / 2], 2), a(l - 1).reverse()]);
    let core_even = || cat(&[even_head(l, 3), seq(&[l / 2]), b(l).reverse()]);
    let r = if m != l {
        if lo {
            (core_odd(), EMap::new())
        } else {
            (core_even(), emap(&[(1, 1)]))
        }
    } else if lo {
        let s = cat(&[core_odd(), rep(&[0], n - l), seq(&[1])]);
        let end = s.end();
        (s, emap(&[(end, 1)]))
    } else if odd(n) {
        (
            cat(&[core_even(), rep(&[0, 1], (n - l - 1) / 2)]),
            emap(&[(1, 1)]),
        )
    } else if n != l {
        let s = cat(&[core_even(), rep(&[0, 1], (n - l) / 2)]);
        let end = s.end();
        (s, emap(&[(1, 1), (end, 1)]))
    } else {
        let s = core_even().add(&seq(&[0, 0, 1]), core_even().len() as i32 - 3)?;
        let end = s.end();
        (s, emap(&[(1, 1), (end, 2)]))
    };
    Ok(r)
}

/// The sequence and exceptional map of the upper summand `U_{l,m,n}`.
pub fn upper_summand(l: i64, m: i64, n: i64) -> Result<(GradedSequence, EMap), FormulaError> {
    check_range(l, m, n)?;
    let g = m - l;
    let h = n - m;
    let (s, e): (GradedSequence, Vec<(i32, u32)>) = match (odd(l), odd(m), odd(n)) {
        (true, true, true) => {
            let s = cat(&[a(g), rep(&[g / 2], h), a(g).reverse()]);
            let end = s.end();
            (s, vec![(end, 1)])
        }
        (true, true, false) => {
            let s = cat(&[a(g), rep(&[g / 2], h - 1), c(g).reverse()]);
            (s, vec![((g + h) as i32, 1)])
        }
        (true, false, true) => {
            let s = cat(&[
                a(g - 1),
                rep(&[(g + 1) / 2, (g - 1) / 2], (h + 1) / 2),
                c(g - 1).reverse(),
            ]);
            (s, vec![(g as i32, 1)])
        }
        (true, false, false) => {
            let s = cat(&[
                a(g - 1),
                rep(&[(g + 1) / 2, (g - 1) / 2], h / 2),
                seq(&[(g + 1) / 2]),
                c(g - 1).reverse(),
            ]);
            // g = 1, h = 0: both pairs would sit on an entry of rank 1; see `upper_space`
            let e = if g == 1 && h == 0 {
                vec![(1, 1)]
            } else {
                vec![(g as i32, 1), ((g + h) as i32, 1)]
            };
            (s, e)
        }
        (false, true, true) => {
            let s = cat(&[
                b(g + 1),
                rep(&[(g + 1) / 2, (g - 1) / 2], h / 2),
                c(g - 1).reverse(),
            ]);
            (s, vec![])
        }
        (false, true, false) => {
            let s = cat(&[
                b(g + 1),
                rep(&[(g + 1) / 2, (g - 1) / 2], (h - 1) / 2),
                c(g).reverse(),
            ]);
            (s, vec![((g + h + 1) as i32, 1)])
        }
        (false, false, true) => {
            let s = cat(&[
                b(g),
                rep(&[(g + 2) / 2, ((g - 2) / 2).max(0)], (h + 1) / 2),
                c(g - 1).reverse(),
            ]);
            (s, vec![((g + 1) as i32, 1)])
        }
        (false, false, false) => {
            let s = cat(&[
                b(g),
                rep(&[(g + 2) / 2, ((g - 2) / 2).max(0)], h / 2),
                seq(&[(g + 2) / 2]),
                a(g).reverse(),
            ]);
            let end = s.end();
            if g == 0 {
                // the last instance of (g+2)/2 is the very last index, counted once
                let e = if end == 1 {
                    vec![(1, 1)]
                } else {
                    vec![(1, 1), (end, 1)]
                };
                (s, e)
            } else {
                (
                    s,
                    vec![((g + 1) as i32, 1), ((g + h + 1) as i32, 1), (end, 1)],
                )
            }
        }
    };
    if s.values().iter().all(|&v| v == 0) {
        return Ok((GradedSequence::empty(), EMap::new()));
    }
    Ok((s, emap(&e)))
}

/// `U_{l,m,n}` as a bigraded space. For odd `l` and `m = n = l + 1` the second exceptional
/// pair in t-grading zero lies one δ-step above the first.
pub fn upper_space(l: i64, m: i64, n: i64) -> Result<BigradedSpace, FormulaError> {
    let (s, e) = upper_summand(l, m, n)?;
    let mut v = build_space(&s, &e)?;
    if odd(l) && m == l + 1 && n == m {
        v = v.direct_sum(&BigradedSpace::from_terms([((0, 2), 1), ((0, 4), 1)]));
    }
    Ok(v)
}

fn check_range(l: i64, m: i64, n: i64) -> Result<(), FormulaError> {
    if l < 2 {
        return Err(FormulaError::LTooSmall(l));
    }
    if !(l <= m && m <= n) {
        return Err(FormulaError::OutOfRange { l, m, n });
    }
    Ok(())
}

/// `Kh(P(-l, m, n))` split into its shifted lower and upper parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PretzelHomology {
    pub spec: PretzelSpec,
    pub shifts: GradingShifts,
    pub lower: BigradedSpace,
    pub upper: BigradedSpace,
}

impl PretzelHomology {
    pub fn total(&self) -> BigradedSpace {
        self.lower.direct_sum(&self.upper)
    }
}

/// The main formula for `2 ≤ l ≤ m ≤ n` in the default orientation.
pub fn assemble_parts(l: i64, m: i64, n: i64) -> Result<PretzelHomology, FormulaError> {
    check_range(l, m, n)?;
    let spec = PretzelSpec::new(l, m, n);
    let sh = grading_shifts(spec.pattern, l, m, n);
    let (ls, le) = lower_summand(l, m, n)?;
    let lower = build_space(&ls, &le)?.shift(sh.sigma_l as i32, sh.tau_l as i32);
    let upper = upper_space(l, m, n)?.shift(sh.sigma_u as i32, sh.tau_u as i32);
    Ok(PretzelHomology {
        spec,
        shifts: sh,
        lower,
        upper,
    })
}

/// `Kh(P(-l, m, n))` for `2 ≤ l ≤ m`, any admissible orientation. `n < m = l` is allowed.
pub fn assemble(spec: &PretzelSpec) -> Result<BigradedSpace, FormulaError> {
    let PretzelSpec { l, m, n, pattern } = *spec;
    if l < 2 {
        return Err(FormulaError::LTooSmall(l));
    }
    let default = orientation_pattern(l, m, n);
    let base = if m == l && n < l {
        if n < 0 {
            return Err(FormulaError::OutOfRange { l, m, n });
        }
        if odd(l) {
            kh_m_equals_l_odd(l, n)?
        } else {
            kh_m_equals_l_even(l, n)?
        }
    } else {
        assemble_parts(l, m, n)?.total()
    };
    if pattern == default {
        return Ok(base);
    }
    if !diagram::admissible_patterns(-l, m, n).contains(&pattern) {
        return Err(FormulaError::InvalidOrientation { l, m, n, pattern });
    }
    // same cube, different orientation: only n_- moves
    let dn = n_minus(pattern, l, m, n) - n_minus(default, l, m, n);
    Ok(base.shift((-3 * dn) as i32, (-dn) as i32))
}

fn n_minus(p: Orientation, l: i64, m: i64, n: i64) -> i64 {
    grading_shifts(p, l, m, n).n_minus
}

/// `Kh(P(-l, l, n))` for odd `l` and any `n ≥ 0`.
pub fn kh_m_equals_l_odd(l: i64, n: i64) -> Result<BigradedSpace, FormulaError> {
    if l < 2 {
        return Err(FormulaError::LTooSmall(l));
    }
    let base = cat(&[a(l - 1), rep(&[(l - 1) / 2], 2), a(l - 1).reverse()]);
    let k = (l + n + 1) as i32;
    let s = base.add(&seq(&[1]), k - 1)?;
    let v = build_space(&s, &emap(&[(k, 1)]))?;
    Ok(v.shift((-2 * l - 2 * n - 1) as i32, (-l - n) as i32))
}

/// `Kh(P(-l, l, n))_{RL}` for even `l`; `n ≥ l` uses the main formula.
pub fn kh_m_equals_l_even(l: i64, n: i64) -> Result<BigradedSpace, FormulaError> {
    if l < 2 {
        return Err(FormulaError::LTooSmall(l));
    }
    if n >= l {
        return assemble_parts(l, l, n).map(|h| h.total());
    }
    // as in `even_head`, each c_{-2} at l = 2 removes two entries of the constant block
    let cseq = cat(&[
        seq(&[1]),
        c(l - 4),
        rep(&[(l - 2) / 2], 6 + 2 * (l - 4).min(0)),
        c(l - 4).reverse(),
        seq(&[0, 1]),
    ]);
    let d: Vec<i64> = if odd(n) {
        (0..n).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect()
    } else {
        let mut v: Vec<i64> = (0..n).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
        v.push(2);
        v
    };
    let s = cseq.add(&seq(&d), l as i32)?;
    let end = s.end();
    let mut e = emap(&[(1, 1), (end, 1)]);
    if !odd(n) {
        *e.entry((l + n + 1) as i32).or_insert(0) += 2;
    }
    let v = build_space(&s, &e)?;
    Ok(v.shift((l + n - 1) as i32, 0))
}

/// P(-l, m, n) is quasi-alternating iff `l > min(m, n)`.
pub fn is_quasi_alternating(l: i64, m: i64, n: i64) -> bool {
    l > m.min(n)
}

/// `(a, b)` with `Kh(L') = q^a t^b Kh(L)` after reversing a sub-link whose linking number
/// with the rest is `lk` (measured in the original orientation).
pub fn reorient_shift(lk: Rational64) -> Result<(i64, i64), FormulaError> {
    let a = lk * Rational64::from_integer(-6);
    let b = lk * Rational64::from_integer(-2);
    if !(a.fract().is_zero() && b.fract().is_zero()) {
        return Err(FormulaError::NonIntegralShift);
    }
    Ok((a.to_integer(), b.to_integer()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> GradedSequence {
        x.parse().unwrap()
    }

    #[test]
    fn patterns_and_shifts() {
        use Orientation::*;
        assert_eq!(orientation_pattern(3, 5, 7), RR);
        assert_eq!(orientation_pattern(3, 4, 7), LL);
        assert_eq!(orientation_pattern(3, 5, 6), LR);
        assert_eq!(orientation_pattern(4, 5, 7), RL);
        assert_eq!(orientation_pattern(3, 4, 6), LR);
        let sh = grading_shifts(RR, 3, 5, 7);
        assert_eq!(
            (
                sh.sigma_l,
                sh.tau_l,
                sh.sigma_u,
                sh.tau_u,
                sh.delta_max,
                sh.n_minus
            ),
            (-25, -12, -13, -5, 1, 12)
        );
        for p in [RR, LL, LR, RL] {
            for (l, m, n) in [(3, 5, 7), (2, 4, 9), (5, 5, 6)] {
                let g = grading_shifts(p, l, m, n);
                assert_eq!(g.sigma_l - 2 * g.tau_l, g.delta_max - 2);
                assert_eq!(g.sigma_u - 2 * g.tau_u, g.delta_max - 4);
            }
        }
    }

    #[test]
    fn summand_examples() {
        assert_eq!(
            lower_summand(3, 5, 7).unwrap(),
            (s("(1,0,1,1,0,1)"), EMap::new())
        );
        assert_eq!(
            lower_summand(3, 3, 5).unwrap(),
            (s("(1,0,1,1,0,1,0,0,1)"), emap(&[(9, 1)]))
        );
        assert_eq!(lower_summand(4, 6, 8).unwrap().0, s("(1,1,1,1,2,0,2,0,1)"));
        let (u, e) = upper_summand(3, 5, 7).unwrap();
        assert_eq!(u, s("(1,0,1,1,0,1)"));
        assert_eq!(e, emap(&[(6, 1)]));
    }

    #[test]
    fn reorientation() {
        assert_eq!(reorient_shift(Rational64::new(-3, 2)).unwrap(), (9, 3));
        assert_eq!(
            reorient_shift(Rational64::new(1, 3)),
            Err(FormulaError::NonIntegralShift)
        );
    }

    #[test]
    fn quasi_alternating() {
        assert!(is_quasi_alternating(3, 2, 5));
        assert!(!is_quasi_alternating(3, 5, 7));
    }
}
