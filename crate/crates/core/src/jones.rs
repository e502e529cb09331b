//! Jones polynomials: the Kauffman state sum of a diagram and closed forms for
//! `T(2, l)` and `P(-l, l, 0)`.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::bigraded::LaurentPoly;
use crate::diagram::LinkDiagram;
use crate::formula::Orientation;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum JonesError {
    #[error("diagram has {crossings} crossings, limit is {max}")]
    TooLarge { crossings: usize, max: usize },
    #[error("l must be ≥ 2")]
    LTooSmall,
    #[error("pattern {0} is not LR or RL")]
    Pattern(Orientation),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JonesResult {
    pub normalized: LaurentPoly,
    /// `(q + q^-1) * normalized`, the graded Euler characteristic of Khovanov homology
    pub unnormalized: LaurentPoly,
}

/// Largest diagram accepted by `kauffman_jones`.
pub const MAX_CROSSINGS: usize = 40;

/// Open strands of a partial state: each open edge maps to the other end of its strand.
type Ends = BTreeMap<usize, usize>;

/// Connects `x` and `y` by a new arc; returns the number of circles this closes.
fn join(p: &mut Ends, x: usize, y: usize) -> u32 {
    if x == y {
        return 1;
    }
    let ux = p.get(&x).copied();
    if ux == Some(y) {
        p.remove(&x);
        p.remove(&y);
        return 1;
    }
    let a = match ux {
        Some(u) => {
            p.remove(&x);
            p.remove(&u);
            u
        }
        None => x,
    };
    let b = match p.get(&y).copied() {
        Some(u) => {
            p.remove(&y);
            p.remove(&u);
            u
        }
        None => y,
    };
    p.insert(a, b);
    p.insert(b, a);
    0
}

/// Unnormalized Jones polynomial via the Kauffman state sum, summing states that agree on
/// the boundary of the processed crossings.
pub fn kauffman_jones(d: &LinkDiagram) -> Result<JonesResult, JonesError> {
    let n = d.crossing_count();
    if n > MAX_CROSSINGS {
        return Err(JonesError::TooLarge {
            crossings: n,
            max: MAX_CROSSINGS,
        });
    }
    let circle = LaurentPoly::circle();
    let mut states: HashMap<Vec<(usize, usize)>, LaurentPoly> =
        HashMap::from([(vec![], LaurentPoly::one())]);
    for x in d.crossings() {
        let [a, b, c, e] = x.edges;
        let mut next: HashMap<Vec<(usize, usize)>, LaurentPoly> = HashMap::new();
        for (key, poly) in states {
            for (s, pairs) in [(0, [(a, b), (c, e)]), (1, [(a, e), (b, c)])] {
                let mut p: Ends = key.iter().copied().collect();
                let loops: u32 = pairs.iter().map(|&(u, v)| join(&mut p, u, v)).sum();
                let mut w = &poly * &circle.pow(loops);
                if s == 1 {
                    w = w.shift(1).scale(-1);
                }
                let k: Vec<(usize, usize)> = p.into_iter().collect();
                let slot = next.entry(k).or_insert_with(LaurentPoly::zero);
                *slot = &*slot + &w;
            }
        }
        next.retain(|_, v| !v.is_zero());
        states = next;
    }
    let sum = states.remove(&vec![]).unwrap_or_else(LaurentPoly::zero);
    let (np, nm) = (d.n_plus() as i32, d.n_minus() as i32);
    let sign = if nm % 2 == 0 { 1 } else { -1 };
    let unnormalized = (&sum * &circle.pow(d.free_loops() as u32))
        .shift(np - 2 * nm)
        .scale(sign);
    let normalized = unnormalized
        .div_circle()
        .expect("Jones polynomial is divisible by q + q^-1");
    Ok(JonesResult {
        normalized,
        unnormalized,
    })
}

/// Normalized Jones polynomial of the positive torus link `T(2, l)` in the variable `q`.
pub fn torus2_jones(l: i64) -> Result<LaurentPoly, JonesError> {
    if l < 2 {
        return Err(JonesError::LTooSmall);
    }
    let l = l as i32;
    let mut p = LaurentPoly::monomial(l - 1, 1);
    for i in 1..l {
        p.add_term(l + 2 * i + 1, if i % 2 == 1 { 1 } else { -1 });
    }
    Ok(p)
}

/// Unnormalized Jones polynomial of `P(-l, l, 0)`, the connected sum of `T(2, l)` and its
/// mirror. Reversing the outer component (RL) multiplies it by `q^{3l}`.
pub fn pretzel_ll0_jones(l: i64, pattern: Orientation) -> Result<LaurentPoly, JonesError> {
    let t = torus2_jones(l)?;
    let v = &(&t.mirror() * &t) * &LaurentPoly::circle();
    match pattern {
        Orientation::LR => Ok(v),
        Orientation::RL => Ok(v.shift(3 * l as i32)),
        p => Err(JonesError::Pattern(p)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{pretzel_diagram, torus2_diagram, UnionFind};

    /// Plain sum over all `2^n` states.
    fn naive(d: &LinkDiagram) -> LaurentPoly {
        let labels = d.edges();
        let ix: HashMap<usize, usize> = labels.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let n = d.crossing_count();
        let mut sum = LaurentPoly::zero();
        for v in 0..(1u64 << n) {
            let mut uf = UnionFind::new(labels.len());
            let mut circles = labels.len();
            for (k, x) in d.crossings().iter().enumerate() {
                let [a, b, c, e] = x.edges.map(|e| ix[&e]);
                let pairs = if v >> k & 1 == 0 {
                    [(a, b), (c, e)]
                } else {
                    [(a, e), (b, c)]
                };
                for (u, w) in pairs {
                    if uf.union(u, w) {
                        circles -= 1;
                    }
                }
            }
            let h = v.count_ones() as i32;
            let term = LaurentPoly::circle()
                .pow((circles + d.free_loops()) as u32)
                .shift(h)
                .scale(if h % 2 == 0 { 1 } else { -1 });
            sum = &sum + &term;
        }
        let nm = d.n_minus() as i32;
        sum.shift(d.n_plus() as i32 - 2 * nm)
            .scale(if nm % 2 == 0 { 1 } else { -1 })
    }

    fn lp(t: &[(i32, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(t.iter().copied())
    }

    #[test]
    fn unknot_and_trefoil() {
        assert_eq!(
            kauffman_jones(&LinkDiagram::unknot()).unwrap().unnormalized,
            LaurentPoly::circle()
        );
        let t = kauffman_jones(&torus2_diagram(3)).unwrap();
        assert_eq!(t.normalized, lp(&[(2, 1), (6, 1), (8, -1)]));
        assert_eq!(torus2_jones(2).unwrap(), lp(&[(1, 1), (5, 1)]));
    }

    #[test]
    fn torus_closed_form() {
        for l in 2..=8 {
            assert_eq!(
                kauffman_jones(&torus2_diagram(l as usize))
                    .unwrap()
                    .normalized,
                torus2_jones(l).unwrap()
            );
        }
    }

    #[test]
    fn agrees_with_naive_sum() {
        for (a, b, c) in [(-2, 3, 3), (-3, 3, 0), (-2, 2, 3), (-3, 4, 4), (-3, 4, 5)] {
            for p in crate::diagram::admissible_patterns(a, b, c) {
                let d = pretzel_diagram(a, b, c, p).unwrap();
                assert_eq!(kauffman_jones(&d).unwrap().unnormalized, naive(&d));
            }
        }
    }

    #[test]
    fn ll0_examples() {
        assert_eq!(
            pretzel_ll0_jones(3, Orientation::LR).unwrap(),
            lp(&[(7, -1), (1, 2), (-1, 2), (-7, -1)])
        );
        assert_eq!(
            pretzel_ll0_jones(2, Orientation::LR).unwrap(),
            lp(&[(5, 1), (3, 1), (1, 2), (-1, 2), (-3, 1), (-5, 1)])
        );
        assert_eq!(
            pretzel_ll0_jones(2, Orientation::RL).unwrap(),
            lp(&[(11, 1), (9, 1), (7, 2), (5, 2), (3, 1), (1, 1)])
        );
        assert_eq!(
            pretzel_ll0_jones(1, Orientation::LR),
            Err(JonesError::LTooSmall)
        );
    }

    #[test]
    fn text_format() {
        assert_eq!(
            pretzel_ll0_jones(3, Orientation::LR).unwrap().to_string(),
            "-q^-7 + 2*q^-1 + 2*q - q^7"
        );
    }
}
