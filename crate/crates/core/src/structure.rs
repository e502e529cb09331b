//! Knight's moves and exceptional pairs: decomposition of thin spaces, the lower/upper
//! split, Lee's exceptional-pair locations, and cancellation in the skein exact sequence.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::bigraded::BigradedSpace;
use crate::diagram::{LinkDiagram, Resolution};
use crate::seqcalc::{build_space, EMap, GradedSequence};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StructureError {
    #[error("space is not a sum of knight's moves and exceptional pairs: {0}")]
    NotWellStructured(String),
    #[error("space does not split into lower and upper summands: {0}")]
    UnsplittableSpace(String),
    #[error("{0} components, at most 3 supported")]
    TooManyComponents(usize),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("no-cancellation lemma violated: {0}")]
    LemmaViolated(String),
}

/// `V = V[a, E]` placed so that index `t` of `a` sits in t-grading `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    /// knight's moves plus exceptional pairs per t-grading; `start` is the lowest t
    pub a: GradedSequence,
    /// exceptional pairs per t-grading
    pub e: EMap,
    /// `(t, q)` of the bottom generator at the lowest t-grading
    pub base: (i32, i32),
}

impl Decomposition {
    fn empty() -> Self {
        Self {
            a: GradedSequence::empty(),
            e: EMap::new(),
            base: (0, 0),
        }
    }

    /// Lower δ-grading of the space.
    pub fn delta(&self) -> i32 {
        self.base.1 - 2 * self.base.0
    }

    pub fn rebuild(&self) -> BigradedSpace {
        if self.a.is_empty() {
            return BigradedSpace::new();
        }
        let t0 = self.base.0;
        let a = GradedSequence::new(self.a.values().to_vec());
        let e: EMap = self.e.iter().map(|(&t, &k)| (t - t0 + 1, k)).collect();
        build_space(&a, &e)
            .expect("decomposition is admissible")
            .shift(self.base.1, t0)
    }
}

/// Lower and upper δ-slices of a thin space as maps t -> dim, with the lower δ.
fn slices(
    v: &BigradedSpace,
) -> Result<(i32, BTreeMap<i32, u64>, BTreeMap<i32, u64>), StructureError> {
    let ds = v.delta_support();
    let d0 = match ds.iter().copied().collect::<Vec<i32>>()[..] {
        [d0, d1] if d1 == d0 + 2 => d0,
        _ => {
            return Err(StructureError::NotWellStructured(format!(
                "δ-support {ds:?} is not two adjacent gradings"
            )))
        }
    };
    let (mut lo, mut hi) = (BTreeMap::new(), BTreeMap::new());
    for ((t, q), d) in v.iter() {
        let m = if q - 2 * t == d0 { &mut lo } else { &mut hi };
        *m.entry(t).or_insert(0) += d;
    }
    Ok((d0, lo, hi))
}

fn finish(d0: i32, counts: BTreeMap<i32, (u64, u64)>) -> Decomposition {
    // counts: t -> (knights, pairs)
    let counts: BTreeMap<i32, (u64, u64)> =
        counts.into_iter().filter(|(_, (k, e))| k + e > 0).collect();
    let (Some(&t0), Some(&t1)) = (counts.keys().next(), counts.keys().last()) else {
        return Decomposition::empty();
    };
    let vals = (t0..=t1)
        .map(|t| counts.get(&t).map_or(0, |(k, e)| (k + e) as i64))
        .collect();
    let e = counts
        .iter()
        .filter(|(_, (_, e))| *e > 0)
        .map(|(&t, &(_, e))| (t, e as u32))
        .collect();
    Decomposition {
        a: GradedSequence::with_start(t0, vals),
        e,
        base: (t0, d0 + 2 * t0),
    }
}

/// `(a_V, E_V)` by the recurrence from the highest t-grading down.
pub fn decompose(v: &BigradedSpace) -> Result<Decomposition, StructureError> {
    if v.is_empty() {
        return Ok(Decomposition::empty());
    }
    let (d0, lo, hi) = slices(v)?;
    let (tmin, tmax) = v.t_range().expect("nonempty");
    let get = |m: &BTreeMap<i32, u64>, t: i32| m.get(&t).copied().unwrap_or(0) as i64;
    let mut counts = BTreeMap::new();
    let mut e_above = 0i64;
    for t in (tmin - 1..=tmax).rev() {
        let k = get(&hi, t + 1) - e_above;
        let e = get(&lo, t) - k;
        if k < 0 || e < 0 {
            return Err(StructureError::NotWellStructured(format!(
                "negative count at t = {t}"
            )));
        }
        counts.insert(t, (k as u64, e as u64));
        e_above = e;
    }
    if counts[&(tmin - 1)] != (0, 0) {
        return Err(StructureError::NotWellStructured(
            "unmatched generators at the lowest t".into(),
        ));
    }
    Ok(finish(d0, counts))
}

/// The same decomposition by the recurrence from the lowest t-grading up.
pub fn decompose_bottom_up(v: &BigradedSpace) -> Result<Decomposition, StructureError> {
    if v.is_empty() {
        return Ok(Decomposition::empty());
    }
    let (d0, lo, hi) = slices(v)?;
    let (tmin, tmax) = v.t_range().expect("nonempty");
    let get = |m: &BTreeMap<i32, u64>, t: i32| m.get(&t).copied().unwrap_or(0) as i64;
    let mut counts = BTreeMap::new();
    let mut k_below = 0i64;
    for t in tmin..=tmax + 1 {
        let e = get(&hi, t) - k_below;
        let k = get(&lo, t) - e;
        if k < 0 || e < 0 {
            return Err(StructureError::NotWellStructured(format!(
                "negative count at t = {t}"
            )));
        }
        counts.insert(t, (k as u64, e as u64));
        k_below = k;
    }
    if counts[&(tmax + 1)] != (0, 0) {
        return Err(StructureError::NotWellStructured(
            "unmatched generators at the highest t".into(),
        ));
    }
    Ok(finish(d0, counts))
}

/// Splits a space in δ-gradings `δ_max, δ_max - 2, δ_max - 4` into the lower summand
/// (top two gradings) and the upper summand (bottom two). Shared middle generators are
/// assigned with as few exceptional pairs as possible, sweeping up in t.
pub fn split_l_u(
    v: &BigradedSpace,
    delta_max: i32,
) -> Result<(BigradedSpace, BigradedSpace), StructureError> {
    let allowed: BTreeSet<i32> = [delta_max, delta_max - 2, delta_max - 4].into();
    if !v.delta_support().is_subset(&allowed) {
        return Err(StructureError::UnsplittableSpace(format!(
            "δ-support {:?} outside {allowed:?}",
            v.delta_support()
        )));
    }
    let Some((tmin, tmax)) = v.t_range() else {
        return Ok((BigradedSpace::new(), BigradedSpace::new()));
    };
    let db = delta_max - 4;
    let slice = |d: i32, t: i32| v.dim(t, d + 2 * t) as i64;
    let (b, m, top) = (
        |t| slice(db, t),
        |t| slice(db + 2, t),
        |t| slice(delta_max, t),
    );
    // x(t), y(t): exceptional pairs of L and U in t-grading t
    let mut x = 0i64;
    let mut y_prev = 0i64;
    let mut y = BTreeMap::new();
    for t in tmin - 1..=tmax + 1 {
        let d = m(t) - b(t - 1) - top(t + 1);
        let yt = (y_prev + d - x).max(0);
        if yt > b(t) {
            return Err(StructureError::UnsplittableSpace(format!(
                "too few bottom generators at t = {t}"
            )));
        }
        let x_next = x - d + yt - y_prev;
        if x_next > top(t + 1) {
            return Err(StructureError::UnsplittableSpace(format!(
                "too few top generators at t = {}",
                t + 1
            )));
        }
        y.insert(t, yt);
        x = x_next;
        y_prev = yt;
    }
    if x != 0 || y_prev != 0 {
        return Err(StructureError::UnsplittableSpace(
            "pairs left open past the highest t".into(),
        ));
    }
    let mut u = BigradedSpace::new();
    for t in tmin..=tmax {
        let (bt, yt) = (b(t) as u64, y[&t] as u64);
        let q = db + 2 * t;
        if bt > 0 {
            u.add_dim(t, q, bt);
            u.add_dim(t, q + 2, yt);
            u.add_dim(t + 1, q + 4, bt - yt);
        }
    }
    let l = v.checked_sub(&u).ok_or_else(|| {
        StructureError::UnsplittableSpace("upper summand exceeds the space".into())
    })?;
    for (name, s) in [("lower", &l), ("upper", &u)] {
        decompose(s)
            .map_err(|e| StructureError::UnsplittableSpace(format!("{name} summand: {e}")))?;
    }
    Ok((l, u))
}

/// t-gradings of the exceptional pairs of `Kh(D)` predicted from linking numbers.
pub fn expected_exceptional_t(d: &LinkDiagram) -> Result<Vec<i32>, StructureError> {
    let c = d.component_count();
    let listed = d.components().len();
    let lk = |i: usize, j: usize| {
        if i < listed && j < listed {
            d.linking_number(i, j) as i32
        } else {
            0
        }
    };
    let mut v = match c {
        1 => vec![0],
        2 => vec![0, 2 * lk(0, 1)],
        3 => {
            let (a, b, e) = (lk(0, 1), lk(0, 2), lk(1, 2));
            vec![0, 2 * (a + b), 2 * (a + e), 2 * (b + e)]
        }
        k => return Err(StructureError::TooManyComponents(k)),
    };
    v.sort_unstable();
    Ok(v)
}

/// t-gradings of exceptional pairs, with multiplicity, of a decomposed space.
pub fn exceptional_t(dec: &Decomposition) -> Vec<i32> {
    dec.e
        .iter()
        .flat_map(|(&t, &k)| std::iter::repeat(t).take(k as usize))
        .collect()
}

/// `c(t, q)` pairs `v ∈ V_{t,q}`, `w ∈ W_{t+1,q}` eliminated so that what is left is `X`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CancellationWitness {
    pub counts: BTreeMap<(i32, i32), u64>,
}

impl CancellationWitness {
    pub fn is_zero(&self) -> bool {
        self.counts.is_empty()
    }
}

/// The witness is unique when it exists: along each q, `c(t) = V + W - X - c(t-1)`.
pub fn cancellation_witness(
    v: &BigradedSpace,
    w: &BigradedSpace,
    x: &BigradedSpace,
) -> Option<CancellationWitness> {
    let mut qs = BTreeSet::new();
    let mut trange: Option<(i32, i32)> = None;
    for s in [v, w, x] {
        for ((t, q), _) in s.iter() {
            qs.insert(q);
            trange = Some(trange.map_or((t, t), |(a, b)| (a.min(t), b.max(t))));
        }
    }
    let mut counts = BTreeMap::new();
    let Some((t0, t1)) = trange else {
        return Some(CancellationWitness { counts });
    };
    for q in qs {
        let mut prev = 0i64;
        for t in t0..=t1 + 1 {
            let c = v.dim(t, q) as i64 + w.dim(t, q) as i64 - x.dim(t, q) as i64 - prev;
            if c < 0 || c > v.dim(t, q) as i64 || c > w.dim(t + 1, q) as i64 {
                return None;
            }
            if c > 0 {
                counts.insert((t, q), c as u64);
            }
            prev = c;
        }
    }
    Some(CancellationWitness { counts })
}

/// The three terms of the skein exact sequence at one crossing, shifted so that the
/// connecting map `V -> W` raises t by one and preserves q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeinTriple {
    pub w: BigradedSpace,
    pub x: BigradedSpace,
    pub v: BigradedSpace,
    pub epsilon: i64,
    pub sign: i8,
}

pub fn skein_triple<E>(
    d: &LinkDiagram,
    c: usize,
    kh: impl Fn(&LinkDiagram) -> Result<BigradedSpace, E>,
) -> Result<SkeinTriple, E>
where
    E: From<crate::diagram::DiagramError>,
{
    let d_o = d.resolve(c, Resolution::Oriented)?;
    let d_u = d.resolve(c, Resolution::Unoriented)?;
    let eps = d_u.n_minus() as i64 - d.n_minus() as i64;
    let (ko, ku, x) = (kh(&d_o)?, kh(&d_u)?, kh(d)?);
    let e = eps as i32;
    let sign = d.crossings()[c].sign;
    let (w, v) = if sign > 0 {
        (ku.shift(3 * e + 2, e + 1), ko.shift(1, 0))
    } else {
        (ko.shift(-1, 0), ku.shift(3 * e + 1, e))
    };
    Ok(SkeinTriple {
        w,
        x,
        v,
        epsilon: eps,
        sign,
    })
}

/// True iff `E_X ≥ E_V + E_W` everywhere, in which case no cancellation can occur and
/// `X = V ⊕ W` is checked.
pub fn check_no_cancellation(
    v: &BigradedSpace,
    w: &BigradedSpace,
    x: &BigradedSpace,
) -> Result<bool, StructureError> {
    let deltas: BTreeSet<i32> = v
        .delta_support()
        .union(&w.delta_support())
        .copied()
        .collect();
    if deltas.len() > 2
        || (deltas.len() == 2 && deltas.last().unwrap() - deltas.first().unwrap() != 2)
    {
        return Err(StructureError::NotApplicable(format!(
            "V and W span δ-gradings {deltas:?}"
        )));
    }
    let (dv, dw, dx) = (decompose(v)?, decompose(w)?, decompose(x)?);
    let mut need = dv.e.clone();
    for (&t, &k) in &dw.e {
        *need.entry(t).or_insert(0) += k;
    }
    let ok = need
        .iter()
        .all(|(t, &k)| dx.e.get(t).copied().unwrap_or(0) >= k);
    if ok && *x != v.direct_sum(w) {
        return Err(StructureError::LemmaViolated(
            "E_X ≥ E_V + E_W but X ≠ V ⊕ W".into(),
        ));
    }
    Ok(ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqcalc::parse_emap;

    fn sp(t: &[((i32, i32), u64)]) -> BigradedSpace {
        BigradedSpace::from_terms(t.iter().copied())
    }

    #[test]
    fn examples() {
        let d = decompose(&sp(&[((0, 0), 1), ((1, 4), 1)])).unwrap();
        assert_eq!((d.a.start(), d.a.values().to_vec()), (0, vec![1]));
        assert!(d.e.is_empty());
        let tre = sp(&[((0, 1), 1), ((0, 3), 1), ((2, 5), 1), ((3, 9), 1)]);
        let d = decompose(&tre).unwrap();
        assert_eq!((d.a.start(), d.a.values().to_vec()), (0, vec![1, 0, 1]));
        assert_eq!(d.e, parse_emap("{0:1}").unwrap());
        assert_eq!(d.rebuild(), tre);
        assert_eq!(decompose_bottom_up(&tre).unwrap(), d);
        assert!(matches!(
            decompose(&sp(&[((0, 0), 1)])),
            Err(StructureError::NotWellStructured(_))
        ));
    }

    #[test]
    fn witnesses() {
        let v = sp(&[((0, 0), 1), ((0, 2), 1)]);
        let w = sp(&[((1, 2), 1), ((1, 4), 1)]);
        assert!(cancellation_witness(&v, &w, &v.direct_sum(&w))
            .unwrap()
            .is_zero());
        // standard cancellation: exceptional pairs at t and t+1 leave a knight's move
        let c = cancellation_witness(&v, &w, &sp(&[((0, 0), 1), ((1, 4), 1)])).unwrap();
        assert_eq!(c.counts, BTreeMap::from([((0, 2), 1)]));
        assert_eq!(
            cancellation_witness(
                &sp(&[((0, 0), 1)]),
                &BigradedSpace::new(),
                &BigradedSpace::new()
            ),
            None
        );
        assert!(!check_no_cancellation(&v, &w, &sp(&[((0, 0), 1), ((1, 4), 1)])).unwrap());
        let e = BigradedSpace::new();
        assert!(check_no_cancellation(&e, &e, &e).unwrap());
    }

    #[test]
    fn split_trivial() {
        let v = sp(&[((0, 1), 1), ((0, 3), 1), ((2, 5), 1), ((3, 9), 1)]);
        let (l, u) = split_l_u(&v, 3).unwrap();
        assert_eq!((l, u.is_empty()), (v, true));
    }
}
