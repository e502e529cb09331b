//! Integer sequences that encode thin-looking bigraded spaces: each unit at index `k`
//! is a knight's move based at `(k - 1, 2(k - 1))`, exceptional units are pairs.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::bigraded::BigradedSpace;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeqError {
    #[error("negative entry {value} at index {index}")]
    NegativeEntry { index: i32, value: i64 },
    #[error("exceptional count {e} exceeds entry {a} at index {index}")]
    ExceptionalExceedsRank { index: i32, e: u32, a: i64 },
    #[error("cannot parse `{0}`")]
    Parse(String),
}

/// A finite sequence with an explicit length (trailing zeros are kept) and first index `start`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedSequence {
    start: i32,
    values: Vec<i64>,
}

/// Exceptional-pair multiplicities, index -> count.
pub type EMap = BTreeMap<i32, u32>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasicKind {
    A,
    B,
    C,
}

impl GradedSequence {
    /// A 1-based sequence.
    pub fn new(values: Vec<i64>) -> Self {
        Self { start: 1, values }
    }

    pub fn with_start(start: i32, values: Vec<i64>) -> Self {
        Self { start, values }
    }

    pub fn empty() -> Self {
        Self::new(vec![])
    }

    /// `(v_1, ..., v_r)^m`; empty when `m <= 0`.
    pub fn repeat(block: &[i64], m: i64) -> Self {
        let mut values = vec![];
        for _ in 0..m.max(0) {
            values.extend_from_slice(block);
        }
        Self::new(values)
    }

    pub fn start(&self) -> i32 {
        self.start
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// Last index, i.e. `start + len - 1`.
    pub fn end(&self) -> i32 {
        self.start + self.values.len() as i32 - 1
    }

    pub fn get(&self, i: i32) -> i64 {
        let k = i - self.start;
        if k < 0 {
            return 0;
        }
        self.values.get(k as usize).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(k, &v)| (self.start + k as i32, v))
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut values = self.values.clone();
        values.extend_from_slice(&other.values);
        Self {
            start: self.start,
            values,
        }
    }

    pub fn power(&self, m: i64) -> Self {
        Self {
            start: self.start,
            ..Self::repeat(&self.values, m)
        }
    }

    /// `x̄`: the same entries in reverse order.
    pub fn reverse(&self) -> Self {
        Self {
            start: self.start,
            values: self.values.iter().rev().copied().collect(),
        }
    }

    /// `r_i = a_i + b_{i - offset}`, supported on the union of both supports.
    pub fn add(&self, b: &Self, offset: i32) -> Result<Self, SeqError> {
        let lo = self.start.min(b.start + offset);
        let hi = self.end().max(b.end() + offset);
        let values: Vec<i64> = (lo..=hi).map(|i| self.get(i) + b.get(i - offset)).collect();
        let r = Self { start: lo, values };
        r.check_nonnegative()?;
        Ok(r)
    }

    fn check_nonnegative(&self) -> Result<(), SeqError> {
        match self.iter().find(|&(_, v)| v < 0) {
            Some((index, value)) => Err(SeqError::NegativeEntry { index, value }),
            None => Ok(()),
        }
    }

    /// `Ṽ[a]`: entry `a_k` contributes `a_k` generators at `(t, q) = (k - 1, 2(k - 1))`.
    pub fn tilde_space(&self) -> Result<BigradedSpace, SeqError> {
        self.check_nonnegative()?;
        Ok(BigradedSpace::from_terms(
            self.iter().map(|(k, v)| ((k - 1, 2 * (k - 1)), v as u64)),
        ))
    }
}

impl fmt::Display for GradedSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for GradedSequence {
    type Err = SeqError;

    fn from_str(s: &str) -> Result<Self, SeqError> {
        let bad = || SeqError::Parse(s.to_string());
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .ok_or_else(bad)?;
        if inner.trim().is_empty() {
            return Ok(Self::empty());
        }
        let values = inner
            .split(',')
            .map(|x| x.trim().parse().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        Ok(Self::new(values))
    }
}

/// Parses `{3:1,9:2}`.
pub fn parse_emap(s: &str) -> Result<EMap, SeqError> {
    let bad = || SeqError::Parse(s.to_string());
    let inner = s
        .trim()
        .strip_prefix('{')
        .and_then(|x| x.strip_suffix('}'))
        .ok_or_else(bad)?;
    let mut e = EMap::new();
    for item in inner.split(',').filter(|x| !x.trim().is_empty()) {
        let (k, v) = item.split_once(':').ok_or_else(bad)?;
        let k: i32 = k.trim().parse().map_err(|_| bad())?;
        let v: u32 = v.trim().parse().map_err(|_| bad())?;
        if v > 0 {
            *e.entry(k).or_insert(0) += v;
        }
    }
    Ok(e)
}

pub fn format_emap(e: &EMap) -> String {
    let parts: Vec<String> = e
        .iter()
        .filter(|(_, &v)| v > 0)
        .map(|(k, v)| format!("{k}:{v}"))
        .collect();
    format!("{{{}}}", parts.join(","))
}

/// The first `k` entries of `a = (1,0,2,1,3,2,...)`, `b = (1,0,2,0,3,1,4,2,...)`, `c = (1,1,2,2,...)`.
pub fn basic_sequence(kind: BasicKind, k: i64) -> GradedSequence {
    let values = (0..k.max(0))
        .map(|i| match kind {
            BasicKind::A => {
                if i % 2 == 0 {
                    i / 2 + 1
                } else {
                    (i - 1) / 2
                }
            }
            BasicKind::B => if i % 2 == 0 {
                i / 2 + 1
            } else {
                (i - 1) / 2 - 1
            }
            .max(0),
            BasicKind::C => i / 2 + 1,
        })
        .collect();
    GradedSequence::new(values)
}

/// `V[a, E]`: with `a' = a - E`, every unit of `a'_k` gives a knight's move
/// `(k-1, 2(k-1)) + (k, 2(k-1) + 4)`, every unit of `E_k` a pair `(k-1, 2(k-1)) + (k-1, 2k)`.
pub fn build_space(a: &GradedSequence, e: &EMap) -> Result<BigradedSpace, SeqError> {
    a.check_nonnegative()?;
    let mut v = BigradedSpace::new();
    for (&k, &n) in e {
        let ak = a.get(k);
        if (n as i64) > ak {
            return Err(SeqError::ExceptionalExceedsRank {
                index: k,
                e: n,
                a: ak,
            });
        }
        v.add_dim(k - 1, 2 * (k - 1), n as u64);
        v.add_dim(k - 1, 2 * k, n as u64);
    }
    for (k, ak) in a.iter() {
        let knights = (ak - e.get(&k).copied().unwrap_or(0) as i64) as u64;
        v.add_dim(k - 1, 2 * (k - 1), knights);
        v.add_dim(k, 2 * (k - 1) + 4, knights);
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> GradedSequence {
        s.parse().unwrap()
    }

    #[test]
    fn basics() {
        assert_eq!(basic_sequence(BasicKind::A, 6), seq("(1,0,2,1,3,2)"));
        assert_eq!(
            basic_sequence(BasicKind::B, 10),
            seq("(1,0,2,0,3,1,4,2,5,3)")
        );
        assert_eq!(basic_sequence(BasicKind::C, 5), seq("(1,1,2,2,3)"));
        assert!(basic_sequence(BasicKind::A, 0).is_empty());
        assert!(basic_sequence(BasicKind::C, -2).is_empty());
    }

    #[test]
    fn concat_power_reverse() {
        let a = basic_sequence(BasicKind::A, 2);
        let s = a
            .concat(&GradedSequence::repeat(&[1], 2))
            .concat(&a.reverse());
        assert_eq!(s, seq("(1,0,1,1,0,1)"));
        assert_eq!(seq("(0,1)").power(3), seq("(0,1,0,1,0,1)"));
        assert_eq!(seq("(1,0,0)").concat(&seq("(2)")).len(), 4);
    }

    #[test]
    fn add_offsets() {
        let c = seq("(1,1,1,1,1,1,1,0,1)");
        assert_eq!(c.add(&seq("(2)"), 4).unwrap(), seq("(1,1,1,1,3,1,1,0,1)"));
        assert_eq!(
            seq("(1,0)").add(&seq("(-1)"), 1),
            Err(SeqError::NegativeEntry {
                index: 2,
                value: -1
            })
        );
    }

    #[test]
    fn building() {
        let v = build_space(&seq("(1)"), &EMap::new()).unwrap();
        assert_eq!(v, BigradedSpace::from_terms([((0, 0), 1), ((1, 4), 1)]));
        let e: EMap = [(1, 1)].into_iter().collect();
        let v = build_space(&seq("(1)"), &e).unwrap();
        assert_eq!(v, BigradedSpace::from_terms([((0, 0), 1), ((0, 2), 1)]));
        let e: EMap = [(1, 2)].into_iter().collect();
        assert!(matches!(
            build_space(&seq("(1)"), &e),
            Err(SeqError::ExceptionalExceedsRank { .. })
        ));
        let t = seq("(1,0,2)").tilde_space().unwrap();
        assert_eq!(t, BigradedSpace::from_terms([((0, 0), 1), ((2, 4), 2)]));
    }

    #[test]
    fn literals() {
        let e = parse_emap("{3:1,9:2}").unwrap();
        assert_eq!(format_emap(&e), "{3:1,9:2}");
        assert_eq!(seq("(1,0,2,1)").to_string(), "(1,0,2,1)");
        assert!("1,2".parse::<GradedSequence>().is_err());
    }
}
