//! Bigraded vector spaces over Q (sparse `(t, q) -> dim`) and Laurent polynomials in `q`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("malformed term `{0}`")]
    Term(String),
    #[error("malformed json: {0}")]
    Json(String),
}

/// A finite-dimensional bigraded space, stored as `(t, q) -> dim` with zeros pruned.
/// Ordering of keys is ascending by `t`, then by `q`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BigradedSpace {
    terms: BTreeMap<(i32, i32), u64>,
}

impl BigradedSpace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn monomial(t: i32, q: i32, dim: u64) -> Self {
        let mut v = Self::new();
        v.add_dim(t, q, dim);
        v
    }

    pub fn from_terms<I: IntoIterator<Item = ((i32, i32), u64)>>(it: I) -> Self {
        let mut v = Self::new();
        for ((t, q), d) in it {
            v.add_dim(t, q, d);
        }
        v
    }

    pub fn add_dim(&mut self, t: i32, q: i32, dim: u64) {
        if dim > 0 {
            *self.terms.entry((t, q)).or_insert(0) += dim;
        }
    }

    pub fn dim(&self, t: i32, q: i32) -> u64 {
        self.terms.get(&(t, q)).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> u64 {
        self.terms.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterates `((t, q), dim)` ascending by `t`, then `q`.
    pub fn iter(&self) -> impl Iterator<Item = ((i32, i32), u64)> + '_ {
        self.terms.iter().map(|(&k, &d)| (k, d))
    }

    /// `q^a t^b V`, i.e. the generator at `(t, q)` moves to `(t + b, q + a)`.
    pub fn shift(&self, a: i32, b: i32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&(t, q), &d)| ((t + b, q + a), d))
                .collect(),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut v = self.clone();
        for ((t, q), d) in other.iter() {
            v.add_dim(t, q, d);
        }
        v
    }

    /// `self - other` when `other` is a subspace dimension-wise.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        let mut v = self.clone();
        for ((t, q), d) in other.iter() {
            let e = v.terms.get_mut(&(t, q))?;
            *e = e.checked_sub(d)?;
            if *e == 0 {
                v.terms.remove(&(t, q));
            }
        }
        Some(v)
    }

    /// The generators with `q - 2t = delta`.
    pub fn delta_slice(&self, delta: i32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(&(t, q), _)| q - 2 * t == delta)
                .map(|(&k, &d)| (k, d))
                .collect(),
        }
    }

    pub fn delta_support(&self) -> BTreeSet<i32> {
        self.terms.keys().map(|&(t, q)| q - 2 * t).collect()
    }

    pub fn t_range(&self) -> Option<(i32, i32)> {
        let lo = self.terms.keys().map(|k| k.0).min()?;
        let hi = self.terms.keys().map(|k| k.0).max()?;
        Some((lo, hi))
    }

    /// Graded Euler characteristic: evaluate the Poincaré polynomial at `t = -1`.
    pub fn euler_characteristic(&self) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for ((t, q), d) in self.iter() {
            let s = if t.rem_euclid(2) == 0 { 1 } else { -1 };
            p.add_term(q, s * d as i64);
        }
        p
    }

    /// `(t, q) -> (-t, -q)`: the rational Khovanov homology of the mirror image.
    pub fn mirror(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&(t, q), &d)| ((-t, -q), d))
                .collect(),
        }
    }

    /// Tensor product with another bigraded space.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut v = Self::new();
        for ((t1, q1), d1) in self.iter() {
            for ((t2, q2), d2) in other.iter() {
                v.add_dim(t1 + t2, q1 + q2, d1 * d2);
            }
        }
        v
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&JsonSpace::from(self)).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self, ParseError> {
        let j: JsonSpace = serde_json::from_str(s).map_err(|e| ParseError::Json(e.to_string()))?;
        Ok(Self::from_terms(
            j.terms.into_iter().map(|x| ((x.t, x.q), x.dim)),
        ))
    }
}

impl Add for BigradedSpace {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.direct_sum(&rhs)
    }
}

impl fmt::Display for BigradedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .iter()
            .map(|((t, q), d)| {
                let mut fs = vec![];
                if d != 1 {
                    fs.push(d.to_string());
                }
                if q != 0 {
                    fs.push(format!("q^{q}"));
                }
                if t != 0 {
                    fs.push(format!("t^{t}"));
                }
                if fs.is_empty() {
                    "1".to_string()
                } else {
                    fs.join("*")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl FromStr for BigradedSpace {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        let s = s.trim();
        let mut v = Self::new();
        if s == "0" {
            return Ok(v);
        }
        for term in s.split(" + ") {
            let bad = || ParseError::Term(term.to_string());
            let (mut d, mut q, mut t) = (1u64, 0i32, 0i32);
            for (k, f) in term.trim().split('*').enumerate() {
                if let Some(e) = f.strip_prefix("q^") {
                    q = e.parse().map_err(|_| bad())?;
                } else if let Some(e) = f.strip_prefix("t^") {
                    t = e.parse().map_err(|_| bad())?;
                } else if k == 0 {
                    d = f.parse().map_err(|_| bad())?;
                } else {
                    return Err(bad());
                }
            }
            v.add_dim(t, q, d);
        }
        Ok(v)
    }
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    t: i32,
    q: i32,
    dim: u64,
}

#[derive(Serialize, Deserialize)]
struct JsonSpace {
    terms: Vec<JsonTerm>,
}

impl From<&BigradedSpace> for JsonSpace {
    fn from(v: &BigradedSpace) -> Self {
        JsonSpace {
            terms: v
                .iter()
                .map(|((t, q), dim)| JsonTerm { t, q, dim })
                .collect(),
        }
    }
}

/// A Laurent polynomial in `q` with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i32, i64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    pub fn monomial(e: i32, c: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    /// `q + q^-1`
    pub fn circle() -> Self {
        Self::from_terms([(1, 1), (-1, 1)])
    }

    pub fn from_terms<I: IntoIterator<Item = (i32, i64)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: i32, c: i64) {
        if c == 0 {
            return;
        }
        let x = self.coeffs.entry(e).or_insert(0);
        *x += c;
        if *x == 0 {
            self.coeffs.remove(&e);
        }
    }

    pub fn coeff(&self, e: i32) -> i64 {
        self.coeffs.get(&e).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    pub fn shift(&self, k: i32) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(&e, &c)| (e + k, c)).collect(),
        }
    }

    pub fn scale(&self, s: i64) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (e, c * s)))
    }

    /// `q -> q^-1`
    pub fn mirror(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(&e, &c)| (-e, c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Exact division by `q + q^-1`, `None` if it does not divide.
    pub fn div_circle(&self) -> Option<Self> {
        // p / (q + q^-1) = q p / (q^2 + 1), long division from the top
        let mut r = self.shift(1);
        let lo = r.coeffs.keys().next().copied()?;
        let mut out = Self::zero();
        while let Some((&e, &c)) = r.coeffs.iter().next_back() {
            if e - 2 < lo {
                return None;
            }
            out.add_term(e - 2, c);
            r.add_term(e, -c);
            r.add_term(e - 2, -c);
        }
        Some(out)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut p = self.clone();
        for (e, c) in rhs.terms() {
            p.add_term(e, c);
        }
        p
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &-rhs
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(-1)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                p.add_term(e1 + e2, c1 * c2);
            }
        }
        p
    }
}

impl fmt::Display for LaurentPoly {
    /// Ascending exponents, e.g. `-q^-7 + 2*q^-1 + 2*q - q^7`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms().enumerate() {
            let a = c.unsigned_abs();
            match (k, c < 0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let var = match e {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{e}"),
            };
            match (a, var.is_empty()) {
                (_, true) => write!(f, "{a}")?,
                (1, false) => write!(f, "{var}")?,
                _ => write!(f, "{a}*{var}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_convention() {
        let v = BigradedSpace::monomial(0, 0, 1).shift(3, 1);
        assert_eq!(v.dim(1, 3), 1);
        assert_eq!(v.to_string(), "q^3*t^1");
    }

    #[test]
    fn text_round_trip() {
        let v = BigradedSpace::from_terms([((0, 1), 1), ((0, -1), 2), ((2, 5), 1), ((0, 0), 1)]);
        assert_eq!(v.to_string(), "2*q^-1 + 1 + q^1 + q^5*t^2");
        assert_eq!(v.to_string().parse::<BigradedSpace>().unwrap(), v);
        assert_eq!(BigradedSpace::from_json(&v.to_json()).unwrap(), v);
        assert_eq!("0".parse::<BigradedSpace>().unwrap(), BigradedSpace::new());
    }

    #[test]
    fn euler_and_mirror() {
        let v = BigradedSpace::from_terms([((0, 1), 1), ((0, 3), 1), ((2, 5), 1), ((3, 9), 1)]);
        assert_eq!(
            v.euler_characteristic(),
            LaurentPoly::from_terms([(1, 1), (3, 1), (5, 1), (9, -1)])
        );
        assert_eq!(v.mirror().mirror(), v);
        assert_eq!(v.delta_support(), [1, 3].into_iter().collect());
    }

    #[test]
    fn laurent_display() {
        let p = LaurentPoly::from_terms([(7, -1), (1, 2), (-1, 2), (-7, -1)]);
        assert_eq!(p.to_string(), "-q^-7 + 2*q^-1 + 2*q - q^7");
        assert_eq!(LaurentPoly::monomial(0, -1).to_string(), "-1");
    }

    #[test]
    fn circle_division() {
        let p = LaurentPoly::from_terms([(2, 1), (6, 1), (8, -1)]);
        let c = &p * &LaurentPoly::circle();
        assert_eq!(c.div_circle(), Some(p));
        assert_eq!(LaurentPoly::one().div_circle(), None);
    }
}
