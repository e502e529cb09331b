//! Exact rank of sparse matrices over Q.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

trait Entry: Clone {
    fn is_zero(&self) -> bool;
    fn is_unit(&self) -> bool;
    /// `x - f * y` where `f = a / p`; `None` on overflow.
    fn elim(x: &Self, a: &Self, p: &Self, y: &Self) -> Option<Self>;
    fn scaled_neg(a: &Self, p: &Self, y: &Self) -> Option<Self>;
}

impl Entry for i64 {
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        self.abs() == 1
    }
    fn elim(x: &i64, a: &i64, p: &i64, y: &i64) -> Option<i64> {
        // p = ±1, so a / p = a * p
        x.checked_sub(a.checked_mul(*p)?.checked_mul(*y)?)
    }
    fn scaled_neg(a: &i64, p: &i64, y: &i64) -> Option<i64> {
        a.checked_mul(*p)?.checked_mul(*y)?.checked_neg()
    }
}

impl Entry for BigRational {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn elim(x: &Self, a: &Self, p: &Self, y: &Self) -> Option<Self> {
        Some(x - &(a / p) * y)
    }
    fn scaled_neg(a: &Self, p: &Self, y: &Self) -> Option<Self> {
        Some(-(&(a / p) * y))
    }
}

struct Sparse<T> {
    rows: Vec<Vec<(u32, T)>>,
    alive: Vec<bool>,
    cols: Vec<HashSet<u32>>,
}

impl<T: Entry> Sparse<T> {
    fn new(rows: Vec<Vec<(u32, T)>>, ncols: usize) -> Self {
        let mut cols = vec![HashSet::new(); ncols];
        let rows: Vec<Vec<(u32, T)>> = rows
            .into_iter()
            .map(|mut r| {
                r.retain(|(_, v)| !v.is_zero());
                r.sort_by_key(|e| e.0);
                r
            })
            .collect();
        for (i, r) in rows.iter().enumerate() {
            for (c, _) in r {
                cols[*c as usize].insert(i as u32);
            }
        }
        let alive = vec![true; rows.len()];
        Self { rows, alive, cols }
    }

    /// `row[t] -= (row[t][c] / p) * row[r]`; `None` on overflow (nothing is changed then).
    fn reduce(&mut self, t: usize, r: usize, c: u32, p: &T) -> Option<()> {
        let a = self.rows[t]
            .iter()
            .find(|e| e.0 == c)
            .map(|e| e.1.clone())?;
        let (x, y) = (&self.rows[t], &self.rows[r]);
        let mut out = Vec::with_capacity(x.len() + y.len());
        let (mut i, mut j) = (0, 0);
        while i < x.len() || j < y.len() {
            let ci = x.get(i).map_or(u32::MAX, |e| e.0);
            let cj = y.get(j).map_or(u32::MAX, |e| e.0);
            if ci < cj {
                out.push(x[i].clone());
                i += 1;
            } else if cj < ci {
                out.push((cj, T::scaled_neg(&a, p, &y[j].1)?));
                j += 1;
            } else {
                let v = T::elim(&x[i].1, &a, p, &y[j].1)?;
                if !v.is_zero() {
                    out.push((ci, v));
                }
                i += 1;
                j += 1;
            }
        }
        for (cc, _) in &self.rows[t] {
            self.cols[*cc as usize].remove(&(t as u32));
        }
        for (cc, _) in &out {
            self.cols[*cc as usize].insert(t as u32);
        }
        self.rows[t] = out;
        Some(())
    }

    fn kill(&mut self, r: usize) {
        for (c, _) in &self.rows[r] {
            self.cols[*c as usize].remove(&(r as u32));
        }
        self.rows[r].clear();
        self.alive[r] = false;
    }

    /// Gaussian elimination, pivoting only on units when `unit_only`. Returns the number
    /// of pivots; rows without an admissible pivot stay in place. Stops early on overflow.
    fn eliminate(&mut self, unit_only: bool) -> usize {
        let mut heap: BinaryHeap<Reverse<(usize, usize)>> = (0..self.rows.len())
            .filter(|&i| self.alive[i])
            .map(|i| Reverse((self.rows[i].len(), i)))
            .collect();
        let mut rank = 0;
        while let Some(Reverse((len, r))) = heap.pop() {
            if !self.alive[r] || self.rows[r].len() != len {
                if self.alive[r] && !self.rows[r].is_empty() {
                    heap.push(Reverse((self.rows[r].len(), r)));
                }
                continue;
            }
            if len == 0 {
                self.alive[r] = false;
                continue;
            }
            let pivot = self.rows[r]
                .iter()
                .filter(|(_, v)| !unit_only || v.is_unit())
                .min_by_key(|(c, v)| (self.cols[*c as usize].len(), !v.is_unit()))
                .cloned();
            let Some((c, p)) = pivot else { continue };
            let targets: Vec<u32> = self.cols[c as usize]
                .iter()
                .copied()
                .filter(|&t| t as usize != r)
                .collect();
            for t in targets {
                if self.reduce(t as usize, r, c, &p).is_none() {
                    return rank;
                }
                heap.push(Reverse((self.rows[t as usize].len(), t as usize)));
            }
            self.kill(r);
            rank += 1;
        }
        rank
    }

    fn remaining(self) -> Vec<Vec<(u32, T)>> {
        self.rows
            .into_iter()
            .zip(self.alive)
            .filter(|(r, a)| *a && !r.is_empty())
            .map(|(r, _)| r)
            .collect()
    }
}

/// Rank over Q of an integer matrix given by sparse rows `(column, value)`.
/// With `pre_reduce`, unit pivots are cancelled in machine integers first.
pub fn integer_rank(rows: Vec<Vec<(u32, i64)>>, ncols: usize, pre_reduce: bool) -> usize {
    let (rank, rest) = if pre_reduce {
        let mut m = Sparse::new(rows, ncols);
        let r = m.eliminate(true);
        (r, m.remaining())
    } else {
        (0, rows)
    };
    let rest: Vec<Vec<(u32, BigRational)>> = rest
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|(c, v)| (c, BigRational::from_integer(BigInt::from(v))))
                .collect()
        })
        .collect();
    rank + rational_rank(rest, ncols)
}

/// Rank over Q of a sparse rational matrix.
pub fn rational_rank(rows: Vec<Vec<(u32, BigRational)>>, ncols: usize) -> usize {
    let mut m = Sparse::new(rows, ncols);
    m.eliminate(false)
}

/// Rank over Q of a dense rational matrix.
pub fn matrix_rank(m: &[Vec<BigRational>]) -> usize {
    let ncols = m.iter().map(|r| r.len()).max().unwrap_or(0);
    let rows = m
        .iter()
        .map(|r| {
            r.iter()
                .enumerate()
                .filter(|(_, v)| !Zero::is_zero(*v))
                .map(|(c, v)| (c as u32, v.clone()))
                .collect()
        })
        .collect();
    rational_rank(rows, ncols)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[&[i64]]) -> Vec<Vec<BigRational>> {
        v.iter()
            .map(|r| {
                r.iter()
                    .map(|&x| BigRational::from_integer(x.into()))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn small_ranks() {
        assert_eq!(matrix_rank(&q(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])), 3);
        assert_eq!(matrix_rank(&q(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(matrix_rank(&q(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(matrix_rank(&q(&[&[2, 4], &[6, 3]])), 2);
    }

    #[test]
    fn pre_reduction_agrees() {
        // pseudo-random integer matrices with small entries
        let mut s: u64 = 7;
        for _ in 0..200 {
            let (nr, nc) = (1 + (s % 9) as usize, 1 + (s / 9 % 9) as usize);
            let mut rows = vec![];
            for _ in 0..nr {
                let mut r = vec![];
                for c in 0..nc {
                    s = s
                        .wrapping_mul(6364136223846793005)
                        .wrapping_add(1442695040888963407);
                    let v = ((s >> 33) % 7) as i64 - 3;
                    if (s >> 40) % 3 != 0 {
                        r.push((c as u32, v));
                    }
                }
                rows.push(r);
            }
            let a = integer_rank(rows.clone(), nc, true);
            let b = integer_rank(rows, nc, false);
            assert_eq!(a, b);
        }
    }
}
