//! The Khovanov complex built generator by generator from the cube of resolutions.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::rank::integer_rank;
use super::KhError;
use crate::bigraded::BigradedSpace;
use crate::diagram::{LinkDiagram, UnionFind};

/// A complete resolution: `bits` has bit `k` set when crossing `k` takes its 1-smoothing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeState {
    pub bits: u64,
    /// circle index of every edge (edges in ascending label order)
    pub circle_of_edge: Vec<usize>,
    pub circles: usize,
}

pub(crate) struct EdgeIndex {
    pub(crate) labels: Vec<usize>,
    index: HashMap<usize, usize>,
}

impl EdgeIndex {
    pub(crate) fn new(d: &LinkDiagram) -> Self {
        let labels = d.edges();
        let index = labels.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        Self { labels, index }
    }

    pub(crate) fn of(&self, e: usize) -> usize {
        self.index[&e]
    }
}

/// The circles of the resolution `v` (free loops of the diagram come last).
pub fn resolve_state(d: &LinkDiagram, v: u64) -> CubeState {
    resolve_with(d, &EdgeIndex::new(d), v)
}

fn resolve_with(d: &LinkDiagram, ix: &EdgeIndex, v: u64) -> CubeState {
    let mut uf = UnionFind::new(ix.labels.len());
    for (k, x) in d.crossings().iter().enumerate() {
        let [a, b, c, e] = x.edges.map(|e| ix.of(e));
        if v >> k & 1 == 0 {
            uf.union(a, b);
            uf.union(c, e);
        } else {
            uf.union(a, e);
            uf.union(b, c);
        }
    }
    let mut id: HashMap<usize, usize> = HashMap::new();
    let circle_of_edge: Vec<usize> = (0..ix.labels.len())
        .map(|e| {
            let r = uf.find(e);
            let n = id.len();
            *id.entry(r).or_insert(n)
        })
        .collect();
    CubeState {
        bits: v,
        circle_of_edge,
        circles: id.len() + d.free_loops(),
    }
}

/// Generator counts per `(t, q)` of the unreduced complex.
pub fn generator_counts(d: &LinkDiagram) -> BTreeMap<(i32, i32), u64> {
    let ix = EdgeIndex::new(d);
    let n = d.crossing_count();
    let (np, nm) = (d.n_plus() as i32, d.n_minus() as i32);
    let mut out = BTreeMap::new();
    for v in 0..(1u64 << n) {
        let s = resolve_with(d, &ix, v);
        let h = v.count_ones() as i32;
        let c = s.circles as i32;
        let mut binom = 1u64;
        for j in 0..=c {
            let q = c - 2 * j + h + np - 2 * nm;
            *out.entry((h - nm, q)).or_insert(0) += binom;
            binom = binom * (c - j) as u64 / (j + 1) as u64;
        }
    }
    out
}

struct Complex {
    states: Vec<CubeState>,
    /// first edge of every circle, per state
    reps: Vec<Vec<usize>>,
    /// per (t, q): generators `(state, mask)`, with `mask` bit set meaning the label `x`
    blocks: BTreeMap<(i32, i32), Vec<(u64, u64)>>,
}

fn build(d: &LinkDiagram) -> Complex {
    let ix = EdgeIndex::new(d);
    let n = d.crossing_count();
    let (np, nm) = (d.n_plus() as i32, d.n_minus() as i32);
    let states: Vec<CubeState> = (0..(1u64 << n)).map(|v| resolve_with(d, &ix, v)).collect();
    let reps = states
        .iter()
        .map(|s| {
            let mut r = vec![usize::MAX; s.circles];
            for (e, &c) in s.circle_of_edge.iter().enumerate().rev() {
                r[c] = e;
            }
            r
        })
        .collect();
    let mut blocks: BTreeMap<(i32, i32), Vec<(u64, u64)>> = BTreeMap::new();
    for s in &states {
        let h = s.bits.count_ones() as i32;
        for mask in 0..(1u64 << s.circles) {
            let q = s.circles as i32 - 2 * mask.count_ones() as i32 + h + np - 2 * nm;
            blocks.entry((h - nm, q)).or_default().push((s.bits, mask));
        }
    }
    Complex {
        states,
        reps,
        blocks,
    }
}

/// `d(state v, mask)` as a list of `(target state, target mask, coefficient)`.
fn differential(
    cx: &Complex,
    d: &LinkDiagram,
    ix: &EdgeIndex,
    v: u64,
    mask: u64,
) -> Vec<(u64, u64, i64)> {
    let sv = &cx.states[v as usize];
    let mut out = vec![];
    for (k, x) in d.crossings().iter().enumerate() {
        if v >> k & 1 == 1 {
            continue;
        }
        let w = v | 1 << k;
        let sw = &cx.states[w as usize];
        let sign = if (v & ((1 << k) - 1)).count_ones() % 2 == 0 {
            1
        } else {
            -1
        };
        let [a, _, c, _] = x.edges.map(|e| ix.of(e));
        let (ca, cc) = (sv.circle_of_edge[a], sv.circle_of_edge[c]);
        // carry over untouched circles
        let mut base = 0u64;
        for (j, &r) in cx.reps[v as usize].iter().enumerate() {
            if j == ca || j == cc || mask >> j & 1 == 0 {
                continue;
            }
            let t = if r == usize::MAX {
                sw.circles - (sv.circles - j)
            } else {
                sw.circle_of_edge[r]
            };
            base |= 1 << t;
        }
        if ca != cc {
            let t = sw.circle_of_edge[a];
            match (mask >> ca & 1, mask >> cc & 1) {
                (0, 0) => out.push((w, base, sign)),
                (1, 1) => {}
                _ => out.push((w, base | 1 << t, sign)),
            }
        } else {
            let (ta, tc) = (sw.circle_of_edge[a], sw.circle_of_edge[c]);
            if mask >> ca & 1 == 0 {
                out.push((w, base | 1 << ta, sign));
                out.push((w, base | 1 << tc, sign));
            } else {
                out.push((w, base | 1 << ta | 1 << tc, sign));
            }
        }
    }
    out
}

fn apply(
    cx: &Complex,
    d: &LinkDiagram,
    ix: &EdgeIndex,
    chain: &HashMap<(u64, u64), i64>,
) -> HashMap<(u64, u64), i64> {
    let mut out: HashMap<(u64, u64), i64> = HashMap::new();
    for (&(v, m), &c) in chain {
        for (w, mm, s) in differential(cx, d, ix, v, m) {
            *out.entry((w, mm)).or_insert(0) += s * c;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Homology of the full cube complex, one quantum grading at a time.
pub fn homology(
    d: &LinkDiagram,
    pre_reduce: bool,
    check_d_squared: bool,
) -> Result<BigradedSpace, KhError> {
    let ix = EdgeIndex::new(d);
    let cx = build(d);
    if check_d_squared {
        for gens in cx.blocks.values() {
            for &g in gens {
                let once = apply(&cx, d, &ix, &HashMap::from([(g, 1)]));
                if !apply(&cx, d, &ix, &once).is_empty() {
                    return Err(KhError::Invariant(format!("d^2 != 0 at generator {g:?}")));
                }
            }
        }
    }
    let keys: Vec<(i32, i32)> = cx.blocks.keys().copied().collect();
    let ranks: Vec<((i32, i32), usize)> = keys
        .par_iter()
        .map(|&(t, q)| {
            let Some(target) = cx.blocks.get(&(t + 1, q)) else {
                return ((t, q), 0);
            };
            let local: HashMap<(u64, u64), u32> = target
                .iter()
                .enumerate()
                .map(|(i, &g)| (g, i as u32))
                .collect();
            let rows = cx.blocks[&(t, q)]
                .iter()
                .map(|&(v, m)| {
                    let mut row: HashMap<u32, i64> = HashMap::new();
                    for (w, mm, s) in differential(&cx, d, &ix, v, m) {
                        *row.entry(local[&(w, mm)]).or_insert(0) += s;
                    }
                    row.into_iter().filter(|e| e.1 != 0).collect()
                })
                .collect();
            ((t, q), integer_rank(rows, target.len(), pre_reduce))
        })
        .collect();
    let rank: HashMap<(i32, i32), usize> = ranks.into_iter().collect();
    let mut out = BigradedSpace::new();
    for (&(t, q), gens) in &cx.blocks {
        let dim = gens.len() - rank[&(t, q)] - rank.get(&(t - 1, q)).copied().unwrap_or(0);
        out.add_dim(t, q, dim as u64);
    }
    Ok(out)
}
