//! Oriented link diagrams as planar diagram codes.
//!
//! A crossing `[a, b, c, d]` lists its edges counterclockwise starting from the incoming
//! under-strand, so the under-strand runs `a -> c`. The over-strand runs `d -> b` exactly
//! when the crossing is positive. The 0-smoothing joins `(a, b), (c, d)`, the 1-smoothing
//! joins `(a, d), (b, c)`.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::Orientation;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiagramError {
    #[error("edge {0} does not appear exactly twice")]
    BadEdge(usize),
    #[error("inconsistent orientation at crossing {0}")]
    Inconsistent(usize),
    #[error("orientation {pattern:?} is not realised by P({p1},{p2},{p3})")]
    InvalidOrientation {
        p1: i64,
        p2: i64,
        p3: i64,
        pattern: Orientation,
    },
    #[error("no crossing {0}")]
    NoCrossing(usize),
    #[error("malformed PD json: {0}")]
    Json(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub edges: [usize; 4],
    pub sign: i8,
}

impl Crossing {
    /// Positions of the incoming edges (under, over).
    fn heads(&self) -> [usize; 2] {
        [0, if self.sign > 0 { 3 } else { 1 }]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinkDiagram {
    crossings: Vec<Crossing>,
    free_loops: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Smoothing {
    Zero,
    One,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Resolution {
    Oriented,
    Unoriented,
}

/// An edge end: (crossing, position).
type Occ = (usize, usize);

impl LinkDiagram {
    pub fn new(crossings: Vec<Crossing>, free_loops: usize) -> Result<Self, DiagramError> {
        let d = Self {
            crossings,
            free_loops,
        };
        d.validate()?;
        Ok(d)
    }

    /// A crossingless diagram of `k` circles.
    pub fn unlink(k: usize) -> Self {
        Self {
            crossings: vec![],
            free_loops: k,
        }
    }

    pub fn unknot() -> Self {
        Self::unlink(1)
    }

    /// From a PD code whose labels increase along each component (signs inferred).
    pub fn from_pd_labels(pd: &[[usize; 4]]) -> Result<Self, DiagramError> {
        let crossings = pd
            .iter()
            .map(|&[a, b, c, d]| {
                let pos = b == d + 1 || (d > b + 1);
                Crossing {
                    edges: [a, b, c, d],
                    sign: if pos { 1 } else { -1 },
                }
            })
            .collect();
        Self::new(crossings, 0)
    }

    fn validate(&self) -> Result<(), DiagramError> {
        let mut count: BTreeMap<usize, (u8, u8)> = BTreeMap::new();
        for x in &self.crossings {
            let h = x.heads();
            for (p, &e) in x.edges.iter().enumerate() {
                let c = count.entry(e).or_default();
                if h.contains(&p) {
                    c.0 += 1;
                } else {
                    c.1 += 1;
                }
            }
        }
        for (&e, &(i, o)) in &count {
            if i + o != 2 {
                return Err(DiagramError::BadEdge(e));
            }
            if i != 1 {
                return Err(DiagramError::Inconsistent(
                    self.crossings
                        .iter()
                        .position(|x| x.edges.contains(&e))
                        .unwrap(),
                ));
            }
        }
        Ok(())
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    pub fn n_plus(&self) -> usize {
        self.crossings.iter().filter(|x| x.sign > 0).count()
    }

    pub fn n_minus(&self) -> usize {
        self.crossings.iter().filter(|x| x.sign < 0).count()
    }

    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(|x| x.sign as i64).sum()
    }

    pub fn edges(&self) -> Vec<usize> {
        let mut e: Vec<usize> = self.crossings.iter().flat_map(|x| x.edges).collect();
        e.sort_unstable();
        e.dedup();
        e
    }

    /// Edge -> the edge that follows it along the orientation.
    fn successor(&self) -> HashMap<usize, usize> {
        let mut s = HashMap::new();
        for x in &self.crossings {
            for h in x.heads() {
                s.insert(x.edges[h], x.edges[h ^ 2]);
            }
        }
        s
    }

    /// Components as edge cycles in orientation order, each starting at its smallest edge.
    /// Free loops are not listed.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let succ = self.successor();
        let mut seen = std::collections::HashSet::new();
        let mut comps = vec![];
        for e in self.edges() {
            if seen.contains(&e) {
                continue;
            }
            let mut c = vec![e];
            seen.insert(e);
            let mut f = succ[&e];
            while f != e {
                seen.insert(f);
                c.push(f);
                f = succ[&f];
            }
            comps.push(c);
        }
        comps
    }

    pub fn component_count(&self) -> usize {
        self.components().len() + self.free_loops
    }

    fn component_of_edge(&self) -> HashMap<usize, usize> {
        let mut m = HashMap::new();
        for (i, c) in self.components().iter().enumerate() {
            for &e in c {
                m.insert(e, i);
            }
        }
        m
    }

    /// (under component, over component) for each crossing.
    pub fn crossing_components(&self) -> Vec<(usize, usize)> {
        let m = self.component_of_edge();
        self.crossings
            .iter()
            .map(|x| (m[&x.edges[0]], m[&x.edges[1]]))
            .collect()
    }

    /// Linking number of components `i` and `j` (indices into [`Self::components`]).
    pub fn linking_number(&self, i: usize, j: usize) -> i64 {
        let s: i64 = self
            .crossings
            .iter()
            .zip(self.crossing_components())
            .filter(|(_, (u, o))| (*u == i && *o == j) || (*u == j && *o == i))
            .map(|(x, _)| x.sign as i64)
            .sum();
        debug_assert!(s % 2 == 0);
        s / 2
    }

    pub fn mirror(&self) -> Self {
        let crossings = self
            .crossings
            .iter()
            .map(|x| {
                let [a, b, c, d] = x.edges;
                let edges = if x.sign > 0 {
                    [d, a, b, c]
                } else {
                    [b, c, d, a]
                };
                Crossing {
                    edges,
                    sign: -x.sign,
                }
            })
            .collect();
        Self {
            crossings,
            free_loops: self.free_loops,
        }
    }

    /// Reverses the orientation of component `k`.
    pub fn reverse_component(&self, k: usize) -> Self {
        let comp = self.component_of_edge();
        let crossings = self
            .crossings
            .iter()
            .map(|x| {
                let ru = comp[&x.edges[0]] == k;
                let ro = comp[&x.edges[1]] == k;
                let [a, b, c, d] = x.edges;
                let edges = if ru { [c, d, a, b] } else { x.edges };
                let sign = if ru != ro { -x.sign } else { x.sign };
                Crossing { edges, sign }
            })
            .collect();
        Self {
            crossings,
            free_loops: self.free_loops,
        }
    }

    /// Removes crossing `c`, replacing it by the given smoothing. The result is oriented:
    /// an oriented smoothing keeps the inherited orientation, otherwise each new component
    /// is oriented along the old direction of its smallest edge.
    pub fn smooth(&self, c: usize, s: Smoothing) -> Result<Self, DiagramError> {
        let x = *self.crossings.get(c).ok_or(DiagramError::NoCrossing(c))?;
        let [a, b, cc, d] = x.edges;
        let pairs = match s {
            Smoothing::Zero => [(a, b), (cc, d)],
            Smoothing::One => [(a, d), (b, cc)],
        };
        // union edges through the smoothing
        let edges = self.edges();
        let idx: HashMap<usize, usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut uf = UnionFind::new(edges.len());
        for (p, q) in pairs {
            uf.union(idx[&p], idx[&q]);
        }
        let rest: Vec<Crossing> = self
            .crossings
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != c)
            .map(|(_, x)| *x)
            .collect();
        let mut used = vec![false; edges.len()];
        for y in &rest {
            for e in y.edges {
                used[uf.find(idx[&e])] = true;
            }
        }
        let mut free = self.free_loops;
        for (i, _) in edges.iter().enumerate() {
            if uf.find(i) == i && !used[i] {
                free += 1;
            }
        }
        // old direction of each edge: its head occurrence
        let mut head: HashMap<usize, Occ> = HashMap::new();
        for (i, y) in self.crossings.iter().enumerate() {
            for h in y.heads() {
                head.insert(y.edges[h], (i, h));
            }
        }
        let geom: Vec<[usize; 4]> = rest
            .iter()
            .map(|y| y.edges.map(|e| edges[uf.find(idx[&e])]))
            .collect();
        let old_index: Vec<usize> = (0..self.crossings.len()).filter(|&i| i != c).collect();
        // preferred head per merged edge: the new occurrence that matches the old head of its smallest member
        let mut pref: HashMap<usize, Occ> = HashMap::new();
        for &e in &edges {
            let r = edges[uf.find(idx[&e])];
            if pref.contains_key(&r) {
                continue;
            }
            let (hc, hp) = head[&e];
            if hc != c {
                let nc = old_index.iter().position(|&i| i == hc).unwrap();
                pref.insert(r, (nc, hp));
            }
        }
        let d = orient_geometry(&geom, free, |e| pref.get(&e).copied())?;
        Ok(d.relabel())
    }

    /// The oriented or unoriented resolution at crossing `c`.
    pub fn resolve(&self, c: usize, kind: Resolution) -> Result<Self, DiagramError> {
        let x = self.crossings.get(c).ok_or(DiagramError::NoCrossing(c))?;
        let oriented = if x.sign > 0 {
            Smoothing::Zero
        } else {
            Smoothing::One
        };
        let s = match (kind, oriented) {
            (Resolution::Oriented, s) => s,
            (Resolution::Unoriented, Smoothing::Zero) => Smoothing::One,
            (Resolution::Unoriented, Smoothing::One) => Smoothing::Zero,
        };
        self.smooth(c, s)
    }

    /// Relabels edges `1..=E` in order of first appearance.
    pub fn relabel(&self) -> Self {
        let mut m: HashMap<usize, usize> = HashMap::new();
        for x in &self.crossings {
            for e in x.edges {
                let n = m.len() + 1;
                m.entry(e).or_insert(n);
            }
        }
        let crossings = self
            .crossings
            .iter()
            .map(|x| Crossing {
                edges: x.edges.map(|e| m[&e]),
                sign: x.sign,
            })
            .collect();
        Self {
            crossings,
            free_loops: self.free_loops,
        }
    }

    pub fn to_json(&self) -> String {
        let comps = self.components();
        let j = PdJson {
            crossings: self.crossings.iter().map(|x| x.edges).collect(),
            orientations: (0..comps.len())
                .map(|i| (i.to_string(), "+".to_string()))
                .collect(),
            signs: Some(self.crossings.iter().map(|x| x.sign).collect()),
            free_loops: self.free_loops,
        };
        serde_json::to_string(&j).expect("serializable")
    }

    /// Reads `{"crossings": [[a,b,c,d],...], "signs": [...], "orientations": {"0": "-"}, "free_loops": 0}`.
    /// Without `signs`, labels must increase along components. `"-"` reverses that component.
    pub fn from_json(s: &str) -> Result<Self, DiagramError> {
        let j: PdJson = serde_json::from_str(s).map_err(|e| DiagramError::Json(e.to_string()))?;
        let mut d = match j.signs {
            Some(signs) => {
                if signs.len() != j.crossings.len() {
                    return Err(DiagramError::Json(
                        "signs and crossings differ in length".into(),
                    ));
                }
                let cs = j
                    .crossings
                    .iter()
                    .zip(signs)
                    .map(|(&edges, sign)| Crossing {
                        edges,
                        sign: sign.signum(),
                    })
                    .collect();
                Self::new(cs, j.free_loops)?
            }
            None => Self {
                free_loops: j.free_loops,
                ..Self::from_pd_labels(&j.crossings)?
            },
        };
        let mut flips: Vec<usize> = j
            .orientations
            .iter()
            .filter(|(_, v)| v.as_str() == "-")
            .map(|(k, _)| {
                k.parse()
                    .map_err(|_| DiagramError::Json(format!("bad component {k}")))
            })
            .collect::<Result<_, _>>()?;
        flips.sort_unstable();
        // component indices refer to the input orientation; reversing keeps the smallest-edge order
        for k in flips {
            d = d.reverse_component(k);
        }
        Ok(d)
    }
}

#[derive(Serialize, Deserialize)]
struct PdJson {
    crossings: Vec<[usize; 4]>,
    #[serde(default)]
    orientations: BTreeMap<String, String>,
    #[serde(default)]
    signs: Option<Vec<i8>>,
    #[serde(default)]
    free_loops: usize,
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.parent[hi] = lo;
        true
    }
}

/// Orients unoriented crossings (`[a,b,c,d]` counterclockwise, under-strand at positions 0, 2).
/// Components are traced from their smallest edge; `pref(e)` may fix the head occurrence of `e`.
fn orient_geometry(
    geom: &[[usize; 4]],
    free_loops: usize,
    pref: impl Fn(usize) -> Option<Occ>,
) -> Result<LinkDiagram, DiagramError> {
    let mut occ: BTreeMap<usize, Vec<Occ>> = BTreeMap::new();
    for (i, x) in geom.iter().enumerate() {
        for (p, &e) in x.iter().enumerate() {
            occ.entry(e).or_default().push((i, p));
        }
    }
    if let Some((&e, _)) = occ.iter().find(|(_, v)| v.len() != 2) {
        return Err(DiagramError::BadEdge(e));
    }
    let mut head: HashMap<usize, Occ> = HashMap::new();
    let at = |o: Occ| geom[o.0][o.1];
    for (&e0, v) in &occ {
        if head.contains_key(&e0) {
            continue;
        }
        let mut h = pref(e0).filter(|o| v.contains(o)).unwrap_or(v[1]);
        let mut e = e0;
        loop {
            head.insert(e, h);
            let out = (h.0, h.1 ^ 2);
            e = at(out);
            if e == e0 && head.contains_key(&e) {
                break;
            }
            let o = &occ[&e];
            h = if o[0] == out { o[1] } else { o[0] };
        }
    }
    let is_head = |o: Occ| head[&at(o)] == o;
    let mut crossings = vec![];
    for (i, x) in geom.iter().enumerate() {
        let edges = if is_head((i, 0)) {
            *x
        } else {
            [x[2], x[3], x[0], x[1]]
        };
        let over_from_d = if is_head((i, 0)) {
            is_head((i, 3))
        } else {
            is_head((i, 1))
        };
        crossings.push(Crossing {
            edges,
            sign: if over_from_d { 1 } else { -1 },
        });
    }
    LinkDiagram::new(crossings, free_loops)
}

const TL: usize = 0;
const TR: usize = 1;
const BR: usize = 2;
const BL: usize = 3;

/// Node in the band construction: a crossing slot or a band port.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Node {
    Slot(usize, usize),
    /// (band, corner) with corners TL, TR, BR, BL
    Port(usize, usize),
}

struct Bands {
    /// crossings: (band, under-strand is TL-BR)
    xs: Vec<(usize, bool)>,
    /// node sequence of every edge, slot to slot
    paths: Vec<Vec<Node>>,
    free_loops: usize,
}

impl Bands {
    /// Vertical twist bands side by side; `p > 0` puts the under-strand on the TL-BR diagonal.
    fn new(ps: &[i64], connectors: &[((usize, usize), (usize, usize))]) -> Self {
        let mut xs = vec![];
        let mut links: HashMap<Node, Vec<Node>> = HashMap::new();
        let mut link = |a: Node, b: Node| {
            links.entry(a).or_default().push(b);
            links.entry(b).or_default().push(a);
        };
        for (j, &p) in ps.iter().enumerate() {
            let k = p.unsigned_abs() as usize;
            let first = xs.len();
            for _ in 0..k {
                xs.push((j, p > 0));
            }
            if k == 0 {
                link(Node::Port(j, TL), Node::Port(j, BL));
                link(Node::Port(j, TR), Node::Port(j, BR));
                continue;
            }
            link(Node::Port(j, TL), Node::Slot(first, TL));
            link(Node::Port(j, TR), Node::Slot(first, TR));
            for x in first..first + k - 1 {
                link(Node::Slot(x, BL), Node::Slot(x + 1, TL));
                link(Node::Slot(x, BR), Node::Slot(x + 1, TR));
            }
            link(Node::Slot(first + k - 1, BL), Node::Port(j, BL));
            link(Node::Slot(first + k - 1, BR), Node::Port(j, BR));
        }
        for &(a, b) in connectors {
            link(Node::Port(a.0, a.1), Node::Port(b.0, b.1));
        }
        let mut seen = std::collections::HashSet::new();
        let mut paths = vec![];
        let mut starts: Vec<Node> = (0..xs.len())
            .flat_map(|x| [TL, TR, BL, BR].map(|s| Node::Slot(x, s)))
            .collect();
        let ports: Vec<Node> = {
            let mut v: Vec<Node> = links
                .keys()
                .filter(|n| matches!(n, Node::Port(..)))
                .copied()
                .collect();
            v.sort();
            v
        };
        for s in starts.drain(..) {
            if seen.contains(&s) {
                continue;
            }
            let mut path = vec![s];
            seen.insert(s);
            let mut prev = s;
            let mut cur = links[&s][0];
            loop {
                path.push(cur);
                seen.insert(cur);
                if let Node::Slot(..) = cur {
                    break;
                }
                let nb = &links[&cur];
                let next = if nb[0] == prev { nb[1] } else { nb[0] };
                prev = cur;
                cur = next;
            }
            paths.push(path);
        }
        let free_loops = {
            let mut n = 0;
            for &p in &ports {
                if seen.contains(&p) {
                    continue;
                }
                n += 1;
                let mut stack = vec![p];
                while let Some(x) = stack.pop() {
                    if seen.insert(x) {
                        stack.extend(links[&x].iter().copied());
                    }
                }
            }
            n
        };
        Self {
            xs,
            paths,
            free_loops,
        }
    }

    /// Edge labels (1-based, in order of first appearance band by band, top-down) per slot.
    fn slot_labels(&self) -> HashMap<(usize, usize), usize> {
        let mut by_slot = HashMap::new();
        let mut order: Vec<(usize, usize)> = vec![];
        for x in 0..self.xs.len() {
            for s in [TL, TR, BL, BR] {
                order.push((x, s));
            }
        }
        let mut path_of: HashMap<(usize, usize), usize> = HashMap::new();
        for (i, p) in self.paths.iter().enumerate() {
            for n in [p[0], *p.last().unwrap()] {
                if let Node::Slot(x, s) = n {
                    path_of.insert((x, s), i);
                }
            }
        }
        let mut label: HashMap<usize, usize> = HashMap::new();
        for o in order {
            let pi = path_of[&o];
            let n = label.len() + 1;
            let l = *label.entry(pi).or_insert(n);
            by_slot.insert(o, l);
        }
        by_slot
    }

    /// Unoriented geometry of every crossing, counterclockwise from an under-strand end.
    fn geometry(&self) -> Vec<[usize; 4]> {
        let lab = self.slot_labels();
        self.xs
            .iter()
            .enumerate()
            .map(|(x, &(_, tlbr))| {
                let ccw = if tlbr {
                    [TL, BL, BR, TR]
                } else {
                    [BL, BR, TR, TL]
                };
                ccw.map(|s| lab[&(x, s)])
            })
            .collect()
    }

    /// All orientations (as head occurrences on `geometry`) and the per-band parallel flags.
    fn orientations(&self) -> Vec<(LinkDiagram, Vec<Option<bool>>)> {
        let geom = self.geometry();
        let base = match orient_geometry(&geom, self.free_loops, |_| None) {
            Ok(d) => d,
            Err(_) => return vec![],
        };
        let ncomp = base.components().len();
        let mut out = vec![];
        for mask in 0..(1usize << ncomp) {
            if ncomp > 0 && mask & 1 == 1 {
                continue;
            }
            let mut d = base.clone();
            for k in 0..ncomp {
                if mask >> k & 1 == 1 {
                    d = d.reverse_component(k);
                }
            }
            let par = self.parallel_flags(&d);
            out.push((d, par));
        }
        out
    }

    /// For every band: whether its two strands point the same vertical way.
    fn parallel_flags(&self, d: &LinkDiagram) -> Vec<Option<bool>> {
        let lab = self.slot_labels();
        // going down at a slot means entering through TL/TR or leaving through BL/BR
        let mut incoming: HashMap<(usize, usize), bool> = HashMap::new();
        for (x, &(_, tlbr)) in self.xs.iter().enumerate() {
            let ccw = if tlbr {
                [TL, BL, BR, TR]
            } else {
                [BL, BR, TR, TL]
            };
            let geo: [usize; 4] = ccw.map(|s| lab[&(x, s)]);
            let c = d.crossings()[x];
            let rot = if c.edges == geo { 0 } else { 2 };
            for h in c.heads() {
                incoming.insert((x, ccw[(h + rot) % 4]), true);
            }
        }
        let nb = self
            .xs
            .iter()
            .map(|x| x.0)
            .max()
            .map_or(0, |m| m + 1)
            .max(3);
        let mut flags = vec![None; nb];
        for j in 0..nb {
            if let Some(x) = self.xs.iter().position(|&(b, _)| b == j) {
                let down_l = *incoming.get(&(x, TL)).unwrap_or(&false);
                let down_r = *incoming.get(&(x, TR)).unwrap_or(&false);
                flags[j] = Some(down_l == down_r);
            } else {
                flags[j] = self.empty_band_flag(j, &incoming);
            }
        }
        flags
    }

    /// Direction of the two vertical arcs of an empty band, read off the edge paths through it.
    fn empty_band_flag(&self, j: usize, incoming: &HashMap<(usize, usize), bool>) -> Option<bool> {
        let mut dirs = [None, None];
        for p in &self.paths {
            let (Node::Slot(x0, s0), Node::Slot(..)) = (p[0], *p.last().unwrap()) else {
                continue;
            };
            // forward means the path start is the tail of the edge
            let forward = !incoming.get(&(x0, s0)).copied().unwrap_or(false);
            for w in p.windows(2) {
                for (side, (top, bot)) in [(TL, BL), (TR, BR)].into_iter().enumerate() {
                    if w[0] == Node::Port(j, top) && w[1] == Node::Port(j, bot) {
                        dirs[side] = Some(forward);
                    } else if w[0] == Node::Port(j, bot) && w[1] == Node::Port(j, top) {
                        dirs[side] = Some(!forward);
                    }
                }
            }
        }
        match dirs {
            [Some(a), Some(b)] => Some(a == b),
            _ => None,
        }
    }
}

fn pretzel_bands(p1: i64, p2: i64, p3: i64) -> Bands {
    let connectors = [
        ((0, TR), (1, TL)),
        ((1, TR), (2, TL)),
        ((0, TL), (2, TR)),
        ((0, BR), (1, BL)),
        ((1, BR), (2, BL)),
        ((0, BL), (2, BR)),
    ];
    Bands::new(&[p1, p2, p3], &connectors)
}

fn pattern_of(flags: &[Option<bool>]) -> Option<Orientation> {
    use Orientation::*;
    match (flags[0], flags[1], flags[2]) {
        (Some(false), Some(false), Some(false)) => Some(RR),
        (Some(false), Some(true), Some(true)) => Some(RL),
        (Some(true), Some(false), Some(true)) => Some(LL),
        (Some(true), Some(true), Some(false)) => Some(LR),
        _ => None,
    }
}

/// The standard diagram of the pretzel link `P(p1, p2, p3)` (strand `j` has `|p_j|` crossings,
/// `p_j > 0` one handedness and `p_j < 0` the other) with the given orientation pattern.
/// For `P(-l, m, n)` with all strands anti-parallel (RR), the `m` and `n` crossings are negative.
pub fn pretzel_diagram(
    p1: i64,
    p2: i64,
    p3: i64,
    pattern: Orientation,
) -> Result<LinkDiagram, DiagramError> {
    let bands = pretzel_bands(p1, p2, p3);
    bands
        .orientations()
        .into_iter()
        .find(|(_, f)| pattern_of(f) == Some(pattern))
        .map(|(d, _)| d)
        .ok_or(DiagramError::InvalidOrientation {
            p1,
            p2,
            p3,
            pattern,
        })
}

/// The orientation patterns realised by `P(p1, p2, p3)`.
pub fn admissible_patterns(p1: i64, p2: i64, p3: i64) -> Vec<Orientation> {
    let mut v: Vec<Orientation> = pretzel_bands(p1, p2, p3)
        .orientations()
        .iter()
        .filter_map(|(_, f)| pattern_of(f))
        .collect();
    v.sort_by_key(|p| *p as u8);
    v.dedup();
    v
}

/// Index of the `k`-th crossing from the top on strand `band` (0-based) of a pretzel diagram.
pub fn pretzel_crossing(ps: [i64; 3], band: usize, k: usize) -> usize {
    ps[..band]
        .iter()
        .map(|p| p.unsigned_abs() as usize)
        .sum::<usize>()
        + k
}

/// The closure of the 2-braid `σ^l`: positive crossings, parallel strands.
pub fn torus2_diagram(l: usize) -> LinkDiagram {
    if l == 0 {
        return LinkDiagram::unlink(2);
    }
    let bands = Bands::new(&[l as i64], &[((0, TL), (0, BL)), ((0, TR), (0, BR))]);
    bands
        .orientations()
        .into_iter()
        .find(|(_, f)| f[0] == Some(true))
        .map(|(d, _)| d)
        .expect("braid closure orientation")
}

#[cfg(test)]
mod tests {
    use super::*;
    use Orientation::*;

    #[test]
    fn trefoil_from_labels() {
        let d = LinkDiagram::from_pd_labels(&[[1, 5, 2, 4], [3, 1, 4, 6], [5, 3, 6, 2]]).unwrap();
        assert_eq!(d.components().len(), 1);
        assert_eq!(d.writhe().abs(), 3);
        assert_eq!(d.mirror().writhe(), -d.writhe());
        assert_eq!(d.mirror().mirror(), d);
    }

    #[test]
    fn torus_signs() {
        let t = torus2_diagram(3);
        assert_eq!((t.n_plus(), t.n_minus(), t.components().len()), (3, 0, 1));
        let h = torus2_diagram(2);
        assert_eq!(h.components().len(), 2);
        assert_eq!(h.linking_number(0, 1), 1);
    }

    #[test]
    fn pretzel_patterns_follow_parity() {
        assert_eq!(admissible_patterns(-3, 5, 7), vec![RR]);
        assert_eq!(admissible_patterns(-3, 4, 7), vec![LL]);
        assert_eq!(admissible_patterns(-3, 5, 6), vec![LR]);
        assert_eq!(admissible_patterns(-3, 4, 6), vec![LL, LR]);
        assert_eq!(admissible_patterns(-2, 4, 6).len(), 4);
        assert!(admissible_patterns(-2, 3, 5).contains(&RL));
    }

    #[test]
    fn pretzel_negative_crossings() {
        for (l, m, n) in [
            (3, 5, 7),
            (3, 4, 7),
            (3, 5, 6),
            (2, 3, 5),
            (4, 4, 4),
            (3, 4, 6),
        ] {
            for pat in admissible_patterns(-l, m, n) {
                let d = pretzel_diagram(-l, m, n, pat).unwrap();
                let want = match pat {
                    RR => m + n,
                    LL => l + m,
                    LR => l + n,
                    RL => 0,
                };
                assert_eq!(d.n_minus() as i64, want, "{l} {m} {n} {pat:?}");
                assert_eq!(d.crossing_count() as i64, l + m + n);
            }
        }
    }

    #[test]
    fn components_by_parity() {
        assert_eq!(pretzel_diagram(-3, 5, 7, RR).unwrap().component_count(), 1);
        assert_eq!(pretzel_diagram(-3, 5, 6, LR).unwrap().component_count(), 1);
        assert_eq!(pretzel_diagram(-3, 4, 6, LR).unwrap().component_count(), 2);
        assert_eq!(pretzel_diagram(-2, 4, 6, RL).unwrap().component_count(), 3);
        assert_eq!(pretzel_diagram(-2, 2, 0, RL).unwrap().component_count(), 3);
    }

    #[test]
    fn smoothing_a_twist() {
        // unoriented resolution of the top right crossing of P(-3,3,5) is P(-3,3,4)
        let d = pretzel_diagram(-3, 3, 5, RR).unwrap();
        let c = pretzel_crossing([-3, 3, 5], 2, 0);
        let u = d.resolve(c, Resolution::Unoriented).unwrap();
        assert_eq!(u.crossing_count(), 10);
        assert_eq!(u.component_count(), 1);
        let o = d.resolve(c, Resolution::Oriented).unwrap();
        assert_eq!(o.component_count(), 2);
    }

    #[test]
    fn json_round_trip() {
        let d = pretzel_diagram(-2, 3, 3, RL).unwrap();
        let e = LinkDiagram::from_json(&d.to_json()).unwrap();
        assert_eq!(d, e);
        let r = LinkDiagram::from_json(&d.to_json().replace("\"0\":\"+\"", "\"0\":\"-\"")).unwrap();
        assert_eq!(r, d.reverse_component(0));
    }

    #[test]
    fn kinks_and_loops() {
        let d = LinkDiagram::new(
            vec![Crossing {
                edges: [1, 1, 2, 2],
                sign: 1,
            }],
            0,
        );
        assert!(d.is_ok(), "{d:?}");
        let d = d.unwrap();
        assert_eq!(d.components().len(), 1);
        let z = d.smooth(0, Smoothing::Zero).unwrap();
        let o = d.smooth(0, Smoothing::One).unwrap();
        assert_eq!(z.component_count() + o.component_count(), 3);
    }
}
