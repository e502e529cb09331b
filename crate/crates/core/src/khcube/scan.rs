//! Khovanov homology by adding one crossing at a time to a tangle complex.
//!
//! Objects are crossingless matchings of the current boundary with a `(t, q)` shift.
//! A morphism between matchings `A` and `B` is a linear combination of dot patterns on
//! the cycles of `A ∪ B` (every cobordism reduces to dotted disks capping these cycles).
//! Closed circles are delooped as soon as they appear and every isomorphism in the
//! differential is cancelled by Gaussian elimination, which keeps the complex small.

use std::collections::{HashMap, HashSet};
use std::rc::Rc;

use num_rational::Rational64 as Q;
use num_traits::{CheckedAdd, CheckedMul, One, Zero};

use super::KhError;
use crate::bigraded::BigradedSpace;
use crate::diagram::{Crossing, LinkDiagram, UnionFind};

type Mask = u64;

fn qadd(a: Q, b: Q) -> Q {
    a.checked_add(&b).expect("coefficient overflow")
}

fn qmul(a: Q, b: Q) -> Q {
    a.checked_mul(&b).expect("coefficient overflow")
}

/// Sorted by mask, no zero coefficients.
#[derive(Clone, Debug, Default, PartialEq)]
struct Morph(Vec<(Mask, Q)>);

impl Morph {
    fn from_map(m: HashMap<Mask, Q>) -> Self {
        let mut v: Vec<(Mask, Q)> = m.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        v.sort_by_key(|e| e.0);
        Morph(v)
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn id_coeff(&self) -> Q {
        self.0.iter().find(|e| e.0 == 0).map_or(Q::zero(), |e| e.1)
    }

    fn add_into(&self, acc: &mut HashMap<Mask, Q>, scale: Q) {
        for &(m, c) in &self.0 {
            let e = acc.entry(m).or_insert(Q::zero());
            *e = qadd(*e, qmul(c, scale));
        }
    }
}

/// Cycles of `A ∪ B` for two matchings on the same points, numbered by smallest point.
struct Cycles {
    of_point: Vec<u8>,
    count: usize,
}

fn cycles(a: &[u8], b: &[u8]) -> Cycles {
    let mut of_point = vec![u8::MAX; a.len()];
    let mut count = 0;
    for p in 0..a.len() {
        if of_point[p] != u8::MAX {
            continue;
        }
        let mut x = p;
        loop {
            of_point[x] = count as u8;
            let y = a[x] as usize;
            of_point[y] = count as u8;
            x = b[y] as usize;
            if x == p {
                break;
            }
        }
        count += 1;
    }
    Cycles { of_point, count }
}

/// Topology of a cobordism glued from disks: its components with genus and boundary cycles.
struct Plan {
    comp_disks: Vec<Mask>,
    comp_cycles: Vec<Mask>,
    comp_genus: Vec<u32>,
}

impl Plan {
    fn new(ndisks: usize, gluings: &[(usize, usize)], cycle_disk: &[usize]) -> Self {
        let mut uf = UnionFind::new(ndisks);
        for &(u, v) in gluings {
            uf.union(u, v);
        }
        let mut comp: HashMap<usize, usize> = HashMap::new();
        let mut comp_of = vec![0; ndisks];
        for (d, c) in comp_of.iter_mut().enumerate() {
            let r = uf.find(d);
            let n = comp.len();
            *c = *comp.entry(r).or_insert(n);
        }
        let nc = comp.len();
        let mut comp_disks = vec![0; nc];
        let mut chi = vec![0i64; nc];
        for (d, &c) in comp_of.iter().enumerate() {
            comp_disks[c] |= 1 << d;
            chi[c] += 1;
        }
        for &(u, _) in gluings {
            chi[comp_of[u]] -= 1;
        }
        let mut comp_cycles = vec![0; nc];
        let mut r = vec![0i64; nc];
        for (j, &d) in cycle_disk.iter().enumerate() {
            comp_cycles[comp_of[d]] |= 1 << j;
            r[comp_of[d]] += 1;
        }
        let comp_genus = (0..nc)
            .map(|c| {
                let g2 = 2 - chi[c] - r[c];
                assert!(
                    g2 >= 0 && g2 % 2 == 0,
                    "non-orientable or malformed cobordism"
                );
                (g2 / 2) as u32
            })
            .collect();
        Self {
            comp_disks,
            comp_cycles,
            comp_genus,
        }
    }

    /// Reduces the surface with the given dotted disks to dotted disks on its boundary cycles.
    fn evaluate(&self, dots: Mask, coeff: Q, acc: &mut HashMap<Mask, Q>) {
        let mut terms = vec![(0 as Mask, coeff)];
        for c in 0..self.comp_disks.len() {
            let k = (dots & self.comp_disks[c]).count_ones() + self.comp_genus[c];
            if k >= 2 {
                return;
            }
            let cyc = self.comp_cycles[c];
            let two_g = Q::from_integer(1 << self.comp_genus[c]);
            if k == 1 {
                for t in terms.iter_mut() {
                    t.0 |= cyc;
                    t.1 = qmul(t.1, two_g);
                }
            } else if cyc == 0 {
                return;
            } else {
                let mut next = Vec::with_capacity(terms.len() * cyc.count_ones() as usize);
                for &(m, x) in &terms {
                    let mut rest = cyc;
                    while rest != 0 {
                        let j = rest.trailing_zeros();
                        rest &= rest - 1;
                        next.push((m | (cyc & !(1 << j)), x));
                    }
                }
                terms = next;
            }
        }
        for (m, x) in terms {
            let e = acc.entry(m).or_insert(Q::zero());
            *e = qadd(*e, x);
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Obj {
    t: i32,
    q: i32,
    m: u32,
}

/// Data for gluing the current tangle to one crossing.
struct Join {
    k: usize,
    /// glue partner of each big point (old boundary points, then the four slots)
    glue: Vec<Option<usize>>,
    /// new boundary position of every unglued big point
    newpos: Vec<Option<usize>>,
    /// big point at every new boundary position
    at: Vec<usize>,
    new_boundary: Vec<usize>,
}

/// Slot partners of the two smoothings.
const SMOOTH: [[usize; 4]; 2] = [[1, 0, 3, 2], [3, 2, 1, 0]];

fn sarc(s: usize, slot: usize) -> usize {
    match (s, slot) {
        (0, 0 | 1) | (1, 0 | 3) => 0,
        _ => 1,
    }
}

impl Join {
    fn new(boundary: &[usize], x: &Crossing) -> Self {
        let k = boundary.len();
        let pos: HashMap<usize, usize> =
            boundary.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut glue = vec![None; k + 4];
        for i in 0..4 {
            let e = x.edges[i];
            if let Some(&p) = pos.get(&e) {
                glue[p] = Some(k + i);
                glue[k + i] = Some(p);
            } else if let Some(j) = (i + 1..4).find(|&j| x.edges[j] == e) {
                glue[k + i] = Some(k + j);
                glue[k + j] = Some(k + i);
            }
        }
        let label = |u: usize| if u < k { boundary[u] } else { x.edges[u - k] };
        let mut free: Vec<usize> = (0..k + 4).filter(|&u| glue[u].is_none()).collect();
        free.sort_by_key(|&u| label(u));
        let mut newpos = vec![None; k + 4];
        for (i, &u) in free.iter().enumerate() {
            newpos[u] = Some(i);
        }
        let new_boundary = free.iter().map(|&u| label(u)).collect();
        Self {
            k,
            glue,
            newpos,
            at: free,
            new_boundary,
        }
    }

    fn arc(&self, a: &[u8], s: usize, u: usize) -> usize {
        if u < self.k {
            a[u] as usize
        } else {
            self.k + SMOOTH[s][u - self.k]
        }
    }

    /// The new matching and one big point on each closed loop.
    fn combine(&self, a: &[u8], s: usize) -> (Vec<u8>, Vec<usize>) {
        let n = self.at.len();
        let mut m = vec![0u8; n];
        let mut seen = vec![false; self.k + 4];
        for &u in &self.at {
            if seen[u] {
                continue;
            }
            let mut cur = u;
            loop {
                seen[cur] = true;
                let v = self.arc(a, s, cur);
                seen[v] = true;
                match self.glue[v] {
                    None => {
                        let (pu, pv) = (self.newpos[u].unwrap(), self.newpos[v].unwrap());
                        m[pu] = pv as u8;
                        m[pv] = pu as u8;
                        break;
                    }
                    Some(w) => cur = w,
                }
            }
        }
        let mut loops = vec![];
        for w in 0..self.k + 4 {
            if seen[w] {
                continue;
            }
            loops.push(w);
            let mut cur = w;
            loop {
                seen[cur] = true;
                let v = self.arc(a, s, cur);
                seen[v] = true;
                cur = self.glue[v].expect("loop points are glued");
                if cur == w {
                    break;
                }
            }
        }
        (m, loops)
    }

    fn gluings(&self, disk: impl Fn(usize) -> usize) -> Vec<(usize, usize)> {
        (0..self.k + 4)
            .filter_map(|u| self.glue[u].filter(|&v| u < v).map(|v| (disk(u), disk(v))))
            .collect()
    }

    /// Boundary cycle disks: non-loop cycles of `pa ∪ pb`, loops of the source, loops of the target.
    fn cycle_disks(
        &self,
        pa: &[u8],
        pb: &[u8],
        la: &[usize],
        lb: &[usize],
        disk: impl Fn(usize) -> usize,
    ) -> (usize, Vec<usize>) {
        let cy = cycles(pa, pb);
        let mut first = vec![usize::MAX; cy.count];
        for p in (0..pa.len()).rev() {
            first[cy.of_point[p] as usize] = p;
        }
        let mut v: Vec<usize> = first.iter().map(|&p| disk(self.at[p])).collect();
        v.extend(la.iter().map(|&u| disk(u)));
        v.extend(lb.iter().map(|&u| disk(u)));
        (cy.count, v)
    }
}

/// Splits evaluated terms by the delooping components of source and target loops.
/// A source loop in the `1` summand (q + 1) needs a dot, in the `x` summand none; a target
/// loop in the `1` summand needs no dot, in the `x` summand one.
fn split_loops(
    terms: HashMap<Mask, Q>,
    n0: usize,
    la: usize,
    lb: usize,
) -> HashMap<(u32, u32), Morph> {
    let mut out: HashMap<(u32, u32), HashMap<Mask, Q>> = HashMap::new();
    let low = (1u64 << n0) - 1;
    for (m, c) in terms {
        if c.is_zero() {
            continue;
        }
        let sa = ((m >> n0) & ((1 << la) - 1)) as u32;
        let alpha = !sa & ((1 << la) - 1);
        let beta = ((m >> (n0 + la)) & ((1 << lb) - 1)) as u32;
        let e = out
            .entry((alpha, beta))
            .or_default()
            .entry(m & low)
            .or_insert(Q::zero());
        *e = qadd(*e, c);
    }
    out.into_iter()
        .map(|(k, v)| (k, Morph::from_map(v)))
        .filter(|(_, f)| !f.is_zero())
        .collect()
}

struct Tangle {
    boundary: Vec<usize>,
    matchings: Vec<Vec<u8>>,
    match_index: HashMap<Vec<u8>, u32>,
    objs: Vec<Obj>,
    alive: Vec<bool>,
    out: Vec<HashMap<u32, Morph>>,
    inc: Vec<HashSet<u32>>,
    compose_plans: HashMap<(u32, u32, u32), Rc<(Plan, usize)>>,
}

impl Tangle {
    fn empty() -> Self {
        let mut t = Self::with_boundary(vec![]);
        let m = t.intern(vec![]);
        t.push_obj(Obj { t: 0, q: 0, m });
        t
    }

    fn with_boundary(boundary: Vec<usize>) -> Self {
        Self {
            boundary,
            matchings: vec![],
            match_index: HashMap::new(),
            objs: vec![],
            alive: vec![],
            out: vec![],
            inc: vec![],
            compose_plans: HashMap::new(),
        }
    }

    fn intern(&mut self, m: Vec<u8>) -> u32 {
        if let Some(&i) = self.match_index.get(&m) {
            return i;
        }
        let i = self.matchings.len() as u32;
        self.matchings.push(m.clone());
        self.match_index.insert(m, i);
        i
    }

    fn push_obj(&mut self, o: Obj) -> u32 {
        self.objs.push(o);
        self.alive.push(true);
        self.out.push(HashMap::new());
        self.inc.push(HashSet::new());
        (self.objs.len() - 1) as u32
    }

    fn add_to_entry(&mut self, x: u32, y: u32, f: &Morph, scale: Q) {
        let mut acc: HashMap<Mask, Q> = HashMap::new();
        if let Some(g) = self.out[x as usize].get(&y) {
            g.add_into(&mut acc, Q::one());
        }
        f.add_into(&mut acc, scale);
        let h = Morph::from_map(acc);
        if h.is_zero() {
            self.out[x as usize].remove(&y);
            self.inc[y as usize].remove(&x);
        } else {
            self.out[x as usize].insert(y, h);
            self.inc[y as usize].insert(x);
        }
    }

    /// `g ∘ f` for `f: A -> B`, `g: B -> C`.
    fn compose(&mut self, a: u32, b: u32, c: u32, f: &Morph, g: &Morph) -> Morph {
        let plan = self
            .compose_plans
            .entry((a, b, c))
            .or_insert_with(|| {
                let (ma, mb, mc) = (
                    &self.matchings[a as usize],
                    &self.matchings[b as usize],
                    &self.matchings[c as usize],
                );
                let ab = cycles(ma, mb);
                let bc = cycles(mb, mc);
                let ac = cycles(ma, mc);
                let nab = ab.count;
                let mut gl = vec![];
                for p in 0..mb.len() {
                    if p < mb[p] as usize {
                        gl.push((ab.of_point[p] as usize, nab + bc.of_point[p] as usize));
                    }
                }
                let mut first = vec![usize::MAX; ac.count];
                for p in (0..ma.len()).rev() {
                    first[ac.of_point[p] as usize] = p;
                }
                let cd: Vec<usize> = first.iter().map(|&p| ab.of_point[p] as usize).collect();
                Rc::new((Plan::new(nab + bc.count, &gl, &cd), nab))
            })
            .clone();
        let (plan, nab) = (&plan.0, plan.1);
        let mut acc = HashMap::new();
        for &(mf, cf) in &f.0 {
            for &(mg, cg) in &g.0 {
                plan.evaluate(mf | mg << nab, qmul(cf, cg), &mut acc);
            }
        }
        Morph::from_map(acc)
    }

    fn add_crossing(&self, x: &Crossing) -> Tangle {
        let join = Join::new(&self.boundary, x);
        let mut nt = Tangle::with_boundary(join.new_boundary.clone());
        let shifts: [(i32, i32); 2] = if x.sign > 0 {
            [(0, 1), (1, 2)]
        } else {
            [(-1, -2), (0, -1)]
        };
        let mut combined: HashMap<(u32, usize), Rc<(Vec<u8>, Vec<usize>)>> = HashMap::new();
        let mut base: HashMap<(u32, usize), u32> = HashMap::new();
        for (i, o) in self.objs.iter().enumerate() {
            if !self.alive[i] {
                continue;
            }
            for s in 0..2 {
                let cm = combined
                    .entry((o.m, s))
                    .or_insert_with(|| Rc::new(join.combine(&self.matchings[o.m as usize], s)))
                    .clone();
                let m = nt.intern(cm.0.clone());
                let nl = cm.1.len() as u32;
                let first = nt.objs.len() as u32;
                for alpha in 0..(1u32 << nl) {
                    let q = o.q + shifts[s].1 + nl as i32 - 2 * alpha.count_ones() as i32;
                    nt.push_obj(Obj {
                        t: o.t + shifts[s].0,
                        q,
                        m,
                    });
                }
                base.insert((i as u32, s), first);
            }
        }
        // old differential, extended by the identity on the crossing's smoothing
        let mut ext_plans: HashMap<(u32, u32, usize), Rc<(Plan, usize, usize, usize)>> =
            HashMap::new();
        for (i, o) in self.objs.iter().enumerate() {
            if !self.alive[i] {
                continue;
            }
            for (&y, f) in &self.out[i] {
                let oy = self.objs[y as usize];
                for s in 0..2 {
                    let plan = ext_plans
                        .entry((o.m, oy.m, s))
                        .or_insert_with(|| {
                            let (ma, mb) = (
                                &self.matchings[o.m as usize],
                                &self.matchings[oy.m as usize],
                            );
                            let ab = cycles(ma, mb);
                            let nab = ab.count;
                            let disk = |u: usize| {
                                if u < join.k {
                                    ab.of_point[u] as usize
                                } else {
                                    nab + sarc(s, u - join.k)
                                }
                            };
                            let (pa, la) = &*combined[&(o.m, s)];
                            let (pb, lb) = &*combined[&(oy.m, s)];
                            let (n0, cd) = join.cycle_disks(pa, pb, la, lb, disk);
                            let gl = join.gluings(disk);
                            Rc::new((Plan::new(nab + 2, &gl, &cd), n0, la.len(), lb.len()))
                        })
                        .clone();
                    let (p, n0, la, lb) = (&plan.0, plan.1, plan.2, plan.3);
                    let mut acc = HashMap::new();
                    for &(m, c) in &f.0 {
                        p.evaluate(m, c, &mut acc);
                    }
                    let (bx, by) = (base[&(i as u32, s)], base[&(y, s)]);
                    for ((alpha, beta), g) in split_loops(acc, n0, la, lb) {
                        nt.add_to_entry(bx + alpha, by + beta, &g, Q::one());
                    }
                }
            }
        }
        // the saddle, with the Koszul sign
        let mut saddle_plans: HashMap<u32, Rc<(Plan, usize, usize, usize)>> = HashMap::new();
        for (i, o) in self.objs.iter().enumerate() {
            if !self.alive[i] {
                continue;
            }
            let plan = saddle_plans
                .entry(o.m)
                .or_insert_with(|| {
                    let ma = &self.matchings[o.m as usize];
                    let mut arc_id = vec![usize::MAX; ma.len()];
                    let mut narcs = 0;
                    for p in 0..ma.len() {
                        if arc_id[p] == usize::MAX {
                            arc_id[p] = narcs;
                            arc_id[ma[p] as usize] = narcs;
                            narcs += 1;
                        }
                    }
                    let disk = |u: usize| if u < join.k { arc_id[u] } else { narcs };
                    let (pa, la) = &*combined[&(o.m, 0)];
                    let (pb, lb) = &*combined[&(o.m, 1)];
                    let (n0, cd) = join.cycle_disks(pa, pb, la, lb, disk);
                    let gl = join.gluings(disk);
                    Rc::new((Plan::new(narcs + 1, &gl, &cd), n0, la.len(), lb.len()))
                })
                .clone();
            let (p, n0, la, lb) = (&plan.0, plan.1, plan.2, plan.3);
            let sign = if o.t.rem_euclid(2) == 0 {
                Q::one()
            } else {
                -Q::one()
            };
            let mut acc = HashMap::new();
            p.evaluate(0, sign, &mut acc);
            let (bx, by) = (base[&(i as u32, 0)], base[&(i as u32, 1)]);
            for ((alpha, beta), g) in split_loops(acc, n0, la, lb) {
                nt.add_to_entry(bx + alpha, by + beta, &g, Q::one());
            }
        }
        nt
    }

    fn check_d_squared(&mut self) -> Result<(), KhError> {
        for x in 0..self.objs.len() {
            if !self.alive[x] {
                continue;
            }
            let mut acc: HashMap<u32, HashMap<Mask, Q>> = HashMap::new();
            let firsts: Vec<(u32, Morph)> =
                self.out[x].iter().map(|(&y, f)| (y, f.clone())).collect();
            for (y, f) in firsts {
                let seconds: Vec<(u32, Morph)> = self.out[y as usize]
                    .iter()
                    .map(|(&z, g)| (z, g.clone()))
                    .collect();
                for (z, g) in seconds {
                    let (a, b, c) = (
                        self.objs[x].m,
                        self.objs[y as usize].m,
                        self.objs[z as usize].m,
                    );
                    let h = self.compose(a, b, c, &f, &g);
                    h.add_into(acc.entry(z).or_default(), Q::one());
                }
            }
            for (z, m) in acc {
                if m.values().any(|c| !c.is_zero()) {
                    return Err(KhError::Invariant(format!(
                        "d^2 != 0 between objects {x} and {z}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Cancels every isomorphism `b1 -> b2` of the differential.
    fn reduce(&mut self) {
        loop {
            let mut progress = false;
            for x in 0..self.objs.len() as u32 {
                if !self.alive[x as usize] {
                    continue;
                }
                let mx = self.objs[x as usize].m;
                let pick = self.out[x as usize]
                    .iter()
                    .filter(|(&y, f)| self.objs[y as usize].m == mx && !f.id_coeff().is_zero())
                    .min_by_key(|(&y, _)| (self.inc[y as usize].len(), y))
                    .map(|(&y, f)| (y, f.id_coeff()));
                if let Some((y, c)) = pick {
                    self.cancel(x, y, c);
                    progress = true;
                }
            }
            if !progress {
                break;
            }
        }
    }

    fn cancel(&mut self, b1: u32, b2: u32, c: Q) {
        debug_assert_eq!(
            self.out[b1 as usize][&b2].0.len(),
            1,
            "isomorphism must be a multiple of the identity"
        );
        let sources: Vec<(u32, Morph)> = self.inc[b2 as usize]
            .iter()
            .filter(|&&s| s != b1)
            .map(|&s| (s, self.out[s as usize][&b2].clone()))
            .collect();
        let targets: Vec<(u32, Morph)> = self.out[b1 as usize]
            .iter()
            .filter(|(&t, _)| t != b2)
            .map(|(&t, f)| (t, f.clone()))
            .collect();
        for b in [b1, b2] {
            let ins: Vec<u32> = self.inc[b as usize].drain().collect();
            for s in ins {
                self.out[s as usize].remove(&b);
            }
            let outs: Vec<u32> = self.out[b as usize].drain().map(|(t, _)| t).collect();
            for t in outs {
                self.inc[t as usize].remove(&b);
            }
            self.alive[b as usize] = false;
        }
        let m = self.objs[b1 as usize].m;
        let scale = -(Q::one() / c);
        for (s, delta) in &sources {
            for (t, gamma) in &targets {
                let (ms, mt) = (self.objs[*s as usize].m, self.objs[*t as usize].m);
                let h = self.compose(ms, m, mt, delta, gamma);
                if !h.is_zero() {
                    self.add_to_entry(*s, *t, &h, scale);
                }
            }
        }
    }
}

/// Order of crossings: each next crossing shares as many edges as possible with the boundary.
fn crossing_order(d: &LinkDiagram) -> Vec<usize> {
    let n = d.crossing_count();
    let mut done = vec![false; n];
    let mut open: HashSet<usize> = HashSet::new();
    let mut order = vec![];
    for _ in 0..n {
        let next = (0..n)
            .filter(|&i| !done[i])
            .max_by_key(|&i| {
                let shared = d.crossings()[i]
                    .edges
                    .iter()
                    .filter(|e| open.contains(e))
                    .count();
                (shared, std::cmp::Reverse(i))
            })
            .unwrap();
        done[next] = true;
        for e in d.crossings()[next].edges {
            if !open.remove(&e) {
                open.insert(e);
            }
        }
        order.push(next);
    }
    order
}

pub fn homology(d: &LinkDiagram, check_d_squared: bool) -> Result<BigradedSpace, KhError> {
    let mut t = Tangle::empty();
    for i in crossing_order(d) {
        t = t.add_crossing(&d.crossings()[i]);
        if check_d_squared {
            t.check_d_squared()?;
        }
        t.reduce();
    }
    if (0..t.objs.len()).any(|x| t.alive[x] && !t.out[x].is_empty()) {
        return Err(KhError::Invariant(
            "closed complex kept a nonzero differential".into(),
        ));
    }
    let mut v = BigradedSpace::new();
    for (o, &a) in t.objs.iter().zip(&t.alive) {
        if a {
            v.add_dim(o.t, o.q, 1);
        }
    }
    let circle = BigradedSpace::from_terms([((0, 1), 1), ((0, -1), 1)]);
    for _ in 0..d.free_loops() {
        v = v.tensor(&circle);
    }
    Ok(v)
}
