//! Named verification suites producing one JSON record per checked instance.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::bigraded::LaurentPoly;
use crate::diagram::{
    admissible_patterns, pretzel_crossing, pretzel_diagram, torus2_diagram, Resolution,
};
use crate::formula::{
    assemble, assemble_parts, grading_shifts, orientation_pattern, Orientation, PretzelSpec,
};
use crate::jones::{kauffman_jones, pretzel_ll0_jones, torus2_jones};
use crate::khcube::{homology_with, KhConfig};
use crate::structure::{
    cancellation_witness, check_no_cancellation, decompose, decompose_bottom_up, exceptional_t,
    expected_exceptional_t, skein_triple, split_l_u, StructureError,
};

pub const SUITES: [&str; 8] = [
    "formula-vs-oracle",
    "euler",
    "delta-support",
    "decomposition",
    "linking",
    "skein",
    "jones-closed-form",
    "mirror",
];

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Record {
    pub spec: String,
    pub check: String,
    pub pass: bool,
    pub details: String,
}

impl Record {
    fn new(spec: impl ToString, check: &str, r: Result<(), String>) -> Self {
        let (pass, details) = match r {
            Ok(()) => (true, String::new()),
            Err(e) => (false, e),
        };
        Self {
            spec: spec.to_string(),
            check: check.to_string(),
            pass,
            details,
        }
    }
}

/// All `2 ≤ l ≤ m ≤ n ≤ nmax` with `l + m + n ≤ smax`.
pub fn triples(nmax: i64, smax: i64) -> Vec<(i64, i64, i64)> {
    let mut v = vec![];
    for l in 2..=nmax {
        for m in l..=nmax {
            for n in m..=nmax {
                if l + m + n <= smax {
                    v.push((l, m, n));
                }
            }
        }
    }
    v
}

fn eq_or<T: PartialEq + std::fmt::Display>(a: &T, b: &T, what: &str) -> Result<(), String> {
    if a == b {
        Ok(())
    } else {
        Err(format!("{what}: {a} != {b}"))
    }
}

pub fn run_suite(name: &str, max: i64, cfg: &KhConfig) -> Option<Vec<Record>> {
    let recs = match name {
        "formula-vs-oracle" => formula_vs_oracle(max, cfg),
        "euler" => euler(max),
        "delta-support" => delta_support(max),
        "decomposition" => decomposition(max),
        "linking" => linking(max),
        "skein" => skein(max, cfg),
        "jones-closed-form" => jones_closed_form(max),
        "mirror" => mirror(max, cfg),
        _ => return None,
    };
    Some(recs)
}

/// `--max` bounds the total crossing count `l + m + n`.
fn formula_vs_oracle(max: i64, cfg: &KhConfig) -> Vec<Record> {
    let specs: Vec<PretzelSpec> = triples(max, max)
        .into_iter()
        .flat_map(|(l, m, n)| {
            admissible_patterns(-l, m, n)
                .into_iter()
                .map(move |p| PretzelSpec::with_pattern(l, m, n, p))
        })
        .collect();
    specs
        .par_iter()
        .map(|s| {
            let r = (|| {
                let f = assemble(s).map_err(|e| e.to_string())?;
                let o = homology_with(&s.diagram().map_err(|e| e.to_string())?, cfg)
                    .map_err(|e| e.to_string())?;
                eq_or(&f, &o, "formula vs oracle")
            })();
            Record::new(s, "formula-vs-oracle", r)
        })
        .collect()
}

/// `--max` bounds `n`.
fn euler(max: i64) -> Vec<Record> {
    triples(max, i64::MAX)
        .par_iter()
        .map(|&(l, m, n)| {
            let s = PretzelSpec::new(l, m, n);
            let r = (|| {
                let chi = assemble(&s)
                    .map_err(|e| e.to_string())?
                    .euler_characteristic();
                let j = kauffman_jones(&s.diagram().map_err(|e| e.to_string())?)
                    .map_err(|e| e.to_string())?;
                eq_or(&chi, &j.unnormalized, "Euler characteristic vs Jones")
            })();
            Record::new(s, "euler", r)
        })
        .collect()
}

/// Expected δ-support: all three gradings, except `m = l` odd where the upper part is zero.
pub fn expected_delta_support(l: i64, m: i64, n: i64) -> BTreeSet<i32> {
    let dm = grading_shifts(orientation_pattern(l, m, n), l, m, n).delta_max as i32;
    if m == l && l % 2 == 1 {
        [dm - 2, dm].into()
    } else {
        [dm - 4, dm - 2, dm].into()
    }
}

/// `--max` bounds `n`.
fn delta_support(max: i64) -> Vec<Record> {
    triples(max, i64::MAX)
        .into_iter()
        .map(|(l, m, n)| {
            let s = PretzelSpec::new(l, m, n);
            let r = (|| {
                let got = assemble(&s).map_err(|e| e.to_string())?.delta_support();
                let want = expected_delta_support(l, m, n);
                if got == want {
                    Ok(())
                } else {
                    Err(format!("δ-support {got:?}, expected {want:?}"))
                }
            })();
            Record::new(s, "delta-support", r)
        })
        .collect()
}

/// Split into L and U, decompose both (two directions), rebuild, and check the overlap.
pub fn check_decomposition(l: i64, m: i64, n: i64) -> Result<(), String> {
    let parts = assemble_parts(l, m, n).map_err(|e| e.to_string())?;
    let v = parts.total();
    let (lo, up) = split_l_u(&v, parts.shifts.delta_max as i32).map_err(|e| e.to_string())?;
    for s in [&lo, &up] {
        let d = decompose(s).map_err(|e| e.to_string())?;
        if decompose_bottom_up(s).map_err(|e| e.to_string())? != d {
            return Err("top-down and bottom-up decompositions differ".into());
        }
        eq_or(&d.rebuild(), s, "rebuild")?;
    }
    if m != l {
        let tl = parts.lower.t_range().map(|r| r.1);
        let tu = parts.upper.t_range().map(|r| r.0);
        let want = if l % 2 == 1 { 1 } else { -1 };
        match (tl, tu) {
            (Some(a), Some(b)) if b - a == want => {}
            _ => {
                return Err(format!(
                    "overlap {:?}, expected {want}",
                    tu.zip(tl).map(|(b, a)| b - a)
                ))
            }
        }
    }
    Ok(())
}

/// `--max` bounds `n`.
fn decomposition(max: i64) -> Vec<Record> {
    triples(max, i64::MAX)
        .into_iter()
        .map(|(l, m, n)| {
            Record::new(
                PretzelSpec::new(l, m, n),
                "decomposition",
                check_decomposition(l, m, n),
            )
        })
        .collect()
}

/// Exceptional-pair t-gradings of the formula against linking numbers of the diagram.
pub fn check_linking(l: i64, m: i64, n: i64) -> Result<(), String> {
    let s = PretzelSpec::new(l, m, n);
    let parts = assemble_parts(l, m, n).map_err(|e| e.to_string())?;
    let (lo, up) =
        split_l_u(&parts.total(), parts.shifts.delta_max as i32).map_err(|e| e.to_string())?;
    let mut got = exceptional_t(&decompose(&lo).map_err(|e| e.to_string())?);
    got.extend(exceptional_t(&decompose(&up).map_err(|e| e.to_string())?));
    got.sort_unstable();
    let want = expected_exceptional_t(&s.diagram().map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    if got == want {
        Ok(())
    } else {
        Err(format!("exceptional t {got:?}, expected {want:?}"))
    }
}

/// `--max` bounds `n`.
fn linking(max: i64) -> Vec<Record> {
    triples(max, i64::MAX)
        .into_iter()
        .map(|(l, m, n)| Record::new(PretzelSpec::new(l, m, n), "linking", check_linking(l, m, n)))
        .collect()
}

/// One step of the inductive computation: resolve the top crossing of a strand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SkeinStep {
    pub spec: PretzelSpec,
    /// 1 = middle strand, 2 = rightmost strand
    pub band: usize,
    pub epsilon: i64,
}

/// Steps of the induction with `l + m + n ≤ max`, with the value of ε each step uses.
pub fn skein_steps(max: i64) -> Vec<SkeinStep> {
    let mut v = vec![];
    let mut push = |l, m, n, p, band, epsilon| {
        if l + m + n <= max {
            v.push(SkeinStep {
                spec: PretzelSpec::with_pattern(l, m, n, p),
                band,
                epsilon,
            })
        }
    };
    for l in 2..=max {
        for n in 1..=max {
            // m = l: unravel the rightmost strand
            if l % 2 == 1 {
                push(l, l, n, orientation_pattern(l, l, n), 2, -1);
            } else {
                push(l, l, n, Orientation::RL, 2, l + n - 1);
            }
            // m = l + 1, rightmost strand
            if l % 2 == 1 && n % 2 == 0 && n > l {
                push(l, l + 1, n, Orientation::LL, 2, n - l - 2);
            }
            if l % 2 == 0 && n > l {
                push(l, l + 1, n, Orientation::RL, 2, l + n - 1);
            }
            // middle strand
            for m in l + 1..=n {
                match (l % 2, m % 2, n % 2) {
                    (1, 0, 1) => push(l, m, n, orientation_pattern(l, m, n), 1, n - l - 1),
                    (1, 1, 1) => push(l, m, n, orientation_pattern(l, m, n), 1, l - n - 1),
                    (1, _, 0) if m > l + 1 => push(l, m, n, Orientation::LR, 1, m - n - 1),
                    (0, _, _) if m > l + 1 => push(l, m, n, Orientation::RL, 1, l + m - 1),
                    _ => {}
                }
            }
        }
    }
    v
}

/// The step's skein triple admits a witness, ε matches (for some orientation of the
/// unoriented resolution), and the no-cancellation lemma agrees on the upper part.
pub fn check_skein(step: &SkeinStep, cfg: &KhConfig) -> Result<(), String> {
    let s = step.spec;
    let d = s.diagram().map_err(|e| e.to_string())?;
    let c = pretzel_crossing([s.l, s.m, s.n], step.band, 0);
    let kh = |x: &crate::diagram::LinkDiagram| homology_with(x, cfg);
    let tr = skein_triple(&d, c, kh).map_err(|e| e.to_string())?;
    let d_u = d
        .resolve(c, Resolution::Unoriented)
        .map_err(|e| e.to_string())?;
    let eps: BTreeSet<i64> = (0..d_u.components().len().max(1))
        .map(|k| {
            if k == 0 {
                d_u.clone()
            } else {
                d_u.reverse_component(k)
            }
        })
        .map(|x| x.n_minus() as i64 - d.n_minus() as i64)
        .collect();
    if !eps.contains(&step.epsilon) {
        return Err(format!(
            "ε {} (orientations give {eps:?}), expected {}",
            tr.epsilon, step.epsilon
        ));
    }
    let w = cancellation_witness(&tr.v, &tr.w, &tr.x).ok_or("no cancellation witness")?;
    // the lemma applies to U(V) ⊕ W against X minus L(V) when that makes sense
    let dm = |sp: &crate::bigraded::BigradedSpace| sp.delta_support().last().copied();
    if let Some(top) = dm(&tr.v) {
        if let Ok((lv, uv)) = split_l_u(&tr.v, top) {
            if let Some(xr) = tr.x.checked_sub(&lv) {
                match check_no_cancellation(&uv, &tr.w, &xr) {
                    Ok(true) if !w.is_zero() => {
                        return Err("lemma forbids cancellation but the witness is nonzero".into())
                    }
                    Err(e @ StructureError::LemmaViolated(_)) => return Err(e.to_string()),
                    _ => {}
                }
            }
        }
    }
    Ok(())
}

/// `--max` bounds the total crossing count of the diagram.
fn skein(max: i64, cfg: &KhConfig) -> Vec<Record> {
    skein_steps(max)
        .par_iter()
        .map(|st| {
            Record::new(
                format!("{} strand {}", st.spec, st.band),
                "skein",
                check_skein(st, cfg),
            )
        })
        .collect()
}

/// `--max` bounds `l`.
fn jones_closed_form(max: i64) -> Vec<Record> {
    let mut out = vec![];
    for l in 2..=max {
        let r = (|| {
            let k = kauffman_jones(&torus2_diagram(l as usize)).map_err(|e| e.to_string())?;
            eq_or(
                &k.normalized,
                &torus2_jones(l).map_err(|e| e.to_string())?,
                "torus",
            )
        })();
        out.push(Record::new(format!("T(2,{l})"), "jones-closed-form", r));
        for p in admissible_patterns(-l, l, 0)
            .into_iter()
            .filter(|p| matches!(p, Orientation::LR | Orientation::RL))
        {
            let r = (|| {
                let d = pretzel_diagram(-l, l, 0, p).map_err(|e| e.to_string())?;
                let k = kauffman_jones(&d).map_err(|e| e.to_string())?;
                let c: LaurentPoly = pretzel_ll0_jones(l, p).map_err(|e| e.to_string())?;
                eq_or(&c, &k.unnormalized, "closed form vs Kauffman")
            })();
            out.push(Record::new(
                PretzelSpec::with_pattern(l, l, 0, p),
                "jones-closed-form",
                r,
            ));
        }
    }
    out
}

/// `--max` bounds the total crossing count.
fn mirror(max: i64, cfg: &KhConfig) -> Vec<Record> {
    let specs: Vec<PretzelSpec> = triples(max, max)
        .into_iter()
        .flat_map(|(l, m, n)| {
            admissible_patterns(-l, m, n)
                .into_iter()
                .map(move |p| PretzelSpec::with_pattern(l, m, n, p))
        })
        .collect();
    specs
        .par_iter()
        .map(|s| {
            let r = (|| {
                let d = s.diagram().map_err(|e| e.to_string())?;
                let a = homology_with(&d, cfg).map_err(|e| e.to_string())?;
                let b = homology_with(&d.mirror(), cfg).map_err(|e| e.to_string())?;
                eq_or(&b, &a.mirror(), "mirror")
            })();
            Record::new(s, "mirror", r)
        })
        .collect()
}
