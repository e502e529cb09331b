use std::collections::BTreeMap;

use proptest::prelude::*;
use proptest::sample::SizeRange;

use pretzel_kh::bigraded::BigradedSpace;
use pretzel_kh::diagram::{admissible_patterns, pretzel_diagram, LinkDiagram};
use pretzel_kh::khcube::homology;
use pretzel_kh::seqcalc::{build_space, EMap, GradedSequence};
use pretzel_kh::structure::{cancellation_witness, decompose, decompose_bottom_up};

/// A sequence with nonzero ends and exceptional counts bounded by it.
fn seq_and_emap() -> impl Strategy<Value = (Vec<i64>, Vec<u32>)> {
    prop::collection::vec(0i64..4, 1..9)
        .prop_map(|mut v| {
            v[0] = v[0].max(1);
            let last = v.len() - 1;
            v[last] = v[last].max(1);
            v
        })
        .prop_flat_map(|v| {
            let es: Vec<_> = v.iter().map(|&a| 0..=(a as u32)).collect();
            (Just(v), es)
        })
}

fn space(max_terms: impl Into<SizeRange>) -> impl Strategy<Value = BigradedSpace> {
    prop::collection::vec(((-3i32..4, -4i32..5), 1u64..3), max_terms)
        .prop_map(BigradedSpace::from_terms)
}

proptest! {
    #[test]
    fn decompose_inverts_build_space((vals, es) in seq_and_emap(), shift_t in -5i32..5, shift_d in -3i32..3) {
        let a = GradedSequence::new(vals.clone());
        let e: EMap = es.iter().enumerate().filter(|(_, &k)| k > 0).map(|(i, &k)| (i as i32 + 1, k)).collect();
        let v = build_space(&a, &e).unwrap().shift(2 * shift_t + 2 * shift_d, shift_t);
        let d = decompose(&v).unwrap();
        prop_assert_eq!(&d, &decompose_bottom_up(&v).unwrap());
        prop_assert_eq!(d.a.values(), &vals[..]);
        prop_assert_eq!(d.a.start(), shift_t);
        let want: EMap = e.iter().map(|(&k, &n)| (k - 1 + shift_t, n)).collect();
        prop_assert_eq!(&d.e, &want);
        prop_assert_eq!(d.delta(), 2 * shift_d);
        prop_assert_eq!(d.rebuild(), v);
    }

    #[test]
    fn witness_recovers_planted_cancellation(v in space(0..8), w in space(0..8), frac in 0u64..3, a in -4i32..4, b in -3i32..3) {
        // cancel part of each V(t,q) against W(t+1,q)
        let mut planted = BTreeMap::new();
        let mut x = v.direct_sum(&w);
        let mut used_w: BTreeMap<(i32, i32), u64> = BTreeMap::new();
        for ((t, q), dv) in v.iter() {
            let free_w = w.dim(t + 1, q) - used_w.get(&(t + 1, q)).copied().unwrap_or(0);
            let c = (dv.min(free_w) * frac) / 2;
            if c > 0 {
                planted.insert((t, q), c);
                *used_w.entry((t + 1, q)).or_insert(0) += c;
                x = x.checked_sub(&BigradedSpace::from_terms([((t, q), c), ((t + 1, q), c)])).unwrap();
            }
        }
        let wit = cancellation_witness(&v, &w, &x).expect("planted cancellation has a witness");
        prop_assert_eq!(&wit.counts, &planted);
        let sh = |s: &BigradedSpace| s.shift(a, b);
        let moved = cancellation_witness(&sh(&v), &sh(&w), &sh(&x)).unwrap();
        let want: BTreeMap<(i32, i32), u64> = planted.iter().map(|(&(t, q), &c)| ((t + b, q + a), c)).collect();
        prop_assert_eq!(moved.counts, want);
    }

    #[test]
    fn bigraded_json_round_trip(v in space(0..12)) {
        prop_assert_eq!(BigradedSpace::from_json(&v.to_json()).unwrap(), v.clone());
        prop_assert_eq!(v.to_string().parse::<BigradedSpace>().unwrap(), v);
    }

    #[test]
    fn pd_json_round_trip(l in 2i64..5, m in 2i64..5, n in 0i64..5, k in 0usize..4) {
        let pats = admissible_patterns(-l, m, n);
        let d = pretzel_diagram(-l, m, n, pats[k % pats.len()]).unwrap();
        let back = LinkDiagram::from_json(&d.to_json()).unwrap();
        prop_assert_eq!(back.n_minus(), d.n_minus());
        prop_assert_eq!(back.crossings(), d.crossings());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn crossing_order_does_not_matter(
        (d, xs) in (2i64..4, 2i64..5, 1i64..5).prop_flat_map(|(l, m, n)| {
            let d = pretzel_diagram(-l, m, n, admissible_patterns(-l, m, n)[0]).unwrap();
            let xs = d.crossings().to_vec();
            (Just(d), Just(xs).prop_shuffle())
        })
    ) {
        let shuffled = LinkDiagram::new(xs, d.free_loops()).unwrap();
        prop_assert_eq!(homology(&shuffled).unwrap(), homology(&d).unwrap());
    }
}
