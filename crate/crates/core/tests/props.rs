mod common;

use common::{is_metric, metric_space};
use proptest::prelude::*;
use rigid_fraisse::aut::{automorphisms, Perm};
use rigid_fraisse::graph::{
    binary_rado, extension_defects, find_witness, saturate, set_pairs_of_size, Graph, WitnessQuery,
};
use rigid_fraisse::metric::{
    one_point_extend, pushout_amalgam, qu_saturate, read_metric, validate_metric, write_metric, KatetovType,
    QMetricSpace,
};
use rigid_fraisse::rational::{q, qi, Q};
use rigid_fraisse::rtype::{make_gadget, mr_validate, rtype_saturate, PointedSpace, RTypeSpec};
use std::collections::{BTreeMap, BTreeSet};

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut it = bits.into_iter();
            for u in 0..n {
                for v in u + 1..n {
                    if it.next().unwrap() {
                        edges.push((u, v));
                    }
                }
            }
            Graph::from_edges(n, &edges).unwrap()
        })
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

proptest! {
    #[test]
    fn witness_search_matches_brute_force(g in graph(10), picks in proptest::collection::vec(0u8..3, 10)) {
        let n = g.vertex_count();
        let x: BTreeSet<usize> = (0..n).filter(|&v| picks[v] == 1).collect();
        let y: BTreeSet<usize> = (0..n).filter(|&v| picks[v] == 2).collect();
        let q = WitnessQuery::new(x.clone(), y.clone()).unwrap();
        let brute = (0..n).find(|&v| {
            !x.contains(&v) && !y.contains(&v)
                && x.iter().all(|&a| g.has_edge(a, v))
                && y.iter().all(|&b| !g.has_edge(b, v))
        });
        prop_assert_eq!(find_witness(&g, &q).unwrap(), brute);
    }

    #[test]
    fn binary_rado_prefixes_are_induced(n in 1usize..24, m in 1usize..24) {
        let m = m.min(n);
        let prefix: Vec<usize> = (0..m).collect();
        prop_assert_eq!(binary_rado(n).induced(&prefix), binary_rado(m));
    }

    #[test]
    fn saturation_is_deterministic_and_complete(g in graph(7), k in 1usize..=2) {
        let s = saturate(&g, k);
        prop_assert_eq!(&s, &saturate(&g, k));
        let n = g.vertex_count();
        let prefix: Vec<usize> = (0..n).collect();
        prop_assert_eq!(s.induced(&prefix), g.clone());
        for size in 1..=k {
            for q in set_pairs_of_size(&prefix, size) {
                prop_assert!(find_witness(&s, &q).unwrap().is_some());
            }
        }
        prop_assert_eq!(s.vertex_count(), n + extension_defects(&g, k).len());
    }

    #[test]
    fn automorphisms_match_brute_force(g in graph(7)) {
        let auts = automorphisms(&g, None).unwrap();
        let brute: Vec<Perm> = permutations(g.vertex_count())
            .into_iter()
            .map(|p| Perm::from_images(p).unwrap())
            .filter(|p| p.is_automorphism_of(&g))
            .collect();
        prop_assert_eq!(auts.order(), brute.len());
        for p in &brute {
            prop_assert!(auts.contains(p));
        }
        prop_assert!(auts.is_group());
        for p in auts.perms() {
            for v in 0..g.vertex_count() {
                prop_assert_eq!(g.degree(v), g.degree(p.apply(v)));
            }
        }
    }

    #[test]
    fn one_point_extension_is_relabel_equivariant(
        m in metric_space(2, 6),
        picks in proptest::collection::vec(any::<bool>(), 6),
        shift in 1usize..50,
    ) {
        // realizable by construction: the type of the last point over the rest
        let n = m.len();
        let last = n - 1;
        let rest = m.restrict(&m.ids()[..last]).unwrap();
        let mut support: Vec<usize> = (0..last).filter(|&i| picks[i]).collect();
        if support.is_empty() {
            support.push(0);
        }
        let t = KatetovType::new(support.iter().map(|&s| (s, m.d(s, last)))).unwrap();
        let x = one_point_extend(&rest, &t, 100).unwrap();
        prop_assert!(is_metric(&x));

        let map: BTreeMap<usize, usize> = rest.ids().iter().map(|&p| (p, p + shift + 200)).collect();
        let moved = rest.relabel(&map).unwrap();
        let t2 = KatetovType::new(support.iter().map(|&s| (map[&s], m.d(s, last)))).unwrap();
        let y = one_point_extend(&moved, &t2, 100).unwrap();
        for &p in rest.ids() {
            prop_assert_eq!(x.d(100, p), y.d(100, map[&p]));
        }
    }

    #[test]
    fn pushout_restricts_to_inputs(m in metric_space(3, 7), ka in 1usize..3, split in 0usize..8) {
        let n = m.len();
        let ka = ka.min(n - 1);
        let rest: Vec<usize> = (ka..n).collect();
        let cut = split % (rest.len() + 1);
        let a_ids: Vec<usize> = (0..ka).collect();
        let b1_ids: Vec<usize> = a_ids.iter().chain(&rest[..cut]).copied().collect();
        let b2_ids: Vec<usize> = a_ids.iter().chain(&rest[cut..]).copied().collect();
        let a = m.restrict(&a_ids).unwrap();
        let b1 = m.restrict(&b1_ids).unwrap();
        let b2 = m.restrict(&b2_ids).unwrap();
        let id: BTreeMap<usize, usize> = a_ids.iter().map(|&c| (c, c)).collect();
        let am = pushout_amalgam(&a, &b1, &b2, &id, &id).unwrap();
        prop_assert!(is_metric(&am.space));
        prop_assert_eq!(am.space.len(), n);
        for &p in &b1_ids {
            for &q2 in &b2_ids {
                if !a_ids.contains(&p) && !a_ids.contains(&q2) {
                    let expect = a_ids.iter().map(|&c| b1.d(p, c) + b2.d(c, q2)).min().unwrap();
                    prop_assert_eq!(am.space.d(am.left[&p], am.right[&q2]), expect);
                    // the original joint metric is one amalgamation, so it cannot exceed the push-out
                    prop_assert!(m.d(p, q2) <= expect);
                }
            }
        }
    }

    #[test]
    fn qu_saturation_embeds_and_validates(m in metric_space(1, 3), k in 1usize..=2, menu_bits in 1u8..32) {
        let all = [q(1, 2), qi(1), q(3, 2), qi(2), qi(3)];
        let menu: Vec<Q> = all.iter().enumerate().filter(|(i, _)| menu_bits >> i & 1 == 1).map(|(_, v)| *v).collect();
        let s = qu_saturate(&m, k, &menu).unwrap();
        prop_assert!(s.contains_isometrically(&m));
        prop_assert!(validate_metric(&s).is_empty());
        prop_assert!(is_metric(&s));
        // distinct fresh points realize distinct types over the input
        let fresh: Vec<usize> = s.ids().iter().copied().filter(|p| !m.contains(*p)).collect();
        let vectors: BTreeSet<Vec<Q>> = fresh.iter().map(|&x| m.ids().iter().map(|&z| s.d(x, z)).collect()).collect();
        prop_assert_eq!(vectors.len(), fresh.len());
    }

    #[test]
    fn rtype_rounds_keep_the_floor(m in metric_space(1, 3), r2 in 3i64..8, menu_bits in 1u8..64) {
        let r = RTypeSpec::new(q(r2, 2)).unwrap();
        // special point pushed to distance >= r from everything else
        let mut space = QMetricSpace::new();
        space.push_point(99, vec![]).unwrap();
        for &p in m.ids() {
            let mut row = vec![r.r() + m.d(p, 0)];
            row.extend(space.ids()[1..].iter().map(|&o| m.d(o, p)));
            space.push_point(p, row).unwrap();
        }
        let p = PointedSpace { space, special: 99 };
        prop_assert!(mr_validate(&p, r));
        let all = [q(1, 2), qi(1), qi(2), q(5, 2), qi(3), qi(4)];
        let menu: Vec<Q> = all.iter().enumerate().filter(|(i, _)| menu_bits >> i & 1 == 1).map(|(_, v)| *v).collect();
        let s = rtype_saturate(&p, r, 1, &menu).unwrap();
        prop_assert!(mr_validate(&s, r));
        prop_assert!(is_metric(&s.space));
    }

    #[test]
    fn gadgets_are_metrics(n in 1usize..7, num in 1i64..40, den in 1i64..5) {
        let g = make_gadget(n, q(num, den)).unwrap();
        prop_assert!(is_metric(&g.space));
        prop_assert_eq!(g.space.len(), n + 2);
    }

    #[test]
    fn metric_text_round_trips(m in metric_space(0, 6)) {
        let text = write_metric(&m, &BTreeMap::new());
        let (back, roles) = read_metric(&text).unwrap();
        prop_assert!(roles.is_empty());
        prop_assert_eq!(back, m);
    }
}
