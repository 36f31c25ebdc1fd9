//! Property suite: structural invariants checked over generated inputs.

mod common;

use std::sync::Arc;

use finmet::topo::MAX_MATERIALIZE;
use finmet::{
    base_from_qm, compare_bases, enumerate_mvs, full_convex_report, product, BallKind,
    Entourage, FiniteTopology, MvsClass, MvsTable, PointSet, QmSpace,
};
use proptest::prelude::*;

fn arb_subbase(n: usize) -> impl Strategy<Value = Vec<PointSet>> {
    prop::collection::vec(prop::collection::vec(0..n, 0..=n), 0..5).prop_map(move |sets| {
        sets.iter().map(|idx| PointSet::from_indices(n, idx)).collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_topology_is_idempotent(subbase in arb_subbase(5)) {
        let t = FiniteTopology::generate(5, &subbase);
        let again = FiniteTopology::generate(5, &t.opens().unwrap());
        prop_assert_eq!(t, again);
    }

    #[test]
    fn minimal_opens_are_open_and_minimal(subbase in arb_subbase(5)) {
        let t = FiniteTopology::generate(5, &subbase);
        for x in 0..5 {
            let m = t.min_open(x);
            prop_assert!(m.contains(x));
            prop_assert!(t.is_open(m));
            // Every open containing x contains the minimal open.
            for u in t.opens().unwrap() {
                if u.contains(x) {
                    prop_assert!(m.is_subset(&u));
                }
            }
        }
    }

    #[test]
    fn relative_topology_composes(subbase in arb_subbase(5), a in prop::collection::vec(0..5usize, 1..=5)) {
        let t = FiniteTopology::generate(5, &subbase);
        let sub = PointSet::from_indices(5, &a);
        let trace = t.relative(&sub);
        // The trace opens are exactly the intersections with the subset.
        for u in t.opens().unwrap() {
            let mut expected = PointSet::empty(sub.len());
            for (j, p) in sub.iter().enumerate() {
                if u.contains(p) {
                    expected.insert(j);
                }
            }
            prop_assert!(trace.is_open(&expected));
        }
    }

    #[test]
    fn random_space_invariants(seed in any::<u64>(), n in 1..=4usize, k in 2..=4usize) {
        let q = common::random_max_space(&mut common::rng(seed), n, k);
        let t = q.induced_topology();
        // Balls grow with the radius.
        for x in 0..n {
            for m1 in 1..k {
                for m2 in m1..k {
                    prop_assert!(q.ball(x, m1, BallKind::Open).is_subset(&q.ball(x, m2, BallKind::Open)));
                    prop_assert!(q.ball(x, m1, BallKind::Open).is_subset(&q.ball(x, m1, BallKind::Closed)));
                }
            }
        }
        // Open/closed systems are equivalent over the (atom-free) max set.
        prop_assert!(q.closed_ball_equivalence().unwrap());
        // The entourage base reproduces the topology.
        let qb = base_from_qm(&q).unwrap();
        prop_assert_eq!(finmet::base_topology(&qb.members).unwrap(), t);
    }

    #[test]
    fn pullback_functoriality(seed in any::<u64>(),
                              g in prop::collection::vec(0..3usize, 1..=4),
                              h_src in prop::collection::vec(any::<prop::sample::Index>(), 1..=4)) {
        let q = common::random_max_space(&mut common::rng(seed), 3, 3);
        let named = |n: usize| (0..n).map(|i| i.to_string()).collect::<Vec<_>>();
        let h: Vec<usize> = h_src.iter().map(|i| i.index(g.len())).collect();
        let via_g = q.pullback(named(g.len()), &g).unwrap();
        let lhs = via_g.pullback(named(h.len()), &h).unwrap();
        let composite: Vec<usize> = h.iter().map(|&i| g[i]).collect();
        let rhs = q.pullback(named(h.len()), &composite).unwrap();
        prop_assert_eq!(lhs.matrix(), rhs.matrix());
    }

    #[test]
    fn restriction_then_restriction(seed in any::<u64>(), a in prop::collection::vec(0..4usize, 1..=4)) {
        let q = common::random_max_space(&mut common::rng(seed), 4, 3);
        let sub = PointSet::from_indices(4, &a);
        let r = q.restrict(&sub).unwrap();
        let full = PointSet::full(r.len());
        prop_assert_eq!(r.restrict(&full).unwrap().matrix(), r.matrix());
    }

    #[test]
    fn product_projections_and_symmetry(s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = common::random_max_space(&mut common::rng(s1), 3, 3);
        let b = common::random_max_space(&mut common::rng(s2), 2, 3);
        // `product` itself asserts the topology identity and system
        // equivalence; on top of that the factor order only permutes points.
        let ab = product(&[&a, &b]).unwrap();
        let ba = product(&[&b, &a]).unwrap();
        prop_assert_eq!(ab.len(), ba.len());
        for x1 in 0..3 { for y1 in 0..2 { for x2 in 0..3 { for y2 in 0..2 {
            prop_assert_eq!(ab.dist(x1 * 2 + y1, x2 * 2 + y2), ba.dist(y1 * 3 + x1, y2 * 3 + x2));
        }}}}
    }

    #[test]
    fn symmetric_spaces_have_symmetric_entourages(seed in any::<u64>()) {
        let q = common::symmetrize(&common::random_max_space(&mut common::rng(seed), 4, 3));
        prop_assert!(q.is_symmetric());
        let qb = base_from_qm(&q).unwrap();
        for u in &qb.members {
            prop_assert!(u.is_symmetric());
        }
        prop_assert!(finmet::generates_uniformity(&qb.members));
    }

    #[test]
    fn cofinal_bases_share_topology(seed in any::<u64>()) {
        let q = common::random_max_space(&mut common::rng(seed), 4, 3);
        let qb = base_from_qm(&q).unwrap();
        // Padding with a superset member keeps the quasiuniformity.
        let mut padded = qb.members.clone();
        padded.push(Entourage::full(4));
        let c = compare_bases(&qb.members, &padded).unwrap();
        prop_assert!(c.same_quasiuniformity);
        prop_assert!(c.same_topology);
    }

    #[test]
    fn fullness_is_monotone_under_embedding(seed in any::<u64>(), n in 1..=3usize) {
        let q = common::random_max_space(&mut common::rng(seed), n, 3);
        let emb = finmet::embed_full(&q).unwrap();
        let r = full_convex_report(&emb.space);
        prop_assert!(r.full);
        // The embedded copy keeps its distances.
        for x in 0..n {
            for y in 0..n {
                prop_assert_eq!(emb.space.dist(emb.inclusion[x], emb.inclusion[y]), q.dist(x, y));
            }
        }
    }

    #[test]
    fn convexify_stage_preserves_old_distances(seed in any::<u64>(), n in 1..=3usize) {
        let q = common::random_max_space(&mut common::rng(seed), n, 3);
        // The stage constructor asserts midpoint realization internally.
        let emb = finmet::convexify_stage(&q).unwrap();
        for x in 0..n {
            for y in 0..n {
                prop_assert_eq!(emb.space.dist(emb.inclusion[x], emb.inclusion[y]), q.dist(x, y));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn enumerated_mvs_classify_consistently(k in 2..=4usize) {
        for m in enumerate_mvs(k, true).unwrap() {
            prop_assert!(MvsTable::validate(m.labels().to_vec(), m.neutral(), m.rows()).is_ok());
            let c = MvsClass::of(&m);
            if c.strictly_atom_free { prop_assert!(c.atom_free); }
            if c.atom_free { prop_assert!(c.commutative); }
            // The order relation is a preorder compatible with +.
            for a in 0..k {
                prop_assert!(m.leq(m.neutral(), a));
                for b in 0..k {
                    prop_assert!(m.leq(a, m.add(a, b)));
                }
            }
        }
    }
}

#[test]
fn materialization_guard() {
    let big = FiniteTopology::discrete(MAX_MATERIALIZE + 1);
    assert!(big.opens().is_err());
    assert!(FiniteTopology::discrete(4).opens().is_ok());
}

#[test]
fn large_carrier_operations_stay_polynomial() {
    // 70 points: topology work must not materialize 2^70 opens.
    let n = 70;
    let mvs = Arc::new(MvsTable::max_mvs(3));
    let d: Vec<Vec<usize>> = (0..n)
        .map(|x| (0..n).map(|y| if x == y { 0 } else if x / 10 == y / 10 { 1 } else { 2 }).collect())
        .collect();
    let labels = (0..n).map(|i| i.to_string()).collect();
    let q = QmSpace::validate(labels, mvs, d).unwrap();
    let t = q.induced_topology();
    for x in 0..n {
        assert_eq!(t.min_open(x).len(), 10);
    }
    assert!(t.opens().is_err());
    let qb = base_from_qm(&q).unwrap();
    assert_eq!(qb.members.len(), 2);
}
