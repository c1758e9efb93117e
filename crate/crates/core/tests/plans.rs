mod common;

use std::collections::BTreeSet;

use common::{bounding_region, edge, edge_at, pt, seg};
use farey_flip::farey::farey_parallelogram;
use farey_flip::lattice::{canonical_edge_class, EdgeInstance, Sector};
use farey_flip::oracle::{bfs_distance, Guard, Target};
use farey_flip::plan::{
    classify_flip, flip_plan, geometrically_separated, multi_flip_plan, plan_height, sequential_compose, Extensions,
    FlipKind, FlipPlan,
};
use farey_flip::triangulation::equilateral_triangulation;
use farey_flip::Error;
use num_integer::Integer;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Counts valid orderings by trying every permutation.
fn brute_extensions(p: &FlipPlan) -> usize {
    fn go(p: &FlipPlan, done: &mut Vec<bool>, placed: usize) -> usize {
        if placed == p.len() {
            return 1;
        }
        let mut total = 0;
        for i in 0..p.len() {
            if !done[i] && p.children(i).iter().all(|&c| done[c]) {
                done[i] = true;
                total += go(p, done, placed + 1);
                done[i] = false;
            }
        }
        total
    }
    go(p, &mut vec![false; p.len()], 0)
}

fn class_of(s: &farey_flip::lattice::Segment) -> (i64, i64) {
    let c = canonical_edge_class(s.vector()).unwrap();
    (c.x.min(c.y), c.x.max(c.y))
}

#[test]
fn unit_edges_need_no_flips() {
    assert!(flip_plan(&edge(1, 0)).unwrap().is_empty());
    assert!(flip_plan(&edge(0, 1)).unwrap().is_empty());
}

#[test]
fn three_two_structure() {
    let p = flip_plan(&edge(3, 2)).unwrap();
    assert_eq!(p.len(), 7);
    assert_eq!(p.arcs().len(), 6);
    assert_eq!(plan_height(&p), 3);
    let roots = p.roots();
    assert_eq!(roots.len(), 1);
    let root = p.flip(roots[0]);
    assert_eq!(root.created, seg(0, 0, 3, 2));
    assert_eq!(root.removed, seg(1, 1, 2, 1));
    let mut kids: Vec<_> = p.children(roots[0]).iter().map(|&c| p.flip(c).created).collect();
    kids.sort();
    assert_eq!(kids, vec![seg(0, 0, 2, 1), seg(1, 1, 3, 2)]);
    let mut leaves: Vec<_> = p.leaves().iter().map(|&i| p.flip(i).created).collect();
    leaves.sort();
    assert_eq!(leaves, vec![seg(0, 0, 1, 1), seg(1, 0, 2, 1), seg(1, 1, 2, 2), seg(2, 1, 3, 2)]);
}

#[test]
fn linear_extensions_match_permutation_count() {
    for (x, y) in [(2, 1), (3, 2), (1, 4), (2, 3), (4, 3), (5, 2)] {
        let p = flip_plan(&edge(x, y)).unwrap();
        let brute = brute_extensions(&p) as u128;
        assert_eq!(p.count_linear_extensions(u128::MAX), Extensions::Exact(brute), "({x},{y})");
    }
    assert_eq!(brute_extensions(&flip_plan(&edge(3, 2)).unwrap()), 80);
    assert_eq!(flip_plan(&edge(3, 2)).unwrap().count_linear_extensions(10), Extensions::AtLeast(10));
}

// Frozen from the flip-graph search on each bounding parallelogram.
#[test]
fn sizes_agree_with_search() {
    let guard = Guard::default();
    for (x, y, expect) in [(2, 1, 3), (3, 2, 7), (1, 4, 10), (2, 3, 7), (4, 1, 10), (1, 3, 6), (1, 5, 15)] {
        let e = edge(x, y);
        let p = flip_plan(&e).unwrap();
        assert_eq!(p.len(), expect, "({x},{y})");
        let t = equilateral_triangulation(&bounding_region(&e)).unwrap();
        let d = bfs_distance(&t, &Target::Contains([e.segment()].into()), &guard).unwrap();
        assert_eq!(d, expect, "({x},{y})");
    }
}

// The two (1,2) copies inside P_(3,5) overlap in the (1,1) leaf at (1,2), so
// the merged plan has one node fewer than the full binary tree of height 4.
#[test]
fn three_five_shares_a_leaf() {
    let p = flip_plan(&edge(3, 5)).unwrap();
    assert_eq!(plan_height(&p), 4);
    assert_eq!(p.len(), 14);
    let shared: Vec<_> = (0..p.len()).filter(|&i| p.parents(i).len() > 1).map(|i| p.flip(i).created).collect();
    assert_eq!(shared, vec![seg(1, 2, 2, 3)]);
    let t = equilateral_triangulation(&bounding_region(&edge(3, 5))).unwrap();
    assert!(t.apply_plan(&p, None).unwrap().contains_edge(&seg(0, 0, 3, 5)));
}

#[test]
fn one_n_family() {
    for n in 3..=10i64 {
        let p = flip_plan(&edge(1, n)).unwrap();
        assert_eq!(plan_height(&p), n as usize);
        assert_eq!(p.len() as i64, n * (n + 1) / 2);
        let bad = p.nodes().iter().filter(|f| classify_flip(f) == FlipKind::Bad).count() as i64;
        assert_eq!(bad, (n - 1) * (n - 2) / 2);
        let h = p.heights();
        for i in 0..p.len() {
            let k = h[i] as i64;
            let f = p.flip(i);
            assert_eq!(class_of(&f.created), (1, k));
            if k >= 2 {
                let par = farey_parallelogram(&EdgeInstance::from_segment(&f.created).unwrap()).unwrap();
                let long = par.boundary_long.class;
                assert_eq!((long.x.min(long.y), long.x.max(long.y)), (1, k - 1));
            }
            if k >= 3 {
                assert_eq!(class_of(&f.removed), (1, k - 2));
            }
        }
    }
}

#[test]
fn one_six_shares_children() {
    let p = flip_plan(&edge(1, 6)).unwrap();
    assert_eq!(p.len(), 21);
    assert!((0..p.len()).any(|i| p.parents(i).len() > 1));
}

#[test]
fn shared_flips_count_once() {
    let a = flip_plan(&edge(3, 2)).unwrap();
    let b = flip_plan(&edge_at(2, 1, 1, 1, Sector::S0)).unwrap();
    let m = multi_flip_plan(&[seg(0, 0, 3, 2), seg(1, 1, 3, 2)]).unwrap();
    let keys: BTreeSet<_> = a.keys().union(&b.keys()).copied().collect();
    assert_eq!(m.keys(), keys);
    assert_eq!(m.len(), 7);
}

#[test]
fn crossing_targets_are_rejected() {
    let r = multi_flip_plan(&[seg(0, 0, 2, 1), seg(1, 0, 0, 2)]);
    assert!(matches!(r, Err(Error::IntersectingTargets(_, _))));
}

#[test]
fn separation_and_composition() {
    let e = edge(2, 1);
    assert!(geometrically_separated(&e, &edge_at(2, 1, 0, 1, Sector::S0)));
    assert!(!geometrically_separated(&e, &edge_at(2, 1, 1, 0, Sector::S0)));
    assert!(geometrically_separated(&e, &edge_at(3, 2, 5, 5, Sector::S0)));
    let far = edge_at(3, 2, 5, 5, Sector::S0);
    let c = sequential_compose(&[flip_plan(&e).unwrap(), flip_plan(&far).unwrap()]);
    let m = multi_flip_plan(&[e.segment(), far.segment()]).unwrap();
    assert_eq!(c.len(), 10);
    assert_eq!(c.keys(), m.keys());
}

#[test]
fn invalid_orderings_are_reported() {
    let p = flip_plan(&edge(3, 2)).unwrap();
    let mut order = p.topological_order();
    assert!(p.validate_order_indices(&order).valid);
    order.reverse();
    let r = p.validate_order_indices(&order);
    assert!(!r.valid);
    assert_eq!(r.position, Some(0));
    let flips: Vec<_> = p.topological_order()[..6].iter().map(|&i| *p.flip(i)).collect();
    assert!(!p.validate_linear_ordering(&flips).valid);
}

#[test]
fn plan_is_stable_under_translation() {
    let a = flip_plan(&edge(4, 3)).unwrap();
    let b = flip_plan(&edge_at(4, 3, -2, 7, Sector::S0)).unwrap();
    assert_eq!(a.len(), b.len());
    let shift = pt(-2, 7) - pt(0, 0);
    let moved: BTreeSet<_> = a.nodes().iter().map(|f| f.created.translate(shift)).collect();
    let there: BTreeSet<_> = b.nodes().iter().map(|f| f.created).collect();
    assert_eq!(moved, there);
}

fn small_edge() -> impl Strategy<Value = EdgeInstance> {
    (1i64..=7, 1i64..=7, 0u8..3)
        .prop_filter("primitive", |&(x, y, _)| x.gcd(&y) == 1 && x + y <= 8)
        .prop_map(|(x, y, s)| edge_at(x, y, 0, 0, Sector::from_index(s).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_orderings_generate_the_edge(e in small_edge(), seed in any::<u64>()) {
        let p = flip_plan(&e).unwrap();
        let t = equilateral_triangulation(&bounding_region(&e)).unwrap();
        let order = p.random_linear_extension(&mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(p.validate_order_indices(&order).valid);
        let out = t.apply_plan(&p, Some(&order)).unwrap();
        prop_assert!(out.contains_edge(&e.segment()));
    }

    #[test]
    fn every_quad_is_its_own_farey_parallelogram(e in small_edge()) {
        let p = flip_plan(&e).unwrap();
        for f in p.nodes() {
            let par = farey_parallelogram(&EdgeInstance::from_segment(&f.created).unwrap()).unwrap();
            let mut a = par.vertices;
            a.sort();
            prop_assert_eq!(a, f.key());
        }
    }
}
