use farey_flip::farey::{farey_flip_inverse, farey_flip_map, farey_parallelogram, farey_plan, farey_sequence, Fraction};
use farey_flip::lattice::{canonical_edge_class, EdgeClass, EdgeInstance, LatticePoint, LatticeVector, Sector};
use num_integer::Integer;
use proptest::prelude::*;

/// All reduced fractions in [0, 1] with denominator at most n, sorted by cross-multiplication.
fn brute_sequence(n: i64) -> Vec<(i64, i64)> {
    let mut v: Vec<(i64, i64)> = (1..=n).flat_map(|q| (0..=q).map(move |p| (p, q))).filter(|&(p, q)| p.gcd(&q) == 1).collect();
    v.sort_by(|a, b| (a.0 * b.1).cmp(&(b.0 * a.1)));
    v
}

/// Farey ancestry by brute force: the parent of p/q is its neighbour in F_q
/// with the larger denominator, until 1/1.
fn brute_plan(x: i64, y: i64) -> Vec<(i64, i64)> {
    let (p, q) = (x.min(y), x.max(y));
    if p == 0 {
        return Vec::new();
    }
    let mut chain = vec![(p, q)];
    let mut cur = (p, q);
    while cur != (1, 1) {
        let f = brute_sequence(cur.1);
        let i = f.iter().position(|&g| g == cur).unwrap();
        let (l, r) = (f[i - 1], f[i + 1]);
        cur = if l.1 > r.1 { l } else if r.1 > l.1 { r } else { (1, 1) };
        chain.push(cur);
    }
    chain.reverse();
    chain
}

#[test]
fn sequence_matches_brute_force_up_to_fifty() {
    for n in 1..=50 {
        let got: Vec<(i64, i64)> = farey_sequence(n).iter().map(|f| (f.num, f.den)).collect();
        assert_eq!(got, brute_sequence(n), "order {n}");
    }
}

#[test]
fn neighbours_are_unimodular_and_middles_are_mediants() {
    for n in 1..=50i64 {
        let f = farey_sequence(n);
        for w in f.windows(2) {
            assert_eq!(w[1].num * w[0].den - w[0].num * w[1].den, 1, "F{n}: {} {}", w[0], w[1]);
        }
        for w in f.windows(3) {
            let (a, m, c) = (w[0], w[1], w[2]);
            assert_eq!(m.num * (a.den + c.den), m.den * (a.num + c.num), "F{n}: {a} {m} {c}");
        }
    }
}

#[test]
fn worked_plans() {
    let show = |x, y| farey_plan(&EdgeClass::new(x, y, Sector::S0).unwrap()).unwrap().to_string();
    assert_eq!(show(3, 2), "{1/1, 1/2, 2/3}");
    assert_eq!(show(0, 1), "{}");
    assert_eq!(show(1, 0), "{}");
    assert_eq!(farey_plan(&EdgeClass::new(3i64, 5, Sector::S0).unwrap()).unwrap().len(), 4);
    assert_eq!(farey_plan(&EdgeClass::new(1i64, 6, Sector::S0).unwrap()).unwrap().len(), 6);
}

#[test]
fn three_two_parallelogram() {
    let e = EdgeInstance::new(LatticePoint::origin(), EdgeClass::new(3i64, 2, Sector::S0).unwrap());
    let p = farey_parallelogram(&e).unwrap();
    assert_eq!((p.boundary_long.class.x, p.boundary_long.class.y), (2, 1));
    assert_eq!((p.boundary_short.class.x, p.boundary_short.class.y), (1, 1));
    assert_eq!(p.vertices, [LatticePoint::new(0, 0), LatticePoint::new(2, 1), LatticePoint::new(3, 2), LatticePoint::new(1, 1)]);
}

#[test]
fn mediant_overflow_is_an_error() {
    let a = Fraction::new(i64::MAX - 1, i64::MAX);
    let b = Fraction::new(1i64, 1);
    assert!(a.mediant(&b).is_err());
}

#[test]
fn small_coefficients_work() {
    let e = EdgeClass::new(3i8, 2, Sector::S0).unwrap();
    assert_eq!(farey_plan(&e).unwrap().to_string(), "{1/1, 1/2, 2/3}");
}

fn coprime() -> impl Strategy<Value = (i64, i64)> {
    (0i64..=50, 0i64..=50).prop_filter("primitive", |&(x, y)| x.gcd(&y) == 1)
}

fn sector() -> impl Strategy<Value = Sector> {
    prop_oneof![Just(Sector::S0), Just(Sector::S1), Just(Sector::S2)]
}

proptest! {
    #[test]
    fn plan_matches_ancestry((x, y) in coprime()) {
        let plan = farey_plan(&EdgeClass::new(x, y, Sector::S0).unwrap()).unwrap();
        let got: Vec<(i64, i64)> = plan.fractions.iter().map(|f| (f.num, f.den)).collect();
        prop_assert_eq!(got, brute_plan(x, y));
    }

    #[test]
    fn flip_map_round_trips((x, y) in coprime(), s in sector()) {
        prop_assume!(x > 0 && y > 0);
        let e = EdgeClass::new(x, y, s).unwrap();
        prop_assert_eq!(farey_flip_inverse(&farey_flip_map(&e), &e), e);
    }

    #[test]
    fn parallelogram_sides_sum_to_the_edge((x, y) in coprime(), s in sector(), a in -5i64..5, b in -5i64..5) {
        prop_assume!(x + y > 1);
        let e = EdgeInstance::new(LatticePoint::new(a, b), EdgeClass::new(x, y, s).unwrap());
        let p = farey_parallelogram(&e).unwrap();
        prop_assert_eq!(p.boundary_long.vector() + p.boundary_short.vector(), e.vector());
        prop_assert_eq!(p.boundary_long.vector().cross(&p.boundary_short.vector()).abs(), 1);
        prop_assert!(p.boundary_long.vector().squared_length() >= p.boundary_short.vector().squared_length());
    }

    #[test]
    fn canonical_class_round_trips(a in -60i64..60, b in -60i64..60) {
        prop_assume!((a, b) != (0, 0) && a.gcd(&b) == 1);
        let v = LatticeVector::new(a, b);
        let c = canonical_edge_class(v).unwrap();
        prop_assert!(c.vector() == v || c.vector() == -v);
        prop_assert_eq!(canonical_edge_class(c.vector()).unwrap(), c);
        prop_assert_eq!(canonical_edge_class(-v).unwrap(), c);
    }
}
