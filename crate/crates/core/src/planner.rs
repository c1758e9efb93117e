//! Minimum flip plans between two triangulations of one polygon.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::lattice::{segments_intersect, Segment};
use crate::mintri::plan_from_mt;
use crate::plan::{Flip, FlipPlan, QuadKey};
use crate::triangulation::Triangulation;

/// Merged plan together with its parts.
#[derive(Debug, Clone)]
pub struct PlanBetween {
    /// Reversed flips of `degenerating` followed (partially) by `generating`.
    pub plan: FlipPlan,
    /// Forward flips present for the source but not for the target.
    pub degenerating: FlipPlan,
    /// Forward flips present for the target but not for the source.
    pub generating: FlipPlan,
    /// Flips both triangulations share; these build the maximum common triangulation.
    pub shared: FlipPlan,
    /// Number of segment intersection tests spent linking the two halves.
    pub intersection_tests: usize,
}

fn same_frame(t1: &Triangulation, t2: &Triangulation) -> Result<()> {
    if t1.polygon() != t2.polygon() {
        return Err(Error::PolygonMismatch);
    }
    if t1.constraints() != t2.constraints() {
        return Err(Error::ConstraintMismatch);
    }
    Ok(())
}

/// Plan of a triangulation measured from the minimum triangulation under its constraints.
pub fn plan_from_min(t: &Triangulation) -> Result<FlipPlan> {
    plan_from_mt(t.polygon(), t.constraints(), t.edges())
}

/// Minimum flip plan transforming `t1` into `t2`.
pub fn plan_between(t1: &Triangulation, t2: &Triangulation) -> Result<PlanBetween> {
    same_frame(t1, t2)?;
    let p1 = plan_from_min(t1)?;
    let p2 = plan_from_min(t2)?;
    Ok(merge(&p1, &p2))
}

/// Builds the merged plan from the two plans measured from the minimum triangulation.
pub fn merge(p1: &FlipPlan, p2: &FlipPlan) -> PlanBetween {
    let k1 = p1.keys();
    let k2 = p2.keys();
    let shared_keys: BTreeSet<QuadKey> = k1.intersection(&k2).copied().collect();
    let shared = p1.induced(|i| shared_keys.contains(&p1.flip(i).key()));
    let degenerating = p1.induced(|i| !shared_keys.contains(&p1.flip(i).key()));
    let generating = p2.induced(|i| !shared_keys.contains(&p2.flip(i).key()));

    let n1 = degenerating.len();
    let mut nodes: Vec<Flip> = degenerating.nodes().iter().map(|f| f.reversed()).collect();
    nodes.extend(generating.nodes().iter().copied());
    let mut arcs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (c, p) in degenerating.arcs() {
        arcs.insert((p, c));
    }
    for (c, p) in generating.arcs() {
        arcs.insert((n1 + c, n1 + p));
    }

    // Every generating flip waits for each reversed flip whose longer
    // diagonal crosses the edge it creates. Linking only the leaves of each
    // per-target portion leaves some orderings unexecutable.
    let mut tests = 0usize;
    for g in 0..generating.len() {
        let h = generating.flip(g).created;
        for r in 0..n1 {
            tests += 1;
            if segments_intersect(&degenerating.flip(r).created, &h) {
                arcs.insert((r, n1 + g));
            }
        }
    }

    let mut tags: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n1];
    tags.extend((0..generating.len()).map(|i| generating.tags(i).clone()));
    let plan = FlipPlan::from_parts(nodes, arcs.into_iter().collect(), generating.targets().to_vec(), tags)
        .expect("merged plan is acyclic");
    PlanBetween { plan, degenerating, generating, shared, intersection_tests: tests }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// The first triangulation of the pair.
    First,
    /// The second triangulation of the pair.
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    /// Every flip unique to one side belongs to the plan of that side's edge set.
    Containment,
    /// Every edge created by such a flip crosses an edge of the other side's edge set.
    Crossing,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub side: Side,
    pub condition: Condition,
    pub flip: Flip,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimalityReport {
    pub optimal: bool,
    pub violations: Vec<Violation>,
}

fn require_edges(t: &Triangulation, set: &BTreeSet<Segment>) -> Result<()> {
    match set.iter().find(|s| !t.contains_edge(s)) {
        Some(s) => Err(Error::MissingEdge(*s)),
        None => Ok(()),
    }
}

/// Decides whether `(u, v)` minimizes the plan size among all pairs of
/// triangulations containing `e` and `e2` respectively.
pub fn check_optimal_pair(
    u: &Triangulation,
    v: &Triangulation,
    e: &BTreeSet<Segment>,
    e2: &BTreeSet<Segment>,
) -> Result<OptimalityReport> {
    same_frame(u, v)?;
    require_edges(u, e)?;
    require_edges(v, e2)?;
    let poly = u.polygon();
    let amb = u.constraints();
    let pu = plan_from_mt(poly, amb, u.edges())?;
    let pv = plan_from_mt(poly, amb, v.edges())?;
    let pe = plan_from_mt(poly, amb, e)?;
    let pe2 = plan_from_mt(poly, amb, e2)?;
    // Crossing is tested against the target edges themselves; intermediate
    // edges of the other plan can be crossed by a flip that is still removable.
    let ce: Vec<Segment> = e.iter().copied().collect();
    let ce2: Vec<Segment> = e2.iter().copied().collect();
    let mut violations = Vec::new();
    let mut scan = |own: &FlipPlan, other: &FlipPlan, own_set: &FlipPlan, other_created: &[Segment], side: Side| {
        for f in own.nodes() {
            if other.contains_key(&f.key()) {
                continue;
            }
            if !own_set.contains_key(&f.key()) {
                violations.push(Violation { side, condition: Condition::Containment, flip: *f });
            }
            if !other_created.iter().any(|g| segments_intersect(g, &f.created)) {
                violations.push(Violation { side, condition: Condition::Crossing, flip: *f });
            }
        }
    };
    scan(&pu, &pv, &pe, &ce2, Side::First);
    scan(&pv, &pu, &pe2, &ce, Side::Second);
    Ok(OptimalityReport { optimal: violations.is_empty(), violations })
}

fn step_towards(
    from: &Triangulation,
    to: &Triangulation,
    keep: &BTreeSet<Segment>,
) -> Result<Option<Triangulation>> {
    let pb = plan_between(from, to)?;
    for i in pb.plan.leaves() {
        let f = pb.plan.flip(i);
        if keep.contains(&f.removed) {
            continue;
        }
        if let Ok((t, done)) = from.apply_flip(&f.removed) {
            if done.created == f.created {
                return Ok(Some(t));
            }
        }
    }
    Ok(None)
}

/// Moves `u` and `v` towards each other with constraint-preserving plan
/// flips until the pair is optimal for `(e, e2)`.
pub fn optimize_pair(
    u: &Triangulation,
    v: &Triangulation,
    e: &BTreeSet<Segment>,
    e2: &BTreeSet<Segment>,
) -> Result<(Triangulation, Triangulation)> {
    let (mut u, mut v) = (u.clone(), v.clone());
    loop {
        if check_optimal_pair(&u, &v, e, e2)?.optimal {
            return Ok((u, v));
        }
        if let Some(t) = step_towards(&u, &v, e)? {
            u = t;
            continue;
        }
        if let Some(t) = step_towards(&v, &u, e2)? {
            v = t;
            continue;
        }
        return Err(Error::Internal("pair is not optimal but no constraint-preserving flip remains".into()));
    }
}
