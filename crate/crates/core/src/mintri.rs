//! Minimum triangulations and the flip plans measured from them.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::lattice::{segment_in_polygon, segments_intersect, EdgeInstance, LatticePoint, Segment};
use crate::plan::{bounding_parallelogram, multi_flip_plan, FlipPlan};
use crate::triangulation::{equilateral_triangulation, Polygon, Triangulation};

/// An equilateral-admitting polygon containing a target polygon, with its
/// equilateral triangulation.
#[derive(Debug, Clone)]
pub struct Met {
    pub phi: Polygon,
    pub triangulation: Triangulation,
}

/// Smallest polygon with sides along the unit directions that contains
/// `poly` and the bounding parallelograms of its boundary segments and of
/// `extras`. When `poly` itself qualifies it is returned unchanged.
pub fn met(poly: &Polygon, extras: &[Segment]) -> Result<Met> {
    let mut required: Vec<[LatticePoint; 4]> = Vec::new();
    for s in poly.boundary_segments().iter().chain(extras) {
        if s.is_unit() {
            continue;
        }
        required.push(bounding_parallelogram(&EdgeInstance::from_segment(s)?));
    }
    let fits = |q: &[LatticePoint; 4]| {
        (0..4).all(|i| segment_in_polygon(poly.vertices(), &Segment::new(q[i], q[(i + 1) % 4])))
    };
    let phi = if poly.admits_equilateral() && required.iter().all(fits) {
        poly.clone()
    } else {
        let pts: Vec<LatticePoint> =
            poly.vertices().iter().copied().chain(required.iter().flat_map(|q| q.iter().copied())).collect();
        hexagon_around(&pts)?
    };
    let triangulation = equilateral_triangulation(&phi)?;
    Ok(Met { phi, triangulation })
}

/// Intersection of the tightest strips along `a`, `b` and `a + b`.
fn hexagon_around(pts: &[LatticePoint]) -> Result<Polygon> {
    let amin = pts.iter().map(|p| p.a).min().unwrap();
    let amax = pts.iter().map(|p| p.a).max().unwrap();
    let bmin = pts.iter().map(|p| p.b).min().unwrap();
    let bmax = pts.iter().map(|p| p.b).max().unwrap();
    let cmin = pts.iter().map(|p| p.a + p.b).min().unwrap();
    let cmax = pts.iter().map(|p| p.a + p.b).max().unwrap();
    let inside = |p: &LatticePoint| {
        (amin..=amax).contains(&p.a) && (bmin..=bmax).contains(&p.b) && (cmin..=cmax).contains(&(p.a + p.b))
    };
    let mut cand = BTreeSet::new();
    for a in [amin, amax] {
        for b in [bmin, bmax] {
            cand.insert(LatticePoint::new(a, b));
        }
        for c in [cmin, cmax] {
            cand.insert(LatticePoint::new(a, c - a));
        }
    }
    for b in [bmin, bmax] {
        for c in [cmin, cmax] {
            cand.insert(LatticePoint::new(c - b, b));
        }
    }
    let corners: Vec<LatticePoint> = cand.into_iter().filter(inside).collect();
    Polygon::new(convex_hull(corners))
}

/// Anticlockwise convex hull by monotone chain.
fn convex_hull(mut pts: Vec<LatticePoint>) -> Vec<LatticePoint> {
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let turn = |o: LatticePoint, a: LatticePoint, b: LatticePoint| (a - o).cross(&(b - o));
    let mut hull: Vec<LatticePoint> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &LatticePoint>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

fn check_edges(poly: &Polygon, edges: &BTreeSet<Segment>) -> Result<()> {
    for s in edges {
        if !s.is_primitive() {
            let v = s.vector();
            return Err(Error::NotPrimitive((v.a, v.b)));
        }
        if !poly.contains_segment(s) {
            return Err(Error::ConstraintOutsidePolygon(*s));
        }
    }
    let list: Vec<&Segment> = edges.iter().collect();
    for i in 0..list.len() {
        for j in i + 1..list.len() {
            if segments_intersect(list[i], list[j]) {
                return Err(Error::IntersectingConstraints(*list[i], *list[j]));
            }
        }
    }
    Ok(())
}

/// The unique triangulation of `poly` containing `constraints` that
/// minimizes total edge length.
pub fn min_triangulation(poly: &Polygon, constraints: &BTreeSet<Segment>) -> Result<Triangulation> {
    check_edges(poly, constraints)?;
    let extras: Vec<Segment> = constraints.iter().copied().collect();
    let m = met(poly, &extras)?;
    let targets: Vec<Segment> = poly.boundary_segments().iter().chain(constraints).copied().collect();
    let plan = multi_flip_plan(&targets)?;
    let full = m.triangulation.apply_plan(&plan, None)?;
    let edges: BTreeSet<Segment> = full.edges().iter().filter(|s| poly.contains_segment(s)).copied().collect();
    Triangulation::new(poly.clone(), edges, constraints.clone())
        .map_err(|e| Error::Internal(format!("trimmed minimum triangulation: {e}")))
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

/// Minimum triangulation containing every edge the two triangulations share.
pub fn mct(t1: &Triangulation, t2: &Triangulation) -> Result<Triangulation> {
    same_frame(t1, t2)?;
    let boundary = t1.polygon().boundary_segments();
    let common: BTreeSet<Segment> =
        t1.edges().intersection(t2.edges()).filter(|s| !boundary.contains(s)).copied().collect();
    let t = min_triangulation(t1.polygon(), &common)?;
    t.with_constraints(t1.constraints().clone())
}

/// Flips that take `MT(poly, constraints)` to a triangulation containing `goals`.
///
/// Equals the multi-edge plan for boundary, constraints and goals with the
/// flips of the plan for boundary and constraints removed. Tags of the
/// returned plan index into the sorted, deduplicated goal list.
pub fn plan_from_mt(poly: &Polygon, constraints: &BTreeSet<Segment>, goals: &BTreeSet<Segment>) -> Result<FlipPlan> {
    check_edges(poly, constraints)?;
    let mut all: Vec<Segment> = poly.boundary_segments().iter().chain(constraints).copied().collect();
    let base = multi_flip_plan(&all)?;
    all.extend(goals.iter().copied());
    let full = multi_flip_plan(&all)?;
    for s in goals {
        if !poly.contains_segment(s) {
            return Err(Error::ConstraintOutsidePolygon(*s));
        }
    }
    let keep = full.induced(|i| !base.contains_key(&full.flip(i).key()));
    let goal_list: Vec<Segment> = goals.iter().copied().collect();
    let targets = full.targets().to_vec();
    Ok(keep.retarget(goal_list.clone(), |t| goal_list.binary_search(&targets[t]).ok()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(a: i64, b: i64) -> LatticePoint {
        LatticePoint::new(a, b)
    }

    #[test]
    fn equilateral_polygon_is_its_own_met() {
        let poly = Polygon::new(vec![pt(0, 0), pt(2, 0), pt(2, 2), pt(0, 2)]).unwrap();
        assert_eq!(met(&poly, &[]).unwrap().phi, poly);
    }

    #[test]
    fn hexagon_contains_parallelograms() {
        let poly = Polygon::new(vec![pt(0, 0), pt(3, 2), pt(0, 1)]).unwrap();
        let m = met(&poly, &[]).unwrap();
        assert!(m.phi.admits_equilateral());
        for v in [pt(0, 0), pt(3, 0), pt(3, 2), pt(0, 2)] {
            assert_ne!(m.phi.locate(v), crate::lattice::Location::Outside);
        }
    }

    #[test]
    fn min_triangulation_of_square_is_equilateral() {
        let poly = Polygon::new(vec![pt(0, 0), pt(2, 0), pt(2, 2), pt(0, 2)]).unwrap();
        let t = min_triangulation(&poly, &BTreeSet::new()).unwrap();
        assert_eq!(t, equilateral_triangulation(&poly).unwrap());
    }

    #[test]
    fn constraint_is_kept() {
        let poly = Polygon::new(vec![pt(0, 0), pt(3, 0), pt(3, 2), pt(0, 2)]).unwrap();
        let c: BTreeSet<Segment> = [Segment::new(pt(0, 0), pt(3, 2))].into_iter().collect();
        let t = min_triangulation(&poly, &c).unwrap();
        assert!(t.contains_edge(&Segment::new(pt(0, 0), pt(3, 2))));
    }
}
