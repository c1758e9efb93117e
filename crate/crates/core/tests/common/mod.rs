#![allow(dead_code)]

use std::collections::BTreeSet;

use farey_flip::lattice::{EdgeClass, EdgeInstance, LatticePoint, Sector, Segment};
use farey_flip::plan::bounding_parallelogram;
use farey_flip::triangulation::Polygon;

pub fn pt(a: i64, b: i64) -> LatticePoint {
    LatticePoint::new(a, b)
}

pub fn seg(a: i64, b: i64, c: i64, d: i64) -> Segment {
    Segment::new(pt(a, b), pt(c, d))
}

pub fn edge(x: i64, y: i64) -> EdgeInstance {
    edge_at(x, y, 0, 0, Sector::S0)
}

pub fn edge_at(x: i64, y: i64, a: i64, b: i64, s: Sector) -> EdgeInstance {
    EdgeInstance::new(pt(a, b), EdgeClass::new(x, y, s).unwrap())
}

pub fn set(items: &[Segment]) -> BTreeSet<Segment> {
    items.iter().copied().collect()
}

pub fn poly(vs: &[(i64, i64)]) -> Polygon {
    Polygon::new(vs.iter().map(|&(a, b)| pt(a, b)).collect()).unwrap()
}

/// Lattice parallelogram spanned by `w` copies of u and `h` copies of v.
pub fn rect(w: i64, h: i64) -> Polygon {
    poly(&[(0, 0), (w, 0), (w, h), (0, h)])
}

pub fn bounding_region(e: &EdgeInstance) -> Polygon {
    Polygon::new(bounding_parallelogram(e).to_vec()).unwrap()
}

/// The regions used for the constrained minimum triangulation checks; each
/// has at most 12 lattice points.
pub fn small_regions() -> Vec<(&'static str, Polygon)> {
    vec![
        ("hexagon", poly(&[(1, 0), (2, 0), (2, 1), (1, 2), (0, 2), (0, 1)])),
        ("triangle-3", poly(&[(0, 0), (3, 0), (0, 3)])),
        ("rhombus-2x2", rect(2, 2)),
        ("strip-4x1", rect(4, 1)),
        ("parallelogram-3x2", rect(3, 2)),
        ("parallelogram-2x3", rect(2, 3)),
        ("l-shape", poly(&[(0, 0), (3, 0), (3, 1), (1, 1), (1, 2), (0, 2)])),
        ("trapezoid", poly(&[(0, 0), (3, 0), (1, 2), (0, 2)])),
    ]
}
