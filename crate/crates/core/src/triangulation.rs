//! Lattice polygons and their full triangulations.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::lattice::{
    doubled_area, interior_lattice_points, locate, on_segment, orientation, segment_in_polygon, segments_intersect,
    LatticePoint, LatticeVector, Location, Segment, COORD_LIMIT,
};
use crate::plan::{Direction, Flip, FlipPlan};

type Point = LatticePoint;

/// Simple lattice polygon, normalized to an anticlockwise ring without
/// straight-angle vertices, starting at its smallest vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polygon {
    vertices: Vec<Point>,
    boundary: BTreeSet<Segment>,
    points: BTreeSet<Point>,
    interior: BTreeSet<Point>,
}

impl Polygon {
    pub fn new(vertices: Vec<Point>) -> Result<Polygon> {
        for p in &vertices {
            if p.a.abs() > COORD_LIMIT || p.b.abs() > COORD_LIMIT {
                return Err(Error::Overflow(format!("vertex {p} exceeds the coordinate limit")));
            }
        }
        let mut ring: Vec<Point> = Vec::with_capacity(vertices.len());
        for v in vertices {
            if ring.last() != Some(&v) {
                ring.push(v);
            }
        }
        while ring.len() > 1 && ring.first() == ring.last() {
            ring.pop();
        }
        // Drop straight-angle vertices; a collinear backtrack is a spike.
        loop {
            let n = ring.len();
            if n < 3 {
                return Err(Error::NotSimple("fewer than three distinct vertices".into()));
            }
            let mut removed = false;
            for i in 0..n {
                let prev = ring[(i + n - 1) % n];
                let next = ring[(i + 1) % n];
                if orientation(prev, ring[i], next) == 0 {
                    if !on_segment(&Segment::new(prev, next), ring[i]) {
                        return Err(Error::NotSimple(format!("spike at {}", ring[i])));
                    }
                    ring.remove(i);
                    removed = true;
                    break;
                }
            }
            if !removed {
                break;
            }
        }
        let n = ring.len();
        for i in 0..n {
            for j in i + 1..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if adjacent {
                    continue;
                }
                let s = Segment::new(ring[i], ring[(i + 1) % n]);
                let t = Segment::new(ring[j], ring[(j + 1) % n]);
                if closed_segments_meet(&s, &t) {
                    return Err(Error::NotSimple(format!("sides {s} and {t} meet")));
                }
            }
        }
        let area = doubled_area(&ring);
        if area == 0 {
            return Err(Error::NotSimple("zero area".into()));
        }
        if area < 0 {
            ring.reverse();
        }
        let start = (0..n).min_by_key(|&i| ring[i]).unwrap();
        ring.rotate_left(start);

        let mut boundary = BTreeSet::new();
        let mut points = BTreeSet::new();
        for i in 0..n {
            let p = ring[i];
            let q = ring[(i + 1) % n];
            let d = q - p;
            let g = gcd(d.a, d.b);
            let step = LatticeVector::new(d.a / g, d.b / g);
            let mut x = p;
            for _ in 0..g {
                boundary.insert(Segment::new(x, x + step));
                points.insert(x);
                x = x + step;
            }
        }
        let interior = interior_lattice_points(&ring);
        points.extend(interior.iter().copied());
        Ok(Polygon { vertices: ring, boundary, points, interior })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Boundary split into primitive segments.
    pub fn boundary_segments(&self) -> &BTreeSet<Segment> {
        &self.boundary
    }

    /// All lattice points of the closed polygon.
    pub fn lattice_points(&self) -> &BTreeSet<Point> {
        &self.points
    }

    pub fn interior_points(&self) -> &BTreeSet<Point> {
        &self.interior
    }

    pub fn boundary_point_count(&self) -> usize {
        self.points.len() - self.interior.len()
    }

    /// `3i + 2b - 3`.
    pub fn expected_edge_count(&self) -> usize {
        3 * self.interior.len() + 2 * self.boundary_point_count() - 3
    }

    /// `2i + b - 2`.
    pub fn expected_face_count(&self) -> usize {
        2 * self.interior.len() + self.boundary_point_count() - 2
    }

    pub fn contains_segment(&self, s: &Segment) -> bool {
        self.points.contains(&s.p) && self.points.contains(&s.q) && segment_in_polygon(&self.vertices, s)
    }

    pub fn locate(&self, x: Point) -> Location {
        locate(&self.vertices, x)
    }

    pub fn admits_equilateral(&self) -> bool {
        self.boundary.iter().all(|s| s.is_unit())
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    num_integer::gcd(a, b)
}

fn closed_segments_meet(s: &Segment, t: &Segment) -> bool {
    let o1 = orientation(s.p, s.q, t.p);
    let o2 = orientation(s.p, s.q, t.q);
    let o3 = orientation(t.p, t.q, s.p);
    let o4 = orientation(t.p, t.q, s.q);
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    on_segment(s, t.p) || on_segment(s, t.q) || on_segment(t, s.p) || on_segment(t, s.q)
}

/// Full triangulation of a polygon's lattice point set, optionally with
/// constraint edges that flips must preserve.
#[derive(Debug, Clone)]
pub struct Triangulation {
    polygon: Polygon,
    edges: BTreeSet<Segment>,
    constraints: BTreeSet<Segment>,
    adjacency: HashMap<Point, BTreeSet<Point>>,
}

impl PartialEq for Triangulation {
    fn eq(&self, other: &Self) -> bool {
        self.polygon == other.polygon && self.edges == other.edges
    }
}

impl Eq for Triangulation {}

impl std::hash::Hash for Triangulation {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.polygon.hash(state);
        self.edges.hash(state);
    }
}

impl Triangulation {
    /// Builds and validates a triangulation.
    pub fn new(polygon: Polygon, edges: BTreeSet<Segment>, constraints: BTreeSet<Segment>) -> Result<Triangulation> {
        let t = Triangulation::assemble(polygon, edges, constraints);
        validate_triangulation(&t)?;
        Ok(t)
    }

    pub(crate) fn assemble(polygon: Polygon, edges: BTreeSet<Segment>, constraints: BTreeSet<Segment>) -> Triangulation {
        let mut adjacency: HashMap<Point, BTreeSet<Point>> = HashMap::new();
        for s in &edges {
            adjacency.entry(s.p).or_default().insert(s.q);
            adjacency.entry(s.q).or_default().insert(s.p);
        }
        Triangulation { polygon, edges, constraints, adjacency }
    }

    pub fn polygon(&self) -> &Polygon {
        &self.polygon
    }

    pub fn edges(&self) -> &BTreeSet<Segment> {
        &self.edges
    }

    pub fn constraints(&self) -> &BTreeSet<Segment> {
        &self.constraints
    }

    pub fn contains_edge(&self, s: &Segment) -> bool {
        self.edges.contains(s)
    }

    /// Same edges with a different constraint set; each constraint must be an edge.
    pub fn with_constraints(&self, constraints: BTreeSet<Segment>) -> Result<Triangulation> {
        for c in &constraints {
            if !self.edges.contains(c) {
                return Err(Error::MissingEdge(*c));
            }
        }
        let mut t = self.clone();
        t.constraints = constraints;
        Ok(t)
    }

    /// Edges that are not on the polygon boundary.
    pub fn interior_edges(&self) -> impl Iterator<Item = &Segment> {
        self.edges.iter().filter(|s| !self.polygon.boundary.contains(s))
    }

    pub fn neighbors(&self, p: Point) -> impl Iterator<Item = &Point> {
        self.adjacency.get(&p).into_iter().flat_map(|s| s.iter())
    }

    /// Unimodular triangles, each as an ascending triple.
    pub fn faces(&self) -> BTreeSet<[Point; 3]> {
        let ring: Vec<Point> = self.polygon.vertices.iter().map(|p| LatticePoint::new(3 * p.a, 3 * p.b)).collect();
        let mut out = BTreeSet::new();
        for s in &self.edges {
            for r in self.neighbors(s.p) {
                if *r <= s.q || !self.adjacency[&s.q].contains(r) {
                    continue;
                }
                let c = (s.q - s.p).cross(&(*r - s.p));
                if c.abs() != 1 {
                    continue;
                }
                let centroid = LatticePoint::new(s.p.a + s.q.a + r.a, s.p.b + s.q.b + r.b);
                if locate(&ring, centroid) == Location::Inside {
                    out.insert([s.p, s.q, *r]);
                }
            }
        }
        out
    }

    /// Apex of the unimodular face on the `side` (+1 left, -1 right) of `p -> q`.
    fn apex(&self, p: Point, q: Point, side: i8) -> Option<Point> {
        let nq = self.adjacency.get(&q)?;
        self.neighbors(p).copied().find(|r| {
            nq.contains(r) && orientation(p, q, *r) == side && (q - p).cross(&(*r - p)).abs() == 1
        })
    }

    /// Flip that removing `s` would perform, without changing anything.
    pub fn flip_for(&self, s: &Segment) -> Result<Flip> {
        if !self.edges.contains(s) || self.polygon.boundary.contains(s) {
            return Err(Error::NotInteriorEdge(*s));
        }
        if self.constraints.contains(s) {
            return Err(Error::ConstrainedEdge(*s));
        }
        let (p, q) = (s.p, s.q);
        let r = self.apex(p, q, 1).ok_or(Error::NotInteriorEdge(*s))?;
        let t = self.apex(p, q, -1).ok_or(Error::NotInteriorEdge(*s))?;
        if orientation(r, t, p) * orientation(r, t, q) >= 0 {
            return Err(Error::NotConvexQuadrilateral(*s));
        }
        let created = Segment::new(r, t);
        let direction =
            if created.squared_length() > s.squared_length() { Direction::Forward } else { Direction::Reversed };
        Ok(Flip { quad: [p, t, q, r], removed: *s, created, direction })
    }

    /// Flips `s` in place.
    pub fn flip_in_place(&mut self, s: &Segment) -> Result<Flip> {
        let f = self.flip_for(s)?;
        self.edges.remove(s);
        self.adjacency.get_mut(&s.p).unwrap().remove(&s.q);
        self.adjacency.get_mut(&s.q).unwrap().remove(&s.p);
        let c = f.created;
        self.edges.insert(c);
        self.adjacency.entry(c.p).or_default().insert(c.q);
        self.adjacency.entry(c.q).or_default().insert(c.p);
        Ok(f)
    }

    /// Returns the triangulation after flipping `s`, and the flip performed.
    pub fn apply_flip(&self, s: &Segment) -> Result<(Triangulation, Flip)> {
        let mut t = self.clone();
        let f = t.flip_in_place(s)?;
        Ok((t, f))
    }

    /// Executes the plan in `order` (node indices) or in the plan's default order.
    pub fn apply_plan(&self, plan: &FlipPlan, order: Option<&[usize]>) -> Result<Triangulation> {
        let default;
        let order = match order {
            Some(o) => {
                let report = plan.validate_order_indices(o);
                if !report.valid {
                    return Err(Error::InvalidOrdering(report.reason.unwrap_or_default()));
                }
                o
            }
            None => {
                default = plan.topological_order();
                &default
            }
        };
        let mut t = self.clone();
        for &i in order {
            let f = plan.flip(i);
            let done = t.flip_in_place(&f.removed)?;
            if done.created != f.created {
                return Err(Error::FlipMismatch(format!("{f} produced {}", done.created)));
            }
        }
        Ok(t)
    }

    /// Sum of Euclidean edge lengths.
    pub fn total_length(&self) -> f64 {
        self.edges.iter().map(|s| s.euclidean_length::<f64>()).sum()
    }
}

/// All unit edges of a polygon whose boundary consists of unit segments.
pub fn equilateral_triangulation(polygon: &Polygon) -> Result<Triangulation> {
    if let Some(s) = polygon.boundary.iter().find(|s| !s.is_unit()) {
        return Err(Error::NotEquilateralAdmitting(*s));
    }
    let dirs = [LatticeVector::new(1, 0), LatticeVector::new(0, 1), LatticeVector::new(1, -1)];
    let mut edges = BTreeSet::new();
    for &p in &polygon.points {
        for d in dirs {
            let q = p + d;
            let s = Segment::new(p, q);
            if polygon.points.contains(&q) && segment_in_polygon(&polygon.vertices, &s) {
                edges.insert(s);
            }
        }
    }
    let t = Triangulation::assemble(polygon.clone(), edges, BTreeSet::new());
    validate_triangulation(&t).map_err(|e| Error::Internal(format!("equilateral triangulation: {e}")))?;
    Ok(t)
}

/// Full structural check: edges inside, primitive, non-crossing, boundary
/// and constraints present, maximal edge and face counts.
pub fn validate_triangulation(t: &Triangulation) -> Result<()> {
    let poly = &t.polygon;
    let bad = |m: String| Err(Error::InvalidTriangulation(m));
    for s in &t.edges {
        if !s.is_primitive() {
            return bad(format!("edge {s} is not primitive"));
        }
        if !poly.contains_segment(s) {
            return bad(format!("edge {s} is not inside the polygon"));
        }
    }
    for s in &poly.boundary {
        if !t.edges.contains(s) {
            return bad(format!("boundary segment {s} is missing"));
        }
    }
    for c in &t.constraints {
        if !t.edges.contains(c) {
            return bad(format!("constraint {c} is missing"));
        }
    }
    if t.edges.len() != poly.expected_edge_count() {
        return bad(format!("{} edges, expected {}", t.edges.len(), poly.expected_edge_count()));
    }
    let edges: Vec<&Segment> = t.edges.iter().collect();
    for i in 0..edges.len() {
        for j in i + 1..edges.len() {
            if segments_intersect(edges[i], edges[j]) {
                return bad(format!("edges {} and {} cross", edges[i], edges[j]));
            }
        }
    }
    let faces = t.faces().len();
    if faces != poly.expected_face_count() {
        return bad(format!("{faces} faces, expected {}", poly.expected_face_count()));
    }
    Ok(())
}
