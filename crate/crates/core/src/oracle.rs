//! Brute-force references: exhaustive enumeration and flip-graph search.
//!
//! Nothing here uses Farey plans; the search works on a compact bitset
//! encoding of triangulations over the candidate edges of a polygon.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::lattice::{interior_lattice_points, orientation, segments_intersect, EdgeInstance, LatticePoint, Segment};
use crate::plan::{Direction, Flip};
use crate::triangulation::{Polygon, Triangulation};

type Point = LatticePoint;

/// Size limits for exhaustive searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guard {
    /// Lattice points of the searched region.
    pub max_points: usize,
    /// Squared length of the edge in the unique-quadrilateral search.
    pub max_quad_sq_len: i64,
    /// States a single search may visit.
    pub max_states: usize,
}

impl Default for Guard {
    fn default() -> Self {
        Guard { max_points: 14, max_quad_sq_len: 200, max_states: 2_000_000 }
    }
}

impl Guard {
    /// Default guard, with `FAREY_FLIP_GUARD=points[,sqlen[,states]]` overrides.
    pub fn from_env() -> Guard {
        let mut g = Guard::default();
        if let Ok(v) = std::env::var("FAREY_FLIP_GUARD") {
            let parts: Vec<&str> = v.split(',').map(str::trim).collect();
            if let Some(x) = parts.first().and_then(|s| s.parse().ok()) {
                g.max_points = x;
            }
            if let Some(x) = parts.get(1).and_then(|s| s.parse().ok()) {
                g.max_quad_sq_len = x;
            }
            if let Some(x) = parts.get(2).and_then(|s| s.parse().ok()) {
                g.max_states = x;
            }
        }
        g
    }

    pub fn with_points(mut self, n: usize) -> Guard {
        self.max_points = n;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Bits {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }
    fn meets(&self, o: &Bits) -> bool {
        self.0.iter().zip(&o.0).any(|(a, b)| a & b != 0)
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn contains_all(&self, o: &Bits) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & b == *b)
    }
    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &x)| (0..64).filter(move |b| x >> b & 1 == 1).map(move |b| w * 64 + b))
    }
}

/// Candidate edges of a polygon and the precomputed relations between them.
struct Frame {
    polygon: Polygon,
    edges: Vec<Segment>,
    index: HashMap<Segment, usize>,
    crosses: Vec<Bits>,
    /// Per edge and side (left, right): unimodular apex candidates `(pr, qr, r)`.
    apexes: Vec<[Vec<(usize, usize, Point)>; 2]>,
    frozen: Bits,
    expected: usize,
}

impl Frame {
    fn new(polygon: &Polygon, constraints: &BTreeSet<Segment>, guard: &Guard) -> Result<Frame> {
        let pts: Vec<Point> = polygon.lattice_points().iter().copied().collect();
        if pts.len() > guard.max_points {
            return Err(Error::TooLarge { what: "lattice points", actual: pts.len(), limit: guard.max_points });
        }
        let mut edges = Vec::new();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let s = Segment::new(pts[i], pts[j]);
                if s.is_primitive() && polygon.contains_segment(&s) {
                    edges.push(s);
                }
            }
        }
        let n = edges.len();
        let index: HashMap<Segment, usize> = edges.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let mut crosses = vec![Bits::new(n); n];
        for i in 0..n {
            for j in i + 1..n {
                if segments_intersect(&edges[i], &edges[j]) {
                    crosses[i].set(j);
                    crosses[j].set(i);
                }
            }
        }
        let mut apexes = Vec::with_capacity(n);
        for s in &edges {
            let mut sides: [Vec<(usize, usize, Point)>; 2] = [Vec::new(), Vec::new()];
            for &r in &pts {
                let c = (s.q - s.p).cross(&(r - s.p));
                if c.abs() != 1 {
                    continue;
                }
                if let (Some(&a), Some(&b)) = (index.get(&Segment::new(s.p, r)), index.get(&Segment::new(s.q, r))) {
                    sides[if c > 0 { 0 } else { 1 }].push((a, b, r));
                }
            }
            apexes.push(sides);
        }
        let mut frozen = Bits::new(n);
        for s in polygon.boundary_segments().iter().chain(constraints) {
            match index.get(s) {
                Some(&i) => frozen.set(i),
                None => return Err(Error::ConstraintOutsidePolygon(*s)),
            }
        }
        Ok(Frame { polygon: polygon.clone(), edges, index, crosses, apexes, frozen, expected: polygon.expected_edge_count() })
    }

    fn encode(&self, t: &Triangulation) -> Result<Bits> {
        let mut b = Bits::new(self.edges.len());
        for s in t.edges() {
            let i = *self.index.get(s).ok_or(Error::InvalidTriangulation(format!("edge {s} is not a candidate")))?;
            b.set(i);
        }
        Ok(b)
    }

    fn encode_set(&self, set: &BTreeSet<Segment>) -> Result<Bits> {
        let mut b = Bits::new(self.edges.len());
        for s in set {
            b.set(*self.index.get(s).ok_or(Error::ConstraintOutsidePolygon(*s))?);
        }
        Ok(b)
    }

    fn decode(&self, b: &Bits, constraints: &BTreeSet<Segment>) -> Triangulation {
        let edges = b.ones().map(|i| self.edges[i]).collect();
        Triangulation::new(self.polygon.clone(), edges, constraints.clone()).expect("oracle state is a triangulation")
    }

    /// All flips available in state `b`, as `(removed, created, apexes)`.
    fn moves(&self, b: &Bits) -> Vec<(usize, usize, Point, Point)> {
        let mut out = Vec::new();
        for e in b.ones() {
            if self.frozen.get(e) {
                continue;
            }
            let find = |side: usize| self.apexes[e][side].iter().find(|(x, y, _)| b.get(*x) && b.get(*y)).map(|t| t.2);
            let (Some(r), Some(t)) = (find(0), find(1)) else { continue };
            let s = self.edges[e];
            if orientation(r, t, s.p) * orientation(r, t, s.q) >= 0 {
                continue;
            }
            if let Some(&c) = self.index.get(&Segment::new(r, t)) {
                out.push((e, c, r, t));
            }
        }
        out
    }

    fn flip_record(&self, removed: usize, created: usize, r: Point, t: Point) -> Flip {
        let s = self.edges[removed];
        let c = self.edges[created];
        let direction = if c.squared_length() > s.squared_length() { Direction::Forward } else { Direction::Reversed };
        Flip { quad: [s.p, t, s.q, r], removed: s, created: c, direction }
    }

    fn apply(&self, b: &Bits, removed: usize, created: usize) -> Bits {
        let mut n = b.clone();
        n.clear(removed);
        n.set(created);
        n
    }

    /// Backtracking over candidate edges in index order.
    fn enumerate(&self, required: &Bits, limit: usize) -> Result<Vec<Bits>> {
        let n = self.edges.len();
        for i in required.ones() {
            if self.crosses[i].meets(required) {
                return Err(Error::IntersectingConstraints(self.edges[i], self.edges[self.crosses[i].ones().find(|&j| required.get(j)).unwrap()]));
            }
        }
        let mut out = Vec::new();
        let mut stack = vec![(0usize, required.clone())];
        while let Some((i, inc)) = stack.pop() {
            let have = inc.count();
            if have == self.expected {
                out.push(inc);
                if out.len() > limit {
                    return Err(Error::TooLarge { what: "triangulations", actual: out.len(), limit });
                }
                continue;
            }
            if i == n {
                continue;
            }
            let open = (i..n).filter(|&j| !inc.get(j) && !self.crosses[j].meets(&inc)).count();
            if have + open < self.expected {
                continue;
            }
            if inc.get(i) || self.crosses[i].meets(&inc) {
                stack.push((i + 1, inc));
                continue;
            }
            stack.push((i + 1, inc.clone()));
            let mut with = inc;
            with.set(i);
            stack.push((i + 1, with));
        }
        Ok(out)
    }
}

/// Every triangulation of `poly` containing `constraints`, in a fixed order.
pub fn enumerate_triangulations(
    poly: &Polygon,
    constraints: &BTreeSet<Segment>,
    guard: &Guard,
) -> Result<Vec<Triangulation>> {
    let frame = Frame::new(poly, constraints, guard)?;
    let mut states = frame.enumerate(&frame.frozen, guard.max_states)?;
    states.sort();
    Ok(states.iter().map(|b| frame.decode(b, constraints)).collect())
}

/// What a flip-graph search is looking for.
#[derive(Debug, Clone)]
pub enum Target {
    /// Any triangulation containing all these edges.
    Contains(BTreeSet<Segment>),
    /// This exact triangulation.
    Equals(Triangulation),
}

/// Outcome of [`flip_graph_bfs`].
#[derive(Debug, Clone)]
pub struct BfsResult {
    pub distance: usize,
    /// Number of distinct shortest flip sequences.
    pub path_count: u128,
    /// Distinct flip multisets over all shortest paths, each sorted by quad.
    pub multisets: BTreeSet<Vec<(crate::plan::QuadKey, Segment, Segment)>>,
    pub states_visited: usize,
}

fn target_bits(frame: &Frame, target: &Target) -> Result<(Bits, bool)> {
    match target {
        Target::Contains(set) => Ok((frame.encode_set(set)?, false)),
        Target::Equals(t) => Ok((frame.encode(t)?, true)),
    }
}

/// Breadth-first search from `start` to the nearest triangulations meeting
/// `target`, recording every shortest path.
pub fn flip_graph_bfs(start: &Triangulation, target: &Target, guard: &Guard) -> Result<BfsResult> {
    let frame = Frame::new(start.polygon(), start.constraints(), guard)?;
    let s0 = frame.encode(start)?;
    let (goal, exact) = target_bits(&frame, target)?;
    let hit = |b: &Bits| if exact { *b == goal } else { b.contains_all(&goal) };

    let mut states: Vec<Bits> = vec![s0.clone()];
    let mut depth: Vec<usize> = vec![0];
    let mut preds: Vec<Vec<(usize, (usize, usize, Point, Point))>> = vec![Vec::new()];
    let mut ids: HashMap<Bits, usize> = HashMap::from([(s0, 0)]);
    let mut layer = vec![0usize];
    let mut d = 0usize;
    let found = loop {
        let hits: Vec<usize> = layer.iter().copied().filter(|&i| hit(&states[i])).collect();
        if !hits.is_empty() {
            break hits;
        }
        if layer.is_empty() {
            return Err(Error::Unreachable);
        }
        let mut next = Vec::new();
        for &i in &layer {
            let cur = states[i].clone();
            for m in frame.moves(&cur) {
                let nb = frame.apply(&cur, m.0, m.1);
                let j = match ids.get(&nb) {
                    Some(&j) => j,
                    None => {
                        let j = states.len();
                        if j >= guard.max_states {
                            return Err(Error::TooLarge { what: "search states", actual: j, limit: guard.max_states });
                        }
                        ids.insert(nb.clone(), j);
                        states.push(nb);
                        depth.push(d + 1);
                        preds.push(Vec::new());
                        next.push(j);
                        j
                    }
                };
                if depth[j] == d + 1 {
                    preds[j].push((i, m));
                }
            }
        }
        layer = next;
        d += 1;
    };

    // Keep only states on some shortest path to a hit.
    let mut useful = vec![false; states.len()];
    let mut queue: VecDeque<usize> = found.iter().copied().collect();
    for &h in &found {
        useful[h] = true;
    }
    while let Some(x) = queue.pop_front() {
        for &(p, _) in &preds[x] {
            if !useful[p] {
                useful[p] = true;
                queue.push_back(p);
            }
        }
    }
    let mut order: Vec<usize> = (0..states.len()).filter(|&i| useful[i]).collect();
    order.sort_by_key(|&i| depth[i]);
    let mut count = vec![0u128; states.len()];
    let mut sets: HashMap<usize, BTreeSet<Vec<(crate::plan::QuadKey, Segment, Segment)>>> = HashMap::new();
    count[0] = 1;
    sets.insert(0, BTreeSet::from([Vec::new()]));
    for &x in &order {
        if x == 0 {
            continue;
        }
        let mut c = 0u128;
        let mut acc = BTreeSet::new();
        for &(p, m) in &preds[x] {
            if !useful[p] {
                continue;
            }
            c = c.saturating_add(count[p]);
            let f = frame.flip_record(m.0, m.1, m.2, m.3);
            for ms in &sets[&p] {
                let mut v = ms.clone();
                v.push((f.key(), f.removed, f.created));
                v.sort();
                acc.insert(v);
            }
        }
        count[x] = c;
        sets.insert(x, acc);
    }
    let mut multisets = BTreeSet::new();
    let mut path_count = 0u128;
    for &h in &found {
        path_count = path_count.saturating_add(count[h]);
        multisets.extend(sets[&h].iter().cloned());
    }
    Ok(BfsResult { distance: d, path_count, multisets, states_visited: states.len() })
}

/// Distance only; cheaper than [`flip_graph_bfs`].
pub fn bfs_distance(start: &Triangulation, target: &Target, guard: &Guard) -> Result<usize> {
    let frame = Frame::new(start.polygon(), start.constraints(), guard)?;
    let s0 = frame.encode(start)?;
    let (goal, exact) = target_bits(&frame, target)?;
    let hit = |b: &Bits| if exact { *b == goal } else { b.contains_all(&goal) };
    let mut seen: std::collections::HashSet<Bits> = std::collections::HashSet::from([s0.clone()]);
    let mut layer = vec![s0];
    let mut d = 0;
    loop {
        if layer.iter().any(&hit) {
            return Ok(d);
        }
        if layer.is_empty() {
            return Err(Error::Unreachable);
        }
        let mut next = Vec::new();
        for cur in &layer {
            for m in frame.moves(cur) {
                let nb = frame.apply(cur, m.0, m.1);
                if seen.insert(nb.clone()) {
                    if seen.len() > guard.max_states {
                        return Err(Error::TooLarge { what: "search states", actual: seen.len(), limit: guard.max_states });
                    }
                    next.push(nb);
                }
            }
        }
        layer = next;
        d += 1;
    }
}

/// Whole flip graph of a small polygon.
pub struct FlipGraph {
    frame: Frame,
    constraints: BTreeSet<Segment>,
    states: Vec<Bits>,
    ids: HashMap<Bits, usize>,
    adj: Vec<Vec<usize>>,
}

impl FlipGraph {
    pub fn build(poly: &Polygon, constraints: &BTreeSet<Segment>, guard: &Guard) -> Result<FlipGraph> {
        let frame = Frame::new(poly, constraints, guard)?;
        let mut states = frame.enumerate(&frame.frozen, guard.max_states)?;
        states.sort();
        let ids: HashMap<Bits, usize> = states.iter().enumerate().map(|(i, b)| (b.clone(), i)).collect();
        let mut adj = Vec::with_capacity(states.len());
        for b in &states {
            let mut nb = Vec::new();
            for m in frame.moves(b) {
                let next = frame.apply(b, m.0, m.1);
                let j = *ids.get(&next).ok_or_else(|| Error::Internal("flip left the enumerated set".into()))?;
                nb.push(j);
            }
            adj.push(nb);
        }
        Ok(FlipGraph { frame, constraints: constraints.clone(), states, ids, adj })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn triangulation(&self, i: usize) -> Triangulation {
        self.frame.decode(&self.states[i], &self.constraints)
    }

    pub fn index_of(&self, t: &Triangulation) -> Option<usize> {
        self.frame.encode(t).ok().and_then(|b| self.ids.get(&b).copied())
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    /// True when state `i` contains every edge of `set`.
    pub fn contains(&self, i: usize, set: &BTreeSet<Segment>) -> bool {
        set.iter().all(|s| self.frame.index.get(s).is_some_and(|&k| self.states[i].get(k)))
    }

    /// Distances from a set of sources to every state (`usize::MAX` if unreachable).
    pub fn distances_from(&self, sources: &[usize]) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.len()];
        let mut q = VecDeque::new();
        for &s in sources {
            if dist[s] != 0 {
                dist[s] = 0;
                q.push_back(s);
            }
        }
        while let Some(x) = q.pop_front() {
            for &y in &self.adj[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    q.push_back(y);
                }
            }
        }
        dist
    }
}

/// Every strictly convex lattice quadrilateral with `e` as its strictly
/// longer diagonal whose closure holds no lattice points besides its corners.
pub fn brute_unique_quad(e: &EdgeInstance, guard: &Guard) -> Result<Vec<[Point; 4]>> {
    let len = e.class.squared_length();
    if len > guard.max_quad_sq_len {
        return Err(Error::TooLarge { what: "squared edge length", actual: len as usize, limit: guard.max_quad_sq_len as usize });
    }
    let p = e.origin;
    let q = e.endpoint();
    let v = q - p;
    let m = v.a.abs().max(v.b.abs()) + 1;
    let (a0, a1) = (p.a.min(q.a) - m, p.a.max(q.a) + m);
    let (b0, b1) = (p.b.min(q.b) - m, p.b.max(q.b) + m);
    let mut left = Vec::new();
    let mut right = Vec::new();
    for a in a0..=a1 {
        for b in b0..=b1 {
            let r = LatticePoint::new(a, b);
            match orientation(p, q, r) {
                1 => left.push(r),
                -1 => right.push(r),
                _ => {}
            }
        }
    }
    let mut out = Vec::new();
    for &r in &left {
        for &s in &right {
            if (s - r).squared_length() >= len {
                continue;
            }
            if orientation(r, s, p) * orientation(r, s, q) >= 0 {
                continue;
            }
            let quad = [p, s, q, r];
            let sides_primitive = (0..4).all(|i| (quad[(i + 1) % 4] - quad[i]).is_primitive());
            if sides_primitive && interior_lattice_points(&quad).is_empty() {
                out.push(quad);
            }
        }
    }
    Ok(out)
}

/// Optimum of [`brute_min_pair`].
#[derive(Debug, Clone)]
pub struct MinPair {
    pub distance: usize,
    pub first: Triangulation,
    pub second: Triangulation,
}

/// Smallest flip distance between a triangulation containing `e` and one
/// containing `e2`, both respecting the ambient `constraints`.
pub fn brute_min_pair(
    poly: &Polygon,
    constraints: &BTreeSet<Segment>,
    e: &BTreeSet<Segment>,
    e2: &BTreeSet<Segment>,
    guard: &Guard,
) -> Result<MinPair> {
    let g = FlipGraph::build(poly, constraints, guard)?;
    let sources: Vec<usize> = (0..g.len()).filter(|&i| g.contains(i, e)).collect();
    if sources.is_empty() {
        return Err(Error::Unreachable);
    }
    let dist = g.distances_from(&sources);
    let best = (0..g.len())
        .filter(|&j| g.contains(j, e2) && dist[j] != usize::MAX)
        .min_by_key(|&j| (dist[j], j))
        .ok_or(Error::Unreachable)?;
    let d = dist[best];
    // Walk back to a source to recover the witness pair.
    let mut cur = best;
    let mut k = d;
    while k > 0 {
        cur = *g.neighbors(cur).iter().find(|&&y| dist[y] == k - 1).expect("BFS predecessor exists");
        k -= 1;
    }
    Ok(MinPair { distance: d, first: g.triangulation(cur), second: g.triangulation(best) })
}
