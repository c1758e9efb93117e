//! Flips, flip plans and operations on their dependency DAGs.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::farey::{farey_parallelogram, FareyParallelogram};
use crate::lattice::{convex_interiors_disjoint, segments_intersect, EdgeInstance, LatticePoint, Segment};

/// Four quad vertices in ascending order; identifies a flip.
pub type QuadKey = [LatticePoint; 4];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Replaces the short diagonal by the long one.
    Forward,
    /// Undoes a forward flip.
    Reversed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Flip {
    /// Quad vertices in cyclic order.
    pub quad: [LatticePoint; 4],
    pub removed: Segment,
    pub created: Segment,
    pub direction: Direction,
}

impl Flip {
    pub fn from_parallelogram(p: &FareyParallelogram) -> Flip {
        Flip { quad: p.vertices, removed: p.short_diagonal, created: p.long_diagonal(), direction: Direction::Forward }
    }

    pub fn key(&self) -> QuadKey {
        let mut k = self.quad;
        k.sort();
        k
    }

    pub fn reversed(&self) -> Flip {
        let direction = match self.direction {
            Direction::Forward => Direction::Reversed,
            Direction::Reversed => Direction::Forward,
        };
        Flip { quad: self.quad, removed: self.created, created: self.removed, direction }
    }

    /// The longer of the two diagonals.
    pub fn long_diagonal(&self) -> Segment {
        match self.direction {
            Direction::Forward => self.created,
            Direction::Reversed => self.removed,
        }
    }

    pub fn short_diagonal(&self) -> Segment {
        match self.direction {
            Direction::Forward => self.removed,
            Direction::Reversed => self.created,
        }
    }

    /// The four quad sides.
    pub fn sides(&self) -> [Segment; 4] {
        let q = self.quad;
        [Segment::new(q[0], q[1]), Segment::new(q[1], q[2]), Segment::new(q[2], q[3]), Segment::new(q[3], q[0])]
    }
}

impl fmt::Display for Flip {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = match self.direction {
            Direction::Forward => "+",
            Direction::Reversed => "-",
        };
        write!(f, "{d}{} -> {}", self.removed, self.created)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlipKind {
    Good,
    Bad,
}

/// A flip is good when the edge it removes is a unit edge.
pub fn classify_flip(f: &Flip) -> FlipKind {
    if f.removed.is_unit() {
        FlipKind::Good
    } else {
        FlipKind::Bad
    }
}

/// DAG of flips. An arc `child -> parent` means the child must be
/// performed before the parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipPlan {
    nodes: Vec<Flip>,
    children: Vec<Vec<usize>>,
    parents: Vec<Vec<usize>>,
    index: HashMap<QuadKey, usize>,
    targets: Vec<Segment>,
    tags: Vec<BTreeSet<usize>>,
}

/// Result of checking a proposed sequence of flips against a plan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderingReport {
    pub valid: bool,
    pub position: Option<usize>,
    pub reason: Option<String>,
}

impl OrderingReport {
    fn ok() -> Self {
        OrderingReport { valid: true, position: None, reason: None }
    }

    fn fail(position: usize, reason: String) -> Self {
        OrderingReport { valid: false, position: Some(position), reason: Some(reason) }
    }
}

/// Number of linear extensions, saturated at a caller-given cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extensions {
    Exact(u128),
    AtLeast(u128),
}

impl FlipPlan {
    pub fn empty() -> FlipPlan {
        FlipPlan::from_parts(Vec::new(), Vec::new(), Vec::new(), Vec::new()).expect("empty plan is valid")
    }

    /// Assembles a plan from raw parts. Nodes are re-sorted into canonical
    /// order (reversed flips first, then by quad key).
    pub fn from_parts(
        nodes: Vec<Flip>,
        arcs: Vec<(usize, usize)>,
        targets: Vec<Segment>,
        tags: Vec<BTreeSet<usize>>,
    ) -> Result<FlipPlan> {
        let n = nodes.len();
        let tags = if tags.is_empty() { vec![BTreeSet::new(); n] } else { tags };
        if tags.len() != n {
            return Err(Error::Parse("tag list does not match node list".into()));
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (nodes[i].direction == Direction::Forward, nodes[i].key()));
        let mut rank = vec![0usize; n];
        for (r, &i) in order.iter().enumerate() {
            rank[i] = r;
        }
        let sorted: Vec<Flip> = order.iter().map(|&i| nodes[i]).collect();
        let sorted_tags: Vec<BTreeSet<usize>> = order.iter().map(|&i| tags[i].clone()).collect();
        let mut index = HashMap::with_capacity(n);
        for (i, f) in sorted.iter().enumerate() {
            if index.insert(f.key(), i).is_some() {
                return Err(Error::Parse(format!("duplicate flip on quad {:?}", f.key())));
            }
        }
        let mut children = vec![BTreeSet::new(); n];
        for (c, p) in arcs {
            if c >= n || p >= n || c == p {
                return Err(Error::Parse(format!("arc ({c}, {p}) is out of range")));
            }
            children[rank[p]].insert(rank[c]);
        }
        let children: Vec<Vec<usize>> = children.into_iter().map(|s| s.into_iter().collect()).collect();
        let mut parents = vec![Vec::new(); n];
        for (p, cs) in children.iter().enumerate() {
            for &c in cs {
                parents[c].push(p);
            }
        }
        for t in &sorted_tags {
            if t.iter().any(|&x| x >= targets.len()) {
                return Err(Error::Parse("tag refers to a missing target".into()));
            }
        }
        let plan = FlipPlan { nodes: sorted, children, parents, index, targets, tags: sorted_tags };
        if plan.topological_order_checked().is_none() {
            return Err(Error::Parse("plan arcs contain a cycle".into()));
        }
        Ok(plan)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Flip] {
        &self.nodes
    }

    pub fn flip(&self, i: usize) -> &Flip {
        &self.nodes[i]
    }

    /// Flips that must precede node `i`.
    pub fn children(&self, i: usize) -> &[usize] {
        &self.children[i]
    }

    /// Flips that wait on node `i`.
    pub fn parents(&self, i: usize) -> &[usize] {
        &self.parents[i]
    }

    pub fn index_of(&self, key: &QuadKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn contains_key(&self, key: &QuadKey) -> bool {
        self.index.contains_key(key)
    }

    /// Target edges the plan was built for.
    pub fn targets(&self) -> &[Segment] {
        &self.targets
    }

    /// Indices into [`FlipPlan::targets`] whose single-edge plans contain node `i`.
    pub fn tags(&self, i: usize) -> &BTreeSet<usize> {
        &self.tags[i]
    }

    /// All arcs as `(child, parent)` pairs.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (p, cs) in self.children.iter().enumerate() {
            for &c in cs {
                out.push((c, p));
            }
        }
        out.sort();
        out
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.children[i].is_empty()).collect()
    }

    pub fn roots(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.parents[i].is_empty()).collect()
    }

    pub fn keys(&self) -> BTreeSet<QuadKey> {
        self.index.keys().copied().collect()
    }

    /// Node `i` and everything that must precede it.
    pub fn descendants(&self, i: usize) -> BTreeSet<usize> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![i];
        while let Some(x) = stack.pop() {
            if seen.insert(x) {
                stack.extend(self.children[x].iter().copied());
            }
        }
        seen
    }

    /// Longest chain of flips; leaves have height 1.
    pub fn heights(&self) -> Vec<usize> {
        let mut h = vec![0usize; self.len()];
        for i in self.topological_order() {
            h[i] = 1 + self.children[i].iter().map(|&c| h[c]).max().unwrap_or(0);
        }
        h
    }

    fn topological_order_checked(&self) -> Option<Vec<usize>> {
        let n = self.len();
        let mut pending: Vec<usize> = self.children.iter().map(|c| c.len()).collect();
        let mut ready: BTreeSet<usize> = (0..n).filter(|&i| pending[i] == 0).collect();
        let mut out = Vec::with_capacity(n);
        while let Some(i) = ready.pop_first() {
            out.push(i);
            for &p in &self.parents[i] {
                pending[p] -= 1;
                if pending[p] == 0 {
                    ready.insert(p);
                }
            }
        }
        (out.len() == n).then_some(out)
    }

    /// Deterministic linear extension: among available flips, reversed
    /// flips first, then ascending quad key.
    pub fn topological_order(&self) -> Vec<usize> {
        self.topological_order_checked().expect("plan DAG is acyclic")
    }

    /// Uniformly picks among available flips at each step.
    pub fn random_linear_extension<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        let n = self.len();
        let mut pending: Vec<usize> = self.children.iter().map(|c| c.len()).collect();
        let mut ready: Vec<usize> = (0..n).filter(|&i| pending[i] == 0).collect();
        let mut out = Vec::with_capacity(n);
        while !ready.is_empty() {
            let k = rng.gen_range(0..ready.len());
            let i = ready.swap_remove(k);
            out.push(i);
            for &p in &self.parents[i] {
                pending[p] -= 1;
                if pending[p] == 0 {
                    ready.push(p);
                }
            }
        }
        out
    }

    /// Checks that `order` is a permutation of the nodes respecting all arcs.
    pub fn validate_order_indices(&self, order: &[usize]) -> OrderingReport {
        let n = self.len();
        if order.len() != n {
            return OrderingReport::fail(order.len().min(n), format!("expected {n} flips, got {}", order.len()));
        }
        let mut pos = vec![usize::MAX; n];
        for (k, &i) in order.iter().enumerate() {
            if i >= n {
                return OrderingReport::fail(k, format!("flip index {i} is not in the plan"));
            }
            if pos[i] != usize::MAX {
                return OrderingReport::fail(k, format!("flip {} appears twice", self.nodes[i]));
            }
            pos[i] = k;
        }
        for (k, &i) in order.iter().enumerate() {
            for &c in &self.children[i] {
                if pos[c] > k {
                    return OrderingReport::fail(
                        k,
                        format!("flip {} precedes its prerequisite {}", self.nodes[i], self.nodes[c]),
                    );
                }
            }
        }
        OrderingReport::ok()
    }

    /// Same as [`FlipPlan::validate_order_indices`] with flips matched by quad.
    pub fn validate_linear_ordering(&self, order: &[Flip]) -> OrderingReport {
        let mut idx = Vec::with_capacity(order.len());
        for (k, f) in order.iter().enumerate() {
            match self.index_of(&f.key()) {
                Some(i) => idx.push(i),
                None => return OrderingReport::fail(k, format!("flip {f} is not in the plan")),
            }
        }
        self.validate_order_indices(&idx)
    }

    /// Counts linear extensions by memoizing over completed downsets.
    pub fn count_linear_extensions(&self, cap: u128) -> Extensions {
        let n = self.len();
        let words = n.div_ceil(64).max(1);
        let mut memo: HashMap<Vec<u64>, u128> = HashMap::new();
        let done = vec![0u64; words];
        let v = self.count_from(&done, n, 0, cap, &mut memo);
        if v >= cap {
            Extensions::AtLeast(cap)
        } else {
            Extensions::Exact(v)
        }
    }

    fn count_from(&self, done: &[u64], n: usize, filled: usize, cap: u128, memo: &mut HashMap<Vec<u64>, u128>) -> u128 {
        if filled == n {
            return 1;
        }
        if let Some(&v) = memo.get(done) {
            return v;
        }
        let has = |s: &[u64], i: usize| s[i / 64] >> (i % 64) & 1 == 1;
        let mut total: u128 = 0;
        for i in 0..n {
            if has(done, i) || !self.children[i].iter().all(|&c| has(done, c)) {
                continue;
            }
            let mut next = done.to_vec();
            next[i / 64] |= 1 << (i % 64);
            total = total.saturating_add(self.count_from(&next, n, filled + 1, cap, memo));
            if total >= cap {
                total = cap;
                break;
            }
        }
        memo.insert(done.to_vec(), total);
        total
    }

    /// Sub-DAG on the nodes accepted by `keep`; arcs to dropped nodes vanish.
    pub fn induced(&self, keep: impl Fn(usize) -> bool) -> FlipPlan {
        let kept: Vec<usize> = (0..self.len()).filter(|&i| keep(i)).collect();
        let mut new_index = vec![usize::MAX; self.len()];
        for (k, &i) in kept.iter().enumerate() {
            new_index[i] = k;
        }
        let nodes = kept.iter().map(|&i| self.nodes[i]).collect();
        let tags = kept.iter().map(|&i| self.tags[i].clone()).collect();
        let mut arcs = Vec::new();
        for &p in &kept {
            for &c in &self.children[p] {
                if new_index[c] != usize::MAX {
                    arcs.push((new_index[c], new_index[p]));
                }
            }
        }
        FlipPlan::from_parts(nodes, arcs, self.targets.clone(), tags).expect("induced sub-DAG is valid")
    }

    /// Replaces the target list, remapping tags through `map` (old index to new).
    pub fn retarget(&self, targets: Vec<Segment>, map: impl Fn(usize) -> Option<usize>) -> FlipPlan {
        let mut out = self.clone();
        out.tags = self.tags.iter().map(|t| t.iter().filter_map(|&x| map(x)).collect()).collect();
        out.targets = targets;
        out
    }
}

/// Accumulates flips keyed by quad while a plan is being built.
#[derive(Default)]
struct Builder {
    nodes: Vec<Flip>,
    children: Vec<BTreeSet<usize>>,
    tags: Vec<BTreeSet<usize>>,
    index: HashMap<QuadKey, usize>,
}

impl Builder {
    fn node(&mut self, f: Flip) -> usize {
        let key = f.key();
        if let Some(&i) = self.index.get(&key) {
            return i;
        }
        let i = self.nodes.len();
        self.nodes.push(f);
        self.children.push(BTreeSet::new());
        self.tags.push(BTreeSet::new());
        self.index.insert(key, i);
        i
    }

    fn add_edge(&mut self, e: &EdgeInstance, tag: usize, seen: &mut HashMap<QuadKey, usize>) -> Result<Option<usize>> {
        if e.class.is_unit() {
            return Ok(None);
        }
        let p = farey_parallelogram(e)?;
        let flip = Flip::from_parallelogram(&p);
        if let Some(&i) = seen.get(&flip.key()) {
            return Ok(Some(i));
        }
        let i = self.node(flip);
        self.tags[i].insert(tag);
        seen.insert(flip.key(), i);
        let long = p.boundary_long;
        let second = EdgeInstance::new(long.origin + p.boundary_short.vector(), long.class);
        for child in [long, second] {
            if let Some(c) = self.add_edge(&child, tag, seen)? {
                self.children[i].insert(c);
            }
        }
        Ok(Some(i))
    }

    fn finish(self, targets: Vec<Segment>) -> FlipPlan {
        let mut arcs = Vec::new();
        for (p, cs) in self.children.iter().enumerate() {
            for &c in cs {
                arcs.push((c, p));
            }
        }
        FlipPlan::from_parts(self.nodes, arcs, targets, self.tags).expect("constructed plan is valid")
    }
}

/// Minimum flip plan generating `e` from an equilateral triangulation.
pub fn flip_plan(e: &EdgeInstance) -> Result<FlipPlan> {
    let mut b = Builder::default();
    b.add_edge(e, 0, &mut HashMap::new())?;
    Ok(b.finish(vec![e.segment()]))
}

/// Union of single-edge plans for pairwise non-crossing targets.
pub fn multi_flip_plan(targets: &[Segment]) -> Result<FlipPlan> {
    let mut uniq: Vec<Segment> = targets.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    uniq.retain(|s| s.p != s.q);
    for s in &uniq {
        if !s.is_primitive() {
            let v = s.vector();
            return Err(Error::NotPrimitive((v.a, v.b)));
        }
    }
    for i in 0..uniq.len() {
        for j in i + 1..uniq.len() {
            if segments_intersect(&uniq[i], &uniq[j]) {
                return Err(Error::IntersectingTargets(uniq[i], uniq[j]));
            }
        }
    }
    let mut b = Builder::default();
    for (t, s) in uniq.iter().enumerate() {
        let e = EdgeInstance::from_segment(s)?;
        b.add_edge(&e, t, &mut HashMap::new())?;
    }
    Ok(b.finish(uniq))
}

/// Parallelogram spanned by `x * first` and `y * second` at the edge origin.
pub fn bounding_parallelogram(e: &EdgeInstance) -> [LatticePoint; 4] {
    let (f, s) = e.class.sector.basis::<i64>();
    let o = e.origin;
    let fx = f * e.class.x;
    let sy = s * e.class.y;
    [o, o + fx, o + fx + sy, o + sy]
}

/// True when the bounding parallelograms have disjoint interiors.
pub fn geometrically_separated(e1: &EdgeInstance, e2: &EdgeInstance) -> bool {
    if e1.class.is_unit() || e2.class.is_unit() {
        return true;
    }
    convex_interiors_disjoint(&bounding_parallelogram(e1), &bounding_parallelogram(e2))
}

/// Height of the plan DAG; `0` for the empty plan.
pub fn plan_height(plan: &FlipPlan) -> usize {
    plan.heights().into_iter().max().unwrap_or(0)
}

/// Layered composition: every flip of `plans[k]` waits for all earlier layers.
/// Flips already present in an earlier layer are not repeated.
pub fn sequential_compose(plans: &[FlipPlan]) -> FlipPlan {
    let mut nodes: Vec<Flip> = Vec::new();
    let mut tags: Vec<BTreeSet<usize>> = Vec::new();
    let mut index: HashMap<QuadKey, usize> = HashMap::new();
    let mut arcs: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut targets = Vec::new();
    let mut frontier: Vec<usize> = Vec::new();
    for plan in plans {
        let offset = targets.len();
        targets.extend(plan.targets().iter().copied());
        let mut map = vec![0usize; plan.len()];
        let mut fresh = vec![false; plan.len()];
        for (i, f) in plan.nodes().iter().enumerate() {
            map[i] = *index.entry(f.key()).or_insert_with(|| {
                fresh[i] = true;
                nodes.push(*f);
                tags.push(BTreeSet::new());
                nodes.len() - 1
            });
            tags[map[i]].extend(plan.tags(i).iter().map(|t| t + offset));
        }
        for (c, p) in plan.arcs() {
            if fresh[p] {
                arcs.insert((map[c], map[p]));
            }
        }
        let new: Vec<usize> = (0..plan.len()).filter(|&i| fresh[i]).collect();
        if new.is_empty() {
            continue;
        }
        for &i in &new {
            if plan.children(i).iter().all(|&c| !fresh[c]) {
                for &m in &frontier {
                    arcs.insert((m, map[i]));
                }
            }
        }
        frontier = new.iter().filter(|&&i| plan.parents(i).iter().all(|&p| !fresh[p])).map(|&i| map[i]).collect();
    }
    FlipPlan::from_parts(nodes, arcs.into_iter().collect(), targets, tags).expect("composition is acyclic")
}
