//! Versioned JSON documents for polygons, edge sets, triangulations and plans.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{LatticePoint, Segment};
use crate::plan::{Direction, Flip, FlipPlan};
use crate::triangulation::{Polygon, Triangulation};

pub const VERSION: u32 = 1;

type Pt = [i64; 2];
type Pair = [Pt; 2];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeItem {
    pub from: Pt,
    pub to: Pt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeDoc {
    pub quad: [Pt; 4],
    pub removed: Pair,
    pub created: Pair,
    pub direction: Direction,
}

/// Every document carries `kind` and `version`; unknown fields are rejected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Document {
    Polygon {
        version: u32,
        vertices: Vec<Pt>,
    },
    Edges {
        version: u32,
        items: Vec<EdgeItem>,
    },
    Triangulation {
        version: u32,
        vertices: Vec<Pt>,
        edges: Vec<Pair>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        constraints: Vec<Pair>,
    },
    Plan {
        version: u32,
        nodes: Vec<NodeDoc>,
        arcs: Vec<[usize; 2]>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        targets: Vec<Pair>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        tags: Vec<Vec<usize>>,
    },
}

fn pt(p: &LatticePoint) -> Pt {
    [p.a, p.b]
}

fn point(p: &Pt) -> LatticePoint {
    LatticePoint::new(p[0], p[1])
}

fn pair(s: &Segment) -> Pair {
    [pt(&s.p), pt(&s.q)]
}

fn segment(p: &Pair) -> Segment {
    Segment::new(point(&p[0]), point(&p[1]))
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Polygon { .. } => "polygon",
            Document::Edges { .. } => "edges",
            Document::Triangulation { .. } => "triangulation",
            Document::Plan { .. } => "plan",
        }
    }

    fn version(&self) -> u32 {
        match self {
            Document::Polygon { version, .. }
            | Document::Edges { version, .. }
            | Document::Triangulation { version, .. }
            | Document::Plan { version, .. } => *version,
        }
    }

    pub fn from_polygon(p: &Polygon) -> Document {
        Document::Polygon { version: VERSION, vertices: p.vertices().iter().map(pt).collect() }
    }

    pub fn from_edges(edges: &BTreeSet<Segment>) -> Document {
        let items = edges.iter().map(|s| EdgeItem { from: pt(&s.p), to: pt(&s.q) }).collect();
        Document::Edges { version: VERSION, items }
    }

    pub fn from_triangulation(t: &Triangulation) -> Document {
        Document::Triangulation {
            version: VERSION,
            vertices: t.polygon().vertices().iter().map(pt).collect(),
            edges: t.edges().iter().map(pair).collect(),
            constraints: t.constraints().iter().map(pair).collect(),
        }
    }

    pub fn from_plan(plan: &FlipPlan) -> Document {
        let nodes = plan
            .nodes()
            .iter()
            .map(|f| NodeDoc {
                quad: [pt(&f.quad[0]), pt(&f.quad[1]), pt(&f.quad[2]), pt(&f.quad[3])],
                removed: pair(&f.removed),
                created: pair(&f.created),
                direction: f.direction,
            })
            .collect();
        let arcs = plan.arcs().into_iter().map(|(c, p)| [c, p]).collect();
        let tags: Vec<Vec<usize>> = (0..plan.len()).map(|i| plan.tags(i).iter().copied().collect()).collect();
        let tags = if tags.iter().all(|t| t.is_empty()) { Vec::new() } else { tags };
        Document::Plan { version: VERSION, nodes, arcs, targets: plan.targets().iter().map(pair).collect(), tags }
    }

    pub fn to_polygon(&self) -> Result<Polygon> {
        match self {
            Document::Polygon { vertices, .. } | Document::Triangulation { vertices, .. } => {
                Polygon::new(vertices.iter().map(point).collect())
            }
            other => Err(Error::Parse(format!("expected a polygon, found {}", other.kind()))),
        }
    }

    pub fn to_edges(&self) -> Result<BTreeSet<Segment>> {
        match self {
            Document::Edges { items, .. } => Ok(items.iter().map(|e| Segment::new(point(&e.from), point(&e.to))).collect()),
            other => Err(Error::Parse(format!("expected edges, found {}", other.kind()))),
        }
    }

    pub fn to_triangulation(&self) -> Result<Triangulation> {
        match self {
            Document::Triangulation { edges, constraints, .. } => {
                let poly = self.to_polygon()?;
                Triangulation::new(poly, edges.iter().map(segment).collect(), constraints.iter().map(segment).collect())
            }
            other => Err(Error::Parse(format!("expected a triangulation, found {}", other.kind()))),
        }
    }

    pub fn to_plan(&self) -> Result<FlipPlan> {
        match self {
            Document::Plan { nodes, arcs, targets, tags, .. } => {
                let flips = nodes
                    .iter()
                    .map(|n| Flip {
                        quad: [point(&n.quad[0]), point(&n.quad[1]), point(&n.quad[2]), point(&n.quad[3])],
                        removed: segment(&n.removed),
                        created: segment(&n.created),
                        direction: n.direction,
                    })
                    .collect();
                let tags = tags.iter().map(|t| t.iter().copied().collect()).collect();
                FlipPlan::from_parts(
                    flips,
                    arcs.iter().map(|a| (a[0], a[1])).collect(),
                    targets.iter().map(segment).collect(),
                    tags,
                )
            }
            other => Err(Error::Parse(format!("expected a plan, found {}", other.kind()))),
        }
    }
}

/// Parses a document and checks its version.
pub fn parse(text: &str) -> Result<Document> {
    let doc: Document = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if doc.version() != VERSION {
        return Err(Error::Parse(format!("unsupported version {}", doc.version())));
    }
    Ok(doc)
}

/// Canonical text: compact JSON followed by a newline.
pub fn to_text(doc: &Document) -> String {
    let mut s = serde_json::to_string(doc).expect("documents serialize");
    s.push('\n');
    s
}

pub fn load(path: &Path) -> Result<Document> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn save(path: &Path, doc: &Document) -> Result<()> {
    std::fs::write(path, to_text(doc)).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}
