//! Deterministic SVG and Graphviz output.

use std::fmt::Write;

use crate::lattice::{LatticePoint, Segment};
use crate::plan::{classify_flip, Direction, FlipKind, FlipPlan};
use crate::triangulation::{Polygon, Triangulation};

const SCALE: f64 = 40.0;
const MARGIN: f64 = 20.0;

struct Frame {
    xmin: f64,
    ymax: f64,
    width: f64,
    height: f64,
}

impl Frame {
    fn around(points: &[LatticePoint]) -> Frame {
        let cart: Vec<(f64, f64)> = points.iter().map(|p| p.to_cartesian::<f64>()).collect();
        let xmin = cart.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
        let xmax = cart.iter().map(|c| c.0).fold(f64::NEG_INFINITY, f64::max);
        let ymin = cart.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
        let ymax = cart.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
        Frame { xmin, ymax, width: (xmax - xmin) * SCALE + 2.0 * MARGIN, height: (ymax - ymin) * SCALE + 2.0 * MARGIN }
    }

    fn map(&self, p: &LatticePoint) -> (f64, f64) {
        let (x, y) = p.to_cartesian::<f64>();
        ((x - self.xmin) * SCALE + MARGIN, (self.ymax - y) * SCALE + MARGIN)
    }
}

fn header(out: &mut String, w: f64, h: f64) {
    writeln!(out, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.2}\" height=\"{h:.2}\" viewBox=\"0 0 {w:.2} {h:.2}\">").unwrap();
    writeln!(out, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>").unwrap();
}

fn line(out: &mut String, f: &Frame, s: &Segment, colour: &str, width: f64) {
    let (x1, y1) = f.map(&s.p);
    let (x2, y2) = f.map(&s.q);
    writeln!(
        out,
        "<line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" stroke=\"{colour}\" stroke-width=\"{width:.1}\"/>"
    )
    .unwrap();
}

fn polygon_path(out: &mut String, f: &Frame, poly: &Polygon) {
    let pts: Vec<String> = poly
        .vertices()
        .iter()
        .map(|p| {
            let (x, y) = f.map(p);
            format!("{x:.2},{y:.2}")
        })
        .collect();
    writeln!(out, "<polygon points=\"{}\" fill=\"#eef3fb\" stroke=\"#3060c0\" stroke-width=\"2.0\"/>", pts.join(" ")).unwrap();
}

fn dots(out: &mut String, f: &Frame, poly: &Polygon) {
    for p in poly.lattice_points() {
        let (x, y) = f.map(p);
        writeln!(out, "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"2.5\" fill=\"black\"/>").unwrap();
    }
}

/// Polygon outline with its lattice points.
pub fn polygon_svg(poly: &Polygon) -> String {
    let f = Frame::around(poly.vertices());
    let mut out = String::new();
    header(&mut out, f.width, f.height);
    polygon_path(&mut out, &f, poly);
    dots(&mut out, &f, poly);
    out.push_str("</svg>\n");
    out
}

/// Triangulation in the 60-degree embedding; constraints are drawn in red.
pub fn triangulation_svg(t: &Triangulation) -> String {
    let poly = t.polygon();
    let f = Frame::around(poly.vertices());
    let mut out = String::new();
    header(&mut out, f.width, f.height);
    polygon_path(&mut out, &f, poly);
    for face in t.faces() {
        let pts: Vec<String> = face
            .iter()
            .map(|p| {
                let (x, y) = f.map(p);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        writeln!(out, "<polygon class=\"face\" points=\"{}\" fill=\"#eef3fb\" stroke=\"none\"/>", pts.join(" ")).unwrap();
    }
    for s in t.edges() {
        if t.constraints().contains(s) {
            line(&mut out, &f, s, "#c03030", 2.5);
        } else if poly.boundary_segments().contains(s) {
            line(&mut out, &f, s, "#3060c0", 2.0);
        } else {
            line(&mut out, &f, s, "black", 1.0);
        }
    }
    dots(&mut out, &f, poly);
    out.push_str("</svg>\n");
    out
}

fn label(plan: &FlipPlan, i: usize) -> String {
    let f = plan.flip(i);
    let sign = if f.direction == Direction::Forward { "+" } else { "-" };
    format!("{sign}{}", f.created)
}

/// Graphviz digraph; arcs point from a flip to the flip waiting on it.
pub fn plan_dot(plan: &FlipPlan) -> String {
    let mut out = String::new();
    out.push_str("digraph plan {\n  rankdir=BT;\n  node [shape=box, fontname=\"monospace\"];\n");
    for i in 0..plan.len() {
        let f = plan.flip(i);
        let q = f.quad.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ");
        let mut attrs = String::new();
        if f.direction == Direction::Reversed {
            attrs.push_str(", style=dashed");
        }
        if classify_flip(f) == FlipKind::Bad {
            attrs.push_str(", color=red");
        }
        writeln!(out, "  n{i} [label=\"{}\\n{q}\"{attrs}];", label(plan, i)).unwrap();
    }
    for (c, p) in plan.arcs() {
        writeln!(out, "  n{c} -> n{p};").unwrap();
    }
    out.push_str("}\n");
    out
}

/// Layered drawing of the plan DAG, leaves at the bottom.
pub fn plan_svg(plan: &FlipPlan) -> String {
    let heights = plan.heights();
    let top = heights.iter().copied().max().unwrap_or(0);
    let mut layers: Vec<Vec<usize>> = vec![Vec::new(); top + 1];
    for i in 0..plan.len() {
        layers[heights[i]].push(i);
    }
    let (bw, bh, gx, gy) = (170.0, 30.0, 20.0, 60.0);
    let widest = layers.iter().map(|l| l.len()).max().unwrap_or(0).max(1) as f64;
    let width = widest * (bw + gx) + gx;
    let height = (top.max(1) as f64) * (bh + gy) + gy;
    let mut pos = vec![(0.0, 0.0); plan.len()];
    for (h, layer) in layers.iter().enumerate() {
        let offset = (width - layer.len() as f64 * (bw + gx) + gx) / 2.0;
        for (k, &i) in layer.iter().enumerate() {
            let x = offset + k as f64 * (bw + gx);
            let y = gy / 2.0 + (top - h) as f64 * (bh + gy);
            pos[i] = (x, y);
        }
    }
    let mut out = String::new();
    header(&mut out, width, height);
    for (c, p) in plan.arcs() {
        let (cx, cy) = pos[c];
        let (px, py) = pos[p];
        writeln!(
            out,
            "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#808080\" stroke-width=\"1.0\"/>",
            cx + bw / 2.0,
            cy,
            px + bw / 2.0,
            py + bh
        )
        .unwrap();
    }
    for i in 0..plan.len() {
        let (x, y) = pos[i];
        let f = plan.flip(i);
        let stroke = if classify_flip(f) == FlipKind::Bad { "#c03030" } else { "black" };
        let fill = if f.direction == Direction::Reversed { "#dde8f8" } else { "white" };
        writeln!(
            out,
            "<rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{bw:.2}\" height=\"{bh:.2}\" fill=\"{fill}\" stroke=\"{stroke}\"/>"
        )
        .unwrap();
        writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"middle\">{}</text>",
            x + bw / 2.0,
            y + bh / 2.0 + 4.0,
            label(plan, i)
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}
