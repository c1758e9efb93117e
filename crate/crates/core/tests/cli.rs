mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use common::{rect, seg, set};
use farey_flip::io::{self, Document};
use farey_flip::mintri::min_triangulation;
use farey_flip::render;
use farey_flip::triangulation::equilateral_triangulation;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_farey-flip"));
    c.env_remove("FAREY_FLIP_GUARD");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

struct Scratch(PathBuf);

impl Scratch {
    fn new(name: &str) -> Scratch {
        let dir = std::env::temp_dir().join(format!("farey-flip-cli-{name}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn write(&self, name: &str, doc: &Document) -> String {
        let p = self.0.join(name);
        io::save(&p, doc).unwrap();
        p.to_str().unwrap().to_string()
    }

    fn path(&self, name: &str) -> String {
        self.0.join(name).to_str().unwrap().to_string()
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

#[test]
fn farey_plan_output() {
    assert_eq!(stdout(&run(&["farey-plan", "3,2"])), "{1/1, 1/2, 2/3}\n");
    assert_eq!(stdout(&run(&["farey-plan", "--edge", "0,1"])), "{}\n");
    assert_eq!(stdout(&run(&["farey-plan", "--edge", "3,5"])), "{1/1, 1/2, 2/3, 3/5}\n");
    let bad = run(&["farey-plan", "--edge", "2,4"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).starts_with("error:"));
}

#[test]
fn flip_plan_formats() {
    let text = stdout(&run(&["flip-plan", "--edge", "3,2", "--origin", "0,0"]));
    assert!(text.starts_with("flips 7\nheight 3\nbad 0\n"));
    let dot = stdout(&run(&["flip-plan", "--edge", "3,2", "--dot"]));
    assert_eq!(dot.matches("[label=").count(), 7);
    assert_eq!(dot.matches(" -> ").count(), 6);
    let json = stdout(&run(&["flip-plan", "--edge", "3,2", "--json"]));
    let plan = io::parse(&json).unwrap().to_plan().unwrap();
    assert_eq!(plan.len(), 7);
    let s = Scratch::new("svg");
    let out = s.path("plan.svg");
    assert!(run(&["flip-plan", "--edge", "1,4", "--sector", "2", "--svg", &out]).status.success());
    assert!(std::fs::read_to_string(&out).unwrap().starts_with("<svg"));
    assert_eq!(run(&["flip-plan", "--edge", "3,2", "--sector", "7"]).status.code(), Some(2));
}

#[test]
fn triangulation_commands_round_trip() {
    let s = Scratch::new("tri");
    let p = rect(3, 2);
    let poly = s.write("p.json", &Document::from_polygon(&p));
    let cons = s.write("c.json", &Document::from_edges(&set(&[seg(0, 0, 3, 2)])));
    let mt = stdout(&run(&["min-tri", "--polygon", &poly, "--constraints", &cons]));
    let want = min_triangulation(&p, &set(&[seg(0, 0, 3, 2)])).unwrap();
    assert_eq!(mt, io::to_text(&Document::from_triangulation(&want)));

    let a = s.write("a.json", &Document::from_triangulation(&equilateral_triangulation(&p).unwrap()));
    let b_tri = min_triangulation(&p, &set(&[seg(0, 0, 3, 2)])).unwrap().with_constraints(Default::default()).unwrap();
    let b = s.write("b.json", &Document::from_triangulation(&b_tri));
    let plan_text = stdout(&run(&["plan-between", "--from", &a, "--to", &b]));
    let plan = s.write("plan.json", &io::parse(&plan_text).unwrap());
    let done = stdout(&run(&["verify", "--plan", &plan, "--start", &a]));
    assert_eq!(io::parse(&done).unwrap().to_triangulation().unwrap(), b_tri);

    let order = s.0.join("order.json");
    std::fs::write(&order, "[0]").unwrap();
    let bad = run(&["verify", "--plan", &plan, "--start", &a, "--order", order.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));

    let m = stdout(&run(&["mct", "--a", &a, "--b", &b]));
    assert_eq!(io::parse(&m).unwrap().to_triangulation().unwrap(), equilateral_triangulation(&p).unwrap());

    let e = s.write("e.json", &Document::from_edges(&set(&[seg(0, 0, 2, 1)])));
    let c_tri = min_triangulation(&p, &set(&[seg(0, 0, 2, 1)])).unwrap().with_constraints(Default::default()).unwrap();
    let c = s.write("c2.json", &Document::from_triangulation(&c_tri));
    let pair = stdout(&run(&["optimize-pair", "--u", &b, "--v", &c, "--e", &e, "--e2", &e]));
    let want = io::to_text(&Document::from_triangulation(&c_tri));
    assert_eq!(pair, format!("{want}{want}"));
    assert_eq!(run(&["optimize-pair", "--u", &b, "--v", &a, "--e", &e, "--e2", &e]).status.code(), Some(2));

    let edges = s.write("edges.json", &Document::from_edges(&set(&[seg(0, 0, 3, 2), seg(0, 0, 2, 1)])));
    assert!(stdout(&run(&["multi-plan", "--edges", &edges])).starts_with("flips 7\n"));
}

#[test]
fn oracle_commands() {
    let s = Scratch::new("oracle");
    let p = rect(3, 2);
    let poly = s.write("p.json", &Document::from_polygon(&p));
    assert_eq!(stdout(&run(&["oracle", "enumerate", "--polygon", &poly])), "count 852\n");
    let start = s.write("t.json", &Document::from_triangulation(&equilateral_triangulation(&p).unwrap()));
    let e = s.write("e.json", &Document::from_edges(&set(&[seg(0, 0, 3, 2)])));
    let bfs = stdout(&run(&["oracle", "bfs", "--start", &start, "--edges", &e]));
    assert!(bfs.starts_with("distance 7\npaths 80\nmultisets 1\n"));
    let q = stdout(&run(&["oracle", "unique-quad", "--edge", "3,2"]));
    assert_eq!(q, "count 1\n(0,0) (2,1) (3,2) (1,1)\n");
    let e2 = s.write("e2.json", &Document::from_edges(&set(&[seg(1, 0, 0, 2)])));
    let e1 = s.write("e1.json", &Document::from_edges(&set(&[seg(0, 0, 2, 1)])));
    let mp = stdout(&run(&["oracle", "min-pair", "--polygon", &poly, "--e", &e1, "--e2", &e2]));
    assert!(mp.starts_with("distance "));

    let big = s.write("big.json", &Document::from_polygon(&rect(5, 4)));
    assert_eq!(run(&["oracle", "enumerate", "--polygon", &big]).status.code(), Some(3));
    let relaxed = bin().args(["oracle", "enumerate", "--polygon", &poly]).env("FAREY_FLIP_GUARD", "8").output().unwrap();
    assert_eq!(relaxed.status.code(), Some(3));
}

#[test]
fn render_is_deterministic() {
    let s = Scratch::new("render");
    let tri = poly_side_two();
    let t = s.write("t.json", &Document::from_triangulation(&tri));
    let (a, b) = (s.path("a.svg"), s.path("b.svg"));
    assert!(run(&["render", "--in", &t, "--out", &a]).status.success());
    assert!(run(&["render", "--in", &t, "--out", &b]).status.success());
    let svg = std::fs::read(&a).unwrap();
    assert_eq!(svg, std::fs::read(&b).unwrap());
    assert_eq!(String::from_utf8(svg).unwrap().matches("class=\"face\"").count(), 4);

    let plan = stdout(&run(&["flip-plan", "--edge", "3,2", "--json"]));
    let pj = s.path("plan.json");
    std::fs::write(&pj, &plan).unwrap();
    let d = s.path("plan.dot");
    assert!(run(&["render", "--in", &pj, "--out", &d]).status.success());
    assert!(std::fs::read_to_string(&d).unwrap().starts_with("digraph plan {"));
    let edges = s.write("e.json", &Document::from_edges(&set(&[seg(0, 0, 1, 1)])));
    assert_eq!(run(&["render", "--in", &edges, "--out", &a]).status.code(), Some(2));
    assert!(!Path::new(&s.path("missing.json")).exists());
    assert_eq!(run(&["render", "--in", &s.path("missing.json"), "--out", &a]).status.code(), Some(2));
}

#[test]
fn library_rendering_is_stable() {
    let t = poly_side_two();
    assert_eq!(render::triangulation_svg(&t), render::triangulation_svg(&t.clone()));
    let p = farey_flip::plan::flip_plan(&common::edge(3, 5)).unwrap();
    assert_eq!(render::plan_svg(&p), render::plan_svg(&p));
    assert_eq!(render::plan_dot(&p), render::plan_dot(&p));
    assert_eq!(render::polygon_svg(t.polygon()).matches("<circle").count(), 6);
}

fn poly_side_two() -> farey_flip::triangulation::Triangulation {
    equilateral_triangulation(&common::poly(&[(0, 0), (2, 0), (0, 2)])).unwrap()
}
