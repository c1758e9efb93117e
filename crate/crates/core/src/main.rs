use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use farey_flip::error::{Error, ErrorClass, Result};
use farey_flip::farey::farey_plan;
use farey_flip::io::{self, Document};
use farey_flip::lattice::{EdgeClass, EdgeInstance, LatticePoint, Sector, Segment};
use farey_flip::mintri::{mct, min_triangulation};
use farey_flip::oracle::{brute_unique_quad, brute_min_pair, enumerate_triangulations, flip_graph_bfs, Guard, Target};
use farey_flip::plan::{classify_flip, flip_plan, multi_flip_plan, plan_height, FlipKind, FlipPlan};
use farey_flip::planner::{optimize_pair, plan_between};
use farey_flip::render;

#[derive(Parser)]
#[command(name = "farey-flip", version, about = "Minimum flip plans for triangular-lattice triangulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Farey plan of an edge class, e.g. `farey-plan 3,2`.
    FareyPlan {
        #[arg(value_parser = pair)]
        edge_arg: Option<(i64, i64)>,
        #[arg(long, value_parser = pair)]
        edge: Option<(i64, i64)>,
    },
    /// Minimum flip plan for one edge.
    FlipPlan {
        #[arg(long, value_parser = pair)]
        edge: (i64, i64),
        #[arg(long, value_parser = pair, default_value = "0,0")]
        origin: (i64, i64),
        #[arg(long, default_value_t = 0)]
        sector: u8,
        #[command(flatten)]
        out: PlanOutput,
    },
    /// Merged plan for a set of non-crossing edges.
    MultiPlan {
        #[arg(long)]
        edges: PathBuf,
        #[command(flatten)]
        out: PlanOutput,
    },
    /// Minimum triangulation of a polygon under optional constraints.
    MinTri {
        #[arg(long)]
        polygon: PathBuf,
        #[arg(long)]
        constraints: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Minimum triangulation keeping the edges two triangulations share.
    Mct {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Minimum flip plan between two triangulations.
    PlanBetween {
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
        #[command(flatten)]
        out: PlanOutput,
    },
    /// Executes a plan on a triangulation and prints the result.
    Verify {
        #[arg(long)]
        plan: PathBuf,
        #[arg(long)]
        start: PathBuf,
        /// JSON array of node indices.
        #[arg(long)]
        order: Option<PathBuf>,
    },
    /// Moves two triangulations to an optimal pair for two edge sets.
    OptimizePair {
        #[arg(long)]
        u: PathBuf,
        #[arg(long)]
        v: PathBuf,
        #[arg(long)]
        e: PathBuf,
        #[arg(long)]
        e2: PathBuf,
    },
    /// Brute-force references.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
    /// Renders a document to SVG (or DOT for plans with a `.dot` output).
    Render {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Shortest flip paths from a triangulation to a target.
    Bfs {
        #[arg(long)]
        start: PathBuf,
        /// Edges document; the search stops at triangulations containing them.
        #[arg(long, conflicts_with = "target")]
        edges: Option<PathBuf>,
        /// Triangulation document to reach exactly.
        #[arg(long)]
        target: Option<PathBuf>,
    },
    /// Counts all triangulations of a polygon.
    Enumerate {
        #[arg(long)]
        polygon: PathBuf,
        #[arg(long)]
        constraints: Option<PathBuf>,
    },
    /// Lists every flip quadrilateral of an edge.
    UniqueQuad {
        #[arg(long, value_parser = pair)]
        edge: (i64, i64),
        #[arg(long, default_value_t = 0)]
        sector: u8,
    },
    /// Closest pair of triangulations containing two edge sets.
    MinPair {
        #[arg(long)]
        polygon: PathBuf,
        #[arg(long)]
        e: PathBuf,
        #[arg(long)]
        e2: PathBuf,
        #[arg(long)]
        constraints: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct PlanOutput {
    /// Print the plan document.
    #[arg(long, conflicts_with = "dot")]
    json: bool,
    /// Print Graphviz DOT.
    #[arg(long)]
    dot: bool,
    /// Also write an SVG drawing of the DAG.
    #[arg(long)]
    svg: Option<PathBuf>,
}

fn pair(s: &str) -> std::result::Result<(i64, i64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected X,Y, got `{s}`"))?;
    let a = a.trim().parse::<i64>().map_err(|e| e.to_string())?;
    let b = b.trim().parse::<i64>().map_err(|e| e.to_string())?;
    Ok((a, b))
}

fn sector(s: u8) -> Result<Sector> {
    Sector::from_index(s).ok_or_else(|| Error::Parse(format!("sector must be 0, 1 or 2, got {s}")))
}

fn load_edges(path: &Path) -> Result<BTreeSet<Segment>> {
    io::load(path)?.to_edges()
}

fn load_triangulation(path: &Path) -> Result<farey_flip::triangulation::Triangulation> {
    io::load(path)?.to_triangulation()
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn emit_plan(plan: &FlipPlan, out: &PlanOutput) -> Result<()> {
    if let Some(path) = &out.svg {
        write_file(path, &render::plan_svg(plan))?;
    }
    if out.json {
        print!("{}", io::to_text(&Document::from_plan(plan)));
    } else if out.dot {
        print!("{}", render::plan_dot(plan));
    } else {
        let bad = plan.nodes().iter().filter(|f| classify_flip(f) == FlipKind::Bad).count();
        println!("flips {}", plan.len());
        println!("height {}", plan_height(plan));
        println!("bad {bad}");
        for i in plan.topological_order() {
            let kids: Vec<String> = plan.children(i).iter().map(|c| c.to_string()).collect();
            println!("{i}: {} after [{}]", plan.flip(i), kids.join(", "));
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::FareyPlan { edge_arg, edge } => {
            let (x, y) = edge.or(edge_arg).ok_or_else(|| Error::Parse("an edge X,Y is required".into()))?;
            let class = EdgeClass::new(x, y, Sector::S0)?;
            println!("{}", farey_plan(&class)?);
        }
        Command::FlipPlan { edge, origin, sector: s, out } => {
            let class = EdgeClass::new(edge.0, edge.1, sector(s)?)?;
            let e = EdgeInstance::new(LatticePoint::new(origin.0, origin.1), class);
            emit_plan(&flip_plan(&e)?, &out)?;
        }
        Command::MultiPlan { edges, out } => {
            let set: Vec<Segment> = load_edges(&edges)?.into_iter().collect();
            emit_plan(&multi_flip_plan(&set)?, &out)?;
        }
        Command::MinTri { polygon, constraints, svg } => {
            let poly = io::load(&polygon)?.to_polygon()?;
            let cons = match constraints {
                Some(p) => load_edges(&p)?,
                None => BTreeSet::new(),
            };
            let t = min_triangulation(&poly, &cons)?;
            if let Some(path) = svg {
                write_file(&path, &render::triangulation_svg(&t))?;
            }
            print!("{}", io::to_text(&Document::from_triangulation(&t)));
        }
        Command::Mct { a, b } => {
            let t = mct(&load_triangulation(&a)?, &load_triangulation(&b)?)?;
            print!("{}", io::to_text(&Document::from_triangulation(&t)));
        }
        Command::PlanBetween { from, to, out } => {
            let pb = plan_between(&load_triangulation(&from)?, &load_triangulation(&to)?)?;
            let out = PlanOutput { json: out.json || !out.dot, ..out };
            emit_plan(&pb.plan, &out)?;
        }
        Command::Verify { plan, start, order } => {
            let plan = io::load(&plan)?.to_plan()?;
            let start = load_triangulation(&start)?;
            let order: Option<Vec<usize>> = match order {
                Some(p) => {
                    let text = std::fs::read_to_string(&p).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?;
                    Some(serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?)
                }
                None => None,
            };
            let t = start.apply_plan(&plan, order.as_deref())?;
            print!("{}", io::to_text(&Document::from_triangulation(&t)));
        }
        Command::OptimizePair { u, v, e, e2 } => {
            let (u, v) = optimize_pair(&load_triangulation(&u)?, &load_triangulation(&v)?, &load_edges(&e)?, &load_edges(&e2)?)?;
            print!("{}", io::to_text(&Document::from_triangulation(&u)));
            print!("{}", io::to_text(&Document::from_triangulation(&v)));
        }
        Command::Oracle { command } => oracle(command)?,
        Command::Render { input, out } => {
            let doc = io::load(&input)?;
            let dot = out.extension().is_some_and(|x| x == "dot");
            let text = match &doc {
                Document::Plan { .. } if dot => render::plan_dot(&doc.to_plan()?),
                Document::Plan { .. } => render::plan_svg(&doc.to_plan()?),
                Document::Triangulation { .. } => render::triangulation_svg(&doc.to_triangulation()?),
                Document::Polygon { .. } => render::polygon_svg(&doc.to_polygon()?),
                Document::Edges { .. } => return Err(Error::Parse("edge sets have no rendering".into())),
            };
            write_file(&out, &text)?;
        }
    }
    Ok(())
}

fn oracle(command: OracleCommand) -> Result<()> {
    let guard = Guard::from_env();
    match command {
        OracleCommand::Bfs { start, edges, target } => {
            let start = load_triangulation(&start)?;
            let target = match (edges, target) {
                (Some(e), _) => Target::Contains(load_edges(&e)?),
                (None, Some(t)) => Target::Equals(load_triangulation(&t)?),
                (None, None) => return Err(Error::Parse("one of --edges or --target is required".into())),
            };
            let r = flip_graph_bfs(&start, &target, &guard)?;
            println!("distance {}", r.distance);
            println!("paths {}", r.path_count);
            println!("multisets {}", r.multisets.len());
            println!("states {}", r.states_visited);
        }
        OracleCommand::Enumerate { polygon, constraints } => {
            let poly = io::load(&polygon)?.to_polygon()?;
            let cons = match constraints {
                Some(p) => load_edges(&p)?,
                None => BTreeSet::new(),
            };
            println!("count {}", enumerate_triangulations(&poly, &cons, &guard)?.len());
        }
        OracleCommand::UniqueQuad { edge, sector: s } => {
            let e = EdgeInstance::new(LatticePoint::origin(), EdgeClass::new(edge.0, edge.1, sector(s)?)?);
            let quads = brute_unique_quad(&e, &guard)?;
            println!("count {}", quads.len());
            for q in quads {
                println!("{} {} {} {}", q[0], q[1], q[2], q[3]);
            }
        }
        OracleCommand::MinPair { polygon, e, e2, constraints } => {
            let poly = io::load(&polygon)?.to_polygon()?;
            let cons = match constraints {
                Some(p) => load_edges(&p)?,
                None => BTreeSet::new(),
            };
            let r = brute_min_pair(&poly, &cons, &load_edges(&e)?, &load_edges(&e2)?, &guard)?;
            println!("distance {}", r.distance);
            print!("{}", io::to_text(&Document::from_triangulation(&r.first)));
            print!("{}", io::to_text(&Document::from_triangulation(&r.second)));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.class() {
                ErrorClass::Validation => 2,
                ErrorClass::TooLarge => 3,
                ErrorClass::Internal => 4,
            })
        }
    }
}
