use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use upbook_core::book::{is_embedding_preserving, verify_kube, BookEmbedding};
use upbook_core::construct::{hp_complete_long_right, hp_complete_rhombi};
use upbook_core::fpt::{test_2ube_fpt, EmbMode};
use upbook_core::gen::{generate, GenKind};
use upbook_core::graph::{classify_faces, dual_graph, validate_plane_st_graph, Digraph, PlaneStGraph};
use upbook_core::hardness::{reduce_betweenness, BetweennessInstance};
use upbook_core::io::{read_graph, read_ube, write_stg, write_ube, StgFile, UbeFile};
use upbook_core::render::render_arc_diagram;
use upbook_core::solver::{solve_with_stats, Mode, Outcome, DEFAULT_BUDGET};
use upbook_core::special::test_2ube_special_faces;
use upbook_core::Error;

/// Upward book embeddings of st-graphs.
#[derive(Parser)]
#[command(name = "upbook", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Fixed,
    Variable,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    LongRight,
    Rhombi,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    RhombusGrid,
    LongRightPath,
    SeriesParallel,
    RandomPlanarSt,
    ExhaustiveSmall,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check that a graph is an st-graph (and a plane st-graph if embedded).
    Validate { file: PathBuf },
    /// Faces of a plane st-graph with their left and right paths.
    Faces { file: PathBuf },
    /// The dual st-graph.
    Dual { file: PathBuf },
    /// Exact kUBE search.
    Solve {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Variable)]
        mode: ModeArg,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Print a JSON report instead of the bare witness.
        #[arg(long)]
        json: bool,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Check a book embedding against a graph.
    Verify { graph: PathBuf, ube: PathBuf },
    /// HP-completion and 2UBE of a graph with special faces.
    Construct {
        file: PathBuf,
        #[arg(long, value_enum)]
        method: Method,
        /// Write `<prefix>.stg` and `<prefix>.ube`.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Embedding-preserving 2UBE test for generalized triangles and rhombi.
    TestSpecial {
        file: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// 2UBE test over the SPQR-tree.
    #[command(name = "test-2ube")]
    Test2ube {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Variable)]
        mode: ModeArg,
    },
    /// Betweenness instance (JSON) to a kUBE instance.
    Reduce {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long)]
        json: bool,
    },
    /// Generate plane st-graphs.
    Gen {
        #[arg(value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        w: usize,
        #[arg(long, default_value_t = 2)]
        h: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// SVG arc diagram of a book embedding.
    Render {
        graph: PathBuf,
        ube: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

/// Process outcome: yes, no, or budget exhausted.
enum Answer {
    Yes,
    No,
    Unknown,
}

impl From<bool> for Answer {
    fn from(b: bool) -> Self {
        if b {
            Answer::Yes
        } else {
            Answer::No
        }
    }
}

fn read(path: &Path) -> Result<String, Error> {
    Ok(std::fs::read_to_string(path)?)
}

fn load(path: &Path) -> Result<StgFile, Error> {
    read_graph(&read(path)?)
}

fn plane(path: &Path) -> Result<PlaneStGraph, Error> {
    load(path)?.plane()
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) -> Result<(), Error> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn print_json(v: &Value) -> Result<(), Error> {
    emit(&(serde_json::to_string_pretty(v).expect("serializable") + "\n"))
}

fn write_svg(path: &Option<PathBuf>, g: &Digraph, be: &BookEmbedding) -> Result<(), Error> {
    if let Some(p) = path {
        std::fs::write(p, render_arc_diagram(g, be, &[])?)?;
    }
    Ok(())
}

/// Problems of the underlying digraph alone.
fn st_problems(g: &Digraph) -> Vec<String> {
    let mut v = Vec::new();
    if let Some(e) = g.edges.iter().position(|&(a, b)| a >= g.n || b >= g.n) {
        v.push(format!("edge {e} has an endpoint out of range"));
        return v;
    }
    if !g.is_acyclic() {
        v.push("graph has a directed cycle".into());
    }
    let (so, si) = (g.sources(), g.sinks());
    if so.len() != 1 {
        v.push(format!("expected one source, found {}", so.len()));
    }
    if si.len() != 1 {
        v.push(format!("expected one sink, found {}", si.len()));
    }
    v
}

fn run(cmd: Cmd) -> Result<Answer, Error> {
    match cmd {
        Cmd::Validate { file } => {
            let f = load(&file)?;
            let (embedded, violations) = match f.embedded() {
                Ok(e) => (true, validate_plane_st_graph(&e).violations),
                Err(_) => (false, st_problems(&f.digraph())),
            };
            let ok = violations.is_empty();
            print_json(&json!({ "valid": ok, "embedded": embedded, "n": f.n, "m": f.edges.len(), "violations": violations }))?;
            Ok(ok.into())
        }
        Cmd::Faces { file } => {
            let p = plane(&file)?;
            let faces = p.faces();
            print_json(&json!({
                "outer": faces.outer,
                "faces": faces.faces,
                "classification": classify_faces(&p),
            }))?;
            Ok(Answer::Yes)
        }
        Cmd::Dual { file } => {
            let p = plane(&file)?;
            let d = dual_graph(&p);
            let schedule = d.face_schedule();
            print_json(&json!({ "dual": d, "face_schedule": schedule }))?;
            Ok(Answer::Yes)
        }
        Cmd::Solve { file, k, mode, budget, json, svg } => {
            let f = load(&file)?;
            let g = f.digraph();
            let p;
            let m = match mode {
                ModeArg::Variable => Mode::Variable,
                ModeArg::Fixed => {
                    p = f.plane()?;
                    Mode::Fixed(&p)
                }
            };
            let (out, nodes) = solve_with_stats(&g, k, m, budget)?;
            if let Outcome::Found(be) = &out {
                write_svg(&svg, &g, be)?;
            }
            let answer = match &out {
                Outcome::Found(_) => Answer::Yes,
                Outcome::None => Answer::No,
                Outcome::Unknown => Answer::Unknown,
            };
            if json {
                let (a, w) = match &out {
                    Outcome::Found(be) => (json!(true), json!(UbeFile::from(be))),
                    Outcome::None => (json!(false), Value::Null),
                    Outcome::Unknown => (Value::Null, Value::Null),
                };
                print_json(&json!({ "answer": a, "k": k, "nodes": nodes, "witness": w }))?;
            } else {
                match &out {
                    Outcome::Found(be) => emit(&(write_ube(be) + "\n"))?,
                    Outcome::None => eprintln!("no {k}UBE"),
                    Outcome::Unknown => eprintln!("budget of {budget} search nodes exhausted"),
                }
            }
            Ok(answer)
        }
        Cmd::Verify { graph, ube } => {
            let f = load(&graph)?;
            let g = f.digraph();
            let be = read_ube(&read(&ube)?, g.m())?;
            let rep = verify_kube(&g, &be);
            let preserving = match f.plane() {
                Ok(p) if be.k == 2 && rep.valid => json!(is_embedding_preserving(&p, &be)),
                _ => Value::Null,
            };
            print_json(&json!({
                "valid": rep.valid,
                "violation": rep.violation.map(|v| format!("{v:?}")),
                "embedding_preserving": preserving,
            }))?;
            Ok(rep.valid.into())
        }
        Cmd::Construct { file, method, out, svg } => {
            let p = plane(&file)?;
            let c = match method {
                Method::LongRight => hp_complete_long_right(&p)?,
                Method::Rhombi => hp_complete_rhombi(&p)?,
            };
            let be = upbook_core::book::hp_completion_to_2ube(&p.g, &c.completion.gbar, &c.completion.path)?;
            let stg = write_stg(&StgFile::from_plane(&c.completion.gbar));
            if let Some(prefix) = &out {
                std::fs::write(prefix.with_extension("stg"), &stg)?;
                std::fs::write(prefix.with_extension("ube"), write_ube(&be))?;
            }
            write_svg(&svg, &p.g, &be)?;
            print_json(&json!({
                "stg": stg,
                "ube": UbeFile::from(&be),
                "path": c.completion.path,
                "dummies": c.completion.dummies,
                "steps": c.steps,
            }))?;
            Ok(Answer::Yes)
        }
        Cmd::TestSpecial { file, svg } => {
            let p = plane(&file)?;
            let w = test_2ube_special_faces(&p)?;
            if let Some(be) = &w {
                write_svg(&svg, &p.g, be)?;
            }
            print_json(&json!({ "answer": w.is_some(), "witness": w.as_ref().map(UbeFile::from) }))?;
            Ok(w.is_some().into())
        }
        Cmd::Test2ube { file, mode } => {
            let p = plane(&file)?;
            let mode = if mode == ModeArg::Fixed { EmbMode::Fixed } else { EmbMode::Variable };
            let r = test_2ube_fpt(&p, mode)?;
            print_json(&json!(r))?;
            Ok(r.answer.into())
        }
        Cmd::Reduce { file, k, json } => {
            let inst = BetweennessInstance::from_json(&read(&file)?)?;
            let gg = reduce_betweenness(&inst, k)?;
            let stg = write_stg(&StgFile::from_digraph(&gg.graph));
            let roles: Vec<Value> = gg
                .graph
                .edges
                .iter()
                .enumerate()
                .map(|(e, &(u, v))| json!({ "edge": e, "tail": gg.names[u], "head": gg.names[v], "role": gg.roles[e].name() }))
                .collect();
            if json {
                print_json(&json!({ "k": k, "stg": stg, "names": gg.names, "roles": roles }))?;
            } else {
                let mut text = stg;
                text += "# edge tail head role\n";
                for line in upbook_core::hardness::role_lines(&gg).lines() {
                    text += &format!("# {line}\n");
                }
                emit(&text)?;
            }
            Ok(Answer::Yes)
        }
        Cmd::Gen { kind, n, w, h, seed, json } => {
            let kind = match kind {
                Kind::RhombusGrid => GenKind::RhombusGrid { w, h },
                Kind::LongRightPath => GenKind::LongRightPath { n },
                Kind::SeriesParallel => GenKind::SeriesParallel { n },
                Kind::RandomPlanarSt => GenKind::RandomPlanarSt { n },
                Kind::ExhaustiveSmall => GenKind::ExhaustiveSmall { n },
            };
            let graphs: Vec<StgFile> = generate(&kind, seed)?.iter().map(StgFile::from_plane).collect();
            if json {
                print_json(&json!(graphs))?;
            } else {
                let mut text = String::new();
                for (i, f) in graphs.iter().enumerate() {
                    if graphs.len() > 1 {
                        if i > 0 {
                            text.push('\n');
                        }
                        text += &format!("# graph {i}\n");
                    }
                    text += &write_stg(f);
                }
                emit(&text)?;
            }
            Ok(Answer::Yes)
        }
        Cmd::Render { graph, ube, svg } => {
            let g = load(&graph)?.digraph();
            let be = read_ube(&read(&ube)?, g.m())?;
            let doc = render_arc_diagram(&g, &be, &[])?;
            match svg {
                Some(p) => std::fs::write(p, doc)?,
                None => emit(&doc)?,
            }
            Ok(Answer::Yes)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(Answer::Yes) => ExitCode::from(0),
        Ok(Answer::No) => ExitCode::from(1),
        Ok(Answer::Unknown) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
