use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use hfree::certify::{
    verify_c5_hom, verify_embedding, verify_hamilton, verify_hole, verify_injective_distance2,
    verify_path_system, verify_proper_colouring, verify_star_colouring, Certificate, TerminalSpec,
};
use hfree::harness::{run_harness, Problem};
use hfree::oracles::Oracle;
use hfree::patterns::{build_pattern, is_family_free, Family, PatternId};
use hfree::reductions::{
    gen_2idp_sat, gen_bipartite_star_gadget, gen_random_free, parse_dimacs, reduce_3col_to_star3col,
    reduce_5col_to_c5col,
};
use hfree::solvers::{PromiseMode, SolverError};
use hfree::Graph;

const YES: u8 = 0;
const NO: u8 = 1;
const FAIL: u8 = 2;

#[derive(Parser)]
#[command(name = "hfree", version, about = "Solvers, gadgets and oracles for H-subgraph-free graphs")]
struct Cli {
    /// Emit one JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Look for a member of a pattern family as a subgraph.
    Detect {
        /// e.g. `H:1`, `H:odd`, `H:1..4`, `H:1mod3,2mod3`, `A,bowtie`
        #[arg(long)]
        family: Family,
        /// Graph file, `-` for stdin.
        graph: PathBuf,
    },
    /// Run a polynomial-time solver.
    Solve {
        problem: Problem,
        graph: PathBuf,
        /// Terminal pairs as `s1,t1;s2,t2`.
        #[arg(long, value_parser = parse_pairs)]
        pairs: Option<TerminalSpec>,
        /// Skip the subgraph-freeness check.
        #[arg(long)]
        trust: bool,
        /// Print the certificate of a YES answer.
        #[arg(long)]
        emit_cert: bool,
    },
    /// Run a brute-force oracle.
    Oracle {
        #[arg(value_parser = ["c5col", "c5-critical", "kcol", "hamilton", "star3", "paths", "hole"])]
        problem: String,
        graph: PathBuf,
        #[command(flatten)]
        extra: Extra,
        /// Allow edges between distinct paths.
        #[arg(long)]
        non_induced: bool,
    },
    /// Check a certificate against a graph.
    Verify {
        #[arg(value_parser = ["c5", "proper", "star", "injective", "hamilton", "paths", "induced-paths", "hole", "embedding"])]
        kind: String,
        graph: PathBuf,
        /// JSON certificate: a tagged object or a bare array.
        cert: PathBuf,
        #[command(flatten)]
        extra: Extra,
        /// Pattern for `embedding`.
        #[arg(long)]
        pattern: Option<PatternId>,
    },
    /// Write a generated graph (and a layout for gadget kinds).
    Generate(Generate),
    /// Compare a solver with its oracle on random instances.
    Harness {
        problem: Problem,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 10)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct Extra {
    #[arg(long, value_parser = parse_pairs)]
    pairs: Option<TerminalSpec>,
    /// Number of colours.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
    k: u64,
    #[arg(long)]
    x: Option<usize>,
    #[arg(long)]
    y: Option<usize>,
}

#[derive(Args)]
struct Generate {
    /// Output graph file; stdout when absent.
    #[arg(short, long, global = true)]
    out: Option<PathBuf>,
    /// Layout JSON file; defaults to `<out>.layout.json` for gadget kinds.
    #[arg(long, global = true)]
    layout: Option<PathBuf>,
    #[command(subcommand)]
    kind: GenKind,
}

#[derive(Subcommand)]
enum GenKind {
    /// Induced 2-disjoint-paths gadget from a 3-CNF.
    #[command(name = "2idp-sat")]
    TwoIdpSat {
        #[arg(long)]
        cnf: PathBuf,
        #[arg(long, default_value_t = 5)]
        ell: usize,
    },
    /// Double subdivision.
    #[command(name = "c5col-from-5col")]
    C5colFrom5col { graph: PathBuf },
    /// Every edge replaced by a K_{2,3}.
    #[command(name = "star3-from-3col")]
    Star3From3col { graph: PathBuf },
    /// Bipartite subcubic gadget of large girth.
    #[command(name = "star3-bip-girth")]
    Star3BipGirth {
        graph: PathBuf,
        #[arg(long, default_value_t = 4)]
        girth: usize,
    },
    /// Replace every edge by a path of `k + 1` edges.
    Subdivide {
        #[arg(long)]
        k: usize,
        graph: PathBuf,
    },
    /// Random graph with every family member removed.
    RandomFree {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.3)]
        p: f64,
        #[arg(long)]
        family: Family,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// A named pattern such as `E3`, `H:2` or `flower:5`.
    Pattern { id: PatternId },
}

fn parse_pairs(s: &str) -> Result<TerminalSpec, String> {
    let mut pairs = Vec::new();
    for p in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (a, b) = p.split_once(',').ok_or_else(|| format!("pair {p:?} is not `s,t`"))?;
        let v = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
        pairs.push((v(a)?, v(b)?));
    }
    if pairs.is_empty() {
        return Err("no terminal pairs".into());
    }
    Ok(TerminalSpec::new(pairs))
}

/// Failure carrying the message to print; always exit code 2.
struct Fail(String);

impl<E: std::fmt::Display> From<E> for Fail {
    fn from(e: E) -> Self {
        Fail(e.to_string())
    }
}

fn read_input(path: &Path) -> Result<String, Fail> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Fail(format!("{}: {e}", path.display())))
    }
}

fn read_graph(path: &Path) -> Result<Graph, Fail> {
    Graph::parse(&read_input(path)?).map_err(|e| Fail(format!("{}: {e}", path.display())))
}

/// What a command reports: exit code, verdict line, extra text lines and
/// the JSON object used in `--json` mode.
struct Report {
    code: u8,
    verdict: String,
    details: Vec<String>,
    json: Value,
}

impl Report {
    fn new(code: u8, verdict: impl Into<String>, json: Value) -> Self {
        Self { code, verdict: verdict.into(), details: Vec::new(), json }
    }

    fn detail(mut self, line: impl Into<String>) -> Self {
        self.details.push(line.into());
        self
    }
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("plain data serializes")
}

fn compact<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data serializes")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(cli.cmd) {
        Ok(r) => r,
        Err(Fail(msg)) => Report::new(FAIL, "ERROR", json!({ "verdict": "ERROR", "error": msg })).detail(msg),
    };
    let mut out = io::stdout().lock();
    let _ = if cli.json {
        writeln!(out, "{}", report.json)
    } else {
        writeln!(out, "{}", report.verdict).and_then(|_| report.details.iter().try_for_each(|d| writeln!(out, "{d}")))
    };
    ExitCode::from(report.code)
}

fn run(cmd: Cmd) -> Result<Report, Fail> {
    match cmd {
        Cmd::Detect { family, graph } => detect(&family, &read_graph(&graph)?),
        Cmd::Solve { problem, graph, pairs, trust, emit_cert } => {
            solve(problem, &read_graph(&graph)?, pairs, trust, emit_cert)
        }
        Cmd::Oracle { problem, graph, extra, non_induced } => {
            oracle(&problem, &read_graph(&graph)?, &extra, !non_induced)
        }
        Cmd::Verify { kind, graph, cert, extra, pattern } => {
            let g = read_graph(&graph)?;
            verify(&kind, &g, &read_input(&cert)?, &extra, pattern)
        }
        Cmd::Generate(gen) => generate(gen),
        Cmd::Harness { problem, trials, size, seed } => harness(problem, trials, size, seed),
    }
}

fn detect(family: &Family, g: &Graph) -> Result<Report, Fail> {
    Ok(match is_family_free(g, family) {
        None => Report::new(YES, "FREE", json!({ "verdict": "FREE" })),
        Some(e) => Report::new(YES, "FOUND", json!({ "verdict": "FOUND", "embedding": to_json(&e) }))
            .detail(format!("pattern {}", e.pattern))
            .detail(format!("map {}", compact(&e.map))),
    })
}

/// Oracle certificate for solvers that only decide.
fn oracle_certificate(problem: Problem, g: &Graph) -> Result<Option<Certificate>, Fail> {
    let o = Oracle::from_env();
    Ok(match problem {
        Problem::C5colH3 => o.c5_colouring(g)?.map(Certificate::Colouring),
        Problem::HamiltonH1 => o.hamilton(g)?.map(Certificate::HamCycle),
        Problem::Star3Bip | Problem::Star3 => o.star3col(g)?.map(Certificate::Colouring),
        _ => None,
    })
}

fn solve(
    problem: Problem,
    g: &Graph,
    pairs: Option<TerminalSpec>,
    trust: bool,
    emit_cert: bool,
) -> Result<Report, Fail> {
    if problem.needs_terminals() && pairs.is_none() {
        return Err(Fail(format!("{problem} needs --pairs")));
    }
    let mode = if trust { PromiseMode::Trust } else { PromiseMode::Verify };
    let d = match problem.solve(g, pairs.as_ref(), mode) {
        Ok(d) => d,
        Err(SolverError::PromiseViolation(e) | SolverError::FreenessLost(e)) => {
            let msg = format!("input contains {}", e.pattern);
            return Ok(Report::new(
                FAIL,
                "PROMISE VIOLATION",
                json!({ "verdict": "PROMISE VIOLATION", "error": msg, "embedding": to_json(&e) }),
            )
            .detail(msg)
            .detail(format!("map {}", compact(&e.map))));
        }
        Err(e @ (SolverError::PromiseUnmet(_) | SolverError::NotSubcubic | SolverError::BadTerminals)) => {
            return Ok(Report::new(
                FAIL,
                "PROMISE VIOLATION",
                json!({ "verdict": "PROMISE VIOLATION", "error": e.to_string() }),
            )
            .detail(e.to_string()));
        }
        Err(e) => return Err(e.into()),
    };
    let verdict = if d.yes { "YES" } else { "NO" };
    let mut json = json!({ "problem": problem.name(), "verdict": verdict });
    let mut r = Report::new(if d.yes { YES } else { NO }, verdict, Value::Null);
    if let Some(w) = &d.witness {
        json["witness"] = to_json(w);
        r = r.detail(format!("witness {} at {}", w.pattern, compact(&w.map)));
    }
    if emit_cert && d.yes {
        let (cert, source) = match d.certificate {
            Some(c) => (Some(c), "solver"),
            None => (oracle_certificate(problem, g)?, "oracle"),
        };
        if let Some(c) = cert {
            r = r.detail(format!("certificate {}", compact(&c)));
            json["certificate"] = to_json(&c);
            json["certificate_source"] = source.into();
        }
    }
    r.json = json;
    Ok(r)
}

fn need_xy(extra: &Extra) -> Result<(usize, usize), Fail> {
    match (extra.x, extra.y) {
        (Some(x), Some(y)) => Ok((x, y)),
        _ => Err(Fail("needs --x and --y".into())),
    }
}

fn need_pairs(extra: &Extra) -> Result<&TerminalSpec, Fail> {
    extra.pairs.as_ref().ok_or_else(|| Fail("needs --pairs".into()))
}

fn oracle(problem: &str, g: &Graph, extra: &Extra, induced: bool) -> Result<Report, Fail> {
    let o = Oracle::from_env();
    let k = extra.k as usize;
    let cert: Option<Certificate> = match problem {
        "c5col" => o.c5_colouring(g)?.map(Certificate::Colouring),
        "c5-critical" => {
            let yes = o.c5_critical(g)?;
            let v = if yes { "YES" } else { "NO" };
            return Ok(Report::new(if yes { YES } else { NO }, v, json!({ "oracle": problem, "verdict": v })));
        }
        "kcol" => o.k_colouring(g, k)?.map(Certificate::Colouring),
        "hamilton" => o.hamilton(g)?.map(Certificate::HamCycle),
        "star3" => o.star3col(g)?.map(Certificate::Colouring),
        "paths" => o.disjoint_paths(g, need_pairs(extra)?, induced)?.map(Certificate::PathSystem),
        "hole" => {
            let (x, y) = need_xy(extra)?;
            if x >= g.n() || y >= g.n() {
                return Err(Fail("--x/--y out of range".into()));
            }
            o.hole_through(g, x, y)?.map(Certificate::Hole)
        }
        other => return Err(Fail(format!("unknown oracle {other}"))),
    };
    Ok(match cert {
        Some(c) => Report::new(YES, "YES", json!({ "oracle": problem, "verdict": "YES", "certificate": to_json(&c) }))
            .detail(format!("certificate {}", compact(&c))),
        None => Report::new(NO, "NO", json!({ "oracle": problem, "verdict": "NO" })),
    })
}

/// Accepts `{"colouring": [...]}`-style objects, bare integer arrays and
/// bare arrays of arrays.
fn parse_cert(text: &str) -> Result<Value, Fail> {
    let v: Value = serde_json::from_str(text)?;
    Ok(match v {
        Value::Object(m) if m.len() == 1 => m.into_iter().next().expect("one entry").1,
        other => other,
    })
}

fn verify(kind: &str, g: &Graph, text: &str, extra: &Extra, pattern: Option<PatternId>) -> Result<Report, Fail> {
    let v = parse_cert(text)?;
    let flat = || serde_json::from_value::<Vec<usize>>(v.clone()).map_err(Fail::from);
    let k = extra.k as usize;
    let ok = match kind {
        "c5" => verify_c5_hom(g, &flat()?)?,
        "proper" => verify_proper_colouring(g, &flat()?, k)?,
        "star" => verify_star_colouring(g, &flat()?, k)?,
        "injective" => verify_injective_distance2(g, &flat()?)?,
        "hamilton" => verify_hamilton(g, &flat()?),
        "paths" | "induced-paths" => {
            let paths: Vec<Vec<usize>> = serde_json::from_value(v.clone())?;
            verify_path_system(g, need_pairs(extra)?, &paths, kind == "induced-paths")
        }
        "hole" => {
            let (x, y) = need_xy(extra)?;
            verify_hole(g, x, y, &flat()?)
        }
        "embedding" => {
            let id = pattern.ok_or_else(|| Fail("needs --pattern".into()))?;
            verify_embedding(&build_pattern(id)?, g, &flat()?)
        }
        other => return Err(Fail(format!("unknown certificate kind {other}"))),
    };
    let verdict = if ok { "VALID" } else { "INVALID" };
    Ok(Report::new(if ok { YES } else { NO }, verdict, json!({ "kind": kind, "verdict": verdict })))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Fail> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Fail(format!("{}: {e}", p.display()))),
        None => Ok(io::stdout().lock().write_all(text.as_bytes())?),
    }
}

fn generate(gen: Generate) -> Result<Report, Fail> {
    let (g, layout): (Graph, Option<Value>) = match gen.kind {
        GenKind::TwoIdpSat { cnf, ell } => {
            let phi = parse_dimacs(&read_input(&cnf)?)?;
            let (g, l) = gen_2idp_sat(&phi, ell)?;
            (g, Some(to_json(&l)))
        }
        GenKind::C5colFrom5col { graph } => (reduce_5col_to_c5col(&read_graph(&graph)?), None),
        GenKind::Star3From3col { graph } => (reduce_3col_to_star3col(&read_graph(&graph)?), None),
        GenKind::Star3BipGirth { graph, girth } => {
            let (g, l) = gen_bipartite_star_gadget(&read_graph(&graph)?, girth)?;
            (g, Some(to_json(&l)))
        }
        GenKind::Subdivide { k, graph } => (read_graph(&graph)?.k_subdivide(k), None),
        GenKind::RandomFree { n, p, family, seed } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(Fail(format!("edge probability {p} outside [0, 1]")));
            }
            (gen_random_free(n, p, &family, seed), None)
        }
        GenKind::Pattern { id } => (build_pattern(id)?, None),
    };
    let layout_path = gen.layout.or_else(|| {
        let out = gen.out.as_ref()?;
        layout.as_ref()?;
        let mut s = out.clone().into_os_string();
        s.push(".layout.json");
        Some(PathBuf::from(s))
    });
    if let (Some(p), Some(l)) = (&layout_path, &layout) {
        let text = serde_json::to_string_pretty(l)? + "\n";
        fs::write(p, text).map_err(|e| Fail(format!("{}: {e}", p.display())))?;
    }
    let summary = format!("{} vertices, {} edges", g.n(), g.m());
    let mut json = json!({ "verdict": "OK", "n": g.n(), "m": g.m() });
    let Some(out) = &gen.out else {
        // Without -o the graph text is the whole text output.
        json["graph"] = g.to_text().into();
        let r = Report::new(YES, g.to_text().trim_end(), json);
        return Ok(r);
    };
    write_out(Some(out), &g.to_text())?;
    json["graph_file"] = out.display().to_string().into();
    let mut r = Report::new(YES, "OK", Value::Null).detail(summary);
    if let Some(p) = layout_path.filter(|_| layout.is_some()) {
        r = r.detail(format!("layout {}", p.display()));
        json["layout_file"] = p.display().to_string().into();
    }
    r.json = json;
    Ok(r)
}

fn harness(problem: Problem, trials: usize, size: usize, seed: u64) -> Result<Report, Fail> {
    let report = run_harness(problem, trials, size, seed, &Oracle::from_env());
    let code = if report.oracle_failed() {
        FAIL
    } else if report.all_agree() {
        YES
    } else {
        NO
    };
    let mut r = Report::new(code, format!("{}/{} agree", report.agree, report.trials), to_json(&report))
        .detail(format!("yes answers {}", report.yes))
        .detail(format!("case exhaustions {}", report.exhausted));
    for f in &report.failures {
        r = r.detail(format!("trial {}: {}", f.trial, compact(&f.outcome))).detail(compact(&f.instance));
    }
    Ok(r)
}
