//! Randomized solver-versus-oracle equivalence runs.
//!
//! Trial `i` of a run with seed `s` draws its instance from its own ChaCha
//! stream, so reports are identical whatever the worker count.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::certify::{verify_injective_distance2, TerminalSpec};
use crate::graph::{Graph, GraphBuilder};
use crate::oracles::{Oracle, OracleError};
use crate::patterns::{is_family_free, Family, PatternId};
use crate::reductions::gen_random_free;
use crate::solvers::{
    greedy_injective_10col, solve_c5col_h3free, solve_hamilton_h1free, solve_kidp_h1free, solve_kidp_h2free,
    solve_star3col_bipartite, solve_star3col_general, Decision, PromiseMode, SolverError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown problem {0:?}")]
pub struct UnknownProblem(pub String);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Problem {
    C5colH3,
    HamiltonH1,
    KidpH1,
    KidpH2,
    Star3Bip,
    Star3,
    Star10Subcubic,
}

impl Problem {
    pub const ALL: [Problem; 7] = [
        Problem::C5colH3,
        Problem::HamiltonH1,
        Problem::KidpH1,
        Problem::KidpH2,
        Problem::Star3Bip,
        Problem::Star3,
        Problem::Star10Subcubic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Problem::C5colH3 => "c5col-h3",
            Problem::HamiltonH1 => "hamilton-h1",
            Problem::KidpH1 => "kidp-h1",
            Problem::KidpH2 => "kidp-h2",
            Problem::Star3Bip => "star3-bip",
            Problem::Star3 => "star3",
            Problem::Star10Subcubic => "star10-subcubic",
        }
    }

    pub fn needs_terminals(self) -> bool {
        matches!(self, Problem::KidpH1 | Problem::KidpH2)
    }

    /// Runs the polynomial algorithm. The injective colouring problem always
    /// answers YES with its colouring as certificate.
    pub fn solve(self, g: &Graph, t: Option<&TerminalSpec>, mode: PromiseMode) -> Result<Decision, SolverError> {
        let t = || t.ok_or(SolverError::BadTerminals);
        match self {
            Problem::C5colH3 => solve_c5col_h3free(g, mode),
            Problem::HamiltonH1 => solve_hamilton_h1free(g, mode),
            Problem::KidpH1 => solve_kidp_h1free(g, t()?, mode),
            Problem::KidpH2 => solve_kidp_h2free(g, t()?, mode),
            Problem::Star3Bip => solve_star3col_bipartite(g, mode),
            Problem::Star3 => solve_star3col_general(g, mode),
            Problem::Star10Subcubic => greedy_injective_10col(g)
                .map(|c| Decision::yes_with(crate::certify::Certificate::Colouring(c))),
        }
    }

    /// Brute-force answer. For the injective colouring problem this is just
    /// "the graph is subcubic".
    pub fn oracle(self, o: &Oracle, g: &Graph, t: Option<&TerminalSpec>) -> Result<bool, OracleError> {
        Ok(match self {
            Problem::C5colH3 => o.c5_colouring(g)?.is_some(),
            Problem::HamiltonH1 => o.hamilton(g)?.is_some(),
            Problem::KidpH1 | Problem::KidpH2 => {
                o.disjoint_paths(g, t.ok_or(OracleError::BadTerminals)?, true)?.is_some()
            }
            Problem::Star3Bip | Problem::Star3 => o.star3col(g)?.is_some(),
            Problem::Star10Subcubic => g.is_subcubic(),
        })
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Problem {
    type Err = UnknownProblem;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Problem::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| UnknownProblem(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Instance {
    /// Graph in the `n m` edge-list text format.
    #[serde(serialize_with = "as_text")]
    pub graph: Graph,
    pub terminals: Option<TerminalSpec>,
}

fn as_text<S: serde::Serializer>(g: &Graph, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&g.to_text())
}

const RETRIES: usize = 64;

fn random_terminals(n: usize, k: usize, rng: &mut ChaCha8Rng) -> TerminalSpec {
    let mut vs: Vec<usize> = (0..n).collect();
    for i in 0..2 * k {
        let j = rng.gen_range(i..n);
        vs.swap(i, j);
    }
    TerminalSpec::new((0..k).map(|i| (vs[2 * i], vs[2 * i + 1])).collect())
}

/// Random subcubic graph: edges proposed at random, kept while both ends
/// still have degree below three.
pub fn random_subcubic(n: usize, rng: &mut ChaCha8Rng) -> Graph {
    let mut b = GraphBuilder::new(n);
    let mut deg = vec![0usize; n];
    if n >= 2 {
        for _ in 0..2 * n {
            let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if u != v && deg[u] < 3 && deg[v] < 3 && b.add_edge(u, v) {
                deg[u] += 1;
                deg[v] += 1;
            }
        }
    }
    b.build()
}

/// A Hamilton cycle on shuffled labels plus random chords, with chords
/// deleted until the graph is `family`-free. Forbidden H-graphs need a
/// vertex of degree three, so every copy uses a chord and the cycle stays.
pub fn planted_cycle(n: usize, p: f64, family: &Family, rng: &mut ChaCha8Rng) -> Graph {
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let mut cycle = GraphBuilder::new(n);
    for i in 0..n {
        cycle.add_edge(order[i], order[(i + 1) % n]);
    }
    let mut b = GraphBuilder::from_graph(&cycle.build());
    let cycle = b.clone().build();
    for u in 0..n {
        for v in u + 1..n {
            if !cycle.has_edge(u, v) && rng.gen_bool(p) {
                b.add_edge(u, v);
            }
        }
    }
    let mut g = b.build();
    while let Some(e) = is_family_free(&g, family) {
        let pattern = e.pattern.build().expect("family members are valid patterns");
        let chord = pattern
            .edges()
            .map(|(a, b)| (e.map[a].min(e.map[b]), e.map[a].max(e.map[b])))
            .filter(|&(a, b)| !cycle.has_edge(a, b))
            .min()
            .expect("every forbidden copy uses a chord");
        g = g.with_edges_removed(&[chord]);
    }
    g
}

/// Draws one promise-satisfying instance with at most `size` vertices.
/// Hamilton instances are connected, bipartite-star instances bipartite,
/// and path instances prefer a connected host.
pub fn sample_instance(problem: Problem, size: usize, rng: &mut ChaCha8Rng) -> Instance {
    let family = match problem {
        Problem::C5colH3 => Family::of(&[PatternId::H(3)]),
        Problem::HamiltonH1 | Problem::KidpH1 => Family::of(&[PatternId::H(1)]),
        Problem::KidpH2 => Family::of(&[PatternId::H(2)]),
        Problem::Star3Bip | Problem::Star3 => Family::h_even(),
        Problem::Star10Subcubic => {
            let n = rng.gen_range(1..=size.max(1));
            return Instance { graph: random_subcubic(n, rng), terminals: None };
        }
    };
    let lo = match problem {
        Problem::KidpH1 | Problem::KidpH2 => 4,
        Problem::HamiltonH1 => 3,
        _ => 1,
    };
    let size = size.max(lo);
    if problem == Problem::HamiltonH1 && rng.gen_bool(0.5) {
        let n = rng.gen_range(lo.max(size / 2)..=size);
        let p = rng.gen_range(0.05..0.4);
        return Instance { graph: planted_cycle(n, p, &family, rng), terminals: None };
    }
    let mut last = None;
    for _ in 0..RETRIES {
        let n = rng.gen_range(lo.max(size / 2)..=size);
        // Sparse hosts give path problems a fair share of YES answers.
        let p = if problem.needs_terminals() { rng.gen_range(0.1..0.35) } else { rng.gen_range(0.15..0.6) };
        let g = gen_random_free(n, p, &family, rng.gen());
        let ok = match problem {
            Problem::HamiltonH1 | Problem::KidpH1 | Problem::KidpH2 => g.is_connected(),
            Problem::Star3Bip => g.is_bipartite(),
            _ => true,
        };
        if ok {
            last = Some(g);
            break;
        }
        if problem == Problem::KidpH1 || problem == Problem::KidpH2 {
            last = Some(g);
        }
    }
    // Paths are H-free, connected and bipartite.
    let graph = last.unwrap_or_else(|| Graph::path(size));
    let terminals = problem.needs_terminals().then(|| {
        // Terminals adjacent across pairs make a trivial NO; redraw a few times.
        let mut t = random_terminals(graph.n(), 2, rng);
        for _ in 0..RETRIES {
            let ((a, b), (c, d)) = (t.pairs[0], t.pairs[1]);
            if ![(a, c), (a, d), (b, c), (b, d)].iter().any(|&(x, y)| graph.has_edge(x, y)) {
                break;
            }
            t = random_terminals(graph.n(), 2, rng);
        }
        t
    });
    Instance { graph, terminals }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Agree { yes: bool },
    Disagree { solver: bool, oracle: bool },
    /// The solver reached a configuration its case analysis does not cover.
    CaseExhausted(String),
    SolverFailed(String),
    OracleFailed(String),
}

/// Solver in verify mode against the oracle; YES certificates are not
/// checked here, only the verdicts.
pub fn run_trial(problem: Problem, inst: &Instance, oracle: &Oracle) -> Outcome {
    let want = match problem.oracle(oracle, &inst.graph, inst.terminals.as_ref()) {
        Ok(w) => w,
        Err(e) => return Outcome::OracleFailed(e.to_string()),
    };
    match problem.solve(&inst.graph, inst.terminals.as_ref(), PromiseMode::Verify) {
        Ok(d) if problem == Problem::Star10Subcubic => {
            let ok = match &d.certificate {
                Some(crate::certify::Certificate::Colouring(c)) => {
                    c.iter().all(|&x| (1..=10).contains(&x))
                        && verify_injective_distance2(&inst.graph, c).unwrap_or(false)
                }
                _ => false,
            };
            if ok == want {
                Outcome::Agree { yes: ok }
            } else {
                Outcome::Disagree { solver: ok, oracle: want }
            }
        }
        Ok(d) if d.yes == want => Outcome::Agree { yes: want },
        Ok(d) => Outcome::Disagree { solver: d.yes, oracle: want },
        Err(e @ SolverError::CaseExhausted(_)) => Outcome::CaseExhausted(e.to_string()),
        Err(e) => Outcome::SolverFailed(e.to_string()),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub trial: usize,
    pub instance: Instance,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, Serialize)]
pub struct HarnessReport {
    pub problem: &'static str,
    pub trials: usize,
    pub agree: usize,
    pub yes: usize,
    /// Trials whose solver hit an unanalysed case.
    pub exhausted: usize,
    pub failures: Vec<Failure>,
}

impl HarnessReport {
    pub fn all_agree(&self) -> bool {
        self.agree == self.trials
    }

    /// True when some failure came from the oracle rather than the solver.
    pub fn oracle_failed(&self) -> bool {
        self.failures.iter().any(|f| matches!(f.outcome, Outcome::OracleFailed(_)))
    }
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Instance for trial `trial` of a run seeded with `seed`.
pub fn trial_instance(problem: Problem, size: usize, seed: u64, trial: usize) -> Instance {
    sample_instance(problem, size, &mut trial_rng(seed, trial))
}

pub fn run_harness(problem: Problem, trials: usize, size: usize, seed: u64, oracle: &Oracle) -> HarnessReport {
    let workers = std::thread::available_parallelism().map_or(1, |w| w.get()).min(trials.max(1));
    let mut results: Vec<Option<(Instance, Outcome)>> = vec![None; trials];
    std::thread::scope(|s| {
        for (w, chunk) in results.chunks_mut(trials.div_ceil(workers).max(1)).enumerate() {
            let base = w * trials.div_ceil(workers).max(1);
            s.spawn(move || {
                for (off, slot) in chunk.iter_mut().enumerate() {
                    let inst = trial_instance(problem, size, seed, base + off);
                    let out = run_trial(problem, &inst, oracle);
                    *slot = Some((inst, out));
                }
            });
        }
    });
    let mut report =
        HarnessReport { problem: problem.name(), trials, agree: 0, yes: 0, exhausted: 0, failures: Vec::new() };
    for (trial, r) in results.into_iter().enumerate() {
        let (instance, outcome) = r.expect("every trial ran");
        match outcome {
            Outcome::Agree { yes } => {
                report.agree += 1;
                report.yes += usize::from(yes);
            }
            _ => {
                report.exhausted += usize::from(matches!(outcome, Outcome::CaseExhausted(_)));
                report.failures.push(Failure { trial, instance, outcome });
            }
        }
    }
    report
}
