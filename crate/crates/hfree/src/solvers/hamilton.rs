//! Hamilton cycle on graphs without the H-graph as a subgraph.
//!
//! Two adjacent branch vertices u, v always share a neighbour in this
//! class. One shared neighbour forces a bull around the triangle u, v, p;
//! two force a diamond or K4 on u, v, p, q. Each shape either settles the
//! answer or contracts to a strictly smaller equivalent instance.

use super::{Decision, PromiseMode, SolverError};
use crate::graph::Graph;
use crate::oracles::hamilton_dp;
use crate::patterns::{contains_subgraph, PatternId};

/// Case labels visited by one run, in order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HamiltonTrace {
    pub steps: Vec<&'static str>,
    pub contractions: usize,
}

enum Step {
    Done(bool),
    Contract(Vec<usize>),
    Exhausted(String),
}

pub fn solve_hamilton_h1free(g: &Graph, mode: PromiseMode) -> Result<Decision, SolverError> {
    solve_hamilton_h1free_traced(g, mode).0
}

pub fn solve_hamilton_h1free_traced(
    g: &Graph,
    mode: PromiseMode,
) -> (Result<Decision, SolverError>, HamiltonTrace) {
    let mut trace = HamiltonTrace::default();
    if mode == PromiseMode::Verify {
        if let Some(e) = contains_subgraph(g, PatternId::H(1)) {
            return (Err(SolverError::PromiseViolation(e)), trace);
        }
    }
    let mut cur = g.clone();
    loop {
        match step(&cur, &mut trace) {
            Step::Done(yes) => {
                return (Ok(if yes { Decision::yes() } else { Decision::no() }), trace);
            }
            Step::Exhausted(why) => return (Err(SolverError::CaseExhausted(why)), trace),
            Step::Contract(set) => {
                trace.contractions += 1;
                cur = cur.contract_set(&set).expect("contraction set is non-empty").0;
                if mode == PromiseMode::Verify {
                    if let Some(e) = contains_subgraph(&cur, PatternId::H(1)) {
                        return (Err(SolverError::FreenessLost(e)), trace);
                    }
                }
            }
        }
    }
}

fn common(g: &Graph, a: usize, b: usize) -> Vec<usize> {
    g.neighbors(a).iter().copied().filter(|&w| g.has_edge(b, w)).collect()
}

fn outside(g: &Graph, v: usize, zone: &[usize]) -> Vec<usize> {
    g.neighbors(v).iter().copied().filter(|w| !zone.contains(w)).collect()
}

fn step(g: &Graph, trace: &mut HamiltonTrace) -> Step {
    if g.n() < 3 {
        trace.steps.push("too small");
        return Step::Done(false);
    }
    if !g.is_connected() {
        trace.steps.push("disconnected");
        return Step::Done(false);
    }
    if g.max_degree() <= 2 {
        trace.steps.push("max degree two");
        return Step::Done((0..g.n()).all(|v| g.degree(v) == 2));
    }
    if (0..g.n()).any(|v| g.degree(v) <= 1) {
        trace.steps.push("leaf");
        return Step::Done(false);
    }
    let v = (0..g.n()).find(|&v| g.degree(v) > 2).unwrap();
    let Some(u) = g.neighbors(v).iter().copied().find(|&u| g.degree(u) > 2) else {
        trace.steps.push("branch vertex with degree-2 neighbours");
        return Step::Done(false);
    };
    let shared = common(g, u, v);
    match shared.len() {
        0 => Step::Exhausted(format!("branch edge {u}-{v} has no common neighbour")),
        1 => bull(g, u, v, shared[0], trace),
        _ => diamond(g, u, v, &shared, trace),
    }
}

fn bull(g: &Graph, u: usize, v: usize, p: usize, trace: &mut HamiltonTrace) -> Step {
    if g.degree(u) != 3 || g.degree(v) != 3 {
        return Step::Exhausted(format!("triangle {u},{v},{p} with a branch vertex of degree > 3"));
    }
    let q = outside(g, u, &[v, p])[0];
    let s = outside(g, v, &[u, p])[0];
    if g.has_edge(p, q) {
        return diamond(g, u, p, &common(g, u, p), trace);
    }
    if g.has_edge(p, s) {
        return diamond(g, v, p, &common(g, v, p), trace);
    }
    match g.degree(p) {
        2 => {
            trace.steps.push("bull: contract triangle");
            Step::Contract(vec![u, v, p])
        }
        3 => {
            let t = outside(g, p, &[u, v])[0];
            match g.degree(t) {
                1 => {
                    trace.steps.push("bull: leaf beyond apex");
                    return Step::Done(false);
                }
                2 => {}
                _ => return Step::Exhausted(format!("apex neighbour {t} has degree > 2")),
            }
            let zone = [u, v, q, s, t];
            let closed = |w: usize| g.neighbors(w).iter().all(|x| zone.contains(x));
            if closed(q) || closed(s) {
                if g.has_edge(q, s) {
                    trace.steps.push("bull: contract triangle with apex path");
                    Step::Contract(vec![u, v, p, t])
                } else {
                    trace.steps.push("bull: closed pendant without q-s edge");
                    Step::Done(false)
                }
            } else {
                trace.steps.push("bull: three forced exits");
                Step::Done(false)
            }
        }
        _ => Step::Exhausted(format!("apex {p} of degree > 3")),
    }
}

fn diamond(g: &Graph, u: usize, v: usize, shared: &[usize], trace: &mut HamiltonTrace) -> Step {
    if shared.len() >= 3 {
        // Both ends adjacent to all of three shared neighbours; in the class
        // nothing else can attach, so the graph has five vertices.
        let mut zone = vec![u, v];
        zone.extend_from_slice(shared);
        if shared.len() == 3 && zone.iter().all(|&w| outside(g, w, &zone).is_empty()) {
            trace.steps.push("diamond: five-vertex core");
            return Step::Done(hamilton_dp(g).is_some());
        }
        return Step::Exhausted(format!("edge {u}-{v} with {} common neighbours", shared.len()));
    }
    let (p, q) = (shared[0], shared[1]);
    let zone = [u, v, p, q];
    let xu = outside(g, u, &zone);
    let xv = outside(g, v, &zone);
    let xp = outside(g, p, &zone);
    let xq = outside(g, q, &zone);
    match (xu.len(), xv.len()) {
        (0, 0) => match (xp.len(), xq.len()) {
            (0, 0) => {
                trace.steps.push("diamond: whole graph");
                Step::Done(true)
            }
            (0, _) | (_, 0) => {
                trace.steps.push("diamond: single exit");
                Step::Done(false)
            }
            (1, 1) if xp[0] == xq[0] => {
                trace.steps.push("diamond: shared exit");
                Step::Done(g.n() == 5)
            }
            (1, 1) => {
                trace.steps.push("diamond: contract");
                Step::Contract(zone.to_vec())
            }
            _ => Step::Exhausted(format!("diamond side vertex with two exits near {u}-{v}")),
        },
        (1, 0) | (0, 1) => {
            let x = if xu.len() == 1 { xu[0] } else { xv[0] };
            if g.has_edge(x, p) || g.has_edge(x, q) {
                let fits = outside(g, x, &zone).is_empty()
                    && xp.iter().all(|&w| w == x)
                    && xq.iter().all(|&w| w == x);
                if fits {
                    trace.steps.push("diamond: five vertices with extra apex");
                    return Step::Done(true);
                }
                return Step::Exhausted(format!("extra apex {x} has further neighbours"));
            }
            if xp.is_empty() && xq.is_empty() {
                if g.has_edge(p, q) {
                    trace.steps.push("K4: contract");
                    Step::Contract(zone.to_vec())
                } else {
                    trace.steps.push("diamond: private exit");
                    Step::Done(false)
                }
            } else {
                Step::Exhausted(format!("diamond on {u},{v},{p},{q} with exits on both sides"))
            }
        }
        _ => Step::Exhausted(format!("diamond ends {u},{v} both with private neighbours")),
    }
}
