//! Star 3-colouring on graphs without any even H-graph as a subgraph.
//!
//! Bipartite inputs are NO exactly when a component holds the A-graph or
//! the theta graph with two 4-vertex and three 6-vertex paths. In general,
//! five or more branch vertices force one of a few small obstructions;
//! with at most four, long threads shrink to a bounded graph that is
//! decided by search.

use std::collections::HashMap;

use super::{Decision, PromiseMode, SolverError};
use crate::graph::{Graph, GraphBuilder};
use crate::oracles::star3_search;
use crate::patterns::{contains_subgraph, find_c4_three_branch, is_family_free, Embedding, Family, PatternId};

/// Threads at least this long shrink to this length plus 0, 1 or 2.
const THREAD_WINDOW: usize = 10;
/// Identical threads beyond this many add nothing.
const MULTIPLICITY_CAP: usize = 729;

const THETA: PatternId = PatternId::Theta { alpha: 2, i: 4, beta: 3, j: 6 };

fn check_even_free(g: &Graph) -> Result<(), SolverError> {
    match is_family_free(g, &Family::h_even()) {
        Some(e) => Err(SolverError::PromiseViolation(e)),
        None => Ok(()),
    }
}

pub fn solve_star3col_bipartite(g: &Graph, mode: PromiseMode) -> Result<Decision, SolverError> {
    if mode == PromiseMode::Verify {
        if !g.is_bipartite() {
            return Err(SolverError::PromiseUnmet("graph is not bipartite"));
        }
        check_even_free(g)?;
    }
    for id in [PatternId::AGraph, THETA] {
        if let Some(e) = contains_subgraph(g, id) {
            return Ok(Decision::no_because(e));
        }
    }
    Ok(Decision::yes())
}

pub fn solve_star3col_general(g: &Graph, mode: PromiseMode) -> Result<Decision, SolverError> {
    if mode == PromiseMode::Verify {
        check_even_free(g)?;
    }
    for comp in g.components() {
        let (h, old) = g.induced_subgraph(&comp);
        let branch = h.branch_vertices().len();
        if branch >= 5 {
            let e = obstruction(&h).ok_or(SolverError::CharacterizationViolation(branch))?;
            let map = e.map.iter().map(|&v| old[v]).collect();
            return Ok(Decision::no_because(Embedding { pattern: e.pattern, map }));
        }
        if star3_search(&compress_threads(&h)).is_none() {
            return Ok(Decision::no());
        }
    }
    Ok(Decision::yes())
}

fn obstruction(g: &Graph) -> Option<Embedding> {
    [PatternId::AGraph, PatternId::C(5), PatternId::Bowtie]
        .into_iter()
        .find_map(|id| contains_subgraph(g, id))
        .or_else(|| find_c4_three_branch(g).map(|c| Embedding { pattern: PatternId::C(4), map: c.to_vec() }))
}

fn shrink(len: usize) -> usize {
    if len < THREAD_WINDOW {
        len
    } else {
        THREAD_WINDOW + (len - THREAD_WINDOW) % 3
    }
}

/// Rebuilds a connected graph with every maximal thread of degree-2
/// vertices shrunk to a bounded length of the same residue mod 3.
fn compress_threads(g: &Graph) -> Graph {
    let n = g.n();
    let anchors: Vec<usize> = (0..n).filter(|&v| g.degree(v) >= 3).collect();
    if anchors.is_empty() {
        // A path or a cycle.
        return if n >= 3 && (0..n).all(|v| g.degree(v) == 2) {
            Graph::cycle(shrink(n))
        } else {
            Graph::path(shrink(n.saturating_sub(1)) + 1)
        };
    }
    let mut index = vec![usize::MAX; n];
    for (i, &a) in anchors.iter().enumerate() {
        index[a] = i;
    }
    let mut b = GraphBuilder::new(anchors.len());
    let mut visited = vec![false; n];
    // (start anchor, end anchor or MAX for a leaf, length) -> copies added.
    let mut copies: HashMap<(usize, usize, usize), usize> = HashMap::new();
    for &a in &anchors {
        for &first in g.neighbors(a) {
            if g.degree(first) >= 3 {
                if a < first {
                    b.add_edge(index[a], index[first]);
                }
                continue;
            }
            if visited[first] {
                continue;
            }
            let (mut prev, mut cur, mut len) = (a, first, 1);
            while g.degree(cur) == 2 {
                visited[cur] = true;
                let next = g.neighbors(cur).iter().copied().find(|&w| w != prev).unwrap();
                prev = cur;
                cur = next;
                len += 1;
            }
            let len = shrink(len);
            let end = if g.degree(cur) >= 3 { index[cur] } else { usize::MAX };
            let key = (index[a].min(end), index[a].max(end), len);
            let count = copies.entry(key).or_default();
            if *count == MULTIPLICITY_CAP {
                continue;
            }
            *count += 1;
            let target = if end == usize::MAX { b.add_vertex() } else { end };
            b.add_path(index[a], target, len);
        }
    }
    b.build()
}
