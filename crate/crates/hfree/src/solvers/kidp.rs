//! k-Induced Disjoint Paths on graphs without H1 or without H2 as a subgraph.
//!
//! Both algorithms reduce to plain disjoint paths. Without H1, guessing
//! the neighbours of the terminals and clearing the rest of their
//! neighbourhoods is enough: any edge between two resulting paths would
//! complete an H1. Without H2, the solver repeatedly merges the two ends
//! of a conflict edge until the disjoint-paths answer is induced.

use serde::Serialize;

use super::{Decision, PromiseMode, SolverError};
use crate::certify::{verify_path_system, Certificate, TerminalSpec};
use crate::graph::Graph;
use crate::oracles::paths_search;
use crate::patterns::{contains_subgraph, PatternId};

/// An edge `x1 x2` joining two solution paths, with the path neighbours
/// `z1, x1, z3` and `z2, x2, z4` in path order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConflictSite {
    pub x1: usize,
    pub x2: usize,
    pub z1: usize,
    pub z2: usize,
    pub z3: usize,
    pub z4: usize,
}

impl ConflictSite {
    pub fn site(&self) -> [usize; 6] {
        [self.z1, self.x1, self.z3, self.z2, self.x2, self.z4]
    }
}

/// Which merge shape applied: no edge among the z-vertices, or some.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MergeRule {
    One,
    Two,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Merged {
    pub graph: Graph,
    /// Old vertex to new vertex; `x1` and `x2` both map to the merged vertex.
    pub map: Vec<usize>,
    pub rule: MergeRule,
}

fn check_terminals(g: &Graph, t: &TerminalSpec) -> Result<(), SolverError> {
    if t.is_valid_for(g.n()) {
        Ok(())
    } else {
        Err(SolverError::BadTerminals)
    }
}

/*────────── H1-free ──────────*/

pub fn solve_kidp_h1free(g: &Graph, t: &TerminalSpec, mode: PromiseMode) -> Result<Decision, SolverError> {
    check_terminals(g, t)?;
    if mode == PromiseMode::Verify {
        if let Some(e) = contains_subgraph(g, PatternId::H(1)) {
            return Err(SolverError::PromiseViolation(e));
        }
    }
    let alive = vec![true; g.n()];
    Ok(match h1_search(g, &alive, &t.pairs) {
        Some(paths) => {
            debug_assert!(verify_path_system(g, t, &paths, true));
            Decision::yes_with(Certificate::PathSystem(paths))
        }
        None => Decision::no(),
    })
}

/// Removes `N[set]` from `alive`; `None` when that would swallow one of `keep`.
fn clear_closed(g: &Graph, alive: &[bool], set: &[usize], keep: &[usize]) -> Option<Vec<bool>> {
    let mut out = alive.to_vec();
    for &v in set {
        out[v] = false;
        for &w in g.neighbors(v) {
            out[w] = false;
        }
    }
    keep.iter().all(|&v| out[v]).then_some(out)
}

fn terminals_of(pairs: &[(usize, usize)]) -> Vec<usize> {
    pairs.iter().flat_map(|&(s, t)| [s, t]).collect()
}

fn without(pairs: &[(usize, usize)], i: usize) -> Vec<(usize, usize)> {
    pairs.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &p)| p).collect()
}

fn shortest_path(g: &Graph, alive: &[bool], s: usize, t: usize) -> Option<Vec<usize>> {
    let mut prev = vec![usize::MAX; g.n()];
    prev[s] = s;
    let mut queue = std::collections::VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        if v == t {
            let mut path = vec![t];
            while *path.last().unwrap() != s {
                path.push(prev[*path.last().unwrap()]);
            }
            path.reverse();
            return Some(path);
        }
        for &w in g.neighbors(v) {
            if alive[w] && prev[w] == usize::MAX {
                prev[w] = v;
                queue.push_back(w);
            }
        }
    }
    None
}

/// Paths in the order of `pairs`, inside the `alive` vertices.
fn h1_search(g: &Graph, alive: &[bool], pairs: &[(usize, usize)]) -> Option<Vec<Vec<usize>>> {
    if pairs.is_empty() {
        return Some(Vec::new());
    }
    // An adjacent pair uses its edge; the other paths avoid N[s, t] anyway.
    if let Some(i) = pairs.iter().position(|&(s, t)| g.has_edge(s, t)) {
        let (s, t) = pairs[i];
        let rest = without(pairs, i);
        let alive = clear_closed(g, alive, &[s, t], &terminals_of(&rest))?;
        let mut sol = h1_search(g, &alive, &rest)?;
        sol.insert(i, vec![s, t]);
        return Some(sol);
    }
    for (i, &(s, t)) in pairs.iter().enumerate() {
        for &(a, b) in &pairs[i + 1..] {
            if [s, t].iter().any(|&x| g.has_edge(x, a) || g.has_edge(x, b)) {
                return None;
            }
        }
    }
    if let [(s, t)] = pairs {
        return shortest_path(g, alive, *s, *t).map(|p| vec![p]);
    }

    let terms = terminals_of(pairs);
    let is_terminal = |v: usize| terms.contains(&v);

    // Some path of length two.
    for (i, &(s, t)) in pairs.iter().enumerate() {
        let rest = without(pairs, i);
        let keep = terminals_of(&rest);
        for &m in g.neighbors(s) {
            if !alive[m] || is_terminal(m) || !g.has_edge(m, t) {
                continue;
            }
            let Some(cleared) = clear_closed(g, alive, &[s, m, t], &keep) else { continue };
            if let Some(mut sol) = h1_search(g, &cleared, &rest) {
                sol.insert(i, vec![s, m, t]);
                return Some(sol);
            }
        }
    }

    // Every path has length at least three: guess the terminal neighbours.
    let mut guess = vec![usize::MAX; terms.len()];
    guess_neighbours(g, alive, pairs, &terms, 0, &mut guess)
}

fn guess_neighbours(
    g: &Graph,
    alive: &[bool],
    pairs: &[(usize, usize)],
    terms: &[usize],
    i: usize,
    guess: &mut Vec<usize>,
) -> Option<Vec<Vec<usize>>> {
    if i == terms.len() {
        return solve_guessed(g, alive, pairs, terms, guess);
    }
    for &w in g.neighbors(terms[i]) {
        if !alive[w] || terms.contains(&w) || guess[..i].contains(&w) {
            continue;
        }
        // Fixed vertices of different pairs must stay non-adjacent.
        let pair = i / 2;
        let clash = (0..i).filter(|&j| j / 2 != pair).any(|j| {
            g.has_edge(w, guess[j]) || g.has_edge(w, terms[j]) || g.has_edge(guess[j], terms[i])
        });
        if clash {
            continue;
        }
        guess[i] = w;
        if let Some(sol) = guess_neighbours(g, alive, pairs, terms, i + 1, guess) {
            return Some(sol);
        }
    }
    guess[i] = usize::MAX;
    None
}

fn solve_guessed(
    g: &Graph,
    alive: &[bool],
    pairs: &[(usize, usize)],
    terms: &[usize],
    guess: &[usize],
) -> Option<Vec<Vec<usize>>> {
    let mut keep = alive.to_vec();
    for &v in terms {
        keep[v] = false;
        for &w in g.neighbors(v) {
            if !guess.contains(&w) {
                keep[w] = false;
            }
        }
    }
    let kept: Vec<usize> = (0..g.n()).filter(|&v| keep[v]).collect();
    let (sub, old) = g.induced_subgraph(&kept);
    let mut new = vec![usize::MAX; g.n()];
    for (i, &v) in old.iter().enumerate() {
        new[v] = i;
    }
    let spec = TerminalSpec::new((0..pairs.len()).map(|i| (new[guess[2 * i]], new[guess[2 * i + 1]])).collect());
    let inner = paths_search(&sub, &spec, false)?;
    Some(
        inner
            .into_iter()
            .zip(pairs)
            .map(|(p, &(s, t))| {
                let mut full = vec![s];
                full.extend(p.into_iter().map(|v| old[v]));
                full.push(t);
                full
            })
            .collect(),
    )
}

/*────────── H2-free ──────────*/

/// Longest solution path fixed outright during preprocessing.
const SHORT_PATH: usize = 6;

/// Splits an instance into branches in which every terminal has degree 1
/// and the next two vertices towards its partner have degree 2.
///
/// A branch either fixes a short chordless path for a pair (and drops the
/// pair), or fixes a chordless three-edge prefix from each of its
/// terminals and clears the other neighbours of the first three prefix
/// vertices. An empty list means no branch can succeed.
pub fn preprocess_kidp_h2(g: &Graph, t: &TerminalSpec) -> Result<Vec<(Graph, TerminalSpec)>, SolverError> {
    check_terminals(g, t)?;
    let mut pre = Pre { g, out: Vec::new() };
    let st = PreState { alive: vec![true; g.n()], reserved: vec![false; g.n()], long: Vec::new() };
    pre.pair(&t.pairs, 0, st);
    Ok(pre.out)
}

#[derive(Clone)]
struct PreState {
    alive: Vec<bool>,
    /// Vertices fixed on some prefix, terminals included.
    reserved: Vec<bool>,
    long: Vec<(usize, usize)>,
}

struct Pre<'a> {
    g: &'a Graph,
    out: Vec<(Graph, TerminalSpec)>,
}

impl Pre<'_> {
    fn pair(&mut self, pairs: &[(usize, usize)], i: usize, st: PreState) {
        let g = self.g;
        if i == pairs.len() {
            let kept: Vec<usize> = (0..g.n()).filter(|&v| st.alive[v]).collect();
            let (sub, old) = g.induced_subgraph(&kept);
            let mut new = vec![usize::MAX; g.n()];
            for (j, &v) in old.iter().enumerate() {
                new[v] = j;
            }
            let spec = TerminalSpec::new(st.long.iter().map(|&(s, t)| (new[s], new[t])).collect());
            self.out.push((sub, spec));
            return;
        }
        let (s, t) = pairs[i];
        if !st.alive[s] || !st.alive[t] {
            return;
        }
        let others: Vec<usize> = pairs
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .flat_map(|(_, &(a, b))| [a, b])
            .collect();
        // Pair elimination: the edge is the only path worth taking.
        if g.has_edge(s, t) {
            if let Some(next) = self.fix_path(&st, &[s, t], &others) {
                self.pair(pairs, i + 1, next);
            }
            return;
        }
        // Short chordless paths.
        let mut path = vec![s];
        self.short_paths(pairs, i, &st, &others, &mut path);
        // Long paths: prefixes from both ends.
        let mut from_s = Vec::new();
        prefixes(g, &st, &others, s, &mut vec![s], &mut from_s);
        let mut from_t = Vec::new();
        prefixes(g, &st, &others, t, &mut vec![t], &mut from_t);
        for a in &from_s {
            for b in &from_t {
                if !prefix_pair_ok(g, a, b) {
                    continue;
                }
                let mut next = st.clone();
                for &v in a.iter().chain(b) {
                    next.reserved[v] = true;
                }
                for p in [a, b] {
                    for (j, &v) in p[..3].iter().enumerate() {
                        for &w in g.neighbors(v) {
                            if w != p[j + 1] && (j == 0 || w != p[j - 1]) {
                                next.alive[w] = false;
                            }
                        }
                    }
                }
                next.long.push((s, t));
                self.pair(pairs, i + 1, next);
            }
        }
    }

    fn short_paths(
        &mut self,
        pairs: &[(usize, usize)],
        i: usize,
        st: &PreState,
        others: &[usize],
        path: &mut Vec<usize>,
    ) {
        let g = self.g;
        let (_, t) = pairs[i];
        let last = *path.last().unwrap();
        if last == t {
            if let Some(next) = self.fix_path(st, path, others) {
                self.pair(pairs, i + 1, next);
            }
            return;
        }
        if path.len() > SHORT_PATH {
            return;
        }
        for &w in g.neighbors(last) {
            if !st.alive[w] || path.contains(&w) || (st.reserved[w] && w != t) || others.contains(&w) {
                continue;
            }
            if g.neighbors(w).iter().any(|x| *x != last && path.contains(x)) {
                continue;
            }
            if w == t && path.len() < 2 {
                continue;
            }
            path.push(w);
            self.short_paths(pairs, i, st, others, path);
            path.pop();
        }
    }

    /// Commits `path` for its pair: its closed neighbourhood leaves the graph.
    fn fix_path(&self, st: &PreState, path: &[usize], others: &[usize]) -> Option<PreState> {
        let mut next = st.clone();
        for &v in path {
            for &w in self.g.neighbors(v).iter().chain([&v]) {
                if others.contains(&w) || (st.reserved[w] && !path.contains(&w)) {
                    return None;
                }
                next.alive[w] = false;
            }
        }
        Some(next)
    }
}

/// Chordless three-edge walks from `s` through free, unreserved,
/// non-terminal vertices, none adjacent to a reserved vertex or a terminal
/// of another pair.
fn prefixes(g: &Graph, st: &PreState, others: &[usize], s: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == 4 {
        out.push(cur.clone());
        return;
    }
    let last = *cur.last().unwrap();
    for &w in g.neighbors(last) {
        if !st.alive[w] || st.reserved[w] || others.contains(&w) || cur.contains(&w) || w == s {
            continue;
        }
        if g.neighbors(w).iter().any(|&x| (x != last && cur.contains(&x)) || st.reserved[x] || others.contains(&x)) {
            continue;
        }
        cur.push(w);
        prefixes(g, st, others, s, cur, out);
        cur.pop();
    }
}

/// Prefixes of one pair are disjoint and joined by at most the edge
/// between their far ends.
fn prefix_pair_ok(g: &Graph, a: &[usize], b: &[usize]) -> bool {
    if a.iter().any(|v| b.contains(v)) {
        return false;
    }
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            if g.has_edge(x, y) && !(i == 3 && j == 3) {
                return false;
            }
        }
    }
    true
}

/// First edge between two different paths, scanning paths and their
/// vertices in order. Endpoint conflicts have no site and are skipped.
pub fn find_conflict(g: &Graph, paths: &[Vec<usize>]) -> Option<ConflictSite> {
    let mut owner = vec![(usize::MAX, 0); g.n()];
    for (i, p) in paths.iter().enumerate() {
        for (k, &v) in p.iter().enumerate() {
            owner[v] = (i, k);
        }
    }
    for (i, p) in paths.iter().enumerate() {
        for (k, &x1) in p.iter().enumerate() {
            if k == 0 || k + 1 == p.len() {
                continue;
            }
            for &x2 in g.neighbors(x1) {
                let (j, l) = owner[x2];
                if j == usize::MAX || j == i {
                    continue;
                }
                let q = &paths[j];
                if l == 0 || l + 1 == q.len() {
                    continue;
                }
                return Some(ConflictSite { x1, x2, z1: p[k - 1], z3: p[k + 1], z2: q[l - 1], z4: q[l + 1] });
            }
        }
    }
    None
}

/// Merges `x1` and `x2` into one vertex adjacent to all four z-vertices
/// and to everything else either was adjacent to; z-z edges stay.
pub fn apply_merge_rule(g: &Graph, c: &ConflictSite) -> Result<Merged, SolverError> {
    let site = c.site();
    let mut seen = site.to_vec();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != 6 || site.iter().any(|&v| v >= g.n()) || !g.has_edge(c.x1, c.x2) {
        return Err(SolverError::NotAConflict);
    }
    let path_edges = [(c.z1, c.x1), (c.x1, c.z3), (c.z2, c.x2), (c.x2, c.z4)];
    if path_edges.iter().any(|&(a, b)| !g.has_edge(a, b)) {
        return Err(SolverError::NotAConflict);
    }
    for z in [c.z1, c.z2, c.z3, c.z4] {
        let out = g.neighbors(z).iter().filter(|w| !site.contains(w)).count();
        if out > 1 {
            return Err(SolverError::SiteCondition(out));
        }
    }
    let zs = [c.z1, c.z2, c.z3, c.z4];
    let z_edge = zs.iter().enumerate().any(|(i, &a)| zs[i + 1..].iter().any(|&b| g.has_edge(a, b)));
    let rule = if z_edge { MergeRule::Two } else { MergeRule::One };
    let (graph, map) = g.contract_set(&[c.x1, c.x2]).expect("two-vertex set");
    Ok(Merged { graph, map, rule })
}

fn mutually_induced(g: &Graph, paths: &[Vec<usize>]) -> bool {
    let mut owner = vec![usize::MAX; g.n()];
    for (i, p) in paths.iter().enumerate() {
        for &v in p {
            owner[v] = i;
        }
    }
    g.edges().all(|(u, v)| owner[u] == usize::MAX || owner[v] == usize::MAX || owner[u] == owner[v])
}

pub fn solve_kidp_h2free(g: &Graph, t: &TerminalSpec, mode: PromiseMode) -> Result<Decision, SolverError> {
    check_terminals(g, t)?;
    let verify = mode == PromiseMode::Verify;
    if verify {
        if let Some(e) = contains_subgraph(g, PatternId::H(2)) {
            return Err(SolverError::PromiseViolation(e));
        }
    }
    for (mut cur, mut spec) in preprocess_kidp_h2(g, t)? {
        while let Some(paths) = paths_search(&cur, &spec, false) {
            if mutually_induced(&cur, &paths) {
                return Ok(Decision::yes());
            }
            let site = find_conflict(&cur, &paths)
                .ok_or_else(|| SolverError::CaseExhausted("conflict only at path ends".into()))?;
            let merged = apply_merge_rule(&cur, &site)?;
            spec = TerminalSpec::new(spec.pairs.iter().map(|&(s, e)| (merged.map[s], merged.map[e])).collect());
            cur = merged.graph;
            if verify {
                if let Some(e) = contains_subgraph(&cur, PatternId::H(2)) {
                    return Err(SolverError::FreenessLost(e));
                }
            }
        }
    }
    Ok(Decision::no())
}
