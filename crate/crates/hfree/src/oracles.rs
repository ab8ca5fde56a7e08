//! Exhaustive reference solvers.
//!
//! All searches take vertices in index order and try values in ascending
//! order, so identical inputs give identical certificates. Instance sizes
//! are capped by [`Bounds`]; `SUITE_ORACLE_BOUND` overrides every cap.

use thiserror::Error;

use crate::certify::TerminalSpec;
use crate::graph::Graph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{what} oracle: {n} vertices exceeds bound {bound}")]
    BoundExceeded { what: &'static str, n: usize, bound: usize },
    #[error("terminals are not distinct vertices of the graph")]
    BadTerminals,
}

/// Hamilton subset tables grow as `2^n`; this cap holds even under the
/// environment override.
pub const HAMILTON_HARD_CAP: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub c5: usize,
    pub star: usize,
    pub hamilton: usize,
    pub paths: usize,
    pub hole: usize,
    pub colouring: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Self { c5: 24, star: 30, hamilton: 20, paths: 20, hole: 24, colouring: 24 }
    }
}

impl Bounds {
    pub fn uniform(b: usize) -> Self {
        Self { c5: b, star: b, hamilton: b.min(HAMILTON_HARD_CAP), paths: b, hole: b, colouring: b }
    }

    /// Defaults, or `SUITE_ORACLE_BOUND` applied to every cap when set.
    pub fn from_env() -> Self {
        std::env::var("SUITE_ORACLE_BOUND")
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&b| b > 0)
            .map_or_else(Self::default, Self::uniform)
    }
}

fn check(what: &'static str, g: &Graph, bound: usize) -> Result<(), OracleError> {
    if g.n() > bound {
        return Err(OracleError::BoundExceeded { what, n: g.n(), bound });
    }
    Ok(())
}

/// Oracle suite with explicit size caps.
#[derive(Clone, Copy, Debug, Default)]
pub struct Oracle {
    pub bounds: Bounds,
}

impl Oracle {
    pub fn new(bounds: Bounds) -> Self {
        Self { bounds }
    }

    pub fn from_env() -> Self {
        Self { bounds: Bounds::from_env() }
    }

    /// A homomorphism to C5 (values `0..5`).
    pub fn c5_colouring(&self, g: &Graph) -> Result<Option<Vec<usize>>, OracleError> {
        check("C5-colouring", g, self.bounds.c5)?;
        Ok(c5_search(g))
    }

    /// Not C5-colourable, while deleting any single edge makes it so.
    pub fn c5_critical(&self, g: &Graph) -> Result<bool, OracleError> {
        check("C5-criticality", g, self.bounds.c5)?;
        if g.n() == 0 || c5_search(g).is_some() || (0..g.n()).any(|v| g.degree(v) == 0) {
            return Ok(false);
        }
        Ok(g.edges().all(|e| c5_search(&g.with_edges_removed(&[e])).is_some()))
    }

    /// A proper colouring with values `1..=k`.
    pub fn k_colouring(&self, g: &Graph, k: usize) -> Result<Option<Vec<usize>>, OracleError> {
        check("k-colouring", g, self.bounds.colouring)?;
        Ok(k_colour_search(g, k))
    }

    /// Hamilton cycle as a vertex order starting at 0.
    pub fn hamilton(&self, g: &Graph) -> Result<Option<Vec<usize>>, OracleError> {
        check("Hamilton", g, self.bounds.hamilton.min(HAMILTON_HARD_CAP))?;
        Ok(hamilton_dp(g))
    }

    /// Star 3-colouring with values `1..=3`.
    pub fn star3col(&self, g: &Graph) -> Result<Option<Vec<usize>>, OracleError> {
        check("star 3-colouring", g, self.bounds.star)?;
        Ok(star3_search(g))
    }

    /// Vertex-disjoint `s_i`-`t_i` paths; with `induced`, also no edge
    /// between distinct paths.
    pub fn disjoint_paths(
        &self,
        g: &Graph,
        t: &TerminalSpec,
        induced: bool,
    ) -> Result<Option<Vec<Vec<usize>>>, OracleError> {
        check("disjoint paths", g, self.bounds.paths)?;
        if !t.is_valid_for(g.n()) {
            return Err(OracleError::BadTerminals);
        }
        Ok(PathSearch::new(g, t, induced).run())
    }

    /// Sorted vertex set of an induced cycle of length >= 4 through `x`, `y`.
    pub fn hole_through(&self, g: &Graph, x: usize, y: usize) -> Result<Option<Vec<usize>>, OracleError> {
        check("hole", g, self.bounds.hole)?;
        Ok(hole_search(g, x, y))
    }
}

pub fn oracle_c5_colouring(g: &Graph) -> Result<Option<Vec<usize>>, OracleError> {
    Oracle::from_env().c5_colouring(g)
}

pub fn oracle_c5_critical(g: &Graph) -> Result<bool, OracleError> {
    Oracle::from_env().c5_critical(g)
}

pub fn oracle_k_colouring(g: &Graph, k: usize) -> Result<Option<Vec<usize>>, OracleError> {
    Oracle::from_env().k_colouring(g, k)
}

pub fn oracle_hamilton(g: &Graph) -> Result<Option<Vec<usize>>, OracleError> {
    Oracle::from_env().hamilton(g)
}

pub fn oracle_star3col(g: &Graph) -> Result<Option<Vec<usize>>, OracleError> {
    Oracle::from_env().star3col(g)
}

pub fn oracle_disjoint_paths(
    g: &Graph,
    t: &TerminalSpec,
    induced: bool,
) -> Result<Option<Vec<Vec<usize>>>, OracleError> {
    Oracle::from_env().disjoint_paths(g, t, induced)
}

pub fn oracle_hole_through(g: &Graph, x: usize, y: usize) -> Result<Option<Vec<usize>>, OracleError> {
    Oracle::from_env().hole_through(g, x, y)
}

/*────────── domain-propagating colouring search ──────────*/

/// Backtracking over bitmask domains. `allowed(c)` gives the values a
/// neighbour may take once a vertex holds `c`.
fn domain_search(g: &Graph, full: u64, allowed: &dyn Fn(usize) -> u64) -> Option<Vec<usize>> {
    fn go(
        g: &Graph,
        v: usize,
        dom: &mut Vec<u64>,
        col: &mut Vec<usize>,
        allowed: &dyn Fn(usize) -> u64,
    ) -> bool {
        if v == g.n() {
            return true;
        }
        let mut options = dom[v];
        while options != 0 {
            let c = options.trailing_zeros() as usize;
            options &= options - 1;
            let mask = allowed(c);
            let saved: Vec<(usize, u64)> = g
                .neighbors(v)
                .iter()
                .filter(|&&w| w > v)
                .map(|&w| (w, dom[w]))
                .collect();
            let mut dead = false;
            for &(w, _) in &saved {
                dom[w] &= mask;
                dead |= dom[w] == 0;
            }
            col[v] = c;
            if !dead && go(g, v + 1, dom, col, allowed) {
                return true;
            }
            for (w, d) in saved {
                dom[w] = d;
            }
        }
        false
    }
    let mut dom = vec![full; g.n()];
    let mut col = vec![0; g.n()];
    go(g, 0, &mut dom, &mut col, allowed).then_some(col)
}

pub(crate) fn c5_search(g: &Graph) -> Option<Vec<usize>> {
    domain_search(g, 0b11111, &|c| (1 << ((c + 1) % 5)) | (1 << ((c + 4) % 5)))
}

pub(crate) fn k_colour_search(g: &Graph, k: usize) -> Option<Vec<usize>> {
    assert!(k <= 63, "at most 63 colours");
    if k == 0 {
        return (g.n() == 0).then(Vec::new);
    }
    let full = (1u64 << k) - 1;
    domain_search(g, full, &|c| full & !(1 << c)).map(|c| c.into_iter().map(|x| x + 1).collect())
}

/*────────── star 3-colouring ──────────*/

/// True if some fully coloured path on four vertices through `v` uses
/// exactly two colours.
fn bichromatic_p4_at(g: &Graph, col: &[u8], v: usize) -> bool {
    let two = |a: usize, b: usize, c: usize, d: usize| {
        col[a] != 0 && col[b] != 0 && col[c] != 0 && col[d] != 0 && col[a] == col[c] && col[b] == col[d]
    };
    for &b in g.neighbors(v) {
        for &c in g.neighbors(b) {
            if c == v {
                continue;
            }
            for &d in g.neighbors(c) {
                if d != b && d != v && two(v, b, c, d) {
                    return true;
                }
            }
        }
    }
    let nv = g.neighbors(v);
    for &a in nv {
        for &c in nv {
            if c == a {
                continue;
            }
            for &d in g.neighbors(c) {
                if d != v && d != a && two(a, v, c, d) {
                    return true;
                }
            }
        }
    }
    false
}

pub(crate) fn star3_search(g: &Graph) -> Option<Vec<usize>> {
    star_search_with(g, 3, &vec![0; g.n()])
}

/// Star colouring with `k` colours extending a partial assignment
/// (`0` = free). Pre-coloured vertices are kept.
pub(crate) fn star_search_with(g: &Graph, k: u8, pre: &[u8]) -> Option<Vec<usize>> {
    fn go(g: &Graph, order: &[usize], i: usize, k: u8, col: &mut Vec<u8>) -> bool {
        let Some(&v) = order.get(i) else { return true };
        for c in 1..=k {
            if g.neighbors(v).iter().any(|&w| col[w] == c) {
                continue;
            }
            col[v] = c;
            if !bichromatic_p4_at(g, col, v) && go(g, order, i + 1, k, col) {
                return true;
            }
        }
        col[v] = 0;
        false
    }
    let mut col = pre.to_vec();
    for v in 0..g.n() {
        if col[v] != 0
            && (g.neighbors(v).iter().any(|&w| col[w] == col[v]) || bichromatic_p4_at(g, &col, v))
        {
            return None;
        }
    }
    let order: Vec<usize> = (0..g.n()).filter(|&v| pre[v] == 0).collect();
    go(g, &order, 0, k, &mut col).then(|| col.into_iter().map(usize::from).collect())
}

/*────────── Hamilton cycle ──────────*/

pub(crate) fn hamilton_dp(g: &Graph) -> Option<Vec<usize>> {
    let n = g.n();
    if n < 3 {
        return None;
    }
    // ends[mask] over masks of vertices 1..n: endpoints v of paths that
    // start at 0 and visit exactly {0} ∪ mask.
    let k = n - 1;
    let adj: Vec<u32> = (1..n)
        .map(|v| g.neighbors(v).iter().filter(|&&w| w != 0).fold(0u32, |m, &w| m | (1 << (w - 1))))
        .collect();
    let mut ends = vec![0u32; 1 << k];
    for &w in g.neighbors(0) {
        ends[1 << (w - 1)] |= 1 << (w - 1);
    }
    for mask in 1usize..(1 << k) {
        let e = ends[mask];
        if e == 0 {
            continue;
        }
        let mut bits = e;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let mut next = adj[v] & !(mask as u32);
            while next != 0 {
                let w = next.trailing_zeros() as usize;
                next &= next - 1;
                ends[mask | (1 << w)] |= 1 << w;
            }
        }
    }
    let full = (1usize << k) - 1;
    let back0 = g.neighbors(0).iter().fold(0u32, |m, &w| m | (1 << (w - 1)));
    let closing = ends[full] & back0;
    if closing == 0 {
        return None;
    }
    let mut v = closing.trailing_zeros() as usize;
    let mut mask = full;
    let mut rev = vec![v + 1];
    while mask != 1 << v {
        let prev_mask = mask & !(1 << v);
        let cands = ends[prev_mask] & adj[v];
        let u = cands.trailing_zeros() as usize;
        rev.push(u + 1);
        mask = prev_mask;
        v = u;
    }
    rev.push(0);
    rev.reverse();
    Some(rev)
}

/*────────── disjoint paths ──────────*/

/// Unbounded path search used as a subroutine by the solvers.
pub(crate) fn paths_search(g: &Graph, t: &TerminalSpec, induced: bool) -> Option<Vec<Vec<usize>>> {
    PathSearch::new(g, t, induced).run()
}

struct PathSearch<'a> {
    g: &'a Graph,
    t: &'a TerminalSpec,
    induced: bool,
    /// Pair index owning each vertex; `usize::MAX` when free.
    owner: Vec<usize>,
    /// Number of path vertices of other pairs adjacent to each vertex,
    /// per pair; only used for the induced variant.
    touch: Vec<Vec<u32>>,
}

impl<'a> PathSearch<'a> {
    fn new(g: &'a Graph, t: &'a TerminalSpec, induced: bool) -> Self {
        let mut owner = vec![usize::MAX; g.n()];
        for (i, &(s, e)) in t.pairs.iter().enumerate() {
            owner[s] = i;
            owner[e] = i;
        }
        let mut s = Self { g, t, induced, owner, touch: vec![vec![0; g.n()]; t.k()] };
        for (i, &(a, b)) in t.pairs.iter().enumerate() {
            s.mark(i, a, 1);
            s.mark(i, b, 1);
        }
        s
    }

    fn mark(&mut self, pair: usize, v: usize, delta: i32) {
        for &w in self.g.neighbors(v) {
            let c = &mut self.touch[pair][w];
            *c = (*c as i32 + delta) as u32;
        }
    }

    /// Whether `w` may sit on the path of `pair`.
    fn usable(&self, pair: usize, w: usize) -> bool {
        if self.owner[w] != usize::MAX && self.owner[w] != pair {
            return false;
        }
        !self.induced || (0..self.t.k()).all(|j| j == pair || self.touch[j][w] == 0)
    }

    fn run(mut self) -> Option<Vec<Vec<usize>>> {
        if self.t.k() == 0 {
            return Some(Vec::new());
        }
        let mut out = Vec::new();
        self.pair(0, &mut out).then_some(out)
    }

    fn pair(&mut self, i: usize, out: &mut Vec<Vec<usize>>) -> bool {
        if i == self.t.k() {
            return true;
        }
        let (s, e) = self.t.pairs[i];
        if self.induced && (!self.usable(i, s) || !self.usable(i, e)) {
            return false;
        }
        let mut path = vec![s];
        let mut on = vec![false; self.g.n()];
        on[s] = true;
        self.extend(i, e, &mut path, &mut on, out)
    }

    fn extend(
        &mut self,
        i: usize,
        target: usize,
        path: &mut Vec<usize>,
        on: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) -> bool {
        let last = *path.last().unwrap();
        if last == target {
            out.push(path.clone());
            if self.pair(i + 1, out) {
                return true;
            }
            out.pop();
            return false;
        }
        let g = self.g;
        for &w in g.neighbors(last) {
            if on[w] || !self.usable(i, w) {
                continue;
            }
            // Only chordless paths: w sees no earlier path vertex but `last`.
            if g.neighbors(w).iter().any(|&x| on[x] && x != last) {
                continue;
            }
            if w != target && self.owner[w] == i {
                continue;
            }
            let fresh = self.owner[w] == usize::MAX;
            if fresh {
                self.owner[w] = i;
                self.mark(i, w, 1);
            }
            on[w] = true;
            path.push(w);
            let done = self.extend(i, target, path, on, out);
            path.pop();
            on[w] = false;
            if fresh {
                self.mark(i, w, -1);
                self.owner[w] = usize::MAX;
            }
            if done {
                return true;
            }
        }
        false
    }
}

/*────────── holes ──────────*/

fn hole_search(g: &Graph, x: usize, y: usize) -> Option<Vec<usize>> {
    fn go(g: &Graph, x: usize, y: usize, path: &mut Vec<usize>, on: &mut Vec<bool>) -> bool {
        let last = *path.last().unwrap();
        for &w in g.neighbors(last) {
            if on[w] {
                continue;
            }
            let sees: Vec<usize> = g.neighbors(w).iter().copied().filter(|&z| on[z] && z != last).collect();
            match sees.as_slice() {
                [] => {
                    on[w] = true;
                    path.push(w);
                    if go(g, x, y, path, on) {
                        return true;
                    }
                    path.pop();
                    on[w] = false;
                }
                [z] if *z == x && path.len() >= 3 && (on[y] || w == y) => {
                    path.push(w);
                    return true;
                }
                _ => {}
            }
        }
        false
    }
    if x >= g.n() || y >= g.n() {
        return None;
    }
    let mut on = vec![false; g.n()];
    on[x] = true;
    let mut path = vec![x];
    if go(g, x, y, &mut path, &mut on) {
        path.sort_unstable();
        return Some(path);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::*;

    fn o() -> Oracle {
        Oracle::default()
    }

    #[test]
    fn c5_examples() {
        assert_eq!(o().c5_colouring(&Graph::cycle(5)).unwrap(), Some(vec![0, 1, 2, 3, 4]));
        assert_eq!(o().c5_colouring(&Graph::complete(3)).unwrap(), None);
        let c7 = o().c5_colouring(&Graph::cycle(7)).unwrap().unwrap();
        assert!(verify_c5_hom(&Graph::cycle(7), &c7).unwrap());
        assert!(o().c5_critical(&Graph::complete(3)).unwrap());
        assert!(!o().c5_critical(&Graph::cycle(5)).unwrap());
        assert!(matches!(o().c5_colouring(&Graph::empty(25)), Err(OracleError::BoundExceeded { .. })));
    }

    #[test]
    fn hamilton_examples() {
        let h = o().hamilton(&Graph::cycle(5)).unwrap().unwrap();
        assert!(verify_hamilton(&Graph::cycle(5), &h));
        assert_eq!(o().hamilton(&Graph::complete_bipartite(1, 3)).unwrap(), None);
        let h = o().hamilton(&Graph::complete(4)).unwrap().unwrap();
        assert!(verify_hamilton(&Graph::complete(4), &h));
        assert_eq!(o().hamilton(&Graph::complete_bipartite(2, 3)).unwrap(), None);
    }

    #[test]
    fn star_examples() {
        let p4 = o().star3col(&Graph::path(4)).unwrap().unwrap();
        assert!(verify_star_colouring(&Graph::path(4), &p4, 3).unwrap());
        assert_eq!(o().star3col(&Graph::cycle(5)).unwrap(), None);
        assert_eq!(o().star3col(&Graph::cycle(4)).unwrap(), Some(vec![1, 2, 1, 3]));
    }

    #[test]
    fn k_colour_examples() {
        assert!(o().k_colouring(&Graph::complete(3), 3).unwrap().is_some());
        assert!(o().k_colouring(&Graph::complete(4), 3).unwrap().is_none());
        assert!(o().k_colouring(&Graph::complete(6), 5).unwrap().is_none());
    }

    #[test]
    fn paths_examples() {
        let g = Graph::path(3).disjoint_union(&Graph::path(3));
        let t = TerminalSpec::new(vec![(0, 2), (3, 5)]);
        assert!(o().disjoint_paths(&g, &t, true).unwrap().is_some());
        let t = TerminalSpec::new(vec![(0, 1)]);
        assert_eq!(o().disjoint_paths(&Graph::path(2), &t, true).unwrap(), Some(vec![vec![0, 1]]));
        let t = TerminalSpec::new(vec![(0, 1), (1, 2)]);
        assert_eq!(o().disjoint_paths(&Graph::path(3), &t, false), Err(OracleError::BadTerminals));
    }

    #[test]
    fn hole_examples() {
        assert_eq!(o().hole_through(&Graph::cycle(6), 0, 3).unwrap(), Some(vec![0, 1, 2, 3, 4, 5]));
        assert_eq!(o().hole_through(&Graph::path(5), 0, 4).unwrap(), None);
        assert_eq!(o().hole_through(&Graph::complete(4), 0, 1).unwrap(), None);
    }
}
