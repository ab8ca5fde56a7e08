//! Simple undirected graphs on dense vertex indices `0..n`.
//!
//! Graphs are immutable values. Every edit returns a fresh graph, and edits
//! that drop or merge vertices also return the old-to-new index map.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: malformed line: {text:?}")]
    Malformed { line: usize, text: String },
    #[error("line {line}: vertex {vertex} out of range (n = {n})")]
    OutOfRange { line: usize, vertex: usize, n: usize },
    #[error("line {line}: self-loop on vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("line {line}: duplicate edge {u} {v}")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("expected {expected} edge lines, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error("vertex set is empty")]
    EmptySet,
    #[error("vertex {0} out of range")]
    BadVertex(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<usize>>,
}

/// Mutable edge accumulator; duplicate insertions are ignored.
#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    adj: Vec<BTreeSet<usize>>,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        Self { adj: vec![BTreeSet::new(); n] }
    }

    pub fn from_graph(g: &Graph) -> Self {
        Self { adj: g.adj.iter().map(|a| a.iter().copied().collect()).collect() }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn add_vertex(&mut self) -> usize {
        self.adj.push(BTreeSet::new());
        self.adj.len() - 1
    }

    /// Adds `u v`; loops are ignored. Returns false if the edge was present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        if u == v {
            return false;
        }
        self.adj[v].insert(u);
        self.adj[u].insert(v)
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        self.adj[v].remove(&u);
        self.adj[u].remove(&v)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(&v)
    }

    /// Adds a path of `len` edges from `u` to `v` through `len - 1` fresh
    /// vertices and returns the interior vertices in order.
    pub fn add_path(&mut self, u: usize, v: usize, len: usize) -> Vec<usize> {
        assert!(len >= 1, "path length must be positive");
        let mut prev = u;
        let mut interior = Vec::with_capacity(len - 1);
        for _ in 1..len {
            let w = self.add_vertex();
            self.add_edge(prev, w);
            interior.push(w);
            prev = w;
        }
        self.add_edge(prev, v);
        interior
    }

    pub fn build(self) -> Graph {
        let n = self.adj.len();
        Graph { n, adj: self.adj.into_iter().map(|s| s.into_iter().collect()).collect() }
    }
}

/// Flags reported by [`Graph::structure`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Structure {
    pub is_connected: bool,
    pub is_bipartite: bool,
    pub is_subcubic: bool,
    pub is_two_connected: bool,
    pub branch_vertices: Vec<usize>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Self { n, adj: vec![Vec::new(); n] }
    }

    /// Builds a graph from an edge list; loops and repeats are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut b = GraphBuilder::new(n);
        for (i, &(u, v)) in edges.iter().enumerate() {
            let line = i + 1;
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::OutOfRange { line, vertex: x, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop { line, vertex: u });
            }
            if !b.add_edge(u, v) {
                return Err(GraphError::DuplicateEdge { line, u, v });
            }
        }
        Ok(b.build())
    }

    /// Like [`Graph::from_edges`] but silently simplifies.
    pub fn from_edges_lossy(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut b = GraphBuilder::new(n);
        for &(u, v) in edges {
            b.add_edge(u, v);
        }
        b.build()
    }

    pub fn path(k: usize) -> Self {
        let edges: Vec<_> = (1..k).map(|i| (i - 1, i)).collect();
        Self::from_edges_lossy(k, &edges)
    }

    pub fn cycle(k: usize) -> Self {
        assert!(k >= 3, "cycle needs at least 3 vertices");
        let edges: Vec<_> = (0..k).map(|i| (i, (i + 1) % k)).collect();
        Self::from_edges_lossy(k, &edges)
    }

    pub fn complete(k: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..k {
            for v in u + 1..k {
                edges.push((u, v));
            }
        }
        Self::from_edges_lossy(k, &edges)
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..a {
            for v in 0..b {
                edges.push((u, a + v));
            }
        }
        Self::from_edges_lossy(a + b, &edges)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, a)| a.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        self.edges().collect()
    }

    /*────────── text format ──────────*/

    /// Parses the `n m` header plus `m` lines of `u v`.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut lines = text.split('\n').enumerate().map(|(i, l)| (i + 1, l.trim_end_matches('\r')));
        let (hline, header) = lines
            .by_ref()
            .find(|(_, l)| !l.trim().is_empty())
            .ok_or(GraphError::Malformed { line: 1, text: String::new() })?;
        let (n, m) = parse_pair(header).ok_or_else(|| GraphError::Malformed {
            line: hline,
            text: header.to_string(),
        })?;
        let mut b = GraphBuilder::new(n);
        let mut found = 0;
        for (line, l) in lines {
            if l.trim().is_empty() {
                continue;
            }
            let (u, v) =
                parse_pair(l).ok_or_else(|| GraphError::Malformed { line, text: l.to_string() })?;
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::OutOfRange { line, vertex: x, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop { line, vertex: u });
            }
            if !b.add_edge(u, v) {
                return Err(GraphError::DuplicateEdge { line, u, v });
            }
            found += 1;
        }
        if found != m {
            return Err(GraphError::EdgeCount { expected: m, found });
        }
        Ok(b.build())
    }

    /// Canonical text form; edges sorted lexicographically.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.m());
        for (u, v) in self.edges() {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }

    /*────────── editing ──────────*/

    pub fn with_edges_added(&self, edges: &[(usize, usize)]) -> Self {
        let mut b = GraphBuilder::from_graph(self);
        for &(u, v) in edges {
            b.add_edge(u, v);
        }
        b.build()
    }

    pub fn with_edges_removed(&self, edges: &[(usize, usize)]) -> Self {
        let mut b = GraphBuilder::from_graph(self);
        for &(u, v) in edges {
            b.remove_edge(u, v);
        }
        b.build()
    }

    /// Replaces every edge with a path of `k + 1` edges. Original vertices
    /// keep their indices; fresh vertices follow edge order.
    pub fn k_subdivide(&self, k: usize) -> Self {
        let mut b = GraphBuilder::new(self.n);
        for (u, v) in self.edges() {
            b.add_path(u, v, k + 1);
        }
        b.build()
    }

    /// Removes `del` and re-indexes densely. The map sends old indices to
    /// new ones, `None` for deleted vertices.
    pub fn delete_vertices(&self, del: &[usize]) -> (Self, Vec<Option<usize>>) {
        let mut gone = vec![false; self.n];
        for &v in del {
            gone[v] = true;
        }
        let keep: Vec<usize> = (0..self.n).filter(|&v| !gone[v]).collect();
        let (h, map) = self.induced_subgraph(&keep);
        let mut old_to_new = vec![None; self.n];
        for (new, &old) in map.iter().enumerate() {
            old_to_new[old] = Some(new);
        }
        (h, old_to_new)
    }

    /// Subgraph induced by `keep` (in the given order). Returns the
    /// new-to-old index map.
    pub fn induced_subgraph(&self, keep: &[usize]) -> (Self, Vec<usize>) {
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            pos[v] = i;
        }
        let mut b = GraphBuilder::new(keep.len());
        for (i, &v) in keep.iter().enumerate() {
            for &w in &self.adj[v] {
                if pos[w] != usize::MAX {
                    b.add_edge(i, pos[w]);
                }
            }
        }
        (b.build(), keep.to_vec())
    }

    /// Merges `s` into one vertex placed last; the rest keep their
    /// relative order. Loops vanish and parallel edges merge.
    pub fn contract_set(&self, s: &[usize]) -> Result<(Self, Vec<usize>), GraphError> {
        if s.is_empty() {
            return Err(GraphError::EmptySet);
        }
        let mut inside = vec![false; self.n];
        for &v in s {
            if v >= self.n {
                return Err(GraphError::BadVertex(v));
            }
            inside[v] = true;
        }
        let mut map = vec![0; self.n];
        let mut next = 0;
        for v in 0..self.n {
            if !inside[v] {
                map[v] = next;
                next += 1;
            }
        }
        let merged = next;
        for v in 0..self.n {
            if inside[v] {
                map[v] = merged;
            }
        }
        let mut b = GraphBuilder::new(merged + 1);
        for (u, v) in self.edges() {
            b.add_edge(map[u], map[v]);
        }
        Ok((b.build(), map))
    }

    pub fn disjoint_union(&self, other: &Graph) -> Self {
        let mut b = GraphBuilder::from_graph(self);
        for _ in 0..other.n {
            b.add_vertex();
        }
        for (u, v) in other.edges() {
            b.add_edge(self.n + u, self.n + v);
        }
        b.build()
    }

    /*────────── structure ──────────*/

    pub fn bfs_distances(&self, src: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        dist[src] = Some(0);
        let mut q = VecDeque::from([src]);
        while let Some(v) = q.pop_front() {
            let d = dist[v].unwrap();
            for &w in &self.adj[v] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    q.push_back(w);
                }
            }
        }
        dist
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.components().len() == 1
    }

    /// Two-colouring of the vertices, if one exists.
    pub fn bipartition(&self) -> Option<Vec<u8>> {
        let mut side = vec![u8::MAX; self.n];
        for s in 0..self.n {
            if side[s] != u8::MAX {
                continue;
            }
            side[s] = 0;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &w in &self.adj[v] {
                    if side[w] == u8::MAX {
                        side[w] = 1 - side[v];
                        stack.push(w);
                    } else if side[w] == side[v] {
                        return None;
                    }
                }
            }
        }
        Some(side)
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    pub fn is_subcubic(&self) -> bool {
        self.max_degree() <= 3
    }

    pub fn branch_vertices(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.degree(v) >= 3).collect()
    }

    /// Cut vertices via the low-link recursion (iterative).
    pub fn articulation_points(&self) -> Vec<usize> {
        let n = self.n;
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut cut = vec![false; n];
        let mut time = 0;
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            disc[root] = time;
            low[root] = time;
            time += 1;
            let mut root_children = 0;
            // (vertex, parent, next neighbour position)
            let mut stack = vec![(root, usize::MAX, 0usize)];
            while let Some(top) = stack.last_mut() {
                let (v, parent, i) = *top;
                if i < self.adj[v].len() {
                    top.2 += 1;
                    let w = self.adj[v][i];
                    if disc[w] == usize::MAX {
                        disc[w] = time;
                        low[w] = time;
                        time += 1;
                        if v == root {
                            root_children += 1;
                        }
                        stack.push((w, v, 0));
                    } else if w != parent {
                        low[v] = low[v].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if parent != usize::MAX {
                        low[parent] = low[parent].min(low[v]);
                        if parent != root && low[v] >= disc[parent] {
                            cut[parent] = true;
                        }
                    }
                }
            }
            if root_children >= 2 {
                cut[root] = true;
            }
        }
        (0..n).filter(|&v| cut[v]).collect()
    }

    pub fn is_two_connected(&self) -> bool {
        self.n >= 3 && self.is_connected() && self.articulation_points().is_empty()
    }

    pub fn structure(&self) -> Structure {
        Structure {
            is_connected: self.is_connected(),
            is_bipartite: self.is_bipartite(),
            is_subcubic: self.is_subcubic(),
            is_two_connected: self.is_two_connected(),
            branch_vertices: self.branch_vertices(),
        }
    }

    /// Length of a shortest cycle, `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for s in 0..self.n {
            let mut dist = vec![usize::MAX; self.n];
            let mut parent = vec![usize::MAX; self.n];
            dist[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(v) = q.pop_front() {
                if let Some(b) = best {
                    if 2 * dist[v] + 1 >= b {
                        break;
                    }
                }
                for &w in &self.adj[v] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[v] + 1;
                        parent[w] = v;
                        q.push_back(w);
                    } else if parent[v] != w {
                        let len = dist[v] + dist[w] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }
}

fn parse_pair(line: &str) -> Option<(usize, usize)> {
    let mut it = line.split_whitespace();
    let a = it.next()?.parse().ok()?;
    let b = it.next()?.parse().ok()?;
    if it.next().is_some() {
        return None;
    }
    Some((a, b))
}
