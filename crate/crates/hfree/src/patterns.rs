//! Named pattern graphs and (not necessarily induced) subgraph detection.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certify::verify_embedding;
use crate::graph::{Graph, GraphBuilder};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PatternError {
    #[error("invalid pattern parameters: {0}")]
    InvalidParams(String),
    #[error("cannot parse pattern {0:?}")]
    Syntax(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PatternId {
    /// `H(0)` is the star K_{1,4}; `H(l)` for `l >= 1` is the H-graph with
    /// its middle edge subdivided `l - 1` times.
    H(usize),
    Claw,
    K(usize),
    C(usize),
    Kb(usize, usize),
    Diamond,
    DiamondWithPendant,
    Bull,
    Bowtie,
    /// C4 with pendants on two adjacent cycle vertices.
    AGraph,
    E1,
    E2,
    E3,
    /// C_{3n} plus a centre joined to every third rim vertex.
    Flower(usize),
    /// Path on `i` vertices glued by an end to a C4.
    SquashRacket(usize),
    /// Poles joined by `alpha` paths on `i` vertices and `beta` on `j`.
    Theta { alpha: usize, i: usize, beta: usize, j: usize },
}

/// Pattern vertex `i` lands on host vertex `map[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub pattern: PatternId,
    pub map: Vec<usize>,
}

impl PatternId {
    pub fn build(&self) -> Result<Graph, PatternError> {
        build_pattern(*self)
    }
}

fn invalid(id: PatternId) -> PatternError {
    PatternError::InvalidParams(id.to_string())
}

pub fn build_pattern(id: PatternId) -> Result<Graph, PatternError> {
    use PatternId::*;
    let e = |n: usize, edges: &[(usize, usize)]| Graph::from_edges_lossy(n, edges);
    Ok(match id {
        H(0) => Graph::complete_bipartite(1, 4),
        H(l) => {
            // Middle path 0..=l, leaves l+1, l+2 on 0 and l+3, l+4 on l.
            let mut edges: Vec<_> = (0..l).map(|i| (i, i + 1)).collect();
            edges.extend([(0, l + 1), (0, l + 2), (l, l + 3), (l, l + 4)]);
            e(l + 5, &edges)
        }
        Claw => Graph::complete_bipartite(1, 3),
        K(r) if r >= 1 => Graph::complete(r),
        C(r) if r >= 3 => Graph::cycle(r),
        Kb(a, b) if a + b >= 1 => Graph::complete_bipartite(a, b),
        Diamond => e(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]),
        DiamondWithPendant => e(5, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 4)]),
        Bull => e(5, &[(0, 1), (1, 2), (2, 0), (0, 3), (1, 4)]),
        Bowtie => e(5, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]),
        AGraph => e(6, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (1, 5)]),
        // Five-cycle 0..4, outer path 0-5-6-7-4.
        E1 => e(9, &exceptional(&[(2, 8), (8, 7)])),
        E2 => e(8, &exceptional(&[(2, 6)])),
        E3 => e(8, &exceptional(&[(1, 7)])),
        Flower(n) if n >= 3 => {
            let rim = 3 * n;
            let mut edges: Vec<_> = (0..rim).map(|i| (i, (i + 1) % rim)).collect();
            edges.extend((0..n).map(|i| (3 * i, rim)));
            e(rim + 1, &edges)
        }
        SquashRacket(i) if i >= 1 => {
            let mut edges = vec![(0, 1), (1, 2), (2, 3), (3, 0)];
            let mut prev = 0;
            for v in 4..i + 3 {
                edges.push((prev, v));
                prev = v;
            }
            e(i + 3, &edges)
        }
        Theta { alpha, i, beta, j } => {
            let short = (i == 2) as usize * alpha + (j == 2) as usize * beta;
            if i < 2 || j < 2 || alpha + beta == 0 || short > 1 {
                return Err(invalid(id));
            }
            let mut b = GraphBuilder::new(2);
            for _ in 0..alpha {
                b.add_path(0, 1, i - 1);
            }
            for _ in 0..beta {
                b.add_path(0, 1, j - 1);
            }
            b.build()
        }
        _ => return Err(invalid(id)),
    })
}

fn exceptional(extra: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut edges = vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 5), (5, 6), (6, 7), (7, 4)];
    edges.extend_from_slice(extra);
    edges
}

impl fmt::Display for PatternId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use PatternId::*;
        match *self {
            H(l) => write!(f, "H:{l}"),
            Claw => write!(f, "claw"),
            K(r) => write!(f, "K:{r}"),
            C(r) => write!(f, "C:{r}"),
            Kb(a, b) => write!(f, "Kb:{a},{b}"),
            Diamond => write!(f, "diamond"),
            DiamondWithPendant => write!(f, "diamond-pendant"),
            Bull => write!(f, "bull"),
            Bowtie => write!(f, "bowtie"),
            AGraph => write!(f, "A"),
            E1 => write!(f, "E1"),
            E2 => write!(f, "E2"),
            E3 => write!(f, "E3"),
            Flower(n) => write!(f, "flower:{n}"),
            SquashRacket(i) => write!(f, "racket:{i}"),
            Theta { alpha, i, beta, j } => write!(f, "theta:{alpha}x{i}+{beta}x{j}"),
        }
    }
}

impl FromStr for PatternId {
    type Err = PatternError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        use PatternId::*;
        let bad = || PatternError::Syntax(s.to_string());
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        let s = s.trim();
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        let id = match (head, arg) {
            ("H", Some(a)) => H(num(a)?),
            ("K", Some(a)) => K(num(a)?),
            ("C", Some(a)) => C(num(a)?),
            ("Kb", Some(a)) => {
                let (x, y) = a.split_once(',').ok_or_else(bad)?;
                Kb(num(x)?, num(y)?)
            }
            ("flower", Some(a)) => Flower(num(a)?),
            ("racket", Some(a)) => SquashRacket(num(a)?),
            ("theta", Some(a)) => {
                let (l, r) = a.split_once('+').ok_or_else(bad)?;
                let (alpha, i) = l.split_once('x').ok_or_else(bad)?;
                let (beta, j) = r.split_once('x').ok_or_else(bad)?;
                Theta { alpha: num(alpha)?, i: num(i)?, beta: num(beta)?, j: num(j)? }
            }
            ("claw", None) => Claw,
            ("diamond", None) => Diamond,
            ("diamond-pendant", None) => DiamondWithPendant,
            ("bull", None) => Bull,
            ("bowtie", None) => Bowtie,
            ("A", None) => AGraph,
            ("E1", None) => E1,
            ("E2", None) => E2,
            ("E3", None) => E3,
            _ => return Err(bad()),
        };
        build_pattern(id)?;
        Ok(id)
    }
}

/*────────── subgraph search ──────────*/

/// Backtracking matcher over pattern vertices in a connected,
/// degree-descending order.
struct Matcher<'a> {
    p: &'a Graph,
    h: &'a Graph,
    order: Vec<usize>,
    /// Earlier-placed pattern neighbours of `order[k]`.
    back: Vec<Vec<usize>>,
}

impl<'a> Matcher<'a> {
    fn new(p: &'a Graph, h: &'a Graph, fixed: &[usize]) -> Self {
        let n = p.n();
        let mut placed = vec![false; n];
        let mut order = Vec::with_capacity(n);
        for &v in fixed {
            if !placed[v] {
                placed[v] = true;
                order.push(v);
            }
        }
        while order.len() < n {
            let next = (0..n)
                .filter(|&v| !placed[v])
                .max_by_key(|&v| {
                    let links = p.neighbors(v).iter().filter(|&&w| placed[w]).count();
                    (links, p.degree(v), std::cmp::Reverse(v))
                })
                .unwrap();
            placed[next] = true;
            order.push(next);
        }
        let mut pos = vec![0; n];
        for (k, &v) in order.iter().enumerate() {
            pos[v] = k;
        }
        let back = order
            .iter()
            .enumerate()
            .map(|(k, &v)| p.neighbors(v).iter().copied().filter(|&w| pos[w] < k).collect())
            .collect();
        Self { p, h, order, back }
    }

    fn run(&self, fixed: &[(usize, usize)], visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        let mut map = vec![usize::MAX; self.p.n()];
        let mut used = vec![false; self.h.n()];
        for &(pv, hv) in fixed {
            if hv >= self.h.n() || used[hv] || self.h.degree(hv) < self.p.degree(pv) {
                return false;
            }
            map[pv] = hv;
            used[hv] = true;
        }
        for &(pv, _) in fixed {
            if self.p.neighbors(pv).iter().any(|&w| map[w] != usize::MAX && !self.h.has_edge(map[pv], map[w])) {
                return false;
            }
        }
        self.step(fixed.len(), &mut map, &mut used, visit)
    }

    fn fits(&self, k: usize, hv: usize, map: &[usize], used: &[bool]) -> bool {
        !used[hv]
            && self.h.degree(hv) >= self.p.degree(self.order[k])
            && self.back[k].iter().all(|&w| self.h.has_edge(map[w], hv))
    }

    fn step(
        &self,
        k: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if k == self.order.len() {
            return visit(map);
        }
        let pv = self.order[k];
        let anchor = self.back[k].iter().map(|&w| map[w]).min_by_key(|&hv| self.h.degree(hv));
        let cands: Vec<usize> = match anchor {
            Some(a) => self.h.neighbors(a).to_vec(),
            None => (0..self.h.n()).collect(),
        };
        for hv in cands {
            if !self.fits(k, hv, map, used) {
                continue;
            }
            map[pv] = hv;
            used[hv] = true;
            let stop = self.step(k + 1, map, used, visit);
            used[hv] = false;
            map[pv] = usize::MAX;
            if stop {
                return true;
            }
        }
        false
    }
}

fn quick_reject(p: &Graph, h: &Graph) -> bool {
    p.n() > h.n() || p.m() > h.m() || p.max_degree() > h.max_degree()
}

/// First embedding of `pattern` into `host`, with some pattern vertices
/// optionally pinned to host vertices.
pub fn find_embedding_pinned(pattern: &Graph, host: &Graph, pinned: &[(usize, usize)]) -> Option<Vec<usize>> {
    if quick_reject(pattern, host) {
        return None;
    }
    let fixed: Vec<usize> = pinned.iter().map(|&(p, _)| p).collect();
    let m = Matcher::new(pattern, host, &fixed);
    let mut found = None;
    m.run(pinned, &mut |map| {
        found = Some(map.to_vec());
        true
    });
    debug_assert!(found.as_ref().is_none_or(|f| verify_embedding(pattern, host, f)));
    found
}

pub fn find_embedding(pattern: &Graph, host: &Graph) -> Option<Vec<usize>> {
    find_embedding_pinned(pattern, host, &[])
}

/// Calls `visit` on every embedding until it returns true.
pub fn for_each_embedding(pattern: &Graph, host: &Graph, visit: &mut dyn FnMut(&[usize]) -> bool) {
    if quick_reject(pattern, host) {
        return;
    }
    Matcher::new(pattern, host, &[]).run(&[], visit);
}

pub fn contains_subgraph(g: &Graph, id: PatternId) -> Option<Embedding> {
    let p = build_pattern(id).ok()?;
    let map = find_embedding(&p, g)?;
    assert!(verify_embedding(&p, g, &map), "matcher returned an invalid embedding");
    Some(Embedding { pattern: id, map })
}

/*────────── families ──────────*/

/// One term of a family expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyTerm {
    Fixed(PatternId),
    /// `H(l)` for `lo <= l <= hi`.
    HRange { lo: usize, hi: usize },
    /// `H(l)` for `l >= 1` with `l % modulus == residue`.
    HResidue { residue: usize, modulus: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Family {
    pub terms: Vec<FamilyTerm>,
}

impl Family {
    pub fn of(ids: &[PatternId]) -> Self {
        Self { terms: ids.iter().copied().map(FamilyTerm::Fixed).collect() }
    }

    pub fn h_odd() -> Self {
        Self { terms: vec![FamilyTerm::HResidue { residue: 1, modulus: 2 }] }
    }

    /// `H(2), H(4), ...`
    pub fn h_even() -> Self {
        Self { terms: vec![FamilyTerm::HResidue { residue: 0, modulus: 2 }] }
    }

    /// Members that could possibly embed in a graph on `n` vertices.
    pub fn instantiate(&self, n: usize) -> Vec<PatternId> {
        let top = n.saturating_sub(5);
        let mut out = Vec::new();
        for t in &self.terms {
            match *t {
                FamilyTerm::Fixed(id) => out.push(id),
                FamilyTerm::HRange { lo, hi } if n >= 5 => {
                    out.extend((lo..=hi.min(top)).map(PatternId::H));
                }
                FamilyTerm::HResidue { residue, modulus } if n >= 6 => {
                    out.extend((1..=top).filter(|l| l % modulus == residue % modulus).map(PatternId::H));
                }
                _ => {}
            }
        }
        out.dedup();
        out
    }
}

impl FromStr for Family {
    type Err = PatternError;

    /// Accepts `H:1`, `H:odd`, `H:even`, `H:1..4`, `H:1mod3,2mod3`, named
    /// patterns, and comma-joined lists of these.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PatternError::Syntax(s.to_string());
        let mut raw: Vec<String> = Vec::new();
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let bare_pattern = tok.parse::<PatternId>().is_ok();
            match raw.last_mut() {
                Some(prev) if !tok.contains(':') && !bare_pattern => {
                    if prev.starts_with("Kb:") && !prev.contains(',') {
                        prev.push(',');
                        prev.push_str(tok);
                    } else {
                        let head = prev.split(':').next().unwrap().to_string();
                        raw.push(format!("{head}:{tok}"));
                    }
                }
                _ => raw.push(tok.to_string()),
            }
        }
        if raw.is_empty() {
            return Err(bad());
        }
        let mut terms = Vec::new();
        for tok in raw {
            if let Some(arg) = tok.strip_prefix("H:") {
                let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
                let term = if arg == "odd" {
                    FamilyTerm::HResidue { residue: 1, modulus: 2 }
                } else if arg == "even" {
                    FamilyTerm::HResidue { residue: 0, modulus: 2 }
                } else if let Some((lo, hi)) = arg.split_once("..") {
                    FamilyTerm::HRange { lo: num(lo)?, hi: num(hi)? }
                } else if let Some((r, m)) = arg.split_once("mod") {
                    let modulus = num(m)?;
                    if modulus == 0 {
                        return Err(bad());
                    }
                    FamilyTerm::HResidue { residue: num(r)?, modulus }
                } else {
                    FamilyTerm::Fixed(PatternId::H(num(arg)?))
                };
                terms.push(term);
            } else {
                terms.push(FamilyTerm::Fixed(tok.parse()?));
            }
        }
        Ok(Self { terms })
    }
}

/// `None` when no member embeds, otherwise a witness.
pub fn is_family_free(g: &Graph, family: &Family) -> Option<Embedding> {
    family.instantiate(g.n()).into_iter().find_map(|id| contains_subgraph(g, id))
}

/*────────── special detectors ──────────*/

/// A 4-cycle (in cyclic order) with at least three vertices of degree >= 3.
pub fn find_c4_three_branch(g: &Graph) -> Option<[usize; 4]> {
    for a in 0..g.n() {
        let na = g.neighbors(a);
        for (i, &b) in na.iter().enumerate() {
            for &d in &na[i + 1..] {
                for &c in g.neighbors(b) {
                    if c == a || c == d || !g.has_edge(c, d) {
                        continue;
                    }
                    let branch = [a, b, c, d].iter().filter(|&&v| g.degree(v) >= 3).count();
                    if branch >= 3 {
                        return Some([a, b, c, d]);
                    }
                }
            }
        }
    }
    None
}

/// Neighbours of `centre` joined by an auxiliary edge when some host path
/// of three edges avoiding the centre connects them.
fn petal_graph(g: &Graph, centre: usize) -> Graph {
    let nb = g.neighbors(centre);
    let mut edges = Vec::new();
    for (i, &a) in nb.iter().enumerate() {
        for (j, &b) in nb.iter().enumerate().skip(i + 1) {
            let joined = g.neighbors(a).iter().any(|&x| {
                x != centre
                    && x != b
                    && g.neighbors(x).iter().any(|&y| y != centre && y != a && y != x && g.has_edge(y, b))
            });
            if joined {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges_lossy(nb.len(), &edges)
}

/// Some odd flower `F_n` in `g`, returned as `(centre, n, embedding)`.
///
/// Centres whose petal graph is bipartite are skipped; for the rest each
/// candidate is settled by an explicit embedding search with the centre
/// pinned.
pub fn detect_odd_flower(g: &Graph) -> Option<(usize, usize, Embedding)> {
    let max_n = g.n().saturating_sub(1) / 3;
    for centre in 0..g.n() {
        if g.degree(centre) < 3 {
            continue;
        }
        let aux = petal_graph(g, centre);
        let odd_parts: Vec<Vec<usize>> = aux
            .components()
            .into_iter()
            .filter(|c| !aux.induced_subgraph(c).0.is_bipartite())
            .collect();
        let Some(widest) = odd_parts.iter().map(Vec::len).max() else { continue };
        let mut n = 3;
        while n <= max_n.min(widest) {
            let id = PatternId::Flower(n);
            let p = build_pattern(id).unwrap();
            if let Some(map) = find_embedding_pinned(&p, g, &[(3 * n, centre)]) {
                assert!(verify_embedding(&p, g, &map));
                return Some((centre, n, Embedding { pattern: id, map }));
            }
            n += 2;
        }
    }
    None
}

/// Every component is a path or a subdivided claw.
pub fn is_in_class_s(g: &Graph) -> bool {
    g.components().iter().all(|c| {
        let edges: usize = c.iter().map(|&v| g.degree(v)).sum::<usize>() / 2;
        let tree = edges + 1 == c.len();
        let big = c.iter().filter(|&&v| g.degree(v) >= 3).count();
        tree && c.iter().all(|&v| g.degree(v) <= 3) && big <= 1
    })
}
