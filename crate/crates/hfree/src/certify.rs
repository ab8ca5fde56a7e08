//! Certificate kinds and their independent verifiers.
//!
//! Verifiers only scan; they never search. Colour values: C5 homomorphisms
//! map into `0..5`, proper and star colourings use `1..=k`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertifyError {
    #[error("colouring covers {got} vertices, graph has {expected}")]
    PartialColouring { expected: usize, got: usize },
}

/// Ordered terminal pairs `(s_i, t_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TerminalSpec {
    pub pairs: Vec<(usize, usize)>,
}

impl TerminalSpec {
    pub fn new(pairs: Vec<(usize, usize)>) -> Self {
        Self { pairs }
    }

    pub fn k(&self) -> usize {
        self.pairs.len()
    }

    pub fn terminals(&self) -> impl Iterator<Item = usize> + '_ {
        self.pairs.iter().flat_map(|&(s, t)| [s, t])
    }

    /// True when all `2k` terminals are distinct vertices below `n`.
    pub fn is_valid_for(&self, n: usize) -> bool {
        let mut seen = vec![false; n];
        for v in self.terminals() {
            if v >= n || seen[v] {
                return false;
            }
            seen[v] = true;
        }
        true
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    Colouring(Vec<usize>),
    HamCycle(Vec<usize>),
    PathSystem(Vec<Vec<usize>>),
    /// Sorted vertex set of an induced cycle.
    Hole(Vec<usize>),
    /// Pattern vertex `i` maps to host vertex `map[i]`.
    Embedding(Vec<usize>),
}

fn check_total(g: &Graph, c: &[usize]) -> Result<(), CertifyError> {
    if c.len() != g.n() {
        return Err(CertifyError::PartialColouring { expected: g.n(), got: c.len() });
    }
    Ok(())
}

fn c5_adjacent(a: usize, b: usize) -> bool {
    a < 5 && b < 5 && ((a + 1) % 5 == b || (b + 1) % 5 == a)
}

pub fn verify_c5_hom(g: &Graph, c: &[usize]) -> Result<bool, CertifyError> {
    check_total(g, c)?;
    Ok(c.iter().all(|&x| x < 5) && g.edges().all(|(u, v)| c5_adjacent(c[u], c[v])))
}

/// Proper colouring with values in `1..=colours`.
pub fn verify_proper_colouring(g: &Graph, c: &[usize], colours: usize) -> Result<bool, CertifyError> {
    check_total(g, c)?;
    Ok(c.iter().all(|&x| (1..=colours).contains(&x)) && g.edges().all(|(u, v)| c[u] != c[v]))
}

/// Proper colouring with no path on four vertices using exactly two colours.
pub fn verify_star_colouring(g: &Graph, c: &[usize], colours: usize) -> Result<bool, CertifyError> {
    if !verify_proper_colouring(g, c, colours)? {
        return Ok(false);
    }
    // Every 3-edge path a-b-d-e with the middle edge b-d.
    for (b, d) in g.edges() {
        for &a in g.neighbors(b) {
            if a == d || c[a] != c[d] {
                continue;
            }
            for &e in g.neighbors(d) {
                if e != b && e != a && c[e] == c[b] {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Distinct colours on every pair at distance one or two.
pub fn verify_injective_distance2(g: &Graph, c: &[usize]) -> Result<bool, CertifyError> {
    check_total(g, c)?;
    for v in 0..g.n() {
        for &w in g.neighbors(v) {
            if c[w] == c[v] {
                return Ok(false);
            }
            for &x in g.neighbors(w) {
                if x != v && c[x] == c[v] {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

pub fn verify_hamilton(g: &Graph, h: &[usize]) -> bool {
    let n = g.n();
    if n < 3 || h.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &v in h {
        if v >= n || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    (0..n).all(|i| g.has_edge(h[i], h[(i + 1) % n]))
}

pub fn verify_path_system(g: &Graph, t: &TerminalSpec, paths: &[Vec<usize>], induced: bool) -> bool {
    if paths.len() != t.k() {
        return false;
    }
    let mut owner = vec![usize::MAX; g.n()];
    for (i, (p, &(s, e))) in paths.iter().zip(&t.pairs).enumerate() {
        if p.first() != Some(&s) || p.last() != Some(&e) {
            return false;
        }
        for &v in p {
            if v >= g.n() || owner[v] != usize::MAX {
                return false;
            }
            owner[v] = i;
        }
        if p.windows(2).any(|w| !g.has_edge(w[0], w[1])) {
            return false;
        }
    }
    if induced {
        for (u, v) in g.edges() {
            if owner[u] != usize::MAX && owner[v] != usize::MAX && owner[u] != owner[v] {
                return false;
            }
        }
    }
    true
}

/// `h` must induce a chordless cycle of length at least four through `x`, `y`.
pub fn verify_hole(g: &Graph, x: usize, y: usize, h: &[usize]) -> bool {
    let k = h.len();
    if k < 4 || h.iter().any(|&v| v >= g.n()) {
        return false;
    }
    let mut inside = vec![false; g.n()];
    for &v in h {
        if inside[v] {
            return false;
        }
        inside[v] = true;
    }
    if !inside[x] || !inside[y] {
        return false;
    }
    // Induced 2-regular and connected means a single chordless cycle.
    let mut edges = 0;
    for &v in h {
        let d = g.neighbors(v).iter().filter(|&&w| inside[w]).count();
        if d != 2 {
            return false;
        }
        edges += d;
    }
    debug_assert_eq!(edges, 2 * k);
    let mut seen = vec![false; g.n()];
    let mut stack = vec![h[0]];
    seen[h[0]] = true;
    let mut reached = 1;
    while let Some(v) = stack.pop() {
        for &w in g.neighbors(v) {
            if inside[w] && !seen[w] {
                seen[w] = true;
                reached += 1;
                stack.push(w);
            }
        }
    }
    reached == k
}

/// Injective map whose image carries every pattern edge.
pub fn verify_embedding(pattern: &Graph, host: &Graph, map: &[usize]) -> bool {
    if map.len() != pattern.n() {
        return false;
    }
    let mut used = vec![false; host.n()];
    for &v in map {
        if v >= host.n() || used[v] {
            return false;
        }
        used[v] = true;
    }
    pattern.edges().all(|(a, b)| host.has_edge(map[a], map[b]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c5_hom_examples() {
        let c10: Vec<usize> = (0..10).map(|i| i % 5).collect();
        assert!(verify_c5_hom(&Graph::cycle(10), &c10).unwrap());
        for c in [[0, 1, 2], [0, 1, 0], [0, 0, 0], [1, 2, 3]] {
            assert!(!verify_c5_hom(&Graph::complete(3), &c).unwrap());
        }
        assert!(verify_c5_hom(&Graph::cycle(5), &[0, 1, 2, 3, 4]).unwrap());
        assert!(verify_c5_hom(&Graph::cycle(5), &[0, 1]).is_err());
    }

    #[test]
    fn star_examples() {
        let p4 = Graph::path(4);
        assert!(!verify_star_colouring(&p4, &[1, 2, 1, 2], 3).unwrap());
        assert!(verify_star_colouring(&p4, &[1, 2, 3, 1], 3).unwrap());
        assert!(!verify_star_colouring(&Graph::cycle(5), &[1, 2, 1, 2, 3], 3).unwrap());
        assert!(verify_star_colouring(&p4, &[1, 2], 3).is_err());
    }

    #[test]
    fn hamilton_examples() {
        assert!(verify_hamilton(&Graph::cycle(4), &[0, 1, 2, 3]));
        assert!(!verify_hamilton(&Graph::cycle(4), &[0, 2, 1, 3]));
        assert!(!verify_hamilton(&Graph::empty(1), &[0]));
    }

    #[test]
    fn hole_examples() {
        assert!(verify_hole(&Graph::cycle(6), 0, 3, &[0, 1, 2, 3, 4, 5]));
        assert!(!verify_hole(&Graph::complete(4), 0, 1, &[0, 1, 2]));
        let chorded = Graph::cycle(4).with_edges_added(&[(0, 2)]);
        assert!(!verify_hole(&chorded, 0, 1, &[0, 1, 2, 3]));
        let two_c4 = Graph::cycle(4).disjoint_union(&Graph::cycle(4));
        assert!(!verify_hole(&two_c4, 0, 4, &[0, 1, 2, 3, 4, 5, 6, 7]));
    }

    #[test]
    fn path_system_disjoint_union() {
        let g = Graph::path(3).disjoint_union(&Graph::path(3));
        let t = TerminalSpec::new(vec![(0, 2), (3, 5)]);
        assert!(verify_path_system(&g, &t, &[vec![0, 1, 2], vec![3, 4, 5]], true));
        assert!(!verify_path_system(&g, &t, &[vec![0, 2], vec![3, 4, 5]], false));
    }

    #[test]
    fn certificate_json_shapes() {
        let c = Certificate::Hole(vec![0, 1, 2, 3]);
        assert_eq!(serde_json::to_string(&c).unwrap(), r#"{"hole":[0,1,2,3]}"#);
    }
}
