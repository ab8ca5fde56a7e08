//! Hardness gadgets, constructive colourings and instance generators.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::certify::verify_star_colouring;
use crate::graph::{Graph, GraphBuilder};
use crate::oracles::{k_colour_search, star_search_with};
use crate::patterns::{build_pattern, is_family_free, Family};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("line {line}: {msg}")]
    Dimacs { line: usize, msg: String },
    #[error("clause {clause} has {width} literals, expected 3")]
    ClauseWidth { clause: usize, width: usize },
    #[error("clause {clause}: variable {var} outside 1..={n}")]
    VariableRange { clause: usize, var: usize, n: usize },
    #[error("path length {0} is below 5")]
    PathLengthTooSmall(usize),
    #[error("assignment does not satisfy the formula")]
    Unsatisfied,
    #[error("assignment covers {got} variables, formula has {n}")]
    AssignmentSize { n: usize, got: usize },
    #[error("subdivision count {0} is below 3")]
    TooFewSubdivisions(usize),
    #[error("vertex {vertex} has degree {degree}, above 4")]
    DegreeTooHigh { vertex: usize, degree: usize },
    #[error("girth target {0} must be even and at least 4")]
    BadGirthTarget(usize),
    #[error("colouring is not a proper 3-colouring of the base graph")]
    ImproperColouring,
    #[error("no star 3-colouring extends the prescribed colours")]
    NoExtension,
}

/*────────── CNF ──────────*/

/// Clauses of exactly three literals; literal `v` or `-v` for variable `v` in `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CnfFormula {
    pub n: usize,
    pub clauses: Vec<[i32; 3]>,
}

/// `values[v - 1]` is the truth value of variable `v`.
pub type Assignment = Vec<bool>;

impl CnfFormula {
    pub fn new(n: usize, clauses: Vec<[i32; 3]>) -> Result<Self, ReductionError> {
        for (i, c) in clauses.iter().enumerate() {
            for &lit in c {
                let var = lit.unsigned_abs() as usize;
                if var == 0 || var > n {
                    return Err(ReductionError::VariableRange { clause: i + 1, var, n });
                }
            }
        }
        Ok(Self { n, clauses })
    }

    pub fn m(&self) -> usize {
        self.clauses.len()
    }

    pub fn literal_true(lit: i32, xi: &[bool]) -> bool {
        xi[lit.unsigned_abs() as usize - 1] == (lit > 0)
    }

    pub fn satisfied_by(&self, xi: &[bool]) -> bool {
        xi.len() == self.n && self.clauses.iter().all(|c| c.iter().any(|&l| Self::literal_true(l, xi)))
    }

    /// First satisfying assignment in binary counting order, if any.
    /// Exhaustive; meant for at most 20 variables.
    pub fn brute_force(&self) -> Option<Assignment> {
        assert!(self.n <= 20, "brute force limited to 20 variables");
        (0u32..1 << self.n)
            .map(|mask| (0..self.n).map(|v| mask >> v & 1 == 1).collect::<Vec<_>>())
            .find(|xi| self.satisfied_by(xi))
    }

    /// Uniform random clauses over `n` variables, deterministic per seed.
    pub fn random(n: usize, m: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let clauses = (0..m)
            .map(|_| {
                std::array::from_fn(|_| {
                    let v = rng.gen_range(1..=n as i32);
                    if rng.gen_bool(0.5) {
                        v
                    } else {
                        -v
                    }
                })
            })
            .collect();
        Self { n, clauses }
    }
}

/// Reads DIMACS `cnf`: `c` comment lines, one `p cnf n m` header, clauses
/// terminated by `0`. Clauses must have exactly three literals.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, ReductionError> {
    let err = |line: usize, msg: &str| ReductionError::Dimacs { line, msg: msg.to_string() };
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut cur: Vec<i32> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('c') {
            continue;
        }
        if s.starts_with('%') {
            break;
        }
        if s.starts_with('p') {
            if header.is_some() {
                return Err(err(line, "second header"));
            }
            let parts: Vec<&str> = s.split_whitespace().collect();
            let [_, "cnf", n, m] = parts[..] else { return Err(err(line, "malformed header")) };
            let n = n.parse().map_err(|_| err(line, "malformed header"))?;
            let m = m.parse().map_err(|_| err(line, "malformed header"))?;
            header = Some((n, m));
            continue;
        }
        let Some((n, _)) = header else { return Err(err(line, "clause before header")) };
        for tok in s.split_whitespace() {
            let lit: i32 = tok.parse().map_err(|_| err(line, "bad literal"))?;
            if lit != 0 {
                cur.push(lit);
                continue;
            }
            let clause = clauses.len() + 1;
            if cur.len() != 3 {
                return Err(ReductionError::ClauseWidth { clause, width: cur.len() });
            }
            for &l in &cur {
                let var = l.unsigned_abs() as usize;
                if var > n {
                    return Err(ReductionError::VariableRange { clause, var, n });
                }
            }
            clauses.push([cur[0], cur[1], cur[2]]);
            cur.clear();
        }
    }
    let Some((n, m)) = header else { return Err(err(0, "missing header")) };
    if !cur.is_empty() {
        return Err(ReductionError::ClauseWidth { clause: clauses.len() + 1, width: cur.len() });
    }
    if clauses.len() != m {
        return Err(err(0, &format!("header announces {m} clauses, found {}", clauses.len())));
    }
    CnfFormula::new(n, clauses)
}

/*────────── induced-cycle gadget ──────────*/

/// A path of fresh vertices between two named vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Thread {
    pub ends: (usize, usize),
    pub interior: Vec<usize>,
    /// Variable route (`P^+_i` or `P^-_i`) the thread belongs to.
    pub route: Option<String>,
}

/// Named vertices of a generated gadget graph, plus every long path
/// between them in allocation order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GadgetLayout {
    pub labels: BTreeMap<String, usize>,
    pub threads: Vec<Thread>,
}

impl GadgetLayout {
    pub fn get(&self, label: &str) -> usize {
        *self.labels.get(label).unwrap_or_else(|| panic!("no vertex labelled {label}"))
    }
}

struct Gen {
    b: GraphBuilder,
    layout: GadgetLayout,
    len: usize,
}

impl Gen {
    fn named(&mut self, label: String) -> usize {
        let v = self.b.add_vertex();
        let old = self.layout.labels.insert(label, v);
        debug_assert!(old.is_none());
        v
    }

    fn v(&self, label: &str) -> usize {
        self.layout.get(label)
    }

    fn thread(&mut self, a: &str, b: &str) {
        self.route_thread(a, b, None);
    }

    fn route_thread(&mut self, a: &str, b: &str, route: Option<String>) {
        let (a, b) = (self.v(a), self.v(b));
        let interior = self.b.add_path(a, b, self.len);
        self.layout.threads.push(Thread { ends: (a, b), interior, route });
    }

    fn edge(&mut self, a: &str, b: &str) {
        let (a, b) = (self.v(a), self.v(b));
        self.b.add_edge(a, b);
    }
}

fn lit_label(side: &str, k: usize, sign: char, j: usize) -> String {
    format!("{side}^{k}{sign}_{j}")
}

/// Variable `i` path vertex label: side `+` or `-`, position `j`.
fn p_label(sign: char, i: usize, j: usize) -> String {
    format!("p^{sign}_{i},{j}")
}

/// Builds the induced-cycle instance for `phi`: a subcubic graph with two
/// degree-2 vertices `x`, `y` lying on a common hole exactly when `phi` is
/// satisfiable. Every long connection is a path with `len` edges.
pub fn gen_2idp_sat(phi: &CnfFormula, len: usize) -> Result<(Graph, GadgetLayout), ReductionError> {
    if len < 5 {
        return Err(ReductionError::PathLengthTooSmall(len));
    }
    let m = phi.m();
    let lits: Vec<i32> = phi.clauses.iter().flatten().copied().collect();
    let mut g = Gen { b: GraphBuilder::new(0), layout: GadgetLayout::default(), len };

    // Literal gadgets.
    for j in 1..=3 * m {
        for side in ["alpha", "beta"] {
            g.named(format!("{side}_{j}"));
            g.named(format!("{side}'_{j}"));
            for sign in ['+', '-'] {
                for k in 1..=4 {
                    g.named(lit_label(side, k, sign, j));
                }
            }
        }
        for side in ["alpha", "beta"] {
            for sign in ['+', '-'] {
                for k in 1..=3 {
                    g.thread(&lit_label(side, k, sign, j), &lit_label(side, k + 1, sign, j));
                }
            }
        }
        for k in [1, 4] {
            g.edge(&lit_label("alpha", k, '+', j), &lit_label("beta", k, '-', j));
            g.edge(&lit_label("alpha", k, '-', j), &lit_label("beta", k, '+', j));
        }
        for side in ["alpha", "beta"] {
            for sign in ['+', '-'] {
                g.edge(&format!("{side}_{j}"), &lit_label(side, 1, sign, j));
                g.edge(&lit_label(side, 4, sign, j), &format!("{side}'_{j}"));
            }
        }
    }

    // Clause gadgets.
    for i in 1..=m {
        for s in ["1+", "2+", "3+", "1-", "2-", "3-", "0+", "12+", "0-", "12-"] {
            g.named(format!("c^{s}_{i}"));
        }
        for (a, b) in [
            ("12+", "1+"),
            ("12+", "2+"),
            ("12-", "1-"),
            ("12-", "2-"),
            ("0+", "12+"),
            ("0+", "3+"),
            ("0-", "12-"),
            ("0-", "3-"),
        ] {
            g.thread(&format!("c^{a}_{i}"), &format!("c^{b}_{i}"));
        }
    }

    // Variable gadgets: P+ carries the negative occurrences, P- the positive.
    for i in 1..=phi.n {
        let d_plus = format!("d^+_{i}");
        let d_minus = format!("d^-_{i}");
        g.named(d_plus.clone());
        g.named(d_minus.clone());
        for (sign, lit) in [('+', -(i as i32)), ('-', i as i32)] {
            let occ: Vec<usize> = (0..lits.len()).filter(|&k| lits[k] == lit).map(|k| k + 1).collect();
            let mut chain = vec![d_plus.clone()];
            for j in 1..=2 * occ.len() {
                let l = p_label(sign, i, j);
                g.named(l.clone());
                chain.push(l);
            }
            chain.push(d_minus.clone());
            for (t, w) in chain.windows(2).enumerate() {
                // Between p_{2j-1} and p_{2j} the route detours through a literal.
                if t % 2 == 0 {
                    g.route_thread(&w[0], &w[1], Some(format!("P^{sign}_{i}")));
                }
            }
            for (j, &y) in occ.iter().enumerate() {
                let (first, second) = (p_label(sign, i, 2 * j + 1), p_label(sign, i, 2 * j + 2));
                for side in ["alpha", "beta"] {
                    g.edge(&first, &lit_label(side, 2, '+', y));
                    g.edge(&second, &lit_label(side, 3, '+', y));
                }
            }
        }
    }

    // Clause interfaces.
    for i in 1..=m {
        for j in 1..=3 {
            let y = 3 * (i - 1) + j;
            for side in ["alpha", "beta"] {
                g.edge(&lit_label(side, 2, '-', y), &format!("c^{j}+_{i}"));
                g.edge(&lit_label(side, 3, '-', y), &format!("c^{j}-_{i}"));
            }
        }
    }

    // Chains between consecutive gadgets, then the two ends.
    for j in 1..3 * m {
        g.thread(&format!("alpha'_{j}"), &format!("alpha_{}", j + 1));
        g.thread(&format!("beta'_{j}"), &format!("beta_{}", j + 1));
    }
    for j in 1..m {
        g.thread(&format!("c^0-_{j}"), &format!("c^0+_{}", j + 1));
    }
    for i in 1..phi.n {
        g.thread(&format!("d^-_{i}"), &format!("d^+_{}", i + 1));
    }
    if m > 0 {
        g.thread(&format!("alpha'_{}", 3 * m), "d^+_1");
        g.thread(&format!("beta'_{}", 3 * m), "c^0+_1");
        g.named("x".into());
        g.named("y".into());
        g.thread("x", "alpha_1");
        g.thread("x", "beta_1");
        g.thread("y", &format!("c^0-_{m}"));
        g.thread("y", &format!("d^-_{}", phi.n));
    } else {
        g.named("x".into());
        g.named("y".into());
    }
    let Gen { b, layout, .. } = g;
    Ok((b.build(), layout))
}

/// Vertex set (sorted) of the hole through `x` and `y` read off a
/// satisfying assignment.
pub fn build_hole_certificate(
    phi: &CnfFormula,
    xi: &[bool],
    g: &Graph,
    layout: &GadgetLayout,
) -> Result<Vec<usize>, ReductionError> {
    if xi.len() != phi.n {
        return Err(ReductionError::AssignmentSize { n: phi.n, got: xi.len() });
    }
    if !phi.satisfied_by(xi) {
        return Err(ReductionError::Unsatisfied);
    }
    let lits: Vec<i32> = phi.clauses.iter().flatten().copied().collect();
    let mut pick = vec![false; g.n()];
    let mut take = |label: &str| pick[layout.get(label)] = true;
    take("x");
    take("y");
    for (k, &lit) in lits.iter().enumerate() {
        let j = k + 1;
        let sign = if CnfFormula::literal_true(lit, xi) { '+' } else { '-' };
        for side in ["alpha", "beta"] {
            take(&format!("{side}_{j}"));
            take(&format!("{side}'_{j}"));
            for s in 1..=4 {
                take(&lit_label(side, s, sign, j));
            }
        }
    }
    for i in 1..=phi.n {
        // True variables route along P+, past the occurrences of the
        // negated literal, which are false.
        let (sign, lit) = if xi[i - 1] { ('+', -(i as i32)) } else { ('-', i as i32) };
        take(&format!("d^+_{i}"));
        take(&format!("d^-_{i}"));
        let occ: Vec<usize> = (0..lits.len()).filter(|&k| lits[k] == lit).map(|k| k + 1).collect();
        for (j, &y) in occ.iter().enumerate() {
            take(&p_label(sign, i, 2 * j + 1));
            take(&p_label(sign, i, 2 * j + 2));
            take(&lit_label("alpha", 2, '+', y));
            take(&lit_label("alpha", 3, '+', y));
        }
    }
    for i in 1..=phi.m() {
        take(&format!("c^0+_{i}"));
        take(&format!("c^0-_{i}"));
        let r = (1..=3).find(|&r| CnfFormula::literal_true(lits[3 * (i - 1) + r - 1], xi)).unwrap();
        let y = 3 * (i - 1) + r;
        take(&lit_label("alpha", 2, '-', y));
        take(&lit_label("alpha", 3, '-', y));
        if r < 3 {
            take(&format!("c^12+_{i}"));
            take(&format!("c^12-_{i}"));
        }
        take(&format!("c^{r}+_{i}"));
        take(&format!("c^{r}-_{i}"));
    }
    // A variable with no occurrence on one side has a bare thread from
    // d+ to d- there; only the chosen route's threads join the hole.
    let routes: Vec<String> =
        (1..=phi.n).map(|i| format!("P^{}_{i}", if xi[i - 1] { '+' } else { '-' })).collect();
    for t in &layout.threads {
        let on_route = t.route.as_ref().is_none_or(|r| routes.contains(r));
        if on_route && pick[t.ends.0] && pick[t.ends.1] {
            for &v in &t.interior {
                pick[v] = true;
            }
        }
    }
    Ok((0..g.n()).filter(|&v| pick[v]).collect())
}

/*────────── colouring reductions ──────────*/

/// Subdivides every edge twice: the result maps to C5 exactly when `g`
/// is 5-colourable.
pub fn reduce_5col_to_c5col(g: &Graph) -> Graph {
    g.k_subdivide(2)
}

/// Replaces every edge `uv` by three fresh common neighbours of `u` and
/// `v`. Original vertices keep their indices; the new ones follow edge order.
pub fn reduce_3col_to_star3col(g: &Graph) -> Graph {
    let mut b = GraphBuilder::new(g.n());
    for (u, v) in g.edges() {
        for _ in 0..3 {
            let w = b.add_vertex();
            b.add_edge(u, w);
            b.add_edge(w, v);
        }
    }
    b.build()
}

/// A walk with `steps` edges from `x` to `y` around the 5-cycle `0..5`.
pub fn c5_walk(x: usize, y: usize, steps: usize) -> Option<Vec<usize>> {
    assert!(x < 5 && y < 5, "C5 has vertices 0..5");
    if steps < 4 {
        return short_walk(x, y, steps);
    }
    let d = (y + 5 - x) % 5;
    // Recipes for forward distance 0, 1, 2; distances 3, 4 mirror them.
    let (dist, dir) = if d <= 2 { (d, 1i64) } else { (5 - d, -1) };
    let tail: &[i64] = match (steps.is_multiple_of(2), dist) {
        (true, 0) => &[1, 1, -1, -1],
        (true, 1) => &[-1, -1, -1, -1],
        (true, _) => &[-1, 1, 1, 1],
        (false, 0) => &[1, 1, 1, 1, 1],
        (false, 1) => &[1, 1, -1, -1, 1],
        (false, _) => &[-1, 1, -1, -1, -1],
    };
    let mut moves: Vec<i64> = Vec::with_capacity(steps);
    while moves.len() + tail.len() < steps {
        moves.extend([1, -1]);
    }
    moves.extend(tail);
    let mut walk = vec![x];
    let mut cur = x as i64;
    for s in moves {
        cur = (cur + dir * s).rem_euclid(5);
        walk.push(cur as usize);
    }
    Some(walk)
}

fn short_walk(x: usize, y: usize, steps: usize) -> Option<Vec<usize>> {
    if steps == 0 {
        return (x == y).then(|| vec![x]);
    }
    for next in [(x + 1) % 5, (x + 4) % 5] {
        if let Some(mut rest) = short_walk(next, y, steps - 1) {
            rest.insert(0, x);
            return Some(rest);
        }
    }
    None
}

fn star_sequence_ok(s: &[usize]) -> bool {
    s.windows(2).all(|w| w[0] != w[1]) && s.windows(4).all(|w| !(w[0] == w[2] && w[1] == w[3]))
}

fn three_distinct(s: &[usize]) -> bool {
    s[0] != s[1] && s[1] != s[2] && s[0] != s[2]
}

/// Colours `1..=3` for a path on `m >= 5` vertices starting at colour 1,
/// star-coloured, with distinct colours on the first three and on the last
/// three vertices, ending on colour 1 exactly when `same`. `None` only for
/// `m = 6` with `same`, which admits no such sequence.
pub fn subdivision_sequence(m: usize, same: bool) -> Option<Vec<usize>> {
    assert!(m >= 5, "sequence needs at least five vertices");
    let rep = |k: usize| -> Vec<usize> { [1, 2, 3].repeat(k) };
    let written: Vec<usize> = match (m % 3, same) {
        (0, false) => rep(m / 3),
        (0, true) => [rep(m / 3 - 1), vec![2, 3, 1]].concat(),
        (1, false) => [rep((m - 1) / 3 - 1), vec![2, 1, 3, 2]].concat(),
        (1, true) => [rep((m - 1) / 3), vec![1]].concat(),
        (2, false) => [rep((m - 2) / 3), vec![1, 2]].concat(),
        _ => [rep((m - 2) / 3), vec![2, 1]].concat(),
    };
    let fits = |s: &[usize]| {
        s.len() == m
            && s[0] == 1
            && (s[m - 1] == 1) == same
            && star_sequence_ok(s)
            && three_distinct(s)
            && three_distinct(&s[m - 3..])
    };
    if fits(&written) {
        return Some(written);
    }
    // The closed form for m = 0 mod 3 with equal ends repeats a two-colour
    // run; search for a replacement instead.
    fn go(m: usize, s: &mut Vec<usize>, fits: &dyn Fn(&[usize]) -> bool) -> bool {
        if s.len() == m {
            return fits(s);
        }
        for c in 1..=3 {
            s.push(c);
            let n = s.len();
            let ok = (n < 2 || s[n - 2] != c) && (n < 4 || !(s[n - 4] == s[n - 2] && s[n - 3] == c));
            if ok && go(m, s, fits) {
                return true;
            }
            s.pop();
        }
        false
    }
    let mut s = vec![1];
    go(m, &mut s, &fits).then_some(s)
}

/// Star 3-colouring of `g.k_subdivide(k)`: originals get a 3-colouring
/// (proper when one exists) and each edge path gets the sequence for its
/// end colours. Paths with no valid sequence are left to a search.
pub fn star_colour_subdivision(g: &Graph, k: usize) -> Result<Vec<usize>, ReductionError> {
    if k < 3 {
        return Err(ReductionError::TooFewSubdivisions(k));
    }
    let h = g.k_subdivide(k);
    let base = k_colour_search(g, 3).unwrap_or_else(|| greedy_three(g));
    let mut col = vec![0u8; h.n()];
    for v in 0..g.n() {
        col[v] = base[v] as u8;
    }
    let m = k + 2;
    for (e, (u, v)) in g.edges().enumerate() {
        let (a, b) = (base[u], base[v]);
        let Some(seq) = subdivision_sequence(m, a == b) else { continue };
        // Rename colours so the sequence starts at a and ends at b.
        let mut rename = [0usize; 4];
        rename[1] = a;
        if a == b {
            let others: Vec<usize> = (1..=3).filter(|&x| x != a).collect();
            rename[2] = others[0];
            rename[3] = others[1];
        } else {
            let last = seq[m - 1];
            rename[last] = b;
            rename[5 - last] = 6 - a - b;
        }
        for i in 0..k {
            col[g.n() + e * k + i] = rename[seq[i + 1]] as u8;
        }
    }
    if let Some(c) = star_search_with(&h, 3, &col) {
        return Ok(c);
    }
    star_search_with(&h, 3, &vec![0; h.n()]).ok_or(ReductionError::NoExtension)
}

fn greedy_three(g: &Graph) -> Vec<usize> {
    let mut c = vec![0usize; g.n()];
    for v in 0..g.n() {
        c[v] = (1..=3).min_by_key(|&x| g.neighbors(v).iter().filter(|&&w| c[w] == x).count()).unwrap();
    }
    c
}

/*────────── bipartite high-girth gadget ──────────*/

/// Who a cycle gadget stands for: a base vertex, or an edge translated
/// through an extra gadget.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GadgetOwner {
    Vertex(usize),
    Edge(usize, usize),
}

/// One cycle gadget: cycle `d`, pendants `e` (`e[i]` on `d[i]`) and the
/// four ports `f`, port `i` hanging off `e[3(i+1)g - 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleGadget {
    pub owner: GadgetOwner,
    pub size: usize,
    pub d: Vec<usize>,
    pub e: Vec<usize>,
    pub f: [usize; 4],
}

impl CycleGadget {
    /// Pendants carrying the ports.
    pub fn port_pendants(&self) -> [usize; 4] {
        std::array::from_fn(|i| self.e[3 * (i + 1) * self.size - 1])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarGadgetLayout {
    pub gadgets: Vec<CycleGadget>,
}

fn cycle_gadget(b: &mut GraphBuilder, size: usize, owner: GadgetOwner, first_port: Option<usize>) -> CycleGadget {
    let len = 12 * size;
    let mut d = Vec::with_capacity(len);
    let mut e = Vec::with_capacity(len);
    for _ in 0..len {
        d.push(b.add_vertex());
        e.push(b.add_vertex());
    }
    for i in 0..len {
        b.add_edge(d[i], d[(i + 1) % len]);
        b.add_edge(d[i], e[i]);
    }
    let f: [usize; 4] = std::array::from_fn(|i| match (i, first_port) {
        (0, Some(v)) => v,
        _ => b.add_vertex(),
    });
    let gadget = CycleGadget { owner, size, d, e, f };
    for (port, pend) in gadget.f.iter().zip(gadget.port_pendants()) {
        b.add_edge(*port, pend);
    }
    gadget
}

/// Bipartite subcubic graph of girth at least `girth` that is star
/// 3-colourable exactly when `g` is 3-colourable. Neighbours are taken in
/// index order when assigning ports.
pub fn gen_bipartite_star_gadget(g: &Graph, girth: usize) -> Result<(Graph, StarGadgetLayout), ReductionError> {
    if girth < 4 || girth % 2 == 1 {
        return Err(ReductionError::BadGirthTarget(girth));
    }
    if let Some(v) = (0..g.n()).find(|&v| g.degree(v) > 4) {
        return Err(ReductionError::DegreeTooHigh { vertex: v, degree: g.degree(v) });
    }
    let mut b = GraphBuilder::new(0);
    let mut gadgets: Vec<CycleGadget> =
        (0..g.n()).map(|x| cycle_gadget(&mut b, girth, GadgetOwner::Vertex(x), None)).collect();
    for (u, v) in g.edges() {
        let i = g.neighbors(u).iter().position(|&w| w == v).unwrap();
        let j = g.neighbors(v).iter().position(|&w| w == u).unwrap();
        let from = gadgets[u].f[i];
        let to = gadgets[v].f[j];
        let link = cycle_gadget(&mut b, girth + 1, GadgetOwner::Edge(u, v), Some(from));
        b.add_edge(link.f[1], to);
        gadgets.push(link);
    }
    Ok((b.build(), StarGadgetLayout { gadgets }))
}

/// Star 3-colouring (values `1..=3`) of the gadget graph from a proper
/// colouring `c` of the base graph with values `0..3`. Ports take colour
/// `c(x)`, port pendants `c(x) + 1 mod 3`; the rest is found by search,
/// gadget by gadget along each cycle.
pub fn build_gadget_star_colouring(
    g: &Graph,
    c: &[usize],
    out: &Graph,
    layout: &StarGadgetLayout,
) -> Result<Vec<usize>, ReductionError> {
    if c.len() != g.n() || c.iter().any(|&x| x > 2) || g.edges().any(|(u, v)| c[u] == c[v]) {
        return Err(ReductionError::ImproperColouring);
    }
    let mut pre = vec![0u8; out.n()];
    for gd in &layout.gadgets {
        let colour = match gd.owner {
            GadgetOwner::Vertex(x) => c[x],
            GadgetOwner::Edge(u, _) => c[u],
        };
        for (&port, pend) in gd.f.iter().zip(gd.port_pendants()) {
            pre[port] = colour as u8 + 1;
            pre[pend] = ((colour + 1) % 3) as u8 + 1;
        }
    }
    let col = star_search_with(out, 3, &pre).ok_or(ReductionError::NoExtension)?;
    debug_assert!(verify_star_colouring(out, &col, 3).unwrap_or(false));
    Ok(col)
}

/*────────── random instances ──────────*/

/// Random graph on `n` vertices with edge probability `p`, repaired by
/// deleting the smallest image edge of each forbidden embedding found
/// until no member of `family` embeds. Deterministic per seed.
pub fn gen_random_free(n: usize, p: f64, family: &Family, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = GraphBuilder::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p.clamp(0.0, 1.0)) {
                b.add_edge(u, v);
            }
        }
    }
    let mut g = b.build();
    while let Some(e) = is_family_free(&g, family) {
        let pattern = build_pattern(e.pattern).expect("family members are valid patterns");
        let (a, b) = pattern
            .edges()
            .map(|(a, b)| {
                let (x, y) = (e.map[a], e.map[b]);
                (x.min(y), x.max(y))
            })
            .min()
            .expect("forbidden patterns have edges");
        g = g.with_edges_removed(&[(a, b)]);
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::verify_hole;
    use crate::oracles::Oracle;
    use crate::patterns::{contains_subgraph, PatternId};

    #[test]
    fn dimacs_examples() {
        let f = parse_dimacs("p cnf 3 1\n1 2 3 0").unwrap();
        assert_eq!((f.n, f.m()), (3, 1));
        assert_eq!(parse_dimacs("p cnf 2 1\n1 -2 0"), Err(ReductionError::ClauseWidth { clause: 1, width: 2 }));
        let f = parse_dimacs("c x\np cnf 1 1\n1 1 -1 0").unwrap();
        assert_eq!(f.clauses, vec![[1, 1, -1]]);
        assert!(matches!(parse_dimacs("p cnf 2 1\n1 2 3 0"), Err(ReductionError::VariableRange { .. })));
        assert!(matches!(parse_dimacs("p dnf 2 1\n1 2 3 0"), Err(ReductionError::Dimacs { .. })));
    }

    #[test]
    fn walk_examples() {
        assert_eq!(c5_walk(0, 0, 4), Some(vec![0, 1, 2, 1, 0]));
        assert_eq!(c5_walk(0, 1, 4), Some(vec![0, 4, 3, 2, 1]));
        assert_eq!(c5_walk(0, 0, 3), None);
    }

    #[test]
    fn sequences() {
        assert_eq!(subdivision_sequence(6, false), Some(vec![1, 2, 3, 1, 2, 3]));
        assert_eq!(subdivision_sequence(6, true), None);
        for m in 5..40 {
            for same in [false, true] {
                if let Some(s) = subdivision_sequence(m, same) {
                    assert!(star_sequence_ok(&s) && three_distinct(&s) && three_distinct(&s[m - 3..]));
                    assert_eq!(s[m - 1] == 1, same);
                } else {
                    assert_eq!((m, same), (6, true));
                }
            }
        }
    }

    #[test]
    fn subdivision_colourings() {
        for (g, k) in [(Graph::complete(3), 3), (Graph::complete(5), 4), (Graph::complete(4), 4)] {
            let c = star_colour_subdivision(&g, k).unwrap();
            assert!(verify_star_colouring(&g.k_subdivide(k), &c, 3).unwrap());
        }
        assert_eq!(star_colour_subdivision(&Graph::complete(3), 2), Err(ReductionError::TooFewSubdivisions(2)));
    }

    #[test]
    fn colouring_reductions() {
        let o = Oracle::new(crate::oracles::Bounds::uniform(64));
        assert!(o.c5_colouring(&reduce_5col_to_c5col(&Graph::complete(5))).unwrap().is_some());
        assert!(o.star3col(&reduce_3col_to_star3col(&Graph::complete(3))).unwrap().is_some());
        assert!(o.star3col(&reduce_3col_to_star3col(&Graph::complete(4))).unwrap().is_none());
        let k3 = reduce_3col_to_star3col(&Graph::complete(3));
        assert!(contains_subgraph(&k3, PatternId::H(1)).is_none());
        assert!(contains_subgraph(&k3, PatternId::H(3)).is_none());
    }

    #[test]
    fn k6_double_subdivision_not_c5() {
        let o = Oracle::new(crate::oracles::Bounds::uniform(64));
        assert!(o.c5_colouring(&reduce_5col_to_c5col(&Graph::complete(6))).unwrap().is_none());
    }

    #[test]
    fn hole_gadget_single_clause() {
        let phi = CnfFormula::new(3, vec![[1, 2, 3]]).unwrap();
        let (g, layout) = gen_2idp_sat(&phi, 5).unwrap();
        assert_eq!(g.max_degree(), 3);
        let (x, y) = (layout.get("x"), layout.get("y"));
        assert_eq!((g.degree(x), g.degree(y)), (2, 2));
        for xi in [vec![true, true, true], vec![true, false, false], vec![false, false, true]] {
            let h = build_hole_certificate(&phi, &xi, &g, &layout).unwrap();
            assert!(verify_hole(&g, x, y, &h), "{xi:?}");
        }
        assert_eq!(
            build_hole_certificate(&phi, &[false, false, false], &g, &layout),
            Err(ReductionError::Unsatisfied)
        );
    }

    #[test]
    fn unsatisfiable_has_no_certificate() {
        let phi = CnfFormula::new(1, vec![[1, 1, 1], [-1, -1, -1]]).unwrap();
        let (g, layout) = gen_2idp_sat(&phi, 5).unwrap();
        for xi in [vec![false], vec![true]] {
            assert_eq!(build_hole_certificate(&phi, &xi, &g, &layout), Err(ReductionError::Unsatisfied));
        }
    }

    #[test]
    fn star_gadget_shape() {
        let (out, layout) = gen_bipartite_star_gadget(&Graph::complete(3), 4).unwrap();
        assert!(out.is_bipartite() && out.is_subcubic());
        assert!(out.girth().unwrap() >= 4);
        let single = gen_bipartite_star_gadget(&Graph::empty(1), 4).unwrap().0;
        assert_eq!(single.n(), 100);
        let c = build_gadget_star_colouring(&Graph::complete(3), &[0, 1, 2], &out, &layout).unwrap();
        assert!(verify_star_colouring(&out, &c, 3).unwrap());
        assert_eq!(
            build_gadget_star_colouring(&Graph::complete(3), &[0, 0, 1], &out, &layout),
            Err(ReductionError::ImproperColouring)
        );
    }

    #[test]
    fn random_free_examples() {
        let fam = Family::of(&[PatternId::H(2)]);
        let g = gen_random_free(10, 0.3, &fam, 7);
        assert!(is_family_free(&g, &fam).is_none());
        assert_eq!(gen_random_free(5, 0.0, &fam, 1), Graph::empty(5));
        assert_eq!(gen_random_free(10, 0.3, &fam, 7), g);
    }
}
