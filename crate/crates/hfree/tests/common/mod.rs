//! Instance builders shared by the integration tests.

#![allow(dead_code)]

use hfree::certify::TerminalSpec;
use hfree::graph::GraphBuilder;
use hfree::patterns::{build_pattern, is_family_free, Family, PatternId};
use hfree::solvers::ConflictSite;
use hfree::Graph;
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Labeled graph on `n` vertices whose edges are the set bits of `mask`
/// over pairs in lexicographic order.
pub fn labeled(n: usize, mask: u64) -> Graph {
    let mut b = GraphBuilder::new(n);
    let mut bit = 0;
    for u in 0..n {
        for v in u + 1..n {
            if mask >> bit & 1 == 1 {
                b.add_edge(u, v);
            }
            bit += 1;
        }
    }
    b.build()
}

/// Same as [`labeled`] with one flag per pair, for any `n`.
pub fn from_bits(n: usize, bits: &[bool]) -> Graph {
    let mut b = GraphBuilder::new(n);
    let mut bit = 0;
    for u in 0..n {
        for v in u + 1..n {
            if bits[bit] {
                b.add_edge(u, v);
            }
            bit += 1;
        }
    }
    b.build()
}

pub fn pairs(n: usize) -> u32 {
    (n * n.saturating_sub(1) / 2) as u32
}

/// Any labeled graph on `lo..=hi` vertices.
pub fn arb_graph(lo: usize, hi: usize) -> impl Strategy<Value = Graph> {
    (lo..=hi).prop_flat_map(|n| {
        let bits = pairs(n) as usize;
        proptest::collection::vec(any::<bool>(), bits).prop_map(move |v| from_bits(n, &v))
    })
}

/// Two paths crossing at an `x1 x2` edge, on at most 12 vertices, with
/// the preprocessing conditions in place: terminals have degree one and
/// every z-vertex has at most one neighbour outside the site. Random extra
/// edges are added, then pruned until the graph is H2-free.
pub fn conflict_instance(rng: &mut ChaCha8Rng, max_n: usize) -> (Graph, TerminalSpec, ConflictSite) {
    let l1 = rng.gen_range(5..=max_n - 5);
    let l2 = rng.gen_range(5..=max_n - l1);
    let spare = rng.gen_range(0..=max_n - l1 - l2);
    let n = l1 + l2 + spare;
    let mut label: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        label.swap(i, rng.gen_range(0..=i));
    }
    let p1: Vec<usize> = label[..l1].to_vec();
    let p2: Vec<usize> = label[l1..l1 + l2].to_vec();
    let (k1, k2) = (rng.gen_range(2..=l1 - 3), rng.gen_range(2..=l2 - 3));
    let site = ConflictSite { x1: p1[k1], x2: p2[k2], z1: p1[k1 - 1], z3: p1[k1 + 1], z2: p2[k2 - 1], z4: p2[k2 + 1] };
    let mut b = GraphBuilder::new(n);
    for p in [&p1, &p2] {
        for w in p.windows(2) {
            b.add_edge(w[0], w[1]);
        }
    }
    b.add_edge(site.x1, site.x2);
    let base = b.clone().build();
    let terminals = [p1[0], p1[l1 - 1], p2[0], p2[l2 - 1]];
    let in_site = |v: usize| site.site().contains(&v);
    let outside = |g: &GraphBuilder, z: usize| (0..n).filter(|&w| g.has_edge(z, w) && !in_site(w)).count();
    let density = rng.gen_range(0.05..0.5);
    for u in 0..n {
        for v in u + 1..n {
            if terminals.contains(&u) || terminals.contains(&v) || b.has_edge(u, v) || !rng.gen_bool(density) {
                continue;
            }
            b.add_edge(u, v);
            let zs = [site.z1, site.z2, site.z3, site.z4];
            if zs.iter().any(|&z| outside(&b, z) > 1) {
                b.remove_edge(u, v);
            }
        }
    }
    let mut g = b.build();
    let h2 = Family::of(&[PatternId::H(2)]);
    while let Some(e) = is_family_free(&g, &h2) {
        let pattern = build_pattern(e.pattern).unwrap();
        let extra = pattern
            .edges()
            .map(|(a, c)| (e.map[a].min(e.map[c]), e.map[a].max(e.map[c])))
            .filter(|&(a, c)| !base.has_edge(a, c))
            .min()
            .expect("the two crossing paths alone are H2-free");
        g = g.with_edges_removed(&[extra]);
    }
    (g, TerminalSpec::new(vec![(p1[0], p1[l1 - 1]), (p2[0], p2[l2 - 1])]), site)
}

