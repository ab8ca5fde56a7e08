mod common;

use std::time::Instant;

use common::arb_graph;
use hfree::certify::{verify_c5_hom, verify_hamilton, verify_injective_distance2, verify_star_colouring};
use hfree::oracles::Oracle;
use hfree::Graph;
use proptest::prelude::*;

proptest! {
    #[test]
    fn star_colourings_restrict(g in arb_graph(1, 10), drop in proptest::collection::vec(any::<prop::sample::Index>(), 0..6)) {
        let Some(c) = Oracle::default().star3col(&g).unwrap() else { return Ok(()) };
        prop_assert!(verify_star_colouring(&g, &c, 3).unwrap());
        let edges = g.edge_list();
        if edges.is_empty() {
            return Ok(());
        }
        let removed: Vec<_> = drop.iter().map(|i| edges[i.index(edges.len())]).collect();
        prop_assert!(verify_star_colouring(&g.with_edges_removed(&removed), &c, 3).unwrap());
        let (sub, old) = g.induced_subgraph(&(0..g.n()).step_by(2).collect::<Vec<_>>());
        let restricted: Vec<usize> = old.iter().map(|&v| c[v]).collect();
        prop_assert!(verify_star_colouring(&sub, &restricted, 3).unwrap());
    }
}

#[test]
fn verifiers_scale() {
    let n = 10_000;
    let g = Graph::cycle(n);
    let start = Instant::now();
    let c5: Vec<usize> = (0..n).map(|i| i % 5).collect();
    assert!(verify_c5_hom(&g, &c5).unwrap());
    let star: Vec<usize> = (0..n).map(|i| i % 3 + 1).collect();
    assert!(!verify_star_colouring(&g, &star, 3).unwrap());
    let four: Vec<usize> = (0..n).map(|i| [1, 2, 3, 4][i % 4]).collect();
    assert!(verify_star_colouring(&g, &four, 4).unwrap());
    assert!(verify_injective_distance2(&g, &four).unwrap());
    assert!(verify_hamilton(&g, &(0..n).collect::<Vec<_>>()));
    assert!(start.elapsed().as_secs_f64() < 1.0);
}
