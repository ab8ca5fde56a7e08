//! C5-colouring of graphs without a subdivided H-graph of middle length 3.
//!
//! Such a graph maps to C5 exactly when it contains none of K3, the three
//! exceptional graphs E1-E3, or an odd flower as a subgraph, so the
//! decision is the detection result itself.

use super::{Decision, PromiseMode, SolverError};
use crate::graph::Graph;
use crate::patterns::{contains_subgraph, detect_odd_flower, PatternId};

pub fn solve_c5col_h3free(g: &Graph, mode: PromiseMode) -> Result<Decision, SolverError> {
    if mode == PromiseMode::Verify {
        if let Some(e) = contains_subgraph(g, PatternId::H(3)) {
            return Err(SolverError::PromiseViolation(e));
        }
    }
    for id in [PatternId::K(3), PatternId::E1, PatternId::E2, PatternId::E3] {
        if let Some(e) = contains_subgraph(g, id) {
            return Ok(Decision::no_because(e));
        }
    }
    if let Some((_, _, e)) = detect_odd_flower(g) {
        return Ok(Decision::no_because(e));
    }
    Ok(Decision::yes())
}
