//! Greedy colouring of subcubic graphs where vertices at distance at most
//! two get distinct colours. Each vertex sees at most nine such vertices,
//! so ten colours always suffice; the result is in particular a star
//! colouring.

use super::SolverError;
use crate::graph::Graph;

pub const INJECTIVE_COLOURS: usize = 10;

/// Colours are `1..=10`, assigned in vertex order.
pub fn greedy_injective_10col(g: &Graph) -> Result<Vec<usize>, SolverError> {
    if !g.is_subcubic() {
        return Err(SolverError::NotSubcubic);
    }
    let mut col = vec![0usize; g.n()];
    for v in 0..g.n() {
        let mut taken = [false; INJECTIVE_COLOURS + 2];
        for &w in g.neighbors(v) {
            taken[col[w]] = true;
            for &x in g.neighbors(w) {
                taken[col[x]] = true;
            }
        }
        col[v] = (1..=INJECTIVE_COLOURS).find(|&c| !taken[c]).expect("at most nine blocked colours");
    }
    Ok(col)
}
