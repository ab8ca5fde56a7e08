//! Polynomial algorithms on subgraph-free classes, each working under a
//! promise that can optionally be checked first.

use serde::Serialize;
use thiserror::Error;

use crate::certify::Certificate;
use crate::oracles::OracleError;
use crate::patterns::Embedding;

mod c5;
mod hamilton;
mod injective;
mod kidp;
mod star;

pub use c5::solve_c5col_h3free;
pub use hamilton::{solve_hamilton_h1free, solve_hamilton_h1free_traced, HamiltonTrace};
pub use injective::greedy_injective_10col;
pub use kidp::{
    apply_merge_rule, find_conflict, preprocess_kidp_h2, solve_kidp_h1free, solve_kidp_h2free,
    ConflictSite, MergeRule, Merged,
};
pub use star::{solve_star3col_bipartite, solve_star3col_general};

/// Whether a solver checks its class precondition before deciding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PromiseMode {
    Verify,
    #[default]
    Trust,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("promise violated: input contains {}", .0.pattern)]
    PromiseViolation(Embedding),
    #[error("promise violated: {0}")]
    PromiseUnmet(&'static str),
    #[error("promise violated after contraction: result contains {}", .0.pattern)]
    FreenessLost(Embedding),
    #[error("no case of the analysis applies: {0}")]
    CaseExhausted(String),
    #[error("site is not an edge between two solution paths")]
    NotAConflict,
    #[error("conflict site has a z-vertex with {0} neighbours outside the site")]
    SiteCondition(usize),
    #[error("{0} branch vertices but no obstruction found")]
    CharacterizationViolation(usize),
    #[error("terminals are not distinct vertices of the graph")]
    BadTerminals,
    #[error("graph is not subcubic")]
    NotSubcubic,
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// A YES/NO answer with optional supporting evidence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub yes: bool,
    /// Embedded obstruction behind a NO answer.
    pub witness: Option<Embedding>,
    /// Certificate behind a YES answer, when the algorithm produces one.
    pub certificate: Option<Certificate>,
}

impl Decision {
    pub fn yes() -> Self {
        Self { yes: true, witness: None, certificate: None }
    }

    pub fn no() -> Self {
        Self { yes: false, witness: None, certificate: None }
    }

    pub fn no_because(w: Embedding) -> Self {
        Self { yes: false, witness: Some(w), certificate: None }
    }

    pub fn yes_with(c: Certificate) -> Self {
        Self { yes: true, witness: None, certificate: Some(c) }
    }
}
