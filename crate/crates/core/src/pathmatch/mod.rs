//! Basic path-matching and its specialisations.
//!
//! An instance has two terminal sides `T1`, `T2` of equal size `t`, a set `S`
//! of `s` inner vertices, an edge set with no edge inside `T1` or inside
//! `T2`, and two linear matroids of common rank `r`: the columns of `Q1`
//! (`r × t`) represent the matroid on `T1`, the rows of `Q2` (`t × r`) the
//! one on `T2`. A basic path-matching is a set of vertex-disjoint
//! `T1`–`T2` paths through `S` plus a matching covering the rest of `S`,
//! whose `T1`- and `T2`-endpoints are bases of the two matroids.
//!
//! Vertices are numbered globally: `T1` is `0..t`, `T2` is `t..2t` and `S` is
//! `2t..2t+s`.

mod apps;
mod contract;
mod instance;
mod solver;

use thiserror::Error;

use crate::linalg::LinalgError;
use crate::updates::LedgerError;

pub use apps::{independent_matching, max_matching, BipartiteMatroidInstance, MatchingOutcome};
pub use contract::{contract, verify_bpm, Contraction};
pub use instance::{build_z, bpm_exists, PathMatchingInstance, VertexKind, ZMatrix};
pub use solver::{solve_bpm, solve_bpm_with_z, BpmSolution, SolveStats, SolverConfig, UpdateMode};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathMatchError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matroid representations live in different fields")]
    FieldMismatch,
    #[error("matroid {side} has rank {rank}, expected {expected}")]
    RankDeficientMatroid { side: u8, rank: usize, expected: usize },
    #[error("invalid edge ({0}, {1}): {2}")]
    InvalidEdge(usize, usize, String),
    #[error("illegal partial path-matching: {0}")]
    IllegalPartial(String),
    #[error("instance has no basic path-matching")]
    NoBpm,
    #[error("no verified solution after {attempts} randomized attempts")]
    RandomnessExhausted { attempts: u32 },
    #[error("alpha must be an even number >= 4, got {0}")]
    BadAlpha(usize),
    #[error(transparent)]
    Ledger(#[from] LedgerError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Normalised undirected edge `(min, max)`.
pub(crate) fn norm(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}
