//! Finite binary relations, order-class checks, extension constructions,
//! realizers, exact dimension computations, geometric representations, and a
//! randomized theorem audit harness — with a CLI in `src/main.rs`.
//!
//! Ground sets are capped at 64 elements so a relation fits in one `u64` bit
//! row per element. All algorithms are deterministic given the element order
//! of the input; randomized entry points take explicit seeds.

pub mod audit;
pub mod classify;
pub mod cli;
pub mod dimension;
pub mod error;
pub mod extend;
pub mod geometry;
pub mod io;
pub mod realize;
pub mod relation;
pub mod sample;

pub use error::Error;
pub use relation::{Relation, Witness, WitnessKind};

/// Resource caps shared by the search-based operations.
#[derive(Debug, Clone, Copy)]
pub struct Limits {
    /// Largest ground set accepted by `order_dim`.
    pub max_n_order: usize,
    /// Largest ground set accepted by the pool-based dimensions.
    pub max_n_pool: usize,
    /// Node budget for backtracking searches and pool enumeration.
    pub search_budget: u64,
    /// Largest product ground set materialized.
    pub tuple_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_n_order: 8,
            max_n_pool: 6,
            search_budget: 1_000_000,
            tuple_cap: 4096,
        }
    }
}

impl Limits {
    /// Caps suitable for exhaustive test sweeps: element caps lifted to the
    /// representation bound, default node budget kept.
    pub fn exhaustive() -> Self {
        Limits {
            max_n_order: 64,
            max_n_pool: 64,
            ..Limits::default()
        }
    }
}
