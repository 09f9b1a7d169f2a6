//! Numerical estimation of the extremal values `M_n^t` and the diagnostics
//! that accompany a candidate extremal function.

pub mod compass;
mod lemma;
mod objective;
mod oracle;
mod search;

pub use lemma::{lemma_bound_check, lemma_perturbation, LemmaSlack};
pub use objective::{
    gauge_normalize, marty_residual, rayleigh_objective, rayleigh_objective_with_tol, OBJECTIVE_TOL,
};
pub use oracle::{brute_force_oracle, OracleResult};
pub use search::{
    search_extremal, RestartTrace, SearchConfig, SearchResult, CERTIFY_NORM_TOL, SEARCH_NORM_TOL,
};
