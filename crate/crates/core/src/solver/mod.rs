//! Multistart search for critical functions, conjugate Fourier membership
//! probes, and polynomial tools for the algebraically described values.

mod config;
mod non_weil;
mod poly;
mod search;
mod system;

pub use config::{FixedPoint, Normalization, SearchConfig, SymmetryConstraint};
pub use non_weil::{
    non_weil_probe, non_weil_spec, LambdaSearch, NonWeilBudget, NonWeilReport, NON_WEIL_C_POLY, NON_WEIL_HINT,
};
pub use poly::{backward_error, cluster_roots, poly_roots, weil_check, AlgebraicSpec, RootSelector, WeilReport};
pub use search::{find_critical_functions, probe_bd, probe_bdo, ProbeOutcome, SearchResult, StartStats, Witness};
