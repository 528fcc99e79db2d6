//! Constructions, densities, exact search and Monte-Carlo experiments for
//! powers of Hamiltonian cycles in randomly perturbed dense graphs.
//!
//! The crate is organised bottom-up: [`graph`] holds the bit-matrix graph
//! type and the power/blow-up constructions, [`gadgets`] the braid graphs and
//! the extremal lower-bound graph, [`decomposition`] the covering of an
//! `m`-th path power by a blow-up plus braids, [`density`] the `Ψ/Φ/m_G`
//! machinery, [`search`] the exact solver and tuple predicates, and
//! [`experiments`] the sampling harness and audits.

pub mod decomposition;
pub mod density;
pub mod error;
pub mod experiments;
pub mod gadgets;
pub mod graph;
pub mod search;

pub use decomposition::{
    decompose_cycle, decompose_path, verify_decomposition, Decomposition, VerificationReport,
};
pub use density::{
    braid_m_closed_form, density_profile, janson_upper_bound, max_density_m, phi, psi_ln,
    BraidDensity, DensityProfile, RandomModel,
};
pub use error::{Error, Result};
pub use experiments::{
    find_p_half, fit_threshold_exponent, lower_bound_audit, path_edge_audit, run_trial, sample_gnp,
    success_curve, CurvePoint, ExperimentConfig, TrialRecord,
};
pub use gadgets::{
    b_minus, braid, lower_bound_graph, multi_braid, Label, LabeledGadget, LowerBoundGraph,
    LowerBoundSpec, ProblemParams, Role,
};
pub use graph::{blow_up, power_cycle, power_path, Graph, GraphBuilder, OrderedTuple, VertexSet};
pub use search::{
    contains_power_ham_cycle, count_cliques, refutes_square_cycle, ConnectabilitySpec,
    SearchBudget, SearchOutcome, Verdict,
};

/// Crate version, mixed into every experiment config hash.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
