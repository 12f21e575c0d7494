//! Perron communicability of multilayer and multiplex networks.
//!
//! The Perron root `ρ` of the supra-adjacency matrix `B` measures how well
//! a network communicates. Its left and right Perron vectors give layer and
//! node centralities, and their outer product ranks every edge by how much
//! a weight change would move `ρ`. This crate builds the supra operator
//! without assembling it, solves for the Perron triple, and turns it into
//! communicability reports, sensitivity matrices and edge recommendations.
//!
//! ```
//! use perronet::prelude::*;
//!
//! let net: Network = parse_multiplex("2 1\n1 1 2 1.0\n", 0.0, false).unwrap().into();
//! let t = perron(&supra_operator(&net), &PerronOptions::default()).unwrap();
//! assert!((t.rho - 1.0).abs() < 1e-10);
//! ```

pub mod communicability;
pub mod eigensolver;
pub mod error;
pub mod graph;
pub mod operator;
pub mod random;
pub mod recommend;
pub mod sensitivity;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::communicability::{
        eigentensors, exp0, hub_authority_communicability, marginal_layer_centralities,
        perron_communicability, total_communicability0, versatility, CommunicabilityReport,
    };
    pub use crate::eigensolver::{condition_number, perron, perron_dense_oracle, PerronOptions, PerronTriple};
    pub use crate::error::{Error, Result};
    pub use crate::graph::{
        is_strongly_connected, load_multilayer, load_multiplex, parse_multilayer, parse_multiplex, EditScope,
        EdgeKey, MultilayerNetwork, MultiplexNetwork, Network, DEFAULT_DENSE_CAP,
    };
    pub use crate::operator::{authority_operator, hub_operator, supra_operator, LinearOperator};
    pub use crate::recommend::{
        perturb, perturbation_experiment, predicted_shift, rank_insertions, rank_removals, recompute_ranked,
        recompute_root, BaselinePool, CandidateSet, EdgeAction, ExperimentConfig, InsertionOptions, Pairing,
        RankedEdge, RemovalOptions,
    };
    pub use crate::sensitivity::{
        first_order_delta_rho, sensitivity_entry, sensitivity_matrix, sensitivity_matrix_multiplex,
        structured_condition_number, structured_sensitivity_matrix, structured_wilkinson, wilkinson, Cone,
    };
}
