//! Gács-Körner source decompositions of finite joint distributions.
//!
//! The crate computes the exact common-information decomposition of a
//! joint distribution P, searches for approximate decompositions
//! (phi_X, phi_Y) that trade agreement for entropy, evaluates the
//! helper-assisted rate regions those decompositions induce, ties the
//! maximal correlation of P to the normalized Laplacian of its bipartite
//! support graph, simulates the zero-error coding schemes end to end, and
//! checks min-cut feasibility of the schemes on a capacitated network.
//!
//! All entropies and rates are in bits.

pub mod codec;
pub mod components;
pub mod dist;
pub mod examples;
pub mod network;
pub mod objectives;
pub mod search;
pub mod spectral;

pub use components::{connected_components, gk_common_information, gk_labelings, ComponentDecomposition};
pub use dist::{JointDistribution, ProbVector};
pub use objectives::{DecompositionReport, LabelingPair, RateRegion};
