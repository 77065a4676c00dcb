//! Exact arithmetic for metric trees and their subtree-length vectors.
//!
//! A weighted tree on leaves `1..n` assigns to every m-subset of leaves the
//! total length of the smallest subtree spanning it. The resulting vectors
//! of length C(n, m) satisfy every quadratic Pluecker exchange relation
//! tropically: the optimum of the monomial weights is attained at least
//! twice. This crate computes the vectors by independent routes (subtree
//! hulls, minimal cyclic pairwise sums, rooted-tree edge functionals),
//! generates the exchange relations, certifies the tropical condition, and
//! reconstructs trees from pairwise distances, all over exact rationals.

pub mod dissimilarity;
mod error;
pub mod newick;
pub mod pluecker;
pub mod rational;
pub mod reconstruct;
pub mod subsets;
pub mod tree;
pub mod weights;

pub use dissimilarity::{
    four_point_check, m_dissimilarity, m_from_pairwise, pairwise, DissimilarityVector,
    FourPointCertificate,
};
pub use error::Error;
pub use newick::{parse_newick, to_newick};
pub use pluecker::{
    check_all, exchange_relations, three_term_relations, tree_membership_demo, tropical_check,
    Convention, QuadMonomial, QuadraticRelation, TropicalCertificate,
};
pub use rational::Rational;
pub use reconstruct::{canonicalize, neighbor_joining, tree_isomorphic, IsomorphismReport, NjOutcome};
pub use subsets::LeafSubset;
pub use tree::{random_tree, EdgeId, EdgeSet, NodeId, RootedTree, TreeEdge, WeightedTree};
pub use weights::{
    edge_labels, from_metric_tree, pluecker_weight, standard_h, validate_functional,
    weight_vector, EdgeFunctional, TreeFunctional, WeightLabel, WeightVector,
};
