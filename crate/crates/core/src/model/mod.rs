//! Generative model: SBM parent graphs, correlated families, splitters.

mod family;
mod graph;
pub mod io;
mod labeling;
mod params;
mod sample;
mod split;

pub use family::{generate_family, CorrelatedFamily};
pub use graph::{intersection_graph, overlay_by_permutations, union_graph, Graph, GraphBuilder};
pub use labeling::Labeling;
pub use params::{edge_joint_law, EdgeJointLaw, ModelParams, Scaling};
pub use sample::{sample_labeling, sample_sbm, subsample};
pub use split::{split_union_k, split_union_pair, splitter_distribution, PairSplitLaw};
