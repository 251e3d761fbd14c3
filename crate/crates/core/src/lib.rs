//! Correlated stochastic block models.
//!
//! The crate covers the whole experimental loop for two-community SBMs that are
//! observed through several independently subsampled and relabelled copies:
//!
//! * [`model`] generates parent graphs, correlated families and the inverse
//!   "splitter" constructions, and exposes the per-pair joint edge law.
//! * [`perm`] holds vertex permutations, their action on vertex pairs, pair
//!   cycle decompositions and closed-form mismatch counts.
//! * [`matching`] implements the agreement-maximising matcher (exhaustive and
//!   local search), the label-aware MAP matcher and diagnostic statistics.
//! * [`community`] runs single-graph recovery and the overlay pipelines.
//! * [`analysis`] evaluates recovery thresholds, phase diagrams and the
//!   pair-cycle generating functions.
//! * [`harness`] orchestrates reproducible Monte Carlo sweeps.

#![forbid(unsafe_code)]

pub mod analysis;
pub mod community;
pub mod error;
pub mod harness;
pub mod matching;
pub mod model;
pub mod perm;
pub mod rng;

pub use error::{Error, Result};
pub use model::{CorrelatedFamily, EdgeJointLaw, Graph, Labeling, ModelParams, Scaling};
pub use perm::Permutation;
pub use rng::{RandomStream, StreamKey};
