//! Vertex permutations and their lifted action on unordered vertex pairs.

mod cycles;
mod mismatch;
mod permutation;

pub use cycles::{pair_cycles, PairCycleDecomposition};
pub use mismatch::{mismatch_counts, MismatchCounts};
pub use permutation::{all_pairs, lift_apply, LiftedPermutation, Pair, Permutation};
