//! Community recovery: the overlap metric, single-graph recovery and the
//! overlay pipelines built on top of graph matching.

mod overlap;
mod pipeline;
mod single;

pub use overlap::{overlap, RecoveryResult};
pub use pipeline::{recover_k, recover_pair, recover_two_stage, recovery_stream, Matcher, PipelineResult};
pub use single::{recover_single, SingleRecovery, POWER_ITERATIONS, POWER_TOLERANCE};
