//! Recovery thresholds, phase diagrams and pair-cycle generating functions.

mod grid;
mod pgf;
mod thresholds;

pub use grid::{phase_grid, Axis, GridAxis, PhaseGrid, PhaseGridSpec};
pub use pgf::{
    cycle_bound_check, pgf_advance, pgf_cycle, pgf_full, pgf_initial, simulate_cycle, BoundCheck, PgfFull, PgfParams,
    PgfSlice, PgfTable,
};
pub use thresholds::{classify, thresholds, Region, RegionVerdict, BOUNDARY_BAND};
