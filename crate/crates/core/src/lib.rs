//! Exact simulation and analysis of two rigid clusters circulating on two
//! rings of `n` cells that share two crossing nodes.
//!
//! * [`model`]: states, the blocking rules and one synchronous step.
//! * [`dynamics`]: trajectories, limit cycles and exact average velocities.
//! * [`theory`]: closed-form regime predictions and the spectrum grid.
//! * [`verify`]: exhaustive comparison of the two, deadlock census and
//!   golden checkpoint traces.

pub mod dynamics;
pub mod error;
pub mod model;
pub mod ratio;
pub mod theory;
pub mod verify;

pub use dynamics::{
    average_velocities, classify_empirical, find_limit_cycle, is_deadlock, simulate, CycleInfo,
    EmpiricalMode, Trajectory,
};
pub use error::{ModelError, Result};
pub use model::{
    at_node, canonical_state, covered_cells, is_admissible, is_blocked, occupies_node, step,
    ClusterId, NodeId, StepOutcome, SystemParams, SystemState,
};
pub use ratio::ExactRatio;
pub use theory::{predict, spectrum_grid, ModePrediction, SpectrumGrid};
pub use verify::{
    check_golden, deadlock_census, golden_traces, sweep, verify_instance, DiscrepancyKind,
    InitialStatePolicy, InstanceReport, SweepReport,
};
