//! Potential reconstruction, the horizontal resolvent and collision scans.

mod coercivity;
mod collision;
mod minty;
mod rockafellar;
mod sweep;

pub use coercivity::{coercivity_probe, CoercivityReport, RingMinimum};
pub use collision::{
    gauge_collision_radius, identity_collision_family_scan, plane_base_through_identity, resolvent_collision_scan,
    resolvent_image, CollisionReport, GridSpec,
};
pub use minty::{
    minty_resolve, minty_resolve_translated, resolvent_residual, ResolveStatus, ResolventQuery, ResolventSolution,
    StartKind, StartTrace,
};
pub use rockafellar::{rockafellar_eval, ChainQuery, RockafellarOutcome, RockafellarTable};
pub use sweep::{polar_target_grid, summarize, surjectivity_sweep, SweepRow, SweepSummary};
