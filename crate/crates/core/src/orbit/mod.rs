//! The measure side: arcs on the circle and truncated target unions.

pub mod arcs;
pub mod sim;

pub use arcs::{rasterized_measure, ArcUnion};
pub use sim::{
    hit_count, tail_measure_profile, target_union, Hit, HitReport, MeasureProfile, Orbit, TargetUnion,
    DEFAULT_DELTA,
};
