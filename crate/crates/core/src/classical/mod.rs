//! ε-classical phase-space machinery.

pub mod cloud;
pub mod island;
pub mod map;
pub mod portrait;

pub use cloud::{cloud_measures, sample_cloud, stays_trapped, CloudSpec, OverlapMeasures};
pub use island::{
    existence_range, is_unimodal, island_area_scan, island_boundary, polar_about, Island,
    IslandDiagnostics, IslandSpec, IslandStatus, ScanPoint,
};
pub use map::{
    fixed_point, linear_stability, map_step, map_step_torus, mode_velocity,
    multipliers_on_unit_circle, saddle_point, tangent_map, wrap_angle, wrap_centered, FixedPoint,
    MapParams, PhasePoint, Sign,
};
pub use portrait::{
    phase_portrait, write_boundary_csv, write_portrait_csv, PortraitGrid, PortraitPoint,
};
