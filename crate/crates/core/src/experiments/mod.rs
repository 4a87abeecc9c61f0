//! Scenario configs, presets, reports, sweeps and file output.

pub mod config;
pub mod output;
pub mod presets;
pub mod report;
pub mod run;
pub mod sweep;

pub use config::{Assets, KernelSpec, Resolved, ScenarioConfig, SpeciesSpec};
pub use presets::{embedded_assets, preset_config, run_preset, PRESET_NAMES};
pub use report::{containment_report, equivalent_temperature, max_reflectable_velocity, ContainmentReport};
pub use run::{render, replay, run_products, Manifest, Product};
pub use sweep::{boundary_speed, sweep, sweep_csv, SweepRow, SweepSpec};
