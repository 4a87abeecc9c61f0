//! Atom–conductor surface potentials and classical trajectories of cold
//! atoms near an evanescent-wave mirror with a metallic capping layer.
//!
//! * [`surface`]: field-free potential components over the full distance
//!   range, with short- and long-range limits.
//! * [`optics`]: the evanescent mode, orientation-mixed surface potential
//!   and dipole potential.
//! * [`dynamics`]: radiation and surface forces, trajectory integration and
//!   reflection/adsorption classification.
//! * [`experiments`]: scenario configs, presets, containment reports, sweeps
//!   and file output.

pub mod constants;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod numeric;
pub mod optics;
pub mod species;
pub mod surface;

pub use error::{Error, Result};
