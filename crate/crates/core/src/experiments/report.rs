//! Barrier height to containment bounds.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::{HBAR, KB};
use crate::dynamics::Scenario;
use crate::error::{require_positive, Result};
use crate::species::AtomSpecies;
use crate::surface::{find_barrier_peaks, GridSpec, Peak};

/// √(2U/M): the largest normal speed reflected by a barrier of height U.
pub fn max_reflectable_velocity(u_max: f64, species: &AtomSpecies) -> Result<f64> {
    require_positive("u_max", u_max)?;
    Ok((2.0 * u_max / species.mass).sqrt())
}

/// U/k_B
pub fn equivalent_temperature(u_max: f64) -> Result<f64> {
    require_positive("u_max", u_max)?;
    Ok(u_max / KB)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContainmentReport {
    #[serde(rename = "u_max_J")]
    pub u_max: f64,
    /// Barrier height in units of ħΓ₀.
    pub u_max_hbar_gamma0: f64,
    #[serde(rename = "z_peak_m")]
    pub z_peak: Option<f64>,
    #[serde(rename = "v_max_mps")]
    pub v_max: f64,
    #[serde(rename = "t_equiv_K")]
    pub t_equiv: f64,
    pub no_barrier: bool,
    /// Every positive peak of the sampled potential, increasing z.
    pub peaks: Vec<Peak>,
}

/// Samples the scenario's total potential (scaled surface term plus dipole
/// potential at rest) on `grid` and reports on its highest positive peak.
pub fn containment_report(sc: &Scenario, grid: GridSpec) -> Result<ContainmentReport> {
    let z = grid.points()?;
    let u: Vec<f64> = z
        .par_iter()
        .map(|&zi| sc.total_potential(zi))
        .collect::<Result<_>>()?;
    let peaks = find_barrier_peaks(&z, &u, |zi| sc.total_potential(zi))?;
    let top = peaks.iter().copied().fold(None, |best: Option<Peak>, p| match best {
        Some(b) if b.u >= p.u => Some(b),
        _ => Some(p),
    });
    let unit = HBAR * sc.species.gamma0;
    Ok(match top {
        None => ContainmentReport {
            u_max: 0.0,
            u_max_hbar_gamma0: 0.0,
            z_peak: None,
            v_max: 0.0,
            t_equiv: 0.0,
            no_barrier: true,
            peaks,
        },
        Some(p) => ContainmentReport {
            u_max: p.u,
            u_max_hbar_gamma0: p.u / unit,
            z_peak: Some(p.z),
            v_max: max_reflectable_velocity(p.u, &sc.species)?,
            t_equiv: equivalent_temperature(p.u)?,
            no_barrier: false,
            peaks,
        },
    })
}
