use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::numeric::golden_section_max;

/// Bracket width at which peak refinement stops (0.01 nm).
pub const PEAK_TOL_M: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    #[serde(rename = "z_m")]
    pub z: f64,
    #[serde(rename = "u_J")]
    pub u: f64,
}

/// Strict positive local maxima of the sampled `u`, each refined by
/// golden-section search on the continuous `eval` between its neighbours.
/// Ordered by increasing z.
pub fn find_barrier_peaks<F>(z: &[f64], u: &[f64], eval: F) -> Result<Vec<Peak>>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut peaks = Vec::new();
    for i in 1..u.len().saturating_sub(1) {
        if u[i] > 0.0 && u[i] > u[i - 1] && u[i] > u[i + 1] {
            let (zp, up) = golden_section_max(&eval, z[i - 1], z[i + 1], PEAK_TOL_M)?;
            // The grid point itself may beat the refined one on flat tops.
            let best = if up >= u[i] { Peak { z: zp, u: up } } else { Peak { z: z[i], u: u[i] } };
            peaks.push(best);
        }
    }
    Ok(peaks)
}
