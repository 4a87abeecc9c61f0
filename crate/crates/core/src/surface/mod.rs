//! Field-free atom–conductor potential U_g^⊥(z), U_g^∥(z) and their sum.
//!
//! Three interchangeable kernels realise the distance dependence:
//! the retarded image-dipole closed form ([`KernelChoice::OscillatoryImage`]),
//! the monotone ground-state quadrature ([`KernelChoice::GroundStateQuadrature`])
//! and user-supplied data ([`KernelChoice::Tabulated`]).

pub mod ground_state;
pub mod oscillatory;
pub mod peaks;
pub mod tabulated;

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use ground_state::{quadrature_potential, QuadratureResult};
pub use peaks::{find_barrier_peaks, Peak};
pub use tabulated::TabulatedCurve;

use crate::constants::{C, EPS0, HBAR};
use crate::error::{Error, Result};
use crate::species::AtomSpecies;

/// A pair of perpendicular/parallel quantities (energies or their slopes).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Components {
    pub perp: f64,
    pub par: f64,
}

impl Components {
    pub const ZERO: Components = Components { perp: 0.0, par: 0.0 };

    pub fn sum(&self) -> f64 {
        self.perp + self.par
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            perp: self.perp * s,
            par: self.par * s,
        }
    }

    /// `perp·sin²γ + par·cos²γ`, with cos²γ taken as 1 − sin²γ so the
    /// weights sum to one and γ = 0, π/2 select a component exactly.
    pub fn oriented(&self, gamma: f64) -> f64 {
        let s2 = gamma.sin().powi(2);
        self.perp * s2 + self.par * (1.0 - s2)
    }
}

#[derive(Debug, Clone)]
pub enum KernelChoice {
    OscillatoryImage,
    GroundStateQuadrature,
    Tabulated(Arc<TabulatedCurve>),
}

impl fmt::Display for KernelChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelChoice::OscillatoryImage => f.write_str("oscillatory_image"),
            KernelChoice::GroundStateQuadrature => f.write_str("ground_state_quadrature"),
            KernelChoice::Tabulated(t) => write!(f, "tabulated:{}", t.label()),
        }
    }
}

impl PartialEq for KernelChoice {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (KernelChoice::OscillatoryImage, KernelChoice::OscillatoryImage) => true,
            (KernelChoice::GroundStateQuadrature, KernelChoice::GroundStateQuadrature) => true,
            (KernelChoice::Tabulated(a), KernelChoice::Tabulated(b)) => a == b,
            _ => false,
        }
    }
}

impl KernelChoice {
    pub fn components(&self, z: f64, species: &AtomSpecies) -> Result<Components> {
        require_distance(z)?;
        match self {
            KernelChoice::OscillatoryImage => Ok(oscillatory::components(z, species)),
            KernelChoice::GroundStateQuadrature => {
                let q = quadrature_potential(z, species)?;
                Ok(Components { perp: q.perp, par: q.par })
            }
            KernelChoice::Tabulated(t) => Ok(t.eval(z)?.0),
        }
    }

    /// dU/dz of each component, analytic for every kernel.
    pub fn slopes(&self, z: f64, species: &AtomSpecies) -> Result<Components> {
        require_distance(z)?;
        match self {
            KernelChoice::OscillatoryImage => Ok(oscillatory::slopes(z, species)),
            KernelChoice::GroundStateQuadrature => ground_state::slopes(z, species),
            KernelChoice::Tabulated(t) => Ok(t.eval(z)?.1),
        }
    }
}

pub(crate) fn require_distance(z: f64) -> Result<()> {
    if z > 0.0 && z.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("distance must be positive, got z = {z:e} m")))
    }
}

pub fn potential_perp(z: f64, species: &AtomSpecies, kernel: &KernelChoice) -> Result<f64> {
    Ok(kernel.components(z, species)?.perp)
}

pub fn potential_par(z: f64, species: &AtomSpecies, kernel: &KernelChoice) -> Result<f64> {
    Ok(kernel.components(z, species)?.par)
}

/// U_g = U_g^⊥ + U_g^∥, the potential without any orienting field.
pub fn potential_field_free(z: f64, species: &AtomSpecies, kernel: &KernelChoice) -> Result<f64> {
    Ok(kernel.components(z, species)?.sum())
}

/// Non-retarded image limit, per component.
pub fn vdw_components(z: f64, species: &AtomSpecies) -> Result<Components> {
    require_distance(z)?;
    let z3 = z * z * z;
    Ok(species.transitions().iter().fold(Components::ZERO, |acc, t| Components {
        perp: acc.perp - t.mu_perp_sq / (32.0 * PI * EPS0 * z3),
        par: acc.par - t.mu_par_sq / (64.0 * PI * EPS0 * z3),
    }))
}

/// −(μ_∥²/64 + μ_⊥²/32)/(πε₀z³), summed over transitions.
pub fn vdw_limit(z: f64, species: &AtomSpecies) -> Result<f64> {
    Ok(vdw_components(z, species)?.sum())
}

/// α(0) = Σ_j 2(μ_⊥² + μ_∥²)_j / (3ħω_j), the isotropic static polarizability
/// implied by the quadrature kernel's α_i(iξ) at ξ = 0.
pub fn static_polarizability(species: &AtomSpecies) -> f64 {
    species
        .transitions()
        .iter()
        .map(|t| 2.0 * t.mu_sq() / (3.0 * HBAR * t.omega))
        .sum()
}

/// Retarded limit −3ħcα(0)/(32π²ε₀z⁴).
pub fn casimir_polder_limit(z: f64, species: &AtomSpecies) -> Result<f64> {
    require_distance(z)?;
    Ok(-3.0 * HBAR * C * static_polarizability(species) / (32.0 * PI * PI * EPS0 * z.powi(4)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Log,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub z_min_m: f64,
    pub z_max_m: f64,
    pub n_points: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl GridSpec {
    pub fn new(z_min_m: f64, z_max_m: f64, n_points: usize, spacing: Spacing) -> Self {
        Self {
            z_min_m,
            z_max_m,
            n_points,
            spacing,
        }
    }

    pub fn points(&self) -> Result<Vec<f64>> {
        let (lo, hi, n) = (self.z_min_m, self.z_max_m, self.n_points);
        if !(lo > 0.0 && lo < hi && hi.is_finite()) {
            return Err(Error::Domain(format!("grid bounds must satisfy 0 < z_min < z_max, got [{lo:e}, {hi:e}]")));
        }
        if n < 2 {
            return Err(Error::Domain(format!("grid needs at least 2 points, got {n}")));
        }
        let last = (n - 1) as f64;
        let mut z: Vec<f64> = (0..n)
            .map(|i| {
                let s = i as f64 / last;
                match self.spacing {
                    Spacing::Log => lo * (hi / lo).powf(s),
                    Spacing::Linear => lo + (hi - lo) * s,
                }
            })
            .collect();
        z[0] = lo;
        z[n - 1] = hi;
        Ok(z)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveMeta {
    pub species: String,
    pub kernel: String,
    pub grid: GridSpec,
}

/// Sampled field-free potential with its component breakdown.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialCurve {
    pub z: Vec<f64>,
    pub u_perp: Vec<f64>,
    pub u_par: Vec<f64>,
    pub u_sum: Vec<f64>,
    pub meta: CurveMeta,
}

impl PotentialCurve {
    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }
}

pub fn sample_curve(grid: GridSpec, species: &AtomSpecies, kernel: &KernelChoice) -> Result<PotentialCurve> {
    let z = grid.points()?;
    let values: Vec<Components> = z
        .par_iter()
        .map(|&zi| kernel.components(zi, species))
        .collect::<Result<_>>()?;
    Ok(PotentialCurve {
        u_perp: values.iter().map(|c| c.perp).collect(),
        u_par: values.iter().map(|c| c.par).collect(),
        u_sum: values.iter().map(|c| c.sum()).collect(),
        z,
        meta: CurveMeta {
            species: species.name.clone(),
            kernel: kernel.to_string(),
            grid,
        },
    })
}

/// Barrier peaks of a field-free curve, refined on the continuous kernel.
pub fn curve_peaks(curve: &PotentialCurve, species: &AtomSpecies, kernel: &KernelChoice) -> Result<Vec<Peak>> {
    find_barrier_peaks(&curve.z, &curve.u_sum, |z| potential_field_free(z, species, kernel))
}
