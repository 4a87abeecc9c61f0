//! Evanescent light above a metal-capped dielectric mirror and the
//! potentials it induces on the atom.

pub mod transfer;

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::constants::{C, EPS0, HBAR};
use crate::error::{Error, Result};
use crate::species::AtomSpecies;
use crate::surface::{require_distance, KernelChoice};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MirrorStack {
    /// Substrate dielectric constant ε₁.
    pub eps1: f64,
    #[serde(rename = "metal_plasma_omega_rad_s")]
    pub metal_plasma_omega: f64,
    #[serde(rename = "metal_collision_rate_s")]
    pub metal_collision_rate: f64,
    /// Capping-layer thickness; 0 means a bare dielectric.
    #[serde(rename = "metal_thickness_m")]
    pub metal_thickness: f64,
}

impl Default for MirrorStack {
    /// Silver-like Drude placeholders on an ε₁ = 3 substrate.
    fn default() -> Self {
        Self {
            eps1: 3.0,
            metal_plasma_omega: 1.37e16,
            metal_collision_rate: 2.7e13,
            metal_thickness: 20e-9,
        }
    }
}

impl MirrorStack {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps1 > 1.0) {
            return Err(Error::Domain(format!("eps1 must exceed 1, got {}", self.eps1)));
        }
        if !(self.metal_thickness >= 0.0) {
            return Err(Error::Domain("metal thickness must be non-negative".into()));
        }
        if !(self.metal_plasma_omega > 0.0) || !(self.metal_collision_rate >= 0.0) {
            return Err(Error::Domain("Drude parameters must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Polarization {
    #[default]
    TM,
    TE,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaserField {
    /// W/m²
    pub intensity: f64,
    /// Internal angle of incidence φ in the substrate (rad).
    pub angle_internal: f64,
    /// Δ₀ = ω − ω₀ for an atom at rest (rad/s).
    pub detuning0: f64,
    pub polarization: Polarization,
    /// Replaces the computed squared-Rabi amplitude J (1/s²).
    pub j_override: Option<f64>,
}

impl LaserField {
    pub fn validate(&self) -> Result<()> {
        if !(self.intensity >= 0.0 && self.intensity.is_finite()) {
            return Err(Error::Domain("laser intensity must be non-negative".into()));
        }
        if !(self.angle_internal > 0.0 && self.angle_internal < FRAC_PI_2) {
            return Err(Error::Domain("internal angle must lie in (0, π/2)".into()));
        }
        if let Some(j) = self.j_override {
            if !(j >= 0.0 && j.is_finite()) {
                return Err(Error::Domain("j_override must be non-negative".into()));
            }
        }
        Ok(())
    }
}

/// The single evanescent mode above the mirror.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvanescentProfile {
    /// In-plane wavenumber k_∥ (1/m), directed along +x.
    pub k_par: f64,
    /// Field amplitude decay constant k_z (1/m).
    pub k_z: f64,
    /// J: Ω²(z) = J e^(−2k_z z)  (1/s²).
    pub j_factor: f64,
    /// Field orientation angle γ = arctan|E_z/E_∥| (rad).
    pub gamma_angle: f64,
    /// Laser angular frequency ω (rad/s).
    pub omega: f64,
}

impl EvanescentProfile {
    /// γ(z); a single TM mode has |E_z/E_∥| = k_∥/k_z at every height.
    pub fn gamma_at(&self, _z: f64) -> f64 {
        self.gamma_angle
    }

    /// Δ₀ relative to the species' working transition.
    pub fn detuning(&self, species: &AtomSpecies) -> f64 {
        self.omega - species.working().omega
    }

    pub fn decay_length(&self) -> f64 {
        1.0 / (2.0 * self.k_z)
    }
}

/// Total-internal-reflection threshold arcsin(1/√ε₁).
pub fn critical_angle(eps1: f64) -> Result<f64> {
    if !(eps1 > 1.0) || !eps1.is_finite() {
        return Err(Error::Domain(format!("critical angle needs eps1 > 1, got {eps1}")));
    }
    Ok((1.0 / eps1.sqrt()).asin())
}

pub fn build_profile(stack: &MirrorStack, field: &LaserField, species: &AtomSpecies) -> Result<EvanescentProfile> {
    stack.validate()?;
    field.validate()?;
    let omega = species.working().omega + field.detuning0;
    if !(omega > 0.0) {
        return Err(Error::Domain(format!("laser frequency must be positive, got {omega:e} rad/s")));
    }
    let theta_c = critical_angle(stack.eps1)?;
    if field.angle_internal <= theta_c {
        return Err(Error::NoEvanescent(format!(
            "angle {:.4}° does not exceed the critical angle {:.4}°",
            field.angle_internal.to_degrees(),
            theta_c.to_degrees()
        )));
    }
    let k0 = omega / C;
    let k_par = k0 * stack.eps1.sqrt() * field.angle_internal.sin();
    let kz2 = k_par * k_par - k0 * k0;
    if !(kz2 > 0.0) {
        return Err(Error::NoEvanescent(format!("k_z² = {kz2:e} is not positive")));
    }
    let k_z = kz2.sqrt();
    let j_factor = match field.j_override {
        Some(j) => j,
        None => {
            let incident_sq = 2.0 * field.intensity / (C * EPS0 * stack.eps1.sqrt());
            let ratio = transfer::surface_intensity_ratio(stack, omega, field.angle_internal, field.polarization);
            species.working().mu_sq() * ratio * incident_sq / (HBAR * HBAR)
        }
    };
    let gamma_angle = match field.polarization {
        Polarization::TM => (k_par / k_z).atan(),
        Polarization::TE => 0.0,
    };
    Ok(EvanescentProfile {
        k_par,
        k_z,
        j_factor,
        gamma_angle,
        omega,
    })
}

/// Ω²(z) = J e^(−2k_z z)
pub fn rabi_sq(profile: &EvanescentProfile, z: f64) -> Result<f64> {
    if !(z >= 0.0) {
        return Err(Error::Domain(format!("rabi_sq needs z ≥ 0, got {z:e}")));
    }
    Ok(profile.j_factor * (-2.0 * profile.k_z * z).exp())
}

/// U_g^f = U_g^⊥ sin²γ + U_g^∥ cos²γ
pub fn field_potential(profile: &EvanescentProfile, z: f64, species: &AtomSpecies, kernel: &KernelChoice) -> Result<f64> {
    Ok(kernel.components(z, species)?.oriented(profile.gamma_at(z)))
}

/// (ħΔ/2) ln(1 + 2Ω²/(Δ² + Γ²)) for a given detuning.
pub fn dipole_potential_at(detuning: f64, rabi_sq: f64, gamma: f64) -> f64 {
    0.5 * HBAR * detuning * (2.0 * rabi_sq / (detuning * detuning + gamma * gamma)).ln_1p()
}

/// Dipole potential for an atom at rest; its −d/dz is the dipole force.
pub fn dipole_potential(profile: &EvanescentProfile, z: f64, species: &AtomSpecies) -> Result<f64> {
    Ok(dipole_potential_at(profile.detuning(species), rabi_sq(profile, z)?, species.gamma0))
}

/// U_total = U_g^f + U_d, or U_g^0 when no field is present.
pub fn total_potential(
    profile: Option<&EvanescentProfile>,
    z: f64,
    species: &AtomSpecies,
    kernel: &KernelChoice,
) -> Result<f64> {
    require_distance(z)?;
    match profile {
        None => crate::surface::potential_field_free(z, species, kernel),
        Some(p) => Ok(field_potential(p, z, species, kernel)? + dipole_potential(p, z, species)?),
    }
}
