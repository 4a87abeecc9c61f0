//! Atomic species data model.
//!
//! A species is a mass, the linewidth of the working transition and a list of
//! dipole transitions out of the ground state. The first transition drives the
//! mirror dynamics; every transition contributes to the surface potential.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::{AMU, C, EPS0, HBAR};
use crate::error::{require_positive, Error, Result};

/// A ground-state dipole transition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    /// Transition angular frequency (W_j − W_g)/ħ in rad/s.
    #[serde(rename = "omega_rad_s")]
    pub omega: f64,
    /// |⟨μ_⊥⟩|², dipole component normal to the surface (C²·m²).
    #[serde(rename = "mu_perp_sq_C2m2")]
    pub mu_perp_sq: f64,
    /// |⟨μ_∥⟩|², both in-plane components together (C²·m²).
    #[serde(rename = "mu_par_sq_C2m2")]
    pub mu_par_sq: f64,
}

impl Transition {
    pub fn new(omega: f64, mu_perp_sq: f64, mu_par_sq: f64) -> Result<Self> {
        require_positive("transition omega", omega)?;
        if !(mu_perp_sq >= 0.0 && mu_par_sq >= 0.0) || !(mu_perp_sq.is_finite() && mu_par_sq.is_finite()) {
            return Err(Error::Domain(format!(
                "dipole moments must be non-negative, got perp={mu_perp_sq:e} par={mu_par_sq:e}"
            )));
        }
        if mu_perp_sq == 0.0 && mu_par_sq == 0.0 {
            return Err(Error::Domain("transition has zero dipole moment".into()));
        }
        Ok(Self {
            omega,
            mu_perp_sq,
            mu_par_sq,
        })
    }

    /// Unoriented transition with total dipole μ² split 1:2 between the
    /// normal and in-plane directions.
    pub fn isotropic(omega: f64, mu_sq: f64) -> Result<Self> {
        Self::new(omega, mu_sq / 3.0, 2.0 * mu_sq / 3.0)
    }

    /// Reduced wavelength Λ = ħc/(W_j − W_g) = c/ω.
    pub fn lambda_bar(&self) -> f64 {
        C / self.omega
    }

    pub fn mu_sq(&self) -> f64 {
        self.mu_perp_sq + self.mu_par_sq
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AtomSpecies {
    pub name: String,
    /// Mass in kg.
    pub mass: f64,
    /// Spontaneous emission rate Γ of the working transition (1/s).
    pub gamma0: f64,
    transitions: Vec<Transition>,
}

impl AtomSpecies {
    pub fn new(name: impl Into<String>, mass: f64, gamma0: f64, transitions: Vec<Transition>) -> Result<Self> {
        require_positive("mass", mass)?;
        require_positive("gamma0", gamma0)?;
        if transitions.is_empty() {
            return Err(Error::Domain("species needs at least one transition".into()));
        }
        for t in &transitions {
            Transition::new(t.omega, t.mu_perp_sq, t.mu_par_sq)?;
        }
        Ok(Self {
            name: name.into(),
            mass,
            gamma0,
            transitions,
        })
    }

    /// Single isotropic transition whose dipole is fixed by the linewidth.
    pub fn two_level(name: impl Into<String>, mass: f64, gamma0: f64, omega: f64) -> Result<Self> {
        let mu_sq = dipole_from_linewidth(gamma0, omega)?;
        Self::new(name, mass, gamma0, vec![Transition::isotropic(omega, mu_sq)?])
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    /// The transition that couples to the mirror laser.
    pub fn working(&self) -> &Transition {
        &self.transitions[0]
    }

    pub fn to_file(&self) -> SpeciesFile {
        SpeciesFile {
            name: self.name.clone(),
            mass_amu: self.mass / AMU,
            gamma0_s: self.gamma0,
            transitions: self.transitions.clone(),
        }
    }
}

/// μ² = 3πε₀ħc³Γ/ω³, the dipole strength of a transition with linewidth Γ.
pub fn dipole_from_linewidth(gamma0: f64, omega: f64) -> Result<f64> {
    require_positive("gamma0", gamma0)?;
    require_positive("omega", omega)?;
    Ok(3.0 * PI * EPS0 * HBAR * (C * C * C) * gamma0 / (omega * omega * omega))
}

/// Inverse of [`dipole_from_linewidth`].
pub fn linewidth_from_dipole(mu_sq: f64, omega: f64) -> f64 {
    mu_sq * (omega * omega * omega) / (3.0 * PI * EPS0 * HBAR * (C * C * C))
}

pub const RB85_OMEGA: f64 = 2.42e15;
pub const RB85_GAMMA0: f64 = 6.1e6;

/// ⁸⁵Rb model used throughout: ω₀ = 2.42×10¹⁵ rad/s, Γ₀ = 6.1×10⁶ s⁻¹,
/// mass 85 u, one isotropic transition.
pub fn rb85_default() -> AtomSpecies {
    AtomSpecies::two_level("Rb85-model", 85.0 * AMU, RB85_GAMMA0, RB85_OMEGA)
        .expect("built-in species is valid")
}

/// On-disk species description (JSON).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpeciesFile {
    #[serde(default = "default_species_name")]
    pub name: String,
    pub mass_amu: f64,
    pub gamma0_s: f64,
    pub transitions: Vec<Transition>,
}

fn default_species_name() -> String {
    "unnamed".into()
}

impl SpeciesFile {
    pub fn build(&self) -> Result<AtomSpecies> {
        require_positive("mass_amu", self.mass_amu)?;
        AtomSpecies::new(self.name.clone(), self.mass_amu * AMU, self.gamma0_s, self.transitions.clone())
    }
}
