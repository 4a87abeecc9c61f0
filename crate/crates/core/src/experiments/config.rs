//! JSON scenario documents.
//!
//! Every physical quantity is SI and carries its unit in the key name
//! (`z_m`, `intensity_W_per_m2`, ...). A handful of keys accept a second,
//! explicitly named unit (`angle_internal_deg`, `transition_energy_eV`,
//! `detuning0_gamma0`) so presets can use the customary units directly.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::constants::{AMU, E_CHARGE, G_ACCEL, HBAR};
use crate::dynamics::{AtomState, ForceToggles, IntegratorSettings, Scenario};
use crate::error::{Error, Result};
use crate::optics::{build_profile, LaserField, MirrorStack, Polarization};
use crate::species::{rb85_default, AtomSpecies, SpeciesFile};
use crate::surface::tabulated::Row;
use crate::surface::{GridSpec, KernelChoice, Spacing, TabulatedCurve};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub schema_version: u32,
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub species: SpeciesSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stack: Option<MirrorStack>,
    /// Absent means field-free.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub laser: Option<LaserSpec>,
    pub kernel: KernelSpec,
    #[serde(default = "one")]
    pub potential_scale: f64,
    #[serde(default)]
    pub forces: ForceToggles,
    #[serde(rename = "g_accel_m_s2", default = "default_g")]
    pub g_accel: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<AtomState>,
    #[serde(default)]
    pub integrator: IntegratorSettings,
    #[serde(default)]
    pub output: OutputSpec,
}

fn one() -> f64 {
    1.0
}

fn default_g() -> f64 {
    G_ACCEL
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SpeciesSpec {
    /// Built-in species: `rb85` or `rb87`.
    Preset(String),
    /// Species file, relative to the config's directory.
    Path(String),
    Inline(SpeciesFile),
    /// One isotropic transition with its dipole fixed by the linewidth.
    TwoLevel(TwoLevelSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoLevelSpec {
    pub name: String,
    pub mass_amu: f64,
    pub gamma0_s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_rad_s: Option<f64>,
    #[serde(rename = "transition_energy_eV", default, skip_serializing_if = "Option::is_none")]
    pub transition_energy_ev: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LaserSpec {
    #[serde(rename = "intensity_W_per_m2")]
    pub intensity: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle_internal_rad: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle_internal_deg: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detuning0_rad_s: Option<f64>,
    /// Detuning in units of the species' Γ₀.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detuning0_gamma0: Option<f64>,
    #[serde(default)]
    pub polarization: Polarization,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j_override_s2: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum KernelSpec {
    OscillatoryImage,
    GroundStateQuadrature,
    /// CSV `z_m,u_perp_J,u_par_J` by path, or the same rows inline.
    Tabulated {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        path: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rows: Option<Vec<Row>>,
    },
}

impl KernelSpec {
    /// Parses the command-line form: `oscillatory_image`,
    /// `ground_state_quadrature` or `tabulated=<path>`.
    pub fn parse_cli(s: &str) -> Result<Self> {
        match s {
            "oscillatory_image" | "oscillatory" => Ok(KernelSpec::OscillatoryImage),
            "ground_state_quadrature" | "quadrature" => Ok(KernelSpec::GroundStateQuadrature),
            _ => match s.strip_prefix("tabulated=") {
                Some(p) if !p.is_empty() => Ok(KernelSpec::Tabulated {
                    path: Some(p.to_string()),
                    rows: None,
                }),
                _ => Err(Error::Config(format!(
                    "unknown kernel `{s}` (expected oscillatory_image, ground_state_quadrature or tabulated=<path>)"
                ))),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    /// Trajectory sampling interval; absent records every accepted step.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_dt_s: Option<f64>,
    #[serde(default = "default_curve")]
    pub curve: GridSpec,
}

fn default_curve() -> GridSpec {
    GridSpec::new(10e-9, 1.5e-6, 600, Spacing::Log)
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self {
            sample_dt_s: None,
            curve: default_curve(),
        }
    }
}

/// Where relative paths in a config are looked up.
#[derive(Debug, Clone)]
pub enum Assets {
    Dir(PathBuf),
    /// Files shipped inside the binary (presets).
    Embedded(&'static BTreeMap<&'static str, &'static str>),
}

impl Assets {
    pub fn read(&self, rel: &str) -> Result<(String, String)> {
        match self {
            Assets::Dir(dir) => {
                let p = Path::new(rel);
                let full = if p.is_absolute() { p.to_path_buf() } else { dir.join(p) };
                let text = std::fs::read_to_string(&full).map_err(|e| Error::io(&full, e))?;
                Ok((full.display().to_string(), text))
            }
            Assets::Embedded(map) => map
                .get(rel)
                .map(|t| (rel.to_string(), t.to_string()))
                .ok_or_else(|| Error::Config(format!("no embedded asset named `{rel}`"))),
        }
    }
}

/// A config with its referenced files loaded.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub name: String,
    pub scenario: Scenario,
    pub curve: GridSpec,
    /// Whether the config carried an initial state.
    pub has_initial: bool,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid scenario JSON: {e}")))?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                cfg.schema_version
            )));
        }
        Ok(cfg)
    }

    /// Reads a config file; relative paths inside resolve against its directory.
    pub fn load(path: &Path) -> Result<(Self, Assets)> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((Self::from_json(&text)?, Assets::Dir(dir)))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn build_species(&self, assets: &Assets) -> Result<AtomSpecies> {
        match &self.species {
            SpeciesSpec::Preset(name) => match name.as_str() {
                "rb85" => Ok(rb85_default()),
                "rb87" => {
                    let mut file = rb85_default().to_file();
                    file.name = "Rb87-model".into();
                    file.mass_amu = 87.0;
                    file.build()
                }
                other => Err(Error::Config(format!("unknown species preset `{other}`"))),
            },
            SpeciesSpec::Path(p) => {
                let (_, text) = assets.read(p)?;
                let file: SpeciesFile =
                    serde_json::from_str(&text).map_err(|e| Error::Config(format!("species file {p}: {e}")))?;
                file.build()
            }
            SpeciesSpec::Inline(file) => file.build(),
            SpeciesSpec::TwoLevel(t) => {
                let omega = match (t.omega_rad_s, t.transition_energy_ev) {
                    (Some(w), None) => w,
                    (None, Some(ev)) => ev * E_CHARGE / HBAR,
                    _ => {
                        return Err(Error::Config(
                            "two_level species needs exactly one of omega_rad_s, transition_energy_eV".into(),
                        ))
                    }
                };
                AtomSpecies::two_level(t.name.clone(), t.mass_amu * AMU, t.gamma0_s, omega)
            }
        }
    }

    pub fn build_kernel(&self, assets: &Assets) -> Result<KernelChoice> {
        Ok(match &self.kernel {
            KernelSpec::OscillatoryImage => KernelChoice::OscillatoryImage,
            KernelSpec::GroundStateQuadrature => KernelChoice::GroundStateQuadrature,
            KernelSpec::Tabulated { path, rows } => {
                let curve = match (path, rows) {
                    (Some(p), None) => {
                        let (label, text) = assets.read(p)?;
                        TabulatedCurve::parse_csv(label, &text)?
                    }
                    (None, Some(r)) => TabulatedCurve::from_rows("inline", r)?,
                    _ => return Err(Error::Config("tabulated kernel needs exactly one of path, rows".into())),
                };
                KernelChoice::Tabulated(Arc::new(curve))
            }
        })
    }

    fn build_laser(&self, spec: &LaserSpec, species: &AtomSpecies) -> Result<LaserField> {
        let angle = match (spec.angle_internal_rad, spec.angle_internal_deg) {
            (Some(r), None) => r,
            (None, Some(d)) => d.to_radians(),
            _ => return Err(Error::Config("laser needs exactly one of angle_internal_rad, angle_internal_deg".into())),
        };
        let detuning0 = match (spec.detuning0_rad_s, spec.detuning0_gamma0) {
            (Some(d), None) => d,
            (None, Some(g)) => g * species.gamma0,
            _ => return Err(Error::Config("laser needs exactly one of detuning0_rad_s, detuning0_gamma0".into())),
        };
        Ok(LaserField {
            intensity: spec.intensity,
            angle_internal: angle,
            detuning0,
            polarization: spec.polarization,
            j_override: spec.j_override_s2,
        })
    }

    pub fn resolve(&self, assets: &Assets) -> Result<Resolved> {
        let species = self.build_species(assets)?;
        let kernel = self.build_kernel(assets)?;
        let field = match &self.laser {
            None => None,
            Some(spec) => {
                let stack = self
                    .stack
                    .ok_or_else(|| Error::Config("a laser requires a mirror `stack`".into()))?;
                let laser = self.build_laser(spec, &species)?;
                Some(build_profile(&stack, &laser, &species)?)
            }
        };
        if !(self.potential_scale > 0.0 && self.potential_scale.is_finite()) {
            return Err(Error::Config("potential_scale must be positive".into()));
        }
        let has_initial = self.initial.is_some();
        let initial = self.initial.unwrap_or(AtomState {
            t: 0.0,
            x: 0.0,
            z: 1e-6,
            vx: 0.0,
            vz: 0.0,
        });
        let scenario = Scenario {
            species,
            kernel,
            potential_scale: self.potential_scale,
            field,
            forces: self.forces,
            g_accel: self.g_accel,
            initial,
            integrator: self.integrator,
            sample_dt: self.output.sample_dt_s,
        };
        self.output.curve.points()?;
        Ok(Resolved {
            name: self.name.clone(),
            scenario,
            curve: self.output.curve,
            has_initial,
        })
    }

    /// Copy with every external reference replaced by inline data, so the
    /// config alone reproduces a run.
    pub fn self_contained(&self, assets: &Assets) -> Result<Self> {
        let mut out = self.clone();
        out.species = SpeciesSpec::Inline(self.build_species(assets)?.to_file());
        if let KernelSpec::Tabulated { path: Some(_), .. } = &self.kernel {
            if let KernelChoice::Tabulated(t) = self.build_kernel(assets)? {
                out.kernel = KernelSpec::Tabulated {
                    path: None,
                    rows: Some(t.rows()),
                };
            }
        }
        Ok(out)
    }
}
