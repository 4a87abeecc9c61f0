//! Built-in scenarios and the data files they reference.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::LazyLock;

use super::config::{Assets, ScenarioConfig};
use super::run::{run_products, Manifest, Product};
use crate::constants::HBAR;
use crate::error::{Error, Result};
use crate::species::{rb85_default, RB85_GAMMA0};
use crate::surface::tabulated::{synthetic_rows, GaussianBarrier, Row, CSV_HEADER};

pub const PRESET_NAMES: [&str; 4] = ["fig1", "fig3", "fig4-low", "fig4-free"];

pub const FIG4_TABLE: &str = "fig4_two_barrier.csv";

static EMBEDDED: LazyLock<BTreeMap<&'static str, &'static str>> = LazyLock::new(|| {
    BTreeMap::from([
        ("fig1.json", include_str!("../../presets/fig1.json")),
        ("fig3.json", include_str!("../../presets/fig3.json")),
        ("fig4-low.json", include_str!("../../presets/fig4-low.json")),
        ("fig4-free.json", include_str!("../../presets/fig4-free.json")),
        (FIG4_TABLE, include_str!("../../presets/fig4_two_barrier.csv")),
        ("species/rb85.json", include_str!("../../presets/species/rb85.json")),
        ("species/rb87.json", include_str!("../../presets/species/rb87.json")),
    ])
});

pub fn embedded_assets() -> Assets {
    Assets::Embedded(&EMBEDDED)
}

/// Products written by each preset.
pub fn preset_products(name: &str) -> Result<&'static [Product]> {
    use Product::*;
    Ok(match name {
        "fig1" => &[Potential, VdwReference, Report],
        "fig3" => &[Potential, Trajectory, Report],
        "fig4-low" | "fig4-free" => &[Potential, Trajectory, Report],
        other => {
            return Err(Error::Config(format!(
                "unknown preset `{other}` (available: {})",
                PRESET_NAMES.join(", ")
            )))
        }
    })
}

pub fn preset_config(name: &str) -> Result<ScenarioConfig> {
    preset_products(name)?;
    let (_, text) = embedded_assets().read(&format!("{name}.json"))?;
    ScenarioConfig::from_json(&text)
}

/// Writes a preset's outputs and manifest into `out_dir`.
pub fn run_preset(name: &str, out_dir: &Path) -> Result<(Manifest, Vec<PathBuf>)> {
    let products = preset_products(name)?;
    let cfg = preset_config(name)?;
    run_products(&cfg, &embedded_assets(), products, None, out_dir)
}

/// Barrier centres, widths and heights (ħΓ₀) of the two-barrier table:
/// (centre, width, field-free height, field-oriented height).
pub const FIG4_BARRIERS: [(f64, f64, f64, f64); 2] = [(340e-9, 40e-9, 1.05, 0.57), (865e-9, 50e-9, 1.62, 0.40)];

/// Field orientation angle of a TM evanescent wave at 42° in an ε₁ = 3
/// substrate: arctan(k_∥/k_z), independent of frequency.
pub fn fig4_gamma() -> f64 {
    let (eps1, phi) = (3.0f64, 42f64.to_radians());
    let n_sin = eps1.sqrt() * phi.sin();
    (n_sin / (n_sin * n_sin - 1.0).sqrt()).atan()
}

fn fig4_grid() -> Vec<f64> {
    let (lo, knee) = (0.5e-9f64, 100e-9f64);
    let n_log = 200;
    let mut z: Vec<f64> = (0..n_log)
        .map(|i| lo * (knee / lo).powf(i as f64 / n_log as f64))
        .collect();
    z.extend((0..=1450).map(|i| (100 + 2 * i) as f64 * 1e-9));
    z
}

/// Synthetic field-free/field-oriented table with barriers at 340 and
/// 865 nm on top of the ⁸⁵Rb image tail.
pub fn fig4_two_barrier_rows() -> Vec<Row> {
    let unit = HBAR * RB85_GAMMA0;
    let gamma = fig4_gamma();
    let barriers: Vec<GaussianBarrier> = FIG4_BARRIERS
        .iter()
        .map(|&(c, w, free, field)| {
            GaussianBarrier::with_mixing(c, w, free * unit, field * unit, gamma).expect("γ is not 45°")
        })
        .collect();
    let t = *rb85_default().working();
    synthetic_rows(&fig4_grid(), &barriers, Some((t.mu_perp_sq, t.mu_par_sq)))
}

pub fn fig4_two_barrier_csv() -> String {
    let mut out = String::new();
    out.push_str("# Synthetic two-barrier surface potential for the 85Rb model.\n");
    for (c, w, free, field) in FIG4_BARRIERS {
        let _ = writeln!(
            out,
            "# barrier at {:.0} nm, width {:.0} nm: U_perp+U_par = {free} hbar*Gamma0, U_perp sin^2(g)+U_par cos^2(g) = {field} hbar*Gamma0",
            c * 1e9,
            w * 1e9
        );
    }
    let _ = writeln!(out, "# g = {:.6} rad; image tail -mu^2/(32|64 pi eps0 z^3)", fig4_gamma());
    out.push_str(CSV_HEADER);
    out.push('\n');
    for [z, p, q] in fig4_two_barrier_rows() {
        let _ = writeln!(out, "{z:e},{p:e},{q:e}");
    }
    out
}

/// Species files shipped with the presets.
pub fn species_file_json(name: &str) -> Result<String> {
    let mut file = rb85_default().to_file();
    match name {
        "rb85" => {}
        "rb87" => {
            file.name = "Rb87-model".into();
            file.mass_amu = 87.0;
        }
        other => return Err(Error::Config(format!("no species file for `{other}`"))),
    }
    Ok(serde_json::to_string_pretty(&file).expect("species serializes") + "\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Generated data files are checked in; `ATOMWALL_BLESS=1` rewrites them.
    #[test]
    fn shipped_data_matches_generators() {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("presets");
        let expected = [
            (FIG4_TABLE.to_string(), fig4_two_barrier_csv()),
            ("species/rb85.json".into(), species_file_json("rb85").unwrap()),
            ("species/rb87.json".into(), species_file_json("rb87").unwrap()),
        ];
        for (name, body) in expected {
            let path = dir.join(&name);
            if std::env::var_os("ATOMWALL_BLESS").is_some() {
                std::fs::write(&path, &body).unwrap();
            }
            let shipped = std::fs::read_to_string(&path).unwrap();
            assert!(shipped == body, "{name} is stale; rerun with ATOMWALL_BLESS=1");
        }
    }

    #[test]
    fn every_preset_parses_and_resolves() {
        for name in PRESET_NAMES {
            let cfg = preset_config(name).unwrap();
            assert_eq!(cfg.name, name);
            cfg.resolve(&embedded_assets()).unwrap();
        }
        assert!(matches!(preset_config("fig2"), Err(Error::Config(_))));
    }

    #[test]
    fn gamma_matches_geometry() {
        assert!((fig4_gamma().to_degrees() - 63.18).abs() < 0.01);
    }
}
