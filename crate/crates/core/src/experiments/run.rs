//! Runs that write files, and the manifests that replay them.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::config::{Assets, ScenarioConfig};
use super::output::{potential_csv, trajectory_csv, vdw_reference_csv};
use super::report::containment_report;
use super::sweep::{sweep, sweep_csv, SweepSpec};
use crate::dynamics::integrate;
use crate::error::{Error, Result};

pub const MANIFEST_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Product {
    Potential,
    VdwReference,
    Trajectory,
    Report,
    Sweep,
}

impl Product {
    pub fn file_name(&self, run: &str) -> String {
        match self {
            Product::Potential => format!("{run}_potential.csv"),
            Product::VdwReference => format!("{run}_vdw_reference.csv"),
            Product::Trajectory => format!("{run}_trajectory.csv"),
            Product::Report => format!("{run}_report.json"),
            Product::Sweep => format!("{run}_sweep.csv"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub file: String,
    pub bytes: usize,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub manifest_version: u32,
    pub tool: String,
    pub version: String,
    pub products: Vec<Product>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    /// Self-contained: species and tables inline.
    pub config: ScenarioConfig,
    pub outputs: Vec<OutputRecord>,
}

impl Manifest {
    pub fn file_name(run: &str) -> String {
        format!("{run}_manifest.json")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("invalid manifest {}: {e}", path.display())))
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Computes one product in memory.
pub fn render(cfg: &ScenarioConfig, assets: &Assets, product: Product, sweep_spec: Option<&SweepSpec>) -> Result<String> {
    let r = cfg.resolve(assets)?;
    let sc = &r.scenario;
    match product {
        Product::Potential => potential_csv(sc, r.curve),
        Product::VdwReference => vdw_reference_csv(sc, r.curve),
        Product::Report => {
            let report = containment_report(sc, r.curve)?;
            Ok(serde_json::to_string_pretty(&report).expect("report serializes") + "\n")
        }
        Product::Trajectory => {
            if !r.has_initial {
                return Err(Error::Config("a trajectory needs an `initial` state".into()));
            }
            Ok(trajectory_csv(&integrate(sc)?))
        }
        Product::Sweep => {
            let spec = sweep_spec.ok_or_else(|| Error::Config("sweep product needs an axis and values".into()))?;
            Ok(sweep_csv(&sweep(cfg, assets, &spec.axis, &spec.values)?))
        }
    }
}

/// Renders every product, writes them and a manifest into `out_dir`.
/// Returns the manifest and the paths written (manifest last).
pub fn run_products(
    cfg: &ScenarioConfig,
    assets: &Assets,
    products: &[Product],
    sweep_spec: Option<&SweepSpec>,
    out_dir: &Path,
) -> Result<(Manifest, Vec<PathBuf>)> {
    let config = cfg.self_contained(assets)?;
    let mut rendered = Vec::with_capacity(products.len());
    for &p in products {
        rendered.push((p.file_name(&cfg.name), render(&config, assets, p, sweep_spec)?));
    }
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut outputs = Vec::new();
    let mut written = Vec::new();
    for (name, body) in rendered {
        let path = out_dir.join(&name);
        std::fs::write(&path, &body).map_err(|e| Error::io(&path, e))?;
        outputs.push(OutputRecord {
            file: name,
            bytes: body.len(),
            sha256: sha256_hex(body.as_bytes()),
        });
        written.push(path);
    }
    let manifest = Manifest {
        manifest_version: MANIFEST_VERSION,
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        products: products.to_vec(),
        sweep: sweep_spec.cloned(),
        config,
        outputs,
    };
    let path = out_dir.join(Manifest::file_name(&cfg.name));
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    written.push(path);
    Ok((manifest, written))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplayCheck {
    pub file: String,
    pub expected_sha256: String,
    pub actual_sha256: String,
    pub matches: bool,
}

/// Re-renders every output recorded in a manifest and compares checksums.
/// Nothing is written.
pub fn replay(manifest: &Manifest) -> Result<Vec<ReplayCheck>> {
    if manifest.manifest_version != MANIFEST_VERSION {
        return Err(Error::Config(format!("unsupported manifest_version {}", manifest.manifest_version)));
    }
    let assets = Assets::Dir(PathBuf::new());
    manifest
        .products
        .iter()
        .zip(&manifest.outputs)
        .map(|(&p, rec)| {
            let body = render(&manifest.config, &assets, p, manifest.sweep.as_ref())?;
            let actual = sha256_hex(body.as_bytes());
            Ok(ReplayCheck {
                file: rec.file.clone(),
                matches: actual == rec.sha256,
                expected_sha256: rec.sha256.clone(),
                actual_sha256: actual,
            })
        })
        .collect()
}
