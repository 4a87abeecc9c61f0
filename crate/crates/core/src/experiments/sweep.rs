//! Parameter sweeps over a numeric config field.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::config::{Assets, ScenarioConfig};
use crate::dynamics::{energy_audit, integrate};
use crate::error::{Error, Result};

pub const SWEEP_HEADER: &str = "index,value,outcome,z_min_m,t_event_s,energy_drift";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    /// Dot path into the config JSON, e.g. `initial.vz_mps`.
    pub axis: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub index: usize,
    pub value: f64,
    pub outcome: &'static str,
    pub z_min: f64,
    pub t_event: f64,
    /// Relative energy drift; `None` for dissipative scenarios.
    pub energy_drift: Option<f64>,
}

fn leaf<'a>(root: &'a mut Value, axis: &str) -> Result<&'a mut Value> {
    let unresolved = || Error::Config(format!("sweep axis `{axis}` does not name a numeric config field"));
    let mut node = root;
    for key in axis.split('.') {
        node = node.as_object_mut().and_then(|m| m.get_mut(key)).ok_or_else(unresolved)?;
    }
    if node.is_number() {
        Ok(node)
    } else {
        Err(unresolved())
    }
}

/// A copy of `cfg` with the field at `axis` set to `value`.
pub fn with_axis(cfg: &ScenarioConfig, axis: &str, value: f64) -> Result<ScenarioConfig> {
    let mut doc = serde_json::to_value(cfg).expect("config serializes");
    let slot = leaf(&mut doc, axis)?;
    *slot = serde_json::Number::from_f64(value)
        .map(Value::Number)
        .ok_or_else(|| Error::Config(format!("sweep value {value} is not finite")))?;
    serde_json::from_value(doc).map_err(|e| Error::Config(format!("sweep axis `{axis}` = {value}: {e}")))
}

/// Integrates one trajectory per value, in parallel; rows keep input order.
pub fn sweep(cfg: &ScenarioConfig, assets: &Assets, axis: &str, values: &[f64]) -> Result<Vec<SweepRow>> {
    let base = cfg.self_contained(assets)?;
    leaf(&mut serde_json::to_value(&base).expect("config serializes"), axis)?;
    values
        .par_iter()
        .enumerate()
        .map(|(index, &value)| {
            let resolved = with_axis(&base, axis, value)?.resolve(assets)?;
            let sc = &resolved.scenario;
            let result = integrate(sc)?;
            let energy_drift = if sc.is_conservative() { Some(energy_audit(&result, sc)?) } else { None };
            Ok(SweepRow {
                index,
                value,
                outcome: result.outcome.tag(),
                z_min: result.z_min(),
                t_event: result.event_time(),
                energy_drift,
            })
        })
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        let _ = write!(out, "{},{:e},{},{:e},{:e},", r.index, r.value, r.outcome, r.z_min, r.t_event);
        if let Some(d) = r.energy_drift {
            let _ = write!(out, "{d:e}");
        }
        out.push('\n');
    }
    out
}

/// Bisects on the normal approach speed |v_z| between a reflected speed
/// `lo` and an adsorbed speed `hi` until the bracket is narrower than `tol`.
/// Returns (fastest reflected, slowest adsorbed).
pub fn boundary_speed(cfg: &ScenarioConfig, assets: &Assets, lo: f64, hi: f64, tol: f64) -> Result<(f64, f64)> {
    let base = cfg.self_contained(assets)?;
    let reflects = |speed: f64| -> Result<bool> {
        let sc = with_axis(&base, "initial.vz_mps", -speed)?.resolve(assets)?.scenario;
        Ok(integrate(&sc)?.outcome.is_reflected())
    };
    if !(0.0 <= lo && lo < hi && tol > 0.0) {
        return Err(Error::Domain("boundary search needs 0 ≤ lo < hi and tol > 0".into()));
    }
    if !reflects(lo)? || reflects(hi)? {
        return Err(Error::Domain(format!(
            "speeds [{lo}, {hi}] m/s do not bracket the reflection boundary"
        )));
    }
    let (mut a, mut b) = (lo, hi);
    while b - a > tol {
        let m = 0.5 * (a + b);
        if reflects(m)? {
            a = m;
        } else {
            b = m;
        }
    }
    Ok((a, b))
}
