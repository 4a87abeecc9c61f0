//! CSV emission. Floats use Rust's shortest round-trip form so a parsed
//! file reproduces the computed values exactly.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::dynamics::{Scenario, TrajectoryResult};
use crate::error::Result;
use crate::surface::{vdw_limit, GridSpec};

pub const POTENTIAL_HEADER: &str = "z_m,u_perp_J,u_par_J,u_sum_J";
pub const POTENTIAL_FIELD_COLUMNS: &str = ",u_d_J,u_f_J,u_total_J";
pub const VDW_HEADER: &str = "z_m,u_vdw_J";
pub const TRAJECTORY_HEADER: &str = "t_s,x_m,z_m,vx_mps,vz_mps";

/// One potential row: z, U_⊥, U_∥, U_⊥+U_∥ and, with a field, U_d, U_g^f,
/// U_total. Surface terms carry the scenario's `potential_scale`.
pub fn potential_rows(sc: &Scenario, grid: GridSpec) -> Result<Vec<Vec<f64>>> {
    let z = grid.points()?;
    z.par_iter()
        .map(|&zi| {
            let c = sc.kernel.components(zi, &sc.species)?.scaled(sc.potential_scale);
            let mut row = vec![zi, c.perp, c.par, c.sum()];
            if let Some(p) = &sc.field {
                let ud = sc.dipole_potential(zi, 0.0)?;
                let uf = c.oriented(p.gamma_at(zi));
                row.extend([ud, uf, uf + ud]);
            }
            Ok(row)
        })
        .collect()
}

pub fn potential_csv(sc: &Scenario, grid: GridSpec) -> Result<String> {
    let mut header = POTENTIAL_HEADER.to_string();
    if sc.field.is_some() {
        header.push_str(POTENTIAL_FIELD_COLUMNS);
    }
    Ok(rows_csv(&header, &potential_rows(sc, grid)?))
}

/// The short-range image law −Σ(μ_⊥²/32 + μ_∥²/64)/(πε₀z³), scaled.
pub fn vdw_reference_csv(sc: &Scenario, grid: GridSpec) -> Result<String> {
    let rows = grid
        .points()?
        .into_iter()
        .map(|z| Ok(vec![z, sc.potential_scale * vdw_limit(z, &sc.species)?]))
        .collect::<Result<Vec<_>>>()?;
    Ok(rows_csv(VDW_HEADER, &rows))
}

pub fn trajectory_csv(result: &TrajectoryResult) -> String {
    let mut out = String::from(TRAJECTORY_HEADER);
    out.push('\n');
    for s in &result.samples {
        let _ = writeln!(out, "{:e},{:e},{:e},{:e},{:e}", s.t, s.x, s.z, s.vx, s.vz);
    }
    let _ = writeln!(
        out,
        "# outcome={} zmin={:e} t={:e}",
        result.outcome.tag(),
        result.z_min(),
        result.event_time()
    );
    out
}

fn rows_csv(header: &str, rows: &[Vec<f64>]) -> String {
    let mut out = String::with_capacity(rows.len() * 96);
    out.push_str(header);
    out.push('\n');
    for row in rows {
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "{v:e}");
        }
        out.push('\n');
    }
    out
}

/// Parses a numeric CSV produced here: header line, then rows, `#` lines skipped.
pub fn parse_numeric_csv(text: &str) -> Option<(Vec<String>, Vec<Vec<f64>>)> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#') && !l.is_empty());
    let header: Vec<String> = lines.next()?.split(',').map(str::to_string).collect();
    let rows = lines
        .map(|l| l.split(',').map(|f| f.parse().ok()).collect::<Option<Vec<f64>>>())
        .collect::<Option<Vec<_>>>()?;
    Some((header, rows))
}
