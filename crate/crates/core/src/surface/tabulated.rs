//! Potential curves supplied as data.
//!
//! The table holds U_⊥ and U_∥ against z. Inside the table each component is
//! a monotone cubic. Below the first sample (down to half of it) the value
//! follows a 1/z³ law matched at the first sample; above the last sample it
//! decays as 1/z³ up to 1.5× the last distance and is zero beyond.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::Components;
use crate::error::{Error, Result};
use crate::numeric::Pchip;

pub const CSV_HEADER: &str = "z_m,u_perp_J,u_par_J";
pub const MIN_ROWS: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedCurve {
    label: String,
    perp: Pchip,
    par: Pchip,
}

/// One table row: z [m], U_⊥ [J], U_∥ [J].
pub type Row = [f64; 3];

impl TabulatedCurve {
    pub fn from_rows(label: impl Into<String>, rows: &[Row]) -> Result<Self> {
        if rows.len() < MIN_ROWS {
            return Err(Error::Config(format!(
                "tabulated curve needs at least {MIN_ROWS} rows, got {}",
                rows.len()
            )));
        }
        for (i, r) in rows.iter().enumerate() {
            if !r.iter().all(|v| v.is_finite()) {
                return Err(Error::Config(format!("row {i}: non-finite value")));
            }
            if r[0] <= 0.0 {
                return Err(Error::Config(format!("row {i}: z must be positive")));
            }
            if i > 0 && r[0] <= rows[i - 1][0] {
                return Err(Error::Config(format!("row {i}: z not strictly increasing")));
            }
        }
        let z: Vec<f64> = rows.iter().map(|r| r[0]).collect();
        Ok(Self {
            label: label.into(),
            perp: Pchip::new(z.clone(), rows.iter().map(|r| r[1]).collect()),
            par: Pchip::new(z, rows.iter().map(|r| r[2]).collect()),
        })
    }

    pub fn parse_csv(label: impl Into<String>, text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#'));
        match lines.next() {
            Some(h) if h.trim() == CSV_HEADER => {}
            other => {
                return Err(Error::Config(format!(
                    "tabulated curve header must be `{CSV_HEADER}`, found `{}`",
                    other.unwrap_or("")
                )))
            }
        }
        let mut rows = Vec::new();
        for (n, line) in lines.enumerate() {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 3 {
                return Err(Error::Config(format!("data row {}: expected 3 fields", n + 1)));
            }
            let mut row = [0.0; 3];
            for (slot, f) in row.iter_mut().zip(&fields) {
                *slot = f
                    .parse()
                    .map_err(|_| Error::Config(format!("data row {}: bad number `{f}`", n + 1)))?;
            }
            rows.push(row);
        }
        Self::from_rows(label, &rows)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse_csv(path.display().to_string(), &text)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn rows(&self) -> Vec<Row> {
        self.perp
            .x()
            .iter()
            .zip(self.perp.y().iter().zip(self.par.y()))
            .map(|(&z, (&p, &q))| [z, p, q])
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for [z, p, q] in self.rows() {
            let _ = writeln!(out, "{z:e},{p:e},{q:e}");
        }
        out
    }

    pub fn z_first(&self) -> f64 {
        self.perp.x()[0]
    }

    pub fn z_last(&self) -> f64 {
        *self.perp.x().last().unwrap()
    }

    /// Value and slope of each component.
    pub fn eval(&self, z: f64) -> Result<(Components, Components)> {
        let (first, last) = (self.z_first(), self.z_last());
        if z < 0.5 * first {
            return Err(Error::Range {
                z,
                lo: 0.5 * first,
                hi: f64::INFINITY,
            });
        }
        if z > 1.5 * last {
            return Ok((Components::ZERO, Components::ZERO));
        }
        let anchor = if z < first {
            Some(0)
        } else if z > last {
            Some(self.perp.x().len() - 1)
        } else {
            None
        };
        match anchor {
            Some(i) => {
                let z0 = self.perp.x()[i];
                let k = (z0 / z).powi(3);
                let u = Components {
                    perp: self.perp.y()[i] * k,
                    par: self.par.y()[i] * k,
                };
                Ok((u, u.scaled(-3.0 / z)))
            }
            None => {
                let (p, dp) = self.perp.eval_with_slope(z);
                let (q, dq) = self.par.eval_with_slope(z);
                Ok((Components { perp: p, par: q }, Components { perp: dp, par: dq }))
            }
        }
    }
}

/// Serialized form: either a path to a CSV file or the rows inline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TableSource {
    Path { path: String },
    Rows { rows: Vec<Row> },
}

/// A Gaussian bump added to each component of a synthetic table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianBarrier {
    #[serde(rename = "center_m")]
    pub center: f64,
    #[serde(rename = "width_m")]
    pub width: f64,
    #[serde(rename = "perp_J")]
    pub perp: f64,
    #[serde(rename = "par_J")]
    pub par: f64,
}

impl GaussianBarrier {
    /// Splits a barrier between components so that the field-free sum peaks
    /// at `field_free` and the orientation-mixed potential
    /// `U_⊥ sin²γ + U_∥ cos²γ` peaks at `field` (both in J).
    pub fn with_mixing(center: f64, width: f64, field_free: f64, field: f64, gamma: f64) -> Result<Self> {
        let s2 = gamma.sin().powi(2);
        let c2 = gamma.cos().powi(2);
        if (s2 - c2).abs() < 1e-9 {
            return Err(Error::Domain("orientation angle of 45° cannot separate components".into()));
        }
        let perp = (field - field_free * c2) / (s2 - c2);
        Ok(Self {
            center,
            width,
            perp,
            par: field_free - perp,
        })
    }

    pub fn profile(&self, z: f64) -> f64 {
        let d = (z - self.center) / self.width;
        (-0.5 * d * d).exp()
    }
}

/// Builds table rows from Gaussian barriers plus an optional static image
/// tail −μ_⊥²/(32πε₀z³), −μ_∥²/(64πε₀z³) given as (μ_⊥², μ_∥²).
pub fn synthetic_rows(grid: &[f64], barriers: &[GaussianBarrier], image_tail: Option<(f64, f64)>) -> Vec<Row> {
    use crate::constants::EPS0;
    use std::f64::consts::PI;
    grid.iter()
        .map(|&z| {
            let mut perp = 0.0;
            let mut par = 0.0;
            if let Some((mp, mq)) = image_tail {
                let z3 = z * z * z;
                perp -= mp / (32.0 * PI * EPS0 * z3);
                par -= mq / (64.0 * PI * EPS0 * z3);
            }
            for b in barriers {
                let g = b.profile(z);
                perp += b.perp * g;
                par += b.par * g;
            }
            [z, perp, par]
        })
        .collect()
}
