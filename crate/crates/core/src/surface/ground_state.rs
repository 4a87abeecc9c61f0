//! Ground-state atom–perfect-conductor potential from the imaginary-frequency
//! representation
//!
//! ```text
//! U(z) = −ħ/(16π²ε₀z³) ∫₀^∞ dξ e^(−u) [ α_∥(iξ)(1+u+u²)/4 + α_⊥(iξ)(1+u)/2 ],
//! u = 2ξz/c,   α_i(iξ) = (2/ħ) ω_j μ_i² / (ω_j² + ξ²).
//! ```
//!
//! With ξ = ω_j y and a = 2z/Λ_j each transition reduces to two dimensionless
//! integrals, I_⊥(a) = ∫ (1+ay) e^(−ay)/(1+y²) dy and
//! I_∥(a) = ∫ (1+ay+a²y²) e^(−ay)/(1+y²) dy, so that
//! U_⊥ = −μ_⊥² I_⊥ /(16π²ε₀z³) and U_∥ = −μ_∥² I_∥ /(32π²ε₀z³).

use std::f64::consts::PI;

use super::Components;
use crate::constants::EPS0;
use crate::error::{Error, Result};
use crate::numeric::quadrature::{integrate, QuadratureOptions};
use crate::species::AtomSpecies;

/// Relative accuracy requested from the adaptive quadrature.
pub const TARGET_REL_TOL: f64 = 1e-10;
/// Worst accepted self-reported error.
pub const MAX_REL_ERROR: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub perp: f64,
    pub par: f64,
    /// Largest self-reported relative error across the integrals used.
    pub rel_error: f64,
}

/// ∫₀^∞ g(y) dy as ∫₀¹ g(y) dy + ∫₀¹ g(1/s)/s² ds. For large `a` the
/// integrand lives in y ≲ 1/a, so the head is split there first; otherwise
/// the initial Kronrod nodes can all land where e^(−ay) has underflowed.
fn half_line<F: Fn(f64) -> f64>(g: F, a: f64, abs_tol: f64) -> Result<(f64, f64)> {
    let opts = QuadratureOptions {
        rel_tol: TARGET_REL_TOL,
        abs_tol: abs_tol / 3.0,
        max_intervals: 4000,
    };
    let knee = (60.0 / a).min(1.0);
    let mut value = 0.0;
    let mut err = 0.0;
    let mut add = |r: crate::numeric::Integral| {
        value += r.value;
        err += r.abs_error;
    };
    add(integrate(&g, 0.0, knee, opts)?);
    if knee < 1.0 {
        add(integrate(&g, knee, 1.0, opts)?);
    }
    add(integrate(|s: f64| g(1.0 / s) / (s * s), 0.0, 1.0, opts)?);
    let rel = if value == 0.0 { 0.0 } else { err / value.abs() };
    Ok((value, rel))
}

fn damped(a: f64, y: f64, poly: impl Fn(f64) -> f64) -> f64 {
    let s = a * y;
    if s > 700.0 || !s.is_finite() {
        0.0
    } else {
        poly(s) * (-s).exp() / (1.0 + y * y)
    }
}

fn perp_integral(a: f64) -> Result<(f64, f64)> {
    half_line(|y| damped(a, y, |s| 1.0 + s), a, 0.0)
}

fn par_integral(a: f64) -> Result<(f64, f64)> {
    half_line(|y| damped(a, y, |s| 1.0 + s + s * s), a, 0.0)
}

fn check(rel: f64) -> Result<f64> {
    if rel <= MAX_REL_ERROR {
        Ok(rel)
    } else {
        Err(Error::Quadrature {
            achieved: rel,
            intervals: 0,
        })
    }
}

pub fn quadrature_potential(z: f64, species: &AtomSpecies) -> Result<QuadratureResult> {
    super::require_distance(z)?;
    let mut out = QuadratureResult {
        perp: 0.0,
        par: 0.0,
        rel_error: 0.0,
    };
    let z3 = z * z * z;
    for t in species.transitions() {
        let a = 2.0 * z / t.lambda_bar();
        if t.mu_perp_sq > 0.0 {
            let (i, rel) = perp_integral(a)?;
            out.perp -= t.mu_perp_sq * i / (16.0 * PI * PI * EPS0 * z3);
            out.rel_error = out.rel_error.max(check(rel)?);
        }
        if t.mu_par_sq > 0.0 {
            let (i, rel) = par_integral(a)?;
            out.par -= t.mu_par_sq * i / (32.0 * PI * PI * EPS0 * z3);
            out.rel_error = out.rel_error.max(check(rel)?);
        }
    }
    Ok(out)
}

/// dU/dz by differentiating under the integral sign:
/// dU/dz = K/z⁴ (3 I(a) − a I'(a)) with K the component prefactor.
pub(crate) fn slopes(z: f64, species: &AtomSpecies) -> Result<Components> {
    super::require_distance(z)?;
    let mut out = Components::ZERO;
    let z4 = z * z * z * z;
    for t in species.transitions() {
        let a = 2.0 * z / t.lambda_bar();
        if t.mu_perp_sq > 0.0 {
            let (i, _) = perp_integral(a)?;
            // I_⊥' = −a ∫ y² e^(−ay)/(1+y²) dy
            let (j, _) = half_line(|y| damped(a, y, |_| y * y), a, 1e-12 * i / (a * a).max(1e-300))?;
            let di = -a * j;
            out.perp += t.mu_perp_sq * (3.0 * i - a * di) / (16.0 * PI * PI * EPS0 * z4);
        }
        if t.mu_par_sq > 0.0 {
            let (i, _) = par_integral(a)?;
            // I_∥' = ∫ (a y² − a² y³) e^(−ay)/(1+y²) dy
            let (di, _) = half_line(
                |y| damped(a, y, |s| y * s - s * s * y),
                a,
                1e-12 * i / a.max(1e-300),
            )?;
            out.par += t.mu_par_sq * (3.0 * i - a * di) / (32.0 * PI * PI * EPS0 * z4);
        }
    }
    Ok(out)
}
