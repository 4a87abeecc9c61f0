//! Retarded image-dipole kernel.
//!
//! Per transition, with x = 2z/Λ:
//!
//! ```text
//! U_⊥(z) = −μ_⊥² (cos x + x sin x)          / (32πε₀ z³)
//! U_∥(z) = −μ_∥² (cos x + x sin x − x² cos x) / (64πε₀ z³)
//! ```
//!
//! Both reduce to the static image energy as x → 0. The x² cos x term makes
//! the parallel part oscillate with a 1/z envelope, which is where the
//! positive barriers come from.

use std::f64::consts::PI;

use super::Components;
use crate::constants::EPS0;
use crate::species::AtomSpecies;

pub(crate) fn components(z: f64, species: &AtomSpecies) -> Components {
    let mut out = Components::ZERO;
    for t in species.transitions() {
        let x = 2.0 * z / t.lambda_bar();
        let (s, c) = x.sin_cos();
        let z3 = z * z * z;
        out.perp -= t.mu_perp_sq * (c + x * s) / (32.0 * PI * EPS0 * z3);
        out.par -= t.mu_par_sq * (c + x * s - x * x * c) / (64.0 * PI * EPS0 * z3);
    }
    out
}

/// dU/dz of each component.
pub(crate) fn slopes(z: f64, species: &AtomSpecies) -> Components {
    let mut out = Components::ZERO;
    for t in species.transitions() {
        let x = 2.0 * z / t.lambda_bar();
        let (s, c) = x.sin_cos();
        let z4 = z * z * z * z;
        let perp = x * x * c - 3.0 * (c + x * s);
        let par = x * x * x * s + 2.0 * x * x * c - 3.0 * c - 3.0 * x * s;
        out.perp -= t.mu_perp_sq * perp / (32.0 * PI * EPS0 * z4);
        out.par -= t.mu_par_sq * par / (64.0 * PI * EPS0 * z4);
    }
    out
}
