//! Plane-wave transmission through substrate / Drude metal film / vacuum.
//!
//! Layer 1 is the substrate (real ε₁), layer 2 the metal film of thickness d,
//! layer 3 vacuum. Normal wavenumbers take the root with Im ≥ 0 so fields
//! decay into +z. For TM the amplitude coefficients refer to H_y, which is
//! continuous across every interface.

use num_complex::Complex64;

use super::{MirrorStack, Polarization};
use crate::constants::C;

/// ε_m(ω) = 1 − ω_p²/(ω² + iωγ_p)
pub fn drude_permittivity(omega: f64, plasma_omega: f64, collision_rate: f64) -> Complex64 {
    Complex64::new(1.0, 0.0) - plasma_omega * plasma_omega / Complex64::new(omega * omega, omega * collision_rate)
}

fn normal_k(eps: Complex64, k0: f64, kx: f64) -> Complex64 {
    let kz = (eps * k0 * k0 - kx * kx).sqrt();
    if kz.im < 0.0 {
        -kz
    } else {
        kz
    }
}

fn interface(pol: Polarization, ei: Complex64, ki: Complex64, ej: Complex64, kj: Complex64) -> (Complex64, Complex64) {
    match pol {
        Polarization::TM => {
            let den = ej * ki + ei * kj;
            ((ej * ki - ei * kj) / den, 2.0 * ej * ki / den)
        }
        Polarization::TE => {
            let den = ki + kj;
            ((ki - kj) / den, 2.0 * ki / den)
        }
    }
}

/// Amplitude transmission coefficient into vacuum (H_y for TM, E_y for TE).
pub fn transmission_coefficient(stack: &MirrorStack, omega: f64, angle: f64, pol: Polarization) -> Complex64 {
    let k0 = omega / C;
    let e1 = Complex64::new(stack.eps1, 0.0);
    let e3 = Complex64::new(1.0, 0.0);
    let kx = k0 * stack.eps1.sqrt() * angle.sin();
    let k1 = normal_k(e1, k0, kx);
    let k3 = normal_k(e3, k0, kx);
    if stack.metal_thickness == 0.0 {
        return interface(pol, e1, k1, e3, k3).1;
    }
    let e2 = drude_permittivity(omega, stack.metal_plasma_omega, stack.metal_collision_rate);
    let k2 = normal_k(e2, k0, kx);
    let (r12, t12) = interface(pol, e1, k1, e2, k2);
    let (r23, t23) = interface(pol, e2, k2, e3, k3);
    let phase = (Complex64::i() * k2 * stack.metal_thickness).exp();
    t12 * t23 * phase / (1.0 + r12 * r23 * phase * phase)
}

/// |E(z = 0⁺)|² / |E_incident|² in vacuum just outside the stack.
pub fn surface_intensity_ratio(stack: &MirrorStack, omega: f64, angle: f64, pol: Polarization) -> f64 {
    let t = transmission_coefficient(stack, omega, angle, pol);
    match pol {
        Polarization::TE => t.norm_sqr(),
        Polarization::TM => {
            let k0 = omega / C;
            let kx2 = k0 * k0 * stack.eps1 * angle.sin().powi(2);
            let kappa2 = kx2 - k0 * k0;
            t.norm_sqr() * stack.eps1 * (kx2 + kappa2) / (k0 * k0)
        }
    }
}
