//! Physical constants (CODATA 2018, SI units).

/// Reduced Planck constant ħ (J·s)
pub const HBAR: f64 = 1.054_571_817e-34;

/// Speed of light in vacuum (m/s)
pub const C: f64 = 299_792_458.0;

/// Vacuum permittivity ε₀ (F/m)
pub const EPS0: f64 = 8.854_187_812_8e-12;

/// Boltzmann constant (J/K)
pub const KB: f64 = 1.380_649e-23;

/// Standard gravitational acceleration (m/s²)
pub const G_ACCEL: f64 = 9.806_65;

/// Atomic mass unit (kg)
pub const AMU: f64 = 1.660_539_066_60e-27;

/// Elementary charge (C)
pub const E_CHARGE: f64 = 1.602_176_634e-19;

/// The constant set as a value, for code that wants to carry it around.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub c: f64,
    pub eps0: f64,
    pub k_b: f64,
    pub g_accel: f64,
    pub amu: f64,
}

pub const CODATA: PhysicalConstants = PhysicalConstants {
    hbar: HBAR,
    c: C,
    eps0: EPS0,
    k_b: KB,
    g_accel: G_ACCEL,
    amu: AMU,
};
