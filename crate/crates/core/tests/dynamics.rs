use std::sync::Arc;

use atomwall::constants::{AMU, G_ACCEL, HBAR};
use atomwall::dynamics::{
    energy_audit, integrate, radiation_force, surface_force, AtomState, ForceToggles, Method, Outcome, Scenario,
};
use atomwall::error::Error;
use atomwall::experiments::{embedded_assets, preset_config};
use atomwall::numeric::bisect_root;
use atomwall::optics::{build_profile, field_potential, LaserField, MirrorStack, Polarization};
use atomwall::species::{rb85_default, AtomSpecies, RB85_GAMMA0};
use atomwall::surface::tabulated::{synthetic_rows, GaussianBarrier};
use atomwall::surface::{curve_peaks, sample_curve, GridSpec, KernelChoice, Spacing, TabulatedCurve};

const HG: f64 = HBAR * RB85_GAMMA0;

fn state(z: f64, vx: f64, vz: f64) -> AtomState {
    AtomState { t: 0.0, x: 0.0, z, vx, vz }
}

/// Gaussian barrier of `height` ħΓ₀ at 865 nm, σ = 50 nm, no image tail.
fn barrier_kernel(height: f64) -> KernelChoice {
    let mut grid: Vec<f64> = GridSpec::new(0.5e-9, 100e-9, 120, Spacing::Log).points().unwrap();
    grid.pop();
    grid.extend((0..=1450).map(|i| (100 + 2 * i) as f64 * 1e-9));
    let b = GaussianBarrier { center: 865e-9, width: 50e-9, perp: height * HG / 3.0, par: 2.0 * height * HG / 3.0 };
    KernelChoice::Tabulated(Arc::new(TabulatedCurve::from_rows("barrier", &synthetic_rows(&grid, &[b], None)).unwrap()))
}

fn barrier_scenario(vz: f64) -> Scenario {
    Scenario::new(rb85_default(), barrier_kernel(1.62), state(1.13e-6, 0.4, vz))
}

/// Turning point from ½Mv_z² + Mgz + U(z) = const, by bisection between the
/// highest barrier point and the start.
fn turning_point_oracle(sc: &Scenario) -> f64 {
    let m = sc.species.mass;
    let s = sc.initial;
    let e0 = 0.5 * m * s.vz * s.vz + m * sc.g_accel * s.z + sc.total_potential(s.z).unwrap();
    let g = |z: f64| Ok(e0 - m * sc.g_accel * z - sc.total_potential(z)?);
    let peak = sample_curve(GridSpec::new(5e-8, s.z, 4000, Spacing::Linear), &sc.species, &sc.kernel).unwrap();
    let top = curve_peaks(&peak, &sc.species, &sc.kernel).unwrap().into_iter().map(|p| p.z).fold(0.0, f64::max);
    bisect_root(g, top, s.z, 1e-13).unwrap()
}

#[test]
fn free_flight_hits_at_the_analytic_time() {
    for method in [Method::Dopri45, Method::Rk4] {
        let mut sc = Scenario::new(rb85_default(), KernelChoice::OscillatoryImage, state(1e-6, 0.3, -0.05));
        sc.forces = ForceToggles { spontaneous: false, dipole: false, surface: false };
        sc.g_accel = 0.0;
        sc.integrator.method = method;
        sc.integrator.dt_initial = 1e-7;
        let r = integrate(&sc).unwrap();
        let expect = (1e-6 - sc.integrator.z_adsorb) / 0.05;
        match r.outcome {
            Outcome::Adsorbed { t_hit } => assert!(((t_hit - expect) / expect).abs() < sc.integrator.rel_tol, "{method:?}"),
            o => panic!("{o:?}"),
        }
        let last = r.final_state();
        assert!((last.x - 0.3 * last.t).abs() < 1e-15);
        assert!(energy_audit(&r, &sc).unwrap() < 1e-12);
    }
}

#[test]
fn synthetic_barrier_reflects_at_the_oracle_turning_point() {
    let sc = barrier_scenario(-0.067);
    let r = integrate(&sc).unwrap();
    let Outcome::Reflected { z_min, t_turn } = r.outcome else { panic!("{:?}", r.outcome) };
    let oracle = turning_point_oracle(&sc);
    assert!((z_min - oracle).abs() < 0.5e-9, "{z_min:e} vs {oracle:e}");
    assert!(t_turn > 0.0 && r.samples.windows(2).all(|w| w[1].t >= w[0].t));
    assert!(energy_audit(&r, &sc).unwrap() < 1e-6);
}

#[test]
fn synthetic_barrier_is_crossed_by_fast_atoms() {
    let sc = barrier_scenario(-0.13);
    let ke = 0.5 * sc.species.mass * 0.13 * 0.13 / HG;
    assert!((ke - 1.85).abs() < 0.02, "{ke}");
    let r = integrate(&sc).unwrap();
    assert!(matches!(r.outcome, Outcome::Adsorbed { .. }), "{:?}", r.outcome);
    assert!(r.final_state().z <= sc.integrator.z_adsorb * (1.0 + 1e-9));
}

#[test]
fn classification_agrees_with_energy_oracle() {
    // 1-D matrix: vx = 0, spontaneous force irrelevant (no field).
    let m = rb85_default().mass;
    for height in [0.5, 1.62, 3.0] {
        let v_b = (2.0 * height * HG / m).sqrt();
        for frac in [0.5, 0.9, 0.97, 1.03, 1.1, 1.5] {
            let mut sc = Scenario::new(rb85_default(), barrier_kernel(height), state(1.13e-6, 0.0, -frac * v_b));
            sc.g_accel = 0.0;
            let r = integrate(&sc).unwrap();
            // Oracle: reflected iff the kinetic energy is below the barrier.
            let e0 = 0.5 * m * (frac * v_b).powi(2) + sc.total_potential(1.13e-6).unwrap();
            let reflects = e0 < height * HG;
            assert_eq!(r.outcome.is_reflected(), reflects, "height {height} frac {frac}: {:?}", r.outcome);
        }
    }
}

#[test]
fn surface_force_matches_field_potential_gradient() {
    let rb = rb85_default();
    let p = build_profile(
        &MirrorStack::default(),
        &LaserField {
            intensity: 800.0,
            angle_internal: 42f64.to_radians(),
            detuning0: 500.0 * RB85_GAMMA0,
            polarization: Polarization::TM,
            j_override: Some(1e15),
        },
        &rb,
    )
    .unwrap();
    let mut seed = 7u64;
    for k in [KernelChoice::OscillatoryImage, KernelChoice::GroundStateQuadrature, barrier_kernel(1.62)] {
        for _ in 0..20 {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
            // Table points sit on a 2 nm lattice; stay inside one cubic piece.
            let z = match k {
                KernelChoice::Tabulated(_) => (101 + 2 * ((seed >> 11) % 700)) as f64 * 1e-9,
                _ => 20e-9 + ((seed >> 11) % 1_000_000) as f64 * 1.5e-12,
            };
            let f = surface_force(z, Some(&p), &rb, &k).unwrap();
            let u = |x: f64| field_potential(&p, x, &rb, &k).unwrap();
            let h = (z * 1e-4).min(0.4e-9);
            let d = |h: f64| (u(z + h) - u(z - h)) / (2.0 * h);
            let fd = -(4.0 * d(h / 2.0) - d(h)) / 3.0;
            assert!(((f - fd) / f).abs() < 1e-8 || (f - fd).abs() < 1e-8 * u(z).abs() / z, "{k} z={z:e} {f:e} vs {fd:e}");
        }
    }
}

#[test]
fn surface_force_points_to_the_surface_at_short_range() {
    let rb = rb85_default();
    let lb = rb.working().lambda_bar();
    for k in [KernelChoice::OscillatoryImage, KernelChoice::GroundStateQuadrature] {
        for z in GridSpec::new(lb / 5000.0, lb / 50.0, 40, Spacing::Log).points().unwrap() {
            let f = surface_force(z, None, &rb, &k).unwrap();
            let u = atomwall::surface::potential_field_free(z, &rb, &k).unwrap();
            assert!(f < 0.0);
            assert!((f / (3.0 * u / z) - 1.0).abs() < 0.05, "{k} z={z:e}");
        }
    }
}

#[test]
fn surface_force_vanishes_at_barrier_peaks() {
    let rb = rb85_default();
    let k = KernelChoice::OscillatoryImage;
    let curve = sample_curve(GridSpec::new(1e-7, 1.5e-6, 1000, Spacing::Log), &rb, &k).unwrap();
    for p in curve_peaks(&curve, &rb, &k).unwrap() {
        let f0 = surface_force(p.z, None, &rb, &k).unwrap().abs();
        let side = surface_force(p.z - 10e-9, None, &rb, &k).unwrap().abs().min(surface_force(p.z + 10e-9, None, &rb, &k).unwrap().abs());
        assert!(f0 < 1e-3 * side, "peak {:e}: {f0:e} vs {side:e}", p.z);
    }
}

fn lit_profile(j: f64, detuning: f64) -> atomwall::optics::EvanescentProfile {
    build_profile(
        &MirrorStack::default(),
        &LaserField {
            intensity: 800.0,
            angle_internal: 42f64.to_radians(),
            detuning0: detuning,
            polarization: Polarization::TM,
            j_override: Some(j),
        },
        &rb85_default(),
    )
    .unwrap()
}

#[test]
fn radiation_force_special_cases() {
    let rb = rb85_default();
    let g = rb.gamma0;
    let p = lit_profile(g * g, 0.0);
    let f = radiation_force(&state(0.0, 0.0, 0.0), &p, &rb).unwrap();
    assert!((f.x / (2.0 * HBAR * g * p.k_par / 3.0) - 1.0).abs() < 1e-12);
    assert_eq!(f.z, 0.0);
    let dark = lit_profile(0.0, 1e9);
    let f = radiation_force(&state(1e-7, 0.1, 0.1), &dark, &rb).unwrap();
    assert_eq!((f.x, f.z), (0.0, 0.0));
}

#[test]
fn doppler_detuning_weakens_scattering() {
    let rb = rb85_default();
    let p = lit_profile(1e16, 0.0);
    let mut last = f64::INFINITY;
    // Δ = −k_∥v_x; |Δ| grows with |v_x|.
    for i in 0..50 {
        let vx = i as f64 * 0.5;
        let fx = radiation_force(&state(2e-7, vx, 0.0), &p, &rb).unwrap().x;
        assert!(fx < last);
        last = fx;
    }
}

#[test]
fn scattering_force_only_accelerates_along_k_par() {
    let cfg = preset_config("fig3").unwrap();
    let sc = cfg.resolve(&embedded_assets()).unwrap().scenario;
    let r = integrate(&sc).unwrap();
    assert!(r.outcome.is_reflected(), "{:?}", r.outcome);
    assert!(r.samples.windows(2).all(|w| w[1].vx >= w[0].vx));
    assert!(r.final_state().vx > sc.initial.vx);
    assert!(matches!(energy_audit(&r, &sc), Err(Error::Contract(_))));
    let mut off = sc.clone();
    off.forces.spontaneous = false;
    let r = integrate(&off).unwrap();
    assert!(energy_audit(&r, &off).unwrap() < 1e-6);
}

#[test]
fn energy_drift_shrinks_with_tolerance() {
    let base = preset_config("fig4-free").unwrap().resolve(&embedded_assets()).unwrap().scenario;
    let mut drifts = Vec::new();
    for rt in [1e-7, 1e-8, 1e-9, 1e-10] {
        let mut sc = base.clone();
        sc.integrator.rel_tol = rt;
        sc.integrator.abs_tol_pos = rt * 1e-6;
        sc.integrator.abs_tol_vel = rt * 1e-2;
        let r = integrate(&sc).unwrap();
        assert!(r.outcome.is_reflected());
        drifts.push(energy_audit(&r, &sc).unwrap());
    }
    assert!(drifts.windows(2).all(|w| w[1] < w[0] / 2.0), "{drifts:?}");
    assert!(drifts[3] < 1e-6);
}

fn state_error(a: &AtomState, b: &AtomState, scale: &AtomState) -> f64 {
    ((a.z - b.z) / scale.z).abs().max(((a.vz - b.vz) / scale.vz).abs())
}

#[test]
fn time_reversal_returns_to_the_start() {
    // The round trip error is compared with the forward run's own global
    // error, measured against a run with much tighter tolerances.
    for (kernel, scale) in [(barrier_kernel(1.62), 1.0), (KernelChoice::OscillatoryImage, 40.0)] {
        let mut sc = Scenario::new(rb85_default(), kernel, state(1.13e-6, 0.4, -0.067));
        sc.potential_scale = scale;
        sc.sample_dt = Some(1e-8);
        let fwd = integrate(&sc).unwrap();
        assert!(fwd.outcome.is_reflected());
        let mut tight = sc.clone();
        tight.integrator.rel_tol = 1e-13;
        tight.integrator.abs_tol_pos = 1e-20;
        tight.integrator.abs_tol_vel = 1e-16;
        let reference = integrate(&tight).unwrap();
        for frac in [0.25, 0.5, 0.75] {
            let k = ((fwd.samples.len() - 1) as f64 * frac) as usize;
            let s = fwd.samples[k];
            // Turning-point samples fall off the regular lattice; skip them.
            let forward_err = fwd.samples[..=k]
                .iter()
                .filter_map(|a| reference.samples.iter().find(|b| b.t == a.t).map(|b| state_error(a, b, &sc.initial)))
                .fold(0.0, f64::max);
            let mut back = sc.clone();
            back.initial = AtomState { t: 0.0, x: s.x, z: s.z, vx: -s.vx, vz: -s.vz };
            back.integrator.t_max = s.t;
            back.integrator.z_escape = Some(1e-5);
            back.sample_dt = None;
            let r = integrate(&back).unwrap();
            let end = r.final_state();
            assert_eq!(end.t, s.t);
            let mirrored = AtomState { vz: -end.vz, ..*end };
            let err = state_error(&mirrored, &sc.initial, &sc.initial);
            assert!(err <= 10.0 * forward_err.max(sc.integrator.rel_tol), "{err:e} vs forward {forward_err:e}");
        }
    }
}

#[test]
fn integration_is_deterministic() {
    let sc = barrier_scenario(-0.067);
    let a = integrate(&sc).unwrap();
    let b = integrate(&sc).unwrap();
    assert_eq!(a, b);
    let bits = |r: &atomwall::dynamics::TrajectoryResult| -> Vec<u64> {
        r.samples.iter().flat_map(|s| [s.t, s.x, s.z, s.vx, s.vz]).map(f64::to_bits).collect()
    };
    assert_eq!(bits(&a), bits(&b));
}

#[test]
fn rk4_agrees_with_adaptive_on_the_barrier() {
    let mut sc = barrier_scenario(-0.067);
    let adaptive = integrate(&sc).unwrap();
    sc.integrator.method = Method::Rk4;
    sc.integrator.dt_initial = 2e-9;
    let fixed = integrate(&sc).unwrap();
    assert!(fixed.outcome.is_reflected());
    assert!((fixed.z_min() - adaptive.z_min()).abs() < 1e-11);
}

#[test]
fn escape_and_timeout_outcomes() {
    let mut sc = Scenario::new(rb85_default(), KernelChoice::OscillatoryImage, state(1e-6, 0.0, 0.1));
    sc.g_accel = 0.0;
    sc.forces.surface = false;
    let r = integrate(&sc).unwrap();
    let Outcome::Escaped { t_exit } = r.outcome else { panic!("{:?}", r.outcome) };
    assert!((t_exit - 1e-5).abs() < 1e-8);
    sc.integrator.t_max = 1e-6;
    let r = integrate(&sc).unwrap();
    assert_eq!(r.outcome, Outcome::TimedOut);
    assert_eq!(r.final_state().t, 1e-6);
}

#[test]
fn gravity_points_at_the_surface() {
    let mut sc = Scenario::new(rb85_default(), KernelChoice::OscillatoryImage, state(1e-3, 0.0, 0.0));
    sc.forces.surface = false;
    let (ax, az) = sc.acceleration(&sc.initial).unwrap();
    assert_eq!(ax, 0.0);
    assert_eq!(az, -G_ACCEL);
}

#[test]
fn invalid_settings_are_config_errors() {
    let mut sc = barrier_scenario(-0.067);
    sc.integrator.z_adsorb = 2e-6;
    assert!(matches!(integrate(&sc), Err(Error::Config(_))));
    let mut sc = barrier_scenario(-0.067);
    sc.integrator.rel_tol = 0.0;
    assert!(matches!(integrate(&sc), Err(Error::Config(_))));
    let mut sc = barrier_scenario(-0.067);
    sc.integrator.max_steps = 5;
    assert!(matches!(integrate(&sc), Err(Error::Integration { .. })));
    let heavy = AtomSpecies::two_level("h", 1e3 * AMU, 1e6, 1e15).unwrap();
    assert!(heavy.mass > 0.0);
}
