//! Planar equation of motion M r̈ = −Mg ẑ + F_rad + F^f near the mirror,
//! integrated with event detection for turning points, adsorption and escape.

pub mod ode;

use serde::{Deserialize, Serialize};

use crate::constants::{G_ACCEL, HBAR};
use crate::error::{Error, Result};
use crate::optics::{dipole_potential_at, rabi_sq, EvanescentProfile};
use crate::species::AtomSpecies;
use crate::surface::KernelChoice;
use ode::{dopri_step, rk4_step, Attempt, ErrorWeights, State, Step};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomState {
    #[serde(rename = "t_s", default)]
    pub t: f64,
    #[serde(rename = "x_m", default)]
    pub x: f64,
    #[serde(rename = "z_m")]
    pub z: f64,
    #[serde(rename = "vx_mps", default)]
    pub vx: f64,
    #[serde(rename = "vz_mps")]
    pub vz: f64,
}

impl AtomState {
    fn from_vec(t: f64, y: &State) -> Self {
        Self {
            t,
            x: y[0],
            z: y[1],
            vx: y[2],
            vz: y[3],
        }
    }

    fn to_vec(self) -> State {
        [self.x, self.z, self.vx, self.vz]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Adaptive Dormand–Prince 5(4).
    #[default]
    Dopri45,
    /// Classical RK4 with fixed step `dt_initial_s`.
    Rk4,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IntegratorSettings {
    #[serde(default)]
    pub method: Method,
    #[serde(rename = "dt_initial_s")]
    pub dt_initial: f64,
    pub rel_tol: f64,
    #[serde(rename = "abs_tol_m")]
    pub abs_tol_pos: f64,
    #[serde(rename = "abs_tol_mps")]
    pub abs_tol_vel: f64,
    #[serde(rename = "t_max_s")]
    pub t_max: f64,
    #[serde(rename = "z_adsorb_m", default = "default_z_adsorb")]
    pub z_adsorb: f64,
    /// Defaults to twice the initial height.
    #[serde(rename = "z_escape_m", default)]
    pub z_escape: Option<f64>,
    #[serde(default = "default_max_steps")]
    pub max_steps: u64,
}

fn default_z_adsorb() -> f64 {
    1e-9
}

fn default_max_steps() -> u64 {
    5_000_000
}

impl Default for IntegratorSettings {
    fn default() -> Self {
        Self {
            method: Method::Dopri45,
            dt_initial: 1e-9,
            rel_tol: 1e-10,
            abs_tol_pos: 1e-16,
            abs_tol_vel: 1e-12,
            t_max: 1e-3,
            z_adsorb: default_z_adsorb(),
            z_escape: None,
            max_steps: default_max_steps(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum Outcome {
    Reflected { z_min: f64, t_turn: f64 },
    Adsorbed { t_hit: f64 },
    Escaped { t_exit: f64 },
    TimedOut,
}

impl Outcome {
    pub fn tag(&self) -> &'static str {
        match self {
            Outcome::Reflected { .. } => "reflected",
            Outcome::Adsorbed { .. } => "adsorbed",
            Outcome::Escaped { .. } => "escaped",
            Outcome::TimedOut => "timed_out",
        }
    }

    pub fn is_reflected(&self) -> bool {
        matches!(self, Outcome::Reflected { .. })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub accepted: u64,
    pub rejected: u64,
    pub rhs_evals: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryResult {
    pub samples: Vec<AtomState>,
    pub outcome: Outcome,
    pub stats: Stats,
}

impl TrajectoryResult {
    pub fn final_state(&self) -> &AtomState {
        self.samples.last().expect("trajectory has at least the initial sample")
    }

    /// Closest approach: the turning point when reflected, otherwise the
    /// smallest sampled height.
    pub fn z_min(&self) -> f64 {
        match self.outcome {
            Outcome::Reflected { z_min, .. } => z_min,
            _ => self.samples.iter().map(|s| s.z).fold(f64::INFINITY, f64::min),
        }
    }

    /// Time of the event that classified the run.
    pub fn event_time(&self) -> f64 {
        match self.outcome {
            Outcome::Reflected { t_turn, .. } => t_turn,
            Outcome::Adsorbed { t_hit } => t_hit,
            Outcome::Escaped { t_exit } => t_exit,
            Outcome::TimedOut => self.final_state().t,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForceToggles {
    #[serde(default = "yes")]
    pub spontaneous: bool,
    #[serde(default = "yes")]
    pub dipole: bool,
    #[serde(default = "yes")]
    pub surface: bool,
}

fn yes() -> bool {
    true
}

impl Default for ForceToggles {
    fn default() -> Self {
        Self {
            spontaneous: true,
            dipole: true,
            surface: true,
        }
    }
}

/// Force on the atom, components along +x (the k_∥ direction) and +z.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Force {
    pub x: f64,
    pub z: f64,
}

/// Spontaneous plus dipole force of the evanescent wave,
///
/// F = 2ħ (ΓΩ²k_∥ x̂ − ΩΔ dΩ/dz ẑ) / (Δ² + 2Ω² + Γ²),
///
/// with Δ = ω − ω₀ − k_∥v_x and dΩ/dz = −k_z Ω.
pub fn radiation_force(state: &AtomState, profile: &EvanescentProfile, species: &AtomSpecies) -> Result<Force> {
    let parts = radiation_parts(state, profile, species)?;
    Ok(Force {
        x: parts.0,
        z: parts.1,
    })
}

/// (spontaneous x-component, dipole z-component)
fn radiation_parts(state: &AtomState, profile: &EvanescentProfile, species: &AtomSpecies) -> Result<(f64, f64)> {
    let omega_sq = rabi_sq(profile, state.z)?;
    if omega_sq == 0.0 {
        return Ok((0.0, 0.0));
    }
    let gamma = species.gamma0;
    let delta = profile.detuning(species) - profile.k_par * state.vx;
    let den = delta * delta + 2.0 * omega_sq + gamma * gamma;
    let spontaneous = 2.0 * HBAR * gamma * omega_sq * profile.k_par / den;
    let dipole = 2.0 * HBAR * profile.k_z * omega_sq * delta / den;
    Ok((spontaneous, dipole))
}

/// F^f = −∂U_g^f/∂z, or −∂U_g^0/∂z without a field.
pub fn surface_force(
    z: f64,
    profile: Option<&EvanescentProfile>,
    species: &AtomSpecies,
    kernel: &KernelChoice,
) -> Result<f64> {
    let slopes = kernel.slopes(z, species)?;
    Ok(match profile {
        Some(p) => -slopes.oriented(p.gamma_at(z)),
        None => -slopes.sum(),
    })
}

/// Everything needed to integrate one trajectory.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub species: AtomSpecies,
    pub kernel: KernelChoice,
    /// Multiplier on the surface potential (not on the light forces).
    pub potential_scale: f64,
    pub field: Option<EvanescentProfile>,
    pub forces: ForceToggles,
    pub g_accel: f64,
    pub initial: AtomState,
    pub integrator: IntegratorSettings,
    /// Output sampling interval; `None` records every accepted step.
    pub sample_dt: Option<f64>,
}

impl Scenario {
    pub fn new(species: AtomSpecies, kernel: KernelChoice, initial: AtomState) -> Self {
        Self {
            species,
            kernel,
            potential_scale: 1.0,
            field: None,
            forces: ForceToggles::default(),
            g_accel: G_ACCEL,
            initial,
            integrator: IntegratorSettings::default(),
            sample_dt: None,
        }
    }

    pub fn z_escape(&self) -> f64 {
        self.integrator.z_escape.unwrap_or(2.0 * self.initial.z)
    }

    /// Scaled U_g^f (or U_g^0 without a field).
    pub fn surface_potential(&self, z: f64) -> Result<f64> {
        let c = self.kernel.components(z, &self.species)?.scaled(self.potential_scale);
        Ok(match &self.field {
            Some(p) => c.oriented(p.gamma_at(z)),
            None => c.sum(),
        })
    }

    /// U_d for an atom with in-plane velocity `vx` (Doppler-shifted detuning).
    pub fn dipole_potential(&self, z: f64, vx: f64) -> Result<f64> {
        match &self.field {
            Some(p) => {
                let delta = p.detuning(&self.species) - p.k_par * vx;
                Ok(dipole_potential_at(delta, rabi_sq(p, z)?, self.species.gamma0))
            }
            None => Ok(0.0),
        }
    }

    /// The configured potential for an atom at rest: scaled U_g^f + U_d.
    pub fn total_potential(&self, z: f64) -> Result<f64> {
        Ok(self.surface_potential(z)? + self.dipole_potential(z, 0.0)?)
    }

    pub fn acceleration(&self, s: &AtomState) -> Result<(f64, f64)> {
        let mut fx = 0.0;
        let mut fz = -self.species.mass * self.g_accel;
        if self.forces.surface {
            fz += self.potential_scale * surface_force(s.z, self.field.as_ref(), &self.species, &self.kernel)?;
        }
        if let Some(p) = &self.field {
            if self.forces.spontaneous || self.forces.dipole {
                let (sp, dp) = radiation_parts(s, p, &self.species)?;
                if self.forces.spontaneous {
                    fx += sp;
                }
                if self.forces.dipole {
                    fz += dp;
                }
            }
        }
        Ok((fx / self.species.mass, fz / self.species.mass))
    }

    /// True when the forces derive from a potential (no photon scattering).
    pub fn is_conservative(&self) -> bool {
        match &self.field {
            None => true,
            Some(p) => !self.forces.spontaneous || p.j_factor == 0.0,
        }
    }

    /// ½Mv² + Mgz + U, the quantity conserved by conservative scenarios.
    pub fn energy(&self, s: &AtomState) -> Result<f64> {
        let m = self.species.mass;
        let mut e = 0.5 * m * (s.vx * s.vx + s.vz * s.vz) + m * self.g_accel * s.z;
        if self.forces.surface {
            e += self.surface_potential(s.z)?;
        }
        if self.forces.dipole {
            e += self.dipole_potential(s.z, s.vx)?;
        }
        Ok(e)
    }

    pub fn validate(&self) -> Result<()> {
        let st = &self.integrator;
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if !(st.z_adsorb > 0.0) {
            return bad("z_adsorb_m must be positive");
        }
        if !(self.initial.z > st.z_adsorb) {
            return bad("initial height must exceed z_adsorb_m");
        }
        if !(self.z_escape() > self.initial.z) {
            return bad("z_escape_m must exceed the initial height");
        }
        if !(st.t_max > self.initial.t) || !(st.dt_initial > 0.0) {
            return bad("need t_max_s > t_s and dt_initial_s > 0");
        }
        if !(st.rel_tol > 0.0 && st.abs_tol_pos > 0.0 && st.abs_tol_vel > 0.0) {
            return bad("tolerances must be positive");
        }
        if !(self.potential_scale > 0.0) {
            return bad("potential_scale must be positive");
        }
        if let Some(dt) = self.sample_dt {
            if !(dt > 0.0) {
                return bad("sample_dt_s must be positive");
            }
        }
        let s = &self.initial;
        if ![s.t, s.x, s.z, s.vx, s.vz].iter().all(|v| v.is_finite()) {
            return bad("initial state must be finite");
        }
        Ok(())
    }
}

enum Event {
    Turn(f64),
    Adsorb(f64),
    Escape(f64),
}

fn locate<F: Fn(&State) -> f64>(step: &Step, g: F) -> f64 {
    let (mut a, mut b) = (step.t0, step.t1);
    let ga = g(&step.y0);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if (g(&step.at(m)) > 0.0) == (ga > 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    b
}

/// Integrates the scenario from its initial state until adsorption, escape
/// or `t_max`.
pub fn integrate(sc: &Scenario) -> Result<TrajectoryResult> {
    sc.validate()?;
    let st = sc.integrator;
    let z_escape = sc.z_escape();
    let weights = ErrorWeights {
        rel: st.rel_tol,
        abs: [st.abs_tol_pos, st.abs_tol_pos, st.abs_tol_vel, st.abs_tol_vel],
    };
    let evals = std::cell::Cell::new(0u64);
    let rhs = |t: f64, y: &State| -> Result<State> {
        evals.set(evals.get() + 1);
        let (ax, az) = sc.acceleration(&AtomState::from_vec(t, y))?;
        Ok([y[2], y[3], ax, az])
    };

    let mut t = sc.initial.t;
    let mut y = sc.initial.to_vec();
    let mut f = rhs(t, &y)?;
    let mut h = st.dt_initial.min(st.t_max - t);
    let mut stats = Stats::default();
    let mut samples = vec![sc.initial];
    let mut next_sample = sc.sample_dt.map(|dt| (1u64, dt));
    let mut turn: Option<(f64, f64)> = None;
    let last_state = |t: f64, y: &State| AtomState::from_vec(t, y);

    loop {
        if stats.accepted + stats.rejected >= st.max_steps {
            return Err(Error::Integration {
                reason: format!("step limit {} reached", st.max_steps),
                last: last_state(t, &y),
            });
        }
        let h_floor = 8.0 * f64::EPSILON * t.abs().max(st.t_max);
        if h < h_floor {
            return Err(Error::Integration {
                reason: format!("step size underflow (h = {h:e} s)"),
                last: last_state(t, &y),
            });
        }
        let remaining = st.t_max - t;
        let last_step = h >= remaining;
        let h_try = if last_step { remaining } else { h };
        let attempt: Result<Attempt> = match st.method {
            Method::Dopri45 => dopri_step(&rhs, t, &y, &f, h_try, &weights),
            Method::Rk4 => rk4_step(&rhs, t, &y, &f, h_try),
        };
        let attempt = match attempt {
            Ok(a) if a.err <= 1.0 && a.y1.iter().all(|v| v.is_finite()) => a,
            Ok(a) => {
                stats.rejected += 1;
                let factor = if a.err.is_finite() { (0.9 * a.err.powf(-0.2)).max(0.2) } else { 0.2 };
                h = h_try * factor;
                continue;
            }
            Err(e) => {
                if st.method == Method::Rk4 {
                    return Err(Error::Integration {
                        reason: e.to_string(),
                        last: last_state(t, &y),
                    });
                }
                // A trial stage left the model's domain; shorten the step.
                stats.rejected += 1;
                h = h_try * 0.25;
                continue;
            }
        };
        stats.accepted += 1;
        let t1 = if last_step { st.t_max } else { t + h_try };
        let step = Step {
            t0: t,
            t1,
            y0: y,
            y1: attempt.y1,
            dense: attempt.dense,
        };

        let mut events = Vec::new();
        if turn.is_none() && step.y0[3] < 0.0 && step.y1[3] >= 0.0 {
            events.push(Event::Turn(locate(&step, |s| s[3])));
        }
        if step.y1[1] <= st.z_adsorb {
            events.push(Event::Adsorb(locate(&step, |s| s[1] - st.z_adsorb)));
        }
        if step.y1[1] >= z_escape && step.y1[3] > 0.0 && step.y0[1] < z_escape {
            events.push(Event::Escape(locate(&step, |s| s[1] - z_escape)));
        }
        let event_time = |e: &Event| match e {
            Event::Turn(t) | Event::Adsorb(t) | Event::Escape(t) => *t,
        };
        events.sort_by(|a, b| event_time(a).total_cmp(&event_time(b)));

        let mut terminal: Option<(f64, Outcome)> = None;
        let mut cursor = t;
        for ev in &events {
            let te = event_time(ev);
            emit_samples(&step, &mut samples, &mut next_sample, sc, cursor, te);
            cursor = te;
            let ys = step.at(te);
            match ev {
                Event::Turn(_) => {
                    if ys[1] > st.z_adsorb {
                        turn = Some((ys[1], te));
                        samples.push(AtomState::from_vec(te, &ys));
                    }
                }
                Event::Adsorb(_) => {
                    terminal = Some((te, Outcome::Adsorbed { t_hit: te }));
                    samples.push(AtomState::from_vec(te, &ys));
                    break;
                }
                Event::Escape(_) => {
                    terminal = Some((te, Outcome::Escaped { t_exit: te }));
                    samples.push(AtomState::from_vec(te, &ys));
                    break;
                }
            }
        }
        let finish = |outcome: Outcome, samples: Vec<AtomState>, stats: Stats| {
            let outcome = match (outcome, turn) {
                (Outcome::Adsorbed { .. }, _) => outcome,
                (_, Some((z_min, t_turn))) => Outcome::Reflected { z_min, t_turn },
                _ => outcome,
            };
            TrajectoryResult {
                samples,
                outcome,
                stats: Stats {
                    rhs_evals: evals.get(),
                    ..stats
                },
            }
        };
        if let Some((_, outcome)) = terminal {
            return Ok(finish(outcome, samples, stats));
        }
        emit_samples(&step, &mut samples, &mut next_sample, sc, cursor, t1);
        if sc.sample_dt.is_none() || last_step {
            if samples.last().map(|s| s.t) != Some(t1) {
                samples.push(AtomState::from_vec(t1, &step.y1));
            }
        }
        if last_step {
            return Ok(finish(Outcome::TimedOut, samples, stats));
        }

        t = t1;
        y = attempt.y1;
        f = attempt.f1;
        if st.method == Method::Dopri45 {
            let factor = if attempt.err == 0.0 { 10.0 } else { (0.9 * attempt.err.powf(-0.2)).clamp(0.2, 10.0) };
            h = h_try * factor;
        }
    }
}

/// Pushes strided samples with times in (from, to].
fn emit_samples(
    step: &Step,
    samples: &mut Vec<AtomState>,
    next: &mut Option<(u64, f64)>,
    sc: &Scenario,
    from: f64,
    to: f64,
) {
    let Some((k, dt)) = next.as_mut() else { return };
    loop {
        let ts = sc.initial.t + *k as f64 * *dt;
        if ts > to {
            break;
        }
        if ts > from || (ts == from && samples.last().map(|s| s.t) != Some(ts)) {
            samples.push(AtomState::from_vec(ts, &step.at(ts)));
        }
        *k += 1;
    }
}

/// Worst relative energy drift max|E − E₀|/|E₀| along the samples.
pub fn energy_audit(result: &TrajectoryResult, sc: &Scenario) -> Result<f64> {
    if !sc.is_conservative() {
        return Err(Error::Contract(
            "energy audit needs a conservative scenario (no field, or spontaneous force off)".into(),
        ));
    }
    let e0 = sc.energy(&result.samples[0])?;
    let mut worst = 0.0f64;
    for s in &result.samples[1..] {
        worst = worst.max((sc.energy(s)? - e0).abs());
    }
    Ok(worst / e0.abs())
}
