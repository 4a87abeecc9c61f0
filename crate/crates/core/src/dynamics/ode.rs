//! Explicit Runge–Kutta steppers for the planar equation of motion.
//!
//! `Dopri45` is the Dormand–Prince 5(4) pair with its native quartic dense
//! output; `Rk4` is the classical fixed-step scheme with cubic Hermite
//! interpolation between steps.

use crate::error::Result;

pub type State = [f64; 4];

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;

const B: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
// b − b̂, fifth minus fourth order weights.
const E: [f64; 7] = [
    -71.0 / 57600.0,
    0.0,
    71.0 / 16695.0,
    -71.0 / 1920.0,
    17253.0 / 339200.0,
    -22.0 / 525.0,
    1.0 / 40.0,
];

// Dense output: y(t₀ + θh) = y₀ + h Σᵢ kᵢ Σₘ P[i][m] θ^(m+1).
const P: [[f64; 4]; 7] = [
    [1.0, -8048581381.0 / 2820520608.0, 8663915743.0 / 2820520608.0, -12715105075.0 / 11282082432.0],
    [0.0, 0.0, 0.0, 0.0],
    [0.0, 131558114200.0 / 32700410799.0, -68118460800.0 / 10900136933.0, 87487479700.0 / 32700410799.0],
    [0.0, -1754552775.0 / 470086768.0, 14199869525.0 / 1410260304.0, -10690763975.0 / 1880347072.0],
    [0.0, 127303824393.0 / 49829197408.0, -318862633887.0 / 49829197408.0, 701980252875.0 / 199316789632.0],
    [0.0, -282668133.0 / 205662961.0, 2019193451.0 / 616988883.0, -1453857185.0 / 822651844.0],
    [0.0, 40617522.0 / 29380423.0, -110615467.0 / 29380423.0, 69997945.0 / 29380423.0],
];

fn axpy(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        *o += h * acc;
    }
    out
}

#[derive(Debug, Clone)]
pub enum Dense {
    Dopri { k: [State; 7] },
    Hermite { f0: State, f1: State },
}

/// One accepted step with its continuous extension.
#[derive(Debug, Clone)]
pub struct Step {
    pub t0: f64,
    pub t1: f64,
    pub y0: State,
    pub y1: State,
    pub dense: Dense,
}

impl Step {
    pub fn at(&self, t: f64) -> State {
        if t == self.t0 {
            return self.y0;
        }
        if t == self.t1 {
            return self.y1;
        }
        let h = self.t1 - self.t0;
        let th = (t - self.t0) / h;
        match &self.dense {
            Dense::Dopri { k } => {
                let powers = [th, th * th, th * th * th, th * th * th * th];
                let mut out = self.y0;
                for (i, o) in out.iter_mut().enumerate() {
                    let mut acc = 0.0;
                    for (ks, ps) in k.iter().zip(P.iter()) {
                        let w = ps[0] * powers[0] + ps[1] * powers[1] + ps[2] * powers[2] + ps[3] * powers[3];
                        acc += ks[i] * w;
                    }
                    *o += h * acc;
                }
                out
            }
            Dense::Hermite { f0, f1 } => {
                let s2 = th * th;
                let s3 = s2 * th;
                let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
                let h10 = s3 - 2.0 * s2 + th;
                let h01 = -2.0 * s3 + 3.0 * s2;
                let h11 = s3 - s2;
                let mut out = [0.0; 4];
                for i in 0..4 {
                    out[i] = h00 * self.y0[i] + h10 * h * f0[i] + h01 * self.y1[i] + h11 * h * f1[i];
                }
                out
            }
        }
    }
}

pub struct Attempt {
    pub y1: State,
    pub f1: State,
    /// Scaled RMS error estimate; ≤ 1 means acceptable. Zero for fixed-step.
    pub err: f64,
    pub dense: Dense,
}

/// Error weights: absolute tolerance per component plus a relative part.
#[derive(Debug, Clone, Copy)]
pub struct ErrorWeights {
    pub rel: f64,
    pub abs: State,
}

pub fn dopri_step<F>(f: &F, t: f64, y: &State, f0: &State, h: f64, w: &ErrorWeights) -> Result<Attempt>
where
    F: Fn(f64, &State) -> Result<State>,
{
    let k1 = *f0;
    let k2 = f(t + C2 * h, &axpy(y, h, &[(A21, &k1)]))?;
    let k3 = f(t + C3 * h, &axpy(y, h, &[(A31, &k1), (A32, &k2)]))?;
    let k4 = f(t + C4 * h, &axpy(y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]))?;
    let k5 = f(t + C5 * h, &axpy(y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]))?;
    let k6 = f(t + h, &axpy(y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]))?;
    let y1 = axpy(y, h, &[(B[0], &k1), (B[2], &k3), (B[3], &k4), (B[4], &k5), (B[5], &k6)]);
    let k7 = f(t + h, &y1)?;
    let k = [k1, k2, k3, k4, k5, k6, k7];
    let mut sum = 0.0;
    for i in 0..4 {
        let mut e = 0.0;
        for (ej, kj) in E.iter().zip(&k) {
            e += ej * kj[i];
        }
        let scale = w.abs[i] + w.rel * y[i].abs().max(y1[i].abs());
        sum += (h * e / scale).powi(2);
    }
    Ok(Attempt {
        y1,
        f1: k7,
        err: (sum / 4.0).sqrt(),
        dense: Dense::Dopri { k },
    })
}

pub fn rk4_step<F>(f: &F, t: f64, y: &State, f0: &State, h: f64) -> Result<Attempt>
where
    F: Fn(f64, &State) -> Result<State>,
{
    let k1 = *f0;
    let k2 = f(t + 0.5 * h, &axpy(y, h, &[(0.5, &k1)]))?;
    let k3 = f(t + 0.5 * h, &axpy(y, h, &[(0.5, &k2)]))?;
    let k4 = f(t + h, &axpy(y, h, &[(1.0, &k3)]))?;
    let y1 = axpy(y, h, &[(1.0 / 6.0, &k1), (1.0 / 3.0, &k2), (1.0 / 3.0, &k3), (1.0 / 6.0, &k4)]);
    let f1 = f(t + h, &y1)?;
    Ok(Attempt {
        y1,
        f1,
        err: 0.0,
        dense: Dense::Hermite { f0: k1, f1 },
    })
}
