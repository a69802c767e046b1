//! Nonlinear translation + spin dynamics in scaled units.
//!
//! With lengths in `B0/B'`, time in `1/omega_vib` and the field written as
//! `b = (x, -y, 1)`, the equations of motion become
//!
//! ```text
//! x''  =  n_x - g_t x'
//! y''  = -n_y - g_t y'
//! n'   = (1/K) n x b - g_p n x n'
//! ```
//!
//! where `g_t = r_t / (m omega_vib)` and `g_p = r_p / S`. The spin equation is
//! implicit in `n'`; on the plane orthogonal to `n` the map `u -> u + g_p n x u`
//! is a scaled rotation, so `n' = (w - g_p n x w) / (1 + g_p^2)` with
//! `w = (1/K) n x b`.

use nalgebra::{Matrix4, Matrix6};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modes::{ModeSolution, Orientation, Symmetry};
use crate::trap::TrapConfig;

/// Step size used when none is given: `T_vib / 1000`.
pub const DEFAULT_DT: f64 = 2.0 * std::f64::consts::PI / 1000.0;

/// Drift of `|n|` within one step above which a trajectory is flagged.
pub const NORM_DRIFT_WARNING: f64 = 1e-6;

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Position, velocity (scaled) and unit spin direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalState {
    pub pos: [f64; 2],
    pub vel: [f64; 2],
    pub n_hat: [f64; 3],
}

/// Time derivative of a [`ClassicalState`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDerivative {
    pub dpos: [f64; 2],
    pub dvel: [f64; 2],
    pub dn: [f64; 3],
}

impl ClassicalState {
    pub fn stationary(orientation: Orientation) -> Self {
        Self { pos: [0.0; 2], vel: [0.0; 2], n_hat: [0.0, 0.0, orientation.nz()] }
    }

    /// Stationary state displaced by `kick` along x.
    pub fn kicked(orientation: Orientation, kick: f64) -> Self {
        let mut s = Self::stationary(orientation);
        s.pos[0] = kick;
        s
    }

    /// Superposition of normal modes at `t = 0`, in real form.
    pub fn from_modes(orientation: Orientation, modes: &[ModeSolution]) -> Self {
        let mut pos = [0.0; 2];
        let mut vel = [0.0; 2];
        let mut tilt = [0.0; 2];
        for m in modes {
            let dz = -Complex64::i() * m.omega_n * m.rho_0;
            // rho+ = x + iy, eps- = ex - i ey; rho- = x - iy, eps+ = ex + i ey
            let s = match m.symmetry {
                Symmetry::GammaPlus => 1.0,
                Symmetry::GammaMinus => -1.0,
            };
            pos[0] += m.rho_0.re;
            pos[1] += s * m.rho_0.im;
            vel[0] += dz.re;
            vel[1] += s * dz.im;
            tilt[0] += m.eps_0.re;
            tilt[1] -= s * m.eps_0.im;
        }
        let nz = orientation.nz() * (1.0 - tilt[0] * tilt[0] - tilt[1] * tilt[1]).max(0.0).sqrt();
        Self { pos, vel, n_hat: [tilt[0], tilt[1], nz] }
    }

    /// Distance from the stationary point in `(x, y, n_x, n_y)`.
    pub fn deviation(&self) -> f64 {
        (self.pos[0].powi(2) + self.pos[1].powi(2) + self.n_hat[0].powi(2) + self.n_hat[1].powi(2)).sqrt()
    }

    fn to_array(self) -> [f64; 7] {
        [self.pos[0], self.pos[1], self.vel[0], self.vel[1], self.n_hat[0], self.n_hat[1], self.n_hat[2]]
    }

    fn from_array(a: [f64; 7]) -> Self {
        Self { pos: [a[0], a[1]], vel: [a[2], a[3]], n_hat: [a[4], a[5], a[6]] }
    }
}

/// Physical friction coefficients: `r_t` in g/s, `r_p` in erg s.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FrictionCoefficients {
    pub r_t: f64,
    pub r_p: f64,
}

/// Friction in scaled time: `r_t / (m omega_vib)` and `r_p / S`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ScaledFriction {
    pub translational: f64,
    pub precessional: f64,
}

impl ScaledFriction {
    pub fn none() -> Self {
        Self::default()
    }
}

/// Conserved (or, with friction, monitored) quantities of a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Invariants {
    /// `L_z - S_z` in units of `S`.
    pub lambda: f64,
    /// Energy above the spin-down stationary state, in units of `mu B0`.
    pub excitation_energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub k: f64,
    pub dt: f64,
    pub times: Vec<f64>,
    pub states: Vec<ClassicalState>,
    pub lambda_series: Vec<f64>,
    pub energy_series: Vec<f64>,
    /// Largest `| |n| - 1 |` seen before renormalization.
    pub max_norm_drift: f64,
    /// Set when `max_norm_drift` exceeds [`NORM_DRIFT_WARNING`].
    pub accuracy_warning: bool,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Largest `|Lambda(t) - Lambda(0)| / (|Lambda(0)| + 1)`.
    pub fn lambda_drift(&self) -> f64 {
        let l0 = self.lambda_series[0];
        self.lambda_series.iter().map(|l| (l - l0).abs()).fold(0.0, f64::max) / (l0.abs() + 1.0)
    }

    /// Largest `|xi(t) - xi(0)|` in units of `mu B0`.
    pub fn energy_drift(&self) -> f64 {
        let e0 = self.energy_series[0];
        self.energy_series.iter().map(|e| (e - e0).abs()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dynamics {
    pub k: f64,
    pub friction: ScaledFriction,
}

impl Dynamics {
    pub fn new(k: f64, friction: ScaledFriction) -> Result<Self> {
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::Domain(format!("K must be finite and > 0, got {k}")));
        }
        if !(friction.translational >= 0.0 && friction.precessional >= 0.0) {
            return Err(Error::Domain("friction coefficients must be >= 0".into()));
        }
        Ok(Self { k, friction })
    }

    pub fn from_config(cfg: &TrapConfig, friction: FrictionCoefficients) -> Result<Self> {
        let k = cfg.derived_frequencies()?.k;
        let (translational, precessional) = cfg.scaled_damping(friction.r_t, friction.r_p)?;
        Self::new(k, ScaledFriction { translational, precessional })
    }

    pub fn rhs(&self, s: &ClassicalState) -> StateDerivative {
        let n = s.n_hat;
        let b = [s.pos[0], -s.pos[1], 1.0];
        let nxb = cross(n, b);
        let w = [nxb[0] / self.k, nxb[1] / self.k, nxb[2] / self.k];
        let gp = self.friction.precessional;
        let nxw = cross(n, w);
        let inv = 1.0 / (1.0 + gp * gp);
        let mut dn = [(w[0] - gp * nxw[0]) * inv, (w[1] - gp * nxw[1]) * inv, (w[2] - gp * nxw[2]) * inv];
        // remove the round-off component along n
        let nn = dot(n, n);
        if nn > 0.0 {
            let along = dot(n, dn) / nn;
            for i in 0..3 {
                dn[i] -= along * n[i];
            }
        }
        let gt = self.friction.translational;
        StateDerivative { dpos: s.vel, dvel: [n[0] - gt * s.vel[0], -n[1] - gt * s.vel[1]], dn }
    }

    fn rhs_array(&self, a: [f64; 7]) -> [f64; 7] {
        let d = self.rhs(&ClassicalState::from_array(a));
        [d.dpos[0], d.dpos[1], d.dvel[0], d.dvel[1], d.dn[0], d.dn[1], d.dn[2]]
    }

    /// One classical fourth-order Runge-Kutta step followed by renormalization
    /// of `n`. Returns the new state and `| |n| - 1 |` before renormalization.
    pub fn step(&self, s: &ClassicalState, dt: f64) -> (ClassicalState, f64) {
        let y = s.to_array();
        let add = |a: [f64; 7], b: [f64; 7], h: f64| {
            let mut out = a;
            for i in 0..7 {
                out[i] += h * b[i];
            }
            out
        };
        let k1 = self.rhs_array(y);
        let k2 = self.rhs_array(add(y, k1, 0.5 * dt));
        let k3 = self.rhs_array(add(y, k2, 0.5 * dt));
        let k4 = self.rhs_array(add(y, k3, dt));
        let mut next = y;
        for i in 0..7 {
            next[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let norm = (next[4] * next[4] + next[5] * next[5] + next[6] * next[6]).sqrt();
        for v in &mut next[4..7] {
            *v /= norm;
        }
        (ClassicalState::from_array(next), (norm - 1.0).abs())
    }

    pub fn invariants_of(&self, s: &ClassicalState) -> Invariants {
        let lz = (s.pos[0] * s.vel[1] - s.pos[1] * s.vel[0]) / self.k;
        let b = [s.pos[0], -s.pos[1], 1.0];
        let kinetic = 0.5 * (s.vel[0].powi(2) + s.vel[1].powi(2));
        Invariants { lambda: lz - s.n_hat[2], excitation_energy: -dot(s.n_hat, b) + kinetic - 1.0 }
    }

    /// Fixed-step integration from `t = 0` to `t_final`, keeping every
    /// `stride`-th step plus the final state. The last step is shortened to
    /// land on `t_final`.
    pub fn integrate(&self, state0: ClassicalState, dt: f64, t_final: f64, stride: usize) -> Result<Trajectory> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::Domain(format!("dt must be > 0, got {dt}")));
        }
        if !(t_final > 0.0 && t_final.is_finite()) {
            return Err(Error::Domain(format!("t_final must be > 0, got {t_final}")));
        }
        let norm = dot(state0.n_hat, state0.n_hat).sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("|n_hat| must be 1, got {norm}")));
        }
        let stride = stride.max(1);
        let steps = ((t_final / dt) - 1e-9).ceil().max(1.0) as usize;
        let capacity = steps / stride + 2;
        let mut traj = Trajectory {
            k: self.k,
            dt,
            times: Vec::with_capacity(capacity),
            states: Vec::with_capacity(capacity),
            lambda_series: Vec::with_capacity(capacity),
            energy_series: Vec::with_capacity(capacity),
            max_norm_drift: 0.0,
            accuracy_warning: false,
        };
        let record = |traj: &mut Trajectory, t: f64, s: &ClassicalState| {
            let inv = self.invariants_of(s);
            traj.times.push(t);
            traj.states.push(*s);
            traj.lambda_series.push(inv.lambda);
            traj.energy_series.push(inv.excitation_energy);
        };
        let mut state = state0;
        record(&mut traj, 0.0, &state);
        for i in 1..=steps {
            let t_prev = (i - 1) as f64 * dt;
            let h = if i == steps { t_final - t_prev } else { dt };
            let (next, drift) = self.step(&state, h);
            traj.max_norm_drift = traj.max_norm_drift.max(drift);
            state = next;
            if i % stride == 0 || i == steps {
                let t = if i == steps { t_final } else { i as f64 * dt };
                record(&mut traj, t, &state);
            }
        }
        traj.accuracy_warning = traj.max_norm_drift > NORM_DRIFT_WARNING;
        Ok(traj)
    }
}

/// Coefficients of the linearized equations about a stationary state,
/// rows `(dx'', dy'', ex', ey')`, columns `(dx, dy, ex, ey)`.
pub fn jacobian_at_stationary(k: f64, orientation: Orientation) -> Matrix4<f64> {
    let nz = orientation.nz();
    let ik = 1.0 / k;
    Matrix4::new(0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, nz * ik, 0.0, ik, nz * ik, 0.0, -ik, 0.0)
}

/// First-order system about a stationary state over `(dx, dy, vx, vy, ex, ey)`,
/// including friction. Its eigenvalues are `-i w` for the mode frequencies `w`.
pub fn linear_state_matrix(k: f64, orientation: Orientation, friction: ScaledFriction) -> Matrix6<f64> {
    let j = jacobian_at_stationary(k, orientation);
    let nz = orientation.nz();
    let gt = friction.translational;
    let gp = friction.precessional;
    let inv = 1.0 / (1.0 + gp * gp);
    let mut m = Matrix6::zeros();
    m[(0, 2)] = 1.0;
    m[(1, 3)] = 1.0;
    // accelerations
    let cols = [0usize, 1, 4, 5];
    for (jc, &c) in cols.iter().enumerate() {
        m[(2, c)] = j[(0, jc)];
        m[(3, c)] = j[(1, jc)];
    }
    m[(2, 2)] = -gt;
    m[(3, 3)] = -gt;
    // undamped spin rates w, then u = (w + gp nz J w) / (1 + gp^2) with J(a, b) = (b, -a)
    for (jc, &c) in cols.iter().enumerate() {
        let wx = j[(2, jc)];
        let wy = j[(3, jc)];
        m[(4, c)] = (wx + gp * nz * wy) * inv;
        m[(5, c)] = (wy - gp * nz * wx) * inv;
    }
    m
}
