//! Quantum escape from the trap for a spin-1/2 particle.
//!
//! Everything below works in scaled units where lengths are `B0/B'` and
//! energies `mu B0`. For `S = hbar/2` the kinetic prefactor `hbar^2/2m` is
//! `2 K^2` in these units, the bound spin-down state is
//! `exp(-r^2/4K) / sqrt(2 pi K)` with energy `1 + 2K`, and the spin-up
//! continuum state at the same energy has wavenumber `1/K`.

pub mod bessel;
pub mod eigensolver;
pub mod integrals;
pub mod lifetime;
pub mod quadrature;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trap::TrapConfig;
use eigensolver::{l2_distance, radial_eigensolver, RadialOperator};

pub use lifetime::{lifetime, matrix_element, LifetimeReport, MatrixElement, MatrixMethod};

/// Above this `K` the harmonic/adiabatic treatment is not trusted.
pub const K_VALIDITY: f64 = 0.2;

fn require_spin_half(cfg: &TrapConfig) -> Result<()> {
    if cfg.is_spin_half() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "the quantum treatment needs S = hbar/2, got S = {:e} with hbar = {:e}",
            cfg.spin, cfg.hbar
        )))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundState {
    pub k: f64,
    /// `a = (1/4K) (B'/B0)^2` (cm^-2).
    pub width_parameter: f64,
    /// `D = (B'/B0) / sqrt(2 pi K)` (cm^-1).
    pub normalization: f64,
    /// `mu B0 (1 + 2K)` (erg).
    pub energy: f64,
    pub angular_index: f64,
    /// `sqrt(K) B0/B'` (cm).
    pub extent: f64,
    pub outside_validity: bool,
}

impl BoundState {
    /// Spin-down component at `(r, phi)`, r in cm.
    pub fn psi(&self, r: f64, phi: f64) -> Complex64 {
        Complex64::from_polar(self.normalization * (-self.width_parameter * r * r).exp(), self.angular_index * phi)
    }
}

pub fn bound_state(cfg: &TrapConfig) -> Result<BoundState> {
    require_spin_half(cfg)?;
    let k = cfg.derived_frequencies()?.k;
    let g = cfg.bperp / cfg.b0;
    Ok(BoundState {
        k,
        width_parameter: g * g / (4.0 * k),
        normalization: g / (2.0 * PI * k).sqrt(),
        energy: cfg.mu * cfg.b0 * (1.0 + 2.0 * k),
        angular_index: 0.5,
        extent: k.sqrt() / g,
        outside_validity: k >= K_VALIDITY,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContinuumState {
    /// `B' / (B0 K)` (cm^-1).
    pub wavenumber: f64,
    /// Bessel order, `angular_index + 1/2`.
    pub order: u32,
    pub angular_index: f64,
    /// `C = sqrt(k / 2R)` (cm^-1).
    pub normalization: f64,
    /// Radius of the confining wall (cm).
    pub box_radius: f64,
}

/// Admissible box radii `[20 sqrt(K) B0/B', 0.1 B0/B']` in cm. Empty when `K > 2.5e-5`.
pub fn box_radius_window(cfg: &TrapConfig) -> Result<(f64, f64)> {
    let k = cfg.derived_frequencies()?.k;
    let l = cfg.b0 / cfg.bperp;
    Ok((20.0 * k.sqrt() * l, 0.1 * l))
}

pub fn continuum_state(cfg: &TrapConfig, box_radius: f64) -> Result<ContinuumState> {
    let (lo, hi) = box_radius_window(cfg)?;
    if !(box_radius >= lo && box_radius <= hi) {
        return Err(Error::Domain(format!(
            "box radius {box_radius:e} cm outside [{lo:e}, {hi:e}] cm (20 bound-state widths .. 0.1 B0/B')"
        )));
    }
    ContinuumState::unchecked(cfg, box_radius)
}

impl ContinuumState {
    /// Same as [`continuum_state`] without the validity window.
    pub fn unchecked(cfg: &TrapConfig, box_radius: f64) -> Result<Self> {
        require_spin_half(cfg)?;
        if !(box_radius > 0.0 && box_radius.is_finite()) {
            return Err(Error::Domain(format!("box radius must be > 0, got {box_radius}")));
        }
        let k = cfg.derived_frequencies()?.k;
        let wavenumber = cfg.bperp / (cfg.b0 * k);
        Ok(Self {
            wavenumber,
            order: 1,
            angular_index: 0.5,
            normalization: (wavenumber / (2.0 * box_radius)).sqrt(),
            box_radius,
        })
    }

    /// Copy with another half-integer angular index `gamma >= 1/2`.
    pub fn with_angular_index(mut self, gamma: f64) -> Result<Self> {
        let order = gamma + 0.5;
        if !(order >= 1.0 && order.fract() == 0.0) {
            return Err(Error::Domain(format!("angular index must be 1/2, 3/2, ..., got {gamma}")));
        }
        self.angular_index = gamma;
        self.order = order as u32;
        Ok(self)
    }

    /// Wall condition `J_1(k R) = 0` for large `n`: `k_n = (n + 1/4) pi / R`.
    pub fn eigen_wavenumber(&self, n: usize) -> f64 {
        (n as f64 + 0.25) * PI / self.box_radius
    }
}

/// `rho(E = mu B0) = (1/2 pi) sqrt(m / (hbar^2 mu B0)) R` (1/erg).
pub fn density_of_states(cfg: &TrapConfig, box_radius: f64) -> f64 {
    (cfg.mass / (cfg.hbar * cfg.hbar * cfg.mu * cfg.b0)).sqrt() * box_radius / (2.0 * PI)
}

/// `C^2 rho` assembled at a given box radius (erg^-1 cm^-2).
pub fn dos_product_at(cfg: &TrapConfig, box_radius: f64) -> Result<f64> {
    let c = ContinuumState::unchecked(cfg, box_radius)?;
    Ok(c.normalization * c.normalization * density_of_states(cfg, box_radius))
}

/// `m / (2 pi hbar^2)`; the box radius cancels.
pub fn dos_product(cfg: &TrapConfig) -> f64 {
    cfg.mass / (2.0 * PI * cfg.hbar * cfg.hbar)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LengthScales {
    /// Oscillation scale of the continuum state, `K B0/B'` (cm).
    pub up: f64,
    /// Width of the bound state, `sqrt(K) B0/B'` (cm).
    pub down: f64,
    /// Scale of the field variation, `B0/B'` (cm).
    pub field: f64,
}

pub fn length_scales(cfg: &TrapConfig) -> Result<LengthScales> {
    let k = cfg.derived_frequencies()?.k;
    let l = cfg.b0 / cfg.bperp;
    Ok(LengthScales { up: k * l, down: k.sqrt() * l, field: l })
}

/// `mu B0 / (hbar^2 (dtheta/dr)_max^2 / 8m)`, which equals `2 / K^2`.
pub fn neglected_term_ratio(cfg: &TrapConfig) -> f64 {
    let g = cfg.bperp / cfg.b0;
    cfg.mu * cfg.b0 / (cfg.hbar * cfg.hbar * g * g / (8.0 * cfg.mass))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroundStateCheck {
    pub k: f64,
    /// Lowest eigenvalue in units of `mu B0`.
    pub energy: f64,
    /// `1 + 2K`.
    pub expected: f64,
    pub rel_error: f64,
    /// L2 distance to the analytic radial Gaussian.
    pub l2_distance: f64,
}

/// Lowest state of `-2K^2 (f'' + f'/r) + (1 + r^2/2) f = E f` on `n_points`.
pub fn ground_state_oracle(k: f64, n_points: usize) -> Result<GroundStateCheck> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::Domain(format!("K must be > 0, got {k}")));
    }
    let width = k.sqrt();
    let r_max = 12.0 * width;
    if (n_points as f64) < 50.0 * r_max / width {
        return Err(Error::Domain(format!("{n_points} points do not give 50 points per bound-state width")));
    }
    let state = radial_eigensolver(|r| 1.0 + 0.5 * r * r, 2.0 * k * k, 0.0, r_max, n_points)?;
    let expected = 1.0 + 2.0 * k;
    // radially normalized: int f^2 r dr = 1
    let gaussian = |r: f64| (-r * r / (4.0 * k)).exp() / k.sqrt();
    Ok(GroundStateCheck {
        k,
        energy: state.energy,
        expected,
        rel_error: (state.energy - expected).abs() / expected,
        l2_distance: l2_distance(&state, gaussian),
    })
}

/// Zeros of `J_n` on `(0, x_max]`, counted by sign changes on a fine grid.
pub fn bessel_zero_count(n: u32, x_max: f64) -> usize {
    let step = 0.05;
    let steps = (x_max / step).ceil() as usize;
    let mut count = 0;
    let mut prev = bessel::bessel_j(n, step * 0.5);
    for i in 1..=steps {
        let x = (i as f64 * step).min(x_max);
        let v = bessel::bessel_j(n, x);
        if v == 0.0 || v.signum() != prev.signum() {
            count += 1;
        }
        prev = if v == 0.0 { -prev } else { v };
    }
    count
}

/// `dN/dk` between `k_lo` and `k_hi` for a box of radius `r_box`, counted as
/// zeros of `J_1(k R)`.
pub fn zero_counting_dos(r_box: f64, k_lo: f64, k_hi: f64) -> f64 {
    (bessel_zero_count(1, k_hi * r_box) - bessel_zero_count(1, k_lo * r_box)) as f64 / (k_hi - k_lo)
}

/// `dN/dk` from the eigenvalues of the free boxed radial problem with the
/// order-1 centrifugal term (energies `k^2`).
pub fn eigensolver_dos(r_box: f64, k_lo: f64, k_hi: f64, n_points: usize) -> Result<f64> {
    let op = RadialOperator::new(|_| 0.0, 1.0, 1.0, r_box, n_points)?;
    let n = op.count_below(k_hi * k_hi) - op.count_below(k_lo * k_lo);
    Ok(n as f64 / (k_hi - k_lo))
}
