//! Trap configuration, the field map and the quantities derived from it.
//!
//! The field is `B = B0 z + B'(x x - y y)`. All physical quantities are CGS
//! (gauss, erg, gram, second). Internally the dynamics and mode analysis run
//! in [`ScaledUnits`]: lengths in `B0/B'`, times in `1/omega_vib`, energies in
//! `mu B0`. In those units the only remaining parameter is `K`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduced Planck constant in erg s.
pub const HBAR_CGS: f64 = 1.054_571_817e-27;

/// Physical parameters of the trap and the particle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapConfig {
    /// Bias field `B0` (gauss).
    pub b0: f64,
    /// Transverse gradient `B'` (gauss/cm).
    pub bperp: f64,
    /// Magnetic moment (erg/gauss).
    pub mu: f64,
    /// Mass (gram).
    pub mass: f64,
    /// Spin angular momentum (erg s).
    pub spin: f64,
    /// Reduced Planck constant (erg s). Configurable so toy units can be used.
    pub hbar: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedFrequencies {
    /// `mu B0 / S` (rad/s).
    pub omega_prec: f64,
    /// `sqrt(B'^2 mu / (m B0))` (rad/s).
    pub omega_vib: f64,
    /// Adiabaticity parameter `omega_vib / omega_prec`.
    pub k: f64,
}

impl DerivedFrequencies {
    pub fn t_prec(&self) -> f64 {
        2.0 * PI / self.omega_prec
    }

    pub fn t_vib(&self) -> f64 {
        2.0 * PI / self.omega_vib
    }
}

/// Field magnitude and direction at radius `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldPoint {
    /// `|B|` (gauss).
    pub b: f64,
    /// Tilt of `B` from the z-axis (rad).
    pub theta: f64,
    /// `d theta / dr` (rad/cm).
    pub dtheta_dr: f64,
    /// `d^2 theta / dr^2` (rad/cm^2).
    pub d2theta_dr2: f64,
    /// Azimuth of the in-plane field component, `-phi_position` (rad).
    pub phi_field: f64,
}

/// Natural units of the problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledUnits {
    /// `B0 / B'` (cm).
    pub length_unit: f64,
    /// `1 / omega_vib` (s).
    pub time_unit: f64,
    /// `mu B0` (erg).
    pub energy_unit: f64,
}

impl ScaledUnits {
    pub fn to_scaled_length(&self, cm: f64) -> f64 {
        cm / self.length_unit
    }

    pub fn to_physical_length(&self, scaled: f64) -> f64 {
        scaled * self.length_unit
    }

    pub fn to_scaled_time(&self, seconds: f64) -> f64 {
        seconds / self.time_unit
    }

    pub fn to_physical_time(&self, scaled: f64) -> f64 {
        scaled * self.time_unit
    }

    pub fn to_scaled_energy(&self, erg: f64) -> f64 {
        erg / self.energy_unit
    }

    pub fn to_physical_energy(&self, scaled: f64) -> f64 {
        scaled * self.energy_unit
    }
}

fn positive(field: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidConfig { field, value, reason: "must be finite and > 0" })
    }
}

impl TrapConfig {
    pub fn new(b0: f64, bperp: f64, mu: f64, mass: f64, spin: f64, hbar: f64) -> Result<Self> {
        let cfg = Self { b0, bperp, mu, mass, spin, hbar };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Spin-1/2 particle, `S = hbar/2`, with the CGS value of `hbar`.
    pub fn spin_half(b0: f64, bperp: f64, mu: f64, mass: f64) -> Result<Self> {
        Self::new(b0, bperp, mu, mass, 0.5 * HBAR_CGS, HBAR_CGS)
    }

    pub fn validate(&self) -> Result<()> {
        positive("b0_gauss", self.b0)?;
        positive("bperp_gauss_per_cm", self.bperp)?;
        positive("mu_erg_per_gauss", self.mu)?;
        positive("mass_gram", self.mass)?;
        positive("spin_erg_s", self.spin)?;
        positive("hbar_erg_s", self.hbar)?;
        Ok(())
    }

    /// True when `S = hbar/2` to 1e-12 relative.
    pub fn is_spin_half(&self) -> bool {
        (self.spin - 0.5 * self.hbar).abs() <= 1e-12 * self.spin
    }

    pub fn derived_frequencies(&self) -> Result<DerivedFrequencies> {
        self.validate()?;
        let omega_prec = self.mu * self.b0 / self.spin;
        let omega_vib = (self.bperp * self.bperp * self.mu / (self.mass * self.b0)).sqrt();
        Ok(DerivedFrequencies { omega_prec, omega_vib, k: omega_vib / omega_prec })
    }

    /// `K` from its closed form, `sqrt(S^2 B'^2 / (mu m B0^3))`.
    pub fn k_closed_form(&self) -> f64 {
        (self.spin * self.spin * self.bperp * self.bperp / (self.mu * self.mass * self.b0.powi(3))).sqrt()
    }

    pub fn scaled_units(&self) -> Result<ScaledUnits> {
        let freq = self.derived_frequencies()?;
        Ok(ScaledUnits {
            length_unit: self.b0 / self.bperp,
            time_unit: 1.0 / freq.omega_vib,
            energy_unit: self.mu * self.b0,
        })
    }

    /// Field vector at `(x, y)` in cm.
    pub fn field_at(&self, x: f64, y: f64) -> [f64; 3] {
        [self.bperp * x, -self.bperp * y, self.b0]
    }

    /// Field magnitude and orientation at radius `r` (cm) and azimuth `phi`.
    pub fn field_polar(&self, r: f64, phi: f64) -> Result<FieldPoint> {
        if !(r >= 0.0) {
            return Err(Error::Domain(format!("radius must be >= 0, got {r}")));
        }
        let g = self.bperp / self.b0;
        let s = g * r;
        let denom = 1.0 + s * s;
        Ok(FieldPoint {
            b: self.b0 * denom.sqrt(),
            theta: s.atan(),
            dtheta_dr: g / denom,
            d2theta_dr2: -2.0 * g * g * s / (denom * denom),
            phi_field: -phi,
        })
    }

    /// Adiabatic potential `mu |B|` at radius `r` (cm): `(exact, harmonic)` in erg.
    pub fn adiabatic_potential(&self, r: f64) -> Result<(f64, f64)> {
        let point = self.field_polar(r, 0.0)?;
        let s = self.bperp * r / self.b0;
        let harmonic = self.mu * self.b0 * (1.0 + 0.5 * s * s);
        Ok((self.mu * point.b, harmonic))
    }

    /// Spring constant of the harmonic potential, `mu B'^2 / B0` (erg/cm^2).
    pub fn spring_constant(&self) -> f64 {
        self.mu * self.bperp * self.bperp / self.b0
    }

    /// Friction rates in scaled time: `(r_t / (m omega_vib), r_p / S)`.
    pub fn scaled_damping(&self, r_t: f64, r_p: f64) -> Result<(f64, f64)> {
        let freq = self.derived_frequencies()?;
        Ok((r_t / (self.mass * freq.omega_vib), r_p / self.spin))
    }

    /// Dimensionless friction groups of the first-order shift:
    /// `(r_t (B0/B')^2 / S, r_p / S)`.
    pub fn friction_groups(&self, r_t: f64, r_p: f64) -> (f64, f64) {
        let l = self.b0 / self.bperp;
        (r_t * l * l / self.spin, r_p / self.spin)
    }
}
