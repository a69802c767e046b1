//! Coupling matrix element and the golden-rule lifetime.
//!
//! The coupling between the bound spin-down and continuum spin-up states is
//!
//! ```text
//! H = -(hbar^2/2m) C D  int dphi e^{i(nu - gamma) phi}  I
//! I = int_0^inf r [-t' f' - t'' f / 2 - t' f / 2r + sin(t) f / 2r^2] J(k r) dr
//! ```
//!
//! with `f = exp(-r^2/4K)`, `t = theta(r)` and lengths in `B0/B'`. Replacing
//! `t'`, `t''` and `sin t` by their small-`r` forms (1, 0, r) leaves
//! `I = int r^2 f J_1(r/K) dr / 2K = 2 exp(-1/K)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::integrals::{gaussian_bessel_integral, LogValue, RadialFactor, RadialIntegral};
use super::quadrature::{integrate, QuadOptions};
use super::{bound_state, dos_product, ContinuumState, K_VALIDITY};
use crate::error::{Error, Result};
use crate::trap::TrapConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixMethod {
    ClosedForm,
    QuadratureApprox,
    QuadratureExact,
}

/// Below this `K` the exact-angle integral cannot be resolved in double
/// precision: the contour must stay under the branch point at `r = i`.
pub const EXACT_MIN_K: f64 = 0.01;

/// `r * bracket / f` for the two angle models.
struct Bracket {
    k: f64,
    exact: bool,
}

impl Bracket {
    fn eval(&self, r: Complex64) -> Complex64 {
        if !self.exact {
            return r * r / (2.0 * self.k);
        }
        let s = 1.0 + r * r;
        let dtheta = 1.0 / s;
        let d2theta = -2.0 * r / (s * s);
        let sin_over_r = 1.0 / s.sqrt();
        // r [t' r/2K - t''/2 - t'/2r + sin t / 2r^2]
        dtheta * r * r / (2.0 * self.k) - 0.5 * r * d2theta - 0.5 * dtheta + 0.5 * sin_over_r
    }
}

impl RadialFactor for Bracket {
    fn real(&self, r: f64) -> f64 {
        self.eval(Complex64::new(r, 0.0)).re
    }
    fn complex(&self, r: Complex64) -> Complex64 {
        self.eval(r)
    }
    fn analytic_height(&self) -> f64 {
        if self.exact {
            1.0
        } else {
            f64::INFINITY
        }
    }
}

/// The reduced radial integral `I` of the module docs.
pub fn reduced_integral(k: f64, method: MatrixMethod, order: u32) -> Result<RadialIntegral> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::Domain(format!("K must be > 0, got {k}")));
    }
    match method {
        MatrixMethod::ClosedForm => {
            if order != 1 {
                return Err(Error::Domain("the closed form exists only for the order-1 continuum state".into()));
            }
            Ok(RadialIntegral {
                value: LogValue::new(2.0, -1.0 / k),
                rel_error: 0.0,
                route: super::integrals::Route::RealAxis,
                evaluations: 0,
            })
        }
        MatrixMethod::QuadratureApprox | MatrixMethod::QuadratureExact => {
            let exact = method == MatrixMethod::QuadratureExact;
            if exact && k < EXACT_MIN_K {
                return Err(Error::Numerical(format!("exact-angle integral needs K >= {EXACT_MIN_K}, got {k:e}")));
            }
            gaussian_bessel_integral(&Bracket { k, exact }, 1.0 / (4.0 * k), 1.0 / k, order, order % 2 == 1)
        }
    }
}

/// `int_0^{2 pi} exp(i (nu - gamma) phi) d phi`.
pub fn angular_factor(nu: f64, gamma: f64) -> Result<Complex64> {
    let q = integrate(
        |phi: f64| Complex64::from_polar(1.0, (nu - gamma) * phi),
        0.0,
        2.0 * PI,
        16,
        QuadOptions { abs_tol: 1e-15, rel_tol: 1e-14, ..Default::default() },
    )?;
    Ok(q.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatrixElement {
    pub method: MatrixMethod,
    /// `H` in erg.
    pub value: LogValue,
    /// The reduced radial integral.
    pub reduced: LogValue,
    pub rel_error: f64,
}

/// Coupling between the bound state of `cfg` and `continuum`.
pub fn matrix_element(cfg: &TrapConfig, continuum: &ContinuumState, method: MatrixMethod) -> Result<MatrixElement> {
    let bound = bound_state(cfg)?;
    let radial = reduced_integral(bound.k, method, continuum.order)?;
    let angular = if method == MatrixMethod::ClosedForm {
        Complex64::new(2.0 * PI, 0.0)
    } else {
        angular_factor(bound.angular_index, continuum.angular_index)?
    };
    let prefactor = cfg.hbar * cfg.hbar / (2.0 * cfg.mass) * continuum.normalization * bound.normalization;
    let sign = -radial.value.sign * if angular.re < 0.0 { -1.0 } else { 1.0 };
    Ok(MatrixElement {
        method,
        value: LogValue { sign, ln_abs: prefactor.ln() + angular.norm().ln() + radial.value.ln_abs },
        reduced: radial.value,
        rel_error: radial.rel_error,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LifetimeReport {
    pub k: f64,
    pub t_vib_s: f64,
    pub t_prec_s: f64,
    pub box_radius_cm: f64,
    pub log10_t_esc_closed: f64,
    pub log10_t_esc_composed: f64,
    /// `log10(T_composed / T_closed)`.
    pub ratio_log10: f64,
    /// erg; underflows to zero for small `K`, see the log10 fields.
    pub matrix_element_closed: f64,
    pub matrix_element_quadrature: f64,
    pub log10_abs_matrix_element_closed: f64,
    pub log10_abs_matrix_element_quadrature: f64,
    /// Exact-angle matrix element, when `K` allows it.
    pub log10_abs_matrix_element_exact: Option<f64>,
    /// `C^2 rho` in erg^-1 cm^-2.
    pub dos_product: f64,
    pub outside_validity: bool,
    pub config: TrapConfig,
}

impl LifetimeReport {
    /// `T_esc` in seconds, when it fits in a double.
    pub fn t_esc_closed_s(&self) -> Option<f64> {
        let t = 10f64.powf(self.log10_t_esc_closed);
        t.is_finite().then_some(t)
    }
}

/// `log10` of `(T_vib / 128 pi^2) exp(2/K)`.
pub fn log10_t_esc_closed(t_vib: f64, k: f64) -> f64 {
    (t_vib / (128.0 * PI * PI)).log10() + 2.0 / k * std::f64::consts::LOG10_E
}

pub fn lifetime(cfg: &TrapConfig) -> Result<LifetimeReport> {
    let freq = cfg.derived_frequencies()?;
    let k = freq.k;
    let box_radius = 0.1 * cfg.b0 / cfg.bperp;
    let continuum = ContinuumState::unchecked(cfg, box_radius)?;
    let closed = matrix_element(cfg, &continuum, MatrixMethod::ClosedForm)?;
    let quad = matrix_element(cfg, &continuum, MatrixMethod::QuadratureApprox)?;
    let exact = if k >= EXACT_MIN_K {
        matrix_element(cfg, &continuum, MatrixMethod::QuadratureExact).ok().map(|m| m.value.log10_abs())
    } else {
        None
    };
    let dos = dos_product(cfg);
    let rho = dos / (continuum.normalization * continuum.normalization);
    // 1/T = (2 pi / hbar) |H|^2 rho
    let log10_rate = (2.0 * PI / cfg.hbar).log10() + 2.0 * quad.value.log10_abs() + rho.log10();
    let log10_t_esc_composed = -log10_rate;
    let log10_t_esc_closed = log10_t_esc_closed(freq.t_vib(), k);
    Ok(LifetimeReport {
        k,
        t_vib_s: freq.t_vib(),
        t_prec_s: freq.t_prec(),
        box_radius_cm: box_radius,
        log10_t_esc_closed,
        log10_t_esc_composed,
        ratio_log10: log10_t_esc_composed - log10_t_esc_closed,
        matrix_element_closed: closed.value.value(),
        matrix_element_quadrature: quad.value.value(),
        log10_abs_matrix_element_closed: closed.value.log10_abs(),
        log10_abs_matrix_element_quadrature: quad.value.log10_abs(),
        log10_abs_matrix_element_exact: exact,
        dos_product: dos,
        outside_validity: k >= K_VALIDITY,
        config: *cfg,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Preset;

    fn toy(k: f64) -> TrapConfig {
        TrapConfig::new(1.0, 1.0, 1.0, 1.0 / (k * k), 1.0, 2.0).unwrap()
    }

    #[test]
    fn approx_quadrature_matches_closed_form() {
        for k in [0.2, 0.1, 0.05, 0.02, 1e-3, 1e-5] {
            let q = reduced_integral(k, MatrixMethod::QuadratureApprox, 1).unwrap();
            let c = reduced_integral(k, MatrixMethod::ClosedForm, 1).unwrap();
            assert!((q.value.ratio(&c.value) - 1.0).abs() < 1e-9, "K={k}: {:?}", q);
        }
    }

    #[test]
    fn closed_reduced_value() {
        let c = reduced_integral(0.1, MatrixMethod::ClosedForm, 1).unwrap();
        assert!((c.value.value() / 9.07998595249697534752e-5 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn exact_angle_ratio_reference_values() {
        let table = [
            (0.2, 3.67210089007478540564731696782914708643),
            (0.1, 18.6738834535049321117161826884323195796),
            (0.05, 320.180905327672626427795156325380266800),
            (0.02, 902590.195395775504075843218057819130530),
        ];
        for (k, want) in table {
            let e = reduced_integral(k, MatrixMethod::QuadratureExact, 1).unwrap();
            let c = reduced_integral(k, MatrixMethod::ClosedForm, 1).unwrap();
            let got = e.value.ratio(&c.value);
            assert!((got / want - 1.0).abs() < 1e-7, "K={k}: {got} vs {want}");
        }
        assert!(reduced_integral(1e-3, MatrixMethod::QuadratureExact, 1).is_err());
    }

    #[test]
    fn bracket_reduces_to_linear_form_near_origin() {
        let k = 0.1;
        let exact = Bracket { k, exact: true };
        let lin = Bracket { k, exact: false };
        // the curvature terms add 5 r^2 / 4 on top of r^2 / 2K
        let r = 1e-3;
        let extra = (exact.real(r) - lin.real(r)) / (r * r);
        assert!((extra - 1.25).abs() < 1e-4, "{extra}");
        // evenness, needed for the contour route
        let z = Complex64::new(0.3, 0.7);
        assert!((exact.complex(z) - exact.complex(-z)).norm() < 1e-14);
    }

    #[test]
    fn physical_matrix_element_matches_closed_expression() {
        // -sqrt(pi) hbar^2 (B'/m B0) C sqrt(2/K) exp(-1/K)
        let cfg = toy(0.05);
        let c = ContinuumState::unchecked(&cfg, 0.3).unwrap();
        let m = matrix_element(&cfg, &c, MatrixMethod::ClosedForm).unwrap();
        let k: f64 = 0.05;
        let want = -PI.sqrt()
            * cfg.hbar.powi(2)
            * (cfg.bperp / (cfg.mass * cfg.b0))
            * c.normalization
            * (2.0 / k).sqrt()
            * (-1.0 / k).exp();
        assert!((m.value.value() / want - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mismatched_angular_index_decouples() {
        let cfg = toy(0.1);
        let c = ContinuumState::unchecked(&cfg, 0.3).unwrap();
        let matched = matrix_element(&cfg, &c, MatrixMethod::QuadratureApprox).unwrap();
        let other = matrix_element(&cfg, &c.with_angular_index(1.5).unwrap(), MatrixMethod::QuadratureApprox).unwrap();
        assert!(other.value.ln_abs - matched.value.ln_abs < (1e-10f64).ln());
    }

    #[test]
    fn composed_lifetime_is_sixteen_times_closed() {
        for p in Preset::ALL {
            let r = lifetime(&p.config()).unwrap();
            assert!((r.ratio_log10 - 16f64.log10()).abs() < 1e-6, "{}", r.ratio_log10);
        }
        let r = lifetime(&toy(0.05)).unwrap();
        assert!((r.ratio_log10 - 16f64.log10()).abs() < 1e-8);
        assert!(r.log10_abs_matrix_element_exact.is_some());
    }

    #[test]
    fn closed_lifetime_arithmetic_at_k_one() {
        let r = lifetime(&toy(1.0)).unwrap();
        let want = r.t_vib_s / (128.0 * PI * PI) * 1f64.exp().powi(2);
        assert!((r.t_esc_closed_s().unwrap() / want - 1.0).abs() < 1e-12);
        assert!(r.outside_validity);
    }

    #[test]
    fn log_space_survives_tiny_k() {
        let k = 1e-9;
        let l = log10_t_esc_closed(1.0, k);
        assert!(l.is_finite());
        assert!((l - ((1.0 / (128.0 * PI * PI)).log10() + 2e9 * std::f64::consts::LOG10_E)).abs() < 1e-6);
    }
}
