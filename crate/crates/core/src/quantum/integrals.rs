//! Radial integrals of the form `int_0^inf g(r) exp(-a r^2) J_n(b r) dr`.
//!
//! Two routes are available. On the real axis the integrand is a
//! Gaussian-damped oscillation, split into panels an eighth of `1/b` wide.
//! When the result is exponentially smaller than the integrand (large `b^2/a`)
//! the real-axis sum cancels catastrophically, so for `n = 1` and even `g` the
//! integral is rewritten as half the integral of `g(r) H1(b r) exp(-a r^2)`
//! along the whole real line and shifted to `Im r = c`. At the saddle
//! `c = b / 2a` the integrand no longer oscillates and its size is the size of
//! the result. The result is returned as a mantissa and a natural-log scale so
//! it survives `exp(-1/K)` for `K` down to 1e-9.

use num_complex::Complex64;

use super::bessel::{bessel_j, hankel1_scaled, HANKEL_MIN_ARG};
use super::quadrature::{integrate, QuadOptions};
use crate::error::{Error, Result};

/// `ln(1e18)`: the Gaussian is cut where it drops below 1e-18.
const GAUSSIAN_CUTOFF: f64 = 41.446531673892822;

/// Accepted relative error estimate of an integral.
pub const MAX_REL_ERROR: f64 = 1e-6;

/// A real number stored as `sign * exp(ln_abs)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LogValue {
    pub sign: f64,
    pub ln_abs: f64,
}

impl LogValue {
    pub fn new(mantissa: f64, ln_scale: f64) -> Self {
        Self { sign: if mantissa < 0.0 { -1.0 } else { 1.0 }, ln_abs: mantissa.abs().ln() + ln_scale }
    }

    /// The plain value; underflows to zero for very small magnitudes.
    pub fn value(&self) -> f64 {
        self.sign * self.ln_abs.exp()
    }

    pub fn log10_abs(&self) -> f64 {
        self.ln_abs / std::f64::consts::LN_10
    }

    /// `self / other` as a plain number.
    pub fn ratio(&self, other: &LogValue) -> f64 {
        self.sign * other.sign * (self.ln_abs - other.ln_abs).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    RealAxis,
    Contour,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialIntegral {
    pub value: LogValue,
    pub rel_error: f64,
    pub route: Route,
    pub evaluations: usize,
}

/// Description of the algebraic factor `g`.
pub trait RadialFactor {
    fn real(&self, r: f64) -> f64;
    fn complex(&self, r: Complex64) -> Complex64;
    /// Distance from the real axis to the nearest singularity of `g`.
    fn analytic_height(&self) -> f64 {
        f64::INFINITY
    }
}

/// `g(r) = r^2`, the integral of the closed-form identity.
pub struct Quadratic;

impl RadialFactor for Quadratic {
    fn real(&self, r: f64) -> f64 {
        r * r
    }
    fn complex(&self, r: Complex64) -> Complex64 {
        r * r
    }
}

/// Integrates `g(r) exp(-a r^2) J_n(b r)` over `[0, inf)`, choosing the
/// contour route for `n = 1` whenever the Hankel expansion is accurate on it.
pub fn gaussian_bessel_integral(g: &dyn RadialFactor, a: f64, b: f64, n: u32, even: bool) -> Result<RadialIntegral> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!("need a > 0 and b > 0, got a = {a}, b = {b}")));
    }
    let c = (b / (2.0 * a)).min(0.9 * g.analytic_height());
    if n == 1 && even && b * c >= 20.0_f64.max(HANKEL_MIN_ARG) {
        contour(g, a, b, c)
    } else {
        real_axis(g, a, b, n)
    }
}

fn check(value: f64, error: f64, what: &str) -> Result<f64> {
    let rel = error / value.abs();
    if !(rel <= MAX_REL_ERROR) {
        return Err(Error::Numerical(format!(
            "{what}: estimated relative error {rel:e} exceeds {MAX_REL_ERROR:e} (value {value:e}, error {error:e})"
        )));
    }
    Ok(rel)
}

pub fn real_axis(g: &dyn RadialFactor, a: f64, b: f64, n: u32) -> Result<RadialIntegral> {
    let r_max = ((GAUSSIAN_CUTOFF + 10.0) / a).sqrt();
    let panels = ((r_max * 8.0 * b).ceil() as usize).clamp(1, 100_000);
    // scale of the integrand without the oscillation, for an absolute tolerance
    let envelope = integrate(
        |r: f64| (g.real(r) * (-a * r * r).exp()).abs(),
        0.0,
        r_max,
        64,
        QuadOptions { rel_tol: 1e-6, ..Default::default() },
    )?;
    let opts = QuadOptions { abs_tol: 1e-15 * envelope.value, rel_tol: 1e-13, ..Default::default() };
    let q = integrate(|r: f64| g.real(r) * (-a * r * r).exp() * bessel_j(n, b * r), 0.0, r_max, panels, opts)?;
    let rel_error = check(q.value, q.error, "real-axis radial integral")?;
    Ok(RadialIntegral {
        value: LogValue::new(q.value, 0.0),
        rel_error,
        route: Route::RealAxis,
        evaluations: q.evaluations + envelope.evaluations,
    })
}

pub fn contour(g: &dyn RadialFactor, a: f64, b: f64, c: f64) -> Result<RadialIntegral> {
    // on r = t + ic: exp(-a r^2 + i b r) = exp(a c^2 - b c) exp(-a t^2 + i t (b - 2 a c))
    let ln_scale = a * c * c - b * c;
    let drift = b - 2.0 * a * c;
    let sigma = 1.0 / (2.0 * a).sqrt();
    let t_max = ((GAUSSIAN_CUTOFF + 10.0) / a).sqrt();
    let mut width = sigma / 4.0;
    if drift.abs() > 0.0 {
        width = width.min(2.0 * std::f64::consts::PI / drift.abs() / 8.0);
    }
    let panels = ((2.0 * t_max / width).ceil() as usize).clamp(2, 100_000);
    let integrand = |t: f64| {
        let r = Complex64::new(t, c);
        let phase = Complex64::new(-a * t * t, t * drift).exp();
        0.5 * g.complex(r) * hankel1_scaled(1, b * r) * phase
    };
    let q = integrate(integrand, -t_max, t_max, panels, QuadOptions { rel_tol: 1e-13, ..Default::default() })?;
    let rel_error = check(q.value.re, q.error, "contour radial integral")?;
    if q.value.im.abs() > 1e-6 * q.value.re.abs() {
        return Err(Error::Numerical(format!(
            "contour radial integral has an imaginary part {:e} against real part {:e}",
            q.value.im, q.value.re
        )));
    }
    Ok(RadialIntegral {
        value: LogValue::new(q.value.re, ln_scale),
        rel_error,
        route: Route::Contour,
        evaluations: q.evaluations,
    })
}

/// `(b / 4a^2) exp(-b^2 / 4a)`, the closed form of `int r^2 J_1(b r) exp(-a r^2) dr`.
pub fn quadratic_identity(a: f64, b: f64) -> LogValue {
    LogValue::new(b / (4.0 * a * a), -b * b / (4.0 * a))
}

#[cfg(test)]
mod tests {
    use super::*;

    const IDENTITY: [(f64, f64, f64); 3] = [
        (1.0, 1.0, 0.1947001957678512170612926),
        (2.0, 5.0, 0.01373029175731481791460865),
        (0.5, 10.0, 1.928749847963917783017348e-21),
    ];

    #[test]
    fn closed_form_matches_reference() {
        for (a, b, want) in IDENTITY {
            let got = quadratic_identity(a, b).value();
            assert!((got / want - 1.0).abs() < 1e-14, "{got} vs {want}");
        }
    }

    #[test]
    fn quadrature_reproduces_identity() {
        for (a, b, want) in IDENTITY {
            let got = gaussian_bessel_integral(&Quadratic, a, b, 1, true).unwrap();
            assert!((got.value.value() / want - 1.0).abs() < 1e-10, "({a},{b}): {:?}", got);
        }
    }

    #[test]
    fn routes_agree_where_both_work() {
        // b c = 25: contour is allowed; the real axis still has enough digits
        let (a, b) = (2.0, 10.0);
        let r = real_axis(&Quadratic, a, b, 1).unwrap();
        let c = contour(&Quadratic, a, b, b / (2.0 * a)).unwrap();
        assert!((r.value.ratio(&c.value) - 1.0).abs() < 1e-9);
        assert_eq!(c.route, Route::Contour);
    }

    #[test]
    fn contour_survives_underflow() {
        // exp(-b^2/4a) = exp(-1e6) is far below the smallest double
        let (a, b) = (2.5e5, 1e6);
        let got = gaussian_bessel_integral(&Quadratic, a, b, 1, true).unwrap();
        let want = quadratic_identity(a, b);
        assert!((got.value.ln_abs - want.ln_abs).abs() < 1e-10);
        assert_eq!(got.value.value(), 0.0);
    }

    #[test]
    fn log_value_arithmetic() {
        let v = LogValue::new(-3.0, 2.0);
        assert!((v.value() + 3.0 * 2f64.exp()).abs() < 1e-14);
        assert!((v.log10_abs() - (3.0f64.ln() + 2.0) / std::f64::consts::LN_10).abs() < 1e-15);
        assert!((v.ratio(&LogValue::new(3.0, 2.0)) + 1.0).abs() < 1e-15);
    }
}
