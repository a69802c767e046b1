//! Normal modes of the linearized motion about the stationary states.
//!
//! Frequencies are in units of `omega_vib` (written `w` below), modes evolve
//! as `exp(-i w t)`, and the three physical modes are the roots with
//! non-negative real part. The secular cubics are
//!
//! ```text
//! Gamma+ : K w^3 + w^2 - s = 0
//! Gamma- : K w^3 - w^2 + s = 0
//! ```
//!
//! with `s = +1` about the spin-down state (`n = -z`, moment antiparallel to
//! the field) and `s = -1` about the spin-up state. This is the assignment
//! for which spin-up is unstable for every `K` and spin-down is stable below
//! `K_c = sqrt(4/27)`; `jacobian_at_stationary` in [`crate::dynamics`] derives
//! the same cubics from the equations of motion.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Symmetry {
    /// Counter-clockwise orbit, `(rho+ = dx + i dy, eps- = ex - i ey)`.
    GammaPlus,
    /// Clockwise orbit, `(rho- = dx - i dy, eps+ = ex + i ey)`.
    GammaMinus,
}

/// Stationary spin orientation relative to the bias field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    /// `n = +z`, moment parallel to the field.
    Up,
    /// `n = -z`, moment antiparallel to the field (the trapped state).
    Down,
}

impl Orientation {
    /// z-component of the stationary spin direction.
    pub fn nz(self) -> f64 {
        match self {
            Orientation::Up => 1.0,
            Orientation::Down => -1.0,
        }
    }

    fn sign(self) -> f64 {
        -self.nz()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    VibrationalPlus,
    VibrationalMinus,
    Precessional,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeSolution {
    /// Frequency in units of `omega_vib`.
    pub omega_n: Complex64,
    pub symmetry: Symmetry,
    pub branch: Branch,
    /// Orbit amplitude in units of `B0/B'`.
    pub rho_0: Complex64,
    /// Spin tilt amplitude.
    pub eps_0: Complex64,
    pub amplitude: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub k: f64,
    /// Ordered as vibrational+, vibrational-, precessional.
    pub modes: [ModeSolution; 3],
    pub stable: bool,
}

fn check_k(k: f64) -> Result<()> {
    if k.is_finite() && k > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("K must be finite and > 0, got {k}")))
    }
}

/// Cubic coefficients, lowest degree first.
pub fn secular_coefficients(k: f64, symmetry: Symmetry, orientation: Orientation) -> [f64; 4] {
    let s = orientation.sign();
    match symmetry {
        Symmetry::GammaPlus => [-s, 0.0, 1.0, k],
        Symmetry::GammaMinus => [s, 0.0, -1.0, k],
    }
}

/// Discriminant of `a z^3 + b z^2 + c z + d`; positive for three distinct real roots.
pub fn cubic_discriminant(coeffs: &[f64; 4]) -> f64 {
    let [d, c, b, a] = *coeffs;
    18.0 * a * b * c * d - 4.0 * b.powi(3) * d + b * b * c * c - 4.0 * a * c.powi(3) - 27.0 * a * a * d * d
}

// Discriminants within this band of zero are treated as a double root.
const MARGINAL_DISCRIMINANT: f64 = 1e-13;

fn has_real_roots(coeffs: &[f64; 4]) -> bool {
    let [d, _, b, a] = *coeffs;
    let scale = 4.0 * (b.powi(3) * d).abs() + 27.0 * (a * d).powi(2);
    cubic_discriminant(coeffs) >= -MARGINAL_DISCRIMINANT * scale
}

/// The three roots, sorted by descending real part then descending imaginary part.
pub fn secular_roots(k: f64, symmetry: Symmetry, orientation: Orientation) -> Result<[Complex64; 3]> {
    check_k(k)?;
    let coeffs = secular_coefficients(k, symmetry, orientation);
    let mut roots = poly::roots_real(&coeffs)?;
    if roots.len() != 3 {
        return Err(Error::Numerical(format!("expected 3 roots, found {}", roots.len())));
    }
    if has_real_roots(&coeffs) {
        // all roots real; drop the eigenvalue round-off in the imaginary part
        for r in roots.iter_mut() {
            *r = poly::polish(&coeffs, Complex64::new(r.re, 0.0), 8);
            r.im = 0.0;
        }
    } else {
        // one real root and a conjugate pair
        roots.sort_by(|a, b| a.im.abs().partial_cmp(&b.im.abs()).unwrap());
        roots[0].im = 0.0;
        let pair = if roots[1].im >= 0.0 { roots[1] } else { roots[2] };
        roots[1] = pair;
        roots[2] = pair.conj();
    }
    roots.sort_by(|a, b| b.re.partial_cmp(&a.re).unwrap().then(b.im.partial_cmp(&a.im).unwrap()));
    Ok([roots[0], roots[1], roots[2]])
}

/// `sqrt(4/27)`, above which the spin-down state is unstable.
pub fn critical_k() -> f64 {
    (4.0f64 / 27.0).sqrt()
}

/// Finds `(K, w)` where the spin-down Gamma- cubic and its derivative vanish
/// together, by Newton iteration on the pair of equations.
pub fn locate_double_root(k_guess: f64, w_guess: f64) -> Result<(f64, f64)> {
    let (mut k, mut w) = (k_guess, w_guess);
    for _ in 0..100 {
        let f1 = k * w.powi(3) - w * w + 1.0;
        let f2 = 3.0 * k * w * w - 2.0 * w;
        let (a, b) = (w.powi(3), 3.0 * k * w * w - 2.0 * w);
        let (c, d) = (3.0 * w * w, 6.0 * k * w - 2.0);
        let det = a * d - b * c;
        if det == 0.0 {
            return Err(Error::Numerical("singular Jacobian locating the double root".into()));
        }
        let dk = (f1 * d - b * f2) / det;
        let dw = (a * f2 - c * f1) / det;
        k -= dk;
        w -= dw;
        if dk.abs() <= 1e-16 * k.abs() && dw.abs() <= 1e-16 * w.abs() {
            break;
        }
    }
    let f1 = k * w.powi(3) - w * w + 1.0;
    let f2 = 3.0 * k * w * w - 2.0 * w;
    if f1.abs() > 1e-13 || f2.abs() > 1e-13 {
        return Err(Error::Numerical(format!("double-root search did not converge (residuals {f1:e}, {f2:e})")));
    }
    Ok((k, w))
}

/// Small-K forms of the spin-down frequencies: `[1 - K/2, 1 + K/2, 1/K - K]`.
pub fn small_k_asymptotics(k: f64) -> [f64; 3] {
    [1.0 - 0.5 * k, 1.0 + 0.5 * k, 1.0 / k - k]
}

/// Mode amplitudes `(rho_0, eps_0) = (A / w, -w A)` in scaled units.
pub fn eigenvector_for(k: f64, omega_n: Complex64, amplitude: f64) -> Result<(Complex64, Complex64)> {
    check_k(k)?;
    if omega_n.norm() == 0.0 {
        return Err(Error::SingularMode);
    }
    Ok((amplitude / omega_n, -omega_n * amplitude))
}

/// Relative residual `|M v| / (|M| |v|)` of the 2x2 amplitude equations.
pub fn secular_residual(
    k: f64,
    omega_n: Complex64,
    symmetry: Symmetry,
    orientation: Orientation,
    vector: (Complex64, Complex64),
) -> f64 {
    let i = Complex64::i();
    let s = orientation.sign();
    let w = omega_n;
    let m = match symmetry {
        Symmetry::GammaPlus => [[w * w, 1.0.into()], [i * s / k, i * (w + 1.0 / k)]],
        Symmetry::GammaMinus => [[w * w, 1.0.into()], [-i * s / k, i * (w - 1.0 / k)]],
    };
    let (rho, eps) = vector;
    let r0 = m[0][0] * rho + m[0][1] * eps;
    let r1 = m[1][0] * rho + m[1][1] * eps;
    let mnorm = m.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let vnorm = (rho.norm_sqr() + eps.norm_sqr()).sqrt();
    (r0.norm_sqr() + r1.norm_sqr()).sqrt() / (mnorm * vnorm)
}

/// Excitation energy of an oscillatory mode in units of `mu B0`:
/// `(3 - w^2) |A|^2`.
pub fn excitation_energy(omega_n: Complex64, amplitude: f64) -> Result<f64> {
    if omega_n.im.abs() > 1e-12 * omega_n.norm().max(1.0) {
        return Err(Error::ComplexFrequency(omega_n));
    }
    let w = omega_n.re;
    Ok((3.0 - w * w) * amplitude * amplitude)
}

/// First-order frequency shift from viscous friction,
/// `i K (rp w^4 + rt) / (w^2 - 3)`, where `rt = r_t (B0/B')^2 / S` and
/// `rp = r_p / S`.
pub fn friction_shift(k: f64, omega_n0: f64, rt_group: f64, rp_group: f64) -> Result<Complex64> {
    check_k(k)?;
    if !(rt_group >= 0.0 && rp_group >= 0.0) {
        return Err(Error::Domain("friction coefficients must be >= 0".into()));
    }
    let w2 = omega_n0 * omega_n0;
    if (w2 - 3.0).abs() <= 1e-12 * 3.0 {
        return Err(Error::DegenerateMode);
    }
    let num = rp_group * w2 * w2 + rt_group;
    Ok(Complex64::new(0.0, k * num / (w2 - 3.0)))
}

/// Damped secular polynomial to first order in friction, both symmetry
/// classes multiplied together (degree 6, lowest degree first).
pub fn damped_secular_coefficients(k: f64, rt_group: f64, rp_group: f64) -> [Complex64; 7] {
    let i = Complex64::i();
    [
        1.0.into(),
        -2.0 * i * k * rt_group,
        (-2.0).into(),
        2.0 * i * k * (rt_group - rp_group),
        1.0.into(),
        2.0 * i * k * rp_group - 2.0 * i * k.powi(3) * rt_group,
        (-k * k).into(),
    ]
}

/// Roots of the damped secular polynomial.
pub fn damped_roots(k: f64, rt_group: f64, rp_group: f64) -> Result<Vec<Complex64>> {
    check_k(k)?;
    poly::roots_complex(&damped_secular_coefficients(k, rt_group, rp_group))
}

fn mode(k: f64, omega_n: Complex64, symmetry: Symmetry, branch: Branch, amplitude: f64) -> Result<ModeSolution> {
    let (rho_0, eps_0) = eigenvector_for(k, omega_n, amplitude)?;
    Ok(ModeSolution { omega_n, symmetry, branch, rho_0, eps_0, amplitude })
}

/// True when every mode frequency about `orientation` is real.
pub fn is_stable(k: f64, orientation: Orientation) -> Result<bool> {
    check_k(k)?;
    // both symmetry classes share the discriminant since their roots are negatives
    let coeffs = secular_coefficients(k, Symmetry::GammaMinus, orientation);
    Ok(has_real_roots(&coeffs))
}

/// The three physical spin-down modes, ordered vibrational+, vibrational-,
/// precessional. Above `K_c` the complex pair is split by sign of the
/// imaginary part, precessional taking the growing root.
pub fn spin_down_modes(k: f64, amplitude: f64) -> Result<[ModeSolution; 3]> {
    let plus = secular_roots(k, Symmetry::GammaPlus, Orientation::Down)?;
    let minus = secular_roots(k, Symmetry::GammaMinus, Orientation::Down)?;
    let vib_plus = plus[0];
    // sorted by descending Re then Im: the first two have Re > 0
    let (prec, vib_minus) = (minus[0], minus[1]);
    Ok([
        mode(k, vib_plus, Symmetry::GammaPlus, Branch::VibrationalPlus, amplitude)?,
        mode(k, vib_minus, Symmetry::GammaMinus, Branch::VibrationalMinus, amplitude)?,
        mode(k, prec, Symmetry::GammaMinus, Branch::Precessional, amplitude)?,
    ])
}

/// Spin-down spectrum on a uniform K grid with continuous branch tracking.
pub fn sweep(k_min: f64, k_max: f64, steps: usize) -> Result<Vec<SweepRow>> {
    if !(k_min > 0.0 && k_max > k_min && k_max.is_finite()) {
        return Err(Error::Domain(format!("need 0 < k_min < k_max, got k_min = {k_min}, k_max = {k_max}")));
    }
    if steps < 2 {
        return Err(Error::Domain(format!("need at least 2 steps, got {steps}")));
    }
    let mut rows: Vec<SweepRow> = Vec::with_capacity(steps);
    for i in 0..steps {
        let k = k_min + (k_max - k_min) * i as f64 / (steps - 1) as f64;
        let mut modes = spin_down_modes(k, 1.0)?;
        if let Some(prev) = rows.last() {
            let (pv, pp) = (prev.modes[1].omega_n, prev.modes[2].omega_n);
            let (v, p) = (modes[1].omega_n, modes[2].omega_n);
            let keep = (v - pv).norm() + (p - pp).norm();
            let swap = (p - pv).norm() + (v - pp).norm();
            if swap < keep * (1.0 - 1e-12) {
                modes[1] = mode(k, p, Symmetry::GammaMinus, Branch::VibrationalMinus, 1.0)?;
                modes[2] = mode(k, v, Symmetry::GammaMinus, Branch::Precessional, 1.0)?;
            }
        }
        let stable = is_stable(k, Orientation::Down)?;
        rows.push(SweepRow { k, modes, stable });
    }
    Ok(rows)
}
