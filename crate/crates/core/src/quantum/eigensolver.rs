//! Finite-difference oracle for the radial equation
//!
//! ```text
//! -c (f'' + f'/r - m2 f / r^2) + V(r) f = E f,    f(r_max) = 0
//! ```
//!
//! on a cell-centred grid `r_i = (i + 1/2) h`. The conservative discretization
//! of `(1/r)(r f')'` becomes symmetric in `u_i = sqrt(r_i h) f_i`, which is the
//! discrete form of `f = u / sqrt(r)`. Eigenvalues come from Sturm-sequence
//! bisection, eigenvectors from inverse iteration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RadialOperator {
    pub h: f64,
    pub r: Vec<f64>,
    diag: Vec<f64>,
    off: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialEigenstate {
    pub energy: f64,
    pub r: Vec<f64>,
    /// Radial function normalized to `sum f_i^2 r_i h = 1`, positive near the origin.
    pub f: Vec<f64>,
}

impl RadialOperator {
    /// `kinetic` is `c`, `angular` is `m2`.
    pub fn new(potential: impl Fn(f64) -> f64, kinetic: f64, angular: f64, r_max: f64, n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Domain(format!("radial grid needs at least 3 points, got {n}")));
        }
        if !(r_max > 0.0 && r_max.is_finite()) {
            return Err(Error::Domain(format!("r_max must be > 0, got {r_max}")));
        }
        if !(kinetic > 0.0) || angular < 0.0 {
            return Err(Error::Domain("kinetic coefficient must be > 0 and angular term >= 0".into()));
        }
        let h = r_max / n as f64;
        let r: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) * h).collect();
        let h2 = h * h;
        let diag = (0..n)
            .map(|i| {
                let inner = i as f64 * h;
                let outer = if i + 1 == n { 2.0 * r_max } else { (i as f64 + 1.0) * h };
                kinetic * (inner + outer) / (h2 * r[i]) + kinetic * angular / (r[i] * r[i]) + potential(r[i])
            })
            .collect();
        let off = (0..n - 1).map(|i| -kinetic * (i as f64 + 1.0) * h / (h2 * (r[i] * r[i + 1]).sqrt())).collect();
        Ok(Self { h, r, diag, off })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of eigenvalues strictly below `e`.
    pub fn count_below(&self, e: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.diag.len() {
            let coupling = if i == 0 { 0.0 } else { self.off[i - 1] * self.off[i - 1] / q };
            q = self.diag[i] - e - coupling;
            if q == 0.0 {
                q = -f64::EPSILON * (self.diag[i].abs() + e.abs()).max(f64::MIN_POSITIVE);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.diag.len() {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < self.diag.len() { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// The `index`-th eigenvalue (0 = lowest) by bisection.
    pub fn eigenvalue(&self, index: usize) -> Result<f64> {
        if index >= self.len() {
            return Err(Error::Domain(format!("eigenvalue index {index} out of range")));
        }
        let (mut lo, mut hi) = self.gershgorin();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Eigenvector for an accurately known eigenvalue, normalized as a radial function.
    pub fn eigenvector(&self, energy: f64) -> Result<Vec<f64>> {
        let n = self.len();
        let shift = energy + 1e-10 * energy.abs().max(1e-300);
        let mut x = vec![1.0; n];
        for _ in 0..4 {
            x = self.solve_shifted(shift, &x)?;
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            if !(norm.is_finite() && norm > 0.0) {
                return Err(Error::Numerical("inverse iteration produced a degenerate vector".into()));
            }
            x.iter_mut().for_each(|v| *v /= norm);
        }
        let sign = if x.iter().take(n / 10 + 1).sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
        Ok(x.iter().zip(&self.r).map(|(u, r)| sign * u / (r * self.h).sqrt()).collect())
    }

    // (T - s) y = b by the Thomas algorithm with partial pivoting skipped;
    // the shift sits just off an eigenvalue so pivots stay away from zero
    fn solve_shifted(&self, s: f64, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.len();
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let mut denom = self.diag[0] - s;
        for i in 0..n {
            if i > 0 {
                denom = self.diag[i] - s - self.off[i - 1] * c[i - 1];
            }
            if denom == 0.0 {
                denom = 1e-300;
            }
            c[i] = if i + 1 < n { self.off[i] / denom } else { 0.0 };
            d[i] = (b[i] - if i > 0 { self.off[i - 1] * d[i - 1] } else { 0.0 }) / denom;
        }
        for i in (0..n - 1).rev() {
            d[i] -= c[i] * d[i + 1];
        }
        if d.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numerical("inverse iteration overflowed".into()));
        }
        Ok(d)
    }

    pub fn lowest(&self) -> Result<RadialEigenstate> {
        let energy = self.eigenvalue(0)?;
        let f = self.eigenvector(energy)?;
        Ok(RadialEigenstate { energy, r: self.r.clone(), f })
    }
}

/// Lowest eigenstate on `n` points, checked against the same problem on
/// `n / 2` points: a relative change above `1e-3` is reported as failure to
/// converge under refinement.
pub fn radial_eigensolver(
    potential: impl Fn(f64) -> f64,
    kinetic: f64,
    angular: f64,
    r_max: f64,
    n: usize,
) -> Result<RadialEigenstate> {
    let fine = RadialOperator::new(&potential, kinetic, angular, r_max, n)?.lowest()?;
    let coarse = RadialOperator::new(&potential, kinetic, angular, r_max, (n / 2).max(3))?.eigenvalue(0)?;
    let change = (fine.energy - coarse).abs() / fine.energy.abs().max(f64::MIN_POSITIVE);
    if change > 1e-3 {
        return Err(Error::Numerical(format!(
            "lowest eigenvalue moved by {change:e} relative between {} and {n} points",
            n / 2
        )));
    }
    Ok(fine)
}

/// `sqrt(sum (f_i - g(r_i))^2 r_i h)`.
pub fn l2_distance(state: &RadialEigenstate, g: impl Fn(f64) -> f64) -> f64 {
    let h = state.r[1] - state.r[0];
    state.r.iter().zip(&state.f).map(|(r, f)| (f - g(*r)).powi(2) * r * h).sum::<f64>().sqrt()
}
