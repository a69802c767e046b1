//! Polynomial roots through companion-matrix eigenvalues, polished by Newton.
//!
//! Coefficients are stored lowest degree first: `c[0] + c[1] z + ... + c[n] z^n`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Value and derivative at `z` by Horner's rule.
pub fn eval<T>(coeffs: &[T], z: Complex64) -> (Complex64, Complex64)
where
    T: Copy + Into<Complex64>,
{
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c.into();
    }
    (p, dp)
}

/// `|p(z)|` divided by the sum of the magnitudes of its terms.
pub fn relative_residual<T>(coeffs: &[T], z: Complex64) -> f64
where
    T: Copy + Into<Complex64>,
{
    let (p, _) = eval(coeffs, z);
    let scale: f64 = coeffs.iter().enumerate().map(|(i, &c)| c.into().norm() * z.norm().powi(i as i32)).sum();
    if scale == 0.0 {
        p.norm()
    } else {
        p.norm() / scale
    }
}

/// Newton steps that are only accepted while they reduce the residual.
pub fn polish<T>(coeffs: &[T], mut z: Complex64, max_iter: usize) -> Complex64
where
    T: Copy + Into<Complex64>,
{
    let mut best = relative_residual(coeffs, z);
    for _ in 0..max_iter {
        let (p, dp) = eval(coeffs, z);
        if dp.norm() == 0.0 || p.norm() == 0.0 {
            break;
        }
        let candidate = z - p / dp;
        let r = relative_residual(coeffs, candidate);
        if !(r < best) {
            break;
        }
        z = candidate;
        best = r;
    }
    z
}

fn trimmed_degree<T: Copy + Into<Complex64>>(coeffs: &[T]) -> Result<usize> {
    let n = coeffs
        .iter()
        .rposition(|&c| c.into().norm() != 0.0)
        .ok_or_else(|| Error::Domain("zero polynomial has no roots".into()))?;
    Ok(n)
}

/// Roots of a real polynomial.
pub fn roots_real(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let n = trimmed_degree(coeffs)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[n];
    let mut companion = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        companion[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        companion[(i, n - 1)] = -coeffs[i] / lead;
    }
    let eig = companion.complex_eigenvalues();
    Ok(eig.iter().map(|&z| polish(&coeffs[..=n], z, 8)).collect())
}

/// Roots of a complex polynomial.
pub fn roots_complex(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = trimmed_degree(coeffs)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[n];
    let mut companion = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        companion[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        companion[(i, n - 1)] = -coeffs[i] / lead;
    }
    let eig = companion
        .eigenvalues()
        .ok_or_else(|| Error::Numerical("complex Schur iteration did not triangularize".into()))?;
    Ok(eig.iter().map(|&z| polish(&coeffs[..=n], z, 8)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
        v
    }

    #[test]
    fn real_cubic_with_known_roots() {
        // (z-1)(z+2)(z-3) = z^3 - 2z^2 - 5z + 6
        let roots = sorted(roots_real(&[6.0, -5.0, -2.0, 1.0]).unwrap());
        for (r, expect) in roots.iter().zip([-2.0, 1.0, 3.0]) {
            assert!((r - c(expect, 0.0)).norm() < 1e-13, "{r}");
        }
    }

    #[test]
    fn real_quadratic_with_complex_pair() {
        // z^2 + 1
        let roots = sorted(roots_real(&[1.0, 0.0, 1.0]).unwrap());
        assert!((roots[0] - c(0.0, -1.0)).norm() < 1e-14);
        assert!((roots[1] - c(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn complex_polynomial_from_roots() {
        let want = [c(1.0, 2.0), c(-0.5, 0.1), c(3.0, -1.0), c(0.0, 0.7)];
        // expand prod (z - r)
        let mut coeffs = vec![c(1.0, 0.0)];
        for r in want {
            let mut next = vec![c(0.0, 0.0); coeffs.len() + 1];
            for (i, &a) in coeffs.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= a * r;
            }
            coeffs = next;
        }
        let got = roots_complex(&coeffs).unwrap();
        for r in want {
            let nearest = got.iter().map(|g| (g - r).norm()).fold(f64::INFINITY, f64::min);
            assert!(nearest < 1e-12, "{r}: {nearest}");
        }
    }

    #[test]
    fn leading_zeros_are_trimmed() {
        assert_eq!(roots_real(&[2.0, 1.0, 0.0, 0.0]).unwrap().len(), 1);
        assert!(roots_real(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn horner_derivative() {
        let coeffs = [1.0, -3.0, 0.0, 2.0];
        let z = c(0.3, -1.2);
        let (p, dp) = eval(&coeffs, z);
        let expect_p = 1.0 - 3.0 * z + 2.0 * z * z * z;
        let expect_dp = -3.0 + 6.0 * z * z;
        assert!((p - expect_p).norm() < 1e-14);
        assert!((dp - expect_dp).norm() < 1e-14);
    }
}
