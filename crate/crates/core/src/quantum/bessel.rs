//! Bessel functions of integer order.
//!
//! Real `J_n` uses Miller's backward recurrence below `x = 25` and the Hankel
//! asymptotic expansion above. `H^(1)_n` for complex arguments uses the
//! asymptotic expansion only and is meant for `|z| >= 17` or so.

use num_complex::Complex64;
use std::f64::consts::PI;

/// Argument above which the asymptotic expansion replaces the recurrence.
pub const ASYMPTOTIC_SPLIT: f64 = 25.0;

/// Smallest `|z|` at which [`hankel1_scaled`] is trusted to ~1e-14.
pub const HANKEL_MIN_ARG: f64 = 17.0;

/// Bessel function of the first kind of order `n`.
pub fn bessel_j(n: u32, x: f64) -> f64 {
    if x < 0.0 {
        let v = bessel_j(n, -x);
        return if n % 2 == 1 { -v } else { v };
    }
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    if x >= ASYMPTOTIC_SPLIT.max(2.0 * n as f64 * n as f64) {
        let (p, q) = asymptotic_pq(n, Complex64::new(x, 0.0));
        let chi = x - (0.5 * n as f64 + 0.25) * PI;
        return (2.0 / (PI * x)).sqrt() * (p.re * chi.cos() - q.re * chi.sin());
    }
    miller(n, x)
}

pub fn bessel_j1(x: f64) -> f64 {
    bessel_j(1, x)
}

pub fn bessel_j2(x: f64) -> f64 {
    bessel_j(2, x)
}

fn miller(n: u32, x: f64) -> f64 {
    let m = n.max(x as u32) as f64;
    let mut start = (m + 20.0 + (40.0 * m).sqrt()) as u32;
    start += start % 2;
    let mut next = 0.0;
    let mut cur = 1e-300;
    let mut norm = 0.0;
    let mut wanted = 0.0;
    for k in (1..=start).rev() {
        // cur = J_k, produce J_{k-1}
        let prev = 2.0 * k as f64 / x * cur - next;
        next = cur;
        cur = prev;
        if k - 1 == n {
            wanted = cur;
        }
        if (k - 1) % 2 == 0 && k - 1 > 0 {
            norm += 2.0 * cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
            wanted *= 1e-250;
        }
    }
    norm += cur;
    wanted / norm
}

/// `P + i Q` split of the Hankel series, returned as two complex sums so the
/// same code serves real and complex arguments.
fn asymptotic_pq(n: u32, z: Complex64) -> (Complex64, Complex64) {
    let mu = 4.0 * (n as f64).powi(2);
    let mut p = Complex64::new(1.0, 0.0);
    let mut q = Complex64::new(0.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        term = term * (mu - odd * odd) / (k as f64 * 8.0 * z);
        let size = term.norm();
        if size > last {
            break;
        }
        last = size;
        // i^k a_k / z^k, split into P (even k) and Q (odd k)
        match k % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
        if size < 1e-17 * p.norm() {
            break;
        }
    }
    (p, q)
}

/// `H^(1)_n(z) exp(-i z)` from the asymptotic expansion, `-pi < arg z < pi`.
pub fn hankel1_scaled(n: u32, z: Complex64) -> Complex64 {
    let (p, q) = asymptotic_pq(n, z);
    let phase = Complex64::from_polar(1.0, -(0.5 * n as f64 + 0.25) * PI);
    (2.0 / (PI * z)).sqrt() * phase * (p + Complex64::i() * q)
}

/// `H^(1)_n(z)` from the asymptotic expansion.
pub fn hankel1(n: u32, z: Complex64) -> Complex64 {
    hankel1_scaled(n, z) * (Complex64::i() * z).exp()
}
