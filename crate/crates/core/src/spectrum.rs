//! Frequency and growth-rate extraction from sampled trajectories.
//!
//! Mode amplitudes evolve as `exp(-i w t)`. For a trajectory sampled at a fixed
//! step, `x + i y` carries the Gamma+ modes at `+w` and the Gamma- modes at `-w`;
//! `e_x + i e_y` carries them the other way round.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::dynamics::Trajectory;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    /// Signed angular frequency in the `exp(-i w t)` convention.
    pub omega: f64,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// `2 pi / (N dt)`.
    pub bin_width: f64,
    pub peaks: Vec<Peak>,
}

impl Spectrum {
    /// Peak closest to `omega`, with its distance in bins.
    pub fn nearest(&self, omega: f64) -> Option<(Peak, f64)> {
        self.peaks.iter().map(|p| (*p, (p.omega - omega).abs() / self.bin_width)).min_by(|a, b| a.1.total_cmp(&b.1))
    }
}

/// Hann-windowed spectrum of a uniformly sampled complex signal. Peaks are the
/// local maxima above `rel_threshold` times the largest one, refined by
/// parabolic interpolation of the log magnitude, sorted by magnitude.
pub fn spectral_peaks(signal: &[Complex64], dt: f64, rel_threshold: f64) -> Result<Spectrum> {
    let n = signal.len();
    if n < 16 {
        return Err(Error::Domain(format!("need at least 16 samples, got {n}")));
    }
    if !(dt > 0.0) {
        return Err(Error::Domain(format!("sample spacing must be > 0, got {dt}")));
    }
    let mean = signal.iter().sum::<Complex64>() / n as f64;
    let mut buf: Vec<Complex64> = signal
        .iter()
        .enumerate()
        .map(|(j, &z)| {
            let w = 0.5 - 0.5 * (2.0 * std::f64::consts::PI * j as f64 / n as f64).cos();
            (z - mean) * w
        })
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let mag: Vec<f64> = buf.iter().map(|z| z.norm()).collect();
    let top = mag.iter().cloned().fold(0.0, f64::max);
    let bin_width = 2.0 * std::f64::consts::PI / (n as f64 * dt);

    let mut peaks = Vec::new();
    for k in 0..n {
        let (l, r) = (mag[(k + n - 1) % n], mag[(k + 1) % n]);
        if mag[k] > l && mag[k] >= r && mag[k] > rel_threshold * top {
            let (a, b, c) = (l.max(1e-300).ln(), mag[k].ln(), r.max(1e-300).ln());
            let denom = a - 2.0 * b + c;
            let offset = if denom != 0.0 { 0.5 * (a - c) / denom } else { 0.0 };
            // FFT bin k is exp(+2 pi i k j / N); the signed bin index maps to -w
            let signed = if k <= n / 2 { k as f64 } else { k as f64 - n as f64 };
            peaks.push(Peak { omega: -(signed + offset) * bin_width, magnitude: mag[k] });
        }
    }
    peaks.sort_by(|a, b| b.magnitude.total_cmp(&a.magnitude));
    Ok(Spectrum { bin_width, peaks })
}

/// Samples of `x + i y` and `e_x + i e_y` from a trajectory.
pub fn complex_signals(traj: &Trajectory) -> (Vec<Complex64>, Vec<Complex64>) {
    traj.states.iter().map(|s| (Complex64::new(s.pos[0], s.pos[1]), Complex64::new(s.n_hat[0], s.n_hat[1]))).unzip()
}

/// Least-squares fit of `ln v = rate t + c`.
pub fn fit_exponential_rate(times: &[f64], values: &[f64]) -> Result<(f64, f64)> {
    let pts: Vec<(f64, f64)> =
        times.iter().zip(values).filter(|(_, v)| **v > 0.0 && v.is_finite()).map(|(t, v)| (*t, v.ln())).collect();
    if pts.len() < 3 {
        return Err(Error::Numerical(format!("exponential fit needs at least 3 positive samples, got {}", pts.len())));
    }
    let n = pts.len() as f64;
    let tm = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let ym = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - tm).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - tm) * (p.1 - ym)).sum();
    if sxx == 0.0 {
        return Err(Error::Numerical("exponential fit needs distinct times".into()));
    }
    let rate = sxy / sxx;
    Ok((rate, ym - rate * tm))
}

/// Growth (positive) or decay (negative) rate of the distance from the
/// stationary point. Only samples with `lo <= deviation <= hi` are used, which
/// keeps the fit inside the linear regime.
pub fn deviation_rate(traj: &Trajectory, lo: f64, hi: f64) -> Result<f64> {
    let (t, v): (Vec<f64>, Vec<f64>) = traj
        .times
        .iter()
        .zip(&traj.states)
        .map(|(t, s)| (*t, s.deviation()))
        .filter(|(_, d)| *d >= lo && *d <= hi)
        .unzip();
    if t.len() < 10 {
        return Err(Error::Numerical(format!("only {} samples with deviation in [{lo:e}, {hi:e}]", t.len())));
    }
    Ok(fit_exponential_rate(&t, &v)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_two_tones_with_signs() {
        let dt = 0.01;
        let sig: Vec<Complex64> = (0..8192)
            .map(|j| {
                let t = j as f64 * dt;
                (-Complex64::i() * 3.3 * t).exp() + 0.2 * (Complex64::i() * 7.1 * t).exp()
            })
            .collect();
        let s = spectral_peaks(&sig, dt, 0.05).unwrap();
        assert!((s.peaks[0].omega - 3.3).abs() < 0.2 * s.bin_width, "{:?}", s.peaks[0]);
        let (p, bins) = s.nearest(-7.1).unwrap();
        assert!(bins < 0.2, "{p:?}");
    }

    #[test]
    fn exponential_fit_is_exact_on_exponentials() {
        let t: Vec<f64> = (0..50).map(|i| i as f64 * 0.1).collect();
        let v: Vec<f64> = t.iter().map(|t| 2.5 * (0.7 * t).exp()).collect();
        let (rate, c) = fit_exponential_rate(&t, &v).unwrap();
        assert!((rate - 0.7).abs() < 1e-12);
        assert!((c - 2.5f64.ln()).abs() < 1e-12);
        assert!(fit_exponential_rate(&t[..2], &v[..2]).is_err());
    }

    #[test]
    fn short_signals_are_rejected() {
        assert!(spectral_peaks(&[Complex64::new(1.0, 0.0); 4], 0.1, 0.1).is_err());
    }
}
