//! CSV and JSON artifacts, with readers for each writer.

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{ClassicalState, Trajectory};
use crate::error::{Error, Result};
use crate::modes::SweepRow;
use crate::quantum::LifetimeReport;
use crate::spectrum::deviation_rate;

pub const SWEEP_HEADER: [&str; 8] = ["K", "re_w1", "im_w1", "re_w2", "im_w2", "re_w3", "im_w3", "stable"];
pub const TRAJECTORY_HEADER: [&str; 10] = ["t", "x", "y", "vx", "vy", "nx", "ny", "nz", "lambda", "xi"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    #[serde(rename = "K")]
    pub k: f64,
    pub re_w1: f64,
    pub im_w1: f64,
    pub re_w2: f64,
    pub im_w2: f64,
    pub re_w3: f64,
    pub im_w3: f64,
    pub stable: bool,
}

impl SweepRecord {
    pub fn omegas(&self) -> [Complex64; 3] {
        [
            Complex64::new(self.re_w1, self.im_w1),
            Complex64::new(self.re_w2, self.im_w2),
            Complex64::new(self.re_w3, self.im_w3),
        ]
    }
}

impl From<&SweepRow> for SweepRecord {
    fn from(row: &SweepRow) -> Self {
        let w = row.modes.map(|m| m.omega_n);
        Self {
            k: row.k,
            re_w1: w[0].re,
            im_w1: w[0].im,
            re_w2: w[1].re,
            im_w2: w[1].im,
            re_w3: w[2].re,
            im_w3: w[2].im,
            stable: row.stable,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub vx: f64,
    pub vy: f64,
    pub nx: f64,
    pub ny: f64,
    pub nz: f64,
    pub lambda: f64,
    pub xi: f64,
}

impl TrajectoryRecord {
    pub fn state(&self) -> ClassicalState {
        ClassicalState { pos: [self.x, self.y], vel: [self.vx, self.vy], n_hat: [self.nx, self.ny, self.nz] }
    }
}

fn check_header<R: Read>(reader: &mut csv::Reader<R>, expected: &[&str]) -> Result<()> {
    let header = reader.headers()?;
    if header.iter().ne(expected.iter().copied()) {
        return Err(Error::Parse(format!(
            "expected header `{}`, got `{}`",
            expected.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    Ok(())
}

pub fn write_sweep_csv<W: Write>(out: W, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(SweepRecord::from(row))?;
    }
    if rows.is_empty() {
        w.write_record(SWEEP_HEADER)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_sweep_csv<R: Read>(input: R) -> Result<Vec<SweepRecord>> {
    let mut r = csv::Reader::from_reader(input);
    check_header(&mut r, &SWEEP_HEADER)?;
    Ok(r.deserialize().collect::<std::result::Result<_, _>>()?)
}

pub fn write_trajectory_csv<W: Write>(out: W, traj: &Trajectory) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for i in 0..traj.len() {
        let s = traj.states[i];
        w.serialize(TrajectoryRecord {
            t: traj.times[i],
            x: s.pos[0],
            y: s.pos[1],
            vx: s.vel[0],
            vy: s.vel[1],
            nx: s.n_hat[0],
            ny: s.n_hat[1],
            nz: s.n_hat[2],
            lambda: traj.lambda_series[i],
            xi: traj.energy_series[i],
        })?;
    }
    if traj.is_empty() {
        w.write_record(TRAJECTORY_HEADER)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_trajectory_csv<R: Read>(input: R) -> Result<Vec<TrajectoryRecord>> {
    let mut r = csv::Reader::from_reader(input);
    check_header(&mut r, &TRAJECTORY_HEADER)?;
    Ok(r.deserialize().collect::<std::result::Result<_, _>>()?)
}

pub fn write_lifetime_json<W: Write>(out: W, report: &LifetimeReport) -> Result<()> {
    serde_json::to_writer_pretty(out, report)?;
    Ok(())
}

pub fn read_lifetime_json<R: Read>(input: R) -> Result<LifetimeReport> {
    Ok(serde_json::from_reader(input)?)
}

/// Scalar summary of a simulation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationSummary {
    pub k: f64,
    pub dt_scaled: f64,
    pub t_final_scaled: f64,
    pub samples: usize,
    pub lambda_drift: f64,
    pub energy_drift: f64,
    pub max_norm_drift: f64,
    pub accuracy_warning: bool,
    pub initial_deviation: f64,
    pub final_deviation: f64,
    /// Exponential rate of the deviation from the stationary point, per unit scaled time.
    pub growth_rate_scaled: Option<f64>,
}

impl SimulationSummary {
    /// When the deviation grows by more than 100x, the rate is fitted between
    /// 100x the initial deviation and 1e-2 (the linear regime); otherwise over
    /// the whole run.
    pub fn from_trajectory(traj: &Trajectory) -> Self {
        let d0 = traj.states[0].deviation();
        let d_end = traj.states.last().map(|s| s.deviation()).unwrap_or(d0);
        let growing = d0 > 0.0 && traj.states.iter().any(|s| s.deviation() > 100.0 * d0);
        let rate = if d0 == 0.0 {
            None
        } else if growing && 100.0 * d0 < 1e-2 {
            deviation_rate(traj, 100.0 * d0, 1e-2).ok()
        } else {
            deviation_rate(traj, 0.0, f64::INFINITY).ok()
        };
        Self {
            k: traj.k,
            dt_scaled: traj.dt,
            t_final_scaled: traj.times.last().copied().unwrap_or(0.0),
            samples: traj.len(),
            lambda_drift: traj.lambda_drift(),
            energy_drift: traj.energy_drift(),
            max_norm_drift: traj.max_norm_drift,
            accuracy_warning: traj.accuracy_warning,
            initial_deviation: d0,
            final_deviation: d_end,
            growth_rate_scaled: rate,
        }
    }
}

pub fn write_summary_json<W: Write>(out: W, summary: &SimulationSummary) -> Result<()> {
    serde_json::to_writer_pretty(out, summary)?;
    Ok(())
}

pub fn read_summary_json<R: Read>(input: R) -> Result<SimulationSummary> {
    Ok(serde_json::from_reader(input)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{Dynamics, ScaledFriction};
    use crate::modes::{sweep, Orientation};

    #[test]
    fn sweep_round_trip() {
        let rows = sweep(0.1, 0.6, 11).unwrap();
        let mut buf = Vec::new();
        write_sweep_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("K,re_w1,im_w1,re_w2,im_w2,re_w3,im_w3,stable\n"));
        let back = read_sweep_csv(&buf[..]).unwrap();
        assert_eq!(back.len(), 11);
        for (r, b) in rows.iter().zip(&back) {
            assert_eq!(SweepRecord::from(r), *b);
        }
    }

    #[test]
    fn trajectory_round_trip() {
        let d = Dynamics::new(0.2, ScaledFriction::none()).unwrap();
        let traj = d.integrate(ClassicalState::kicked(Orientation::Down, 1e-2), 0.01, 1.0, 7).unwrap();
        let mut buf = Vec::new();
        write_trajectory_csv(&mut buf, &traj).unwrap();
        let back = read_trajectory_csv(&buf[..]).unwrap();
        assert_eq!(back.len(), traj.len());
        for (i, rec) in back.iter().enumerate() {
            assert_eq!(rec.state(), traj.states[i]);
            assert_eq!(rec.t, traj.times[i]);
            assert_eq!(rec.xi, traj.energy_series[i]);
        }
    }

    #[test]
    fn wrong_header_is_rejected() {
        let err = read_sweep_csv("K,a,b\n1,2,3\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("expected header"));
    }

    #[test]
    fn summary_reports_growth() {
        let d = Dynamics::new(0.5, ScaledFriction::none()).unwrap();
        let traj = d.integrate(ClassicalState::kicked(Orientation::Down, 1e-6), 0.01, 30.0, 1).unwrap();
        let s = SimulationSummary::from_trajectory(&traj);
        let rate = s.growth_rate_scaled.unwrap();
        assert!((rate - 0.6063).abs() < 0.03, "{rate}");
        let mut buf = Vec::new();
        write_summary_json(&mut buf, &s).unwrap();
        assert_eq!(read_summary_json(&buf[..]).unwrap(), s);
    }
}
