use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

use magtrap::check::{run_checks, Perturbation};
use magtrap::config::{load_config, Preset};
use magtrap::dynamics::{ClassicalState, Dynamics, FrictionCoefficients, ScaledFriction, DEFAULT_DT};
use magtrap::io::{write_lifetime_json, write_summary_json, write_sweep_csv, write_trajectory_csv, SimulationSummary};
use magtrap::modes::{critical_k, spin_down_modes, sweep, Branch, Orientation};
use magtrap::quantum::lifetime;
use magtrap::report::{format_table, summary_table};
use magtrap::trap::TrapConfig;
use magtrap::Error;

/// Smallest K the default step resolves.
const DEFAULT_DT_MIN_K: f64 = 0.005;

#[derive(Parser)]
#[command(name = "magtrap", version, about = "Spin-1/2 particle in a 2D magnetic trap: modes, dynamics, lifetime")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the spin-down mode spectrum over K and write CSV
    Modes {
        #[arg(long)]
        k_min: f64,
        #[arg(long)]
        k_max: f64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        steps: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Integrate the nonlinear equations of motion
    #[command(group(ArgGroup::new("source").required(true).args(["config", "k"])))]
    Simulate {
        /// Physical config file; friction is then in g/s and erg s
        #[arg(long)]
        config: Option<PathBuf>,
        /// Scaled run at this K; friction is then r_t/(m omega_vib) and r_p/S
        #[arg(long)]
        k: Option<f64>,
        /// Initial displacement along x, or the mode amplitude with --excite
        #[arg(long, default_value_t = 1e-3)]
        kick: f64,
        /// Start from a single normal mode instead of a displacement
        #[arg(long, value_enum)]
        excite: Option<Excite>,
        #[arg(long, value_enum, default_value_t = Spin::Down)]
        spin: Spin,
        /// Scaled time (units of 1/omega_vib)
        #[arg(long, default_value_t = 200.0 * std::f64::consts::PI)]
        t_final: f64,
        /// Scaled step; defaults to T_vib/1000, required for K < 0.005
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        rt: f64,
        #[arg(long, default_value_t = 0.0)]
        rp: f64,
        /// Keep every n-th step
        #[arg(long, default_value_t = 1)]
        stride: usize,
        /// Trajectory CSV
        #[arg(long)]
        out: PathBuf,
        /// Summary JSON; printed to stdout when absent
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Escape lifetime report as JSON
    #[command(group(ArgGroup::new("source").required(true).args(["config", "preset"])))]
    Lifetime {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_parser = ["neutron", "atom"])]
        preset: Option<String>,
        /// Output path; stdout when absent
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Order-of-magnitude table for the neutron and atom presets
    Table,
    /// Run the built-in self-checks
    Check {
        /// Scale a named constant, e.g. `critical_k=1.01`, to exercise the harness
        #[arg(long)]
        perturb: Option<Perturbation>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Excite {
    VibPlus,
    VibMinus,
    Precessional,
}

#[derive(Clone, Copy, ValueEnum)]
enum Spin {
    Up,
    Down,
}

enum Failure {
    Physics(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Numerical(_) | Error::SingularMode | Error::DegenerateMode | Error::ComplexFrequency(_) => {
                Failure::Physics(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn create(path: &PathBuf) -> Result<BufWriter<File>, Failure> {
    File::create(path).map(BufWriter::new).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn modes(k_min: f64, k_max: f64, steps: u64, out: &PathBuf) -> Result<(), Failure> {
    let rows = sweep(k_min, k_max, steps as usize)?;
    let mut file = create(out)?;
    write_sweep_csv(&mut file, &rows)?;
    file.flush()?;
    println!("K_c = {:.12}", critical_k());
    println!("merge frequency = {:.12} omega_vib (sqrt 3)", 3f64.sqrt());
    let flips = rows.windows(2).filter(|w| w[0].stable != w[1].stable).count();
    println!("{} rows written to {}, stability changes {flips} time(s)", rows.len(), out.display());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    config: Option<&PathBuf>,
    k: Option<f64>,
    kick: f64,
    excite: Option<Excite>,
    spin: Spin,
    t_final: f64,
    dt: Option<f64>,
    rt: f64,
    rp: f64,
    stride: usize,
    out: &PathBuf,
    summary: Option<&PathBuf>,
) -> Result<(), Failure> {
    let dynamics = match (config, k) {
        (Some(path), None) => {
            let cfg = load_config(path)?;
            Dynamics::from_config(&cfg, FrictionCoefficients { r_t: rt, r_p: rp })?
        }
        (None, Some(k)) => Dynamics::new(k, ScaledFriction { translational: rt, precessional: rp })?,
        _ => return Err(Failure::Usage("give exactly one of --config or --k".into())),
    };
    let dt = match dt {
        Some(dt) => dt,
        None if dynamics.k < DEFAULT_DT_MIN_K => {
            return Err(Failure::Usage(format!(
                "K = {:e} is below {DEFAULT_DT_MIN_K}; pass --dt explicitly",
                dynamics.k
            )))
        }
        None => DEFAULT_DT,
    };
    let orientation = match spin {
        Spin::Up => Orientation::Up,
        Spin::Down => Orientation::Down,
    };
    let state0 = match excite {
        None => ClassicalState::kicked(orientation, kick),
        Some(which) => {
            if matches!(spin, Spin::Up) {
                return Err(Failure::Usage("--excite uses the spin-down normal modes".into()));
            }
            let branch = match which {
                Excite::VibPlus => Branch::VibrationalPlus,
                Excite::VibMinus => Branch::VibrationalMinus,
                Excite::Precessional => Branch::Precessional,
            };
            let modes = spin_down_modes(dynamics.k, kick)?;
            let m = modes.iter().find(|m| m.branch == branch).expect("all branches present");
            ClassicalState::from_modes(orientation, &[*m])
        }
    };
    let traj = dynamics.integrate(state0, dt, t_final, stride)?;
    let mut file = create(out)?;
    write_trajectory_csv(&mut file, &traj)?;
    file.flush()?;
    let s = SimulationSummary::from_trajectory(&traj);
    if s.accuracy_warning {
        eprintln!("warning: |n| drifted by {:e} within a step; reduce --dt", s.max_norm_drift);
    }
    match summary {
        Some(path) => {
            let mut f = create(path)?;
            write_summary_json(&mut f, &s)?;
            f.flush()?;
        }
        None => {
            write_summary_json(io::stdout().lock(), &s)?;
            println!();
        }
    }
    Ok(())
}

fn lifetime_cmd(config: Option<&PathBuf>, preset: Option<&str>, json: Option<&PathBuf>) -> Result<(), Failure> {
    let cfg: TrapConfig = match (config, preset) {
        (Some(path), None) => load_config(path)?,
        (None, Some(name)) => {
            Preset::from_name(name).ok_or_else(|| Failure::Usage(format!("unknown preset `{name}`")))?.config()
        }
        _ => return Err(Failure::Usage("give exactly one of --config or --preset".into())),
    };
    let report = lifetime(&cfg)?;
    if report.outside_validity {
        eprintln!("warning: K = {:e} is outside the validity range (K < 0.2)", report.k);
    }
    match json {
        Some(path) => {
            let mut f = create(path)?;
            write_lifetime_json(&mut f, &report)?;
            f.flush()?;
        }
        None => {
            write_lifetime_json(io::stdout().lock(), &report)?;
            println!();
        }
    }
    Ok(())
}

fn table() -> Result<(), Failure> {
    let rows = summary_table()?;
    print!("{}", format_table(&rows));
    if rows.iter().all(|r| r.matches_reference()) {
        Ok(())
    } else {
        Err(Failure::Physics("computed table is off the reference orders of magnitude".into()))
    }
}

fn check(perturb: Option<&Perturbation>) -> Result<(), Failure> {
    let results = run_checks(perturb);
    for r in &results {
        println!("{} {:<22} {:>8.3}s  {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.seconds, r.detail);
    }
    let failed: Vec<&str> = results.iter().filter(|r| !r.passed).map(|r| r.name.as_str()).collect();
    if failed.is_empty() {
        println!("all {} checks passed", results.len());
        Ok(())
    } else {
        Err(Failure::Physics(format!("failed checks: {}", failed.join(", "))))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Modes { k_min, k_max, steps, out } => modes(*k_min, *k_max, *steps, out),
        Command::Simulate { config, k, kick, excite, spin, t_final, dt, rt, rp, stride, out, summary } => simulate(
            config.as_ref(),
            *k,
            *kick,
            *excite,
            *spin,
            *t_final,
            *dt,
            *rt,
            *rp,
            *stride,
            out,
            summary.as_ref(),
        ),
        Command::Lifetime { config, preset, json } => lifetime_cmd(config.as_ref(), preset.as_deref(), json.as_ref()),
        Command::Table => table(),
        Command::Check { perturb } => check(perturb.as_ref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Physics(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
