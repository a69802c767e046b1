use magtrap::config::{format_config, load_config, parse_config, Preset};
use magtrap::dynamics::{ClassicalState, Dynamics, ScaledFriction};
use magtrap::io::*;
use magtrap::modes::{sweep, Orientation};
use magtrap::quantum::lifetime;

#[test]
fn config_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for p in Preset::ALL {
        let path = dir.path().join(format!("{}.cfg", p.name()));
        std::fs::write(&path, format_config(&p.config())).unwrap();
        assert_eq!(load_config(&path).unwrap(), p.config());
    }
}

#[test]
fn config_errors_name_the_key() {
    let base = "b0_gauss = 100\nbperp_gauss_per_cm = 10\nmu_erg_per_gauss = 1e-23\nspin_half = true\n";
    let err = parse_config(base).unwrap_err().to_string();
    assert!(err.contains("mass_gram"), "{err}");
    let err = parse_config(&format!("{base}mass_gram = heavy\n")).unwrap_err().to_string();
    assert!(err.contains("mass_gram") && err.contains("heavy"), "{err}");
    let err = parse_config(&format!("{base}mass_gram = 1e-25\ncolour = red\n")).unwrap_err().to_string();
    assert!(err.contains("colour"), "{err}");
    let err = parse_config(&format!("{base}mass_gram = -1\n")).unwrap_err().to_string();
    assert!(err.contains("mass"), "{err}");
    let err = load_config("/nonexistent/x.cfg").unwrap_err().to_string();
    assert!(err.contains("/nonexistent/x.cfg"), "{err}");
}

#[test]
fn sweep_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let rows = sweep(0.05, 0.5, 46).unwrap();
    write_sweep_csv(std::fs::File::create(&path).unwrap(), &rows).unwrap();
    let back = read_sweep_csv(std::fs::File::open(&path).unwrap()).unwrap();
    assert_eq!(back.len(), rows.len());
    for (r, b) in rows.iter().zip(&back) {
        assert_eq!(b.k, r.k);
        assert_eq!(b.stable, r.stable);
        for (w, m) in b.omegas().iter().zip(&r.modes) {
            assert_eq!(*w, m.omega_n);
        }
    }
}

#[test]
fn trajectory_and_summary_round_trip() {
    let d = Dynamics::new(0.3, ScaledFriction::none()).unwrap();
    let traj = d.integrate(ClassicalState::kicked(Orientation::Down, 1e-3), 0.01, 5.0, 3).unwrap();
    let mut buf = Vec::new();
    write_trajectory_csv(&mut buf, &traj).unwrap();
    let back = read_trajectory_csv(&buf[..]).unwrap();
    assert_eq!(back.last().unwrap().state(), *traj.states.last().unwrap());
    assert_eq!(back.last().unwrap().t, 5.0);
    let s = SimulationSummary::from_trajectory(&traj);
    let mut buf = Vec::new();
    write_summary_json(&mut buf, &s).unwrap();
    assert_eq!(read_summary_json(&buf[..]).unwrap(), s);
}

#[test]
fn lifetime_json_round_trip() {
    let r = lifetime(&Preset::Atom.config()).unwrap();
    let mut buf = Vec::new();
    write_lifetime_json(&mut buf, &r).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert!(text.contains("\"log10_t_esc_closed\""));
    assert_eq!(read_lifetime_json(&buf[..]).unwrap(), r);
}
