use magtrap::dynamics::{ClassicalState, Dynamics, FrictionCoefficients, ScaledFriction, DEFAULT_DT};
use magtrap::modes::{friction_shift, secular_roots, spin_down_modes, Branch, Orientation, Symmetry};
use magtrap::spectrum::{complex_signals, deviation_rate, spectral_peaks};
use magtrap::trap::TrapConfig;

const PERIOD: f64 = 2.0 * std::f64::consts::PI;

fn frictionless(k: f64) -> Dynamics {
    Dynamics::new(k, ScaledFriction::none()).unwrap()
}

#[test]
fn kicked_trajectory_conserves_lambda_and_energy() {
    let d = frictionless(0.1);
    let traj = d.integrate(ClassicalState::kicked(Orientation::Down, 1e-3), DEFAULT_DT, 100.0 * PERIOD, 10).unwrap();
    assert!(traj.lambda_drift() < 1e-9, "{}", traj.lambda_drift());
    assert!(traj.energy_drift() < 1e-9, "{}", traj.energy_drift());
    assert!(!traj.accuracy_warning);
    let max_r = traj.states.iter().map(|s| s.pos[0].hypot(s.pos[1])).fold(0.0, f64::max);
    assert!(max_r < 1e-2, "{max_r}");
}

#[test]
fn rk4_converges_at_fourth_order() {
    let d = frictionless(0.1);
    let s0 = ClassicalState::kicked(Orientation::Down, 0.1);
    let t = 10.0;
    let end = |dt: f64| *d.integrate(s0, dt, t, 1_000_000).unwrap().states.last().unwrap();
    let dist = |a: ClassicalState, b: ClassicalState| {
        let mut e = 0.0f64;
        for i in 0..2 {
            e = e.max((a.pos[i] - b.pos[i]).abs()).max((a.vel[i] - b.vel[i]).abs());
        }
        for i in 0..3 {
            e = e.max((a.n_hat[i] - b.n_hat[i]).abs());
        }
        e
    };
    let h = 0.02;
    let reference = end(h / 8.0);
    let e1 = dist(end(h), reference);
    let e2 = dist(end(h / 2.0), reference);
    let order = (e1 / e2).log2();
    assert!(order > 3.8, "observed order {order} ({e1:e}, {e2:e})");
}

#[test]
fn spectral_peaks_match_secular_roots() {
    for &k in &[0.05, 0.2] {
        let d = frictionless(k);
        let modes = spin_down_modes(k, 1e-5).unwrap();
        let s0 = ClassicalState::from_modes(Orientation::Down, &modes);
        let traj = d.integrate(s0, DEFAULT_DT, 200.0 * PERIOD, 1).unwrap();
        let (rho, eps) = complex_signals(&traj);
        let pos = spectral_peaks(&rho, DEFAULT_DT, 1e-3).unwrap();
        let spin = spectral_peaks(&eps, DEFAULT_DT, 1e-3).unwrap();
        for m in modes {
            let w = m.omega_n.re;
            // Gamma+ shows at +w in x + iy; Gamma- at -w. The precessional mode is
            // mostly spin, so it is read from the spin signal.
            let (spectrum, target) = match (m.branch, m.symmetry) {
                (Branch::Precessional, _) => (&spin, w),
                (_, Symmetry::GammaPlus) => (&pos, w),
                (_, Symmetry::GammaMinus) => (&pos, -w),
            };
            let (peak, bins) = spectrum.nearest(target).unwrap();
            assert!(bins <= 1.0, "K={k} {:?}: root {w}, peak {peak:?}, {bins} bins", m.branch);
        }
    }
}

#[test]
fn unstable_growth_rate_matches_imaginary_part() {
    let k = 0.5;
    let im =
        secular_roots(k, Symmetry::GammaMinus, Orientation::Down).unwrap().iter().map(|w| w.im).fold(0.0, f64::max);
    let traj = frictionless(k).integrate(ClassicalState::kicked(Orientation::Down, 1e-6), DEFAULT_DT, 40.0, 1).unwrap();
    let rate = deviation_rate(&traj, 1e-4, 1e-2).unwrap();
    assert!((rate - im).abs() < 0.05 * im, "fitted {rate}, expected {im}");
}

#[test]
fn stable_kick_stays_bounded() {
    let traj = frictionless(0.1)
        .integrate(ClassicalState::kicked(Orientation::Down, 1e-3), DEFAULT_DT, 100.0 * PERIOD, 5)
        .unwrap();
    let max_x = traj.states.iter().map(|s| s.pos[0].abs().max(s.pos[1].abs())).fold(0.0, f64::max);
    assert!(max_x <= 1e-2);
}

#[test]
fn precessional_friction_grows_the_precessional_mode() {
    let k = 0.1;
    let rp = 1e-4;
    let modes = spin_down_modes(k, 1e-5).unwrap();
    let prec = modes.iter().find(|m| m.branch == Branch::Precessional).unwrap();
    let shift = friction_shift(k, prec.omega_n.re, 0.0, rp).unwrap();
    let d = Dynamics::new(k, ScaledFriction { translational: 0.0, precessional: rp }).unwrap();
    let traj =
        d.integrate(ClassicalState::from_modes(Orientation::Down, &[*prec]), DEFAULT_DT, 100.0 * PERIOD, 10).unwrap();
    let rate = deviation_rate(&traj, 0.0, 1.0).unwrap();
    assert!(rate > 0.0);
    assert!((rate - shift.im).abs() < 0.1 * shift.im, "fitted {rate}, first order {}", shift.im);
}

#[test]
fn translational_friction_damps_vibrational_modes() {
    let k = 0.1;
    let rt_group = 1e-2;
    for branch in [Branch::VibrationalPlus, Branch::VibrationalMinus] {
        let modes = spin_down_modes(k, 1e-5).unwrap();
        let m = modes.iter().find(|m| m.branch == branch).unwrap();
        let shift = friction_shift(k, m.omega_n.re, rt_group, 0.0).unwrap();
        let d = Dynamics::new(k, ScaledFriction { translational: k * rt_group, precessional: 0.0 }).unwrap();
        let traj =
            d.integrate(ClassicalState::from_modes(Orientation::Down, &[*m]), DEFAULT_DT, 100.0 * PERIOD, 10).unwrap();
        let rate = deviation_rate(&traj, 0.0, 1.0).unwrap();
        assert!(rate < 0.0);
        assert!((rate - shift.im).abs() < 0.1 * shift.im.abs(), "{branch:?}: fitted {rate}, first order {}", shift.im);
    }
}

#[test]
fn equal_k_configs_give_identical_scaled_trajectories() {
    let a = TrapConfig::spin_half(100.0, 10.0, 1e-23, 1e-25).unwrap();
    // scale mu and m by 4 and B' by 2 at fixed K: K^2 ∝ B'^2 / (mu m)
    let b = TrapConfig::spin_half(100.0, 10.0 * 4.0, 4e-23, 4e-25).unwrap();
    let ka = a.derived_frequencies().unwrap().k;
    let kb = b.derived_frequencies().unwrap().k;
    assert!((ka / kb - 1.0).abs() < 1e-14, "{ka} {kb}");
    let fric = FrictionCoefficients::default();
    let da = Dynamics::from_config(&a, fric).unwrap();
    let db = Dynamics::from_config(&b, fric).unwrap();
    // K ~ 1e-5 needs a step resolving the precession
    let dt = 1e-6;
    let s0 = ClassicalState::kicked(Orientation::Down, 1e-3);
    let ta = da.integrate(s0, dt, 1e-3, 100).unwrap();
    let tb = db.integrate(s0, dt, 1e-3, 100).unwrap();
    for (x, y) in ta.states.iter().zip(&tb.states) {
        for i in 0..3 {
            assert!((x.n_hat[i] - y.n_hat[i]).abs() < 1e-12);
        }
        assert!((x.pos[0] - y.pos[0]).abs() < 1e-12);
    }
}

#[test]
fn mode_energy_formula_is_twice_the_trajectory_energy() {
    // the mode formula counts |A|^2 for a motion whose real trajectory carries half of it
    let k = 0.1;
    let d = frictionless(k);
    for m in spin_down_modes(k, 1e-4).unwrap() {
        let s = ClassicalState::from_modes(Orientation::Down, &[m]);
        let on_trajectory = d.invariants_of(&s).excitation_energy;
        let formula = magtrap::modes::excitation_energy(m.omega_n, 1e-4).unwrap();
        assert!((on_trajectory / formula - 0.5).abs() < 1e-5, "{:?}: {on_trajectory} vs {formula}", m.branch);
    }
}
