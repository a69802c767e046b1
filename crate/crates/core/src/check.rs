//! Fast built-in self-checks behind the `check` command.
//!
//! Each check compares a library result with an independent value. A named
//! constant can be scaled by a factor ([`Perturbation`]) to confirm that the
//! harness notices and names the broken check.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::config::Preset;
use crate::error::{Error, Result};
use crate::modes::{critical_k, locate_double_root, secular_roots, Orientation, Symmetry};
use crate::quantum::integrals::{gaussian_bessel_integral, quadratic_identity, Quadratic};
use crate::quantum::{dos_product, dos_product_at, lifetime};

#[derive(Debug, Clone, PartialEq)]
pub struct Perturbation {
    pub constant: String,
    pub factor: f64,
}

impl std::str::FromStr for Perturbation {
    type Err = Error;

    /// `name=factor`
    fn from_str(s: &str) -> Result<Self> {
        let (name, factor) =
            s.split_once('=').ok_or_else(|| Error::Parse(format!("expected `name=factor`, got `{s}`")))?;
        let factor = factor.trim().parse().map_err(|_| Error::Parse(format!("`{factor}` is not a number")))?;
        let constant = name.trim().to_string();
        if !CONSTANTS.contains(&constant.as_str()) {
            return Err(Error::Parse(format!("unknown constant `{constant}`; known: {}", CONSTANTS.join(", "))));
        }
        Ok(Self { constant, factor })
    }
}

/// Constants that can be perturbed.
pub const CONSTANTS: &[&str] = &["vieta_sum", "critical_k", "identity_prefactor", "dos_product", "lifetime_prefactor"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

struct Ctx<'a> {
    perturbation: Option<&'a Perturbation>,
}

impl Ctx<'_> {
    fn constant(&self, name: &str, value: f64) -> f64 {
        match self.perturbation {
            Some(p) if p.constant == name => value * p.factor,
            _ => value,
        }
    }
}

type CheckFn = fn(&Ctx) -> Result<(bool, String)>;

fn vieta(ctx: &Ctx) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for k in [0.05, 0.2, 0.5, 1.0] {
        for sym in [Symmetry::GammaPlus, Symmetry::GammaMinus] {
            for o in [Orientation::Up, Orientation::Down] {
                let r = secular_roots(k, sym, o)?;
                // K w^3 + c2 w^2 + 0 w + c0: sum = -c2/K, product = -c0/K
                let [c0, _, c2, _] = crate::modes::secular_coefficients(k, sym, o);
                let sum = ctx.constant("vieta_sum", -c2 / k);
                let prod = -c0 / k;
                let s = (r[0] + r[1] + r[2]).re;
                let p = (r[0] * r[1] * r[2]).re;
                worst = worst.max((s - sum).abs() / sum.abs()).max((p - prod).abs() / prod.abs());
            }
        }
    }
    Ok((worst < 1e-12, format!("worst relative Vieta error {worst:.1e}")))
}

fn critical(ctx: &Ctx) -> Result<(bool, String)> {
    let (k, w) = locate_double_root(0.4, 1.7)?;
    let kc = ctx.constant("critical_k", critical_k());
    let (dk, dw) = ((k - kc).abs(), (w - 3f64.sqrt()).abs());
    Ok((dk < 1e-10 && dw < 1e-10, format!("K_c = {k:.15}, merge w = {w:.15}")))
}

fn identity(ctx: &Ctx) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for (a, b) in [(1.0, 1.0), (2.0, 5.0), (0.5, 10.0)] {
        let q = gaussian_bessel_integral(&Quadratic, a, b, 1, true)?;
        let c = quadratic_identity(a, b);
        let expected = ctx.constant("identity_prefactor", 1.0);
        worst = worst.max((q.value.ratio(&c) - expected).abs());
    }
    Ok((worst < 1e-8, format!("worst relative error {worst:.1e}")))
}

fn dos(ctx: &Ctx) -> Result<(bool, String)> {
    let cfg = Preset::Neutron.config();
    let want = ctx.constant("dos_product", dos_product(&cfg));
    let l = cfg.b0 / cfg.bperp;
    let a = dos_product_at(&cfg, 0.01 * l)?;
    let b = dos_product_at(&cfg, 0.1 * l)?;
    let worst = ((a - want) / want).abs().max(((b - want) / want).abs());
    Ok((worst < 1e-14, format!("C^2 rho = {a:.6e} and {b:.6e}, m/(2 pi hbar^2) = {want:.6e}")))
}

fn lifetime_orders(ctx: &Ctx) -> Result<(bool, String)> {
    let mut detail = Vec::new();
    let mut ok = true;
    for (p, target) in [(Preset::Neutron, 1e5), (Preset::Atom, 1e8)] {
        let r = lifetime(&p.config())?;
        let v = ctx.constant("lifetime_prefactor", 1.0) * r.log10_t_esc_closed;
        ok &= (v / target).log10().abs() <= 3f64.log10();
        detail.push(format!("{}: log10 T_esc = {v:.4e}", p.name()));
    }
    Ok((ok, detail.join("; ")))
}

const CHECKS: &[(&str, CheckFn)] = &[
    ("vieta", vieta),
    ("critical_k", critical),
    ("integral_identity", identity),
    ("dos_box_independence", dos),
    ("lifetime_orders", lifetime_orders),
];

pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|(name, _)| *name).collect()
}

pub fn run_checks(perturbation: Option<&Perturbation>) -> Vec<CheckResult> {
    let ctx = Ctx { perturbation };
    CHECKS
        .iter()
        .map(|(name, f)| {
            let start = Instant::now();
            let (passed, detail) = match f(&ctx) {
                Ok(r) => r,
                Err(e) => (false, format!("error: {e}")),
            };
            CheckResult { name: name.to_string(), passed, detail, seconds: start.elapsed().as_secs_f64() }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass() {
        for r in run_checks(None) {
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn perturbed_constant_fails_its_check() {
        for name in CONSTANTS {
            let p: Perturbation = format!("{name}=3").parse().unwrap();
            let results = run_checks(Some(&p));
            let failed: Vec<_> = results.iter().filter(|r| !r.passed).map(|r| r.name.clone()).collect();
            assert_eq!(failed.len(), 1, "{name}: {failed:?}");
        }
        assert!("nonsense=2".parse::<Perturbation>().is_err());
        assert!("critical_k".parse::<Perturbation>().is_err());
    }
}
