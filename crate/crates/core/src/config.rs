//! Flat key-value config files and the built-in presets.
//!
//! ```text
//! # neutron-like trap
//! b0_gauss = 100
//! bperp_gauss_per_cm = 10
//! mu_erg_per_gauss = 1e-23
//! mass_gram = 1e-25
//! spin_half = true
//! ```
//!
//! Either `spin_erg_s` or `spin_half = true` must be present. `hbar_erg_s` is
//! optional and defaults to the CGS value. Both `=` and `:` separate keys
//! from values; `#` starts a comment.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::trap::{TrapConfig, HBAR_CGS};

const KNOWN_KEYS: &[&str] =
    &["b0_gauss", "bperp_gauss_per_cm", "mu_erg_per_gauss", "mass_gram", "spin_erg_s", "spin_half", "hbar_erg_s"];

pub fn parse_config(text: &str) -> Result<TrapConfig> {
    let mut entries = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .or_else(|| line.split_once(':'))
            .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`, got `{line}`", lineno + 1)))?;
        let key = key.trim();
        if !KNOWN_KEYS.contains(&key) {
            return Err(Error::Config(format!("unknown key `{key}` on line {}", lineno + 1)));
        }
        if entries.insert(key.to_string(), value.trim().to_string()).is_some() {
            return Err(Error::Config(format!("duplicate key `{key}`")));
        }
    }

    let number = |key: &str| -> Result<f64> {
        let value = entries.get(key).ok_or_else(|| Error::Config(format!("missing key `{key}`")))?;
        value.parse::<f64>().map_err(|_| Error::Config(format!("key `{key}`: `{value}` is not a number")))
    };

    let hbar = if entries.contains_key("hbar_erg_s") { number("hbar_erg_s")? } else { HBAR_CGS };

    let spin_half = match entries.get("spin_half").map(String::as_str) {
        None => false,
        Some("true") => true,
        Some("false") => false,
        Some(other) => return Err(Error::Config(format!("key `spin_half`: expected true or false, got `{other}`"))),
    };
    let spin = match (spin_half, entries.contains_key("spin_erg_s")) {
        (true, true) => return Err(Error::Config("key `spin_erg_s` conflicts with `spin_half = true`".into())),
        (true, false) => 0.5 * hbar,
        (false, _) => number("spin_erg_s")?,
    };

    TrapConfig::new(
        number("b0_gauss")?,
        number("bperp_gauss_per_cm")?,
        number("mu_erg_per_gauss")?,
        number("mass_gram")?,
        spin,
        hbar,
    )
}

pub fn load_config(path: impl AsRef<Path>) -> Result<TrapConfig> {
    let path = path.as_ref();
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

/// Serializes a config in the same format [`parse_config`] reads.
pub fn format_config(cfg: &TrapConfig) -> String {
    format!(
        "b0_gauss = {:e}\nbperp_gauss_per_cm = {:e}\nmu_erg_per_gauss = {:e}\nmass_gram = {:e}\nspin_erg_s = {:e}\nhbar_erg_s = {:e}\n",
        cfg.b0, cfg.bperp, cfg.mu, cfg.mass, cfg.spin, cfg.hbar
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Neutron,
    Atom,
}

impl Preset {
    pub const ALL: [Preset; 2] = [Preset::Neutron, Preset::Atom];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Neutron => "neutron",
            Preset::Atom => "atom",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }

    /// B0 = 100 G and B0/B' = 10 cm, with order-of-magnitude particle values.
    pub fn config(self) -> TrapConfig {
        let (mu, mass) = match self {
            Preset::Neutron => (1e-23, 1e-25),
            Preset::Atom => (1e-20, 1e-22),
        };
        TrapConfig::spin_half(100.0, 10.0, mu, mass).expect("preset parameters are positive")
    }

    /// Reference orders of magnitude: `(m, mu, K, T_prec, T_vib, log10 T_esc)`.
    pub fn reference_orders(self) -> [f64; 6] {
        match self {
            Preset::Neutron => [1e-25, 1e-23, 1e-5, 1e-6, 1e-1, 1e5],
            Preset::Atom => [1e-22, 1e-20, 1e-8, 1e-9, 1e-1, 1e8],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const NEUTRON: &str = "# neutron\nb0_gauss = 100\nbperp_gauss_per_cm: 10\nmu_erg_per_gauss = 1e-23\nmass_gram = 1e-25  # grams\nspin_half = true\n";

    #[test]
    fn parses_spin_half_file() {
        let cfg = parse_config(NEUTRON).unwrap();
        assert_eq!(cfg, Preset::Neutron.config());
    }

    #[test]
    fn explicit_spin_and_hbar() {
        let cfg = parse_config(
            "b0_gauss=1\nbperp_gauss_per_cm=2\nmu_erg_per_gauss=3\nmass_gram=4\nspin_erg_s=0.5\nhbar_erg_s=1\n",
        )
        .unwrap();
        assert_eq!(cfg.spin, 0.5);
        assert_eq!(cfg.hbar, 1.0);
        assert!(cfg.is_spin_half());
    }

    #[test]
    fn round_trips_through_format() {
        let cfg = Preset::Atom.config();
        assert_eq!(parse_config(&format_config(&cfg)).unwrap(), cfg);
    }

    #[test]
    fn names_the_offending_key() {
        let missing = NEUTRON.replace("mass_gram = 1e-25  # grams\n", "");
        let err = parse_config(&missing).unwrap_err().to_string();
        assert!(err.contains("mass_gram"), "{err}");

        let bad = NEUTRON.replace("1e-23", "lots");
        let err = parse_config(&bad).unwrap_err().to_string();
        assert!(err.contains("mu_erg_per_gauss"), "{err}");

        let unknown = format!("{NEUTRON}colour = blue\n");
        let err = parse_config(&unknown).unwrap_err().to_string();
        assert!(err.contains("colour"), "{err}");

        let negative = NEUTRON.replace("b0_gauss = 100", "b0_gauss = -100");
        let err = parse_config(&negative).unwrap_err().to_string();
        assert!(err.contains("b0_gauss"), "{err}");
    }

    #[test]
    fn spin_must_be_specified_once() {
        let none = NEUTRON.replace("spin_half = true\n", "");
        assert!(parse_config(&none).unwrap_err().to_string().contains("spin_erg_s"));
        let both = format!("{NEUTRON}spin_erg_s = 1e-27\n");
        assert!(parse_config(&both).is_err());
    }

    #[test]
    fn preset_names() {
        for p in Preset::ALL {
            assert_eq!(Preset::from_name(p.name()), Some(p));
        }
        assert_eq!(Preset::from_name("proton"), None);
    }
}
