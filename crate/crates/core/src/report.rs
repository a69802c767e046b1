//! The order-of-magnitude summary table for the built-in presets.

use serde::{Deserialize, Serialize};

use crate::config::Preset;
use crate::error::Result;
use crate::quantum::lifetime;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub preset: String,
    pub mass_g: f64,
    pub mu_erg_per_gauss: f64,
    pub k: f64,
    pub t_prec_s: f64,
    pub t_vib_s: f64,
    pub log10_t_esc_s: f64,
    /// Reference orders in the same order as the fields above.
    pub reference: [f64; 6],
}

impl TableRow {
    pub fn computed(&self) -> [f64; 6] {
        [self.mass_g, self.mu_erg_per_gauss, self.k, self.t_prec_s, self.t_vib_s, self.log10_t_esc_s]
    }

    /// `|log10(computed / reference)|` per column.
    pub fn log_offsets(&self) -> [f64; 6] {
        let c = self.computed();
        std::array::from_fn(|i| (c[i] / self.reference[i]).log10().abs())
    }

    /// Within one order of magnitude for the first five columns, and within a
    /// factor of 3 for `log10 T_esc`.
    pub fn matches_reference(&self) -> bool {
        let off = self.log_offsets();
        off[..5].iter().all(|o| *o <= 1.0) && off[5] <= 3f64.log10()
    }
}

pub fn preset_row(preset: Preset) -> Result<TableRow> {
    let cfg = preset.config();
    let report = lifetime(&cfg)?;
    Ok(TableRow {
        preset: preset.name().to_string(),
        mass_g: cfg.mass,
        mu_erg_per_gauss: cfg.mu,
        k: report.k,
        t_prec_s: report.t_prec_s,
        t_vib_s: report.t_vib_s,
        log10_t_esc_s: report.log10_t_esc_closed,
        reference: preset.reference_orders(),
    })
}

pub fn summary_table() -> Result<Vec<TableRow>> {
    Preset::ALL.into_iter().map(preset_row).collect()
}

fn order(x: f64) -> String {
    format!("1e{}", x.log10().round() as i32)
}

/// Text table with computed values and their order of magnitude.
pub fn format_table(rows: &[TableRow]) -> String {
    let labels = ["m (g)", "mu (erg/G)", "K", "T_prec (s)", "T_vib (s)", "log10 T_esc (s)"];
    let mut out = format!("{:<16}", "");
    for row in rows {
        out.push_str(&format!("{:>24}", row.preset));
    }
    out.push('\n');
    for (i, label) in labels.iter().enumerate() {
        out.push_str(&format!("{label:<16}"));
        for row in rows {
            let v = row.computed()[i];
            out.push_str(&format!("{:>24}", format!("{v:.2e} (~{})", order(v))));
        }
        out.push('\n');
    }
    out.push_str(&format!("{:<16}", "matches"));
    for row in rows {
        out.push_str(&format!("{:>24}", if row.matches_reference() { "yes" } else { "NO" }));
    }
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_match_reference_orders() {
        for row in summary_table().unwrap() {
            assert!(row.matches_reference(), "{row:?} {:?}", row.log_offsets());
        }
    }

    #[test]
    fn table_has_a_line_per_quantity() {
        let text = format_table(&summary_table().unwrap());
        assert_eq!(text.lines().count(), 8);
        assert!(text.contains("neutron") && text.contains("atom"));
        assert!(!text.contains("NO"));
    }
}
