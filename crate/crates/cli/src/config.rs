use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Table,
    Json,
    Csv,
}

/// Settings shared by every experiment. Later sources override earlier ones:
/// built-in defaults, then the config file, then command-line flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Iterates computed (orbits, degree sequences).
    pub n_max: u32,
    /// Log-height bound `B` of periodic-point surveys.
    pub height_bound: f64,
    pub period_bound: u32,
    /// Tail window of growth reports; `None` means the last third of the scan.
    pub tail_window: Option<usize>,
    pub prime_count: usize,
    pub samples_per_prime: usize,
    pub seed: u64,
    /// Largest number of terms an iterated map may carry.
    pub term_count_cap: usize,
    /// Largest number of decimal digits an orbit coordinate may reach.
    pub coordinate_digit_cap: u64,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n_max: 8,
            height_bound: 10f64.ln(),
            period_bound: 4,
            tail_window: None,
            prime_count: 3,
            samples_per_prime: 16,
            seed: 0,
            term_count_cap: 1_000_000,
            coordinate_digit_cap: 1_000_000,
            format: Format::Table,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str, source_name: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| {
            let offset = e.span().map_or(0, |s| s.start);
            CliError::parse_at(source_name, text, offset, e.message())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io { path: path.display().to_string(), message: format!("{}: {e}", path.display()) })?;
        Self::from_toml(&text, &path.display().to_string())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let positive = [
            ("n_max", self.n_max as u64),
            ("period_bound", self.period_bound as u64),
            ("prime_count", self.prime_count as u64),
            ("samples_per_prime", self.samples_per_prime as u64),
            ("term_count_cap", self.term_count_cap as u64),
            ("coordinate_digit_cap", self.coordinate_digit_cap),
            ("tail_window", self.tail_window.unwrap_or(1) as u64),
        ];
        if let Some((name, _)) = positive.iter().find(|(_, v)| *v == 0) {
            return Err(CliError::invalid(format!("{name} must be positive")));
        }
        if !(self.height_bound >= 0.0 && self.height_bound.is_finite()) {
            return Err(CliError::invalid("height_bound must be a finite nonnegative number"));
        }
        Ok(())
    }

    /// Tail window for a scan of `len` growth values.
    pub fn window_for(&self, len: usize) -> usize {
        self.tail_window.unwrap_or_else(|| len.div_ceil(3)).max(1)
    }
}

/// Accepts a plain number or `log(M)` / `ln(M)` for the height of max-coordinate `M`.
pub fn parse_height_bound(text: &str) -> Result<f64, String> {
    let t = text.trim();
    let inner = t
        .strip_prefix("log(")
        .or_else(|| t.strip_prefix("ln("))
        .and_then(|s| s.strip_suffix(')'));
    match inner {
        Some(m) => m.trim().parse::<f64>().map(f64::ln).map_err(|e| e.to_string()),
        None => t.parse::<f64>().map_err(|e| e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_files_keep_defaults() {
        let c = RunConfig::from_toml("n_max = 3\nformat = \"json\"\n", "cfg").unwrap();
        assert_eq!(c.n_max, 3);
        assert_eq!(c.format, Format::Json);
        assert_eq!(c.term_count_cap, 1_000_000);
    }

    #[test]
    fn unknown_keys_report_position() {
        match RunConfig::from_toml("n_max = 3\nnmax = 4\n", "cfg") {
            Err(CliError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn zero_caps_are_rejected() {
        assert!(RunConfig::from_toml("term_count_cap = 0", "cfg").is_err());
    }

    #[test]
    fn height_bounds() {
        assert_eq!(parse_height_bound("log(100)").unwrap(), 100f64.ln());
        assert_eq!(parse_height_bound("1.5").unwrap(), 1.5);
        assert!(parse_height_bound("log(x)").is_err());
    }
}
