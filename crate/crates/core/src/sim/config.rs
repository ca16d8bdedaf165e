//! Experiment description and its flat `key = value` text form.
//!
//! ```text
//! # lines starting with '#' are comments
//! experiment = spd-diagonal        # or open-book
//! n_max = 5000
//! epsilon = 0.05
//! estimators = inductive,hansen,resampled
//! lp_budget_exponent = 2
//! replications = 20
//! base_seed = 7
//! trace_stride = 250
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::means::EstimatorKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExperimentKind {
    /// Diagonal 2×2 SPD sequence contaminated by `5I`.
    SpdDiagonal,
    /// Sheet-1 sequence in `B_3^1` contaminated by `((1, 10), s)` on a random sheet.
    OpenBook,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::SpdDiagonal => "spd-diagonal",
            ExperimentKind::OpenBook => "open-book",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "spd-diagonal" => Ok(ExperimentKind::SpdDiagonal),
            "open-book" => Ok(ExperimentKind::OpenBook),
            other => Err(Error::Domain(format!("unknown experiment '{other}'"))),
        }
    }
}

/// Everything needed to reproduce a simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub n_max: usize,
    pub epsilon: f64,
    pub estimators: Vec<EstimatorKind>,
    /// Lim–Palfia budget `k = n^exponent` at traced step `n`.
    pub lp_budget_exponent: f64,
    pub replications: usize,
    pub base_seed: u64,
    pub trace_stride: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            experiment: ExperimentKind::SpdDiagonal,
            n_max: 5000,
            epsilon: 0.0,
            estimators: vec![
                EstimatorKind::Inductive,
                EstimatorKind::Hansen,
                EstimatorKind::Resampled,
            ],
            lp_budget_exponent: 2.0,
            replications: 20,
            base_seed: 0,
            trace_stride: 250,
        }
    }
}

pub(crate) const KEYS: [&str; 8] = [
    "experiment",
    "n_max",
    "epsilon",
    "estimators",
    "lp_budget_exponent",
    "replications",
    "base_seed",
    "trace_stride",
];

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Domain(format!("field '{key}': cannot parse '{value}'")))
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |field: &str, why: String| Err(Error::Domain(format!("field '{field}': {why}")));
        if self.n_max == 0 {
            return bad("n_max", "must be at least 1".into());
        }
        if self.replications == 0 {
            return bad("replications", "must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&self.epsilon) {
            return bad("epsilon", format!("{} outside [0, 1]", self.epsilon));
        }
        if self.trace_stride == 0 {
            return bad("trace_stride", "must be at least 1".into());
        }
        if self.estimators.is_empty() {
            return bad("estimators", "no estimator selected".into());
        }
        if !(self.lp_budget_exponent >= 1.0) || !self.lp_budget_exponent.is_finite() {
            return bad("lp_budget_exponent", format!("{} is below 1", self.lp_budget_exponent));
        }
        Ok(())
    }

    /// Sets one field from its text form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key.trim() {
            "experiment" => self.experiment = value.parse()?,
            "n_max" => self.n_max = parse_num(key, value)?,
            "epsilon" => self.epsilon = parse_num(key, value)?,
            "estimators" => {
                self.estimators = value
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(str::parse)
                    .collect::<Result<_>>()
                    .map_err(|e| Error::Domain(format!("field 'estimators': {e}")))?;
            }
            "lp_budget_exponent" => self.lp_budget_exponent = parse_num(key, value)?,
            "replications" => self.replications = parse_num(key, value)?,
            "base_seed" => self.base_seed = parse_num(key, value)?,
            "trace_stride" => self.trace_stride = parse_num(key, value)?,
            other => return Err(Error::Domain(format!("unknown field '{other}'"))),
        }
        Ok(())
    }

    /// Parses the `key = value` form on top of the defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Domain(format!("line {}: expected 'key = value', got '{line}'", lineno + 1))
            })?;
            cfg.set(key, value)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// The `key = value` form; [`ExperimentConfig::parse`] inverts it exactly.
    pub fn to_key_values(&self) -> String {
        let estimators: Vec<&str> = self.estimators.iter().map(|e| e.name()).collect();
        let values = [
            self.experiment.to_string(),
            self.n_max.to_string(),
            self.epsilon.to_string(),
            estimators.join(","),
            self.lp_budget_exponent.to_string(),
            self.replications.to_string(),
            self.base_seed.to_string(),
            self.trace_stride.to_string(),
        ];
        KEYS.iter()
            .zip(values)
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_value_round_trip() {
        let cfg = ExperimentConfig {
            experiment: ExperimentKind::OpenBook,
            n_max: 1234,
            epsilon: 0.1 + 0.2,
            estimators: vec![EstimatorKind::LimPalfia, EstimatorKind::Inductive],
            lp_budget_exponent: 1.5,
            replications: 3,
            base_seed: u64::MAX,
            trace_stride: 17,
        };
        assert_eq!(ExperimentConfig::parse(&cfg.to_key_values()).unwrap(), cfg);
    }

    #[test]
    fn parse_with_comments_and_defaults() {
        let cfg = ExperimentConfig::parse("# demo\nexperiment = open_book\n\nepsilon=0.3 # 30%\n").unwrap();
        assert_eq!(cfg.experiment, ExperimentKind::OpenBook);
        assert_eq!(cfg.epsilon, 0.3);
        assert_eq!(cfg.n_max, 5000);
    }

    #[test]
    fn errors_name_the_field() {
        let e = ExperimentConfig::parse("n_max = many").unwrap_err().to_string();
        assert!(e.contains("n_max"), "{e}");
        let e = ExperimentConfig::parse("colour = blue").unwrap_err().to_string();
        assert!(e.contains("colour"), "{e}");
        let e = ExperimentConfig::parse("epsilon = 2").unwrap_err().to_string();
        assert!(e.contains("epsilon"), "{e}");
        let e = ExperimentConfig::parse("estimators = inductive,median").unwrap_err().to_string();
        assert!(e.contains("estimators"), "{e}");
        assert!(ExperimentConfig::parse("just words").is_err());
    }
}
