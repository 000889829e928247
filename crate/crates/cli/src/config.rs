//! TOML run configuration.

use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use topobench_core::{EnumerationConfig, MetricConfig, SolverConfig};
use topobench_harness::RunSpec;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DatasetSection {
    pub seed: u64,
    pub enumeration: EnumerationConfig,
}

/// Every section is optional; missing keys take their defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfigFile {
    pub solver: SolverConfig,
    pub dataset: DatasetSection,
    pub metrics: MetricConfig,
    pub harness: RunSpec,
}

impl RunConfigFile {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(RunConfigFile::default());
        };
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_file_keeps_defaults() {
        let c: RunConfigFile =
            toml::from_str("[solver]\niterations = 40\n[harness.endpoint]\nmodel = \"x\"\n")
                .unwrap();
        assert_eq!(c.solver.iterations, 40);
        assert_eq!(c.solver.penalization, SolverConfig::default().penalization);
        assert_eq!(c.harness.endpoint.model, "x");
        assert_eq!(c.harness.concurrency, 4);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<RunConfigFile>("[solver]\niteration = 40\n").is_err());
        assert!(toml::from_str::<RunConfigFile>("[extra]\n").is_err());
    }

    #[test]
    fn default_round_trips() {
        let text = toml::to_string(&RunConfigFile::default()).unwrap();
        assert_eq!(
            toml::from_str::<RunConfigFile>(&text).unwrap(),
            RunConfigFile::default()
        );
    }
}
