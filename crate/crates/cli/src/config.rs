//! Run configuration: TOML file, then command-line flags, with the output
//! directory also taken from `MUBLAB_OUTPUT_DIR`.

use std::path::{Path, PathBuf};

use mublab_core::optimizer::OptimizerConfig;
use mublab_core::Execution;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const OUTPUT_DIR_ENV: &str = "MUBLAB_OUTPUT_DIR";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub dim: usize,
    pub seed: u64,
    /// Worker threads, 0 for all cores.
    pub workers: usize,
    pub output_dir: PathBuf,
    pub execution: Execution,
    /// Optional catalog JSON replacing the built-in bases.
    pub catalog: Option<PathBuf>,
    pub optimizer: OptimizerSection,
    pub montecarlo: MonteCarloSection,
    pub detector: DetectorSection,
    pub lemma: LemmaSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            dim: 5,
            seed: 1,
            workers: 0,
            output_dir: PathBuf::from("."),
            execution: Execution::Parallel,
            catalog: None,
            optimizer: OptimizerSection::default(),
            montecarlo: MonteCarloSection::default(),
            detector: DetectorSection::default(),
            lemma: LemmaSection::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerSection {
    /// Restarts; by default 200 for up to three bases and 500 beyond.
    pub restarts: Option<usize>,
    pub max_iterations: usize,
    pub function_tolerance: f64,
    pub simplex_scale: f64,
    pub permutation_reparametrizations: usize,
}

impl Default for OptimizerSection {
    fn default() -> Self {
        let d = OptimizerConfig::default();
        Self {
            restarts: None,
            max_iterations: d.max_iterations,
            function_tolerance: d.function_tolerance,
            simplex_scale: d.simplex_scale,
            permutation_reparametrizations: d.permutation_reparametrizations,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MonteCarloSection {
    pub samples: u64,
    pub bins: usize,
    /// Samples of the pair-sum scans in `full-report`.
    pub pair_samples: u64,
    /// Samples of the variance scans in `full-report`.
    pub variance_samples: u64,
}

impl Default for MonteCarloSection {
    fn default() -> Self {
        Self { samples: 10_000_000, bins: 250, pair_samples: 1_000_000, variance_samples: 1_000_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DetectorSection {
    /// `measured`, one value, or one value per basis separated by commas.
    pub epsilon_profile: String,
    pub shots: u64,
    pub resamples: usize,
    pub random_states: usize,
    /// Triplets simulated by `full-report`.
    pub triplets: Vec<String>,
}

impl Default for DetectorSection {
    fn default() -> Self {
        Self {
            epsilon_profile: "measured".into(),
            shots: 10_000,
            resamples: 500,
            random_states: 10,
            triplets: vec!["CDF".into(), "ABE".into()],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LemmaSection {
    pub trials: usize,
}

impl Default for LemmaSection {
    fn default() -> Self {
        Self { trials: 1000 }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }

    /// Optimizer settings for tuples of `k` bases.
    pub fn optimizer_for(&self, k: usize) -> OptimizerConfig {
        let o = &self.optimizer;
        OptimizerConfig {
            restarts: o.restarts.unwrap_or_else(|| OptimizerConfig::for_tuple_size(k).restarts),
            max_iterations: o.max_iterations,
            function_tolerance: o.function_tolerance,
            simplex_scale: o.simplex_scale,
            seed: self.seed,
            permutation_reparametrizations: o.permutation_reparametrizations,
            execution: self.execution,
        }
    }

    /// Resolves `name` against the output directory.
    pub fn output_path(&self, name: &Path) -> PathBuf {
        if name.is_absolute() {
            name.to_path_buf()
        } else {
            self.output_dir.join(name)
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !matches!(self.dim, 4 | 5) {
            return Err(CliError::Usage(format!("dimension {} is not supported (use 4 or 5)", self.dim)));
        }
        if self.optimizer.restarts == Some(0) {
            return Err(CliError::Usage("restarts must be at least 1".into()));
        }
        if !(self.optimizer.function_tolerance > 0.0) || !(self.optimizer.simplex_scale > 0.0) {
            return Err(CliError::Usage("tolerances must be positive".into()));
        }
        if self.montecarlo.samples == 0 || self.montecarlo.bins == 0 {
            return Err(CliError::Usage("samples and bins must be positive".into()));
        }
        if self.detector.resamples < 2 || self.detector.shots == 0 {
            return Err(CliError::Usage("detector needs at least 2 resamples and 1 shot".into()));
        }
        self.detector
            .epsilon_profile
            .parse::<mublab_core::detector::EpsilonProfile>()
            .map_err(|e| CliError::Usage(e.to_string()))?;
        for t in &self.detector.triplets {
            mublab_core::TripletId::parse(t).map_err(|e| CliError::Usage(format!("detector triplet {t:?}: {e}")))?;
        }
        Ok(())
    }
}
