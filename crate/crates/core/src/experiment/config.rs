use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::boolfn::generators;
use crate::embed::embedders;
use crate::error::{Error, Result};
use crate::learn::{KernelSpec, OcsvmParams, StandardizeScope, SweepConfig};

/// Every knob of the experiment drivers. Loadable from TOML; unknown keys
/// are rejected.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Bit width of the oracles.
    pub n: usize,
    /// Dataset size, half 1:1 and half 2:1.
    pub m: usize,
    /// Dataset seed and base feature seed of the single-run pipeline.
    pub seed: u64,
    /// Shot budget of the single-run pipeline.
    pub shots: usize,
    /// Shot budgets of the sweep.
    pub shot_grid: Vec<usize>,
    /// Repetition seeds of the sweep and the query-separation runs.
    pub seeds: Vec<u64>,
    /// One-class SVM ν.
    pub nu: f64,
    /// Function generator: `linear` or `table`.
    pub generator: String,
    /// Embedding route: `diagonal` or `circuit`.
    pub embedder: String,
    pub kpca_kernel: KernelSpec,
    pub ocsvm_kernel: KernelSpec,
    pub standardize: StandardizeScope,
    pub kmeans_restarts: usize,
    /// Widths of the query-scaling experiment.
    pub scaling_widths: Vec<usize>,
    /// Functions per class and width in the query-scaling experiment.
    pub scaling_trials: usize,
    /// Write one DOT file per function in the graph report.
    pub dot: bool,
    pub out_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n: 6,
            m: 120,
            seed: 42,
            shots: 5000,
            shot_grid: vec![10, 50, 100, 500, 1000, 5000],
            seeds: (42..=46).collect(),
            nu: 0.01,
            generator: "linear".into(),
            embedder: "diagonal".into(),
            kpca_kernel: KernelSpec::rbf_median(),
            ocsvm_kernel: KernelSpec::linear(),
            standardize: StandardizeScope::TrainPooled,
            kmeans_restarts: 10,
            scaling_widths: vec![4, 6, 8, 10],
            scaling_trials: 200,
            dot: false,
            out_dir: PathBuf::from("out"),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes to TOML")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(1..=crate::boolfn::MAX_WIDTH).contains(&self.n) {
            return bad(format!("n = {} outside 1..={}", self.n, crate::boolfn::MAX_WIDTH));
        }
        if self.m == 0 || !self.m.is_multiple_of(2) {
            return bad(format!("m = {} must be a positive even number", self.m));
        }
        if self.shots < 2 || self.shot_grid.iter().any(|&s| s < 2) {
            return bad("every shot budget must be at least 2".into());
        }
        if self.shot_grid.is_empty() || self.seeds.is_empty() {
            return bad("shot_grid and seeds must be nonempty".into());
        }
        if !(self.nu > 0.0 && self.nu <= 1.0) {
            return bad(format!("nu = {} outside (0, 1]", self.nu));
        }
        if self.kmeans_restarts == 0 {
            return bad("kmeans_restarts must be positive".into());
        }
        if self.scaling_widths.iter().any(|&w| !(2..=crate::boolfn::MAX_WIDTH).contains(&w)) {
            return bad("scaling widths must lie in 2..=16".into());
        }
        generators().get(&self.generator).map_err(|e| Error::Config(e.to_string()))?;
        embedders().get(&self.embedder).map_err(|e| Error::Config(e.to_string()))?;
        Ok(())
    }

    pub fn sweep_config(&self) -> SweepConfig {
        SweepConfig {
            shots: self.shot_grid.clone(),
            seeds: self.seeds.clone(),
            kernel: self.ocsvm_kernel.clone(),
            params: OcsvmParams::with_nu(self.nu),
            scope: self.standardize,
        }
    }

    /// The config as `#`-prefixed lines for file headers.
    pub fn header_lines(&self) -> Vec<String> {
        self.to_toml().lines().map(|l| format!("# {l}")).collect()
    }
}
