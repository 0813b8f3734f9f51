use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sswme::fv_solver::SimConfig;
use sswme::model::PhysicalParams;

pub const FILE_NAME: &str = "manifest.json";

const DETERMINISM: &str = "no random numbers are used; rerunning the recorded arguments with the same \
                           tool version reproduces every output file byte for byte";

/// Everything needed to rerun a command, written next to its outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub bases: Vec<String>,
    pub regularized: bool,
    pub experiment: Option<String>,
    pub physics: Option<PhysicalParams>,
    pub grid: Option<SimConfig>,
    pub nzeta: Option<usize>,
    /// Subcommand-specific settings not covered above.
    pub settings: serde_json::Value,
    pub arguments: Vec<String>,
    pub determinism: String,
    pub version: String,
    /// Files written by the command, relative to the run directory.
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(subcommand: &str) -> Self {
        RunManifest {
            subcommand: subcommand.into(),
            bases: Vec::new(),
            regularized: false,
            experiment: None,
            physics: None,
            grid: None,
            nzeta: None,
            settings: serde_json::Value::Null,
            arguments: std::env::args().skip(1).collect(),
            determinism: DETERMINISM.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            outputs: Vec::new(),
        }
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        let path = dir.join(FILE_NAME);
        let text = serde_json::to_string_pretty(self)?;
        fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))
    }

    pub fn read(dir: &Path) -> Result<Self> {
        let path = dir.join(FILE_NAME);
        let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}
