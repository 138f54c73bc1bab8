//! JSON run configuration shared by all commands.
//!
//! Units: rates and frequencies in ω₀, times in drive periods 2π/ω₀.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::aqec::AqecConfig;
use crate::engine::{Backend, ChartGrid};
use crate::error::{Error, Result};
use crate::fockspace::{HilbertConfig, C64};
use crate::ncft::Scenario;
use crate::phase_space::GridSpec;
use crate::protocols::{default_pairs, RampParams};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Recorded in manifests; ignored on input.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    #[serde(default)]
    pub hilbert: HilbertConfig,
    #[serde(default)]
    pub chart: ChartGrid,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Stroboscopic steps at which prepare writes Wigner grids.
    #[serde(default)]
    pub snapshots: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prepare: Option<PrepareSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embed: Option<EmbedSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transform: Option<TransformSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aqec: Option<AqecConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decompose: Option<DecomposeSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wigner: Option<WignerSection>,
}

fn default_backend() -> Backend {
    Backend::GateSequence
}

fn default_prepare_gap() -> f64 {
    1.3
}

fn default_embed_gap() -> f64 {
    1.4
}

fn pairs_default() -> Vec<[C64; 2]> {
    default_pairs().into_iter().map(|(a, b)| [a, b]).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrepareSection {
    pub c0: C64,
    pub c1: C64,
    #[serde(default = "default_prepare_gap")]
    pub gap: f64,
    pub ramp: RampParams,
    #[serde(default = "default_backend")]
    pub backend: Backend,
    #[serde(default)]
    pub wigner_grid: GridSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbedSection {
    #[serde(default = "default_embed_gap")]
    pub gap: f64,
    pub ramp: RampParams,
    #[serde(default = "default_backend")]
    pub backend: Backend,
    #[serde(default = "pairs_default")]
    pub pairs: Vec<[C64; 2]>,
}

fn default_transform_periods() -> f64 {
    5000.0
}

fn default_beta() -> f64 {
    0.02
}

fn default_transform_gap() -> f64 {
    0.1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformSection {
    #[serde(default = "default_transform_periods")]
    pub periods: f64,
    #[serde(default = "default_beta")]
    pub beta: f64,
    #[serde(default = "default_transform_gap")]
    pub gap: f64,
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default = "default_backend")]
    pub backend: Backend,
    #[serde(default = "pairs_default")]
    pub pairs: Vec<[C64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecomposeSection {
    pub target: Scenario,
    pub gap: f64,
    /// Ramp of the sequence; a constant resonant drive at `beta` when absent.
    #[serde(default)]
    pub ramp: Option<RampParams>,
    #[serde(default = "default_beta")]
    pub beta: f64,
    #[serde(default)]
    pub periods: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedState {
    Vacuum,
    BinomialZero,
    BinomialOne,
    CatZero,
    CatOne,
    CatZeroError,
    CatOneError,
}

impl NamedState {
    pub fn label(&self) -> &'static str {
        match self {
            NamedState::Vacuum => "vacuum",
            NamedState::BinomialZero => "binomial_zero",
            NamedState::BinomialOne => "binomial_one",
            NamedState::CatZero => "cat_zero",
            NamedState::CatOne => "cat_one",
            NamedState::CatZeroError => "cat_zero_error",
            NamedState::CatOneError => "cat_one_error",
        }
    }
}

fn default_states() -> Vec<NamedState> {
    vec![
        NamedState::BinomialZero,
        NamedState::BinomialOne,
        NamedState::CatZero,
        NamedState::CatOne,
    ]
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WignerSection {
    #[serde(default = "default_states")]
    pub states: Vec<NamedState>,
    /// State vectors written by earlier runs ([re, im] pair arrays).
    #[serde(default)]
    pub state_files: Vec<PathBuf>,
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default = "default_true")]
    pub q: bool,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text)?;
        cfg.hilbert.validate()?;
        cfg.chart.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// The named section, or a config error naming the missing key.
    pub fn section<'a, T>(&'a self, key: &str, s: &'a Option<T>) -> Result<&'a T> {
        s.as_ref().ok_or_else(|| Error::Config(format!("missing key `{key}`")))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_prepare_config() {
        let c = RunConfig::from_json(r#"{"prepare": {"c0": [0.5, 0], "c1": [0.8660254037844386, 0], "ramp": {"periods": 10}}}"#)
            .unwrap();
        let p = c.prepare.as_ref().unwrap();
        assert_eq!(p.gap, 1.3);
        assert_eq!(p.ramp.beta_f, 0.02);
        assert_eq!(c.hilbert, HilbertConfig::default());
        let again = RunConfig::from_json(&c.to_json().unwrap()).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn missing_and_unknown_keys() {
        let e = RunConfig::from_json(r#"{"prepare": {"c0": [1, 0], "c1": [0, 0]}}"#).unwrap_err();
        assert!(e.to_string().contains("ramp"), "{e}");
        assert_eq!(e.exit_code(), 2);
        let e = RunConfig::from_json(r#"{"hilbert": {"dim": 40, "lambda": 0.25, "extra": 1}}"#).unwrap_err();
        assert!(e.to_string().contains("extra"), "{e}");
        let c = RunConfig::from_json("{}").unwrap();
        let e = c.section("aqec", &c.aqec).unwrap_err();
        assert!(e.to_string().contains("aqec") && e.exit_code() == 2);
    }

    #[test]
    fn aqec_section_takes_defaults() {
        let c = RunConfig::from_json(r#"{"aqec": {"n_traj": 3}}"#).unwrap();
        let a = c.aqec.unwrap();
        assert_eq!(a.n_traj, 3);
        assert_eq!(a.measure_every, 5);
    }
}
