//! Experiment configuration files.
//!
//! A config is a JSON object with an `experiment` kind, an optional master
//! `seed`, and one section named after the experiment. Angles are given in
//! units of π under keys ending in `_pi`.

use crate::error::{CliError, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Scan,
    PhaseDiagram,
    Disorder,
    Edge,
    Emulate,
    McErrorbars,
}

impl ExperimentKind {
    pub fn section(self) -> &'static str {
        match self {
            ExperimentKind::Scan => "scan",
            ExperimentKind::PhaseDiagram => "phase_diagram",
            ExperimentKind::Disorder => "disorder",
            ExperimentKind::Edge => "edge",
            ExperimentKind::Emulate => "emulate",
            ExperimentKind::McErrorbars => "mc_errorbars",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub seed: u64,
    /// Output directory, relative to the config file; `--out` takes precedence.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase_diagram: Option<PhaseDiagramConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disorder: Option<DisorderConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge: Option<EdgeConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub emulate: Option<EmulateConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mc_errorbars: Option<McConfig>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineKind {
    /// θ2 = 2θ1, parameter θ1.
    Theta2Double,
    /// θ1 = 2θ2, parameter θ2.
    Theta1Double,
    /// Explicit pairs from `pairs_pi`.
    Pairs,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GaugeChoice {
    #[default]
    Auto,
    Reference,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub t: usize,
    pub line: LineKind,
    #[serde(default)]
    pub from_pi: f64,
    #[serde(default)]
    pub to_pi: f64,
    #[serde(default)]
    pub points: usize,
    #[serde(default)]
    pub pairs_pi: Vec<[f64; 2]>,
    #[serde(default)]
    pub gauge: GaugeChoice,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseDiagramConfig {
    pub t: usize,
    pub resolution: usize,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

fn default_tolerance() -> f64 {
    0.05
}

/// A single disorder strength or a list of them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PGrid {
    One(f64),
    Many(Vec<f64>),
}

impl Default for PGrid {
    fn default() -> Self {
        PGrid::Many(qwtopo::disorder::default_p_grid())
    }
}

impl PGrid {
    pub fn values(&self) -> Vec<f64> {
        match self {
            PGrid::One(p) => vec![*p],
            PGrid::Many(v) => v.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocateConfig {
    pub t_large: usize,
    #[serde(default = "default_locate_configs")]
    pub n_configs: usize,
    #[serde(default = "default_locate_step")]
    pub p_step: f64,
}

fn default_locate_configs() -> usize {
    200
}

fn default_locate_step() -> f64 {
    0.025
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DisorderConfig {
    pub theta_a_pi: f64,
    pub theta_b_pi: f64,
    #[serde(default)]
    pub p: PGrid,
    pub t: usize,
    #[serde(default = "default_configs")]
    pub n_configs: usize,
    #[serde(default)]
    pub sample_len: Option<usize>,
    #[serde(default)]
    pub locate: Option<LocateConfig>,
}

fn default_configs() -> usize {
    qwtopo::disorder::DEFAULT_CONFIGS
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum InputCoin {
    #[default]
    H,
    V,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceConfig {
    pub theta_left_pi: f64,
    pub theta_right_pi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeConfig {
    pub theta_left_pi: f64,
    pub theta_a_pi: f64,
    pub theta_b_pi: f64,
    #[serde(default)]
    pub p: PGrid,
    #[serde(default = "default_edge_t")]
    pub t: usize,
    #[serde(default = "default_configs")]
    pub n_configs: usize,
    #[serde(default)]
    pub input: InputCoin,
    #[serde(default)]
    pub reference: Option<ReferenceConfig>,
}

fn default_edge_t() -> usize {
    13
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    #[serde(default = "unit_efficiency")]
    pub detector_efficiency: [f64; 2],
    #[serde(default)]
    pub loss_asymmetry: f64,
    #[serde(default)]
    pub eom_error_deg: f64,
    #[serde(default)]
    pub sbc_error_deg: f64,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            detector_efficiency: unit_efficiency(),
            loss_asymmetry: 0.0,
            eom_error_deg: 0.0,
            sbc_error_deg: 0.0,
        }
    }
}

fn unit_efficiency() -> [f64; 2] {
    [1.0, 1.0]
}

impl ModelConfig {
    pub fn model(&self) -> qwtopo::ApparatusModel {
        qwtopo::ApparatusModel {
            detector_efficiency: self.detector_efficiency,
            loss_asymmetry: self.loss_asymmetry,
            eom_error: self.eom_error_deg.to_radians(),
            sbc_error: self.sbc_error_deg.to_radians(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmulateConfig {
    pub theta1_pi: f64,
    pub theta2_pi: f64,
    pub t: usize,
    #[serde(default)]
    pub model: ModelConfig,
    /// Expected detections per unit intensity; exact intensities when absent.
    #[serde(default)]
    pub photons: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McConfig {
    pub theta1_pi: f64,
    pub theta2_pi: f64,
    pub t: usize,
    /// Model that synthesizes the observed data when no data file is given.
    #[serde(default)]
    pub truth: ModelConfig,
    /// Intensity-map CSV (`step,position,intensity`) with observed data,
    /// relative to the config file.
    #[serde(default)]
    pub observed: Option<String>,
    #[serde(default = "default_sets")]
    pub n_sets: usize,
    #[serde(default = "default_horizon")]
    pub horizon: usize,
    #[serde(default = "unit_efficiency")]
    pub detector_efficiency: [f64; 2],
}

fn default_sets() -> usize {
    1000
}

fn default_horizon() -> usize {
    7
}

/// Parses a config from JSON text, reporting the path of the offending field.
pub fn parse(text: &str) -> Result<ExperimentConfig> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let config: ExperimentConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        CliError::config(if path == "." { "<root>".to_string() } else { path }, e.into_inner().to_string())
    })?;
    Ok(config)
}

pub fn load(path: &Path) -> Result<(ExperimentConfig, String)> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let config = parse(&text)?;
    Ok((config, text))
}

/// Non-fatal remarks about a valid config.
#[derive(Debug, Default)]
pub struct Validation {
    pub warnings: Vec<String>,
}

impl Validation {
    fn angle(&mut self, path: &str, value: f64) -> Result<()> {
        if !value.is_finite() {
            return Err(CliError::config(path, "angle must be finite"));
        }
        if !(0.0..2.0).contains(&value) {
            self.warnings
                .push(format!("{path} = {value} is outside [0, 2) and is reduced to {}", value.rem_euclid(2.0)));
        }
        Ok(())
    }
}

fn positive(path: &str, value: usize) -> Result<()> {
    if value == 0 {
        return Err(CliError::config(path, "must be at least 1"));
    }
    Ok(())
}

fn probabilities(path: &str, grid: &PGrid) -> Result<()> {
    let values = grid.values();
    if values.is_empty() {
        return Err(CliError::config(path, "p grid is empty"));
    }
    for (k, p) in values.iter().enumerate() {
        if !(0.0..=1.0).contains(p) {
            let at = match grid {
                PGrid::One(_) => path.to_string(),
                PGrid::Many(_) => format!("{path}[{k}]"),
            };
            return Err(CliError::config(at, format!("p = {p} is outside [0, 1]")));
        }
    }
    Ok(())
}

fn model(path: &str, m: &ModelConfig) -> Result<()> {
    m.model().validate(&qwtopo::ErrorRanges::default()).map_err(|e| CliError::config(path, e.to_string()))
}

impl ExperimentConfig {
    /// Semantic checks that the schema alone cannot express.
    pub fn validate(&self) -> Result<Validation> {
        let mut v = Validation::default();
        let name = self.experiment.section();
        let present = [
            ("scan", self.scan.is_some()),
            ("phase_diagram", self.phase_diagram.is_some()),
            ("disorder", self.disorder.is_some()),
            ("edge", self.edge.is_some()),
            ("emulate", self.emulate.is_some()),
            ("mc_errorbars", self.mc_errorbars.is_some()),
        ];
        for (section, is_present) in present {
            if section == name && !is_present {
                return Err(CliError::config(section, format!("section required for experiment `{name}`")));
            }
            if section != name && is_present {
                v.warnings.push(format!("section `{section}` is ignored by experiment `{name}`"));
            }
        }
        match self.experiment {
            ExperimentKind::Scan => {
                let s = self.scan.as_ref().expect("checked");
                positive("scan.t", s.t)?;
                match s.line {
                    LineKind::Pairs => {
                        if s.pairs_pi.is_empty() {
                            return Err(CliError::config("scan.pairs_pi", "no angle pairs given"));
                        }
                        for (k, [a, b]) in s.pairs_pi.iter().enumerate() {
                            v.angle(&format!("scan.pairs_pi[{k}][0]"), *a)?;
                            v.angle(&format!("scan.pairs_pi[{k}][1]"), *b)?;
                        }
                    }
                    _ => {
                        positive("scan.points", s.points)?;
                        v.angle("scan.from_pi", s.from_pi)?;
                        v.angle("scan.to_pi", s.to_pi)?;
                    }
                }
            }
            ExperimentKind::PhaseDiagram => {
                let s = self.phase_diagram.as_ref().expect("checked");
                positive("phase_diagram.t", s.t)?;
                if s.resolution < 8 {
                    return Err(CliError::config("phase_diagram.resolution", "must be at least 8"));
                }
                if !(s.tolerance > 0.0 && s.tolerance < 0.5) {
                    return Err(CliError::config("phase_diagram.tolerance", "must lie in (0, 0.5)"));
                }
            }
            ExperimentKind::Disorder => {
                let s = self.disorder.as_ref().expect("checked");
                v.angle("disorder.theta_a_pi", s.theta_a_pi)?;
                v.angle("disorder.theta_b_pi", s.theta_b_pi)?;
                probabilities("disorder.p", &s.p)?;
                positive("disorder.t", s.t)?;
                positive("disorder.n_configs", s.n_configs)?;
                if s.sample_len == Some(0) {
                    return Err(CliError::config("disorder.sample_len", "sample region is empty"));
                }
                if let Some(l) = &s.locate {
                    if l.t_large < 101 {
                        v.warnings.push(format!(
                            "disorder.locate.t_large = {} is short; transitions sharpen with t",
                            l.t_large
                        ));
                    }
                    positive("disorder.locate.n_configs", l.n_configs)?;
                    if !(l.p_step > 0.0 && l.p_step <= 0.5) {
                        return Err(CliError::config("disorder.locate.p_step", "must lie in (0, 0.5]"));
                    }
                }
            }
            ExperimentKind::Edge => {
                let s = self.edge.as_ref().expect("checked");
                v.angle("edge.theta_left_pi", s.theta_left_pi)?;
                v.angle("edge.theta_a_pi", s.theta_a_pi)?;
                v.angle("edge.theta_b_pi", s.theta_b_pi)?;
                probabilities("edge.p", &s.p)?;
                positive("edge.n_configs", s.n_configs)?;
                if let Some(r) = &s.reference {
                    v.angle("edge.reference.theta_left_pi", r.theta_left_pi)?;
                    v.angle("edge.reference.theta_right_pi", r.theta_right_pi)?;
                }
            }
            ExperimentKind::Emulate => {
                let s = self.emulate.as_ref().expect("checked");
                v.angle("emulate.theta1_pi", s.theta1_pi)?;
                v.angle("emulate.theta2_pi", s.theta2_pi)?;
                positive("emulate.t", s.t)?;
                model("emulate.model", &s.model)?;
                if let Some(n) = s.photons {
                    if !(n > 0.0 && n.is_finite()) {
                        return Err(CliError::config("emulate.photons", "must be positive"));
                    }
                }
            }
            ExperimentKind::McErrorbars => {
                let s = self.mc_errorbars.as_ref().expect("checked");
                v.angle("mc_errorbars.theta1_pi", s.theta1_pi)?;
                v.angle("mc_errorbars.theta2_pi", s.theta2_pi)?;
                model("mc_errorbars.truth", &s.truth)?;
                positive("mc_errorbars.n_sets", s.n_sets)?;
                positive("mc_errorbars.horizon", s.horizon)?;
                if s.t < s.horizon {
                    return Err(CliError::config("mc_errorbars.t", "must cover the fit horizon"));
                }
            }
        }
        Ok(v)
    }

    /// Rough resource estimate: lattice sites per run and number of runs.
    pub fn estimate(&self) -> (usize, usize) {
        let window = |t: usize| 2 * t + 5;
        match self.experiment {
            ExperimentKind::Scan => {
                let s = self.scan.as_ref().expect("validated");
                let n = if s.line == LineKind::Pairs { s.pairs_pi.len() } else { s.points };
                (window(s.t), n)
            }
            ExperimentKind::PhaseDiagram => {
                let s = self.phase_diagram.as_ref().expect("validated");
                (window(s.t), s.resolution * s.resolution)
            }
            ExperimentKind::Disorder => {
                let s = self.disorder.as_ref().expect("validated");
                let mut n = s.p.values().len() * s.n_configs;
                if let Some(l) = &s.locate {
                    let points = (1.0 / l.p_step).round() as usize + 1;
                    n += l.n_configs * ((points as f64).log2().ceil() as usize + 2);
                }
                (window(s.t.max(s.locate.as_ref().map_or(0, |l| l.t_large))), n)
            }
            ExperimentKind::Edge => {
                let s = self.edge.as_ref().expect("validated");
                let n = s.p.values().iter().map(|&p| if p == 0.0 || p == 1.0 { 1 } else { s.n_configs }).sum::<usize>();
                (window(s.t), n + 1)
            }
            ExperimentKind::Emulate => {
                let s = self.emulate.as_ref().expect("validated");
                (window(s.t), 1)
            }
            ExperimentKind::McErrorbars => {
                let s = self.mc_errorbars.as_ref().expect("validated");
                (window(s.t), s.n_sets + 1)
            }
        }
    }
}
