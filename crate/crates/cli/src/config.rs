//! Experiment configuration: one JSON document per experiment.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use photonlab::source::CurrentSource;
use photonlab::{GridSpec, KGrid, PhysicalConstants};
use serde::{Deserialize, Serialize};

/// Default half-width of the compact bump in the leakage experiment.
pub const DEFAULT_HALF_WIDTH: f64 = 1.0 / 16.0;

/// A usage or configuration problem; `field` names the offending key.
#[derive(Debug, thiserror::Error)]
#[error("config field `{field}`: {reason}")]
pub struct ConfigError {
    pub field: String,
    pub reason: String,
}

impl ConfigError {
    pub fn new(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    FockCheck,
    OmegaCheck,
    Evolve,
    SeMaxwellConsistency,
    Kernel,
    Hegerfeldt,
    Coherent,
    Biprism,
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().expect("string tag"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeStepping {
    pub dt: f64,
    pub steps: usize,
    /// Record (and dump) every `stride`-th step; by default only the first
    /// and last states.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stride: Option<usize>,
}

impl TimeStepping {
    pub fn stride(&self) -> usize {
        self.stride.unwrap_or(self.steps).max(1)
    }
}

/// Experiment-specific knobs; each experiment reads the ones it needs and
/// fills the rest with documented defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// Fock truncation level.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    /// Largest occupation whose ladder action is checked.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ladder_max_n: Option<usize>,
    /// Coherent amplitudes `[re, im]` of the two biprism arms.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphas: Option<[[f64; 2]; 2]>,
    /// Band limit of random initial data.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_max: Option<f64>,
    /// Scale of random initial data; 0 starts from rest.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    /// Half-width of the compact initial bump (Hegerfeldt experiment).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub half_width: Option<f64>,
    /// Light-cone radius in cells at which kernels are sampled.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cone_cells: Option<usize>,
    /// Number of random field pairs for adjointness and inverse checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<usize>,
    /// Number of plane waves in the closed-form frequency-operator test field.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plane_waves: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub constants: PhysicalConstants,
    #[serde(default)]
    pub source: CurrentSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time: Option<TimeStepping>,
    #[serde(default)]
    pub params: Params,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
    /// Overrides of the experiment's default tolerances, by metric name.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
}

/// How a metric is compared against its tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Comparison {
    #[serde(rename = "<")]
    Below,
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">")]
    Above,
}

impl Comparison {
    pub fn holds(self, value: f64, threshold: f64) -> bool {
        match self {
            Comparison::Below => value < threshold,
            Comparison::AtMost => value <= threshold,
            Comparison::Above => value > threshold,
        }
    }
}

/// Gated metrics and their default thresholds.
pub fn default_tolerances(cfg: &ExperimentConfig) -> Vec<(&'static str, Comparison, f64)> {
    use Comparison::*;
    match cfg.experiment {
        Experiment::FockCheck => vec![
            ("ladder_error", AtMost, 1e-14),
            ("commutator_defect_error", AtMost, 0.0),
            ("commutator_product_gap", Below, 1e-12),
        ],
        Experiment::OmegaCheck => vec![
            ("omega2_closed_form_rel_error", Below, 1e-10),
            ("omega1_closed_form_rel_error", Below, 1e-10),
            ("self_adjointness_defect", Below, 1e-12),
            ("inverse_identity_error", Below, 1e-12),
        ],
        Experiment::Evolve => {
            let mut t = vec![
                ("imag_residue_rel", Below, 1e-12),
                ("transverse_defect", Below, 1e-10),
            ];
            if cfg.source == CurrentSource::None {
                t.push(("energy_drift_rel", Below, 1e-12));
                t.push(("psi_norm_drift_rel", Below, 1e-12));
            }
            t
        }
        Experiment::SeMaxwellConsistency => vec![
            ("rel_error", Below, 1e-6),
            ("convergence_ratio_deviation", AtMost, 0.5),
        ],
        Experiment::Kernel => {
            let mut t = vec![
                ("equal_time_offsite_rel", Below, 1e-10),
                ("equal_time_onsite_rel_error", Below, 1e-10),
                ("photon_offcone_rel", Above, 1e-3),
                ("photon_hermiticity_error", Below, 1e-12),
                ("profile_direct_sum_gap", Below, 1e-10),
            ];
            // exact lattice causality holds for the 1D analog only
            if cfg.grid.is_some_and(|g| g.dim == 1) {
                t.push(("commutator_offcone_rel", Below, 1e-8));
            }
            t
        }
        Experiment::Hegerfeldt => vec![
            ("leakage_real", Below, 1e-8),
            ("leakage_posfreq", Above, 1e-3),
            ("beyond_horizon", AtMost, 0.0),
        ],
        Experiment::Coherent => vec![
            ("reality_residue_rel", Below, 1e-12),
            ("maxwell_mismatch_rel", Below, 1e-6),
            ("count_normalization_error", Below, 1e-10),
        ],
        Experiment::Biprism => vec![
            ("coincidence_probability", Below, 1e-14),
            ("singles_sum_error", Below, 1e-14),
            ("coherent_coincidence_error", Below, 1e-8),
        ],
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| {
            // serde reports unknown/missing keys by name; keep its wording
            ConfigError::new(field_hint(&e.to_string()), e.to_string())
        })
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new("--config", format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Effective tolerances: defaults overridden by the config.
    pub fn tolerances(&self) -> Result<Vec<(&'static str, Comparison, f64)>, ConfigError> {
        let mut table = default_tolerances(self);
        for (name, value) in &self.tolerances {
            let slot = table
                .iter_mut()
                .find(|(n, _, _)| n == name)
                .ok_or_else(|| {
                    ConfigError::new(
                        format!("tolerances.{name}"),
                        format!("`{}` has no gated metric of that name", self.experiment),
                    )
                })?;
            if !value.is_finite() {
                return Err(ConfigError::new(
                    format!("tolerances.{name}"),
                    "must be finite",
                ));
            }
            slot.2 = *value;
        }
        Ok(table)
    }

    pub fn require_grid(&self) -> Result<GridSpec, ConfigError> {
        let grid = self.grid.ok_or_else(|| {
            ConfigError::new("grid", format!("required by `{}`", self.experiment))
        })?;
        grid.validate()
            .map_err(|e| ConfigError::new("grid", e.to_string()))?;
        Ok(grid)
    }

    pub fn require_time(&self) -> Result<TimeStepping, ConfigError> {
        let time = self.time.ok_or_else(|| {
            ConfigError::new("time", format!("required by `{}`", self.experiment))
        })?;
        if !(time.dt.is_finite() && time.dt > 0.0) {
            return Err(ConfigError::new(
                "time.dt",
                format!("must be finite and > 0, got {}", time.dt),
            ));
        }
        if time.steps == 0 {
            return Err(ConfigError::new("time.steps", "must be >= 1"));
        }
        if time.stride == Some(0) {
            return Err(ConfigError::new("time.stride", "must be >= 1"));
        }
        Ok(time)
    }

    /// Grid of the leakage experiment; the 1D analog with 4096 points on a
    /// unit box unless configured.
    pub fn hegerfeldt_grid(&self) -> Result<GridSpec, ConfigError> {
        let g = match self.grid {
            Some(_) => self.require_grid()?,
            None => GridSpec::new(1, 4096, 1.0),
        };
        if g.dim != 1 {
            return Err(ConfigError::new(
                "grid.dim",
                "hegerfeldt runs on the 1D analog",
            ));
        }
        Ok(g)
    }

    /// Time stepping of the leakage experiment: steps of one cell crossing
    /// time by default. Steps must land on lattice light-cone times, the only
    /// times at which the lattice propagator is exactly causal.
    pub fn hegerfeldt_time(&self, g: &GridSpec) -> Result<TimeStepping, ConfigError> {
        let cell = g.spacing() / self.constants.c;
        let time = match self.time {
            Some(_) => self.require_time()?,
            None => TimeStepping {
                dt: cell,
                steps: 256,
                stride: Some(32),
            },
        };
        let cells = time.dt / cell;
        if (cells - cells.round()).abs() > 1e-9 * cells.max(1.0) {
            return Err(ConfigError::new(
                "time.dt",
                format!(
                    "must be a whole number of cell crossing times dx/c = {cell}, got {}",
                    time.dt
                ),
            ));
        }
        Ok(time)
    }

    /// Check everything that can be checked without running.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.constants
            .validate()
            .map_err(|e| ConfigError::new("constants", e.to_string()))?;
        self.tolerances()?;
        let positive = |field: &str, v: Option<f64>| match v {
            Some(x) if !(x.is_finite() && x > 0.0) => {
                Err(ConfigError::new(field, format!("must be > 0, got {x}")))
            }
            _ => Ok(()),
        };
        positive("params.k_max", self.params.k_max)?;
        positive("params.half_width", self.params.half_width)?;
        if let Some(a) = self.params.amplitude {
            if !(a.is_finite() && a >= 0.0) {
                return Err(ConfigError::new(
                    "params.amplitude",
                    format!("must be >= 0, got {a}"),
                ));
            }
        }
        match self.experiment {
            Experiment::FockCheck => {
                if self.params.n_max == Some(0) {
                    return Err(ConfigError::new("params.n_max", "must be >= 1"));
                }
            }
            Experiment::Biprism => {
                if self.params.n_max == Some(0) {
                    return Err(ConfigError::new("params.n_max", "must be >= 1"));
                }
            }
            Experiment::OmegaCheck => {
                self.require_grid()?;
            }
            Experiment::Kernel => {
                self.require_grid()?;
            }
            Experiment::Hegerfeldt => {
                let g = self.hegerfeldt_grid()?;
                if self.source != CurrentSource::None {
                    return Err(ConfigError::new(
                        "source",
                        "hegerfeldt propagates free fields",
                    ));
                }
                let half = self.params.half_width.unwrap_or(DEFAULT_HALF_WIDTH);
                if 2.0 * half >= g.box_length {
                    return Err(ConfigError::new(
                        "params.half_width",
                        "the bump must fit inside the box",
                    ));
                }
                self.hegerfeldt_time(&g)?;
            }
            Experiment::Evolve | Experiment::SeMaxwellConsistency | Experiment::Coherent => {
                self.require_grid()?;
                self.require_time()?;
            }
        }
        if matches!(
            self.experiment,
            Experiment::SeMaxwellConsistency | Experiment::Coherent
        ) && self.source == CurrentSource::None
        {
            return Err(ConfigError::new(
                "source",
                format!("`{}` needs a current", self.experiment),
            ));
        }
        if self.experiment == Experiment::Evolve
            && self.source == CurrentSource::None
            && self.params.amplitude == Some(0.0)
        {
            return Err(ConfigError::new(
                "params.amplitude",
                "zero initial data and no source: nothing to evolve",
            ));
        }
        if let (Some(spec), false) = (self.grid, self.source == CurrentSource::None) {
            let grid = KGrid::new(spec, self.constants)
                .map_err(|e| ConfigError::new("grid", e.to_string()))?;
            self.source
                .compile(&Arc::new(grid))
                .map_err(|e| ConfigError::new("source", e.to_string()))?;
        }
        Ok(())
    }
}

/// Pull a key name out of a serde error message, if it names one.
fn field_hint(msg: &str) -> String {
    for marker in ["unknown field `", "missing field `", "unknown variant `"] {
        if let Some(rest) = msg.split(marker).nth(1) {
            if let Some(name) = rest.split('`').next() {
                return name.to_string();
            }
        }
    }
    "config".to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_parses_with_defaults() {
        let cfg = ExperimentConfig::from_json(r#"{"experiment": "fock-check"}"#).unwrap();
        assert_eq!(cfg.experiment, Experiment::FockCheck);
        assert_eq!(cfg.seed, 0);
        assert_eq!(cfg.source, CurrentSource::None);
        cfg.validate().unwrap();
        assert_eq!(cfg.tolerances().unwrap().len(), 3);
    }

    #[test]
    fn unknown_key_is_named() {
        let err =
            ExperimentConfig::from_json(r#"{"experiment": "fock-check", "gird": {}}"#).unwrap_err();
        assert_eq!(err.field, "gird");
        let err = ExperimentConfig::from_json(r#"{"experiment": "quantum-foam"}"#).unwrap_err();
        assert_eq!(err.field, "quantum-foam");
    }

    #[test]
    fn tolerance_overrides() {
        let cfg = ExperimentConfig::from_json(
            r#"{"experiment": "biprism", "tolerances": {"coincidence_probability": 1e-12}}"#,
        )
        .unwrap();
        let t = cfg.tolerances().unwrap();
        assert_eq!(t[0], ("coincidence_probability", Comparison::Below, 1e-12));
        let bad = ExperimentConfig::from_json(
            r#"{"experiment": "biprism", "tolerances": {"energy": 1}}"#,
        )
        .unwrap();
        assert_eq!(bad.validate().unwrap_err().field, "tolerances.energy");
    }

    #[test]
    fn missing_sections_are_named() {
        let cfg = ExperimentConfig::from_json(
            r#"{"experiment": "evolve", "grid": {"dim": 3, "n": 8, "box_length": 1}}"#,
        )
        .unwrap();
        assert_eq!(cfg.validate().unwrap_err().field, "time");
        let cfg = ExperimentConfig::from_json(
            r#"{"experiment": "kernel", "grid": {"dim": 2, "n": 8, "box_length": 1}}"#,
        )
        .unwrap();
        assert_eq!(cfg.validate().unwrap_err().field, "grid");
    }

    #[test]
    fn experiment_names_display_as_configured() {
        assert_eq!(
            Experiment::SeMaxwellConsistency.to_string(),
            "se-maxwell-consistency"
        );
    }
}
