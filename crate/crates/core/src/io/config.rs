//! Model configuration documents (TOML).
//!
//! ```toml
//! n = 2
//! topology = "full-2x2"      # or "doorway"
//! omega_re = 0.0
//! omega_im = 0.05
//! bifurcation = "width"      # optional: width | level | auto
//!
//! [[state]]
//! e_intercept = 0.6666666666666666
//! e_slope = 0.0
//! g2_intercept = -0.5
//! g2_slope = 0.0
//!
//! [[state]]
//! e_intercept = 0.6666666666666666
//! e_slope = 1.0
//! g2_intercept = -0.5
//! g2_slope = 0.0
//!
//! [sweep]
//! axis_name = "d"
//! min = -0.3
//! max = 0.3
//! points = 1001
//!
//! [refine]                   # optional, every key optional
//! enable = true
//! gap_factor = 10.0
//! gap_threshold = 1e-3
//! max_extra_points = 500
//! rounds = 20
//! ```
//!
//! `g2` is the half-width `γ/2`; each curve is `intercept + slope·a`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{HamiltonianSpec, Level, ModelError, ParamCurve, Preset, SweepAxis, Topology};
use crate::scalar::{lit, Real};
use crate::sweep::{Bifurcation, RefineConfig, SweepConfig};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{0}")]
    Parse(String),
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error("invalid config: {0}")]
    Model(#[from] ModelError),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSection {
    pub e_intercept: f64,
    pub e_slope: f64,
    pub g2_intercept: f64,
    pub g2_slope: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub axis_name: String,
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RefineSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enable: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap_factor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap_threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_extra_points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rounds: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub n: usize,
    pub topology: String,
    pub omega_re: f64,
    pub omega_im: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bifurcation: Option<String>,
    pub state: Vec<StateSection>,
    pub sweep: SweepSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refine: Option<RefineSection>,
}

impl ModelConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn from_preset<T: Real>(p: &Preset<T>) -> Self {
        let f = |x: T| x.to_f64().unwrap_or(f64::NAN);
        let state = p
            .spec
            .levels()
            .iter()
            .map(|l| StateSection {
                e_intercept: f(l.energy.intercept),
                e_slope: f(l.energy.slope),
                g2_intercept: f(l.half_width.intercept),
                g2_slope: f(l.half_width.slope),
            })
            .collect();
        Self {
            n: p.spec.n(),
            topology: p.spec.topology().name().to_string(),
            omega_re: f(p.spec.coupling().re),
            omega_im: f(p.spec.coupling().im),
            bifurcation: Some(p.bifurcation.name().to_string()),
            state,
            sweep: SweepSection {
                axis_name: p.axis.name.clone(),
                min: f(p.axis.min),
                max: f(p.axis.max),
                points: p.axis.points,
            },
            refine: None,
        }
    }

    pub fn spec<T: Real>(&self) -> Result<HamiltonianSpec<T>, ConfigError> {
        let topology = match self.topology.as_str() {
            "full-2x2" => Topology::Full2x2,
            "doorway" => Topology::Doorway,
            other => {
                return Err(ConfigError::Invalid(format!(
                    "topology: unknown value {other:?} (expected \"full-2x2\" or \"doorway\")"
                )))
            }
        };
        if self.state.len() != self.n {
            return Err(ConfigError::Invalid(format!(
                "n = {} but {} [[state]] tables given",
                self.n,
                self.state.len()
            )));
        }
        let levels = self
            .state
            .iter()
            .map(|s| {
                Level::new(
                    ParamCurve::new(lit(s.e_intercept), lit(s.e_slope)),
                    ParamCurve::new(lit(s.g2_intercept), lit(s.g2_slope)),
                )
            })
            .collect();
        Ok(HamiltonianSpec::new(levels, Complex::new(lit(self.omega_re), lit(self.omega_im)), topology)?)
    }

    pub fn sweep_config<T: Real>(&self) -> Result<SweepConfig<T>, ConfigError> {
        let spec = self.spec()?;
        let s = &self.sweep;
        if !(s.min.is_finite() && s.max.is_finite()) || s.min >= s.max {
            return Err(ConfigError::Invalid(format!("sweep: min ({}) must be below max ({})", s.min, s.max)));
        }
        if s.points < 3 {
            return Err(ConfigError::Invalid(format!("sweep.points: need at least 3, got {}", s.points)));
        }
        let mut cfg = SweepConfig::new(spec, SweepAxis::new(s.axis_name.clone(), lit(s.min), lit(s.max), s.points));
        if let Some(b) = &self.bifurcation {
            cfg.bifurcation = Bifurcation::parse(b).ok_or_else(|| {
                ConfigError::Invalid(format!("bifurcation: unknown value {b:?} (expected width, level or auto)"))
            })?;
        }
        if let Some(r) = &self.refine {
            let d = RefineConfig::<T>::default();
            cfg.refine = RefineConfig {
                enable: r.enable.unwrap_or(d.enable),
                gap_factor: r.gap_factor.map(lit).unwrap_or(d.gap_factor),
                gap_threshold: r.gap_threshold.map(lit),
                max_extra_points: r.max_extra_points.unwrap_or(d.max_extra_points),
                rounds: r.rounds.unwrap_or(d.rounds),
            };
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{preset, PRESET_IDS};

    #[test]
    fn presets_round_trip() {
        for id in PRESET_IDS {
            let p = preset::<f64>(id).unwrap();
            let text = ModelConfig::from_preset(&p).to_toml();
            let back = ModelConfig::parse(&text).unwrap().sweep_config::<f64>().unwrap();
            assert_eq!(back.spec, p.spec, "{id}");
            assert_eq!(back.axis, p.axis, "{id}");
            assert_eq!(back.bifurcation, p.bifurcation, "{id}");
        }
    }

    #[test]
    fn parse_errors_name_the_line() {
        let err = ModelConfig::parse("n = 2\ntopology = \n").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn unknown_fields_rejected() {
        let p = preset::<f64>("fig1a-d").unwrap();
        let text = ModelConfig::from_preset(&p).to_toml().replace("omega_im", "omega_imag");
        assert!(ModelConfig::parse(&text).is_err());
    }

    #[test]
    fn semantic_checks() {
        let p = preset::<f64>("fig1a-d").unwrap();
        let mut cfg = ModelConfig::from_preset(&p);
        cfg.sweep.min = 1.0;
        cfg.sweep.max = 1.0;
        assert!(matches!(cfg.sweep_config::<f64>(), Err(ConfigError::Invalid(_))));

        let mut cfg = ModelConfig::from_preset(&p);
        cfg.n = 3;
        assert!(matches!(cfg.sweep_config::<f64>(), Err(ConfigError::Invalid(_))));

        let mut cfg = ModelConfig::from_preset(&p);
        cfg.topology = "ring".into();
        assert!(matches!(cfg.sweep_config::<f64>(), Err(ConfigError::Invalid(_))));

        let mut cfg = ModelConfig::from_preset(&preset::<f64>("fig5-3lev").unwrap());
        cfg.topology = "full-2x2".into();
        assert!(matches!(cfg.sweep_config::<f64>(), Err(ConfigError::Model(ModelError::NotTwoLevel(3)))));
    }

    #[test]
    fn refine_section_overrides() {
        let p = preset::<f64>("fig1a-d").unwrap();
        let mut cfg = ModelConfig::from_preset(&p);
        cfg.refine = Some(RefineSection { enable: Some(false), max_extra_points: Some(3), ..Default::default() });
        let sc = ModelConfig::parse(&cfg.to_toml()).unwrap().sweep_config::<f64>().unwrap();
        assert!(!sc.refine.enable);
        assert_eq!(sc.refine.max_extra_points, 3);
        assert_eq!(sc.refine.rounds, 20);
    }
}
