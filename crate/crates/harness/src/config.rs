//! JSON experiment description and its validation into core objects.

use std::path::Path;

use mfc_core::controller::{check_separation, ControllerConfig, InfluencePolicy};
use mfc_core::fts::{HolderGainParams, Weight};
use mfc_core::linalg::Matrix;
use mfc_core::observer::OutputObserverConfig;
use mfc_core::plants::{NoiseModel, PendulumParams, PendulumState};
use mfc_core::ulm::{UlmConfig, UlmObserverOrder};
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub plant: PlantConfig,
    /// Run length in seconds; zero gives an empty log.
    pub horizon: f64,
    /// Samples per second.
    pub sample_rate: f64,
    pub observer: ObserverSection,
    pub ulm: UlmSection,
    pub controller: ControllerSection,
    #[serde(default)]
    pub noise: Option<NoiseSection>,
    /// Initial output estimate, one entry per output.
    pub initial_estimates: Vec<f64>,
    #[serde(default)]
    pub seed: u64,
    /// Downgrades a violated observer/controller gain separation to a warning.
    #[serde(default)]
    pub allow_separation_violation: bool,
    /// Feed the controller the exact `F` (synthetic plant only).
    #[serde(default)]
    pub oracle_f: bool,
    /// Constant error added to the exact `F` in oracle mode.
    #[serde(default)]
    pub oracle_f_offset: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PlantConfig {
    Pendulum(PendulumPlant),
    SyntheticUlm(SyntheticPlant),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PendulumPlant {
    pub params: PendulumParamsConfig,
    pub initial_truth: StateConfig,
    /// Initial state of the reference run that generates `y^d`.
    pub reference_initial: StateConfig,
    /// RK4 steps per sampling period.
    pub substeps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticPlant {
    /// `y_0` and `y_1`.
    pub initial_outputs: [f64; 2],
    pub f_signal: Signal,
    pub desired: Signal,
}

/// Scalar signal indexed by sample number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Signal {
    Constant { value: f64 },
    Ramp { offset: f64, slope: f64 },
    /// `offset + amplitude·sin(frequency·k + phase)`, frequency in rad/sample.
    Sinusoid { offset: f64, amplitude: f64, frequency: f64, phase: f64 },
}

impl Signal {
    pub fn at(&self, k: usize) -> f64 {
        let k = k as f64;
        match *self {
            Signal::Constant { value } => value,
            Signal::Ramp { offset, slope } => offset + slope * k,
            Signal::Sinusoid {
                offset,
                amplitude,
                frequency,
                phase,
            } => offset + amplitude * (frequency * k + phase).sin(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PendulumParamsConfig {
    pub cart_mass: f64,
    pub pend_mass: f64,
    pub half_length: f64,
    pub inertia: f64,
    pub gravity: f64,
    pub cart_friction: f64,
    pub pend_friction: f64,
}

impl From<PendulumParamsConfig> for PendulumParams<f64> {
    fn from(c: PendulumParamsConfig) -> Self {
        PendulumParams {
            cart_mass: c.cart_mass,
            pend_mass: c.pend_mass,
            half_length: c.half_length,
            inertia: c.inertia,
            gravity: c.gravity,
            cart_friction: c.cart_friction,
            pend_friction: c.pend_friction,
        }
    }
}

impl From<PendulumParams<f64>> for PendulumParamsConfig {
    fn from(p: PendulumParams<f64>) -> Self {
        Self {
            cart_mass: p.cart_mass,
            pend_mass: p.pend_mass,
            half_length: p.half_length,
            inertia: p.inertia,
            gravity: p.gravity,
            cart_friction: p.cart_friction,
            pend_friction: p.pend_friction,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateConfig {
    pub x: f64,
    pub theta: f64,
    pub x_dot: f64,
    pub theta_dot: f64,
}

impl From<StateConfig> for PendulumState<f64> {
    fn from(s: StateConfig) -> Self {
        PendulumState::new(s.x, s.theta, s.x_dot, s.theta_dot)
    }
}

/// Either a scalar multiple of the identity or a full matrix (rows).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightConfig {
    Scalar(f64),
    Matrix(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObserverSection {
    pub weight: WeightConfig,
    pub margin: f64,
    pub exponent: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObserverOrderConfig {
    First,
    Second,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UlmSection {
    pub order_nu: usize,
    pub margin: f64,
    pub exponent: f64,
    pub observer_order: ObserverOrderConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InfluencePolicyConfig {
    FixedMatrix(Vec<Vec<f64>>),
    AdaptiveScalar { base: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControllerSection {
    pub margin: f64,
    pub exponent: f64,
    pub coefficients: Vec<f64>,
    pub influence_policy: InfluencePolicyConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSection {
    /// Total support width; the seed comes from the top-level `seed`.
    pub width: f64,
}

/// Core objects built from a checked config.
#[derive(Debug, Clone)]
pub struct Validated {
    pub observer: OutputObserverConfig<f64>,
    pub ulm: UlmConfig<f64>,
    pub controller: ControllerConfig<f64>,
    pub noise: Option<NoiseModel<f64>>,
    pub pendulum: Option<PendulumParams<f64>>,
    pub dt: f64,
    pub warnings: Vec<String>,
}

fn matrix(rows: &[Vec<f64>], what: &str) -> Result<Matrix<f64>> {
    Matrix::from_rows(rows).map_err(|e| HarnessError::Config(format!("{what}: {e}")))
}

impl ExperimentConfig {
    /// Built-in inverted-pendulum experiment: 50 Hz for 70 s with bump noise.
    pub fn pendulum_default() -> Self {
        Self {
            plant: PlantConfig::Pendulum(PendulumPlant {
                params: PendulumParams::<f64>::default().into(),
                initial_truth: StateConfig {
                    x: 0.45,
                    theta: -0.14,
                    x_dot: -0.3,
                    theta_dot: 0.05,
                },
                reference_initial: StateConfig {
                    x: 0.45,
                    theta: -0.14,
                    x_dot: -0.3,
                    theta_dot: 0.05,
                },
                substeps: 10,
            }),
            horizon: 70.0,
            sample_rate: 50.0,
            observer: ObserverSection {
                weight: WeightConfig::Scalar(2.1),
                margin: 2.0,
                exponent: 7.0 / 5.0,
            },
            ulm: UlmSection {
                order_nu: 2,
                margin: 1.5,
                exponent: 9.0 / 7.0,
                observer_order: ObserverOrderConfig::First,
            },
            controller: ControllerSection {
                margin: 1.0,
                exponent: 11.0 / 9.0,
                coefficients: vec![0.35],
                influence_policy: InfluencePolicyConfig::AdaptiveScalar { base: 1.5 },
            },
            noise: Some(NoiseSection { width: 0.018 }),
            initial_estimates: vec![0.102],
            seed: 0,
            allow_separation_violation: false,
            oracle_f: false,
            oracle_f_offset: 0.0,
        }
    }

    /// Noise-free synthetic double integrator with the same gains.
    pub fn synthetic_default(f_signal: Signal, desired: Signal) -> Self {
        let y0 = desired.at(0) + 0.5;
        let y1 = desired.at(1) + 0.3;
        Self {
            plant: PlantConfig::SyntheticUlm(SyntheticPlant {
                initial_outputs: [y0, y1],
                f_signal,
                desired,
            }),
            horizon: 40.0,
            sample_rate: 50.0,
            noise: None,
            initial_estimates: vec![y0],
            ..Self::pendulum_default()
        }
    }

    pub fn dt(&self) -> f64 {
        1.0 / self.sample_rate
    }

    pub fn validate(&self) -> Result<Validated> {
        let cfg = |m: String| HarnessError::Config(m);
        if !(self.sample_rate > 0.0) || !self.sample_rate.is_finite() {
            return Err(cfg(format!("sample_rate must be positive, got {}", self.sample_rate)));
        }
        if !(self.horizon >= 0.0) || !self.horizon.is_finite() {
            return Err(cfg(format!("horizon must be non-negative, got {}", self.horizon)));
        }
        if self.initial_estimates.len() != 1 {
            return Err(cfg(format!(
                "initial_estimates must hold one output estimate, got {}",
                self.initial_estimates.len()
            )));
        }
        if self.ulm.order_nu != 2 || self.controller.coefficients.len() != 1 {
            return Err(cfg("the runner implements the second-order law: order_nu must be 2 with one coefficient".into()));
        }
        if !self.oracle_f_offset.is_finite() {
            return Err(cfg("oracle_f_offset must be finite".into()));
        }

        let weight = match &self.observer.weight {
            WeightConfig::Scalar(w) => Weight::Uniform(*w),
            WeightConfig::Matrix(rows) => Weight::Matrix(matrix(rows, "observer.weight")?),
        };
        let observer = OutputObserverConfig::new(HolderGainParams::new(weight, self.observer.margin, self.observer.exponent)?);
        if let Some(d) = observer.gain.weight().dim() {
            if d != 1 {
                return Err(cfg(format!("observer.weight must be 1×1 for a single output, got {d}×{d}")));
            }
        }
        let order = match self.ulm.observer_order {
            ObserverOrderConfig::First => UlmObserverOrder::First,
            ObserverOrderConfig::Second => UlmObserverOrder::Second,
        };
        let ulm = UlmConfig::new(self.ulm.order_nu, self.ulm.margin, self.ulm.exponent, order)?;
        let policy = match &self.controller.influence_policy {
            InfluencePolicyConfig::FixedMatrix(rows) => {
                let g = matrix(rows, "controller.influence_policy")?;
                if g.rows() != 1 {
                    return Err(cfg("influence matrix must have one row for a single output".into()));
                }
                InfluencePolicy::FixedMatrix(g)
            }
            InfluencePolicyConfig::AdaptiveScalar { base } => InfluencePolicy::AdaptiveScalar { base: *base },
        };
        let controller = ControllerConfig::new(
            self.controller.margin,
            self.controller.exponent,
            self.controller.coefficients.clone(),
            policy,
        )?;

        let mut warnings = Vec::new();
        if let Err(e) = check_separation(&observer, &controller) {
            if self.allow_separation_violation {
                warnings.push(e.to_string());
            } else {
                return Err(cfg(format!("{e} (set allow_separation_violation to override)")));
            }
        }

        let noise = match self.noise {
            Some(n) => Some(NoiseModel::new(n.width, self.seed)?),
            None => None,
        };

        let pendulum = match &self.plant {
            PlantConfig::Pendulum(p) => {
                let params: PendulumParams<f64> = p.params.into();
                params.validate()?;
                if p.substeps == 0 {
                    return Err(cfg("plant.pendulum.substeps must be positive".into()));
                }
                if let InfluencePolicy::FixedMatrix(g) = controller.policy() {
                    if g.cols() != 1 {
                        return Err(cfg("the pendulum has a single input; the influence matrix must be 1×1".into()));
                    }
                }
                if self.oracle_f {
                    return Err(cfg("oracle_f needs a plant with a known F (synthetic_ulm)".into()));
                }
                Some(params)
            }
            PlantConfig::SyntheticUlm(_) => None,
        };

        Ok(Validated {
            observer,
            ulm,
            controller,
            noise,
            pendulum,
            dt: self.dt(),
            warnings,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

pub fn parse_config(text: &str, path: &Path) -> Result<ExperimentConfig> {
    serde_json::from_str(text).map_err(|e| HarnessError::Schema {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

pub fn read_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text, path)
}

pub fn write_config(config: &ExperimentConfig, path: &Path) -> Result<()> {
    std::fs::write(path, config.to_json() + "\n").map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })
}
