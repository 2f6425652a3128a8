// Copyright 2026 The fisherlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! JSON experiment configuration.
//!
//! Complex numbers are `[re, im]` pairs. A matrix is a list of rows.
//!
//! ```json
//! {
//!   "generator": [[[0.5, 0], [0, 0]], [[0, 0], [-0.5, 0]]],
//!   "input_state": [[0.7071067811865476, 0], [0.7071067811865476, 0]],
//!   "lambda": 0.7,
//!   "measurement": "rotated:phi=0.7"
//! }
//! ```

use std::path::Path;

use fisherlab::{Complex64, ComplexVector, HermitianOperator, MeasurementSpec, Povm, StateFamily};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub type ComplexPair = [f64; 2];
pub type MatrixRows = Vec<Vec<ComplexPair>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub generator: MatrixRows,
    pub input_state: Vec<ComplexPair>,
    pub lambda: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measurement: Option<MeasurementConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sim: Option<SimConfig>,
}

/// A constructor string such as `"q_family:q=0.3"`, or explicit effects.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MeasurementConfig {
    Named(String),
    Effects(Vec<MatrixRows>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepParam {
    Q,
    Phi,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub param: SweepParam,
    pub grid: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub n: u64,
    pub trials: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interval: Option<[f64; 2]>,
}

fn config_error(field: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{field}: {msg}"))
}

fn to_complex(p: &ComplexPair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

fn parse_matrix(field: &str, rows: &MatrixRows) -> Result<HermitianOperator, CliError> {
    let n = rows.len();
    if n == 0 {
        return Err(config_error(field, "matrix is empty"));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(config_error(
                field,
                format!("row {i} has {} entries, expected {n}", row.len()),
            ));
        }
    }
    let rows: Vec<Vec<Complex64>> = rows
        .iter()
        .map(|r| r.iter().map(to_complex).collect())
        .collect();
    HermitianOperator::from_rows(&rows).map_err(|e| config_error(field, e))
}

/// A measurement resolved from the config.
#[derive(Debug, Clone, PartialEq)]
pub enum Measurement {
    Named(MeasurementSpec),
    Explicit(Povm),
}

impl Measurement {
    pub fn build(&self, family: &StateFamily, lambda: f64) -> fisherlab::Result<Povm> {
        match self {
            Measurement::Named(spec) => spec.build(family, lambda),
            Measurement::Explicit(povm) => Ok(povm.clone()),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Measurement::Named(spec) => spec.to_string(),
            Measurement::Explicit(povm) => format!("explicit:{}_effects", povm.len()),
        }
    }
}

/// A config after all cross-field checks.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub family: StateFamily,
    pub lambda: f64,
    pub measurement: Option<Measurement>,
    pub sweep: Option<SweepConfig>,
    pub sim: Option<SimConfig>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text)
            .map_err(|e| CliError::Config(format!("invalid config JSON: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config is always serializable")
    }

    pub fn resolve(&self) -> Result<Experiment, CliError> {
        let generator = parse_matrix("generator", &self.generator)?;
        if self.input_state.is_empty() {
            return Err(config_error("input_state", "vector is empty"));
        }
        let input = ComplexVector::new(self.input_state.iter().map(to_complex).collect())
            .map_err(|e| config_error("input_state", e))?;
        if input.dim() != generator.dim() {
            return Err(config_error(
                "input_state",
                format!(
                    "has {} entries but generator is {}x{}",
                    input.dim(),
                    generator.dim(),
                    generator.dim()
                ),
            ));
        }
        let family =
            StateFamily::new(generator, input).map_err(|e| config_error("input_state", e))?;
        if !self.lambda.is_finite() {
            return Err(config_error("lambda", "must be finite"));
        }

        let measurement = match &self.measurement {
            None => None,
            Some(MeasurementConfig::Named(s)) => Some(Measurement::Named(
                s.parse().map_err(|e| config_error("measurement", e))?,
            )),
            Some(MeasurementConfig::Effects(list)) => {
                let effects = list
                    .iter()
                    .enumerate()
                    .map(|(i, m)| parse_matrix(&format!("measurement[{i}]"), m))
                    .collect::<Result<Vec<_>, _>>()?;
                let labels = (0..effects.len()).map(|i| i.to_string()).collect();
                let povm =
                    Povm::new(effects, labels).map_err(|e| config_error("measurement", e))?;
                if povm.dim() != family.dim() {
                    return Err(config_error(
                        "measurement",
                        format!(
                            "effects are {0}x{0} but the state has dimension {1}",
                            povm.dim(),
                            family.dim()
                        ),
                    ));
                }
                Some(Measurement::Explicit(povm))
            }
        };

        if let Some(sweep) = &self.sweep {
            if sweep.grid.is_empty() {
                return Err(config_error("sweep.grid", "must not be empty"));
            }
            if let Some(x) = sweep.grid.iter().find(|x| !x.is_finite()) {
                return Err(config_error("sweep.grid", format!("non-finite value {x}")));
            }
            if sweep.param == SweepParam::Q {
                if let Some(q) = sweep.grid.iter().find(|q| !(0.0..=1.0).contains(*q)) {
                    return Err(config_error(
                        "sweep.grid",
                        format!("q = {q} is outside [0, 1]"),
                    ));
                }
            }
        }

        if let Some(sim) = &self.sim {
            if sim.n == 0 {
                return Err(config_error("sim.n", "must be at least 1"));
            }
            if sim.trials < 2 {
                return Err(config_error(
                    "sim.trials",
                    format!("must be at least 2, got {}", sim.trials),
                ));
            }
            if let Some([lo, hi]) = sim.interval {
                if !(lo.is_finite() && hi.is_finite() && hi > lo) {
                    return Err(config_error(
                        "sim.interval",
                        format!("[{lo}, {hi}] is not a valid interval"),
                    ));
                }
            }
        }

        Ok(Experiment {
            family,
            lambda: self.lambda,
            measurement,
            sweep: self.sweep.clone(),
            sim: self.sim.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const QUBIT: &str = r#"{
        "generator": [[[0.5, 0], [0, 0]], [[0, 0], [-0.5, 0]]],
        "input_state": [[0.7071067811865476, 0], [0.7071067811865476, 0]],
        "lambda": 0.7,
        "measurement": "rotated:phi=0.7"
    }"#;

    fn full_config() -> ExperimentConfig {
        ExperimentConfig {
            generator: vec![
                vec![[0.0, 0.0], [0.25, -0.5]],
                vec![[0.25, 0.5], [1.0, 0.0]],
            ],
            input_state: vec![[0.6, 0.0], [0.0, 0.8]],
            lambda: -0.123456789012345,
            measurement: Some(MeasurementConfig::Effects(vec![
                vec![vec![[1.0, 0.0], [0.0, 0.0]], vec![[0.0, 0.0], [0.0, 0.0]]],
                vec![vec![[0.0, 0.0], [0.0, 0.0]], vec![[0.0, 0.0], [1.0, 0.0]]],
            ])),
            sweep: Some(SweepConfig {
                param: SweepParam::Phi,
                grid: vec![0.1, 0.2, 1.0 / 3.0],
            }),
            sim: Some(SimConfig {
                n: 1000,
                trials: 10,
                seed: u64::MAX,
                interval: Some([-1.5, 1.5]),
            }),
        }
    }

    #[test]
    fn parses_the_qubit_config() {
        let cfg = ExperimentConfig::from_json(QUBIT).unwrap();
        let exp = cfg.resolve().unwrap();
        assert_eq!(exp.family.dim(), 2);
        assert_eq!(
            exp.measurement,
            Some(Measurement::Named(MeasurementSpec::Rotated { phi: 0.7 }))
        );
    }

    #[test]
    fn round_trip_is_identical() {
        for cfg in [ExperimentConfig::from_json(QUBIT).unwrap(), full_config()] {
            let again = ExperimentConfig::from_json(&cfg.to_json()).unwrap();
            assert_eq!(again, cfg);
        }
        assert!(full_config().resolve().is_ok());
    }

    #[test]
    fn field_diagnostics() {
        let mut cfg = full_config();
        cfg.generator[1].pop();
        let msg = cfg.resolve().unwrap_err().to_string();
        assert!(msg.contains("generator") && msg.contains("row 1"), "{msg}");

        let mut cfg = full_config();
        cfg.input_state = vec![[1.0, 0.0], [1.0, 0.0]];
        assert!(cfg
            .resolve()
            .unwrap_err()
            .to_string()
            .contains("input_state"));

        let mut cfg = full_config();
        cfg.sim.as_mut().unwrap().trials = 0;
        assert!(cfg
            .resolve()
            .unwrap_err()
            .to_string()
            .contains("sim.trials"));

        let mut cfg = full_config();
        cfg.generator[0][1] = [0.3, 0.0];
        assert!(cfg.resolve().unwrap_err().to_string().contains("Hermitian"));

        let mut cfg = full_config();
        cfg.measurement = Some(MeasurementConfig::Named("q_family:q=2".into()));
        assert!(cfg
            .resolve()
            .unwrap_err()
            .to_string()
            .contains("measurement"));

        let mut cfg = full_config();
        cfg.sweep = Some(SweepConfig {
            param: SweepParam::Q,
            grid: vec![0.5, 1.5],
        });
        assert!(cfg
            .resolve()
            .unwrap_err()
            .to_string()
            .contains("sweep.grid"));
    }

    #[test]
    fn json_errors_carry_position() {
        let err =
            ExperimentConfig::from_json("{\n  \"lambda\": 1,\n  \"bogus\": 2\n}").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line"), "{msg}");
    }
}
