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

//! Pure-state quantum metrology toolkit.
//!
//! Builds unitary state families `exp(-i lambda H)|psi>`, computes their
//! quantum Fisher information and symmetric logarithmic derivative, evaluates
//! classical Fisher information and outcome entropy of measurements, audits
//! the entropy bound `S >= ln 2 * F_Q / ||h||^2`, and checks the Cramér-Rao
//! bound by simulation.

pub mod audit;
pub mod error;
pub mod estimation;
pub mod measurement;
pub mod metrology;
pub mod numerics;
pub mod random;
pub mod state_family;

pub use audit::{audit, reproduce_counterexample, sweep_phi, sweep_q, AuditReport};
pub use error::{Error, Result};
pub use estimation::{
    crb_experiment, mle_estimate, sample_outcomes, CrbReport, CrbSettings, SampleRecord,
};
pub use measurement::{
    classical_fisher, outcome_distribution, q_family_measurement, rotated_qubit_measurement,
    shannon_entropy, sld_measurement, MeasurementSpec, OutcomeDistribution, Povm,
};
pub use metrology::{optimal_input_state, qfi, seminorm_bound, sld, QfiReport, SldData};
pub use numerics::{
    hermitian_eig, inner, seminorm, unitary_exp, CMatrix, Complex64, ComplexVector,
    EigenDecomposition, HermitianOperator,
};
pub use state_family::{StateAndDerivative, StateFamily};
