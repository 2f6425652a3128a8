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

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |M - M^dagger| = {deviation:e}, allowed {allowed:e})")]
    NonHermitian { deviation: f64, allowed: f64 },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },

    #[error("vector must have at least one entry")]
    EmptyVector,

    #[error("state is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error("derivative is not tangent to the state (Re <psi|dpsi> = {0:e})")]
    NotTangent(f64),

    #[error("invalid finite-difference step {0:e}")]
    InvalidStep(f64),

    #[error("StationaryState: quantum Fisher information {qfi:e} is too small to define a tangent state")]
    StationaryState { qfi: f64 },

    #[error("DegenerateGenerator: generator has zero seminorm")]
    DegenerateGenerator,

    #[error("InvalidQ: q = {0} is outside [0, 1]")]
    InvalidQ(f64),

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("cannot parse measurement spec {spec:?}: {reason}")]
    MeasurementSpec { spec: String, reason: String },

    #[error("FlatLikelihood: likelihood varies by {spread:e} over the search grid")]
    FlatLikelihood { spread: f64 },

    #[error("invalid search interval ({0}, {1})")]
    InvalidInterval(f64, f64),

    #[error("invalid shot count {0}")]
    InvalidShots(u64),

    #[error("at least two trials are required, got {0}")]
    InvalidTrials(usize),
}
