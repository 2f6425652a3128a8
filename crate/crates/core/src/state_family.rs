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

//! Unitary one-parameter families `lambda -> exp(-i lambda H) |psi>`.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::numerics::{
    check_dims, inner, unitary_from_eig, CMatrix, Complex64, ComplexVector, EigenDecomposition,
    HermitianOperator, I,
};

/// Default central-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Smallest accepted central-difference step.
pub const MIN_FD_STEP: f64 = 1e-12;

/// Allowed deviation of `||psi||` from one.
pub const NORMALIZATION_TOL: f64 = 1e-10;

/// Allowed `|Re <psi|d psi>|` for a state/derivative pair.
pub const TANGENT_OVERLAP_TOL: f64 = 1e-9;

/// A pure-state family generated by a fixed Hermitian operator.
///
/// The generator's eigendecomposition is computed once, so evaluating the
/// family at many parameter values costs one small matrix-vector sum each.
#[derive(Debug, Clone)]
pub struct StateFamily {
    generator: HermitianOperator,
    input_state: ComplexVector,
    spectrum: EigenDecomposition,
    // <v_k|psi> for each generator eigenvector v_k
    amplitudes: Vec<Complex64>,
}

impl StateFamily {
    pub fn new(generator: HermitianOperator, input_state: ComplexVector) -> Result<Self> {
        check_dims(generator.dim(), input_state.dim())?;
        let norm = input_state.norm();
        if (norm - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized { norm });
        }
        let spectrum = generator.eig();
        let amplitudes = spectrum
            .eigenvectors
            .iter()
            .map(|v| v.as_dvector().dotc(input_state.as_dvector()))
            .collect();
        Ok(Self {
            generator,
            input_state,
            spectrum,
            amplitudes,
        })
    }

    /// Same generator, different input state.
    pub fn with_input_state(&self, input_state: ComplexVector) -> Result<Self> {
        Self::new(self.generator.clone(), input_state)
    }

    pub fn dim(&self) -> usize {
        self.generator.dim()
    }

    pub fn generator(&self) -> &HermitianOperator {
        &self.generator
    }

    pub fn input_state(&self) -> &ComplexVector {
        &self.input_state
    }

    pub fn spectrum(&self) -> &EigenDecomposition {
        &self.spectrum
    }

    /// `h_lambda = i U^dagger dU/dlambda`, which for this family is the generator
    /// itself at every `lambda`.
    pub fn generator_h(&self) -> &HermitianOperator {
        &self.generator
    }

    /// `exp(-i lambda H)`.
    pub fn unitary(&self, lambda: f64) -> CMatrix {
        unitary_from_eig(&self.spectrum, lambda)
    }

    pub fn evaluate(&self, lambda: f64) -> ComplexVector {
        let mut out = DVector::zeros(self.dim());
        for ((&e, v), &a) in self
            .spectrum
            .eigenvalues
            .iter()
            .zip(&self.spectrum.eigenvectors)
            .zip(&self.amplitudes)
        {
            out += v.as_dvector() * (a * Complex64::from_polar(1.0, -lambda * e));
        }
        ComplexVector::from_dvector(out)
    }

    /// The state and its analytic derivative `-i H |psi_lambda>`.
    pub fn derivative(&self, lambda: f64) -> StateAndDerivative {
        let state = self.evaluate(lambda);
        let dstate = self
            .generator
            .apply(&state)
            .expect("generator and state share a dimension")
            .scaled(-I);
        StateAndDerivative {
            state,
            dstate,
            lambda,
        }
    }

    /// Central difference `(psi(lambda + step) - psi(lambda - step)) / (2 step)`.
    pub fn finite_difference_derivative(&self, lambda: f64, step: f64) -> Result<ComplexVector> {
        validate_step(step)?;
        let fwd = self.evaluate(lambda + step);
        let back = self.evaluate(lambda - step);
        Ok(fwd.minus(&back)?.scaled(Complex64::new(0.5 / step, 0.0)))
    }

    /// `i U^dagger dU` with `dU` taken by central difference. Cross-check for
    /// [`generator_h`](Self::generator_h).
    pub fn numerical_generator(&self, lambda: f64, step: f64) -> Result<CMatrix> {
        validate_step(step)?;
        let du = (self.unitary(lambda + step) - self.unitary(lambda - step))
            / Complex64::new(2.0 * step, 0.0);
        Ok(self.unitary(lambda).adjoint() * du * I)
    }
}

fn validate_step(step: f64) -> Result<()> {
    if !(step.is_finite() && step >= MIN_FD_STEP) {
        return Err(Error::InvalidStep(step));
    }
    Ok(())
}

/// `|psi_lambda>` together with `|d psi_lambda / d lambda>`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateAndDerivative {
    state: ComplexVector,
    dstate: ComplexVector,
    lambda: f64,
}

impl StateAndDerivative {
    /// Builds a pair from explicit vectors, checking normalization and that
    /// `<psi|d psi>` is purely imaginary.
    pub fn new(state: ComplexVector, dstate: ComplexVector, lambda: f64) -> Result<Self> {
        check_dims(state.dim(), dstate.dim())?;
        let norm = state.norm();
        if (norm - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized { norm });
        }
        let overlap = inner(&state, &dstate)?;
        if overlap.re.abs() > TANGENT_OVERLAP_TOL {
            return Err(Error::NotTangent(overlap.re));
        }
        Ok(Self {
            state,
            dstate,
            lambda,
        })
    }

    pub fn state(&self) -> &ComplexVector {
        &self.state
    }

    pub fn dstate(&self) -> &ComplexVector {
        &self.dstate
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn dim(&self) -> usize {
        self.state.dim()
    }
}
