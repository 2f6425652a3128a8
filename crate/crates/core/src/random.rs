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

//! Random operators, states and families for sampling studies.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::numerics::{CMatrix, Complex64, ComplexVector, HermitianOperator};
use crate::state_family::StateFamily;

fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// GUE-distributed Hermitian matrix rescaled to spectral radius one.
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> HermitianOperator {
    let a = CMatrix::from_fn(dim, dim, |_, _| gaussian_complex(rng));
    let h = HermitianOperator::new((&a + a.adjoint()).scale(0.5)).expect("symmetrized matrix");
    let eig = h.eig();
    let radius = eig.min().abs().max(eig.max().abs());
    if radius > 0.0 {
        h.scaled(1.0 / radius)
    } else {
        h
    }
}

/// Haar-random unit vector.
pub fn haar_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexVector {
    loop {
        let v: Vec<Complex64> = (0..dim).map(|_| gaussian_complex(rng)).collect();
        let v = ComplexVector::new(v).expect("dim >= 1");
        let n = v.norm();
        if n > 1e-8 {
            return v.scaled(Complex64::new(1.0 / n, 0.0));
        }
    }
}

/// A Haar-random orthonormal qubit basis.
pub fn haar_qubit_basis<R: Rng + ?Sized>(rng: &mut R) -> [ComplexVector; 2] {
    let v = haar_state(2, rng);
    let (a, b) = (v.entries()[0], v.entries()[1]);
    let w = ComplexVector::new(vec![-b.conj(), a.conj()]).expect("two entries");
    [v, w]
}

/// Random generator paired with a Haar-random input state.
pub fn random_family<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> StateFamily {
    let generator = random_hermitian(dim, rng);
    let input = haar_state(dim, rng);
    StateFamily::new(generator, input).expect("normalized state of matching dimension")
}
