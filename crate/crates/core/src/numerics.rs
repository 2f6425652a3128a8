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

//! Dense complex linear algebra for small Hilbert spaces.
//!
//! Everything here assumes dimensions of a few dozen at most. Operators are
//! stored densely and the Hermitian eigensolver is the workhorse for the
//! matrix exponential, the seminorm and the SLD eigenbasis checks.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
pub use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Relative tolerance for the Hermiticity check, against the largest entry.
pub const HERMITICITY_TOL: f64 = 1e-12;

const PHASE_THRESHOLD: f64 = 1e-12;

pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

/// A finite-dimensional complex vector. Not required to be normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector(DVector<Complex64>);

impl ComplexVector {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyVector);
        }
        Ok(Self(DVector::from_vec(entries)))
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// The computational basis vector `e_index`.
    ///
    /// Panics if `index >= dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(
            index < dim,
            "basis index {index} out of range for dim {dim}"
        );
        let mut v = DVector::zeros(dim);
        v[index] = Complex64::new(1.0, 0.0);
        Self(v)
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        Self(DVector::zeros(dim))
    }

    pub(crate) fn from_dvector(v: DVector<Complex64>) -> Self {
        debug_assert!(!v.is_empty());
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        self.0.as_slice()
    }

    pub fn as_dvector(&self) -> &DVector<Complex64> {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self(&self.0 * factor)
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self(&self.0 + &other.0))
    }

    pub fn minus(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self(&self.0 - &other.0))
    }

    /// The outer product `|self><other|`.
    pub fn outer(&self, other: &Self) -> CMatrix {
        &self.0 * other.0.adjoint()
    }

    /// Euclidean distance to `other`; `f64::INFINITY` on dimension mismatch.
    pub fn distance(&self, other: &Self) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        (&self.0 - &other.0).norm()
    }
}

impl TryFrom<DVector<Complex64>> for ComplexVector {
    type Error = Error;

    fn try_from(v: DVector<Complex64>) -> Result<Self> {
        if v.is_empty() {
            return Err(Error::EmptyVector);
        }
        Ok(Self(v))
    }
}

pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimMismatch { expected, found })
    }
}

/// `<a|b>`, conjugate-linear in `a`.
pub fn inner(a: &ComplexVector, b: &ComplexVector) -> Result<Complex64> {
    check_dims(a.dim(), b.dim())?;
    Ok(a.0.dotc(&b.0))
}

/// Largest absolute entry of a complex matrix.
pub fn max_abs_entry(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest absolute entry of `a - b`.
pub fn max_entry_deviation(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    max_abs_entry(&(a - b))
}

/// A Hermitian matrix, checked on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: CMatrix,
}

impl HermitianOperator {
    /// Validates Hermiticity to a relative tolerance and stores the exactly
    /// symmetrized matrix `(M + M^dagger) / 2`.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let (rows, cols) = matrix.shape();
        if rows != cols || rows == 0 {
            return Err(Error::NotSquare { rows, cols });
        }
        let adjoint = matrix.adjoint();
        let deviation = max_entry_deviation(&matrix, &adjoint);
        let allowed = HERMITICITY_TOL * max_abs_entry(&matrix);
        if deviation > allowed {
            return Err(Error::NonHermitian { deviation, allowed });
        }
        let matrix = (&matrix + adjoint).scale(0.5);
        Ok(Self { matrix })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::NotSquare {
                rows: n,
                cols: bad.len(),
            });
        }
        Self::new(CMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::NotSquare { rows: 0, cols: 0 });
        }
        let d = DVector::from_iterator(diag.len(), diag.iter().map(|&x| Complex64::new(x, 0.0)));
        Ok(Self {
            matrix: CMatrix::from_diagonal(&d),
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: CMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            matrix: CMatrix::zeros(dim, dim),
        }
    }

    pub fn pauli_x() -> Self {
        let (o, l) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        Self {
            matrix: CMatrix::from_row_slice(2, 2, &[o, l, l, o]),
        }
    }

    pub fn pauli_y() -> Self {
        let o = Complex64::new(0.0, 0.0);
        Self {
            matrix: CMatrix::from_row_slice(2, 2, &[o, -I, I, o]),
        }
    }

    pub fn pauli_z() -> Self {
        Self::from_real_diagonal(&[1.0, -1.0]).expect("non-empty diagonal")
    }

    /// The rank-one projector `|v><v| / <v|v>`.
    pub fn projector(v: &ComplexVector) -> Self {
        let n2 = v.norm().powi(2);
        Self {
            matrix: v.outer(v).unscale(n2),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            matrix: self.matrix.scale(factor),
        }
    }

    /// `self + shift * I`.
    pub fn shifted(&self, shift: f64) -> Self {
        let n = self.dim();
        Self {
            matrix: &self.matrix + CMatrix::identity(n, n).scale(shift),
        }
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self {
            matrix: &self.matrix + &other.matrix,
        })
    }

    pub fn minus(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self {
            matrix: &self.matrix - &other.matrix,
        })
    }

    pub fn apply(&self, v: &ComplexVector) -> Result<ComplexVector> {
        check_dims(self.dim(), v.dim())?;
        Ok(ComplexVector(&self.matrix * &v.0))
    }

    /// `<a|M|b>`.
    pub fn sandwich(&self, a: &ComplexVector, b: &ComplexVector) -> Result<Complex64> {
        check_dims(self.dim(), a.dim())?;
        check_dims(self.dim(), b.dim())?;
        Ok(a.0.dotc(&(&self.matrix * &b.0)))
    }

    /// `<v|M|v>`, real for Hermitian `M`.
    pub fn expectation(&self, v: &ComplexVector) -> Result<f64> {
        Ok(self.sandwich(v, v)?.re)
    }

    pub fn eig(&self) -> EigenDecomposition {
        hermitian_eig(self)
    }

    pub fn seminorm(&self) -> f64 {
        seminorm(self)
    }
}

/// Eigenpairs of a Hermitian operator, eigenvalues ascending.
///
/// Each eigenvector has its first non-negligible component real and positive.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<ComplexVector>,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[self.dim() - 1]
    }

    /// `sum_i f(e_i) |v_i><v_i|`.
    pub fn spectral_map(&self, f: impl Fn(f64) -> Complex64) -> CMatrix {
        let n = self.dim();
        let mut out = CMatrix::zeros(n, n);
        for (&e, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            out += v.outer(v) * f(e);
        }
        out
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.spectral_map(|e| Complex64::new(e, 0.0))
    }

    /// Worst `||M v_i - e_i v_i|| / (1 + |e_i|)` over all eigenpairs.
    pub fn max_residual(&self, op: &HermitianOperator) -> f64 {
        self.eigenvalues
            .iter()
            .zip(&self.eigenvectors)
            .map(|(&e, v)| {
                let mv = op.matrix() * v.as_dvector();
                (mv - v.as_dvector() * Complex64::new(e, 0.0)).norm() / (1.0 + e.abs())
            })
            .fold(0.0, f64::max)
    }

    /// Worst `|<v_i|v_j> - delta_ij|`.
    pub fn max_orthonormality_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.eigenvectors.iter().enumerate() {
            for (j, b) in self.eigenvectors.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                let overlap = a.as_dvector().dotc(b.as_dvector());
                worst = worst.max((overlap - Complex64::new(target, 0.0)).norm());
            }
        }
        worst
    }
}

fn fix_phase(mut v: DVector<Complex64>) -> DVector<Complex64> {
    if let Some(&c) = v.iter().find(|c| c.norm() > PHASE_THRESHOLD) {
        let rotation = c.conj() / c.norm();
        v *= rotation;
    }
    let n = v.norm();
    v.unscale(n)
}

pub fn hermitian_eig(op: &HermitianOperator) -> EigenDecomposition {
    let eig = SymmetricEigen::new(op.matrix.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors = order
        .iter()
        .map(|&k| ComplexVector(fix_phase(eig.eigenvectors.column(k).into_owned())))
        .collect();
    EigenDecomposition {
        eigenvalues,
        eigenvectors,
    }
}

/// `exp(-i * lambda * H)` assembled from an existing eigendecomposition of `H`.
pub fn unitary_from_eig(eig: &EigenDecomposition, lambda: f64) -> CMatrix {
    eig.spectral_map(|e| Complex64::from_polar(1.0, -lambda * e))
}

/// `exp(-i * lambda * gen)` via the eigendecomposition of `gen`.
pub fn unitary_exp(gen: &HermitianOperator, lambda: f64) -> CMatrix {
    unitary_from_eig(&gen.eig(), lambda)
}

/// Difference between the largest and smallest eigenvalue.
pub fn seminorm(op: &HermitianOperator) -> f64 {
    let eig = op.eig();
    (eig.max() - eig.min()).max(0.0)
}
