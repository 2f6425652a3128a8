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

//! Quantum Fisher information and the symmetric logarithmic derivative of a
//! pure-state family.
//!
//! For a pure state the SLD `L = 2|psi><dpsi| + 2|dpsi><psi|` lives on the
//! two-dimensional span of `|psi>` and the tangent state
//! `|psi_perp> = N (1 - |psi><psi|) |dpsi>`, where it acts as
//! `(2/N)(|psi><psi_perp| + |psi_perp><psi|)`. Its nonzero eigenvalues are
//! `+-2/N` with eigenvectors `(|psi> +- |psi_perp>)/sqrt(2)`, and
//! `F_Q = 4/N^2`.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::numerics::{inner, Complex64, ComplexVector, HermitianOperator};
use crate::state_family::{StateAndDerivative, StateFamily};

/// Below this QFI the tangent direction is numerically meaningless.
pub const EPS_QFI: f64 = 1e-12;

/// Generators with a smaller seminorm are treated as having none.
pub const EPS_SEMINORM: f64 = 1e-12;

/// `F_Q = 4 <dpsi|dpsi> - 4 |<dpsi|psi>|^2`, clamped at zero.
pub fn qfi(sd: &StateAndDerivative) -> f64 {
    let dd = inner(sd.dstate(), sd.dstate())
        .expect("pair shares a dimension")
        .re;
    let overlap = inner(sd.dstate(), sd.state()).expect("pair shares a dimension");
    (4.0 * (dd - overlap.norm_sqr())).max(0.0)
}

/// The SLD together with its two-dimensional eigenstructure.
#[derive(Debug, Clone, PartialEq)]
pub struct SldData {
    sld: HermitianOperator,
    tangent: ComplexVector,
    normalization: f64,
    plus_state: ComplexVector,
    minus_state: ComplexVector,
}

impl SldData {
    pub fn sld(&self) -> &HermitianOperator {
        &self.sld
    }

    /// `|psi_perp>`, orthogonal to the state and normalized.
    pub fn tangent(&self) -> &ComplexVector {
        &self.tangent
    }

    /// `N = 1 / sqrt(<dpsi|dpsi> - |<dpsi|psi>|^2)`.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn plus_state(&self) -> &ComplexVector {
        &self.plus_state
    }

    pub fn minus_state(&self) -> &ComplexVector {
        &self.minus_state
    }

    pub fn eigenvalue_plus(&self) -> f64 {
        2.0 / self.normalization
    }

    pub fn eigenvalue_minus(&self) -> f64 {
        -2.0 / self.normalization
    }

    pub fn dim(&self) -> usize {
        self.tangent.dim()
    }
}

/// Builds the SLD of a pure state.
///
/// Fails with [`Error::StationaryState`] when `F_Q <= EPS_QFI`, since the
/// tangent state is then undefined.
pub fn sld(sd: &StateAndDerivative) -> Result<SldData> {
    let fq = qfi(sd);
    if fq <= EPS_QFI {
        return Err(Error::StationaryState { qfi: fq });
    }
    let psi = sd.state();
    let dpsi = sd.dstate();
    let a = inner(psi, dpsi)?;
    let variance = inner(dpsi, dpsi)?.re - a.norm_sqr();
    let normalization = 1.0 / variance.sqrt();

    // Tangent keeps the phase of (1 - |psi><psi|)|dpsi>.
    let tangent = dpsi
        .minus(&psi.scaled(a))?
        .scaled(Complex64::new(normalization, 0.0));

    let two = Complex64::new(2.0, 0.0);
    let matrix = (psi.outer(dpsi) + dpsi.outer(psi)) * two;
    let sld = HermitianOperator::new(matrix)?;

    let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let plus_state = psi.plus(&tangent)?.scaled(s);
    let minus_state = psi.minus(&tangent)?.scaled(s);

    Ok(SldData {
        sld,
        tangent,
        normalization,
        plus_state,
        minus_state,
    })
}

/// `||h||^2`, the largest QFI any input state can reach under this generator.
pub fn seminorm_bound(family: &StateFamily) -> f64 {
    let spectrum = family.spectrum();
    let s = (spectrum.max() - spectrum.min()).max(0.0);
    s * s
}

/// The input state `(|e_max> + |e_min>)/sqrt(2)` that saturates
/// [`seminorm_bound`].
///
/// Within a degenerate extreme eigenspace the lowest-index eigenvector wins.
pub fn optimal_input_state(family: &StateFamily) -> Result<ComplexVector> {
    let spectrum = family.spectrum();
    let (lo, hi) = (spectrum.min(), spectrum.max());
    if hi - lo <= EPS_SEMINORM {
        return Err(Error::DegenerateGenerator);
    }
    let tie = EPS_SEMINORM * (1.0 + hi.abs().max(lo.abs()));
    let i_max = spectrum
        .eigenvalues
        .iter()
        .position(|&e| e >= hi - tie)
        .expect("max is attained");
    let v_min = &spectrum.eigenvectors[0];
    let v_max = &spectrum.eigenvectors[i_max];
    Ok(v_max
        .plus(v_min)?
        .scaled(Complex64::new(FRAC_1_SQRT_2, 0.0)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QfiReport {
    pub qfi: f64,
    pub seminorm_sq: f64,
    /// `qfi / seminorm_sq`, absent when the seminorm vanishes.
    pub ratio: Option<f64>,
}

pub fn qfi_report(family: &StateFamily, lambda: f64) -> QfiReport {
    let qfi = qfi(&family.derivative(lambda));
    let seminorm_sq = seminorm_bound(family);
    let ratio = (seminorm_sq.sqrt() > EPS_SEMINORM).then(|| qfi / seminorm_sq);
    QfiReport {
        qfi,
        seminorm_sq,
        ratio,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{max_abs_entry, CMatrix};
    use crate::random::{haar_state, random_family};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn qubit_family() -> StateFamily {
        let input = ComplexVector::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap();
        StateFamily::new(HermitianOperator::pauli_z().scaled(0.5), input).unwrap()
    }

    /// Oracle: 4 Var(H) in the input state.
    fn variance_qfi(family: &StateFamily) -> f64 {
        let psi = family.input_state();
        let h = family.generator();
        let mean = h.expectation(psi).unwrap();
        let h2 = HermitianOperator::new(h.matrix() * h.matrix()).unwrap();
        4.0 * (h2.expectation(psi).unwrap() - mean * mean)
    }

    #[test]
    fn qubit_family_has_unit_qfi() {
        let f = qubit_family();
        for lambda in [0.0, 0.7, 2.1] {
            assert_abs_diff_eq!(qfi(&f.derivative(lambda)), 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn stationary_state_has_zero_qfi() {
        let psi = ComplexVector::basis(2, 0);
        let sd = StateAndDerivative::new(psi, ComplexVector::zeros(2), 0.0).unwrap();
        assert_eq!(qfi(&sd), 0.0);
        assert!(matches!(sld(&sd), Err(Error::StationaryState { .. })));
    }

    #[test]
    fn tilted_input_qfi_is_sin_squared() {
        let theta = PI / 8.0;
        let input = ComplexVector::from_real(&[theta.cos(), theta.sin()]).unwrap();
        let f = StateFamily::new(HermitianOperator::pauli_z().scaled(0.5), input).unwrap();
        let got = qfi(&f.derivative(0.3));
        assert_abs_diff_eq!(got, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(got, variance_qfi(&f), epsilon = 1e-15);
    }

    #[test]
    fn qubit_sld_at_zero() {
        let sd = qubit_family().derivative(0.0);
        let data = sld(&sd).unwrap();
        assert_abs_diff_eq!(data.normalization(), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(data.eigenvalue_plus(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(data.eigenvalue_minus(), -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(4.0 / data.normalization().powi(2), 1.0, epsilon = 1e-15);

        // Oracle: diagonalize the assembled matrix independently.
        let eig = data.sld().eig();
        assert_abs_diff_eq!(eig.eigenvalues[0], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eig.eigenvalues[1], 1.0, epsilon = 1e-12);
        let overlap_plus = inner(&eig.eigenvectors[1], data.plus_state())
            .unwrap()
            .norm();
        let overlap_minus = inner(&eig.eigenvectors[0], data.minus_state())
            .unwrap()
            .norm();
        assert_abs_diff_eq!(overlap_plus, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(overlap_minus, 1.0, epsilon = 1e-12);

        // |psi_perp> = -i sigma_z |+> at lambda = 0
        let expected = ComplexVector::new(vec![
            Complex64::new(0.0, -FRAC_1_SQRT_2),
            Complex64::new(0.0, FRAC_1_SQRT_2),
        ])
        .unwrap();
        assert!(data.tangent().distance(&expected) < 1e-15);
    }

    #[test]
    fn seminorm_bound_examples() {
        assert_abs_diff_eq!(seminorm_bound(&qubit_family()), 1.0, epsilon = 1e-15);
        let psi = ComplexVector::basis(3, 0);
        let id = StateFamily::new(HermitianOperator::identity(3), psi.clone()).unwrap();
        assert_eq!(seminorm_bound(&id), 0.0);
        let d = HermitianOperator::from_real_diagonal(&[3.0, 1.0, 0.0]).unwrap();
        assert_eq!(seminorm_bound(&StateFamily::new(d, psi).unwrap()), 9.0);
    }

    #[test]
    fn optimal_input_for_qubit() {
        let best = optimal_input_state(&qubit_family()).unwrap();
        let expected = ComplexVector::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap();
        assert!(best.distance(&expected) < 1e-15);
    }

    #[test]
    fn optimal_input_for_degenerate_generator() {
        let id =
            StateFamily::new(HermitianOperator::identity(2), ComplexVector::basis(2, 0)).unwrap();
        assert_eq!(optimal_input_state(&id), Err(Error::DegenerateGenerator));
    }

    #[test]
    fn optimal_input_for_diag_310() {
        let d = HermitianOperator::from_real_diagonal(&[3.0, 1.0, 0.0]).unwrap();
        let f = StateFamily::new(d, ComplexVector::basis(3, 1)).unwrap();
        let best = optimal_input_state(&f).unwrap();
        let expected = ComplexVector::from_real(&[FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2]).unwrap();
        assert!(best.distance(&expected) < 1e-15);
        let g = f.with_input_state(best).unwrap();
        assert_abs_diff_eq!(qfi(&g.derivative(0.4)), 9.0, epsilon = 1e-12);
        assert_abs_diff_eq!(variance_qfi(&g), 9.0, epsilon = 1e-12);
    }

    #[test]
    fn degenerate_extremes_take_lowest_index() {
        // spectrum {-1, -1, 2, 2}: e_min -> e_0, e_max -> e_2
        let d = HermitianOperator::from_real_diagonal(&[-1.0, -1.0, 2.0, 2.0]).unwrap();
        let f = StateFamily::new(d, ComplexVector::basis(4, 0)).unwrap();
        let best = optimal_input_state(&f).unwrap();
        let g = f.with_input_state(best.clone()).unwrap();
        assert_abs_diff_eq!(qfi(&g.derivative(0.0)), 9.0, epsilon = 1e-12);
        assert_eq!(best, optimal_input_state(&f).unwrap());
    }

    #[test]
    fn report_ratio() {
        let r = qfi_report(&qubit_family(), 0.2);
        assert_abs_diff_eq!(r.ratio.unwrap(), 1.0, epsilon = 1e-15);
        let id =
            StateFamily::new(HermitianOperator::identity(2), ComplexVector::basis(2, 0)).unwrap();
        assert_eq!(qfi_report(&id, 0.0).ratio, None);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn sld_structure(dim in 2usize..=8, seed in any::<u64>(), lambda in -3.0..3.0f64) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = random_family(dim, &mut rng);
            let sd = f.derivative(lambda);
            let fq = qfi(&sd);
            prop_assume!(fq > 1e-6);
            let data = sld(&sd).unwrap();
            let psi = sd.state();

            prop_assert!((fq - 4.0 / data.normalization().powi(2)).abs() < 1e-9);
            prop_assert!(inner(psi, data.tangent()).unwrap().norm() < 1e-9);
            prop_assert!((data.tangent().norm() - 1.0).abs() < 1e-9);
            prop_assert!(data.sld().expectation(psi).unwrap().abs() < 1e-9);

            let lp = data.sld().apply(data.plus_state()).unwrap();
            let lm = data.sld().apply(data.minus_state()).unwrap();
            let c = |x: f64| Complex64::new(x, 0.0);
            prop_assert!(lp.distance(&data.plus_state().scaled(c(data.eigenvalue_plus()))) < 1e-8);
            prop_assert!(lm.distance(&data.minus_state().scaled(c(data.eigenvalue_minus()))) < 1e-8);

            // rank two: everything but the two extremes vanishes
            let eig = data.sld().eig();
            prop_assert!((eig.min() - data.eigenvalue_minus()).abs() < 1e-8);
            prop_assert!((eig.max() - data.eigenvalue_plus()).abs() < 1e-8);
            for &e in &eig.eigenvalues[1..dim - 1] {
                prop_assert!(e.abs() < 1e-8);
            }

            // <L^2> = F_Q
            let l = data.sld().matrix();
            let l2 = HermitianOperator::new(l * l).unwrap();
            prop_assert!((l2.expectation(psi).unwrap() - fq).abs() < 1e-9);

            for pm in [data.plus_state(), data.minus_state()] {
                prop_assert!((inner(psi, pm).unwrap().norm_sqr() - 0.5).abs() < 1e-9);
            }
        }

        #[test]
        fn qfi_is_lambda_independent(dim in 2usize..=8, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = random_family(dim, &mut rng);
            let q0 = qfi(&f.derivative(0.0));
            prop_assert!((q0 - variance_qfi(&f)).abs() < 1e-9);
            for k in 1..=12 {
                let lambda = -6.0 + k as f64;
                prop_assert!((qfi(&f.derivative(lambda)) - q0).abs() < 1e-9);
            }
        }

        #[test]
        fn sld_matrix_is_explicit(dim in 2usize..=6, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = random_family(dim, &mut rng);
            let sd = f.derivative(0.5);
            prop_assume!(qfi(&sd) > 1e-6);
            let data = sld(&sd).unwrap();
            // (2/N)(|psi><perp| + |perp><psi|) matches the 2|psi><dpsi| + 2|dpsi><psi| assembly
            let two_over_n = Complex64::new(2.0 / data.normalization(), 0.0);
            let alt: CMatrix = (sd.state().outer(data.tangent()) + data.tangent().outer(sd.state())) * two_over_n;
            prop_assert!(max_abs_entry(&(alt - data.sld().matrix())) < 1e-9);
        }
    }

    #[test]
    fn seminorm_bound_on_random_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for dim in 2..=8 {
            let f = random_family(dim, &mut rng);
            let bound = seminorm_bound(&f);
            for _ in 0..200 {
                let g = f.with_input_state(haar_state(dim, &mut rng)).unwrap();
                assert!(qfi(&g.derivative(0.0)) <= bound + 1e-9);
            }
            let best = f
                .with_input_state(optimal_input_state(&f).unwrap())
                .unwrap();
            assert_abs_diff_eq!(qfi(&best.derivative(1.0)), bound, epsilon = 1e-9);
        }
    }
}
