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

//! Audit of the entropy bound `S >= ln 2 * F_Q / ||h||^2` for a measurement.
//!
//! An optimal measurement in the SLD eigenbasis always has `S = ln 2`, so it
//! never violates the bound. The q-family and rotated qubit measurements are
//! just as optimal (`F = F_Q`), but their entropy goes all the way down to
//! zero, which breaks the bound.

use std::f64::consts::{FRAC_1_SQRT_2, LN_2};
use std::io::{self, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measurement::{
    classical_fisher, outcome_distribution, q_family_measurement, rotated_qubit_measurement,
    shannon_entropy, MeasurementSpec, Povm,
};
use crate::metrology::{qfi, seminorm_bound, sld, EPS_SEMINORM};
use crate::numerics::{check_dims, ComplexVector, HermitianOperator};
use crate::state_family::StateFamily;

/// Absolute margin on the inequality comparison.
pub const TOL_AUDIT: f64 = 1e-9;

/// `|F - F_Q|` below which a measurement counts as optimal.
pub const OPTIMALITY_TOL: f64 = 1e-8;

/// Parameter value used by [`reproduce_counterexample`].
pub const COUNTEREXAMPLE_LAMBDA: f64 = 0.7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditReport {
    /// Outcome entropy in nats.
    pub entropy: f64,
    pub fisher: f64,
    pub qfi: f64,
    pub seminorm_sq: f64,
    /// `ln 2 * qfi / seminorm_sq`
    pub rhs: f64,
    pub violated: bool,
    pub measurement_optimal: bool,
}

impl AuditReport {
    /// Derives the right-hand side and both verdicts from the four scalars.
    pub fn from_scalars(entropy: f64, fisher: f64, qfi: f64, seminorm_sq: f64) -> Self {
        let rhs = LN_2 * qfi / seminorm_sq;
        Self {
            entropy,
            fisher,
            qfi,
            seminorm_sq,
            rhs,
            violated: entropy < rhs - TOL_AUDIT,
            measurement_optimal: (fisher - qfi).abs() <= OPTIMALITY_TOL,
        }
    }
}

fn checked_seminorm_sq(family: &StateFamily) -> Result<f64> {
    let s2 = seminorm_bound(family);
    if s2.sqrt() <= EPS_SEMINORM {
        return Err(Error::DegenerateGenerator);
    }
    Ok(s2)
}

pub fn audit(family: &StateFamily, lambda: f64, povm: &Povm) -> Result<AuditReport> {
    let seminorm_sq = checked_seminorm_sq(family)?;
    let sd = family.derivative(lambda);
    let dist = outcome_distribution(povm, &sd)?;
    let fisher = classical_fisher(povm, &sd)?;
    Ok(AuditReport::from_scalars(
        shannon_entropy(&dist),
        fisher,
        qfi(&sd),
        seminorm_sq,
    ))
}

/// One report per `q`, in grid order.
pub fn sweep_q(family: &StateFamily, lambda: f64, q_grid: &[f64]) -> Result<Vec<AuditReport>> {
    if let Some(&bad) = q_grid.iter().find(|q| !(0.0..=1.0).contains(*q)) {
        return Err(Error::InvalidQ(bad));
    }
    checked_seminorm_sq(family)?;
    let sd = family.derivative(lambda);
    let data = sld(&sd)?;
    q_grid
        .par_iter()
        .map(|&q| {
            let povm = q_family_measurement(&data, sd.state(), q)?;
            audit(family, lambda, &povm)
        })
        .collect()
}

/// One report per rotated qubit measurement angle, in grid order.
pub fn sweep_phi(family: &StateFamily, lambda: f64, phi_grid: &[f64]) -> Result<Vec<AuditReport>> {
    check_dims(2, family.dim())?;
    checked_seminorm_sq(family)?;
    phi_grid
        .par_iter()
        .map(|&phi| audit(family, lambda, &rotated_qubit_measurement(phi)))
        .collect()
}

/// `exp(-i lambda sigma_z / 2) (|0> + |1>)/sqrt(2)`.
pub fn counterexample_family() -> StateFamily {
    let input = ComplexVector::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).expect("two entries");
    StateFamily::new(HermitianOperator::pauli_z().scaled(0.5), input).expect("valid family")
}

/// Audits the single-qubit family at `lambda` with the given measurement.
pub fn counterexample_report(lambda: f64, measurement: MeasurementSpec) -> Result<AuditReport> {
    let family = counterexample_family();
    let povm = measurement.build(&family, lambda)?;
    audit(&family, lambda, &povm)
}

/// The single-qubit counterexample: rotated measurement at `phi = lambda`,
/// which is optimal yet has a certain outcome.
pub fn reproduce_counterexample() -> AuditReport {
    counterexample_report(
        COUNTEREXAMPLE_LAMBDA,
        MeasurementSpec::Rotated {
            phi: COUNTEREXAMPLE_LAMBDA,
        },
    )
    .expect("counterexample family is non-degenerate")
}

/// One comparison of the golden counterexample against its known value.
#[derive(Debug, Clone, PartialEq)]
pub struct GoldenCheck {
    pub name: &'static str,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
}

pub const GOLDEN_TOL: f64 = 1e-9;

/// Compares a counterexample report against `F_Q = ||h||^2 = F = 1`,
/// `S = 0`, `rhs = ln 2` and a violated verdict.
pub fn golden_checks(report: &AuditReport) -> Vec<GoldenCheck> {
    let scalar = |name: &'static str, expected: f64, actual: f64| GoldenCheck {
        name,
        expected: format!("{expected:.17}"),
        actual: format!("{actual:.17}"),
        passed: (actual - expected).abs() <= GOLDEN_TOL,
    };
    vec![
        scalar("qfi", 1.0, report.qfi),
        scalar("seminorm_sq", 1.0, report.seminorm_sq),
        scalar("fisher at phi=lambda", 1.0, report.fisher),
        scalar("entropy", 0.0, report.entropy),
        scalar("rhs", LN_2, report.rhs),
        GoldenCheck {
            name: "violated",
            expected: "true".into(),
            actual: report.violated.to_string(),
            passed: report.violated,
        },
    ]
}

pub const SWEEP_CSV_HEADER: &str =
    "sweep_param,entropy_nats,fisher,qfi,seminorm_sq,rhs,violated,measurement_optimal";

/// Writes one row per grid point with 17 significant digits.
pub fn write_sweep_csv<W: Write>(
    mut out: W,
    grid: &[f64],
    reports: &[AuditReport],
) -> io::Result<()> {
    assert_eq!(grid.len(), reports.len(), "one report per grid point");
    writeln!(out, "{SWEEP_CSV_HEADER}")?;
    for (x, r) in grid.iter().zip(reports) {
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{},{}",
            x, r.entropy, r.fisher, r.qfi, r.seminorm_sq, r.rhs, r.violated, r.measurement_optimal
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measurement::sld_measurement;
    use crate::random::random_family;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn binary_entropy(q: f64) -> f64 {
        let h = |p: f64| if p > 0.0 { -p * p.ln() } else { 0.0 };
        h(q) + h(1.0 - q)
    }

    fn grid(n: usize) -> Vec<f64> {
        (0..n).map(|k| k as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn counterexample_violates() {
        let r = reproduce_counterexample();
        assert_abs_diff_eq!(r.entropy, 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(r.fisher, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(r.qfi, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(r.seminorm_sq, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(r.rhs, LN_2, epsilon = 1e-9);
        assert!(r.violated);
        assert!(r.measurement_optimal);
        assert!(golden_checks(&r).iter().all(|c| c.passed));
    }

    #[test]
    fn sld_and_half_q_do_not_violate() {
        for spec in [MeasurementSpec::Sld, MeasurementSpec::QFamily { q: 0.5 }] {
            let r = counterexample_report(COUNTEREXAMPLE_LAMBDA, spec).unwrap();
            assert_abs_diff_eq!(r.entropy, LN_2, epsilon = 1e-9);
            assert!(!r.violated);
            assert!(r.measurement_optimal);
            assert!(!golden_checks(&r).iter().all(|c| c.passed));
        }
    }

    #[test]
    fn counterexample_is_lambda_independent() {
        let a = reproduce_counterexample();
        let b = counterexample_report(2.1, MeasurementSpec::Rotated { phi: 2.1 }).unwrap();
        for (x, y) in [
            (a.entropy, b.entropy),
            (a.fisher, b.fisher),
            (a.qfi, b.qfi),
            (a.seminorm_sq, b.seminorm_sq),
            (a.rhs, b.rhs),
        ] {
            assert_abs_diff_eq!(x, y, epsilon = 1e-9);
        }
        assert_eq!(a.violated, b.violated);
        assert_eq!(a.measurement_optimal, b.measurement_optimal);
    }

    #[test]
    fn degenerate_generator_is_rejected() {
        let f =
            StateFamily::new(HermitianOperator::identity(2), ComplexVector::basis(2, 0)).unwrap();
        assert_eq!(
            audit(&f, 0.0, &Povm::trivial(2)),
            Err(Error::DegenerateGenerator)
        );
        assert_eq!(sweep_phi(&f, 0.0, &[0.0]), Err(Error::DegenerateGenerator));
    }

    #[test]
    fn stationary_state_propagates_from_sld_measurements() {
        // nonzero seminorm but the input is an eigenstate
        let f = StateFamily::new(HermitianOperator::pauli_z(), ComplexVector::basis(2, 0)).unwrap();
        assert!(matches!(
            sweep_q(&f, 0.0, &[0.5]),
            Err(Error::StationaryState { .. })
        ));
        assert!(matches!(
            MeasurementSpec::Sld.build(&f, 0.0),
            Err(Error::StationaryState { .. })
        ));
    }

    #[test]
    fn sweep_q_endpoints_and_midpoint() {
        let f = counterexample_family();
        let reports = sweep_q(&f, 0.3, &[0.0, 0.5, 1.0]).unwrap();
        let entropies: Vec<f64> = reports.iter().map(|r| r.entropy).collect();
        assert_abs_diff_eq!(entropies[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(entropies[1], LN_2, epsilon = 1e-12);
        assert_abs_diff_eq!(entropies[2], 0.0, epsilon = 1e-12);
        assert!(reports.iter().all(|r| r.measurement_optimal));
        assert_eq!(
            reports.iter().map(|r| r.violated).collect::<Vec<_>>(),
            vec![true, false, true]
        );

        let single = sweep_q(&f, 0.3, &[0.5]).unwrap();
        assert_eq!(single.len(), 1);
        assert!(!single[0].violated);
    }

    #[test]
    fn sweep_q_matches_binary_entropy_and_is_concave() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for dim in [2, 3, 5] {
            let f = random_family(dim, &mut rng);
            let g = grid(21);
            let reports = sweep_q(&f, -0.4, &g).unwrap();
            for (q, r) in g.iter().zip(&reports) {
                assert_abs_diff_eq!(r.entropy, binary_entropy(*q), epsilon = 1e-9);
                assert_abs_diff_eq!(r.fisher, r.qfi, epsilon = 1e-9);
            }
            for w in reports.windows(3) {
                assert!(w[1].entropy >= 0.5 * (w[0].entropy + w[2].entropy) - 1e-12);
            }
            let peak = reports
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.entropy.total_cmp(&b.1.entropy))
                .unwrap()
                .0;
            assert_eq!(peak, 10);
        }
    }

    #[test]
    fn sweep_q_rejects_bad_grid() {
        let f = counterexample_family();
        assert_eq!(sweep_q(&f, 0.0, &[0.2, 1.01]), Err(Error::InvalidQ(1.01)));
    }

    #[test]
    fn sweep_phi_examples() {
        let f = counterexample_family();
        let lambda = 0.9;
        let reports = sweep_phi(&f, lambda, &[lambda, lambda + PI / 2.0, lambda + PI]).unwrap();
        assert!(reports[0].violated);
        assert_abs_diff_eq!(reports[0].entropy, 0.0, epsilon = 1e-12);
        assert!(!reports[1].violated);
        assert_abs_diff_eq!(reports[1].entropy, LN_2, epsilon = 1e-12);
        assert!(reports[2].violated);
        assert_abs_diff_eq!(reports[2].entropy, 0.0, epsilon = 1e-12);

        let grid: Vec<f64> = (0..40).map(|k| k as f64 * 0.16).collect();
        for (phi, r) in grid.iter().zip(sweep_phi(&f, lambda, &grid).unwrap()) {
            assert_abs_diff_eq!(r.fisher, 1.0, epsilon = 1e-8);
            let p = 0.5 * (1.0 + (phi - lambda).cos());
            assert_abs_diff_eq!(r.entropy, binary_entropy(p), epsilon = 1e-9);
            assert_eq!(
                r.violated,
                r.entropy < LN_2 * r.qfi / r.seminorm_sq - TOL_AUDIT
            );
        }
    }

    #[test]
    fn sweep_phi_requires_a_qubit() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = random_family(3, &mut rng);
        assert!(matches!(
            sweep_phi(&f, 0.0, &[0.0]),
            Err(Error::DimMismatch { .. })
        ));
    }

    #[test]
    fn verdicts_are_recomputable() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let f = random_family(3, &mut rng);
            for r in sweep_q(&f, 0.0, &grid(11)).unwrap() {
                assert_eq!(
                    r,
                    AuditReport::from_scalars(r.entropy, r.fisher, r.qfi, r.seminorm_sq)
                );
                assert!(r.rhs <= LN_2 + 1e-12);
            }
        }
    }

    #[test]
    fn sld_basis_never_violates() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut checked = 0;
        while checked < 100 {
            let f = random_family(2 + checked % 7, &mut rng);
            let sd = f.derivative(0.25);
            if qfi(&sd) <= 1e-6 {
                continue;
            }
            let povm = sld_measurement(&sld(&sd).unwrap());
            let r = audit(&f, 0.25, &povm).unwrap();
            assert!(!r.violated);
            assert_abs_diff_eq!(r.entropy, LN_2, epsilon = 1e-9);
            checked += 1;
        }
    }

    #[test]
    fn small_q_violates_when_bound_is_large_enough() {
        let mut rng = ChaCha8Rng::seed_from_u64(123);
        let s_small = binary_entropy(0.01);
        for k in 0..60 {
            let f = random_family(2 + k % 5, &mut rng);
            if qfi(&f.derivative(0.0)) <= 1e-6 {
                continue;
            }
            let r = sweep_q(&f, 0.0, &[0.01]).unwrap()[0];
            if r.rhs > s_small + TOL_AUDIT {
                assert!(r.violated);
            }
        }
    }

    #[test]
    fn csv_layout() {
        let f = counterexample_family();
        let g = [0.0, 0.5];
        let reports = sweep_q(&f, 0.0, &g).unwrap();
        let mut buf = Vec::new();
        write_sweep_csv(&mut buf, &g, &reports).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], SWEEP_CSV_HEADER);
        assert_eq!(lines.len(), 3);
        let fields: Vec<&str> = lines[2].split(',').collect();
        assert_eq!(fields.len(), 8);
        assert_eq!(fields[0], "5.0000000000000000e-1");
        assert_eq!(fields[1].parse::<f64>().unwrap(), reports[1].entropy);
        assert_eq!(fields[6], "false");
        assert_eq!(fields[7], "true");
    }
}
