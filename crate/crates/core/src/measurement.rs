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

//! POVMs, outcome statistics and classical Fisher information.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::metrology::{sld, SldData};
use crate::numerics::{
    check_dims, max_entry_deviation, CMatrix, Complex64, ComplexVector, HermitianOperator,
};
use crate::state_family::{StateAndDerivative, StateFamily};

/// Most negative eigenvalue tolerated in an effect.
pub const PSD_TOL: f64 = -1e-10;

/// Allowed max-entry deviation of `sum(effects)` from the identity.
pub const COMPLETENESS_TOL: f64 = 1e-9;

/// Outcomes at or below this probability use the limiting Fisher term.
pub const EPS_P: f64 = 1e-10;

/// A finite POVM with labelled outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    effects: Vec<HermitianOperator>,
    labels: Vec<String>,
}

impl Povm {
    pub fn new(effects: Vec<HermitianOperator>, labels: Vec<String>) -> Result<Self> {
        let Some(first) = effects.first() else {
            return Err(Error::InvalidPovm("no effects".into()));
        };
        if labels.len() != effects.len() {
            return Err(Error::InvalidPovm(format!(
                "{} labels for {} effects",
                labels.len(),
                effects.len()
            )));
        }
        let dim = first.dim();
        let mut total = CMatrix::zeros(dim, dim);
        for (effect, label) in effects.iter().zip(&labels) {
            check_dims(dim, effect.dim())?;
            let lowest = effect.eig().min();
            if lowest < PSD_TOL {
                return Err(Error::InvalidPovm(format!(
                    "effect {label:?} has negative eigenvalue {lowest:e}"
                )));
            }
            total += effect.matrix();
        }
        let deviation = max_entry_deviation(&total, &CMatrix::identity(dim, dim));
        if deviation > COMPLETENESS_TOL {
            return Err(Error::InvalidPovm(format!(
                "effects sum to identity only within {deviation:e}"
            )));
        }
        Ok(Self { effects, labels })
    }

    /// Single-outcome measurement `{1}`; carries no information.
    pub fn trivial(dim: usize) -> Self {
        Self {
            effects: vec![HermitianOperator::identity(dim)],
            labels: vec!["1".into()],
        }
    }

    /// Projective measurement onto an orthonormal basis.
    pub fn from_basis(basis: &[ComplexVector]) -> Result<Self> {
        let effects = basis.iter().map(HermitianOperator::projector).collect();
        let labels = (0..basis.len()).map(|i| i.to_string()).collect();
        Self::new(effects, labels)
    }

    pub fn dim(&self) -> usize {
        self.effects[0].dim()
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn effects(&self) -> &[HermitianOperator] {
        &self.effects
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `<psi|E|psi>` per effect, clamped to `[0, 1]`.
    pub fn probabilities(&self, state: &ComplexVector) -> Result<Vec<f64>> {
        check_dims(self.dim(), state.dim())?;
        self.effects
            .iter()
            .map(|e| Ok(e.expectation(state)?.clamp(0.0, 1.0)))
            .collect()
    }
}

/// Outcome probabilities and their parameter derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    pub labels: Vec<String>,
    pub probs: Vec<f64>,
    pub dprobs: Vec<f64>,
}

pub fn outcome_distribution(povm: &Povm, sd: &StateAndDerivative) -> Result<OutcomeDistribution> {
    check_dims(povm.dim(), sd.dim())?;
    let mut probs = Vec::with_capacity(povm.len());
    let mut dprobs = Vec::with_capacity(povm.len());
    for effect in povm.effects() {
        probs.push(effect.expectation(sd.state())?.clamp(0.0, 1.0));
        dprobs.push(2.0 * effect.sandwich(sd.dstate(), sd.state())?.re);
    }
    Ok(OutcomeDistribution {
        labels: povm.labels().to_vec(),
        probs,
        dprobs,
    })
}

/// Classical Fisher information `sum (dp)^2 / p`.
///
/// An outcome with `p <= EPS_P` contributes its limiting value
/// `4 <dpsi|E|dpsi>`: near such a point `p ~ d^2 <dpsi|E|dpsi>` and
/// `dp ~ 2 d <dpsi|E|dpsi>`, so the ratio stays finite. Dropping these terms
/// instead would report zero information for optimal measurements whose
/// outcome is certain.
pub fn classical_fisher(povm: &Povm, sd: &StateAndDerivative) -> Result<f64> {
    check_dims(povm.dim(), sd.dim())?;
    let mut total = 0.0;
    for effect in povm.effects() {
        let p = effect.expectation(sd.state())?;
        if p > EPS_P {
            let dp = 2.0 * effect.sandwich(sd.dstate(), sd.state())?.re;
            total += dp * dp / p;
        } else {
            total += 4.0 * effect.expectation(sd.dstate())?.max(0.0);
        }
    }
    Ok(total)
}

/// `-sum p ln p` in nats, with `0 ln 0 = 0`.
pub fn entropy(probs: &[f64]) -> f64 {
    let s: f64 = probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.ln())
        .sum();
    s.max(0.0)
}

pub fn shannon_entropy(dist: &OutcomeDistribution) -> f64 {
    entropy(&dist.probs)
}

fn complement(dim: usize, a: &HermitianOperator, b: &HermitianOperator) -> HermitianOperator {
    HermitianOperator::identity(dim)
        .minus(a)
        .and_then(|r| r.minus(b))
        .expect("same dimension")
}

fn two_outcome(first: &ComplexVector, second: &ComplexVector, names: [&str; 2]) -> Result<Povm> {
    let dim = first.dim();
    let p1 = HermitianOperator::projector(first);
    let p2 = HermitianOperator::projector(second);
    let mut labels = vec![names[0].to_string(), names[1].to_string()];
    let mut effects = vec![p1, p2];
    if dim > 2 {
        effects.push(complement(dim, &effects[0], &effects[1]));
        labels.push("rest".into());
    }
    Povm::new(effects, labels)
}

/// Projectors onto the SLD eigenstates `|+>, |->`, plus one lumped
/// complement effect when `dim > 2`.
pub fn sld_measurement(sldd: &SldData) -> Povm {
    two_outcome(sldd.plus_state(), sldd.minus_state(), ["+", "-"])
        .expect("SLD eigenstates are orthonormal")
}

/// Projectors onto `|q> = sqrt(q)|psi> + sqrt(1-q)|psi_perp>` and
/// `|q_bar> = sqrt(1-q)|psi> - sqrt(q)|psi_perp>`.
pub fn q_family_measurement(sldd: &SldData, state: &ComplexVector, q: f64) -> Result<Povm> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::InvalidQ(q));
    }
    check_dims(sldd.dim(), state.dim())?;
    let r = |x: f64| Complex64::new(x, 0.0);
    let (a, b) = (q.sqrt(), (1.0 - q).sqrt());
    let tangent = sldd.tangent();
    let ket_q = state.scaled(r(a)).plus(&tangent.scaled(r(b)))?;
    let ket_q_bar = state.scaled(r(b)).minus(&tangent.scaled(r(a)))?;
    two_outcome(&ket_q, &ket_q_bar, ["q", "q_bar"])
}

/// Qubit projectors onto `(|0> +- e^{i phi}|1>)/sqrt(2)`, the eigenbasis of
/// `cos(phi) sigma_x + sin(phi) sigma_y`.
pub fn rotated_qubit_measurement(phi: f64) -> Povm {
    let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let w = Complex64::from_polar(FRAC_1_SQRT_2, phi);
    let plus = ComplexVector::new(vec![s, w]).expect("two entries");
    let minus = ComplexVector::new(vec![s, -w]).expect("two entries");
    two_outcome(&plus, &minus, ["+", "-"]).expect("orthonormal qubit basis")
}

/// A named measurement constructor, as written in configs:
/// `sld`, `q_family:q=0.3` or `rotated:phi=1.57`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeasurementSpec {
    Sld,
    QFamily { q: f64 },
    Rotated { phi: f64 },
}

impl MeasurementSpec {
    /// Builds the POVM for `family` at `lambda`.
    pub fn build(&self, family: &StateFamily, lambda: f64) -> Result<Povm> {
        match *self {
            MeasurementSpec::Sld => {
                let sd = family.derivative(lambda);
                Ok(sld_measurement(&sld(&sd)?))
            }
            MeasurementSpec::QFamily { q } => {
                if !(0.0..=1.0).contains(&q) {
                    return Err(Error::InvalidQ(q));
                }
                let sd = family.derivative(lambda);
                q_family_measurement(&sld(&sd)?, sd.state(), q)
            }
            MeasurementSpec::Rotated { phi } => {
                check_dims(2, family.dim())?;
                Ok(rotated_qubit_measurement(phi))
            }
        }
    }
}

impl fmt::Display for MeasurementSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasurementSpec::Sld => write!(f, "sld"),
            MeasurementSpec::QFamily { q } => write!(f, "q_family:q={q}"),
            MeasurementSpec::Rotated { phi } => write!(f, "rotated:phi={phi}"),
        }
    }
}

impl FromStr for MeasurementSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let fail = |reason: &str| Error::MeasurementSpec {
            spec: s.to_string(),
            reason: reason.to_string(),
        };
        let (name, args) = match s.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a.trim())),
            None => (s.trim(), None),
        };
        let param = |key: &str| -> Result<f64> {
            let args = args.ok_or_else(|| fail(&format!("missing {key}=<value>")))?;
            let (k, v) = args
                .split_once('=')
                .ok_or_else(|| fail(&format!("expected {key}=<value>")))?;
            if k.trim() != key {
                return Err(fail(&format!("unknown parameter {:?}", k.trim())));
            }
            let value: f64 = v
                .trim()
                .parse()
                .map_err(|_| fail("value is not a number"))?;
            if !value.is_finite() {
                return Err(fail("value is not finite"));
            }
            Ok(value)
        };
        match name {
            "sld" if args.is_none() => Ok(MeasurementSpec::Sld),
            "sld" => Err(fail("sld takes no parameters")),
            "q_family" => {
                let q = param("q")?;
                if !(0.0..=1.0).contains(&q) {
                    return Err(Error::InvalidQ(q));
                }
                Ok(MeasurementSpec::QFamily { q })
            }
            "rotated" => Ok(MeasurementSpec::Rotated { phi: param("phi")? }),
            _ => Err(fail("unknown constructor")),
        }
    }
}
