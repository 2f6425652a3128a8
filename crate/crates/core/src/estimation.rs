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

//! Monte-Carlo check of the Cramér-Rao bound with a maximum-likelihood
//! estimator.

use std::f64::consts::FRAC_PI_2;
use std::io::{self, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measurement::{classical_fisher, Povm};
use crate::numerics::check_dims;
use crate::state_family::StateFamily;

/// Points in the coarse likelihood scan.
pub const GRID_POINTS: usize = 256;

/// Probabilities are floored here before taking logs.
pub const PROB_FLOOR: f64 = 1e-300;

/// A likelihood whose spread over the grid is below this is uninformative.
pub const FLAT_TOL: f64 = 1e-14;

/// Golden-section stopping width relative to the search interval.
pub const REFINE_REL_TOL: f64 = 1e-10;

/// Outcome counts from `n` shots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleRecord {
    pub counts: Vec<u64>,
    pub n: u64,
    pub seed: u64,
}

/// Draws `n` outcomes of `povm` on the family at `true_lambda`.
///
/// The multinomial draw is a chain of conditional binomials on a ChaCha8
/// stream seeded with `seed`.
pub fn sample_outcomes(
    povm: &Povm,
    family: &StateFamily,
    true_lambda: f64,
    n: u64,
    seed: u64,
) -> Result<SampleRecord> {
    if n == 0 {
        return Err(Error::InvalidShots(n));
    }
    check_dims(povm.dim(), family.dim())?;
    let probs = povm.probabilities(&family.evaluate(true_lambda))?;
    let total: f64 = probs.iter().sum();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0; probs.len()];
    let mut remaining = n;
    let mut mass_left = 1.0;
    let last = probs.len() - 1;
    for (k, &p) in probs.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        if k == last {
            counts[k] = remaining;
            break;
        }
        let p = p / total;
        let conditional = if mass_left > 0.0 {
            (p / mass_left).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let draw = Binomial::new(remaining, conditional)
            .expect("probability in [0, 1]")
            .sample(&mut rng);
        counts[k] = draw;
        remaining -= draw;
        mass_left -= p;
    }
    Ok(SampleRecord { counts, n, seed })
}

/// `sum_a counts_a ln p_a(lambda)` with probabilities floored at
/// [`PROB_FLOOR`].
pub fn log_likelihood(family: &StateFamily, povm: &Povm, counts: &[u64], lambda: f64) -> f64 {
    let probs = povm
        .probabilities(&family.evaluate(lambda))
        .expect("dimensions checked by caller");
    counts
        .iter()
        .zip(probs)
        .filter(|(&c, _)| c > 0)
        .map(|(&c, p)| c as f64 * p.max(PROB_FLOOR).ln())
        .sum()
}

fn validate_interval((lo, hi): (f64, f64)) -> Result<()> {
    if lo.is_finite() && hi.is_finite() && hi > lo {
        Ok(())
    } else {
        Err(Error::InvalidInterval(lo, hi))
    }
}

/// `(lambda - pi/2, lambda + pi/2)`, on which periodic qubit likelihoods are
/// unimodal.
pub fn default_interval(true_lambda: f64) -> (f64, f64) {
    (true_lambda - FRAC_PI_2, true_lambda + FRAC_PI_2)
}

/// Maximum-likelihood estimate of lambda on `interval`.
///
/// A 256-point scan picks the best grid point (ties go to the one nearest the
/// interval midpoint), then golden-section search refines between its
/// neighbours. The interval should hold a single likelihood peak; several
/// periods of a periodic family make the result depend on the scan.
pub fn mle_estimate(
    family: &StateFamily,
    povm: &Povm,
    record: &SampleRecord,
    interval: (f64, f64),
) -> Result<f64> {
    validate_interval(interval)?;
    check_dims(povm.dim(), family.dim())?;
    check_dims(povm.len(), record.counts.len())?;
    let (lo, hi) = interval;
    let width = hi - lo;
    let step = width / (GRID_POINTS - 1) as f64;
    let ll = |x: f64| log_likelihood(family, povm, &record.counts, x);

    let values: Vec<f64> = (0..GRID_POINTS).map(|i| ll(lo + i as f64 * step)).collect();
    let (min, max) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
            (a.min(v), b.max(v))
        });
    if max - min < FLAT_TOL {
        return Err(Error::FlatLikelihood { spread: max - min });
    }
    let mid = 0.5 * (lo + hi);
    let best = (0..GRID_POINTS)
        .filter(|&i| values[i] == max)
        .min_by(|&a, &b| {
            let da = (lo + a as f64 * step - mid).abs();
            let db = (lo + b as f64 * step - mid).abs();
            da.total_cmp(&db)
        })
        .expect("grid is non-empty");

    let mut a = lo + best.saturating_sub(1) as f64 * step;
    let mut b = lo + (best + 1).min(GRID_POINTS - 1) as f64 * step;
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (ll(c), ll(d));
    while b - a > width * REFINE_REL_TOL {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = ll(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = ll(d);
        }
    }
    let refined = 0.5 * (a + b);
    let grid_best = lo + best as f64 * step;
    Ok(if ll(refined) >= max {
        refined
    } else {
        grid_best
    })
}

/// Settings for [`crb_experiment`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrbSettings {
    pub true_lambda: f64,
    pub shots: u64,
    pub trials: usize,
    pub seed: u64,
    /// Search interval; [`default_interval`] when `None`.
    pub interval: Option<(f64, f64)>,
}

impl CrbSettings {
    pub fn interval(&self) -> (f64, f64) {
        self.interval
            .unwrap_or_else(|| default_interval(self.true_lambda))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrbReport {
    /// Sample standard deviation of the estimates.
    pub empirical_std: f64,
    /// `1 / sqrt(n F)`.
    pub crb: f64,
    pub ratio: f64,
    pub trials: usize,
    /// Classical Fisher information of the POVM at the true parameter.
    pub fisher: f64,
    pub mean_estimate: f64,
    /// Per-trial estimates in trial order.
    pub estimates: Vec<f64>,
}

/// Runs `trials` independent sample-and-estimate rounds; trial `t` uses seed
/// `seed + t`, so the report does not depend on how trials are scheduled.
pub fn crb_experiment(
    family: &StateFamily,
    povm: &Povm,
    settings: &CrbSettings,
) -> Result<CrbReport> {
    if settings.trials < 2 {
        return Err(Error::InvalidTrials(settings.trials));
    }
    if settings.shots == 0 {
        return Err(Error::InvalidShots(0));
    }
    let interval = settings.interval();
    validate_interval(interval)?;
    let fisher = classical_fisher(povm, &family.derivative(settings.true_lambda))?;

    let estimates = (0..settings.trials)
        .into_par_iter()
        .map(|t| {
            let seed = settings.seed.wrapping_add(t as u64);
            let record = sample_outcomes(povm, family, settings.true_lambda, settings.shots, seed)?;
            mle_estimate(family, povm, &record, interval)
        })
        .collect::<Result<Vec<f64>>>()?;

    let m = estimates.len() as f64;
    let mean_estimate = estimates.iter().sum::<f64>() / m;
    let var = estimates
        .iter()
        .map(|x| (x - mean_estimate).powi(2))
        .sum::<f64>()
        / (m - 1.0);
    let empirical_std = var.sqrt();
    let crb = 1.0 / (settings.shots as f64 * fisher).sqrt();
    Ok(CrbReport {
        empirical_std,
        crb,
        ratio: empirical_std / crb,
        trials: settings.trials,
        fisher,
        mean_estimate,
        estimates,
    })
}

/// Per-trial estimates as CSV, settings echoed in `#` comment lines, with a
/// trailing summary row.
pub fn write_trials_csv<W: Write>(
    mut out: W,
    settings: &CrbSettings,
    measurement: &str,
    report: &CrbReport,
) -> io::Result<()> {
    let (lo, hi) = settings.interval();
    writeln!(
        out,
        "# seed={} shots={} trials={} true_lambda={:.16e} measurement={} interval=[{:.16e},{:.16e}]",
        settings.seed, settings.shots, settings.trials, settings.true_lambda, measurement, lo, hi
    )?;
    writeln!(out, "trial,estimate,empirical_std,crb,ratio")?;
    for (t, x) in report.estimates.iter().enumerate() {
        writeln!(out, "{t},{x:.16e},,,")?;
    }
    writeln!(
        out,
        "summary,{:.16e},{:.16e},{:.16e},{:.16e}",
        report.mean_estimate, report.empirical_std, report.crb, report.ratio
    )
}
