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

use std::f64::consts::LN_2;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use fisherlab::audit::{golden_checks, reproduce_counterexample, write_sweep_csv, AuditReport};
use fisherlab::estimation::write_trials_csv;
use fisherlab::metrology::qfi_report;
use fisherlab::{audit, crb_experiment, sld, sweep_phi, sweep_q, CrbSettings};

use crate::config::{Experiment, ExperimentConfig, SweepParam};
use crate::{Cli, CliError, Command};

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Golden => cmd_golden(out),
        command => {
            let path = cli
                .config
                .as_deref()
                .ok_or_else(|| CliError::Config("--config PATH is required".into()))?;
            let experiment = ExperimentConfig::load(path)?.resolve()?;
            match command {
                Command::Qfi => cmd_qfi(&experiment, out),
                Command::Audit => cmd_audit(&experiment, cli, out),
                Command::Simulate => cmd_simulate(&experiment, cli.out.as_deref(), out),
                Command::Golden => unreachable!(),
            }
        }
    }
}

pub fn cmd_qfi(exp: &Experiment, out: &mut dyn Write) -> Result<(), CliError> {
    let sd = exp.family.derivative(exp.lambda);
    let data = sld(&sd)?;
    let report = qfi_report(&exp.family, exp.lambda);
    writeln!(
        out,
        "F_Q = {:.6}, ‖h‖² = {:.6}",
        report.qfi, report.seminorm_sq
    )?;
    match report.ratio {
        Some(r) => writeln!(out, "ratio F_Q/‖h‖² = {r:.6}")?,
        None => writeln!(out, "ratio F_Q/‖h‖² = undefined")?,
    }
    writeln!(out, "N = {:.6}", data.normalization())?;
    writeln!(
        out,
        "SLD eigenvalues = {:+.6}, {:+.6}",
        data.eigenvalue_plus(),
        data.eigenvalue_minus()
    )?;
    Ok(())
}

struct EntropyUnits {
    scale: f64,
    name: &'static str,
}

impl EntropyUnits {
    fn new(bits: bool) -> Self {
        if bits {
            Self {
                scale: 1.0 / LN_2,
                name: "bits",
            }
        } else {
            Self {
                scale: 1.0,
                name: "nats",
            }
        }
    }
}

fn print_report(
    out: &mut dyn Write,
    label: &str,
    r: &AuditReport,
    units: &EntropyUnits,
) -> std::io::Result<()> {
    let (s, rhs) = (r.entropy * units.scale, r.rhs * units.scale);
    writeln!(out, "measurement          {label}")?;
    writeln!(out, "entropy S            {s:.6} {}", units.name)?;
    writeln!(out, "fisher F             {:.6}", r.fisher)?;
    writeln!(out, "qfi F_Q              {:.6}", r.qfi)?;
    writeln!(out, "seminorm_sq ‖h‖²     {:.6}", r.seminorm_sq)?;
    writeln!(out, "rhs ln2·F_Q/‖h‖²     {rhs:.6} {}", units.name)?;
    writeln!(
        out,
        "optimal              {}",
        if r.measurement_optimal { "yes" } else { "no" }
    )?;
    if r.violated {
        writeln!(out, "VIOLATED: S = {s:.6} < {rhs:.6}")
    } else {
        writeln!(out, "OK: S = {s:.6} ≥ {rhs:.6}")
    }
}

pub fn cmd_audit(exp: &Experiment, cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let units = EntropyUnits::new(cli.bits);
    let violations = match (&exp.measurement, &exp.sweep) {
        (Some(_), Some(_)) => {
            return Err(CliError::Config(
                "measurement and sweep: give exactly one of them for audit".into(),
            ))
        }
        (None, None) => {
            return Err(CliError::Config(
                "measurement: audit needs a measurement or a sweep".into(),
            ))
        }
        (Some(m), None) => {
            let povm = m.build(&exp.family, exp.lambda)?;
            let report = audit(&exp.family, exp.lambda, &povm)?;
            print_report(out, &m.describe(), &report, &units)?;
            usize::from(report.violated)
        }
        (None, Some(sweep)) => {
            let reports = match sweep.param {
                SweepParam::Q => sweep_q(&exp.family, exp.lambda, &sweep.grid)?,
                SweepParam::Phi => sweep_phi(&exp.family, exp.lambda, &sweep.grid)?,
            };
            let violated = reports.iter().filter(|r| r.violated).count();
            match &cli.out {
                Some(path) => {
                    let mut file = BufWriter::new(File::create(path)?);
                    write_sweep_csv(&mut file, &sweep.grid, &reports)?;
                    file.flush()?;
                    let optimal = reports.iter().filter(|r| r.measurement_optimal).count();
                    let (lo, hi) = reports
                        .iter()
                        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), r| {
                            (a.min(r.entropy), b.max(r.entropy))
                        });
                    writeln!(out, "wrote {} rows to {}", reports.len(), path.display())?;
                    writeln!(
                        out,
                        "entropy range [{:.6}, {:.6}] {}",
                        lo * units.scale,
                        hi * units.scale,
                        units.name
                    )?;
                    writeln!(out, "optimal points {optimal}/{}", reports.len())?;
                    writeln!(out, "violated points {violated}/{}", reports.len())?;
                }
                None => write_sweep_csv(&mut *out, &sweep.grid, &reports)?,
            }
            violated
        }
    };
    if cli.fail_on_violation && violations > 0 {
        return Err(CliError::Violation(violations));
    }
    Ok(())
}

pub fn cmd_simulate(
    exp: &Experiment,
    csv_path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let sim = exp
        .sim
        .as_ref()
        .ok_or_else(|| CliError::Config("sim: simulate needs a sim block".into()))?;
    let measurement = exp
        .measurement
        .as_ref()
        .ok_or_else(|| CliError::Config("measurement: simulate needs a measurement".into()))?;
    let povm = measurement.build(&exp.family, exp.lambda)?;
    let settings = CrbSettings {
        true_lambda: exp.lambda,
        shots: sim.n,
        trials: sim.trials,
        seed: sim.seed,
        interval: sim.interval.map(|[a, b]| (a, b)),
    };
    let report = crb_experiment(&exp.family, &povm, &settings)?;
    writeln!(out, "measurement     {}", measurement.describe())?;
    writeln!(out, "shots           {}", sim.n)?;
    writeln!(out, "trials          {}", report.trials)?;
    writeln!(out, "seed            {}", sim.seed)?;
    writeln!(out, "fisher F        {:.6}", report.fisher)?;
    writeln!(out, "mean estimate   {:.6}", report.mean_estimate)?;
    writeln!(out, "empirical_std   {:.6e}", report.empirical_std)?;
    writeln!(out, "crb             {:.6e}", report.crb)?;
    writeln!(out, "ratio           {:.6}", report.ratio)?;
    if let Some(path) = csv_path {
        let mut file = BufWriter::new(File::create(path)?);
        write_trials_csv(&mut file, &settings, &measurement.describe(), &report)?;
        file.flush()?;
    }
    Ok(())
}

/// Prints one PASS/FAIL line per known quantity of `report`.
pub fn golden_verdict(report: &AuditReport, out: &mut dyn Write) -> Result<(), CliError> {
    let checks = golden_checks(report);
    let mut failed = Vec::new();
    for c in &checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        writeln!(
            out,
            "{tag} {}: expected {}, got {}",
            c.name, c.expected, c.actual
        )?;
        if !c.passed {
            failed.push(format!(
                "{} (expected {}, got {})",
                c.name, c.expected, c.actual
            ));
        }
    }
    if failed.is_empty() {
        writeln!(
            out,
            "golden: {}/{} checks passed",
            checks.len(),
            checks.len()
        )?;
        Ok(())
    } else {
        Err(CliError::GoldenMismatch(failed.join("; ")))
    }
}

pub fn cmd_golden(out: &mut dyn Write) -> Result<(), CliError> {
    golden_verdict(&reproduce_counterexample(), out)
}
