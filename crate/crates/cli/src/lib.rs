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

//! Command-line front end for `fisherlab`.

pub mod commands;
pub mod config;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use thiserror::Error;

pub const THREADS_ENV: &str = "FISHERLAB_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "fisherlab",
    version,
    about = "Pure-state quantum metrology audits"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Experiment config (JSON).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// CSV output path for sweeps and simulations.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Exit with code 4 if any audited point violates the entropy bound.
    #[arg(long, global = true)]
    pub fail_on_violation: bool,

    /// Display entropies in bits (CSV output stays in nats).
    #[arg(long, global = true)]
    pub bits: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Quantum Fisher information, seminorm bound and SLD spectrum.
    Qfi,
    /// Check the entropy bound for one measurement or a sweep.
    Audit,
    /// Monte-Carlo Cramér-Rao check with maximum-likelihood estimation.
    Simulate,
    /// Reproduce the single-qubit counterexample and check its known values.
    Golden,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Physics(fisherlab::Error),
    #[error("golden check failed: {0}")]
    GoldenMismatch(String),
    #[error("entropy bound violated at {0} point(s)")]
    Violation(usize),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::GoldenMismatch(_) => 1,
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Physics(_) => 3,
            CliError::Violation(_) => 4,
        }
    }
}

impl From<fisherlab::Error> for CliError {
    fn from(e: fisherlab::Error) -> Self {
        use fisherlab::Error as E;
        match e {
            E::StationaryState { .. } | E::DegenerateGenerator | E::FlatLikelihood { .. } => {
                CliError::Physics(e)
            }
            other => CliError::Config(other.to_string()),
        }
    }
}

/// Reads the thread cap from `FISHERLAB_THREADS`, if set.
pub fn thread_cap(value: Option<&str>) -> Result<Option<usize>, CliError> {
    let Some(raw) = value else {
        return Ok(None);
    };
    match raw.trim().parse::<usize>() {
        Ok(n) if n > 0 => Ok(Some(n)),
        _ => Err(CliError::Config(format!(
            "{THREADS_ENV}: expected a positive integer, got {raw:?}"
        ))),
    }
}
