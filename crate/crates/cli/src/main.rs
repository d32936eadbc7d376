mod angle;
mod config;
mod validate;

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use triphoton::closed_form::{sweep_csv, SignConvention};
use triphoton::experiment::{
    correct_counts, corrected_csv, hom_scan, prepare_postselected, simulate_counts, DetectorModel, DEFAULT_CHANNELS,
};
use triphoton::format::sig12;
use triphoton::interferometer::vbs;
use triphoton::labeled::symmetry_table;
use triphoton::states::{bell, bell_phi, mix_state, sym_state, three_photon, BellKind};
use triphoton::StateVector;

use angle::{parse_angle, parse_angle_list};
use config::Config;

const DEFAULT_THETA_POINTS: usize = 33;
const DEFAULT_PHIS: &str = "0,0.5pi,pi";
const DEFAULT_SHOTS: u64 = 100_000;
const DEFAULT_SEED: u64 = 1;

#[derive(Parser)]
#[command(name = "triphoton", version, about = "Few-photon interference at a variable beam splitter")]
struct Cli {
    /// Defaults file with `key = value` lines (theta_points, phis, seed, shots, channels).
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Joint, product and difference statistics over a (theta, phi) grid as CSV.
    Sweep {
        /// Number of theta values spanning [0, pi].
        #[arg(long)]
        theta_points: Option<usize>,
        /// Comma-separated phases, e.g. `0,0.5pi,pi`.
        #[arg(long)]
        phis: Option<String>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Exchange-symmetry classification of the symmetric and mixed states as JSON.
    SymmetryTable {
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Run the invariant checks and report pass/fail.
    Validate {
        /// Evaluate the closed forms with the opposite sign on the sin^2(phi/2) terms.
        #[arg(long)]
        inject_main_text_sign: bool,
        /// Golden sweep CSV (33 theta points, phi = 0, pi/2, pi) to compare against.
        #[arg(long, value_name = "CSV")]
        fixture: Option<PathBuf>,
    },
    /// Simulated detector counts for the three-photon state and their correction.
    Montecarlo {
        #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
        phi: f64,
        #[arg(long)]
        shots: Option<u64>,
        #[arg(long, env = "TRIPHOTON_SEED")]
        seed: Option<u64>,
        /// Detector channels per output arm.
        #[arg(long, short = 'k')]
        channels: Option<usize>,
        #[arg(long, default_value_t = 1.0)]
        efficiency: f64,
        /// Raw count record (JSON).
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
        /// Corrected rates (CSV).
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
    },
    /// Coincidence probability versus delay for a given mode overlap.
    Hom {
        #[arg(long)]
        overlap: f64,
        /// Comma-separated delays; overrides the range options.
        #[arg(long, allow_hyphen_values = true)]
        delays: Option<String>,
        #[arg(long, default_value_t = -5.0, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, default_value_t = 5.0, allow_hyphen_values = true)]
        to: f64,
        #[arg(long, default_value_t = 101)]
        points: usize,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Post-selected photon addition to the Bell pair.
    Prepare {
        #[arg(long, value_parser = parse_angle, default_value = "0", allow_hyphen_values = true)]
        phi: f64,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Write a named state as JSON.
    ExportState {
        #[arg(value_enum)]
        name: StateName,
        /// Phase for the phase-dependent states.
        #[arg(long, value_parser = parse_angle, default_value = "0", allow_hyphen_values = true)]
        phi: f64,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum StateName {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
    BellPhi,
    ThreePhoton,
    Sym,
    Mix,
}

impl StateName {
    fn build(self, phi: f64) -> StateVector {
        match self {
            StateName::PhiPlus => bell(BellKind::PhiPlus),
            StateName::PhiMinus => bell(BellKind::PhiMinus),
            StateName::PsiPlus => bell(BellKind::PsiPlus),
            StateName::PsiMinus => bell(BellKind::PsiMinus),
            StateName::BellPhi => bell_phi(phi),
            StateName::ThreePhoton => three_photon(phi),
            StateName::Sym => sym_state(),
            StateName::Mix => mix_state(),
        }
    }
}

/// Invalid arguments detected after parsing; exits with status 2.
#[derive(Debug)]
struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Round-trips through the 12-significant-digit text form so that JSON
/// output carries the same precision as the CSV files.
fn round12(x: f64) -> f64 {
    sig12(x).parse().unwrap_or(x)
}

fn state_json(s: &StateVector) -> anyhow::Result<Value> {
    let rounded = s.terms().map(|(b, a)| (*b, triphoton::Complex64::new(round12(a.re), round12(a.im))));
    let rounded = StateVector::from_terms(s.photons(), rounded)?;
    Ok(serde_json::from_str(&rounded.to_json())?)
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    text.push('\n');
    text
}

/// Runs the command; `Ok(false)` means checks ran but some failed.
fn run(cli: Cli) -> anyhow::Result<bool> {
    let cfg = match &cli.config {
        Some(path) => Config::load(path).map_err(usage)?,
        None => Config::default(),
    };

    match cli.command {
        Command::Sweep { theta_points, phis, out } => {
            let points = theta_points.or(cfg.theta_points).unwrap_or(DEFAULT_THETA_POINTS);
            if points == 0 {
                return Err(usage("--theta-points must be at least 1"));
            }
            let phis = match phis {
                Some(text) => parse_angle_list(&text).map_err(usage)?,
                None => match cfg.phis {
                    Some(p) => p,
                    None => parse_angle_list(DEFAULT_PHIS).expect("default phases parse"),
                },
            };
            if phis.is_empty() {
                return Err(usage("the phi list is empty"));
            }
            emit(out.as_deref(), &sweep_csv(points, &phis))?;
        }
        Command::SymmetryTable { out } => {
            let cells: Vec<Value> = symmetry_table()?
                .into_iter()
                .map(|c| {
                    let (i, j) = c.pair.slots();
                    json!({
                        "state": c.state,
                        "pair": c.pair.as_str(),
                        "slots": [i, j],
                        "dof": c.dof,
                        "class": c.class.as_str(),
                    })
                })
                .collect();
            emit(out.as_deref(), &pretty(&Value::Array(cells)))?;
        }
        Command::Validate { inject_main_text_sign, fixture } => {
            let sign = if inject_main_text_sign { SignConvention::MainText } else { SignConvention::Derived };
            let checks = validate::run(&validate::Options { sign, fixture: fixture.as_deref() })?;
            let failed = checks.iter().filter(|c| !c.passed).count();
            for c in &checks {
                println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            println!("{}/{} checks passed", checks.len() - failed, checks.len());
            return Ok(failed == 0);
        }
        Command::Montecarlo { theta, phi, shots, seed, channels, efficiency, json, csv } => {
            let shots = shots.or(cfg.shots).unwrap_or(DEFAULT_SHOTS);
            let seed = seed.or(cfg.seed).unwrap_or(DEFAULT_SEED);
            let k = channels.or(cfg.channels).unwrap_or(DEFAULT_CHANNELS);
            let detector = DetectorModel::new(k, efficiency).map_err(|e| usage(e.to_string()))?;
            let u = vbs(theta).map_err(|e| usage(e.to_string()))?;
            let record = simulate_counts(&three_photon(phi), &u, shots, detector, seed)?;
            let mut record_text = record.to_json();
            record_text.push('\n');
            let corrected = corrected_csv(&correct_counts(&record, k));
            if json.is_none() && csv.is_none() {
                print!("{record_text}{corrected}");
            } else {
                if let Some(path) = &json {
                    emit(Some(path), &record_text)?;
                }
                if let Some(path) = &csv {
                    emit(Some(path), &corrected)?;
                }
            }
        }
        Command::Hom { overlap, delays, from, to, points, out } => {
            let delays: Vec<f64> = match delays {
                Some(text) => text
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<f64>().map_err(|_| usage(format!("invalid delay {s:?}"))))
                    .collect::<anyhow::Result<_>>()?,
                None => match points {
                    0 => Vec::new(),
                    1 => vec![from],
                    n => (0..n).map(|i| from + (to - from) * i as f64 / (n - 1) as f64).collect(),
                },
            };
            if delays.is_empty() {
                return Err(usage("no delays to scan"));
            }
            let scan = hom_scan(&delays, overlap).map_err(|e| usage(e.to_string()))?;
            let mut text = String::from("tau,coincidence\n");
            for (tau, p) in scan {
                text.push_str(&format!("{},{}\n", sig12(tau), sig12(p)));
            }
            emit(out.as_deref(), &text)?;
        }
        Command::Prepare { phi, out } => {
            let prepared = prepare_postselected(phi)?;
            let value = json!({
                "phi": round12(phi),
                "success_probability": round12(prepared.success_probability),
                "fidelity_to_target": round12(prepared.state.fidelity(&three_photon(phi))?),
                "state": state_json(&prepared.state)?,
            });
            let mut text = serde_json::to_string(&value)?;
            text.push('\n');
            emit(out.as_deref(), &text)?;
        }
        Command::ExportState { name, phi, out } => {
            let mut text = serde_json::to_string(&state_json(&name.build(phi))?)?;
            text.push('\n');
            emit(out.as_deref(), &text)?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if e.is::<UsageError>() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
