//! Command-line front end. [`run`] never exits the process; it returns the
//! exit code: 0 on success, 1 on bad input, 2 when a verification fails.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use thiserror::Error;

use crate::reflexive::{enumerate_reflexive, ReflexiveError};
use crate::report::{self, Format, Report, ReportError};
use crate::verify::{verify_corpus, verify_list, verify_random, Check, VerifyOptions};
use crate::weights::{WeightError, WeightSystem};

#[derive(Debug, Parser)]
#[command(name = "spectral-weights", version, about = "Spectra, Frobenius data and filtrations of weight systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format: json, csv or table.
    #[arg(long, global = true, default_value = "table")]
    format: Format,
    /// Divide the weights by their gcd instead of rejecting them.
    #[arg(long, global = true)]
    allow_gcd_normalize: bool,
}

#[derive(Debug, Args)]
struct WeightsArg {
    /// Comma-separated weights, e.g. 1,2,3.
    #[arg(short, long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
    weights: Vec<i64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Spectral values, step sequence and spectral polynomial.
    Spectrum(WeightsArg),
    /// Frobenius initial data: A0, A_inf, metric, unit and the pairing.
    Frobenius(WeightsArg),
    /// Jordan blocks of the monodromy logarithm.
    Jordan(WeightsArg),
    /// Hodge, opposite, monodromy and weight filtrations.
    Filtrations(WeightsArg),
    /// Reflexive weight systems of a given dimension.
    Reflexive {
        #[arg(short = 'n', long = "dimension")]
        dimension: usize,
    },
    /// Run the identity checks on one system, a corpus or a random sample.
    Verify {
        #[arg(short, long, value_delimiter = ',', allow_negative_numbers = true)]
        weights: Option<Vec<i64>>,
        /// Every gcd-1 system with mu up to this bound.
        #[arg(long)]
        max_mu: Option<u64>,
        /// This many random systems (with mu up to --max-mu, default 500).
        #[arg(long)]
        random: Option<usize>,
        /// Also run the f-action and path-independence checks.
        #[arg(long)]
        all: bool,
        /// Comma-separated check names; overrides the default selection.
        #[arg(long, value_delimiter = ',')]
        checks: Option<Vec<Check>>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Weights(#[from] WeightError),
    #[error(transparent)]
    Reflexive(#[from] ReflexiveError),
    #[error(transparent)]
    Report(#[from] ReportError),
    #[error("{0}")]
    Usage(String),
    #[error("write failed: {0}")]
    Io(#[from] std::io::Error),
}

/// The checks run when neither `--all` nor `--checks` is given.
pub fn default_checks() -> Vec<Check> {
    Check::ALL.into_iter().filter(|c| !matches!(c, Check::FAction | Check::PathIndependence)).collect()
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(out, "{e}");
            return 0;
        }
        Err(e) => {
            let text = e.to_string();
            let line = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
            let _ = writeln!(err, "{}", line.trim());
            return 1;
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn weights(raw: &[i64], normalize: bool) -> Result<WeightSystem, CliError> {
    Ok(if normalize { WeightSystem::normalized(raw)? } else { WeightSystem::new(raw)? })
}

fn emit(report: &Report, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
    out.write_all(report.render(format)?.as_bytes())?;
    Ok(())
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let norm = cli.allow_gcd_normalize;
    let report = match &cli.command {
        Command::Spectrum(a) => report::spectrum_report(&weights(&a.weights, norm)?),
        Command::Frobenius(a) => report::frobenius_report(&weights(&a.weights, norm)?),
        Command::Jordan(a) => report::jordan_report(&weights(&a.weights, norm)?),
        Command::Filtrations(a) => report::filtrations_report(&weights(&a.weights, norm)?),
        Command::Reflexive { dimension } => report::reflexive_report(*dimension, &enumerate_reflexive(*dimension)?),
        Command::Verify { weights: w, max_mu, random, all, checks, seed } => {
            let selected = match checks {
                Some(list) => list.clone(),
                None if *all => Check::ALL.to_vec(),
                None => default_checks(),
            };
            let mut opts = VerifyOptions::new(selected);
            opts.seed = *seed;
            let (input, summary) = match (w, max_mu, random) {
                (Some(raw), None, None) => {
                    let ws = weights(raw, norm)?;
                    (report::weights_input(&ws), verify_list(&[ws], &opts))
                }
                (None, Some(m), None) => (json!({ "max_mu": m }), verify_corpus(*m, &opts)),
                (None, m, Some(count)) => {
                    let m = m.unwrap_or(500);
                    (json!({ "random": count, "max_mu": m, "seed": seed }), verify_random(*count, m, &opts))
                }
                _ => return Err(CliError::Usage("verify needs exactly one of --weights, --max-mu or --random".into())),
            };
            let report = report::verify_report(input, &summary);
            emit(&report, cli.format, out)?;
            if summary.passed() {
                return Ok(0);
            }
            for f in &summary.failures {
                writeln!(err, "{} {:?}: {}: {}", f.mu, f.weights, f.check, f.detail)?;
            }
            return Ok(2);
        }
    };
    emit(&report, cli.format, out)?;
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("spectral-weights").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["spectrum", "-w", "1,1,1"]).0, 0);
        let (code, _, err) = call(&["spectrum", "-w", "2,4,6"]);
        assert_eq!(code, 1);
        assert!(err.contains("gcd is 2, not 1"), "{err}");
        assert_eq!(err.lines().count(), 1);
        assert_eq!(call(&["spectrum", "-w", "2,4,6", "--allow-gcd-normalize"]).0, 0);
        assert_eq!(call(&["spectrum", "--bogus"]).0, 1);
        assert_eq!(call(&["reflexive", "-n", "9"]).0, 1);
        assert_eq!(call(&["--help"]).0, 0);
        assert_eq!(call(&["verify", "-w", "1,2,3", "--all"]).0, 0);
        assert_eq!(call(&["verify"]).0, 1);
    }

    #[test]
    fn checks_flag_parses_names() {
        let (code, out, _) = call(&["verify", "-w", "1,1,2", "--checks", "bernstein,pairing", "--format", "json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["payload"]["verify"]["checks"], json!(["bernstein", "pairing"]));
    }
}
