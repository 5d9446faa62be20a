//! Command-line front end.
//!
//! Exit codes: 0 on success or a passing check, 1 when a mathematical check
//! fails or is numerically inconclusive, 2 on usage and input errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::json;

use crate::eigenfunction::{trace, Eigenfunction};
use crate::error::Error;
use crate::exact::{Domain, Edge, Rational};
use crate::oracle::{proposition_sweep, samples_to_csv, theorem_sweep_detailed, DEFAULT_TOL};
use crate::spectrum::{enumerate, SpectralParam, SpectrumLine};
use crate::twosquares::{decompose, DecomposeReport};
use crate::witness::{certificate_values, check_relation, verify_certificate, witness, WitnessCertificate};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "neumann-witness", version, about = "Boundary non-positivity certificates for Neumann eigenfunctions on rectangles")]
pub struct Cli {
    /// Numerical tolerance, relative to 1 + max |coefficient|.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the case (C1, C2 or C3) of a rectangle.
    Classify {
        #[arg(long)]
        rect: PathBuf,
    },
    /// List eigenvalues up to a bound with their index sets, one JSON object per line.
    Spectrum {
        #[arg(long)]
        rect: PathBuf,
        /// Bound on μ = m²/c² + n²/d², as an integer or `n/d`.
        #[arg(long)]
        mu_max: Rational,
    },
    /// Two-adic decomposition of a sum of two squares.
    Decompose { lam: BigUint },
    /// Check the parity structure of two-square representations for every λ up to a bound.
    CheckProp {
        #[arg(long)]
        max: u64,
    },
    /// Restriction of an eigenfunction to one edge.
    Trace {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        edge: Edge,
        /// Also write sampled values as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, default_value_t = 1024)]
        samples: usize,
    },
    /// Build and verify a certificate for an eigenfunction.
    Witness {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify a certificate against an eigenfunction.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Random eigenspace sweep with certificates and dense boundary minima.
    Sweep {
        #[arg(long)]
        rect: PathBuf,
        #[arg(long)]
        mu_max: Rational,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Per-sample boundary minima as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

/// Failure of a command: the exit code and a message for stderr.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NumericalInconclusive { .. } | Error::InconsistentSpectrum(_) | Error::EmptyLift => EXIT_FAIL,
            _ => EXIT_INPUT,
        };
        Failure { code, message: e.to_string() }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure { code: EXIT_INPUT, message: format!("{}: {e}", path.display()) })?;
    serde_json::from_str(&text)
        .map_err(|e| Failure { code: EXIT_INPUT, message: format!("{}: {e}", path.display()) })
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure { code: EXIT_INPUT, message: format!("{}: {e}", path.display()) })
}

fn to_line<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

/// Run the command line `args` (program name first) and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if code == EXIT_OK { write!(out, "{}", e.render()) } else { write!(err, "{}", e.render()) };
            return code;
        }
    };
    if !(cli.tol.is_finite() && cli.tol >= 0.0) {
        let _ = writeln!(err, "error: --tol must be a finite non-negative number");
        return EXIT_INPUT;
    }
    match dispatch(&cli, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let tol = cli.tol;
    let mut emit = |s: String| writeln!(out, "{s}").map_err(|e| Failure::from(Error::from(e)));
    match &cli.command {
        Command::Classify { rect } => {
            let dom: Domain = read_json(rect)?;
            emit(to_line(&json!({ "rect": dom, "case": dom.classify() })))?;
            Ok(EXIT_OK)
        }
        Command::Spectrum { rect, mu_max } => {
            let dom: Domain = read_json(rect)?;
            for (mu, set) in enumerate(&dom.spectral_rect(), &SpectralParam::Exact(mu_max.clone()))? {
                emit(to_line(&SpectrumLine::new(&mu, &set)))?;
            }
            Ok(EXIT_OK)
        }
        Command::Decompose { lam } => {
            let d = decompose(lam)?;
            // small values use the compact numeric shape
            let line = match u64::try_from(lam) {
                Ok(small) => to_line(&DecomposeReport::new(small)?),
                Err(_) => to_line(&json!({
                    "lam": lam.to_string(),
                    "s": d.s,
                    "ell": d.ell.to_string(),
                    "core": d.core,
                    "class": d.predicted(),
                })),
            };
            emit(line)?;
            Ok(EXIT_OK)
        }
        Command::CheckProp { max } => {
            let rep = proposition_sweep(*max)?;
            let summary = json!({
                "lam_max": rep.lam_max,
                "checked": rep.checked,
                "with_representations": rep.with_representations,
                "representations": rep.representations,
                "s_equals_one": rep.s_equals_one,
                "violations": rep.violations,
                "pass": rep.pass,
            });
            emit(to_line(&summary))?;
            Ok(if rep.pass { EXIT_OK } else { EXIT_FAIL })
        }
        Command::Trace { input, edge, csv, samples } => {
            let u: Eigenfunction = read_json(input)?;
            let tr = trace(&u, *edge)?;
            if let Some(path) = csv {
                write_file(path, &tr.to_csv(*samples))?;
            }
            let terms: Vec<(u64, f64)> = tr.terms.iter().map(|(k, b)| (*k, *b)).collect();
            emit(to_line(&json!({
                "edge": tr.edge,
                "length": tr.length,
                "half_period": tr.half_period,
                "terms": terms,
                "tol": tol,
            })))?;
            Ok(EXIT_OK)
        }
        Command::Witness { input, out: target } => {
            let u: Eigenfunction = read_json(input)?;
            let cert = witness(&u)?;
            let text = serde_json::to_string_pretty(&cert).expect("serializable");
            match target {
                Some(path) => write_file(path, &text)?,
                None => emit(text)?,
            }
            let ok = verify_certificate(&u, &cert, tol)? && check_relation(&u, &cert, tol)?;
            if !ok {
                let _ = writeln!(err, "error: the certificate does not verify at tol {tol:e}");
            }
            Ok(if ok { EXIT_OK } else { EXIT_FAIL })
        }
        Command::Verify { input, cert } => {
            let u: Eigenfunction = read_json(input)?;
            let c: WitnessCertificate = read_json(cert)?;
            let values = certificate_values(&u, &c)?;
            let min = values.iter().copied().fold(f64::INFINITY, f64::min);
            let verified = verify_certificate(&u, &c, tol)?;
            let relation = check_relation(&u, &c, tol)?;
            emit(to_line(&json!({
                "verified": verified,
                "relation_holds": relation,
                "min": min,
                "values": values,
                "tol": tol,
            })))?;
            Ok(if verified { EXIT_OK } else { EXIT_FAIL })
        }
        Command::Sweep { rect, mu_max, trials, seed, csv } => {
            let dom: Domain = read_json(rect)?;
            let (rep, samples) = theorem_sweep_detailed(dom, mu_max, *trials, *seed, tol)?;
            if let Some(path) = csv {
                write_file(path, &samples_to_csv(&samples))?;
            }
            emit(to_line(&rep))?;
            Ok(if rep.pass { EXIT_OK } else { EXIT_FAIL })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("neumann-witness").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn decompose_output() {
        let (code, out, _) = run_str(&["decompose", "50"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), r#"{"lam":50,"s":0,"ell":12,"core":"twice_odd","class":"I"}"#);
        let (code, out, _) = run_str(&["decompose", "340282366920938463463374607431768211456"]);
        assert_eq!(code, 0);
        assert!(out.contains(r#""s":64"#), "{out}");
        assert_eq!(run_str(&["decompose", "0"]).0, 2);
        assert_eq!(run_str(&["decompose", "x"]).0, 2);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_str(&[]).0, 2);
        assert_eq!(run_str(&["frobnicate"]).0, 2);
        assert_eq!(run_str(&["witness", "--in", "/nonexistent/missing.json"]).0, 2);
        assert_eq!(run_str(&["--tol", "-1", "decompose", "5"]).0, 2);
        assert_eq!(run_str(&["--help"]).0, 0);
    }

    #[test]
    fn check_prop_summary() {
        let (code, out, _) = run_str(&["check-prop", "--max", "100"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["with_representations"], 43);
        assert_eq!(v["pass"], true);
    }
}
