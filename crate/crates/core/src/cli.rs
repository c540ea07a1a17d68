//! Command-line front end for the `fstar` binary.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde_json::{Map, Value};

use crate::deformation::{spectrum, Deformation, DEFAULT_SERIES_TOL};
use crate::error::{Error, Result};
use crate::genvalue::{associativity_defect, commutator_report, genvalue_residual, DEFAULT_R_CUT};
use crate::io::{field_report, json_text, write_assoc_csv, write_field_csv, write_spectrum_csv};
use crate::phasespace::{fcs_wigner, fock_wigner, Field, PhaseGrid, HALF_CELL};
use crate::starproduct::StarOrder;
use crate::verify::{self, VerifyOptions, ASSOC_HBARS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Closed-form energies E_0..E_{n-max} as CSV (n, energy).
    Spectrum,
    /// Fock (--n) or nonlinear coherent-state (--zeta2) Wigner function as CSV.
    Wigner,
    /// Star-genvalue residual report for W_n as JSON.
    Residual,
    /// Ladder commutator deviation field (CSV) and report (JSON).
    Commutator,
    /// Associativity defect of q, p, q+p versus hbar as CSV.
    Assoc,
    /// Run the acceptance suite; exit status 1 if any check fails.
    Verify,
}

/// Grid bounds and sample counts, `qmin,qmax,pmin,pmax,nq,np`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub q: (f64, f64),
    pub p: (f64, f64),
    pub n_q: usize,
    pub n_p: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        let g = PhaseGrid::default();
        GridSpec { q: (g.q_min, g.q_max), p: (g.p_min, g.p_max), n_q: g.n_q, n_p: g.n_p }
    }
}

fn parse_grid(text: &str) -> std::result::Result<GridSpec, String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 6 {
        return Err(format!("expected qmin,qmax,pmin,pmax,nq,np (6 values), got {}", parts.len()));
    }
    let real = |k: usize| -> std::result::Result<f64, String> {
        parts[k].parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| format!("`{}` is not a finite number", parts[k]))
    };
    let count = |k: usize| -> std::result::Result<usize, String> {
        match parts[k].parse::<usize>() {
            Ok(n) if n >= 5 => Ok(n),
            _ => Err(format!("sample count `{}` must be an integer >= 5", parts[k])),
        }
    };
    Ok(GridSpec { q: (real(0)?, real(1)?), p: (real(2)?, real(3)?), n_q: count(4)?, n_p: count(5)? })
}

fn parse_positive(text: &str) -> std::result::Result<f64, String> {
    match text.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("`{text}` is not a positive finite number")),
    }
}

fn parse_spec(text: &str) -> std::result::Result<Deformation, String> {
    text.parse().map_err(|e: Error| e.to_string())
}

fn parse_order(text: &str) -> std::result::Result<StarOrder, String> {
    text.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Clone, Parser)]
#[command(name = "fstar", version, about = "f-deformed star products and Wigner functions on phase-space grids")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Deformation: identity | sqrt_n | qdef:q=<real> | expr:<expression in n>
    #[arg(long, default_value = "identity", value_parser = parse_spec)]
    pub spec: Deformation,
    /// Fock level.
    #[arg(long)]
    pub n: Option<usize>,
    /// Highest level for `spectrum`.
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long, default_value_t = 1.0, value_parser = parse_positive, allow_hyphen_values = true)]
    pub hbar: f64,
    #[arg(long, default_value_t = 1.0, value_parser = parse_positive, allow_hyphen_values = true)]
    pub omega: f64,
    /// |zeta|^2 of a nonlinear coherent state.
    #[arg(long, value_parser = parse_positive, allow_hyphen_values = true)]
    pub zeta2: Option<f64>,
    /// qmin,qmax,pmin,pmax,nq,np (samples are shifted by half a cell).
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    pub grid: Option<GridSpec>,
    /// first | second | exact
    #[arg(long, default_value = "first", value_parser = parse_order)]
    pub order: StarOrder,
    /// Output file (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Relative truncation tolerance for the coherent-state series.
    #[arg(long, value_parser = parse_positive, allow_hyphen_values = true)]
    pub tol: Option<f64>,
    /// Smaller grids for `verify`.
    #[arg(long)]
    pub quick: bool,
}

/// Failure of a CLI run, mapped to an exit status by the binary.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{flag}: {message}")]
    Config { flag: &'static str, message: String },
    #[error(transparent)]
    Run(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Run(_) => 2,
        }
    }
}

fn config(flag: &'static str, message: impl Into<String>) -> CliError {
    CliError::Config { flag, message: message.into() }
}

/// How a successful run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    VerificationFailed,
}

impl Cli {
    fn phase_grid(&self) -> std::result::Result<PhaseGrid, CliError> {
        let g = self.grid.unwrap_or_default();
        PhaseGrid::new(g.q, g.p, g.n_q, g.n_p, self.hbar, HALF_CELL).map_err(|e| config("--grid", e.to_string()))
    }

    fn require_n(&self) -> std::result::Result<usize, CliError> {
        self.n.ok_or_else(|| config("--n", format!("required by `{}`", self.command_name())))
    }

    fn command_name(&self) -> String {
        self.command.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
    }
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => fs::write(path, bytes)?,
        None => io::stdout().lock().write_all(bytes)?,
    }
    Ok(())
}

/// Writes a field as CSV, plus a `.json` companion next to it when writing to a file.
fn emit_field(out: Option<&Path>, field: &Field, extra: Option<(&str, Value)>) -> Result<()> {
    let mut csv = Vec::new();
    write_field_csv(field, &mut csv)?;
    emit(out, &csv)?;
    if let Some(path) = out {
        let mut report = field_report(field);
        if let (Some((key, value)), Value::Object(m)) = (extra, &mut report) {
            m.insert(key.into(), value);
        }
        fs::write(path.with_extension("json"), json_text(&report))?;
    }
    Ok(())
}

pub fn run(cli: &Cli) -> std::result::Result<Outcome, CliError> {
    let out = cli.out.as_deref();
    match cli.command {
        Command::Spectrum => {
            let n_max = cli.n_max.ok_or_else(|| config("--n-max", "required by `spectrum`"))?;
            let rows = spectrum(&cli.spec, n_max, cli.hbar, cli.omega)?;
            let mut csv = Vec::new();
            write_spectrum_csv(&rows, &mut csv)?;
            emit(out, &csv)?;
        }
        Command::Wigner => {
            let grid = cli.phase_grid()?;
            let field = match (cli.zeta2, cli.n) {
                (Some(zeta2), None) => fcs_wigner(&cli.spec, zeta2, &grid, cli.tol.unwrap_or(DEFAULT_SERIES_TOL))?,
                (None, Some(n)) => fock_wigner(n, &grid)?,
                (Some(_), Some(_)) => return Err(config("--zeta2", "conflicts with --n; choose one state")),
                (None, None) => return Err(config("--n", "`wigner` needs --n (Fock state) or --zeta2 (coherent state)")),
            };
            emit_field(out, &field, None)?;
        }
        Command::Residual => {
            let n = cli.require_n()?;
            let grid = cli.phase_grid()?;
            let report = genvalue_residual(&cli.spec, n, &grid, cli.omega, cli.order, DEFAULT_R_CUT)?;
            emit(out, json_text(&report.to_json()).as_bytes())?;
        }
        Command::Commutator => {
            let grid = cli.phase_grid()?;
            let report = commutator_report(&cli.spec, &grid, cli.order)?;
            let mut reports = Map::new();
            reports.insert("target".into(), report.vs_target.to_json());
            reports.insert("closed_form".into(), report.vs_closed_form.to_json());
            let reports = Value::Object(reports);
            match out {
                Some(_) => emit_field(out, &report.deviation, Some(("reports", reports)))?,
                None => emit(None, json_text(&reports).as_bytes())?,
            }
        }
        Command::Assoc => {
            let grid = cli.phase_grid()?;
            let field = |s: &str| -> Result<Field> { Ok(Field::from_symbol(&grid, &s.parse()?)) };
            let (k, g, h) = (field("q")?, field("p")?, field("q + p")?);
            let (samples, slope) = match associativity_defect(&k, &g, &h, &cli.spec, &ASSOC_HBARS, cli.order) {
                Ok(study) => (study.samples, Some(study.slope)),
                Err(Error::DegenerateFit { samples, .. }) => (samples, None),
                Err(e) => return Err(e.into()),
            };
            let mut csv = Vec::new();
            write_assoc_csv(&samples, slope, &mut csv)?;
            emit(out, &csv)?;
        }
        Command::Verify => {
            let summary = verify::run(VerifyOptions { quick: cli.quick })?;
            let text = json_text(&summary.to_json());
            io::stdout().lock().write_all(text.as_bytes()).map_err(Error::from)?;
            if let Some(path) = out {
                fs::write(path, &text).map_err(Error::from)?;
            }
            if !summary.passed() {
                return Ok(Outcome::VerificationFailed);
            }
        }
    }
    Ok(Outcome::Success)
}

/// Applies `FSTAR_THREADS` (a positive integer) to the global worker pool.
pub fn configure_threads(value: Option<&str>) -> std::result::Result<(), CliError> {
    let Some(value) = value else { return Ok(()) };
    let threads = match value.trim().parse::<usize>() {
        Ok(n) if n > 0 => n,
        _ => return Err(config("FSTAR_THREADS", format!("`{value}` is not a positive integer"))),
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| config("FSTAR_THREADS", e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_flag() {
        let g = parse_grid("-2,2,-3,3,9,11").unwrap();
        assert_eq!((g.q, g.p, g.n_q, g.n_p), ((-2.0, 2.0), (-3.0, 3.0), 9, 11));
        assert!(parse_grid("-2,2,-3,3,4,11").is_err());
        assert!(parse_grid("-2,2,-3,3,9").is_err());
        assert!(parse_grid("-2,x,-3,3,9,9").is_err());
    }

    #[test]
    fn parses_commands_and_defaults() {
        let cli = Cli::try_parse_from(["fstar", "residual", "--n", "3"]).unwrap();
        assert_eq!(cli.command, Command::Residual);
        assert_eq!(cli.spec, Deformation::Identity);
        assert_eq!(cli.order, StarOrder::First);
        assert_eq!(cli.phase_grid().unwrap(), PhaseGrid::default());
        let cli = Cli::try_parse_from(["fstar", "spectrum", "--spec", "qdef:q=1.2", "--n-max", "4"]).unwrap();
        assert_eq!(cli.spec, Deformation::qdef(1.2).unwrap());
    }

    #[test]
    fn bad_values_name_the_flag() {
        let err = Cli::try_parse_from(["fstar", "spectrum", "--spec", "qdef:p=2"]).unwrap_err();
        assert!(err.to_string().contains("--spec"));
        let err = Cli::try_parse_from(["fstar", "spectrum", "--hbar", "-1"]).unwrap_err();
        assert!(err.to_string().contains("--hbar"));
        let cli = Cli::try_parse_from(["fstar", "residual"]).unwrap();
        match run(&cli) {
            Err(CliError::Config { flag, .. }) => assert_eq!(flag, "--n"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn threads_must_be_positive() {
        assert!(matches!(configure_threads(Some("0")), Err(CliError::Config { flag: "FSTAR_THREADS", .. })));
        assert!(configure_threads(None).is_ok());
    }
}
