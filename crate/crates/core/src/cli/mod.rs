//! Command-line driver: coefficient tables, error sweeps, norm sweeps and
//! closed-form/oracle comparisons as CSV or JSON.

pub mod format;
pub mod samples;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use serde::Serialize;

use crate::closed_form::{optimal_coefficients_with, CoefficientVector};
use crate::error::{Error, Result};
use crate::interpolator::{error_norm_squared, interpolate, z_grid, SampleSet, TestFunction};
use crate::linear_system::oracle_coefficients;
use crate::space_kernel::{discrete_operator_params, SpaceParams};

use format::{write_coefficient_tables, write_long_table, CoefficientTable};
pub use samples::read_samples;

/// Default tolerance of `--mode oracle-compare`.
pub const ORACLE_TOL: f64 = 1e-7;

/// Environment variable overriding [`ORACLE_TOL`].
pub const TOL_ENV: &str = "K2P2_TOL";

pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;
pub const EXIT_MISMATCH: u8 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FunctionArg {
    Square,
    Exp,
    Sine,
    File,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Rows z,C_0..C_N per N.
    Coefficients,
    /// Rows z,N,abs_error.
    Errors,
    /// Rows z,N,norm_sq.
    Norm,
    /// Rows z,N,max_abs_diff between closed-form and dense-solve coefficients.
    OracleCompare,
    /// Rows z,N,value of the interpolant.
    Interpolate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "k2p2", version, about = "Optimal interpolation in K2(P2) on equally spaced nodes")]
pub struct Args {
    /// Frequency of the reproduced functions sin(ωx), cos(ωx).
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub omega: f64,

    /// Comma-separated list of N (number of intervals) [default: 5,10].
    #[arg(long = "n", value_delimiter = ',')]
    pub n_list: Option<Vec<i64>>,

    /// Number of z points on [0, 1], endpoints included.
    #[arg(long, default_value_t = 1001)]
    pub grid: usize,

    #[arg(long, value_enum, default_value_t = FunctionArg::Sine)]
    pub function: FunctionArg,

    /// Sample file (columns beta,x,value); required with --function file.
    #[arg(long)]
    pub input: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Mode::Errors)]
    pub mode: Mode,

    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,

    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Data source for the interpolated function.
#[derive(Debug, Clone)]
pub enum Source {
    Builtin(TestFunction),
    Samples(SampleSet),
}

/// Validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub omega: f64,
    pub params: Vec<SpaceParams>,
    pub z_grid_size: usize,
    pub source: Source,
    pub mode: Mode,
    pub output_format: OutputFormat,
    pub out: Option<PathBuf>,
    pub oracle_tol: f64,
}

impl RunConfig {
    pub fn from_args(args: &Args) -> Result<Self> {
        Self::from_args_with_tol(args, std::env::var(TOL_ENV).ok().as_deref())
    }

    pub fn from_args_with_tol(args: &Args, tol_override: Option<&str>) -> Result<Self> {
        if args.grid < 2 {
            return Err(Error::Config(format!("--grid must be at least 2, got {}", args.grid)));
        }
        let oracle_tol = match tol_override {
            None => ORACLE_TOL,
            Some(raw) => match raw.trim().parse::<f64>() {
                Ok(t) if t.is_finite() && t > 0.0 => t,
                _ => return Err(Error::Config(format!("{TOL_ENV}={raw:?} is not a positive number"))),
            },
        };

        let (source, n_list) = match (args.function, &args.input) {
            (FunctionArg::File, None) => {
                return Err(Error::Config("--function file requires --input".into()))
            }
            (FunctionArg::File, Some(path)) => {
                let samples = read_samples(path, args.omega)?;
                let n = samples.params().n_intervals() as i64;
                if let Some(list) = &args.n_list {
                    if list.as_slice() != [n] {
                        return Err(Error::Config(format!(
                            "--n {list:?} disagrees with N = {n} from {}",
                            path.display()
                        )));
                    }
                }
                (Source::Samples(samples), vec![n])
            }
            (_, Some(_)) => {
                return Err(Error::Config("--input is only valid with --function file".into()))
            }
            (builtin, None) => {
                let f = match builtin {
                    FunctionArg::Square => TestFunction::Square,
                    FunctionArg::Exp => TestFunction::Exp,
                    FunctionArg::Sine => TestFunction::Sine,
                    FunctionArg::File => unreachable!(),
                };
                (Source::Builtin(f), args.n_list.clone().unwrap_or_else(|| vec![5, 10]))
            }
        };
        if n_list.is_empty() {
            return Err(Error::Config("--n must list at least one value".into()));
        }
        if matches!(source, Source::Samples(_)) && args.mode == Mode::Errors {
            return Err(Error::Config(
                "--mode errors needs the exact function; use --mode interpolate with sample files".into(),
            ));
        }
        let params = n_list
            .iter()
            .map(|&n| SpaceParams::new(args.omega, n))
            .collect::<Result<Vec<_>>>()?;

        Ok(Self {
            omega: args.omega,
            params,
            z_grid_size: args.grid,
            source,
            mode: args.mode,
            output_format: args.format,
            out: args.out.clone(),
            oracle_tol,
        })
    }

    fn samples_for(&self, params: &SpaceParams) -> Result<SampleSet> {
        match &self.source {
            Source::Builtin(f) => SampleSet::from_fn(*params, |z| f.eval(z)),
            Source::Samples(s) => Ok(s.clone()),
        }
    }

    fn function_name(&self) -> &'static str {
        match &self.source {
            Source::Builtin(f) => f.name(),
            Source::Samples(_) => "file",
        }
    }
}

/// What a run produced.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub output: String,
    /// One line per N for stderr.
    pub summary: Vec<String>,
    /// Set by `oracle-compare` when some `z` exceeds the tolerance.
    pub mismatch: bool,
}

#[derive(Serialize)]
struct JsonCoefficients<'a> {
    n: usize,
    z: Vec<f64>,
    coefficients: Vec<&'a [f64]>,
}

#[derive(Serialize)]
struct JsonSeries {
    n: usize,
    z: Vec<f64>,
    values: Vec<f64>,
    max_abs: f64,
}

#[derive(Serialize)]
struct JsonDocument<T: Serialize> {
    mode: &'static str,
    value: &'static str,
    omega: f64,
    function: &'static str,
    results: Vec<T>,
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Coefficients => "coefficients",
        Mode::Errors => "errors",
        Mode::Norm => "norm",
        Mode::OracleCompare => "oracle-compare",
        Mode::Interpolate => "interpolate",
    }
}

fn value_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Coefficients => "coefficients",
        Mode::Errors => "abs_error",
        Mode::Norm => "norm_sq",
        Mode::OracleCompare => "max_abs_diff",
        Mode::Interpolate => "value",
    }
}

fn max_abs(values: &[f64]) -> f64 {
    values.iter().fold(0.0, |m, v| m.max(v.abs()))
}

fn closed_form_sweep(params: &SpaceParams, grid: &[f64]) -> Result<Vec<CoefficientVector>> {
    let dop = discrete_operator_params(params)?;
    grid.iter()
        .map(|&z| optimal_coefficients_with(z, params, &dop))
        .collect()
}

/// Per-z scalar for the long-format modes.
fn sweep_values(config: &RunConfig, params: &SpaceParams, grid: &[f64]) -> Result<Vec<f64>> {
    let coeffs = closed_form_sweep(params, grid)?;
    match config.mode {
        Mode::Errors | Mode::Interpolate => {
            let samples = config.samples_for(params)?;
            coeffs
                .iter()
                .map(|c| {
                    let p = interpolate(&samples, c)?;
                    Ok(match (&config.source, config.mode) {
                        (Source::Builtin(f), Mode::Errors) => (f.eval(c.z) - p).abs(),
                        _ => p,
                    })
                })
                .collect()
        }
        Mode::Norm => Ok(coeffs.iter().map(|c| error_norm_squared(c, params)).collect()),
        Mode::OracleCompare => coeffs
            .iter()
            .map(|c| {
                let oracle = oracle_coefficients(c.z, params)?;
                Ok(c.coeffs
                    .iter()
                    .zip(&oracle.coeffs)
                    .fold(0.0, |m: f64, (a, b)| m.max((a - b).abs())))
            })
            .collect(),
        Mode::Coefficients => unreachable!("coefficient tables are emitted separately"),
    }
}

pub fn run(config: &RunConfig) -> Result<Outcome> {
    let grid = z_grid(config.z_grid_size);
    let mut summary = Vec::new();

    if config.mode == Mode::Coefficients {
        let tables = config
            .params
            .iter()
            .map(|params| {
                Ok(CoefficientTable {
                    n_intervals: params.n_intervals(),
                    rows: closed_form_sweep(params, &grid)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        for t in &tables {
            summary.push(format!("N={}: {} rows", t.n_intervals, t.rows.len()));
        }
        let output = match config.output_format {
            OutputFormat::Csv => write_coefficient_tables(&tables),
            OutputFormat::Json => to_json(JsonDocument {
                mode: mode_name(config.mode),
                value: value_name(config.mode),
                omega: config.omega,
                function: config.function_name(),
                results: tables
                    .iter()
                    .map(|t| JsonCoefficients {
                        n: t.n_intervals,
                        z: t.rows.iter().map(|r| r.z).collect(),
                        coefficients: t.rows.iter().map(|r| r.coeffs.as_slice()).collect(),
                    })
                    .collect(),
            }),
        };
        return Ok(Outcome {
            output,
            summary,
            mismatch: false,
        });
    }

    let mut series = Vec::with_capacity(config.params.len());
    let mut mismatch = false;
    for params in &config.params {
        let values = sweep_values(config, params, &grid)?;
        let worst = max_abs(&values);
        let n = params.n_intervals();
        match config.mode {
            Mode::OracleCompare => {
                let ok = worst <= config.oracle_tol;
                mismatch |= !ok;
                summary.push(format!(
                    "N={n}: max |closed - oracle| = {worst:.3e} ({}; tol {:.1e})",
                    if ok { "ok" } else { "MISMATCH" },
                    config.oracle_tol
                ));
            }
            _ => summary.push(format!("N={n}: max |{}| = {worst:.6e}", value_name(config.mode))),
        }
        series.push(JsonSeries {
            n,
            z: grid.clone(),
            values,
            max_abs: worst,
        });
    }

    let output = match config.output_format {
        OutputFormat::Csv => {
            let rows: Vec<(f64, usize, f64)> = series
                .iter()
                .flat_map(|s| s.z.iter().zip(&s.values).map(move |(z, v)| (*z, s.n, *v)))
                .collect();
            write_long_table(value_name(config.mode), &rows)
        }
        OutputFormat::Json => to_json(JsonDocument {
            mode: mode_name(config.mode),
            value: value_name(config.mode),
            omega: config.omega,
            function: config.function_name(),
            results: series,
        }),
    };
    Ok(Outcome {
        output,
        summary,
        mismatch,
    })
}

fn to_json<T: Serialize>(doc: T) -> String {
    let mut s = serde_json::to_string_pretty(&doc).expect("plain data serializes");
    s.push('\n');
    s
}

/// Maps an error to the process exit status.
pub fn exit_code(err: &Error) -> u8 {
    if err.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_CONFIG
    }
}

/// Parses nothing; runs an already parsed command line and writes its output.
pub fn main_with(args: Args) -> ExitCode {
    let result = RunConfig::from_args(&args).and_then(|config| {
        let outcome = run(&config)?;
        match &config.out {
            Some(path) => fs::write(path, &outcome.output).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?,
            None => print!("{}", outcome.output),
        }
        Ok(outcome)
    });
    match result {
        Ok(outcome) => {
            for line in &outcome.summary {
                eprintln!("{line}");
            }
            if outcome.mismatch {
                ExitCode::from(EXIT_MISMATCH)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(extra: &[&str]) -> Args {
        let mut argv = vec!["k2p2"];
        argv.extend_from_slice(extra);
        Args::try_parse_from(argv).unwrap()
    }

    fn config(extra: &[&str]) -> Result<RunConfig> {
        RunConfig::from_args_with_tol(&args(extra), None)
    }

    #[test]
    fn defaults() {
        let c = config(&[]).unwrap();
        assert_eq!(c.omega, 1.0);
        assert_eq!(
            c.params.iter().map(|p| p.n_intervals()).collect::<Vec<_>>(),
            vec![5, 10]
        );
        assert_eq!(c.z_grid_size, 1001);
        assert_eq!(c.mode, Mode::Errors);
        assert_eq!(c.output_format, OutputFormat::Csv);
        assert_eq!(c.oracle_tol, ORACLE_TOL);
    }

    #[test]
    fn config_errors() {
        assert!(matches!(config(&["--grid", "1"]), Err(Error::Config(_))));
        assert!(matches!(config(&["--function", "file"]), Err(Error::Config(_))));
        assert!(matches!(
            config(&["--input", "x.csv"]),
            Err(Error::Config(_))
        ));
        assert!(matches!(config(&["--n", "0"]), Err(Error::BadN(0))));
        assert!(matches!(
            config(&["--omega", "1.5707963267948966"]),
            Err(Error::OmegaSingular { .. })
        ));
        assert!(matches!(
            RunConfig::from_args_with_tol(&args(&[]), Some("nope")),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            RunConfig::from_args_with_tol(&args(&[]), Some("-1")),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn tolerance_override() {
        let c = RunConfig::from_args_with_tol(&args(&[]), Some("1e-3")).unwrap();
        assert_eq!(c.oracle_tol, 1e-3);
    }

    #[test]
    fn sine_errors_are_tiny() {
        let c = config(&["--function", "sine", "--n", "5", "--mode", "errors", "--grid", "51"]).unwrap();
        let out = run(&c).unwrap();
        let lines: Vec<&str> = out.output.lines().collect();
        assert_eq!(lines[0], "z,N,abs_error");
        assert_eq!(lines.len(), 52);
        for line in &lines[1..] {
            let v: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
            assert!(v <= 1e-8);
        }
    }

    #[test]
    fn coefficient_row_at_node_is_unit_vector() {
        let c = config(&["--mode", "coefficients", "--n", "5", "--grid", "11"]).unwrap();
        let out = run(&c).unwrap();
        let row = out.output.lines().nth(5).unwrap();
        let values: Vec<f64> = row.split(',').map(|f| f.parse().unwrap()).collect();
        assert_eq!(values[0], 0.4);
        for (beta, v) in values[1..].iter().enumerate() {
            let expected = if beta == 2 { 1.0 } else { 0.0 };
            assert!((v - expected).abs() <= 1e-8);
        }
    }

    #[test]
    fn json_output_parses() {
        let c = config(&["--mode", "norm", "--format", "json", "--grid", "5"]).unwrap();
        let out = run(&c).unwrap();
        let doc: serde_json::Value = serde_json::from_str(&out.output).unwrap();
        assert_eq!(doc["mode"], "norm");
        assert_eq!(doc["results"].as_array().unwrap().len(), 2);
        assert_eq!(doc["results"][1]["n"], 10);
        assert_eq!(doc["results"][0]["values"].as_array().unwrap().len(), 5);
    }

    #[test]
    fn oracle_compare_flags_mismatch_with_tiny_tolerance() {
        let c = RunConfig::from_args_with_tol(
            &args(&["--mode", "oracle-compare", "--n", "20", "--grid", "7"]),
            Some("1e-300"),
        )
        .unwrap();
        assert!(run(&c).unwrap().mismatch);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::BadN(0)), EXIT_CONFIG);
        assert_eq!(
            exit_code(&Error::SingularBoundarySystem { det: 0.0, scale: 1.0 }),
            EXIT_NUMERICAL
        );
    }
}
