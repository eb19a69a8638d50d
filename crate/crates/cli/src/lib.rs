//! The `logrs` command line.
//!
//! Every subcommand reads one JSON document (from `--input`, `--json` or
//! standard input) except `euler`, which is driven by flags. Results go to
//! standard output or `--out`.
//!
//! Exit status: 0 on success, 2 for invalid or unsupported input (including
//! paths through a ramification point), 3 for numeric failures, 4 when no
//! convergence threshold exists up to `n_max`.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;

use logrs::caratheodory::{report_from_rows, threshold_scan};
use logrs::io::{ConvergeRequest, DistanceRequest, EmbedRequest, LiftRequest, SurfaceSpec};
use logrs::uniformization::{
    chart_uniformization, convergence_report, ChartFamilyKind, ConvergenceReport,
};
use logrs::{
    conformal_radius, distance, embed_check, lift_path, ramification_points, Complex, Error,
    Tolerances,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EulerFamily {
    NthRoot,
    ScaledLog,
    All,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Describe a surface: explicit form, ramification points, conformal radius.
    Info,
    /// Lift a polyline: {surface, start, path}.
    Lift,
    /// Geodesic distance: {surface, p, q}.
    Distance,
    /// Translation embedding of a compact region: {source, region, target, target_basepoint}.
    Embed,
    /// Convergence threshold of a family: {family, source, region, n_max}.
    Converge,
    /// Sup errors of a chart family against its limit on circles.
    Euler {
        #[arg(long, value_delimiter = ',', default_value = "1")]
        radii: Vec<f64>,
        #[arg(long = "n-list", value_delimiter = ',', default_value = "10,100,1000")]
        n_list: Vec<u32>,
        #[arg(long, default_value_t = 4096)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = EulerFamily::NthRoot)]
        family: EulerFamily,
        /// Seeded interior points per row checked against the boundary maximum.
        #[arg(long = "interior-samples", default_value_t = 0)]
        interior_samples: usize,
    },
}

/// Parsed command line.
#[derive(Debug, Clone, Parser)]
#[command(
    name = "logrs",
    version,
    about = "Log-Riemann surfaces as slit-plane sheet complexes"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Read the input document from this file.
    #[arg(long, global = true, conflicts_with = "json")]
    pub input: Option<PathBuf>,
    /// Inline input document.
    #[arg(long, global = true)]
    pub json: Option<String>,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long = "tol-branch", global = true)]
    pub tol_branch: Option<f64>,
    #[arg(long = "tol-slit", global = true)]
    pub tol_slit: Option<f64>,
    #[arg(long = "tol-dist", global = true)]
    pub tol_dist: Option<f64>,
    #[arg(long = "tol-root", global = true)]
    pub tol_root: Option<f64>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid input: {0}")]
    Schema(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Schema(_) => 2,
            CliError::Core(Error::NumericFailure { .. }) => 3,
            CliError::Core(Error::ThresholdNotFound { .. }) => 4,
            CliError::Core(_) => 2,
            CliError::Io(_) => 2,
        }
    }
}

/// Output document plus the exit status it should be reported with.
pub struct Outcome {
    pub document: String,
    pub status: i32,
}

fn parse<T: DeserializeOwned>(text: &str) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if path == "." || path.is_empty() {
            CliError::Schema(inner.to_string())
        } else {
            CliError::Schema(format!("at `{path}`: {inner}"))
        }
    })
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("results serialize");
    s.push('\n');
    s
}

/// Fixed ten-significant-digit rendering used in CSV tables.
pub fn format_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..10).contains(&exp) {
        let decimals = (9 - exp).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        format!("{v:.9e}")
    }
}

impl RunConfig {
    /// Tolerances from the defaults, then `LOGRS_TOL` (distance tolerance),
    /// then the command-line overrides.
    pub fn tolerances(&self, env_tol: Option<&str>) -> Result<Tolerances, CliError> {
        let mut t = Tolerances::default();
        if let Some(v) = env_tol {
            t.dist = v
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("LOGRS_TOL is not a number: {v:?}")))?;
        }
        if let Some(v) = self.tol_branch {
            t.branch = v;
        }
        if let Some(v) = self.tol_slit {
            t.slit = v;
        }
        if let Some(v) = self.tol_dist {
            t.dist = v;
        }
        if let Some(v) = self.tol_root {
            t.root = v;
        }
        for (name, v) in [
            ("branch", t.branch),
            ("slit", t.slit),
            ("dist", t.dist),
            ("root", t.root),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Usage(format!(
                    "tolerance {name} must be positive"
                )));
            }
        }
        Ok(t)
    }

    fn input(&self, stdin: &mut dyn Read) -> Result<String, CliError> {
        if let Some(j) = &self.json {
            return Ok(j.clone());
        }
        if let Some(p) = &self.input {
            return Ok(std::fs::read_to_string(p)?);
        }
        let mut s = String::new();
        stdin.read_to_string(&mut s)?;
        Ok(s)
    }
}

/// Runs a parsed configuration and renders its document.
pub fn run(
    config: &RunConfig,
    stdin: &mut dyn Read,
    env_tol: Option<&str>,
) -> Result<Outcome, CliError> {
    let tol = config.tolerances(env_tol)?;
    let format = config.format;
    let json_only = |name: &str| -> Result<(), CliError> {
        match format {
            Some(Format::Csv) => Err(CliError::Usage(format!("`{name}` has no CSV output"))),
            _ => Ok(()),
        }
    };
    let ok = |document: String| {
        Ok(Outcome {
            document,
            status: 0,
        })
    };
    match &config.command {
        Command::Info => {
            json_only("info")?;
            let spec: SurfaceSpec = parse(&config.input(stdin)?)?;
            let s = spec.build(tol)?;
            let base = logrs::SurfacePoint {
                sheet: 0,
                w: Complex::new(0.0, 0.0),
                slit_side: None,
            };
            let radius = conformal_radius(&spec.kind(), &base).ok();
            ok(to_json(&json!({
                "surface": SurfaceSpec::from_surface(&s),
                "degree": s.sheet_domain().count(),
                "ramification_points": ramification_points(&s),
                "finite_ramification_total": s.finite_ramification_total(),
                "conformal_radius": radius,
            })))
        }
        Command::Lift => {
            json_only("lift")?;
            let req: LiftRequest = parse(&config.input(stdin)?)?;
            let s = req.surface.build(tol)?;
            ok(to_json(&lift_path(&s, &req.start, &req.path)?))
        }
        Command::Distance => {
            json_only("distance")?;
            let req: DistanceRequest = parse(&config.input(stdin)?)?;
            let s = req.surface.build(tol)?;
            ok(to_json(&distance(&s, &req.p, &req.q)?))
        }
        Command::Embed => {
            json_only("embed")?;
            let req: EmbedRequest = parse(&config.input(stdin)?)?;
            let source = req.source.build(tol)?;
            let k = req.region.build(&source)?;
            let target = req.target.build(tol)?;
            ok(to_json(&embed_check(&k, &target, &req.target_basepoint)?))
        }
        Command::Converge => {
            let req: ConvergeRequest = parse(&config.input(stdin)?)?;
            let source = req.source.build(tol)?;
            let k = req.region.build(&source)?;
            let family = req.family.build(tol)?;
            let rows = threshold_scan(&k, &family, req.n_max)?;
            let (threshold, status, monotone) = match report_from_rows(rows.clone(), req.n_max) {
                Ok(r) => (Some(r.threshold), 0, r.monotone),
                Err(e) => (None, CliError::Core(e).exit_code(), false),
            };
            let document = if format == Some(Format::Csv) {
                let mut out = String::from("n,found,failure_reason\n");
                for r in &rows {
                    let reason = r.failure_reason.map(|f| f.to_string()).unwrap_or_default();
                    let _ = writeln!(out, "{},{},{}", r.n, r.found, reason);
                }
                out
            } else {
                to_json(&json!({
                    "threshold": threshold,
                    "n_max": req.n_max,
                    "monotone": monotone,
                    "rows": rows,
                }))
            };
            Ok(Outcome { document, status })
        }
        Command::Euler {
            radii,
            n_list,
            samples,
            family,
            interior_samples,
        } => {
            let kinds: Vec<(&str, ChartFamilyKind)> = match family {
                EulerFamily::NthRoot => vec![(
                    "nth_root",
                    ChartFamilyKind::NthRoot {
                        base: Complex::new(1.0, 0.0),
                    },
                )],
                EulerFamily::ScaledLog => vec![("scaled_log", ChartFamilyKind::ScaledLogRecentred)],
                EulerFamily::All => vec![
                    (
                        "nth_root",
                        ChartFamilyKind::NthRoot {
                            base: Complex::new(1.0, 0.0),
                        },
                    ),
                    ("scaled_log", ChartFamilyKind::ScaledLogRecentred),
                ],
            };
            let mut tables: Vec<(&str, ConvergenceReport)> = Vec::new();
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            for (name, kind) in kinds {
                let fam = chart_uniformization(kind)?;
                let report = convergence_report(&fam, radii, n_list, *samples)?;
                for row in &report.rows {
                    for _ in 0..*interior_samples {
                        let rho = row.r * rng.random_range(0.0..1.0f64).sqrt();
                        let z =
                            Complex::from_polar(rho, rng.random_range(0.0..std::f64::consts::TAU));
                        let e = (fam.member(row.n, z)? - fam.limit(z)?).norm();
                        if e > row.sup_error + 1e-12 {
                            return Err(CliError::Core(Error::NumericFailure {
                                message: format!(
                                    "interior error exceeds the boundary maximum at {z}"
                                ),
                                residual: e - row.sup_error,
                            }));
                        }
                    }
                }
                tables.push((name, report));
            }
            let document = if format == Some(Format::Json) {
                let rows: Vec<_> = tables
                    .iter()
                    .flat_map(|(name, rep)| {
                        rep.rows.iter().map(move |r| {
                            json!({"family": name, "r": r.r, "n": r.n, "sup_error": r.sup_error,
                                   "arg_max": r.arg_max})
                        })
                    })
                    .collect();
                let violations: Vec<_> = tables
                    .iter()
                    .flat_map(|(_, rep)| rep.violations.clone())
                    .collect();
                to_json(&json!({
                    "seed": config.seed,
                    "samples": samples,
                    "interior_samples": interior_samples,
                    "rows": rows,
                    "violations": violations,
                }))
            } else {
                let mut out = String::from("family,r,n,sup_error,arg_max_re,arg_max_im\n");
                for (name, rep) in &tables {
                    for r in &rep.rows {
                        let _ = writeln!(
                            out,
                            "{name},{},{},{},{},{}",
                            format_sig(r.r),
                            r.n,
                            format_sig(r.sup_error),
                            format_sig(r.arg_max.re),
                            format_sig(r.arg_max.im)
                        );
                    }
                }
                if *interior_samples > 0 {
                    let _ = writeln!(
                        out,
                        "# seed={} interior_samples={interior_samples}",
                        config.seed
                    );
                }
                out
            };
            ok(document)
        }
    }
}

/// Full entry point: parses `args`, runs, writes the document and returns
/// the exit status.
pub fn main_with<I, T>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
    env_tol: Option<&str>,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let outcome = match run(&config, stdin, env_tol) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return e.exit_code();
        }
    };
    let written = match &config.out {
        Some(p) => std::fs::write(p, outcome.document.as_bytes()),
        None => stdout.write_all(outcome.document.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return 2;
    }
    outcome.status
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(0.12453938390), "0.1245393839");
        assert_eq!(format_sig(1.0), "1.000000000");
        assert_eq!(format_sig(0.0013578962), "0.001357896200");
        assert_eq!(format_sig(0.0), "0");
        assert_eq!(format_sig(1e-12), "1.000000000e-12");
    }

    #[test]
    fn env_and_flag_tolerances() {
        let c = RunConfig::try_parse_from(["logrs", "info", "--tol-slit", "1e-8"]).unwrap();
        let t = c.tolerances(Some("1e-6")).unwrap();
        assert_eq!((t.dist, t.slit, t.branch), (1e-6, 1e-8, 1e-9));
        assert!(c.tolerances(Some("abc")).is_err());
    }
}
