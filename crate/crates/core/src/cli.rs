//! Command-line front end.
//!
//! Every subcommand produces either a CSV table or a JSON document on
//! standard output (or `--out`). Exit codes: 0 success, 1 verification or
//! internal invariant failure, 2 argument or domain error.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::Complex;
use serde_json::{json, Map, Value};

use crate::dense::{self, ComplexVector, RealMatrix};
use crate::error::Error;
use crate::evolution::{self, EvolutionConfig, Frame};
use crate::maps::DysonMap;
use crate::metric::{self, MetricPolynomial, MetricSample};
use crate::model;
use crate::report::{fmt_f64, svg_line_plot, to_json, Series, Table};
use crate::verify::{self, VerifyOptions};
use crate::MODEL_VERSION;

/// Largest dimension accepted by `verify`.
const VERIFY_N_LIMIT: usize = 16;

#[derive(Debug, Parser)]
#[command(name = "ptmodel", version, about = "Exactly solvable N-level PT-symmetric toy model")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the table or document here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Also write an SVG line plot (scan only).
    #[arg(long, global = true, value_name = "PATH")]
    pub svg: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanQuantity {
    MetricEigs,
    Anisotropy,
    CoriolisNorm,
    Defectiveness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FrameArg {
    SFull,
    SAdiabatic,
    PFrame,
}

impl From<FrameArg> for Frame {
    fn from(f: FrameArg) -> Self {
        match f {
            FrameArg::SFull => Frame::SFull,
            FrameArg::SAdiabatic => Frame::SAdiabatic,
            FrameArg::PFrame => Frame::PFrame,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dump the Hamiltonian H(τ).
    Hamiltonian {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        tau: f64,
    },
    /// Energies, biorthogonal pairing and defectiveness at one time.
    Spectrum {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        tau: f64,
    },
    /// Dump a metric and its eigenvalues (minimal metric by default).
    Metric {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        tau: f64,
        /// Three-level g family member.
        #[arg(long, allow_negative_numbers = true)]
        g: Option<f64>,
        /// Two-level α family member, α in (0, π/2).
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Integer coefficient table of the metric eigenvalue polynomials.
    Pascal {
        #[arg(long)]
        n: usize,
    },
    /// Sample a quantity on an inclusive τ grid.
    Scan {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        what: ScanQuantity,
        #[arg(long, default_value_t = 0.0)]
        tau_min: f64,
        #[arg(long, default_value_t = 0.95)]
        tau_max: f64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        /// Use the three-level g family (metric-eigs only).
        #[arg(long, allow_negative_numbers = true)]
        g: Option<f64>,
    },
    /// Coriolis term Σ(τ); finite differences when --h is given.
    Coriolis {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        tau: f64,
        #[arg(long)]
        h: Option<f64>,
    },
    /// Integrate the Schrödinger equation in one frame.
    Evolve {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = FrameArg::SFull)]
        frame: FrameArg,
        #[arg(long, default_value_t = 0.0)]
        tau0: f64,
        #[arg(long)]
        tau1: f64,
        #[arg(long)]
        step: f64,
        /// Initial state, one `re,im` line per component.
        #[arg(long, value_name = "FILE")]
        psi0: Option<PathBuf>,
    },
    /// Run every invariant check up to a dimension.
    Verify {
        #[arg(long, default_value_t = 7)]
        n_max: usize,
        #[arg(long, hide = true)]
        corrupt_coefficients: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Hamiltonian { .. } => "hamiltonian",
            Command::Spectrum { .. } => "spectrum",
            Command::Metric { .. } => "metric",
            Command::Pascal { .. } => "pascal",
            Command::Scan { .. } => "scan",
            Command::Coriolis { .. } => "coriolis",
            Command::Evolve { .. } => "evolve",
            Command::Verify { .. } => "verify",
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Model(Error),
    Usage(String),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Model(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Model(
                Error::Contract(_) | Error::Ambiguous(_) | Error::Inconsistent(_) | Error::NoConvergence { .. },
            ) => 1,
            _ => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Model(e) => write!(f, "{e}"),
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

/// Result of a command before anything is written.
#[derive(Debug, Default)]
pub struct Outcome {
    pub body: Vec<u8>,
    pub svg: Option<String>,
    pub warnings: Vec<String>,
    /// Names of failed verification checks; nonempty means exit code 1.
    pub failures: Vec<String>,
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn require_n(n: usize) -> CliResult<()> {
    if n < 2 {
        return Err(Error::Argument("n must be ≥ 2".into()).into());
    }
    Ok(())
}

fn meta(command: &str, extra: Value) -> Value {
    let mut m = Map::new();
    m.insert("model-version".into(), json!(MODEL_VERSION));
    m.insert("command".into(), json!(command));
    if let Value::Object(extra) = extra {
        m.extend(extra);
    }
    Value::Object(m)
}

fn matrix_rows(table: &mut Table, field: &str, m: &RealMatrix) {
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            table.push([field.to_string(), (i + 1).to_string(), (j + 1).to_string(), fmt_f64(m[(i, j)])]);
        }
    }
}

fn vector_rows(table: &mut Table, field: &str, v: &[f64]) {
    for (i, x) in v.iter().enumerate() {
        table.push([field.to_string(), (i + 1).to_string(), String::new(), fmt_f64(*x)]);
    }
}

fn scalar_row(table: &mut Table, field: &str, value: String) {
    table.push([field.to_string(), String::new(), String::new(), value]);
}

fn dump_table() -> Table {
    Table::new(["field", "i", "j", "value"])
}

fn csv_bytes(table: &Table) -> CliResult<Vec<u8>> {
    table.to_csv().map_err(|e| CliError::Io(e.to_string()))
}

/// Parse and execute, returning the process exit code.
pub fn main_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli).and_then(|outcome| emit(&cli, outcome)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("ptmodel: {e}");
            e.exit_code()
        }
    }
}

fn write_target(path: Option<&Path>, bytes: &[u8]) -> CliResult<()> {
    let io_err = |e: io::Error| CliError::Io(format!("cannot write output: {e}"));
    match path {
        Some(p) => fs::write(p, bytes).map_err(io_err),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes).and_then(|_| out.flush()).map_err(io_err)
        }
    }
}

fn emit(cli: &Cli, outcome: Outcome) -> CliResult<i32> {
    for w in &outcome.warnings {
        eprintln!("ptmodel: warning: {w}");
    }
    write_target(cli.out.as_deref(), &outcome.body)?;
    if let (Some(path), Some(svg)) = (&cli.svg, &outcome.svg) {
        write_target(Some(path), svg.as_bytes())?;
    }
    if outcome.failures.is_empty() {
        Ok(0)
    } else {
        eprintln!("ptmodel: verification failed: {}", outcome.failures.join(", "));
        Ok(1)
    }
}

/// Run the parsed command without touching standard output or files.
pub fn execute(cli: &Cli) -> CliResult<Outcome> {
    if cli.svg.is_some() && !matches!(cli.command, Command::Scan { .. }) {
        return Err(usage(format!("--svg is only supported by scan, not {}", cli.command.name())));
    }
    let f = cli.format;
    match &cli.command {
        Command::Hamiltonian { n, tau } => cmd_hamiltonian(f, *n, *tau),
        Command::Spectrum { n, tau } => cmd_spectrum(f, *n, *tau),
        Command::Metric { n, tau, g, alpha } => cmd_metric(f, *n, *tau, *g, *alpha),
        Command::Pascal { n } => cmd_pascal(f, *n),
        Command::Scan { n, what, tau_min, tau_max, steps, g } => {
            cmd_scan(f, *n, *what, *tau_min, *tau_max, *steps, *g, cli.svg.is_some())
        }
        Command::Coriolis { n, tau, h } => cmd_coriolis(f, *n, *tau, *h),
        Command::Evolve { n, frame, tau0, tau1, step, psi0 } => {
            let config = EvolutionConfig { n: *n, tau0: *tau0, tau1: *tau1, step: *step, frame: (*frame).into() };
            cmd_evolve(f, config, psi0.as_deref())
        }
        Command::Verify { n_max, corrupt_coefficients } => cmd_verify(f, *n_max, *corrupt_coefficients),
    }
}

fn cmd_hamiltonian(format: Format, n: usize, tau: f64) -> CliResult<Outcome> {
    require_n(n)?;
    let instance = model::ModelInstance::new(n, tau)?;
    let h = instance.hamiltonian();
    let mut warnings = Vec::new();
    let levels = if instance.is_physical() {
        Some(model::energies(n, tau)?.levels)
    } else {
        warnings.push(format!("tau = {tau} lies outside [0, 1]; the spectrum is not real there"));
        None
    };
    let body = match format {
        Format::Csv => {
            let mut t = dump_table();
            matrix_rows(&mut t, "matrix", &h);
            if let Some(l) = &levels {
                vector_rows(&mut t, "eigenvalue", l);
            }
            csv_bytes(&t)?
        }
        Format::Json => {
            let mut doc = json!({
                "n": n,
                "tau": tau,
                "matrix": dense::to_rows(&h),
                "meta": meta("hamiltonian", json!({"physical": instance.is_physical()})),
            });
            if let Some(l) = levels {
                doc["eigenvalues"] = json!(l);
            }
            to_json(&doc)
        }
    };
    Ok(Outcome { body, warnings, ..Default::default() })
}

fn cmd_spectrum(format: Format, n: usize, tau: f64) -> CliResult<Outcome> {
    require_n(n)?;
    let levels = model::energies(n, tau)?.levels;
    let defect = model::defectiveness_gauge(n, tau)?;
    let pairing = match model::biorthogonal_system(n, tau) {
        Ok(sys) => Some(sys.pairing),
        Err(Error::Degenerate(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let mut warnings = Vec::new();
    if pairing.is_none() {
        warnings.push(format!("H is a single Jordan block at tau = {tau}; no eigenbasis"));
    }
    let body = match format {
        Format::Csv => {
            let mut t = dump_table();
            vector_rows(&mut t, "eigenvalue", &levels);
            if let Some(p) = &pairing {
                vector_rows(&mut t, "pairing", p);
            }
            scalar_row(&mut t, "defectiveness", fmt_f64(defect));
            csv_bytes(&t)?
        }
        Format::Json => {
            let mut doc = json!({
                "n": n,
                "tau": tau,
                "eigenvalues": levels,
                "meta": meta("spectrum", json!({"defectiveness": defect})),
            });
            if let Some(p) = pairing {
                doc["pairing"] = json!(p);
            }
            to_json(&doc)
        }
    };
    Ok(Outcome { body, warnings, ..Default::default() })
}

fn cmd_metric(format: Format, n: usize, tau: f64, g: Option<f64>, alpha: Option<f64>) -> CliResult<Outcome> {
    require_n(n)?;
    let (family, sample): (String, MetricSample) = match (g, alpha) {
        (Some(_), Some(_)) => return Err(usage("--g and --alpha are mutually exclusive")),
        (Some(g), None) => {
            if n != 3 {
                return Err(Error::Argument(format!("--g selects the three-level family; n must be 3, got {n}")).into());
            }
            if !(0.0..=1.0).contains(&tau) {
                return Err(Error::Domain(format!("tau = {tau} is outside [0, 1]")).into());
            }
            (format!("g={g}"), metric::metric_n3_gfamily(tau, g)?)
        }
        (None, Some(alpha)) => {
            if n != 2 {
                return Err(Error::Argument(format!("--alpha selects the two-level family; n must be 2, got {n}")).into());
            }
            (format!("alpha={alpha}"), metric::metric_n2_alpha(tau, alpha)?)
        }
        (None, None) => {
            let poly = MetricPolynomial::solve(n)?;
            ("minimal".to_string(), metric::assemble_metric(&poly, tau)?)
        }
    };
    let negative = sample.eigenvalues.iter().filter(|&&v| v < 0.0).count();
    let positive = sample.is_positive_definite();
    let residual = sample.compatibility_residual()?;
    let aniso = metric::anisotropy(&sample).ok();
    let mut warnings = Vec::new();
    if negative > 0 {
        warnings.push(format!(
            "metric has {negative} negative eigenvalue(s) at tau = {tau}; it is not an admissible inner product"
        ));
    }
    let body = match format {
        Format::Csv => {
            let mut t = dump_table();
            matrix_rows(&mut t, "matrix", &sample.theta);
            vector_rows(&mut t, "eigenvalue", &sample.eigenvalues);
            scalar_row(&mut t, "negative_eigenvalues", negative.to_string());
            scalar_row(&mut t, "compatibility_residual", fmt_f64(residual));
            if let Some(a) = aniso {
                scalar_row(&mut t, "anisotropy", fmt_f64(a));
            }
            csv_bytes(&t)?
        }
        Format::Json => to_json(&json!({
            "n": n,
            "tau": tau,
            "matrix": dense::to_rows(&sample.theta),
            "eigenvalues": sample.eigenvalues,
            "meta": meta("metric", json!({
                "family": family,
                "positive-definite": positive,
                "negative-eigenvalues": negative,
                "compatibility-residual": residual,
                "anisotropy": aniso,
            })),
        })),
    };
    Ok(Outcome { body, warnings, ..Default::default() })
}

fn cmd_pascal(format: Format, n: usize) -> CliResult<Outcome> {
    let table = metric::pascal_table(n)?;
    let body = match format {
        Format::Csv => {
            let mut t = dump_table();
            for (k, row) in table.c.iter().enumerate() {
                for (m, c) in row.iter().enumerate() {
                    t.push(["pascal".to_string(), (k + 1).to_string(), (m + 1).to_string(), c.to_string()]);
                }
            }
            csv_bytes(&t)?
        }
        Format::Json => to_json(&json!({
            "n": n,
            "matrix": table.c,
            "meta": meta("pascal", json!({})),
        })),
    };
    Ok(Outcome { body, ..Default::default() })
}

fn scan_grid(tau_min: f64, tau_max: f64, steps: usize) -> CliResult<Vec<f64>> {
    if steps == 0 {
        return Err(Error::Argument("steps must be at least 1".into()).into());
    }
    if !(0.0 <= tau_min && tau_min < tau_max && tau_max <= 1.0) {
        return Err(Error::Domain(format!(
            "need 0 ≤ tau-min < tau-max ≤ 1, got [{tau_min}, {tau_max}]"
        ))
        .into());
    }
    Ok((0..=steps)
        .map(|i| {
            if i == steps {
                tau_max
            } else {
                tau_min + (tau_max - tau_min) * i as f64 / steps as f64
            }
        })
        .collect())
}

#[allow(clippy::too_many_arguments)]
fn cmd_scan(
    format: Format,
    n: usize,
    what: ScanQuantity,
    tau_min: f64,
    tau_max: f64,
    steps: usize,
    g: Option<f64>,
    want_svg: bool,
) -> CliResult<Outcome> {
    require_n(n)?;
    let taus = scan_grid(tau_min, tau_max, steps)?;
    if g.is_some() && what != ScanQuantity::MetricEigs {
        return Err(usage("--g applies to --what metric-eigs only"));
    }
    if g.is_some() && n != 3 {
        return Err(Error::Argument(format!("--g selects the three-level family; n must be 3, got {n}")).into());
    }
    let open_only = matches!(what, ScanQuantity::Anisotropy | ScanQuantity::CoriolisNorm);
    if open_only && tau_max >= 1.0 {
        return Err(Error::Domain("horizon excluded: this quantity diverges at tau = 1; use tau-max < 1".into()).into());
    }

    let (names, values, title, y_label): (Vec<String>, Vec<Vec<f64>>, String, &str) = match what {
        ScanQuantity::MetricEigs => {
            let poly = if g.is_none() { Some(MetricPolynomial::solve(n)?) } else { None };
            let mut rows = Vec::with_capacity(taus.len());
            for &tau in &taus {
                let sample = match g {
                    Some(g) => metric::metric_n3_gfamily(tau, g)?,
                    None => metric::assemble_metric(poly.as_ref().unwrap(), tau)?,
                };
                rows.push(sample.eigenvalues);
            }
            let title = match g {
                Some(g) => format!("Metric eigenvalues, N = 3, g = {g}"),
                None => format!("Minimal metric eigenvalues, N = {n}"),
            };
            ((1..=n).map(|k| format!("theta_{k}")).collect(), rows, title, "eigenvalue")
        }
        ScanQuantity::Anisotropy => {
            let poly = MetricPolynomial::solve(n)?;
            let rows = taus
                .iter()
                .map(|&t| Ok(vec![metric::anisotropy(&metric::assemble_metric(&poly, t)?)?]))
                .collect::<Result<Vec<_>, Error>>()?;
            (vec!["anisotropy".into()], rows, format!("Metric anisotropy, N = {n}"), "anisotropy")
        }
        ScanQuantity::CoriolisNorm => {
            let map = DysonMap::new(n)?;
            let rows = taus
                .iter()
                .map(|&t| Ok(vec![dense::norm_inf_complex(&map.coriolis(t)?.sigma)]))
                .collect::<Result<Vec<_>, Error>>()?;
            (vec!["coriolis_norm".into()], rows, format!("Coriolis term norm, N = {n}"), "norm")
        }
        ScanQuantity::Defectiveness => {
            let rows = taus
                .iter()
                .map(|&t| Ok(vec![model::defectiveness_gauge(n, t)?]))
                .collect::<Result<Vec<_>, Error>>()?;
            (vec!["defectiveness".into()], rows, format!("Defectiveness gauge, N = {n}"), "smallest singular value")
        }
    };

    let svg = want_svg.then(|| {
        let series: Vec<Series> = names
            .iter()
            .enumerate()
            .map(|(c, name)| Series {
                name: name.clone(),
                points: taus.iter().zip(&values).map(|(&t, row)| (t, row[c])).collect(),
            })
            .collect();
        svg_line_plot(&title, "tau", y_label, &series)
    });

    let what_name = what.to_possible_value().expect("no skipped variants").get_name().to_string();
    let body = match format {
        Format::Csv => {
            let mut t = Table::new(["tau", "series", "value"]);
            for (&tau, row) in taus.iter().zip(&values) {
                for (name, v) in names.iter().zip(row) {
                    t.push([fmt_f64(tau), name.clone(), fmt_f64(*v)]);
                }
            }
            csv_bytes(&t)?
        }
        Format::Json => {
            let mut series = Map::new();
            for (c, name) in names.iter().enumerate() {
                series.insert(name.clone(), json!(values.iter().map(|row| row[c]).collect::<Vec<_>>()));
            }
            to_json(&json!({
                "n": n,
                "what": what_name,
                "taus": taus,
                "series": series,
                "meta": meta("scan", json!({"g": g})),
            }))
        }
    };
    Ok(Outcome { body, svg, ..Default::default() })
}

fn cmd_coriolis(format: Format, n: usize, tau: f64, h: Option<f64>) -> CliResult<Outcome> {
    require_n(n)?;
    let map = DysonMap::new(n)?;
    let term = match h {
        Some(h) => map.coriolis_numeric(tau, h)?,
        None => map.coriolis(tau)?,
    };
    let re = term.sigma.map(|z| z.re);
    let im = term.sigma.map(|z| z.im);
    let method = if h.is_some() { "finite-difference" } else { "spectral" };
    let body = match format {
        Format::Csv => {
            let mut t = dump_table();
            matrix_rows(&mut t, "sigma_re", &re);
            matrix_rows(&mut t, "sigma_im", &im);
            csv_bytes(&t)?
        }
        Format::Json => to_json(&json!({
            "n": n,
            "tau": tau,
            "matrix": dense::to_rows(&im),
            "meta": meta("coriolis", json!({"part": "imaginary", "method": method, "h": h})),
        })),
    };
    Ok(Outcome { body, ..Default::default() })
}

/// Read an initial state: one `re,im` pair per line; blank lines and lines
/// starting with `#` are ignored.
pub fn parse_state(text: &str) -> CliResult<ComplexVector> {
    let mut values = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || usage(format!("initial state line {}: expected 're,im', got '{line}'", line_no + 1));
        let (re, im) = line.split_once(',').ok_or_else(bad)?;
        let re: f64 = re.trim().parse().map_err(|_| bad())?;
        let im: f64 = im.trim().parse().map_err(|_| bad())?;
        values.push(Complex::new(re, im));
    }
    Ok(ComplexVector::from_vec(values))
}

fn cmd_evolve(format: Format, config: EvolutionConfig, psi0: Option<&Path>) -> CliResult<Outcome> {
    require_n(config.n)?;
    config.validate()?;
    let map = DysonMap::new(config.n)?;
    let psi0 = match psi0 {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            parse_state(&text)?
        }
        None => evolution::default_initial_state(&map, config.tau0, config.frame)?,
    };
    let traj = evolution::evolve_with(&map, &config, &psi0)?;
    let body = match format {
        Format::Csv => {
            let mut header = vec!["tau".to_string(), "phys_norm".to_string()];
            for i in 1..=config.n {
                header.push(format!("re_{i}"));
                header.push(format!("im_{i}"));
            }
            let mut t = Table::new(header);
            for ((tau, norm), state) in traj.taus.iter().zip(&traj.phys_norm).zip(&traj.states) {
                let mut row = vec![fmt_f64(*tau), fmt_f64(*norm)];
                for z in state.iter() {
                    row.push(fmt_f64(z.re));
                    row.push(fmt_f64(z.im));
                }
                t.push(row);
            }
            csv_bytes(&t)?
        }
        Format::Json => {
            let states: Vec<Vec<[f64; 2]>> = traj
                .states
                .iter()
                .map(|s| s.iter().map(|z| [z.re, z.im]).collect())
                .collect();
            to_json(&json!({
                "n": config.n,
                "frame": config.frame.name(),
                "taus": traj.taus,
                "phys_norm": traj.phys_norm,
                "states": states,
                "meta": meta("evolve", json!({
                    "tau0": config.tau0,
                    "tau1": config.tau1,
                    "step": config.step,
                    "norm-drift": traj.norm_drift(),
                })),
            }))
        }
    };
    Ok(Outcome { body, ..Default::default() })
}

fn cmd_verify(format: Format, n_max: usize, corrupt: bool) -> CliResult<Outcome> {
    require_n(n_max)?;
    if n_max > VERIFY_N_LIMIT {
        return Err(Error::Argument(format!("n-max must be at most {VERIFY_N_LIMIT}")).into());
    }
    let mut options = VerifyOptions::new(n_max);
    if corrupt {
        options.table = verify::corrupted_table(n_max)?;
    }
    let report = verify::run(&options)?;
    let body = match format {
        Format::Csv => {
            let mut t = Table::new(["check", "status", "detail"]);
            for c in &report.checks {
                t.push([c.name, if c.passed { "pass" } else { "fail" }, c.detail.as_str()]);
            }
            csv_bytes(&t)?
        }
        Format::Json => to_json(&json!({
            "n_max": n_max,
            "checks": report.checks.iter().map(|c| json!({
                "name": c.name,
                "passed": c.passed,
                "detail": c.detail,
            })).collect::<Vec<_>>(),
            "meta": meta("verify", json!({})),
        })),
    };
    Ok(Outcome {
        body,
        failures: report.failed().into_iter().map(String::from).collect(),
        ..Default::default()
    })
}
