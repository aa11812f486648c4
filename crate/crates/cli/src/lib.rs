//! Command-line front end for `stepwaves`.
//!
//! [`parse`] turns arguments into a [`RunConfig`], [`run`] evaluates it into a
//! [`Report`], and [`emit`] writes the report with a metadata header.

pub mod emit;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};
use stepwaves::dispersion::{critical_curve, g, roots};
use stepwaves::exp_asym::{late_order_diagnostics, stokes_lines, switched_wave, DiscriminantRegime};
use stepwaves::fourier_surface::{fourier_amplitude, SurfaceProfile};
use stepwaves::resummation::{log_log_slope, reconstruct_leading_order, LadderChoice};
use stepwaves::{BranchedConstants, Error, Family, FlowParams, ScaledParams};

use emit::{complex, num};
pub use emit::{OutputFormat, Report, Table};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Largest number of points a grid may request.
pub const MAX_GRID: usize = 1_000_000;

const DEFAULT_STEP: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Domain,
    Critical,
    Convergence,
    Io,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Usage => 2,
            ErrorKind::Domain | ErrorKind::Critical => 3,
            ErrorKind::Convergence => 4,
            ErrorKind::Io => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ErrorKind::Usage => "usage",
            ErrorKind::Domain => "domain",
            ErrorKind::Critical => "critical",
            ErrorKind::Convergence => "convergence",
            ErrorKind::Io => "io",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        CliError { kind: ErrorKind::Usage, message: msg.into() }
    }

    /// The one-line JSON written to stderr.
    pub fn to_json_line(&self) -> String {
        let mut m = Map::new();
        m.insert("error".into(), self.kind.as_str().into());
        m.insert("message".into(), self.message.clone().into());
        Value::Object(m).to_string()
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let kind = match e {
            Error::Domain(_) => ErrorKind::Domain,
            Error::Critical(_) => ErrorKind::Critical,
            Error::Convergence(_) => ErrorKind::Convergence,
        };
        CliError { kind, message: e.to_string() }
    }
}

const BROKEN_PIPE: &str = "output pipe closed";

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        let message = if e.kind() == io::ErrorKind::BrokenPipe { BROKEN_PIPE.to_string() } else { e.to_string() };
        CliError { kind: ErrorKind::Io, message }
    }
}

/// Evenly spaced points `start:end:count`, or a single value.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl Grid {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = text.split(':').collect();
        let value = |s: &str| {
            s.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::usage(format!("bad number '{s}' in grid '{text}'")))
        };
        match parts.as_slice() {
            [x] => {
                let x = value(x)?;
                Ok(Grid { start: x, end: x, count: 1 })
            }
            [a, b, n] => {
                let count: usize =
                    n.trim().parse().map_err(|_| CliError::usage(format!("bad count '{n}' in grid '{text}'")))?;
                if count == 0 || count > MAX_GRID {
                    return Err(CliError::usage(format!("grid count must be in 1..={MAX_GRID}, got {count}")));
                }
                let (start, end) = (value(a)?, value(b)?);
                if count > 1 && end <= start {
                    return Err(CliError::usage(format!("grid '{text}' must increase")));
                }
                Ok(Grid { start, end, count })
            }
            _ => Err(CliError::usage(format!("grid '{text}' is not start:end:count"))),
        }
    }

    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let h = (self.end - self.start) / (self.count - 1) as f64;
        (0..self.count).map(|i| if i + 1 == self.count { self.end } else { self.start + h * i as f64 }).collect()
    }

    fn describe(&self) -> Value {
        let mut m = Map::new();
        m.insert("start".into(), num(self.start));
        m.insert("end".into(), num(self.end));
        m.insert("count".into(), self.count.into());
        Value::Object(m)
    }
}

/// Physical parameters for the commands that need them.
#[derive(Debug, Clone, PartialEq)]
pub enum Params {
    None,
    Flow(FlowParams<f64>),
    Scaled(ScaledParams<f64>),
    Constants { beta: f64, tau: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Classify,
    Roots { ladder: usize },
    CriticalCurve { bond: Grid },
    Surface { phi: Grid },
    StokesLines { points: usize },
    Amplitudes { phi: Grid, tolerance: f64 },
    LateOrders { zeta: f64, n_max: usize, from: usize },
    Resum { zeta: Grid, ladder: LadderChoice, epsilons: Vec<f64> },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Classify => "classify",
            Command::Roots { .. } => "roots",
            Command::CriticalCurve { .. } => "critical-curve",
            Command::Surface { .. } => "surface",
            Command::StokesLines { .. } => "stokes-lines",
            Command::Amplitudes { .. } => "amplitudes",
            Command::LateOrders { .. } => "late-orders",
            Command::Resum { .. } => "resum",
        }
    }

    fn default_format(&self) -> OutputFormat {
        match self {
            Command::CriticalCurve { .. }
            | Command::Surface { .. }
            | Command::StokesLines { .. }
            | Command::LateOrders { .. } => OutputFormat::Csv,
            _ => OutputFormat::Json,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub params: Params,
    pub format: OutputFormat,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    /// Header echoed into every output: tool, version, command and all parameters.
    pub fn metadata(&self) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("tool".into(), "stepwaves".into());
        m.insert("version".into(), VERSION.into());
        m.insert("command".into(), self.command.name().into());
        let mut p = Map::new();
        match &self.params {
            Params::None => {}
            Params::Flow(f) => {
                p.insert("froude".into(), num(f.froude));
                p.insert("bond".into(), num(f.bond));
                p.insert("step".into(), num(f.step_height));
            }
            Params::Scaled(s) => {
                let f = s.unscale();
                p.insert("epsilon".into(), num(s.epsilon));
                p.insert("beta".into(), num(s.beta));
                p.insert("tau".into(), num(s.tau));
                p.insert("step".into(), num(s.step_height()));
                p.insert("froude".into(), num(f.froude));
                p.insert("bond".into(), num(f.bond));
            }
            Params::Constants { beta, tau } => {
                p.insert("beta".into(), num(*beta));
                p.insert("tau".into(), num(*tau));
            }
        }
        match &self.command {
            Command::Classify => {}
            Command::Roots { ladder } => {
                p.insert("ladder".into(), (*ladder).into());
            }
            Command::CriticalCurve { bond } => {
                p.insert("bond_grid".into(), bond.describe());
            }
            Command::Surface { phi } => {
                p.insert("phi_grid".into(), phi.describe());
            }
            Command::StokesLines { points } => {
                p.insert("points".into(), (*points).into());
            }
            Command::Amplitudes { phi, tolerance } => {
                p.insert("phi_grid".into(), phi.describe());
                p.insert("tolerance".into(), num(*tolerance));
            }
            Command::LateOrders { zeta, n_max, from } => {
                p.insert("zeta".into(), num(*zeta));
                p.insert("n_max".into(), (*n_max).into());
                p.insert("from".into(), (*from).into());
            }
            Command::Resum { zeta, ladder, epsilons } => {
                p.insert("zeta_grid".into(), zeta.describe());
                p.insert("ladder".into(), ladder.as_str().into());
                p.insert("epsilons".into(), Value::Array(epsilons.iter().map(|&e| num(e)).collect()));
            }
        }
        m.insert("parameters".into(), Value::Object(p));
        m.insert(
            "format".into(),
            match self.format {
                OutputFormat::Csv => "csv",
                OutputFormat::Json => "json",
            }
            .into(),
        );
        m
    }
}

#[derive(Debug, Parser)]
#[command(name = "stepwaves", version, about = "Gravity-capillary waves over a small step")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum LadderArg {
    Exact,
    Integer,
}

#[derive(Debug, Args)]
struct ParamArgs {
    /// Froude number F.
    #[arg(long, allow_negative_numbers = true)]
    froude: Option<f64>,
    /// Bond number B.
    #[arg(long, allow_negative_numbers = true)]
    bond: Option<f64>,
    /// Step height δ.
    #[arg(long, allow_negative_numbers = true)]
    step: Option<f64>,
    /// Small parameter ε (resum accepts a comma-separated sweep).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    epsilon: Vec<f64>,
    /// Scaled Froude parameter β, with F² = βε.
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    /// Scaled Bond parameter τ, with B = βτε².
    #[arg(long, allow_negative_numbers = true)]
    tau: Option<f64>,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output format (defaults to json for reports, csv for sampled curves).
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Write to this file instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Region of the (F, B) plane and the wave-bearing roots.
    Classify {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Real, complex and imaginary roots of the dispersion relation.
    Roots {
        #[command(flatten)]
        params: ParamArgs,
        /// Number of imaginary roots to report.
        #[arg(long, default_value_t = 10)]
        ladder: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// The coalescence curve F_m(B).
    CriticalCurve {
        /// Bond-number grid start:end:count.
        #[arg(long)]
        bond: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Residue-built surface θ(φ) and elevation.
    Surface {
        #[command(flatten)]
        params: ParamArgs,
        /// Potential grid start:end:count.
        #[arg(long, allow_hyphen_values = true)]
        phi: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Stokes lines of both wave families.
    StokesLines {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 101)]
        points: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Wave amplitudes from Fourier residues and from Stokes switching.
    Amplitudes {
        #[command(flatten)]
        params: ParamArgs,
        /// Potential value or grid start:end:count.
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        phi: String,
        /// Relative gap below which the amplitudes count as equal.
        #[arg(long, default_value_t = 1e-13)]
        tolerance: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Ratio test of the outer coefficients against factorial-over-power growth.
    LateOrders {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        zeta: f64,
        #[arg(long, default_value_t = 50)]
        n_max: usize,
        /// Smallest order included in the reported maximum deviation.
        #[arg(long, default_value_t = 20)]
        from: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Leading-order surface rebuilt from imaginary-axis residues.
    Resum {
        #[command(flatten)]
        params: ParamArgs,
        /// ζ grid start:end:count inside (0, 1).
        #[arg(long)]
        zeta: String,
        #[arg(long, value_enum, default_value = "exact")]
        ladder: LadderArg,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Needs {
    Flow,
    Constants,
    Scaled,
}

fn resolve_params(p: &ParamArgs, needs: Needs, allow_sweep: bool) -> Result<Params, CliError> {
    let physical = p.froude.is_some() || p.bond.is_some();
    let scaled = !p.epsilon.is_empty() || p.beta.is_some() || p.tau.is_some();
    if physical && scaled {
        return Err(CliError::usage("give either --froude/--bond or --epsilon/--beta/--tau, not both"));
    }
    if p.epsilon.len() > 1 && !allow_sweep {
        return Err(CliError::usage("only resum accepts several --epsilon values"));
    }
    let step = p.step.unwrap_or(DEFAULT_STEP);
    match needs {
        Needs::Flow if physical => {
            let (Some(f), Some(b)) = (p.froude, p.bond) else {
                return Err(CliError::usage("--froude and --bond must be given together"));
            };
            Ok(Params::Flow(FlowParams::new(f, b, step)?))
        }
        Needs::Flow | Needs::Scaled => {
            let (Some(&e), Some(beta), Some(tau)) = (p.epsilon.first(), p.beta, p.tau) else {
                let hint = if needs == Needs::Flow { "--froude/--bond or " } else { "" };
                return Err(CliError::usage(format!("need {hint}--epsilon, --beta and --tau")));
            };
            let s = ScaledParams::with_step(e, beta, tau, step)?;
            Ok(if needs == Needs::Flow { Params::Flow(s.unscale()) } else { Params::Scaled(s) })
        }
        Needs::Constants => {
            if physical || p.step.is_some() || !p.epsilon.is_empty() {
                return Err(CliError::usage("this command takes only --beta and --tau"));
            }
            let (Some(beta), Some(tau)) = (p.beta, p.tau) else {
                return Err(CliError::usage("need --beta and --tau"));
            };
            BranchedConstants::new(beta, tau)?;
            Ok(Params::Constants { beta, tau })
        }
    }
}

fn format_of(out: &OutputArgs, command: &Command) -> OutputFormat {
    match out.format {
        Some(FormatArg::Csv) => OutputFormat::Csv,
        Some(FormatArg::Json) => OutputFormat::Json,
        None => command.default_format(),
    }
}

/// Parses a full argument list (program name first).
///
/// `Ok(Err(text))` carries help or version text that should be printed as is.
pub fn parse<I, T>(args: I) -> Result<Result<RunConfig, String>, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind as K;
            if matches!(e.kind(), K::DisplayHelp | K::DisplayVersion | K::DisplayHelpOnMissingArgumentOrSubcommand) {
                return Ok(Err(e.to_string()));
            }
            let first =
                e.to_string().lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ").to_string();
            return Err(CliError::usage(first));
        }
    };
    let (command, params, out) = match cli.command {
        Sub::Classify { params, out } => (Command::Classify, resolve_params(&params, Needs::Flow, false)?, out),
        Sub::Roots { params, ladder, out } => {
            if ladder > MAX_GRID {
                return Err(CliError::usage(format!("--ladder is capped at {MAX_GRID}")));
            }
            (Command::Roots { ladder }, resolve_params(&params, Needs::Flow, false)?, out)
        }
        Sub::CriticalCurve { bond, out } => (Command::CriticalCurve { bond: Grid::parse(&bond)? }, Params::None, out),
        Sub::Surface { params, phi, out } => {
            (Command::Surface { phi: Grid::parse(&phi)? }, resolve_params(&params, Needs::Flow, false)?, out)
        }
        Sub::StokesLines { params, points, out } => {
            if !(2..=MAX_GRID).contains(&points) {
                return Err(CliError::usage(format!("--points must be in 2..={MAX_GRID}")));
            }
            (Command::StokesLines { points }, resolve_params(&params, Needs::Constants, false)?, out)
        }
        Sub::Amplitudes { params, phi, tolerance, out } => (
            Command::Amplitudes { phi: Grid::parse(&phi)?, tolerance },
            resolve_params(&params, Needs::Scaled, false)?,
            out,
        ),
        Sub::LateOrders { params, zeta, n_max, from, out } => {
            if !(3..=2000).contains(&n_max) {
                return Err(CliError::usage("--n-max must be in 3..=2000"));
            }
            (Command::LateOrders { zeta, n_max, from }, resolve_params(&params, Needs::Constants, false)?, out)
        }
        Sub::Resum { params, zeta, ladder, out } => {
            let resolved = resolve_params(&params, Needs::Scaled, true)?;
            let ladder = match ladder {
                LadderArg::Exact => LadderChoice::Exact,
                LadderArg::Integer => LadderChoice::Integer,
            };
            (Command::Resum { zeta: Grid::parse(&zeta)?, ladder, epsilons: params.epsilon.clone() }, resolved, out)
        }
    };
    let format = format_of(&out, &command);
    Ok(Ok(RunConfig { command, params, format, output: out.output }))
}

fn flow_of(params: &Params) -> &FlowParams<f64> {
    match params {
        Params::Flow(f) => f,
        _ => unreachable!("flow commands resolve flow parameters"),
    }
}

fn scaled_of(params: &Params) -> &ScaledParams<f64> {
    match params {
        Params::Scaled(s) => s,
        _ => unreachable!("scaled commands resolve scaled parameters"),
    }
}

fn constants_of(params: &Params) -> (f64, f64) {
    match params {
        Params::Constants { beta, tau } => (*beta, *tau),
        _ => unreachable!("commands on β, τ resolve constants"),
    }
}

fn family_str(f: Family) -> &'static str {
    f.name()
}

/// Evaluates the configured command.
pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    let mut r = Report::default();
    match &config.command {
        Command::Classify => {
            let flow = flow_of(&config.params);
            let rs = roots(flow, 0)?;
            r.field("region", rs.region.as_str());
            r.field("k0", complex(rs.k0));
            r.field("k1", complex(rs.k1));
            r.field("near_critical", rs.near_critical);
            r.field("residual_bound", num(rs.residual_bound));
        }
        Command::Roots { ladder } => {
            let flow = flow_of(&config.params);
            let rs = roots(flow, *ladder)?;
            r.field("region", rs.region.as_str());
            r.field("near_critical", rs.near_critical);
            r.field("residual_bound", num(rs.residual_bound));
            let mut rows = Vec::new();
            let mut push = |kind: &str, index: usize, k: num_complex::Complex<f64>| {
                rows.push(vec![kind.into(), index.into(), num(k.re), num(k.im), num(g(k, flow).norm())]);
            };
            if let Some(k) = rs.k0 {
                push("k0", 0, k);
            }
            if let Some(k) = rs.k1 {
                push("k1", 0, k);
            }
            for (i, &b) in rs.beta_ladder.iter().enumerate() {
                push("ladder", i + 1, num_complex::Complex::new(0.0, b));
            }
            r.table = Some(Table { name: "roots", columns: vec!["kind", "index", "re", "im", "abs_g"], rows });
        }
        Command::CriticalCurve { bond } => {
            let curve = critical_curve((bond.start, bond.end), bond.count)?;
            r.field("warnings", Value::Array(curve.warnings.iter().map(|w| w.clone().into()).collect()));
            let rows = curve
                .points
                .iter()
                .map(|p| vec![num(p.bond), num(p.froude), num(p.k_star), num(p.residual_g), num(p.residual_g_prime)])
                .collect();
            r.table = Some(Table {
                name: "points",
                columns: vec!["bond", "froude", "k_star", "residual_g", "residual_g_prime"],
                rows,
            });
        }
        Command::Surface { phi } => {
            let flow = flow_of(&config.params);
            let rs = roots(flow, 0)?;
            let p = SurfaceProfile::build(flow, &rs, phi.points())?;
            r.field("region", rs.region.as_str());
            r.field("k0", complex(Some(p.k0)));
            r.field("k1", complex(Some(p.k1)));
            r.field("ladder_terms", p.terms_used);
            r.field("tail_bound", num(p.tail_bound));
            r.field("origin_index", p.origin_index.map_or(Value::Null, Value::from));
            let rows = (0..p.phi_grid.len())
                .map(|i| {
                    vec![num(p.phi_grid[i]), num(p.theta[i]), num(p.y[i]), num(p.wave_part[i]), num(p.ladder_part[i])]
                })
                .collect();
            r.table = Some(Table { name: "samples", columns: vec!["phi", "theta", "y", "wave", "ladder"], rows });
        }
        Command::StokesLines { points } => {
            let (beta, tau) = constants_of(&config.params);
            let c = BranchedConstants::new(beta, tau)?;
            let lines = stokes_lines(&c, *points)?;
            r.field("discriminant", num(c.discriminant()));
            let mut rows = Vec::new();
            for line in &lines {
                r.field(&format!("crossing_{}", family_str(line.family)), num(line.crossing_point));
                let regime = match line.regime {
                    DiscriminantRegime::Positive => "positive",
                    DiscriminantRegime::Negative => "negative",
                };
                for (s, w) in line.s.iter().zip(&line.polyline) {
                    rows.push(vec![family_str(line.family).into(), regime.into(), num(*s), num(w.re), num(w.im)]);
                }
            }
            r.table = Some(Table { name: "lines", columns: vec!["family", "regime", "s", "phi", "psi"], rows });
        }
        Command::Amplitudes { phi, tolerance } => {
            let s = scaled_of(&config.params);
            let c = s.constants();
            c.require_noncritical()?;
            let mut rows = Vec::new();
            let mut all_equal = true;
            for &x in &phi.points() {
                for fam in Family::BOTH {
                    if c.d(fam).is_err() {
                        continue;
                    }
                    let a = fourier_amplitude(s, &c, x, fam)?.amplitude;
                    let w = switched_wave(s, &c, fam, x)?;
                    let gap = if a == 0.0 { (a - w.amplitude).abs() } else { (a - w.amplitude).abs() / a };
                    let equal = gap <= *tolerance;
                    all_equal &= equal;
                    rows.push(vec![
                        num(x),
                        family_str(fam).into(),
                        num(a),
                        num(w.amplitude),
                        num(gap),
                        equal.into(),
                        num(w.value),
                    ]);
                }
            }
            r.field("discriminant", num(c.discriminant()));
            r.field("all_equal", all_equal);
            r.table = Some(Table {
                name: "amplitudes",
                columns: vec![
                    "phi",
                    "family",
                    "fourier_amplitude",
                    "exp_asym_amplitude",
                    "relative_gap",
                    "equal",
                    "switched_value",
                ],
                rows,
            });
        }
        Command::LateOrders { zeta, n_max, from } => {
            let (beta, tau) = constants_of(&config.params);
            let rep = late_order_diagnostics(beta, tau, *zeta, *n_max)?;
            r.field("chi_abs", num(rep.chi_abs));
            r.field("max_deviation", rep.max_deviation_from(*from).map_or(Value::Null, num));
            let rows = rep
                .records
                .iter()
                .map(|x| vec![x.n.into(), num(x.ratio), num(x.target), num(x.normalized())])
                .collect();
            r.table = Some(Table { name: "orders", columns: vec!["n", "ratio", "target", "normalized"], rows });
        }
        Command::Resum { zeta, ladder, epsilons } => {
            let base = scaled_of(&config.params);
            let grid = zeta.points();
            let mut runs = Vec::new();
            for &e in epsilons {
                let s = ScaledParams::new(e, base.beta, base.tau, base.delta_bar)?;
                runs.push(reconstruct_leading_order(&s, &grid, *ladder)?);
            }
            let slopes: Vec<Value> = (0..grid.len())
                .map(|j| {
                    let samples: Vec<(f64, f64)> =
                        runs.iter().map(|run| (run.epsilon, run.points[j].deviation)).collect();
                    if samples.len() < 2 {
                        Value::Null
                    } else {
                        log_log_slope(&samples).map_or(Value::Null, num)
                    }
                })
                .collect();
            let warnings: Vec<Value> =
                runs.iter().flat_map(|run| run.warnings.iter().map(|w| w.clone().into())).collect();
            r.field("ladder", ladder.as_str());
            r.field("warnings", Value::Array(warnings));
            let mut rows = Vec::new();
            for run in &runs {
                for (j, p) in run.points.iter().enumerate() {
                    rows.push(vec![
                        num(run.epsilon),
                        num(p.zeta),
                        p.n_used.into(),
                        num(p.value),
                        num(p.target),
                        num(p.deviation),
                        p.capped.into(),
                        slopes[j].clone(),
                    ]);
                }
            }
            r.table = Some(Table {
                name: "points",
                columns: vec!["epsilon", "zeta", "n_used", "value", "target", "deviation", "capped", "slope"],
                rows,
            });
        }
    }
    Ok(r)
}

/// Writes the report in the configured format to `out`.
pub fn emit<W: Write>(config: &RunConfig, report: &Report, out: W) -> io::Result<()> {
    let meta = config.metadata();
    match config.format {
        OutputFormat::Csv => emit::write_csv(out, &meta, report),
        OutputFormat::Json => emit::write_json(out, &meta, report),
    }
}

/// Parses, runs and writes; returns the process exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let result = parse(args).and_then(|parsed| match parsed {
        Err(text) => {
            let _ = write!(stdout, "{text}");
            Ok(None)
        }
        Ok(config) => {
            let report = run(&config)?;
            match &config.output {
                Some(path) => {
                    let mut w = BufWriter::new(File::create(path)?);
                    emit(&config, &report, &mut w)?;
                    w.flush()?;
                }
                None => emit(&config, &report, &mut *stdout)?,
            }
            Ok(Some(()))
        }
    });
    match result {
        Ok(_) => 0,
        // A closed downstream pipe (e.g. `| head`) is not an error of the run.
        Err(CliError { kind: ErrorKind::Io, ref message }) if message == BROKEN_PIPE => 0,
        Err(e) => {
            let _ = writeln!(stderr, "{}", e.to_json_line());
            e.kind.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use clap::CommandFactory;

    use super::*;

    #[test]
    fn argument_definitions_are_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn grids() {
        assert_eq!(Grid::parse("-1:1:3").unwrap().points(), vec![-1.0, 0.0, 1.0]);
        assert_eq!(Grid::parse("0.5").unwrap().points(), vec![0.5]);
        assert!(Grid::parse("1:0:5").is_err());
        assert!(Grid::parse("0:1:0").is_err());
        assert!(Grid::parse("0:1").is_err());
    }
}
