//! Command-line front end for `eisenlift`.
//!
//! [`run`] parses an argument list and returns the exit code together with
//! everything that would be written to stdout and stderr, so the binary is a
//! thin wrapper and tests can drive commands in-process.
//!
//! Exit codes: `0` success, `1` a verification failed, `2` invalid input. On
//! exit code 2 stderr holds a single line `error: invalid-input: <reason>`.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use eisenlift::eisenstein::{EisensteinId, SeriesCache};
use eisenlift::modsym::{decompose_cycle, hecke_reps};
use eisenlift::realquad::quad_invariants;
use eisenlift::thetalift::{verify_polygon_with, verify_triangle_with, RelationReport, ThetaLift};
use eisenlift::{Cusp, MatZ};
use serde_json::{json, Value};

mod selftest;

pub const CACHE_ENV: &str = "EISENLIFT_CACHE";

#[derive(Parser, Debug)]
#[command(name = "eisenlift", version, about = "Eisenstein series, modular symbols and their theta lifts")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Directory for the on-disk expansion cache (default: $EISENLIFT_CACHE, else memory only).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct Level {
    /// Level N.
    #[arg(long = "N", id = "N")]
    pub n: u32,
}

#[derive(Args, Debug, Clone)]
pub struct Prec {
    /// Number of integral q-powers.
    #[arg(long, default_value_t = 20, allow_negative_numbers = true)]
    pub prec: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SeriesName {
    #[value(name = "E")]
    E,
    #[value(name = "E2_00")]
    E200,
    #[value(name = "Ehat")]
    Ehat,
    #[value(name = "G")]
    G,
    #[value(name = "Ghat2")]
    Ghat2,
    #[value(name = "H")]
    H,
    #[value(name = "Siegel")]
    Siegel,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// q-expansion of an Eisenstein series or Siegel log-derivative.
    Expand {
        #[command(flatten)]
        level: Level,
        #[command(flatten)]
        prec: Prec,
        #[arg(long, value_enum)]
        series: SeriesName,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, allow_negative_numbers = true)]
        r: Option<i64>,
        #[arg(long, allow_negative_numbers = true)]
        p: Option<i64>,
        #[arg(long, allow_negative_numbers = true)]
        q: Option<i64>,
    },
    /// Caps and unimodular symbols of the cycle of a matrix.
    Decompose {
        #[command(flatten)]
        level: Level,
        /// Row-major `a,b,c,d`.
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    /// Theta lift of the cycle of a matrix.
    Lift {
        #[command(flatten)]
        level: Level,
        #[command(flatten)]
        prec: Prec,
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    /// Triangle relation for residues `n1,n2,n3`.
    VerifyTriangle {
        #[command(flatten)]
        level: Level,
        #[command(flatten)]
        prec: Prec,
        #[arg(long, allow_hyphen_values = true)]
        n: String,
    },
    /// Signed relation around a unimodular polygon, e.g. `--cusps 1/2,0/1,1/3,2/5`.
    VerifyPolygon {
        #[command(flatten)]
        level: Level,
        #[command(flatten)]
        prec: Prec,
        #[arg(long, allow_hyphen_values = true)]
        cusps: String,
    },
    /// Real-quadratic invariants of a hyperbolic matrix.
    Quad {
        #[command(flatten)]
        level: Level,
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    /// Coset representatives of the Hecke operator T_n.
    Hecke {
        #[command(flatten)]
        level: Level,
        #[arg(long)]
        n: u64,
    },
    /// Runs the built-in invariant checks.
    Selftest {
        #[command(flatten)]
        prec: Prec,
    },
}

/// Exit code and captured streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output { code: 0, stdout, stderr: String::new() }
    }

    fn invalid(reason: impl std::fmt::Display) -> Self {
        let reason = reason.to_string();
        let line = reason.lines().next().unwrap_or_default().trim().to_string();
        Output { code: 2, stdout: String::new(), stderr: format!("error: invalid-input: {line}\n") }
    }
}

type Invalid = String;

fn render(format: Format, text: String, value: Value) -> String {
    match format {
        Format::Text => text + "\n",
        Format::Json => serde_json::to_string_pretty(&value).expect("serializable") + "\n",
    }
}

fn level(l: &Level, geometric: bool) -> Result<u32, Invalid> {
    if geometric && l.n < 4 {
        return Err(format!("level {} must be at least 4", l.n));
    }
    if l.n == 0 {
        return Err("level must be positive".into());
    }
    Ok(l.n)
}

fn prec(p: &Prec) -> Result<i64, Invalid> {
    if p.prec < 1 {
        return Err(format!("precision {} must be at least 1", p.prec));
    }
    Ok(p.prec)
}

fn matrix(s: &str) -> Result<MatZ, Invalid> {
    s.parse::<MatZ>().map_err(|e| e.to_string())
}

fn need<T>(x: Option<T>, flag: &str, series: &str) -> Result<T, Invalid> {
    x.ok_or_else(|| format!("--{flag} is required for series {series}"))
}

fn series_id(name: SeriesName, n: u32, k: Option<u32>, r: Option<i64>, p: Option<i64>, q: Option<i64>) -> Result<EisensteinId, Invalid> {
    let id = match name {
        SeriesName::E => EisensteinId::e(need(k, "k", "E")?, need(p, "p", "E")?, need(q, "q", "E")?, n),
        SeriesName::E200 => EisensteinId::e2_00(n),
        SeriesName::Ehat => EisensteinId::ehat(need(k, "k", "Ehat")?, need(p, "p", "Ehat")?, need(q, "q", "Ehat")?, n),
        SeriesName::G => EisensteinId::g(need(k, "k", "G")?, need(r, "r", "G")?, n),
        SeriesName::Ghat2 => EisensteinId::ghat2(need(p, "p", "Ghat2")?, n),
        SeriesName::H => EisensteinId::h(need(p, "p", "H")?, need(q, "q", "H")?, n),
        SeriesName::Siegel => EisensteinId::siegel(need(p, "p", "Siegel")?, need(q, "q", "Siegel")?, n),
    };
    id.map_err(|e| e.to_string())
}

fn cache(cli: &Cli) -> Result<SeriesCache, Invalid> {
    let dir = cli.cache_dir.clone().or_else(|| std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from));
    match dir {
        Some(d) => SeriesCache::with_dir(&d).map_err(|e| e.to_string()),
        None => Ok(SeriesCache::in_memory()),
    }
}

fn report(format: Format, r: RelationReport) -> Output {
    let stdout = render(format, r.to_string(), r.to_json());
    let stderr = match &r.status {
        eisenlift::thetalift::RelationStatus::Rejected { reason } => format!("error: invalid-input: {reason}\n"),
        _ => String::new(),
    };
    Output { code: r.exit_code(), stdout, stderr }
}

fn dispatch(cli: &Cli) -> Result<Output, Invalid> {
    let f = cli.format;
    Ok(match &cli.command {
        Command::Expand { level: l, prec: p, series, k, r, p: pp, q } => {
            let (n, prec) = (level(l, false)?, prec(p)?);
            let id = series_id(*series, n, *k, *r, *pp, *q)?;
            let s = cache(cli)?.get(&id, prec).map_err(|e| e.to_string())?;
            Output::ok(render(f, s.to_string(), s.to_json()))
        }
        Command::Decompose { level: l, matrix: m } => {
            let n = level(l, true)?;
            let d = decompose_cycle(&matrix(m)?, n).map_err(|e| e.to_string())?;
            Output::ok(render(f, decomposition_text(&d), d.to_json()))
        }
        Command::Lift { level: l, prec: p, matrix: m } => {
            let (n, prec) = (level(l, true)?, prec(p)?);
            let g = matrix(m)?;
            let c = cache(cli)?;
            let series = ThetaLift::with_cache(n, prec, &c).and_then(|t| t.cycle(&g)).map_err(|e| e.to_string())?;
            let dec = if g == MatZ::identity() { None } else { Some(decompose_cycle(&g, n).map_err(|e| e.to_string())?) };
            let text = match &dec {
                Some(d) => format!("{series}\n{}", decomposition_text(d)),
                None => series.to_string(),
            };
            let value = json!({
                "N": n,
                "matrix": g.to_string(),
                "prec": prec,
                "series": series.to_json(),
                "decomposition": dec.as_ref().map(|d| d.to_json()),
            });
            Output::ok(render(f, text, value))
        }
        Command::VerifyTriangle { level: l, prec: p, n: t } => {
            let (n, prec) = (level(l, true)?, prec(p)?);
            let t = parse_list::<i64>(t, "--n")?;
            if t.len() != 3 {
                return Err(format!("--n needs three residues, got {}", t.len()));
            }
            report(f, verify_triangle_with(&cache(cli)?, n, t[0], t[1], t[2], prec))
        }
        Command::VerifyPolygon { level: l, prec: p, cusps } => {
            let (n, prec) = (level(l, true)?, prec(p)?);
            let cusps = parse_list::<Cusp>(cusps, "--cusps")?;
            report(f, verify_polygon_with(&cache(cli)?, n, &cusps, prec))
        }
        Command::Quad { level: l, matrix: m } => {
            let n = level(l, true)?;
            let q = quad_invariants(&matrix(m)?, n).map_err(|e| e.to_string())?;
            Output::ok(render(f, q.to_string(), q.to_json()))
        }
        Command::Hecke { level: l, n: deg } => {
            let n = level(l, true)?;
            let reps = hecke_reps(*deg, n).map_err(|e| e.to_string())?;
            let list: Vec<String> = reps.iter().map(MatZ::to_string).collect();
            Output::ok(render(f, list.join("\n"), json!({"N": n, "n": deg, "reps": list})))
        }
        Command::Selftest { prec: p } => {
            let results = selftest::run(prec(p)?);
            let failed = results.iter().filter(|r| !r.passed).count();
            let text = results.iter().map(selftest::Check::line).collect::<Vec<_>>().join("\n")
                + &format!("\n{} of {} checks passed", results.len() - failed, results.len());
            let value = json!({
                "checks": results.iter().map(selftest::Check::to_json).collect::<Vec<_>>(),
                "passed": failed == 0,
            });
            Output { code: i32::from(failed > 0), stdout: render(f, text, value), stderr: String::new() }
        }
    })
}

fn parse_list<T: std::str::FromStr>(s: &str, flag: &str) -> Result<Vec<T>, Invalid>
where
    T::Err: std::fmt::Display,
{
    s.split(',').map(|x| x.trim().parse::<T>().map_err(|e| format!("{flag}: {e}"))).collect()
}

fn decomposition_text(d: &eisenlift::modsym::CycleDecomposition) -> String {
    let mut lines = vec![format!("{:?} cycle of {}", d.kind, d.source).to_lowercase()];
    for c in &d.caps {
        lines.push(format!("cap {} x {} (gamma_r = {})", c.coeff, c.cusp, c.gamma_r));
    }
    for s in &d.symbols {
        lines.push(format!("symbol {} x {}{{0,inf}}", s.coeff, s.gamma));
    }
    lines.join("\n")
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    Output { code: if e.use_stderr() { 2 } else { 0 }, stdout: e.to_string(), stderr: String::new() }
                }
                _ => Output::invalid(e.to_string().trim_start_matches("error: ")),
            };
        }
    };
    dispatch(&cli).unwrap_or_else(Output::invalid)
}
