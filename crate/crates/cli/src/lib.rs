//! Command-line front end for `xyz_lab`.
//!
//! [`run`] parses an argument vector, executes one subcommand inside a rayon
//! pool of the requested size and returns the process exit code: `0` on
//! success, `1` for usage and validation errors, `2` when `verify-paper`
//! finds a mismatch.

// `!(a > b)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod verify;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex;
use xyz_lab::arith::{canonicalize, metrics, radical};
use xyz_lab::asymptotics::{dickman_rho, psi_estimate, saddle_point};
use xyz_lab::circle::{circle_identity, farey_dissection, major_arcs, WeightFunction};
use xyz_lab::report::{decimal6, jsonl, leaderboard_csv};
use xyz_lab::search::{
    census, density_ratio, extremal_by_smoothness, find_solutions, SearchConfig, Smoothness,
};
use xyz_lab::series::{
    sing_f, sing_f_limit, sing_fstar, sing_fstar_limit, sing_int, verify_euler_identity,
};
use xyz_lab::smooth::{enumerate_smooth_capped, psi_exact, DEFAULT_MEMORY_CAP};
use xyz_lab::{Error, Rational};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;

/// Environment variable consulted when `--threads` is absent.
pub const THREADS_ENV: &str = "XYZ_LAB_THREADS";

/// Default grid for `circle-check`.
pub const CIRCLE_GRID_X: [f64; 3] = [30.0, 50.0, 100.0];
pub const CIRCLE_GRID_Y: [u64; 3] = [5, 7, 13];
pub const CIRCLE_GRID_EPS: [f64; 2] = [0.1, 0.2];

#[derive(Debug, Parser)]
#[command(name = "xyz-lab", version, about = "Smooth solutions of X + Y = Z")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalOpts,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Output format
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report to this file instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: all cores)
    #[arg(long, global = true, env = THREADS_ENV)]
    pub threads: Option<usize>,
    /// Maximum number of smooth integers held in memory
    #[arg(long = "mem-cap", global = true)]
    pub mem_cap: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Jsonl,
    Csv,
    Table,
}

#[derive(Debug, Args)]
#[group(id = "smoothness", required = true, multiple = false)]
pub struct SmoothnessArg {
    /// Smoothness bound
    #[arg(long = "y", group = "smoothness")]
    pub y: Option<u64>,
    /// Smoothness exponent: y = floor((log H)^kappa)
    #[arg(long, group = "smoothness")]
    pub kappa: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Height bound
    #[arg(long = "H")]
    pub height: u64,
    #[command(flatten)]
    pub smoothness: SmoothnessArg,
    /// Only solutions with gcd(X, Y) = 1
    #[arg(long)]
    pub primitive: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List all smooth solutions below a height bound
    Search(SearchArgs),
    /// Leaderboard by smoothness exponent (per-S extremal table with --format table)
    Rank(SearchArgs),
    /// Metrics of one triple X + Y + Z = 0 (or X + Y = Z given as X Y -Z)
    #[command(allow_negative_numbers = true)]
    Metrics {
        #[arg(num_args = 3, value_names = ["X", "Y", "Z"])]
        values: Vec<i128>,
    },
    /// Count smooth integers exactly and compare with x·rho(u)
    Psi {
        #[arg(long = "x")]
        x: u64,
        #[arg(long = "y")]
        y: u64,
    },
    /// Dickman's function at the given arguments
    Rho {
        #[arg(required = true)]
        u: Vec<f64>,
    },
    /// Saddle point of sum log p/(p^c - 1) = log x
    Saddle {
        #[arg(long = "x")]
        x: f64,
        #[arg(
            long = "y",
            conflicts_with = "kappa",
            required_unless_present = "kappa"
        )]
        y: Option<f64>,
        #[arg(long)]
        kappa: Option<f64>,
    },
    /// Singular integral and singular series at one or more exponents c
    Series {
        #[arg(long = "c", required = true)]
        c: Vec<f64>,
        /// Smoothness bound for the finite-y series
        #[arg(long = "y", default_value_t = 1000)]
        y: u64,
    },
    /// Compare the circle-method integral with the direct weighted count
    CircleCheck {
        #[arg(long = "x")]
        x: Vec<f64>,
        #[arg(long = "y")]
        y: Vec<u64>,
        #[arg(long = "eps")]
        eps: Vec<f64>,
    },
    /// Farey dissection of order floor(sqrt(x)), or its major arcs with --delta
    Arcs {
        #[arg(long = "x")]
        x: u64,
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Primitive density N*/N against its conjectured limit
    Density {
        #[arg(long = "H")]
        height: u64,
        #[arg(long)]
        kappa: f64,
    },
    /// Recompute the worked examples, the extremal table and the census
    VerifyPaper,
}

enum Outcome {
    Done,
    VerificationFailed,
}

/// Parses `argv` (including the program name) and runs the command, writing
/// the report to `stdout` (or `--out`) and diagnostics to `stderr`.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, stdout, stderr) {
        Ok(Outcome::Done) => EXIT_OK,
        Ok(Outcome::VerificationFailed) => EXIT_VERIFY,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e:#}");
            EXIT_USAGE
        }
    }
}

fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> anyhow::Result<Outcome> {
    let threads = cli.global.threads;
    if threads == Some(0) {
        bail!("--threads must be at least 1");
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().context("building the worker pool")?;
    let mut report = Vec::new();
    let mut notes = Vec::new();
    let result = pool.install(|| dispatch(cli, &mut report, &mut notes));
    stderr.write_all(&notes)?;
    let outcome = result?;
    match &cli.global.out {
        Some(path) => fs::write(path, &report)
            .with_context(|| format!("--out: writing {}", path.display()))?,
        None => stdout.write_all(&report)?,
    }
    Ok(outcome)
}

fn mem_cap(g: &GlobalOpts) -> anyhow::Result<usize> {
    match g.mem_cap {
        Some(0) => bail!("--mem-cap must be positive"),
        Some(c) => Ok(c),
        None => Ok(DEFAULT_MEMORY_CAP),
    }
}

fn search_config(
    args: &SearchArgs,
    g: &GlobalOpts,
    force_primitive: bool,
) -> anyhow::Result<SearchConfig> {
    if args.height < 2 {
        bail!("--H must be at least 2 (got {})", args.height);
    }
    let smoothness = match (args.smoothness.y, args.smoothness.kappa) {
        (Some(y), None) => {
            if y < 2 {
                bail!("--y must be at least 2 (got {y})");
            }
            Smoothness::Bound(y)
        }
        (None, Some(k)) => {
            if !(k > 0.0) || !k.is_finite() {
                bail!("--kappa must be positive (got {k})");
            }
            Smoothness::Exponent(k)
        }
        _ => bail!("exactly one of --y and --kappa is required"),
    };
    let cfg = SearchConfig {
        height_bound: args.height,
        smoothness,
        primitive_only: args.primitive || force_primitive,
        memory_cap: mem_cap(g)?,
    };
    if cfg.y() < 2 {
        bail!("--kappa gives smoothness bound {} < 2", cfg.y());
    }
    Ok(cfg)
}

fn flag_error(flag: &str, e: Error) -> anyhow::Error {
    anyhow!("{flag}: {e}")
}

fn dispatch(cli: &Cli, out: &mut Vec<u8>, err: &mut Vec<u8>) -> anyhow::Result<Outcome> {
    let g = &cli.global;
    match &cli.command {
        Command::Search(args) => {
            let cfg = search_config(args, g, false)?;
            let report = find_solutions(&cfg).map_err(|e| flag_error("--H/--y", e))?;
            let c = census(&report);
            writeln!(
                err,
                "y = {}, N = {}, N* = {}, observed max height = {}, primitive counts: X<=Y {} / X<Y {} / ordered {}, {:.2?}",
                report.y,
                report.count,
                report.count_primitive,
                report.observed_max_height,
                c.unordered,
                c.unordered_distinct,
                c.ordered,
                report.wall_time
            )?;
            match g.format.unwrap_or(Format::Jsonl) {
                Format::Jsonl => out.extend_from_slice(jsonl(&report.triples)?.as_bytes()),
                Format::Csv => out.extend_from_slice(leaderboard_csv(&report.triples)?.as_bytes()),
                Format::Table => {
                    writeln!(
                        out,
                        "{:>12} {:>12} {:>12} {:>6} {:>10} {:>10}",
                        "x", "y", "z", "S", "kappa0", "qstar"
                    )?;
                    for t in &report.triples {
                        let (k0, q) = match metrics::<f64>(t) {
                            Ok(m) => (decimal6(m.kappa0), decimal6(m.qstar)),
                            Err(_) => ("-".into(), "-".into()),
                        };
                        writeln!(
                            out,
                            "{:>12} {:>12} {:>12} {:>6} {:>10} {:>10}",
                            t.x,
                            t.y,
                            t.z,
                            t.smoothness(),
                            k0,
                            q
                        )?;
                    }
                }
            }
        }
        Command::Rank(args) => {
            let cfg = search_config(args, g, false)?;
            let report = find_solutions(&cfg).map_err(|e| flag_error("--H/--y", e))?;
            match g.format.unwrap_or(Format::Csv) {
                Format::Csv => out.extend_from_slice(leaderboard_csv(&report.triples)?.as_bytes()),
                Format::Table => {
                    let rows = extremal_by_smoothness::<f64>(&report)?;
                    writeln!(
                        out,
                        "{:>4} {:>12} {:>12} {:>12} {:>10} {:>10} {:>8}",
                        "S", "X", "Y", "Z", "kappa0", "qstar", "count"
                    )?;
                    for r in rows {
                        writeln!(
                            out,
                            "{:>4} {:>12} {:>12} {:>12} {:>10} {:>10} {:>8}",
                            r.smoothness,
                            r.triple.x,
                            r.triple.y,
                            r.triple.z,
                            decimal6(r.metrics.kappa0),
                            decimal6(r.metrics.qstar),
                            r.group_size
                        )?;
                    }
                }
                Format::Jsonl => {
                    let rows = extremal_by_smoothness::<f64>(&report)?;
                    let triples: Vec<_> = rows.into_iter().map(|r| r.triple).collect();
                    out.extend_from_slice(jsonl(&triples)?.as_bytes());
                }
            }
        }
        Command::Metrics { values } => {
            let (a, b, c) = (values[0], values[1], values[2]);
            // accept both X + Y + Z = 0 and X + Y = Z
            let t = if a.checked_add(b).and_then(|s| s.checked_add(c)) == Some(0) {
                canonicalize(a, b, c)
            } else {
                canonicalize(a, b, -c)
            }
            .map_err(|e| anyhow!("X Y Z: {e}"))?;
            match g.format.unwrap_or(Format::Table) {
                Format::Jsonl => out.extend_from_slice(jsonl(std::slice::from_ref(&t))?.as_bytes()),
                _ => {
                    writeln!(out, "X = {} = {}", t.x, t.fx)?;
                    writeln!(out, "Y = {} = {}", t.y, t.fy)?;
                    writeln!(out, "Z = {} = {}", t.z, t.fz)?;
                    writeln!(out, "primitive = {}", t.primitive)?;
                    writeln!(out, "H = {}", t.height())?;
                    writeln!(out, "S = {}", t.smoothness())?;
                    writeln!(out, "R = {}", radical(&t)?)?;
                    match metrics::<f64>(&t) {
                        Ok(m) => {
                            writeln!(out, "kappa0 = {}", decimal6(m.kappa0))?;
                            writeln!(out, "kappa1 = {}", decimal6(m.kappa1))?;
                            writeln!(out, "qstar = {}", decimal6(m.qstar))?;
                        }
                        Err(e) => writeln!(out, "kappa0, qstar undefined: {e}")?,
                    }
                }
            }
        }
        Command::Psi { x, y } => {
            if *y < 2 {
                bail!("--y must be at least 2 (got {y})");
            }
            let exact = psi_exact(*x, *y)?;
            writeln!(out, "x = {x}, y = {y}")?;
            writeln!(out, "Psi (lattice recursion) = {exact}")?;
            match enumerate_smooth_capped((*x).max(1), *y, mem_cap(g)?) {
                Ok(set) => writeln!(out, "Psi (enumeration)       = {}", set.len())?,
                Err(e) => writeln!(out, "Psi (enumeration)       skipped: {e}")?,
            }
            if *x >= *y {
                match psi_estimate(*x as f64, *y as f64) {
                    Ok(est) => {
                        writeln!(out, "x rho(u)                = {est:.6e}")?;
                        writeln!(out, "ratio                   = {:.6}", exact as f64 / est)?;
                    }
                    Err(e) => writeln!(out, "x rho(u) unavailable: {e}")?,
                }
            }
        }
        Command::Rho { u } => {
            writeln!(out, "{:>12} {:>24}", "u", "rho(u)")?;
            for &v in u {
                let r = dickman_rho(v).map_err(|e| flag_error("u", e))?;
                writeln!(out, "{v:>12} {r:>24.16e}")?;
            }
        }
        Command::Saddle { x, y, kappa } => {
            let yv = match (y, kappa) {
                (Some(y), None) => *y,
                (None, Some(k)) if *k > 0.0 => x.ln().powf(*k),
                (None, Some(k)) => bail!("--kappa must be positive (got {k})"),
                _ => bail!("exactly one of --y and --kappa is required"),
            };
            let s = saddle_point(*x, yv).map_err(|e| flag_error("--x/--y", e))?;
            writeln!(out, "x = {}, y = {}", s.x, s.y)?;
            writeln!(out, "c = {:.15}", s.c)?;
            writeln!(out, "residual = {:.3e}", s.residual)?;
            if let Some(k) = kappa {
                let ly = yv.ln();
                writeln!(out, "1 - 1/kappa = {:.15}", 1.0 - 1.0 / k)?;
                writeln!(
                    out,
                    "|c - (1 - 1/kappa)| = {:.3e} (log log y / log y = {:.3e})",
                    (s.c - (1.0 - 1.0 / k)).abs(),
                    ly.ln() / ly
                )?;
            }
        }
        Command::Series { c, y } => {
            writeln!(
                out,
                "{:>8} {:>16} {:>16} {:>16} {:>16} {:>16} {:>12}",
                "c", "S_inf(c)", "S_f(c,y)", "S_f*(c,y)", "S_f(c)", "S_f*(c)", "residual"
            )?;
            let show = |r: xyz_lab::Result<xyz_lab::SeriesValue64>| match r {
                Ok(v) => format!("{:.10}", v.value),
                Err(Error::DivergentParameter { .. }) => "divergent".into(),
                Err(e) => format!("error: {e}"),
            };
            for &cv in c {
                let residual = match verify_euler_identity(cv) {
                    Ok(chk) => format!("{:.3e}", chk.residual),
                    Err(_) => "-".into(),
                };
                writeln!(
                    out,
                    "{:>8} {:>16} {:>16} {:>16} {:>16} {:>16} {:>12}",
                    cv,
                    show(sing_int(cv)),
                    show(sing_f(cv, *y)),
                    show(sing_fstar(cv, *y)),
                    show(sing_f_limit(cv)),
                    show(sing_fstar_limit(cv)),
                    residual
                )?;
            }
        }
        Command::CircleCheck { x, y, eps } => {
            let xs = if x.is_empty() {
                CIRCLE_GRID_X.to_vec()
            } else {
                x.clone()
            };
            let ys = if y.is_empty() {
                CIRCLE_GRID_Y.to_vec()
            } else {
                y.clone()
            };
            let es = if eps.is_empty() {
                CIRCLE_GRID_EPS.to_vec()
            } else {
                eps.clone()
            };
            writeln!(
                out,
                "{:>8} {:>4} {:>6} {:>7} {:>24} {:>24} {:>12}",
                "x", "y", "eps", "nodes", "quadrature", "direct", "|diff|"
            )?;
            for &xv in &xs {
                for &yv in &ys {
                    for &e in &es {
                        let phi = WeightFunction::bump(e).map_err(|er| flag_error("--eps", er))?;
                        let chk = circle_identity(xv, yv, &phi)
                            .map_err(|er| flag_error("--x/--y", er))?;
                        writeln!(
                            out,
                            "{:>8} {:>4} {:>6} {:>7} {:>24} {:>24} {:>12.3e}",
                            xv,
                            yv,
                            e,
                            chk.nodes,
                            format_complex(chk.quadrature),
                            format!("{:.15e}", chk.direct),
                            chk.diff
                        )?;
                    }
                }
            }
        }
        Command::Arcs { x, delta } => match delta {
            None => {
                let order = x.isqrt();
                let d = farey_dissection(order).map_err(|e| flag_error("--x", e))?;
                writeln!(out, "a,q,lo,hi")?;
                for arc in &d.arcs {
                    writeln!(
                        out,
                        "{},{},{},{}",
                        arc.a,
                        arc.q,
                        rational(arc.lo),
                        rational(arc.hi)
                    )?;
                }
            }
            Some(dv) => {
                let m = major_arcs(*x, *dv).map_err(|e| flag_error("--delta", e))?;
                writeln!(out, "a,q,lo,hi")?;
                for arc in &m.arcs {
                    writeln!(out, "{},{},{:.17e},{:.17e}", arc.a, arc.q, arc.lo, arc.hi)?;
                }
                writeln!(
                    err,
                    "Farey order {}, q <= {}, radius {:.6e}, {} major arcs, total measure {:.6e}",
                    m.farey_order,
                    m.q_max,
                    m.radius,
                    m.arcs.len(),
                    m.measure
                )?;
            }
        },
        Command::Density { height, kappa } => {
            if !(*kappa > 0.0) {
                bail!("--kappa must be positive (got {kappa})");
            }
            let d = density_ratio::<f64>(*height, *kappa, mem_cap(g)?)
                .map_err(|e| flag_error("--H/--kappa", e))?;
            writeln!(out, "H = {}, kappa = {}, y = {}", d.height, d.kappa, d.y)?;
            writeln!(out, "N = {}, N* = {}", d.count, d.count_primitive)?;
            writeln!(out, "N*/N = {:.6}", d.ratio)?;
            if d.divergent {
                writeln!(
                    out,
                    "1/zeta(2 - 3/kappa): divergent for kappa <= 3 (conjectured limit 0)"
                )?;
            } else {
                writeln!(out, "1/zeta(2 - 3/kappa) = {:.6}", d.conjectured_limit)?;
            }
        }
        Command::VerifyPaper => {
            let report = verify::verify_paper();
            for c in &report.checks {
                writeln!(out, "{c}")?;
            }
            let failed = report.checks.iter().filter(|c| !c.passed).count();
            writeln!(out, "{} checks, {} failed", report.checks.len(), failed)?;
            if failed > 0 {
                return Ok(Outcome::VerificationFailed);
            }
        }
    }
    Ok(Outcome::Done)
}

fn rational(r: Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn format_complex(z: Complex<f64>) -> String {
    format!("{:.15e}{:+.1e}i", z.re, z.im)
}
