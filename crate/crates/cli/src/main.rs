//! `rotor`: compute winding, linking and rotation invariants of the example
//! isotopies and reproduce the appendix tables.

mod report;
mod svg;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, CommandFactory, Parser, Subcommand};
use serde::Serialize;

use rotor_core::examples::{synthetic_drift, DriftParams};
use rotor_core::franks::{check_franks, grid_seeds, resimulate, AnnulusLift, DEFAULT_SEED_GRID};
use rotor_core::isotopy::{relative_trajectory, trajectory};
use rotor_core::measures::{birkhoff_identity, check_invariance, IdentityOptions};
use rotor_core::properties::{adapted_shift, scan_p1, scan_p2};
use rotor_core::returns::{alpha, verify_free_default};
use rotor_core::{
    build, enlace, rho_birkhoff, tourne, BirkhoffOptions, Error, ExampleId, ExampleParams, ExampleSystem, Isotopy,
    Point, TrajectoryOptions,
};

use report::Row;

#[derive(Parser, Debug)]
#[command(name = "rotor", version, about = "Winding, linking and rotation invariants of plane isotopies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Shared {
    /// ex1, ex2, ex3, ex4, ex5, ex5bis, ex6 or drift.
    #[arg(long, default_value = "ex1")]
    example: Target,
    /// Integrality and convergence tolerance.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory receiving CSV output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print JSON instead of plain text.
    #[arg(long)]
    json: bool,
    /// Replace the isotopy by its shifted class `I·R^k`.
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    shift: i64,
    #[arg(long)]
    theta0: Option<f64>,
    #[arg(long)]
    stiffness: Option<f64>,
    #[arg(long)]
    bump_eps: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tourne_I(z) for a fixed point z.
    Tourne {
        #[command(flatten)]
        shared: Shared,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        point: Point,
        /// Write the trajectory as SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Enlace_I(z, z') for a pair of points.
    Enlace {
        #[command(flatten)]
        shared: Shared,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        point: Point,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        point2: Point,
        /// Write the relative trajectory as SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Rotation number of the orbit of a recurrent point around a fixed point.
    Rho {
        #[command(flatten)]
        shared: Shared,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        point: Point,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        puncture: Point,
        #[arg(long, default_value_t = 100_000)]
        max_iter: usize,
        #[arg(long, default_value_t = 1e-6)]
        eps_return: f64,
    },
    /// Return winding α_{U,z'}(z) for a free disk U.
    Alpha {
        #[command(flatten)]
        shared: Shared,
        #[arg(long, value_parser = parse_disk, allow_hyphen_values = true)]
        disk: (Point, f64),
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        puncture: Point,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        point: Point,
        #[arg(long, default_value_t = 1_000_000)]
        max_iter: usize,
    },
    /// Searches for a Franks-lemma certificate for the lift f̃∘T^{-k}.
    Franks {
        #[command(flatten)]
        shared: Shared,
        #[arg(long, value_parser = parse_disk, allow_hyphen_values = true)]
        disk: (Point, f64),
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true, default_value = "0,0")]
        puncture: Point,
        /// Deck shift k of the lift.
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        lift: i64,
        #[arg(long, default_value_t = 50)]
        q_max: usize,
    },
    /// Scans the fixed set for the growth and far-field properties.
    Props {
        #[command(flatten)]
        shared: Shared,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long, default_value_t = 20_000)]
        pairs: usize,
    },
    /// Invariance of the example measures, and the return identity on a disk.
    Measures {
        #[command(flatten)]
        shared: Shared,
        #[arg(long, value_parser = parse_disk, allow_hyphen_values = true)]
        disk: Option<(Point, f64)>,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true, default_value = "0,0")]
        puncture: Point,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Recomputes every appendix value and writes `appendix.csv`.
    ReproduceAppendix {
        #[command(flatten)]
        shared: Shared,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Target {
    Example(ExampleId),
    Drift,
}

impl std::str::FromStr for Target {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("drift") {
            return Ok(Target::Drift);
        }
        s.parse::<ExampleId>().map(Target::Example).map_err(|e| e.to_string())
    }
}

impl Target {
    fn name(self) -> &'static str {
        match self {
            Target::Example(id) => id.as_str(),
            Target::Drift => "drift",
        }
    }
}

fn parse_floats(s: &str, n: usize) -> Result<Vec<f64>, String> {
    let v = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    if v.len() != n || v.iter().any(|x| !x.is_finite()) {
        return Err(format!("expected {n} comma-separated finite numbers, got {s:?}"));
    }
    Ok(v)
}

fn parse_point(s: &str) -> Result<Point, String> {
    let v = parse_floats(s, 2)?;
    Ok(Point::new(v[0], v[1]))
}

fn parse_disk(s: &str) -> Result<(Point, f64), String> {
    let v = parse_floats(s, 3)?;
    if v[2] <= 0.0 {
        return Err(format!("disk radius must be positive, got {}", v[2]));
    }
    Ok((Point::new(v[0], v[1]), v[2]))
}

/// Failure classes mapped to exit codes.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParams(_) | Error::InvalidInput(_) | Error::DiagonalInput(_) | Error::NotFixed { .. } => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Numerical(format!("{e:#}"))
    }
}

type Outcome = Result<(), Failure>;

struct Ctx {
    shared: Shared,
    opts: TrajectoryOptions,
}

impl Ctx {
    fn new(shared: Shared) -> Result<Self, Failure> {
        if !(shared.tol > 0.0 && shared.tol.is_finite()) {
            return Err(Failure::Usage(format!("--tol must be positive, got {}", shared.tol)));
        }
        let opts = TrajectoryOptions::with_tol(shared.tol);
        Ok(Ctx { shared, opts })
    }

    fn params(&self) -> ExampleParams {
        ExampleParams { theta0: self.shared.theta0, stiffness: self.shared.stiffness, bump_eps: self.shared.bump_eps }
    }

    fn system(&self) -> Result<ExampleSystem, Failure> {
        match self.shared.example {
            Target::Example(id) => Ok(build(id, self.params())?),
            Target::Drift => Err(Failure::Usage("this subcommand needs an appendix example, not drift".into())),
        }
    }

    fn isotopy(&self) -> Result<Isotopy, Failure> {
        let iso = match self.shared.example {
            Target::Example(id) => build(id, self.params())?.isotopy,
            Target::Drift => synthetic_drift(DriftParams::default()),
        };
        Ok(if self.shared.shift == 0 { iso } else { iso.shift_class(self.shared.shift) })
    }

    /// Prints `value` as JSON or hands it to `plain`.
    fn emit<T: Serialize>(&self, value: &T, plain: impl FnOnce(&T) -> String) -> Outcome {
        if self.shared.json {
            let s = serde_json::to_string_pretty(value).context("serializing output")?;
            println!("{s}");
        } else {
            println!("{}", plain(value));
        }
        Ok(())
    }

    fn write_rows(&self, file: &str, rows: &[Row]) -> Outcome {
        if let Some(dir) = &self.shared.out {
            write_csv(dir, file, rows)?;
        }
        Ok(())
    }
}

fn write_csv(dir: &Path, file: &str, rows: &[Row]) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(file);
    report::write(&path, rows).with_context(|| format!("writing {}", path.display()))
}

#[derive(Serialize)]
struct Scalar {
    example: &'static str,
    quantity: &'static str,
    value: f64,
}

fn single_row(ctx: &Ctx, quantity: &str, args: String, value: f64) -> Row {
    Row::computed(format!("{}-{quantity}", ctx.shared.example.name()), quantity, args, value)
}

fn cmd_tourne(ctx: &Ctx, z: Point, svg_path: Option<&Path>) -> Outcome {
    let iso = ctx.isotopy()?;
    let value = tourne(&iso, z, &ctx.opts)?;
    if let Some(p) = svg_path {
        let t = trajectory(&iso, z, &ctx.opts)?;
        svg::write(p, &t.path, Some(Point::ORIGIN)).with_context(|| format!("writing {}", p.display()))?;
    }
    ctx.write_rows("tourne.csv", &[single_row(ctx, "tourne", report::point_args(&[("z", z)]), value)])?;
    ctx.emit(&Scalar { example: ctx.shared.example.name(), quantity: "tourne", value }, |s| format!("{:.9}", s.value))
}

fn cmd_enlace(ctx: &Ctx, z: Point, z2: Point, svg_path: Option<&Path>) -> Outcome {
    let iso = ctx.isotopy()?;
    let value = enlace(&iso, z, z2, &ctx.opts)?;
    if let Some(p) = svg_path {
        let t = relative_trajectory(&iso, z, z2, &ctx.opts)?;
        svg::write(p, &t.path, Some(Point::ORIGIN)).with_context(|| format!("writing {}", p.display()))?;
    }
    ctx.write_rows("enlace.csv", &[single_row(ctx, "enlace", report::point_args(&[("z", z), ("z2", z2)]), value)])?;
    ctx.emit(&Scalar { example: ctx.shared.example.name(), quantity: "enlace", value }, |s| format!("{:.9}", s.value))
}

fn cmd_rho(ctx: &Ctx, z: Point, puncture: Point, max_iter: usize, eps_return: f64) -> Outcome {
    let iso = ctx.isotopy()?;
    let bopts = BirkhoffOptions { eps_return, max_iter, tol: ctx.shared.tol, ..Default::default() };
    let est = rho_birkhoff(&iso, z, puncture, &bopts, &ctx.opts)?;
    ctx.write_rows(
        "rho.csv",
        &[single_row(ctx, "rho", report::point_args(&[("z", z), ("puncture", puncture)]), est.value)],
    )?;
    ctx.emit(&est, |e| {
        format!("{} {}", report::short(e.value), if e.converged { "converged" } else { "not converged" })
    })?;
    if est.converged {
        Ok(())
    } else {
        Err(Failure::Numerical(format!("no convergence after {} iterations (residual {:e})", est.iterations, est.residual)))
    }
}

#[derive(Serialize)]
struct AlphaOut {
    alpha: i64,
    raw: f64,
    tau: usize,
    landing: Point,
    disk_margin: f64,
}

fn cmd_alpha(ctx: &Ctx, (c, r): (Point, f64), puncture: Point, z: Point, max_iter: usize) -> Outcome {
    let iso = ctx.isotopy()?;
    let disk = verify_free_default(&iso, c, r)?;
    if !disk.contains(z) {
        return Err(Failure::Usage(format!("{z:?} is not inside the disk")));
    }
    let a = alpha(&iso, &disk, puncture, z, max_iter, &ctx.opts)?;
    ctx.write_rows(
        "alpha.csv",
        &[single_row(ctx, "alpha", report::point_args(&[("z", z), ("puncture", puncture)]), a.value as f64)],
    )?;
    let out = AlphaOut { alpha: a.value, raw: a.raw, tau: a.ret.tau, landing: a.ret.landing, disk_margin: disk.margin };
    ctx.emit(&out, |o| format!("alpha {} tau {}", o.alpha, o.tau))
}

fn cmd_franks(ctx: &Ctx, (c, r): (Point, f64), puncture: Point, k: i64, q_max: usize) -> Outcome {
    let iso = ctx.isotopy()?;
    let disk = verify_free_default(&iso, c, r)?;
    let lift = AnnulusLift::new(iso, puncture, k);
    let cert = check_franks(&lift, &disk, &grid_seeds(&disk, DEFAULT_SEED_GRID), q_max, &ctx.opts)?;
    if let Some(cert) = &cert {
        if !resimulate(&lift, cert, &ctx.opts)? {
            return Err(Failure::Numerical("certificate did not re-simulate".into()));
        }
    }
    ctx.emit(&cert, |c| match c {
        Some(c) => format!(
            "certificate k={} forward q={} p={} backward q={} p={}",
            c.lift_shift, c.forward.q, c.forward.p, c.backward.q, c.backward.p
        ),
        None => format!("none within q_max={q_max}"),
    })
}

#[derive(Serialize)]
struct PropsOut {
    p1: rotor_core::properties::P1Report,
    p2: rotor_core::properties::P2Report,
    adapted_shift: Option<i64>,
}

fn cmd_props(ctx: &Ctx, r0: f64, pairs: usize) -> Outcome {
    let sys = ctx.system()?;
    let iso = ctx.isotopy()?;
    let radii: Vec<f64> = (0..4).map(|i| r0 * f64::powi(2.0, i)).collect();
    let p1 = scan_p1(&iso, sys.fixed_set.as_ref(), r0, pairs, &ctx.opts)?;
    let p2 = scan_p2(&iso, sys.fixed_set.as_ref(), &radii, &ctx.opts)?;
    let shift = adapted_shift(&iso, sys.fixed_set.as_ref(), &radii, &ctx.opts).ok();
    let out = PropsOut { p1, p2, adapted_shift: shift };
    ctx.emit(&out, |o| {
        let maxima: Vec<String> = o.p1.per_radius.iter().map(|(r, m)| format!("{r}:{}", report::short(*m))).collect();
        format!(
            "P1 {:?} (max |enlace| by radius {})\nP2 {:?}\nadapted shift {}",
            o.p1.verdict,
            maxima.join(" "),
            o.p2.verdict,
            o.adapted_shift.map_or("none".to_string(), |k| k.to_string())
        )
    })
}

#[derive(Serialize)]
struct MeasuresOut {
    invariance: Vec<(String, f64, f64)>,
    identity: Option<rotor_core::measures::IdentityReport>,
}

fn cmd_measures(ctx: &Ctx, disk: Option<(Point, f64)>, puncture: Point, n: usize) -> Outcome {
    let sys = ctx.system()?;
    let f = |z: Point| sys.map(z);
    let phis = report::test_functions();
    let refs: Vec<&report::TestFn> = phis.iter().map(|b| b.as_ref()).collect();
    let mut invariance = Vec::new();
    for m in &sys.measures {
        let rep = check_invariance(m.as_ref(), &f, &refs, n, ctx.shared.seed)?;
        invariance.push((m.description(), rep.max_discrepancy, rep.stderr));
    }
    let identity = match disk {
        Some((c, r)) => {
            let d = verify_free_default(&sys.isotopy, c, r)?;
            let m = sys.measures.first().ok_or(Error::EmptyInput("example has no measures"))?;
            Some(birkhoff_identity(
                &sys.isotopy,
                &d,
                puncture,
                m.as_ref(),
                n,
                ctx.shared.seed,
                &IdentityOptions::default(),
                &ctx.opts,
            )?)
        }
        None => None,
    };
    let out = MeasuresOut { invariance, identity };
    ctx.emit(&out, |o| {
        let mut lines: Vec<String> =
            o.invariance.iter().map(|(d, x, se)| format!("invariance {d}: discrepancy {x:.3e} (stderr {se:.3e})")).collect();
        if let Some(id) = &o.identity {
            lines.push(format!(
                "identity lhs {:.6} rhs {:.6} diff {:.3e} (stderr {:.3e})",
                id.lhs.value, id.rhs.value, id.diff, id.stderr
            ));
        }
        lines.join("\n")
    })
}

fn cmd_reproduce(ctx: &Ctx) -> Outcome {
    let rows = report::appendix_rows(&ctx.opts, ctx.shared.seed)?;
    let dir = ctx.shared.out.clone().unwrap_or_else(|| PathBuf::from("results"));
    write_csv(&dir, "appendix.csv", &rows)?;
    let failed: Vec<&Row> = rows.iter().filter(|r| !r.pass).collect();
    #[derive(Serialize)]
    struct Summary<'a> {
        rows: usize,
        failed: Vec<&'a Row>,
        path: String,
    }
    let path = dir.join("appendix.csv").display().to_string();
    ctx.emit(&Summary { rows: rows.len(), failed: failed.clone(), path }, |s| {
        format!("{} rows, {} failed, written to {}", s.rows, s.failed.len(), s.path)
    })?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Numerical(format!("{} appendix rows out of tolerance", failed.len())))
    }
}

fn dispatch(cmd: Command) -> Outcome {
    match cmd {
        Command::Tourne { shared, point, svg } => cmd_tourne(&Ctx::new(shared)?, point, svg.as_deref()),
        Command::Enlace { shared, point, point2, svg } => cmd_enlace(&Ctx::new(shared)?, point, point2, svg.as_deref()),
        Command::Rho { shared, point, puncture, max_iter, eps_return } => {
            cmd_rho(&Ctx::new(shared)?, point, puncture, max_iter, eps_return)
        }
        Command::Alpha { shared, disk, puncture, point, max_iter } => {
            cmd_alpha(&Ctx::new(shared)?, disk, puncture, point, max_iter)
        }
        Command::Franks { shared, disk, puncture, lift, q_max } => {
            cmd_franks(&Ctx::new(shared)?, disk, puncture, lift, q_max)
        }
        Command::Props { shared, radius, pairs } => cmd_props(&Ctx::new(shared)?, radius, pairs),
        Command::Measures { shared, disk, puncture, samples } => cmd_measures(&Ctx::new(shared)?, disk, puncture, samples),
        Command::ReproduceAppendix { shared } => cmd_reproduce(&Ctx::new(shared)?),
    }
}

/// Runs the CLI on `argv` and returns the process exit code.
fn run<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            if !e.use_stderr() {
                let _ = e.print();
                return 0;
            }
            let msg = e.render().to_string();
            eprint!("{msg}");
            if !msg.contains("Usage:") {
                eprintln!("\n{}", Cli::command().render_usage());
            }
            return 2;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\n{}", Cli::command().render_usage());
            2
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

fn main() -> ExitCode {
    ExitCode::from(run(std::env::args_os()))
}
