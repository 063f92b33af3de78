//! Argument definitions and the five subcommands.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use wedge_core::dynamics::simulate;
use wedge_core::maps::{fixed_point, reflection_period1_possible, MapId};
use wedge_core::orbits::{
    build_periodic_orbit_periods, classify_orbit, closure_error, sweep_half, sweep_periodic_points, OrbitClass,
    OrbitError, OrbitSpec, SweepPoint, DEFAULT_TOL,
};
use wedge_core::{Trajectory, Wall, WedgeAngle};

use crate::error::CliError;
use crate::export::{self, write_file, Format};
use crate::launch::{parse_wall, LaunchOptions};
use crate::plot;

#[derive(Debug, Parser)]
#[command(
    name = "wedge",
    version,
    about = "Simulate a particle bouncing under gravity in a right-angled wedge",
    after_help = "Angles are in degrees. WEDGE_SEED is accepted and ignored: every command is deterministic."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the event-driven simulator from a launch state.
    Simulate(SimulateArgs),
    /// Build the periodic orbit with p hits on wall A and q on wall B.
    Periodic(PeriodicArgs),
    /// List the periodic launch points (theta*, u_bar*) for all coprime p, q.
    Sweep(SweepArgs),
    /// Classify a trajectory as periodic, dense, sliding or degenerate.
    Classify(ClassifyArgs),
    /// Print the wall-B collision map fixed points.
    FixedPoints(FixedPointArgs),
}

#[derive(Debug, Args)]
pub struct LaunchArgs {
    /// Launch wall, A or B.
    #[arg(long, value_parser = parse_wall)]
    pub wall: Option<Wall>,
    /// Arclength of the launch point along the wall.
    #[arg(long, allow_negative_numbers = true)]
    pub s: Option<f64>,
    /// Momentum along the wall, away from the vertex.
    #[arg(long, allow_negative_numbers = true)]
    pub u_bar: Option<f64>,
    /// Momentum along the inward normal.
    #[arg(long, allow_negative_numbers = true)]
    pub w_bar: Option<f64>,
    /// Read (u_bar, w_bar) in the rotating frame at this angle instead.
    #[arg(long, allow_negative_numbers = true)]
    pub phi_deg: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub x: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub y: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub u: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub w: Option<f64>,
    /// Total energy. For wall launches this sets the launch height.
    #[arg(long, allow_negative_numbers = true)]
    pub energy: Option<f64>,
}

impl LaunchArgs {
    fn options(&self) -> LaunchOptions {
        LaunchOptions {
            wall: self.wall,
            s: self.s,
            u_bar: self.u_bar,
            w_bar: self.w_bar,
            phi_deg: self.phi_deg,
            x: self.x,
            y: self.y,
            u: self.u,
            w: self.w,
            energy: self.energy,
        }
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file. Without it, CSV (or --format) goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format; inferred from the --out extension when omitted.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

impl OutputArgs {
    fn format(&self) -> Result<Format, CliError> {
        match (self.format, &self.out) {
            (Some(f), _) => Ok(f),
            (None, None) => Ok(Format::Csv),
            (None, Some(path)) => Format::from_path(path).ok_or_else(|| {
                CliError::invalid(format!("cannot infer a format from {}; pass --format", path.display()))
            }),
        }
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub theta_deg: f64,
    #[command(flatten)]
    pub launch: LaunchArgs,
    /// Number of collisions.
    #[arg(long, default_value_t = 50)]
    pub n: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PeriodicArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long)]
    pub q: u32,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub energy: f64,
    /// Number of periods of p + q collisions.
    #[arg(long, default_value_t = 1)]
    pub periods: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Largest p and q.
    #[arg(long, default_value_t = 25)]
    pub max: u32,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub energy: f64,
    /// Keep only q >= p, i.e. theta* <= 45 degrees.
    #[arg(long)]
    pub half: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub theta_deg: f64,
    #[command(flatten)]
    pub launch: LaunchArgs,
    #[arg(long, default_value_t = 50)]
    pub n: usize,
    /// Recurrence tolerance on scaled position and momentum.
    #[arg(long, default_value_t = DEFAULT_TOL, allow_negative_numbers = true)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct FixedPointArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub theta_deg: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub energy: f64,
}

fn angle(deg: f64) -> Result<WedgeAngle, CliError> {
    WedgeAngle::from_degrees(deg).map_err(CliError::invalid)
}

fn orbit_error(e: OrbitError, wanted: usize) -> CliError {
    match e {
        OrbitError::Terminated(reason) => CliError::Terminated { done: 0, wanted, reason },
        other => CliError::invalid(other),
    }
}

fn emit_trajectory(traj: &Trajectory, output: &OutputArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let format = output.format()?;
    match &output.out {
        Some(path) => {
            export::export_trajectory(traj, format, path)?;
            writeln!(stdout, "wrote {} collisions to {}", traj.events.len(), path.display())
                .map_err(|e| CliError::io("<stdout>", e))
        }
        None => {
            let res = match format {
                Format::Csv => export::write_csv(traj, &mut *stdout),
                Format::Json => export::write_json(traj, &mut *stdout),
                Format::Svg => stdout.write_all(plot::trajectory_svg(traj)?.as_bytes()),
            };
            res.map_err(|e| CliError::io("<stdout>", e))
        }
    }
}

fn emit_sweep(points: &[SweepPoint], output: &OutputArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let format = output.format()?;
    let render = |w: &mut dyn Write| -> Result<(), CliError> {
        let res = match format {
            Format::Csv => export::write_sweep_csv(points, &mut *w),
            Format::Json => export::write_sweep_json(points, &mut *w),
            Format::Svg => w.write_all(plot::sweep_svg(points)?.as_bytes()),
        };
        res.map_err(|e| CliError::io(output.out.clone().unwrap_or_else(|| "<stdout>".into()), e))
    };
    match &output.out {
        Some(path) => {
            let mut buf = Vec::new();
            render(&mut buf)?;
            write_file(path, |w| w.write_all(&buf))?;
            writeln!(stdout, "wrote {} points to {}", points.len(), path.display())
                .map_err(|e| CliError::io("<stdout>", e))
        }
        None => render(stdout),
    }
}

pub fn run_simulate(args: &SimulateArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let theta = angle(args.theta_deg)?;
    let initial = args.launch.options().resolve(theta)?;
    let traj = simulate(initial, theta, args.n).map_err(CliError::invalid)?;
    emit_trajectory(&traj, &args.output, stdout)?;
    match traj.termination {
        Some(reason) => Err(CliError::Terminated { done: traj.events.len(), wanted: args.n, reason }),
        None => Ok(()),
    }
}

pub fn run_periodic(args: &PeriodicArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let spec = OrbitSpec::new(args.p, args.q, args.energy).map_err(CliError::invalid)?;
    if args.periods == 0 {
        return Err(CliError::invalid("--periods must be at least 1"));
    }
    let wanted = args.periods * spec.period();
    let traj = build_periodic_orbit_periods(&spec, args.periods).map_err(|e| orbit_error(e, wanted))?;
    emit_trajectory(&traj, &args.output, stdout)?;
    if args.output.out.is_some() {
        let err = closure_error(&traj).unwrap_or(f64::NAN);
        writeln!(stdout, "closure error after {} periods: {err:.3e}", args.periods)
            .map_err(|e| CliError::io("<stdout>", e))?;
    }
    Ok(())
}

pub fn run_sweep(args: &SweepArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    if args.max == 0 {
        return Err(CliError::invalid("--max must be at least 1"));
    }
    if !(args.energy > 0.0) || !args.energy.is_finite() {
        return Err(CliError::invalid(format!("--energy must be positive, got {}", args.energy)));
    }
    let points = if args.half {
        sweep_half(args.max, args.energy)
    } else {
        sweep_periodic_points(args.max, args.max, args.energy)
    };
    emit_sweep(&points, &args.output, stdout)
}

pub fn describe(class: OrbitClass, n: usize) -> String {
    match class {
        OrbitClass::Periodic { period, hits_a, hits_b } => {
            format!("periodic: period {period} ({hits_a} hits on A, {hits_b} on B)")
        }
        OrbitClass::Dense => {
            format!("dense: no recurrence within {n} collisions (evidence of a dense orbit, not a proof)")
        }
        OrbitClass::Sliding => "sliding: normal momentum vanished on a wall".to_string(),
        OrbitClass::Degenerate { reason } => format!("degenerate: {reason:?}"),
    }
}

pub fn run_classify(args: &ClassifyArgs, stdout: &mut dyn Write) -> Result<OrbitClass, CliError> {
    let theta = angle(args.theta_deg)?;
    let initial = args.launch.options().resolve(theta)?;
    let traj = simulate(initial, theta, args.n).map_err(CliError::invalid)?;
    let class = classify_orbit(&traj, args.tol).map_err(CliError::invalid)?;
    writeln!(stdout, "{}", describe(class, traj.events.len())).map_err(|e| CliError::io("<stdout>", e))?;
    Ok(class)
}

pub fn run_fixed_points(args: &FixedPointArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let theta = angle(args.theta_deg)?;
    let mut text = String::new();
    for id in [MapId::FB, MapId::GB] {
        let fp = fixed_point(id, args.energy, theta).map_err(CliError::invalid)?;
        text.push_str(&format!(
            "{id} fixed point: u_bar = {}, w_bar = {} ({:?})\n",
            export::fmt_float(fp.u_bar),
            export::fmt_float(fp.w_bar),
            fp.orientation
        ));
    }
    text.push_str("FA, GA: sliding family (c, 0) for any |c| <= sqrt(2E)\n");
    if reflection_period1_possible(theta) {
        text.push_str("symmetric wedge: the two fixed points describe the same period-one orbit\n");
    }
    stdout.write_all(text.as_bytes()).map_err(|e| CliError::io("<stdout>", e))
}

pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Simulate(a) => run_simulate(a, stdout),
        Command::Periodic(a) => run_periodic(a, stdout),
        Command::Sweep(a) => run_sweep(a, stdout),
        Command::Classify(a) => run_classify(a, stdout).map(|_| ()),
        Command::FixedPoints(a) => run_fixed_points(a, stdout),
    }
}
