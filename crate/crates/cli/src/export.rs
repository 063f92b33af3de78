//! CSV and JSON serialization of trajectories and sweep points.
//!
//! Floats are written with 17 significant digits so that identical inputs
//! give identical bytes and JSON parses back to the same bits.

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::Path;

use serde::de::Deserializer;
use serde::ser::{Error as _, Serializer};
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use wedge_core::dynamics::{hamiltonian, wedge_hamiltonians, CollisionEvent};
use wedge_core::frames::{frame_angle, RotatingFrameMomentum};
use wedge_core::orbits::SweepPoint;
use wedge_core::{CartesianState, Termination, Trajectory, Wall, WedgeAngle};

use crate::error::CliError;

pub const CSV_HEADER: [&str; 14] = [
    "event_index", "t", "wall", "x", "y", "u_post", "w_post", "u_bar_post", "w_bar_post", "x_tilde",
    "y_tilde", "H", "Hx_tilde", "Hy_tilde",
];

pub const SWEEP_HEADER: [&str; 5] = ["p", "q", "theta", "theta_deg", "u_bar"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl Format {
    pub fn from_path(path: &Path) -> Option<Format> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            "svg" => Some(Format::Svg),
            _ => None,
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Svg => "svg",
        })
    }
}

pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// A float that serializes with [`fmt_float`] and deserializes exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Num(f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(S::Error::custom(format!("cannot write {} as JSON", self.0)));
        }
        RawValue::from_string(fmt_float(self.0)).map_err(S::Error::custom)?.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        f64::deserialize(d).map(Num)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
enum WallLabel {
    A,
    B,
}

impl From<Wall> for WallLabel {
    fn from(w: Wall) -> Self {
        match w {
            Wall::A => WallLabel::A,
            Wall::B => WallLabel::B,
        }
    }
}

impl From<WallLabel> for Wall {
    fn from(w: WallLabel) -> Self {
        match w {
            WallLabel::A => Wall::A,
            WallLabel::B => Wall::B,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind")]
enum JsonTermination {
    VertexHit { t: Num },
    Degenerate { wall: WallLabel, t: Num, normal_speed: Num },
    NoCollision { t: Num },
}

#[derive(Serialize, Deserialize)]
struct JsonState {
    x: Num,
    y: Num,
    u: Num,
    w: Num,
    t: Num,
}

#[derive(Serialize, Deserialize)]
struct JsonEvent {
    event_index: usize,
    t: Num,
    wall: WallLabel,
    x: Num,
    y: Num,
    u_post: Num,
    w_post: Num,
    u_bar_post: Num,
    w_bar_post: Num,
    x_tilde: Num,
    y_tilde: Num,
    #[serde(rename = "H")]
    h: Num,
    #[serde(rename = "Hx_tilde")]
    hx_tilde: Num,
    #[serde(rename = "Hy_tilde")]
    hy_tilde: Num,
    u_pre: Num,
    w_pre: Num,
}

#[derive(Serialize, Deserialize)]
struct JsonTrajectory {
    theta: Num,
    #[serde(rename = "E")]
    energy: Num,
    termination: Option<JsonTermination>,
    initial: JsonState,
    events: Vec<JsonEvent>,
}

/// The fourteen exported quantities of one collision, in column order after
/// the index and wall.
struct Row {
    t: f64,
    x: f64,
    y: f64,
    u_post: f64,
    w_post: f64,
    u_bar_post: f64,
    w_bar_post: f64,
    x_tilde: f64,
    y_tilde: f64,
    h: f64,
    hx: f64,
    hy: f64,
}

fn row(ev: &CollisionEvent, theta: WedgeAngle) -> Row {
    let wc = ev.post.wedge_coords(theta);
    let hw = wedge_hamiltonians(&ev.post, theta);
    Row {
        t: ev.t,
        x: ev.post.x,
        y: ev.post.y,
        u_post: ev.post.u,
        w_post: ev.post.w,
        u_bar_post: ev.rotating_post.u_bar,
        w_bar_post: ev.rotating_post.w_bar,
        x_tilde: wc.x_tilde,
        y_tilde: wc.y_tilde,
        h: hamiltonian(&ev.post),
        hx: hw.x,
        hy: hw.y,
    }
}

pub fn write_csv<W: Write>(traj: &Trajectory, out: W) -> io::Result<()> {
    let mut wtr = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    wtr.write_record(CSV_HEADER)?;
    for (i, ev) in traj.events.iter().enumerate() {
        let r = row(ev, traj.theta);
        let mut rec = vec![i.to_string(), fmt_float(r.t), ev.wall.label().to_string()];
        rec.extend(
            [r.x, r.y, r.u_post, r.w_post, r.u_bar_post, r.w_bar_post, r.x_tilde, r.y_tilde, r.h, r.hx, r.hy]
                .into_iter()
                .map(fmt_float),
        );
        wtr.write_record(&rec)?;
    }
    wtr.flush()
}

fn json_state(s: &CartesianState) -> JsonState {
    JsonState { x: Num(s.x), y: Num(s.y), u: Num(s.u), w: Num(s.w), t: Num(s.t) }
}

pub fn write_json<W: Write>(traj: &Trajectory, mut out: W) -> io::Result<()> {
    let termination = traj.termination.map(|t| match t {
        Termination::VertexHit { t } => JsonTermination::VertexHit { t: Num(t) },
        Termination::Degenerate { wall, t, normal_speed } => {
            JsonTermination::Degenerate { wall: wall.into(), t: Num(t), normal_speed: Num(normal_speed) }
        }
        Termination::NoCollision { t } => JsonTermination::NoCollision { t: Num(t) },
    });
    let events = traj
        .events
        .iter()
        .enumerate()
        .map(|(i, ev)| {
            let r = row(ev, traj.theta);
            JsonEvent {
                event_index: i,
                t: Num(r.t),
                wall: ev.wall.into(),
                x: Num(r.x),
                y: Num(r.y),
                u_post: Num(r.u_post),
                w_post: Num(r.w_post),
                u_bar_post: Num(r.u_bar_post),
                w_bar_post: Num(r.w_bar_post),
                x_tilde: Num(r.x_tilde),
                y_tilde: Num(r.y_tilde),
                h: Num(r.h),
                hx_tilde: Num(r.hx),
                hy_tilde: Num(r.hy),
                u_pre: Num(ev.pre.u),
                w_pre: Num(ev.pre.w),
            }
        })
        .collect();
    let doc = JsonTrajectory {
        theta: Num(traj.theta.radians()),
        energy: Num(traj.energy),
        termination,
        initial: json_state(&traj.initial),
        events,
    };
    serde_json::to_writer_pretty(&mut out, &doc)?;
    out.write_all(b"\n")
}

/// Parses a document written by [`write_json`].
pub fn read_json<R: Read>(input: R) -> Result<Trajectory, CliError> {
    let doc: JsonTrajectory =
        serde_json::from_reader(input).map_err(|e| CliError::invalid(format!("malformed trajectory JSON: {e}")))?;
    let theta = WedgeAngle::new(doc.theta.0).map_err(CliError::invalid)?;
    let s = &doc.initial;
    let initial = CartesianState { x: s.x.0, y: s.y.0, u: s.u.0, w: s.w.0, t: s.t.0 };
    let events = doc
        .events
        .iter()
        .map(|e| {
            let wall = Wall::from(e.wall);
            let post = CartesianState { x: e.x.0, y: e.y.0, u: e.u_post.0, w: e.w_post.0, t: e.t.0 };
            CollisionEvent {
                wall,
                t: e.t.0,
                pre: CartesianState { u: e.u_pre.0, w: e.w_pre.0, ..post },
                post,
                rotating_post: RotatingFrameMomentum {
                    u_bar: e.u_bar_post.0,
                    w_bar: e.w_bar_post.0,
                    phi: frame_angle(wall, theta),
                },
            }
        })
        .collect();
    let termination = doc.termination.map(|t| match t {
        JsonTermination::VertexHit { t } => Termination::VertexHit { t: t.0 },
        JsonTermination::Degenerate { wall, t, normal_speed } => {
            Termination::Degenerate { wall: wall.into(), t: t.0, normal_speed: normal_speed.0 }
        }
        JsonTermination::NoCollision { t } => Termination::NoCollision { t: t.0 },
    });
    Ok(Trajectory {
        initial,
        theta,
        events,
        energy: doc.energy.0,
        wedge_integrals: wedge_hamiltonians(&initial, theta),
        termination,
    })
}

pub fn write_sweep_csv<W: Write>(points: &[SweepPoint], out: W) -> io::Result<()> {
    let mut wtr = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    wtr.write_record(SWEEP_HEADER)?;
    for pt in points {
        wtr.write_record([
            pt.p.to_string(),
            pt.q.to_string(),
            fmt_float(pt.theta),
            fmt_float(pt.theta.to_degrees()),
            fmt_float(pt.u_bar),
        ])?;
    }
    wtr.flush()
}

#[derive(Serialize)]
struct JsonSweepPoint {
    p: u32,
    q: u32,
    theta: Num,
    theta_deg: Num,
    u_bar: Num,
}

pub fn write_sweep_json<W: Write>(points: &[SweepPoint], mut out: W) -> io::Result<()> {
    let doc: Vec<JsonSweepPoint> = points
        .iter()
        .map(|pt| JsonSweepPoint {
            p: pt.p,
            q: pt.q,
            theta: Num(pt.theta),
            theta_deg: Num(pt.theta.to_degrees()),
            u_bar: Num(pt.u_bar),
        })
        .collect();
    serde_json::to_writer_pretty(&mut out, &doc)?;
    out.write_all(b"\n")
}

/// Creates `path` and hands a buffered writer to `f`, attaching the path to
/// any I/O failure.
pub fn write_file<F>(path: &Path, f: F) -> Result<(), CliError>
where
    F: FnOnce(&mut BufWriter<File>) -> io::Result<()>,
{
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut buf = BufWriter::new(file);
    f(&mut buf).and_then(|_| buf.flush()).map_err(|e| CliError::io(path, e))
}

/// Writes `traj` to `path` as CSV or JSON. SVG goes through [`crate::plot`].
pub fn export_trajectory(traj: &Trajectory, format: Format, path: &Path) -> Result<(), CliError> {
    match format {
        Format::Csv => write_file(path, |w| write_csv(traj, w)),
        Format::Json => write_file(path, |w| write_json(traj, w)),
        Format::Svg => {
            let svg = crate::plot::trajectory_svg(traj)?;
            write_file(path, |w| w.write_all(svg.as_bytes()))
        }
    }
}
