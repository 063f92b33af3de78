//! Periodic orbits at rational period ratios, orbit classification, and the
//! sweep of periodic launch points over `(p, q)`.
//!
//! Along each wall the motion is a 1-D bouncer. With outgoing normal
//! momentum `√E` on wall A the energy splits evenly between them, and the
//! ratio of their half-periods is `tan θ`. At `θ* = arctan(p/q)` the orbit
//! closes after `p` contacts with wall A and `q` with wall B.

use std::collections::HashSet;

use num_integer::Integer;

use crate::dynamics::{
    arclength_for_energy, launch_from_wall, simulate, CartesianState, SimulationError, Termination,
    Trajectory,
};
use crate::frames::{cartesian_to_rotating, frame_angle};
use crate::geometry::{config_bounds, GeometryError, Wall, WedgeAngle};
use crate::maps::MapState;

/// Default recurrence tolerance, on positions scaled by `E` and momenta
/// scaled by `√E`.
pub const DEFAULT_TOL: f64 = 1e-8;
/// Collisions simulated by [`sensitivity_probe`].
pub const PROBE_COLLISIONS: usize = 1000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OrbitError {
    #[error("p and q must be positive, got ({p}, {q})")]
    NonPositive { p: u32, q: u32 },
    #[error("p = {p} and q = {q} are not coprime")]
    NotCoprime { p: u32, q: u32 },
    #[error("energy must be positive, got {0}")]
    NonPositiveEnergy(f64),
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("launch momenta must be positive, got ({0}, {1})")]
    BadLaunch(f64, f64),
    #[error("trajectory has too few events to classify")]
    TooShort,
    #[error("grid needs at least one cell per axis")]
    EmptyGrid,
    #[error("simulation stopped early: {0}")]
    Terminated(Termination),
    #[error(transparent)]
    Simulation(#[from] SimulationError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Coprime positive integers selecting the orbit with `p` contacts on wall
/// A and `q` on wall B per period, at energy `E`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitSpec {
    p: u32,
    q: u32,
    energy: f64,
}

impl OrbitSpec {
    pub fn new(p: u32, q: u32, energy: f64) -> Result<Self, OrbitError> {
        if p == 0 || q == 0 {
            return Err(OrbitError::NonPositive { p, q });
        }
        if p.gcd(&q) != 1 {
            return Err(OrbitError::NotCoprime { p, q });
        }
        if !(energy > 0.0 && energy.is_finite()) {
            return Err(OrbitError::NonPositiveEnergy(energy));
        }
        Ok(Self { p, q, energy })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn period(&self) -> usize {
        (self.p + self.q) as usize
    }
}

/// Half-periods of the two 1-D bouncers: `T_A = ũ₀/cos θ`, `T_B = w̃₀/sin θ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BouncePeriods {
    pub t_a: f64,
    pub t_b: f64,
}

impl BouncePeriods {
    pub fn new(u_tilde0: f64, w_tilde0: f64, theta: WedgeAngle) -> Result<Self, OrbitError> {
        if !(u_tilde0 > 0.0 && w_tilde0 > 0.0) {
            return Err(OrbitError::BadLaunch(u_tilde0, w_tilde0));
        }
        Ok(Self {
            t_a: u_tilde0 / theta.cos(),
            t_b: w_tilde0 / theta.sin(),
        })
    }

    pub fn ratio(&self) -> f64 {
        self.t_a / self.t_b
    }
}

/// Contact times of the two bouncers launched together from the vertex.
///
/// `a[j-1] = 2j·T_A` are the returns of `x̃` to zero and `b[k-1] = 2k·T_B`
/// the returns of `ỹ`, for `j, k = 1..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct BounceSchedule {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

pub fn bounce_times(
    u_tilde0: f64,
    w_tilde0: f64,
    theta: WedgeAngle,
    n: usize,
) -> Result<BounceSchedule, OrbitError> {
    let periods = BouncePeriods::new(u_tilde0, w_tilde0, theta)?;
    let seq = |half: f64| (1..=n).map(|j| 2.0 * j as f64 * half).collect();
    Ok(BounceSchedule {
        a: seq(periods.t_a),
        b: seq(periods.t_b),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegenerateReason {
    VertexHit,
    Grazing,
    NoCollision,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitClass {
    Periodic { period: usize, hits_a: usize, hits_b: usize },
    /// No recurrence within the simulated horizon. This is evidence of a
    /// quasi-periodic orbit, not a proof of density.
    Dense,
    Sliding,
    Degenerate { reason: DegenerateReason },
}

impl OrbitClass {
    pub fn is_periodic(&self) -> bool {
        matches!(self, OrbitClass::Periodic { .. })
    }
}

/// `θ* = arctan(p/q)`.
pub fn critical_angle(spec: &OrbitSpec) -> WedgeAngle {
    WedgeAngle::new((spec.p as f64 / spec.q as f64).atan())
        .expect("arctan of a positive ratio lies in (0, π/2)")
}

/// `T_A/T_B` for equal launch momenta along the two walls: `tan θ`.
pub fn period_ratio(theta: WedgeAngle) -> f64 {
    theta.radians().tan()
}

/// `ū* = √E (q − p)/(q + p)`, `w̄* = √E`, with `ū` measured away from the
/// vertex on wall A.
pub fn periodic_initial_condition(spec: &OrbitSpec) -> MapState {
    let root = spec.energy.sqrt();
    let (p, q) = (spec.p as f64, spec.q as f64);
    MapState::new(root * (q - p) / (q + p), root, spec.energy)
        .expect("|ū*| < √E for positive p, q")
}

/// Launch state for `spec`: on wall A with the periodic momentum, at the
/// arclength that gives energy `E`.
pub fn periodic_launch(spec: &OrbitSpec) -> Result<CartesianState, OrbitError> {
    let theta = critical_angle(spec);
    let ms = periodic_initial_condition(spec);
    let s = arclength_for_energy(Wall::A, ms.u_bar, ms.w_bar, spec.energy, theta)?;
    Ok(launch_from_wall(Wall::A, s, ms.u_bar, ms.w_bar, theta)?)
}

/// One period (`p + q` collisions) of the periodic orbit.
pub fn build_periodic_orbit(spec: &OrbitSpec) -> Result<Trajectory, OrbitError> {
    build_periodic_orbit_periods(spec, 1)
}

pub fn build_periodic_orbit_periods(spec: &OrbitSpec, periods: usize) -> Result<Trajectory, OrbitError> {
    let launch = periodic_launch(spec)?;
    let traj = simulate(launch, critical_angle(spec), periods * spec.period())?;
    match traj.termination {
        Some(t) => Err(OrbitError::Terminated(t)),
        None => Ok(traj),
    }
}

/// Distance between the last event's outgoing state and the launch, with
/// positions scaled by `E` and rotating-frame momenta by `√E`. Assumes the
/// launch sits on wall A, as for [`build_periodic_orbit`].
pub fn closure_error(traj: &Trajectory) -> Option<f64> {
    let last = traj.events.last()?;
    let phi = frame_angle(Wall::A, traj.theta);
    let start = cartesian_to_rotating(traj.initial.momentum(), phi);
    let wall_penalty = if last.wall == Wall::A { 0.0 } else { f64::INFINITY };
    let dq = (last.post.position() - traj.initial.position()).norm() / traj.energy;
    let dp = (last.rotating_post.u_bar - start.u_bar)
        .abs()
        .max((last.rotating_post.w_bar - start.w_bar).abs())
        / traj.energy.sqrt();
    Some(dq.max(dp).max(wall_penalty))
}

fn events_match(traj: &Trajectory, i: usize, j: usize, tol: f64) -> bool {
    let (a, b) = (&traj.events[i], &traj.events[j]);
    if a.wall != b.wall {
        return false;
    }
    let dq = (a.post.position() - b.post.position()).norm() / traj.energy;
    let dp = (a.rotating_post.u_bar - b.rotating_post.u_bar)
        .abs()
        .max((a.rotating_post.w_bar - b.rotating_post.w_bar).abs())
        / traj.energy.sqrt();
    dq <= tol && dp <= tol
}

/// Classifies a trajectory by recurrence of its collision sequence.
///
/// A period `k ≤ n/2` is accepted when event `k` reproduces event 0 and
/// every later event reproduces the one `k` before it.
pub fn classify_orbit(traj: &Trajectory, tol: f64) -> Result<OrbitClass, OrbitError> {
    if !(tol > 0.0) {
        return Err(OrbitError::BadTolerance(tol));
    }
    match traj.termination {
        Some(Termination::Degenerate { normal_speed, .. }) => {
            return Ok(if normal_speed < tol {
                OrbitClass::Sliding
            } else {
                OrbitClass::Degenerate { reason: DegenerateReason::Grazing }
            });
        }
        Some(Termination::VertexHit { .. }) => {
            return Ok(OrbitClass::Degenerate { reason: DegenerateReason::VertexHit })
        }
        Some(Termination::NoCollision { .. }) => {
            return Ok(OrbitClass::Degenerate { reason: DegenerateReason::NoCollision })
        }
        None => {}
    }
    let n = traj.events.len();
    if n < 2 {
        return Err(OrbitError::TooShort);
    }
    for k in 1..=n / 2 {
        if !events_match(traj, 0, k, tol) {
            continue;
        }
        if (k..n).all(|j| events_match(traj, j - k, j, tol)) {
            let hits_a = traj.events[..k].iter().filter(|e| e.wall == Wall::A).count();
            return Ok(OrbitClass::Periodic { period: k, hits_a, hits_b: k - hits_a });
        }
    }
    Ok(OrbitClass::Dense)
}

/// Fraction of cells of an `nx × ny` grid over the bounding box
/// `[0, E/cos θ] × [0, E/sin θ]` (in `x̃`, `ỹ`) touched by the flights.
///
/// Each flight is sampled at spacing of at most 1/100 of a cell diagonal.
pub fn coverage_fraction(traj: &Trajectory, nx: usize, ny: usize) -> Result<f64, OrbitError> {
    if nx == 0 || ny == 0 {
        return Err(OrbitError::EmptyGrid);
    }
    if traj.events.is_empty() {
        return Err(OrbitError::TooShort);
    }
    let theta = traj.theta;
    let bounds = config_bounds(traj.energy, theta)?;
    let (cx, cy) = (bounds.x_tilde_max / nx as f64, bounds.y_tilde_max / ny as f64);
    let spacing = cx.hypot(cy) / 100.0;
    let cell = |v: f64, size: f64, count: usize| ((v / size).floor().max(0.0) as usize).min(count - 1);

    let mut visited = vec![false; nx * ny];
    for (start, dt) in traj.flights() {
        let end = crate::dynamics::free_flight(&start, dt);
        let vmax = start.momentum().norm().max(end.momentum().norm());
        let steps = ((dt * vmax / spacing).ceil() as usize).max(1);
        for k in 0..=steps {
            let s = crate::dynamics::free_flight(&start, dt * k as f64 / steps as f64);
            let wc = s.wedge_coords(theta);
            let (i, j) = (cell(wc.x_tilde, cx, nx), cell(wc.y_tilde, cy, ny));
            visited[j * nx + i] = true;
        }
    }
    Ok(visited.iter().filter(|&&v| v).count() as f64 / (nx * ny) as f64)
}

/// Launches from the periodic orbit's starting point with `ū* + eps` and
/// classifies [`PROBE_COLLISIONS`] collisions.
///
/// The launch point is held fixed, so a nonzero `eps` also shifts the
/// energy and with it the ratio of the two bounce periods.
pub fn sensitivity_probe(spec: &OrbitSpec, eps: f64) -> Result<OrbitClass, OrbitError> {
    let theta = critical_angle(spec);
    let ms = periodic_initial_condition(spec);
    let s = arclength_for_energy(Wall::A, ms.u_bar, ms.w_bar, spec.energy, theta)?;
    let launch = launch_from_wall(Wall::A, s, ms.u_bar + eps, ms.w_bar, theta)?;
    let traj = simulate(launch, theta, PROBE_COLLISIONS)?;
    classify_orbit(&traj, DEFAULT_TOL)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub p: u32,
    pub q: u32,
    pub theta: f64,
    pub u_bar: f64,
}

/// `(θ*, ū*)` for every coprime `1 ≤ p ≤ p_max`, `1 ≤ q ≤ q_max`, sorted by θ.
pub fn sweep_periodic_points(p_max: u32, q_max: u32, energy: f64) -> Vec<SweepPoint> {
    sweep_filtered(p_max, q_max, energy, |_, _| true)
}

/// The half of the sweep with `q ≥ p`, i.e. `θ* ∈ (0, π/4]`.
pub fn sweep_half(max: u32, energy: f64) -> Vec<SweepPoint> {
    sweep_filtered(max, max, energy, |p, q| q >= p)
}

fn sweep_filtered(p_max: u32, q_max: u32, energy: f64, keep: impl Fn(u32, u32) -> bool) -> Vec<SweepPoint> {
    let mut seen = HashSet::new();
    let mut points: Vec<SweepPoint> = (1..=p_max)
        .flat_map(|p| (1..=q_max).map(move |q| (p, q)))
        .filter(|&(p, q)| keep(p, q))
        .filter_map(|(p, q)| OrbitSpec::new(p, q, energy).ok())
        .filter(|spec| seen.insert((spec.p, spec.q)))
        .map(|spec| SweepPoint {
            p: spec.p,
            q: spec.q,
            theta: critical_angle(&spec).radians(),
            u_bar: periodic_initial_condition(&spec).u_bar,
        })
        .collect();
    points.sort_by(|a, b| a.theta.total_cmp(&b.theta));
    points
}
