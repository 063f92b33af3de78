//! Event-driven dynamics: exact parabolic flight between walls, collision
//! detection by closed-form root solving, and specular reflection.
//!
//! Units are dimensionless (`m = g = 1`), gravity is `(0, −1)` and the
//! energy is `H = (u² + w²)/2 + y`.

mod decoupled;

pub use decoupled::decoupled_simulate;

use std::fmt;

use crate::frames::{cartesian_to_rotating, cartesian_to_wedge, frame_angle, RotatingFrameMomentum, WedgeCoords};
use crate::geometry::{contains, inward_normal, wall_direction, wall_point, GeometryError, Wall, WedgeAngle};
use crate::vec2::Vec2;

/// Roots at or below this flight time are the collision just processed.
pub const FLIGHT_EPS: f64 = 1e-10;
/// Landings closer than this to the vertex terminate the run.
pub const VERTEX_EPS: f64 = 1e-9;
/// Normal speeds below this at a wall are treated as sliding.
pub const GRAZING_EPS: f64 = 1e-10;
/// Two walls reached within this time of each other means the vertex.
pub const TIE_EPS: f64 = 1e-12;
/// Distance from a wall line still counted as "on" it.
pub const ON_WALL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartesianState {
    pub x: f64,
    pub y: f64,
    pub u: f64,
    pub w: f64,
    pub t: f64,
}

impl CartesianState {
    pub fn new(x: f64, y: f64, u: f64, w: f64) -> Self {
        Self { x, y, u, w, t: 0.0 }
    }

    pub fn from_vectors(q: Vec2, p: Vec2, t: f64) -> Self {
        Self { x: q.x, y: q.y, u: p.x, w: p.y, t }
    }

    pub fn position(&self) -> Vec2 {
        Vec2::new(self.x, self.y)
    }

    pub fn momentum(&self) -> Vec2 {
        Vec2::new(self.u, self.w)
    }

    pub fn with_momentum(&self, p: Vec2) -> Self {
        Self { u: p.x, w: p.y, ..*self }
    }

    pub fn wedge_coords(&self, theta: WedgeAngle) -> WedgeCoords {
        cartesian_to_wedge(self.position(), self.momentum(), theta)
    }

    fn is_finite(&self) -> bool {
        [self.x, self.y, self.u, self.w, self.t].iter().all(|v| v.is_finite())
    }
}

/// The two one-dimensional energies `H̃x = ũ²/2 + x̃ cos θ` and
/// `H̃y = w̃²/2 + ỹ sin θ`. Each is conserved separately.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WedgeIntegrals {
    pub x: f64,
    pub y: f64,
}

impl WedgeIntegrals {
    pub fn total(&self) -> f64 {
        self.x + self.y
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollisionEvent {
    pub wall: Wall,
    pub t: f64,
    /// Incoming state, on the wall.
    pub pre: CartesianState,
    /// Outgoing state, same position.
    pub post: CartesianState,
    /// Outgoing momentum in the rotating frame at `frame_angle(wall, θ)`.
    pub rotating_post: RotatingFrameMomentum,
}

/// Why a run stopped before producing the requested number of events.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Termination {
    /// The next landing point is the vertex (or both walls at once).
    VertexHit { t: f64 },
    /// Normal speed at `wall` fell below [`GRAZING_EPS`].
    Degenerate { wall: Wall, t: f64, normal_speed: f64 },
    /// No forward root on either wall; cannot happen for a valid state.
    NoCollision { t: f64 },
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Termination::VertexHit { t } => write!(f, "vertex hit at t={t}"),
            Termination::Degenerate { wall, t, normal_speed } => {
                write!(f, "grazing on wall {wall} at t={t} (normal speed {normal_speed:e})")
            }
            Termination::NoCollision { t } => write!(f, "no collision ahead at t={t}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub initial: CartesianState,
    pub theta: WedgeAngle,
    pub events: Vec<CollisionEvent>,
    pub energy: f64,
    pub wedge_integrals: WedgeIntegrals,
    pub termination: Option<Termination>,
}

impl Trajectory {
    pub fn new(initial: CartesianState, theta: WedgeAngle) -> Self {
        Self {
            initial,
            theta,
            events: Vec::new(),
            energy: hamiltonian(&initial),
            wedge_integrals: wedge_hamiltonians(&initial, theta),
            termination: None,
        }
    }

    /// Outgoing states in order: the launch, then every post-collision state.
    pub fn flight_starts(&self) -> impl Iterator<Item = &CartesianState> + '_ {
        std::iter::once(&self.initial).chain(self.events.iter().map(|e| &e.post))
    }

    /// `(start, duration)` of every flight that ends at a recorded collision.
    pub fn flights(&self) -> impl Iterator<Item = (CartesianState, f64)> + '_ {
        self.flight_starts()
            .zip(self.events.iter())
            .map(|(start, ev)| (*start, ev.t - start.t))
    }

    pub fn hits_on(&self, wall: Wall) -> usize {
        self.events.iter().filter(|e| e.wall == wall).count()
    }
}

/// A root of the flight equations: time until the next wall contact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Collision {
    pub dt: f64,
    pub wall: Wall,
}

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum CollisionError {
    #[error("flight ends at the wedge vertex after dt={dt}")]
    VertexHit { dt: f64 },
    #[error("no forward collision found")]
    NoCollision,
    #[error("grazing arrival on wall {wall} (normal speed {normal_speed:e})")]
    Degenerate { wall: Wall, normal_speed: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum ReflectError {
    #[error("state is {distance:e} away from wall {wall}")]
    NotOnWall { wall: Wall, distance: f64 },
    #[error("normal momentum {normal_momentum} already points away from wall {wall}")]
    OutgoingAlready { wall: Wall, normal_momentum: f64 },
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimulationError {
    #[error("initial state has non-finite components")]
    NonFinite,
    #[error("initial position ({x}, {y}) is outside the wedge")]
    OutsideRegion { x: f64, y: f64 },
    #[error("energy must be positive, got {0}")]
    NonPositiveEnergy(f64),
    #[error("initial state sits on wall {0} moving out of the region")]
    LeavingRegion(Wall),
}

/// State at arclength `s` on `wall` with momentum `ū` along the wall (away
/// from the vertex) and `w̄` along the inward normal.
pub fn launch_from_wall(
    wall: Wall,
    s: f64,
    u_bar: f64,
    w_bar: f64,
    theta: WedgeAngle,
) -> Result<CartesianState, GeometryError> {
    let q = wall_point(wall, s, theta)?;
    let p = u_bar * wall_direction(wall, theta) + w_bar * inward_normal(wall, theta);
    Ok(CartesianState::from_vectors(q, p, 0.0))
}

/// Arclength on `wall` at which momentum `(ū, w̄)` has total energy `E`.
pub fn arclength_for_energy(
    wall: Wall,
    u_bar: f64,
    w_bar: f64,
    energy: f64,
    theta: WedgeAngle,
) -> Result<f64, GeometryError> {
    let height = energy - 0.5 * (u_bar * u_bar + w_bar * w_bar);
    let rise = wall_direction(wall, theta).y;
    let s = height / rise;
    if !(s >= 0.0) {
        return Err(GeometryError::NegativeArclength(s));
    }
    Ok(s)
}

pub fn hamiltonian(s: &CartesianState) -> f64 {
    0.5 * (s.u * s.u + s.w * s.w) + s.y
}

pub fn wedge_hamiltonians(s: &CartesianState, theta: WedgeAngle) -> WedgeIntegrals {
    let wc = s.wedge_coords(theta);
    WedgeIntegrals {
        x: 0.5 * wc.u_tilde * wc.u_tilde + wc.x_tilde * theta.cos(),
        y: 0.5 * wc.w_tilde * wc.w_tilde + wc.y_tilde * theta.sin(),
    }
}

pub fn free_flight(s: &CartesianState, dt: f64) -> CartesianState {
    debug_assert!(dt >= 0.0);
    CartesianState {
        x: s.x + s.u * dt,
        y: s.y + s.w * dt - 0.5 * dt * dt,
        u: s.u,
        w: s.w - dt,
        t: s.t + dt,
    }
}

/// Both roots of `d0 + v·t − a·t²/2 = 0` for `a > 0`, computed without
/// cancellation. Non-finite roots are dropped.
fn flight_roots(d0: f64, v: f64, a: f64) -> impl Iterator<Item = f64> {
    let disc = v * v + 2.0 * a * d0;
    let roots = if disc < 0.0 {
        [f64::NAN, f64::NAN]
    } else {
        let sq = disc.sqrt();
        if v >= 0.0 {
            let big = v + sq;
            [big / a, -2.0 * d0 / big]
        } else {
            let big = v - sq;
            [big / a, -2.0 * d0 / big]
        }
    };
    roots.into_iter().filter(|r| r.is_finite())
}

/// Earliest future wall contact for a particle in free flight.
///
/// For each wall the inward signed distance along the flight is the
/// quadratic `d(t) = d0 + (p·n̂)t − n̂_y t²/2`; the smallest root beyond
/// [`FLIGHT_EPS`] over both walls wins.
pub fn next_collision(s: &CartesianState, theta: WedgeAngle) -> Result<Collision, CollisionError> {
    let q = s.position();
    let p = s.momentum();
    let mut hits: [Option<f64>; 2] = [None, None];
    for (slot, wall) in hits.iter_mut().zip([Wall::A, Wall::B]) {
        let n = inward_normal(wall, theta);
        *slot = flight_roots(n.dot(q), n.dot(p), n.y)
            .filter(|&r| r > FLIGHT_EPS)
            .min_by(f64::total_cmp);
    }
    let (dt, wall) = match hits {
        [Some(ta), Some(tb)] => {
            if (ta - tb).abs() <= TIE_EPS {
                return Err(CollisionError::VertexHit { dt: ta.min(tb) });
            }
            if ta < tb {
                (ta, Wall::A)
            } else {
                (tb, Wall::B)
            }
        }
        [Some(ta), None] => (ta, Wall::A),
        [None, Some(tb)] => (tb, Wall::B),
        [None, None] => return Err(CollisionError::NoCollision),
    };
    let landing = free_flight(s, dt);
    if landing.position().norm() < VERTEX_EPS {
        return Err(CollisionError::VertexHit { dt });
    }
    let normal_speed = inward_normal(wall, theta).dot(landing.momentum()).abs();
    if normal_speed < GRAZING_EPS {
        return Err(CollisionError::Degenerate { wall, normal_speed });
    }
    Ok(Collision { dt, wall })
}

/// `p − 2(p·n̂)n̂` for the wall's unit normal. An involution.
pub fn mirror_momentum(p: Vec2, wall: Wall, theta: WedgeAngle) -> Vec2 {
    let n = inward_normal(wall, theta);
    p - (2.0 * p.dot(n)) * n
}

/// Elastic reflection off `wall`. The state must be on the wall and not
/// already moving into the region.
pub fn reflect(s: &CartesianState, wall: Wall, theta: WedgeAngle) -> Result<CartesianState, ReflectError> {
    let n = inward_normal(wall, theta);
    let distance = n.dot(s.position());
    if distance.abs() > ON_WALL_TOL * s.position().norm().max(1.0) {
        return Err(ReflectError::NotOnWall { wall, distance });
    }
    let normal_momentum = n.dot(s.momentum());
    if normal_momentum > 0.0 {
        return Err(ReflectError::OutgoingAlready { wall, normal_momentum });
    }
    Ok(s.with_momentum(mirror_momentum(s.momentum(), wall, theta)))
}

pub(crate) fn validate_initial(initial: &CartesianState, theta: WedgeAngle) -> Result<f64, SimulationError> {
    if !initial.is_finite() {
        return Err(SimulationError::NonFinite);
    }
    let q = initial.position();
    if !contains(q, theta) {
        return Err(SimulationError::OutsideRegion { x: q.x, y: q.y });
    }
    let energy = hamiltonian(initial);
    if !(energy > 0.0) {
        return Err(SimulationError::NonPositiveEnergy(energy));
    }
    for wall in [Wall::A, Wall::B] {
        let n = inward_normal(wall, theta);
        if n.dot(q).abs() <= ON_WALL_TOL && n.dot(initial.momentum()) < 0.0 {
            return Err(SimulationError::LeavingRegion(wall));
        }
    }
    Ok(energy)
}

/// The wall the state sits on with normal speed below [`GRAZING_EPS`].
/// Gravity presses into both walls, so such a launch can only slide.
pub(crate) fn resting_wall(s: &CartesianState, theta: WedgeAngle) -> Option<(Wall, f64)> {
    [Wall::A, Wall::B].into_iter().find_map(|wall| {
        let n = inward_normal(wall, theta);
        let speed = n.dot(s.momentum());
        (n.dot(s.position()).abs() <= ON_WALL_TOL && speed < GRAZING_EPS).then_some((wall, speed.abs()))
    })
}

pub(crate) fn make_event(wall: Wall, pre: CartesianState, post: CartesianState, theta: WedgeAngle) -> CollisionEvent {
    CollisionEvent {
        wall,
        t: post.t,
        pre,
        post,
        rotating_post: cartesian_to_rotating(post.momentum(), frame_angle(wall, theta)),
    }
}

/// Runs the event loop for up to `n` collisions.
///
/// Precondition failures are errors; a vertex hit or grazing arrival ends
/// the run early and is recorded in [`Trajectory::termination`].
pub fn simulate(initial: CartesianState, theta: WedgeAngle, n: usize) -> Result<Trajectory, SimulationError> {
    validate_initial(&initial, theta)?;
    let mut traj = Trajectory::new(initial, theta);
    traj.events.reserve(n);
    if let (true, Some((wall, normal_speed))) = (n > 0, resting_wall(&initial, theta)) {
        traj.termination = Some(Termination::Degenerate { wall, t: initial.t, normal_speed });
        return Ok(traj);
    }
    let mut state = initial;
    for _ in 0..n {
        let collision = match next_collision(&state, theta) {
            Ok(c) => c,
            Err(err) => {
                traj.termination = Some(match err {
                    CollisionError::VertexHit { dt } => Termination::VertexHit { t: state.t + dt },
                    CollisionError::Degenerate { wall, normal_speed } => Termination::Degenerate {
                        wall,
                        t: state.t,
                        normal_speed,
                    },
                    CollisionError::NoCollision => Termination::NoCollision { t: state.t },
                });
                break;
            }
        };
        let pre = free_flight(&state, collision.dt);
        let post = match reflect(&pre, collision.wall, theta) {
            Ok(post) => post,
            Err(_) => {
                // Landing off the wall line means the root solve broke down.
                traj.termination = Some(Termination::NoCollision { t: state.t });
                break;
            }
        };
        traj.events.push(make_event(collision.wall, pre, post, theta));
        state = post;
    }
    Ok(traj)
}
