//! The same motion computed a second way: in the wedge frame the problem
//! separates into two independent one-dimensional bouncers,
//!
//! * `x̃` under gravity `cos θ`, reflecting at `x̃ = 0` (wall B), and
//! * `ỹ` under gravity `sin θ`, reflecting at `ỹ = 0` (wall A).
//!
//! Each bouncer's wall contacts are an arithmetic progression, so every
//! event time comes from a closed form instead of accumulated flights.

use crate::frames::{wedge_to_cartesian, WedgeCoords};
use crate::geometry::{Wall, WedgeAngle};

use super::{
    make_event, resting_wall, validate_initial, CartesianState, SimulationError, Termination, Trajectory,
    GRAZING_EPS, TIE_EPS, VERTEX_EPS,
};

#[derive(Debug, Clone, Copy)]
struct Bouncer {
    gravity: f64,
    d0: f64,
    v0: f64,
    /// Speed at the wall, `√(2H)` of this coordinate.
    speed: f64,
    /// Time of the first contact after launch.
    first_hit: f64,
    period: f64,
}

impl Bouncer {
    fn new(d0: f64, v0: f64, gravity: f64) -> Self {
        let speed = (v0 * v0 + 2.0 * gravity * d0).max(0.0).sqrt();
        let first_hit = if v0 >= 0.0 {
            (v0 + speed) / gravity
        } else {
            2.0 * d0 / (speed - v0)
        };
        Self {
            gravity,
            d0,
            v0,
            speed,
            first_hit,
            period: 2.0 * speed / gravity,
        }
    }

    /// Time of contact number `k` (zero-based).
    fn hit_time(&self, k: u64) -> f64 {
        self.first_hit + k as f64 * self.period
    }

    /// Coordinate and momentum at time `t`, given `hits` contacts so far.
    fn at(&self, t: f64, hits: u64) -> (f64, f64) {
        let g = self.gravity;
        if hits == 0 {
            (self.d0 + self.v0 * t - 0.5 * g * t * t, self.v0 - g * t)
        } else {
            let tau = t - self.hit_time(hits - 1);
            (self.speed * tau - 0.5 * g * tau * tau, self.speed - g * tau)
        }
    }
}

/// Simulates by evolving `x̃` and `ỹ` as independent bouncers.
///
/// Produces the same trajectory as [`super::simulate`] up to rounding and
/// uses the same termination rules.
pub fn decoupled_simulate(
    initial: CartesianState,
    theta: WedgeAngle,
    n: usize,
) -> Result<Trajectory, SimulationError> {
    validate_initial(&initial, theta)?;
    let mut traj = Trajectory::new(initial, theta);
    traj.events.reserve(n);

    if let (true, Some((wall, normal_speed))) = (n > 0, resting_wall(&initial, theta)) {
        traj.termination = Some(Termination::Degenerate { wall, t: initial.t, normal_speed });
        return Ok(traj);
    }

    let wc = initial.wedge_coords(theta);
    let along_a = Bouncer::new(wc.x_tilde, wc.u_tilde, theta.cos());
    let along_b = Bouncer::new(wc.y_tilde, wc.w_tilde, theta.sin());
    let (mut hits_x, mut hits_y) = (0u64, 0u64);

    for _ in 0..n {
        let tx = along_a.hit_time(hits_x);
        let ty = along_b.hit_time(hits_y);
        if (tx - ty).abs() <= TIE_EPS {
            traj.termination = Some(Termination::VertexHit { t: initial.t + tx.min(ty) });
            break;
        }
        // x̃ reaching zero is a wall-B contact; ỹ reaching zero is wall A.
        let (wall, t_rel, hitter, (other_d, other_v)) = if tx < ty {
            (Wall::B, tx, along_a, along_b.at(tx, hits_y))
        } else {
            (Wall::A, ty, along_b, along_a.at(ty, hits_x))
        };
        if hitter.speed < GRAZING_EPS {
            traj.termination = Some(Termination::Degenerate {
                wall,
                t: initial.t + t_rel,
                normal_speed: hitter.speed,
            });
            break;
        }
        if other_d < VERTEX_EPS {
            traj.termination = Some(Termination::VertexHit { t: initial.t + t_rel });
            break;
        }

        let coords = |hitter_v: f64| match wall {
            Wall::B => WedgeCoords { x_tilde: 0.0, y_tilde: other_d, u_tilde: hitter_v, w_tilde: other_v },
            Wall::A => WedgeCoords { x_tilde: other_d, y_tilde: 0.0, u_tilde: other_v, w_tilde: hitter_v },
        };
        let t = initial.t + t_rel;
        let (q, p_in) = wedge_to_cartesian(&coords(-hitter.speed), theta);
        let (_, p_out) = wedge_to_cartesian(&coords(hitter.speed), theta);
        let pre = CartesianState::from_vectors(q, p_in, t);
        let post = CartesianState::from_vectors(q, p_out, t);
        traj.events.push(make_event(wall, pre, post, theta));

        match wall {
            Wall::B => hits_x += 1,
            Wall::A => hits_y += 1,
        }
    }
    Ok(traj)
}
