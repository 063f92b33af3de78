//! Reference systems and the transforms between them.
//!
//! * Cartesian: fixed axes `e_x`, `e_y` with origin at the vertex.
//! * Rotating: `(ē_r, ē_φ) = R_φ (e_x, e_y)`, used for momenta at a
//!   collision. Only momenta are mapped through it; its origin (the
//!   particle) never matters for them.
//! * Wedge: `(ẽ_r, ẽ_θ)` along wall A and wall B. Coordinates `x̃`, `ỹ` are
//!   the components along those walls, so wall A is `ỹ = 0` and wall B is
//!   `x̃ = 0`.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::geometry::{wall_direction, Wall, WedgeAngle};
use crate::vec2::{Mat2, Vec2};

/// Allowed mismatch between a stored frame angle and the wall's angle.
pub const FRAME_ANGLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FrameError {
    #[error("frame angle {found} does not belong to wall {wall} (expected {expected})")]
    FrameMismatch {
        wall: Wall,
        found: f64,
        expected: f64,
    },
}

/// Momentum resolved in the rotating frame at angle `phi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotatingFrameMomentum {
    /// Component along `ē_r`.
    pub u_bar: f64,
    /// Component along `ē_φ`.
    pub w_bar: f64,
    pub phi: f64,
}

impl RotatingFrameMomentum {
    pub fn norm_squared(&self) -> f64 {
        self.u_bar * self.u_bar + self.w_bar * self.w_bar
    }
}

/// Position and momentum in the wall-aligned frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WedgeCoords {
    pub x_tilde: f64,
    pub y_tilde: f64,
    pub u_tilde: f64,
    pub w_tilde: f64,
}

/// `R_a = [[cos a, −sin a], [sin a, cos a]]`.
pub fn rotation(angle: f64) -> Mat2 {
    let (s, c) = angle.sin_cos();
    Mat2::new(c, -s, s, c)
}

/// The wedge basis as a matrix, `R_{π/2−θ}`, built from the cached sine
/// and cosine of θ so it agrees bit-for-bit with the geometry module.
pub fn wedge_basis(theta: WedgeAngle) -> Mat2 {
    Mat2::from_columns(wall_direction(Wall::A, theta), wall_direction(Wall::B, theta))
}

pub fn cartesian_to_wedge(q: Vec2, p: Vec2, theta: WedgeAngle) -> WedgeCoords {
    let rt = wedge_basis(theta).transpose();
    let qw = rt.apply(q);
    let pw = rt.apply(p);
    WedgeCoords {
        x_tilde: qw.x,
        y_tilde: qw.y,
        u_tilde: pw.x,
        w_tilde: pw.y,
    }
}

pub fn wedge_to_cartesian(wc: &WedgeCoords, theta: WedgeAngle) -> (Vec2, Vec2) {
    let r = wedge_basis(theta);
    (
        r.apply(Vec2::new(wc.x_tilde, wc.y_tilde)),
        r.apply(Vec2::new(wc.u_tilde, wc.w_tilde)),
    )
}

pub fn cartesian_to_rotating(p: Vec2, phi: f64) -> RotatingFrameMomentum {
    let v = rotation(phi).transpose().apply(p);
    RotatingFrameMomentum {
        u_bar: v.x,
        w_bar: v.y,
        phi,
    }
}

pub fn rotating_to_cartesian(rfm: &RotatingFrameMomentum) -> Vec2 {
    rotation(rfm.phi).apply(Vec2::new(rfm.u_bar, rfm.w_bar))
}

/// Angle of the rotating frame whose `ē_r` runs along `wall`, away from the
/// vertex: `π/2 − θ` on A and `π − θ` on B.
pub fn frame_angle(wall: Wall, theta: WedgeAngle) -> f64 {
    match wall {
        Wall::A => FRAC_PI_2 - theta.radians(),
        Wall::B => PI - theta.radians(),
    }
}

/// Rotating-frame momentum at a wall, re-expressed as `(ũ, w̃)`.
///
/// On A the two frames coincide. On B, `ē_r = ẽ_θ` and `ē_φ = −ẽ_r`, so
/// `(ũ, w̃) = (−w̄, ū)`.
pub fn rotating_to_wedge(
    rfm: &RotatingFrameMomentum,
    wall: Wall,
    theta: WedgeAngle,
) -> Result<(f64, f64), FrameError> {
    let expected = frame_angle(wall, theta);
    if (rfm.phi - expected).abs() > FRAME_ANGLE_TOL {
        return Err(FrameError::FrameMismatch {
            wall,
            found: rfm.phi,
            expected,
        });
    }
    Ok(match wall {
        Wall::A => (rfm.u_bar, rfm.w_bar),
        Wall::B => (-rfm.w_bar, rfm.u_bar),
    })
}

/// Inverse of [`rotating_to_wedge`].
pub fn wedge_to_rotating(
    u_tilde: f64,
    w_tilde: f64,
    wall: Wall,
    theta: WedgeAngle,
) -> RotatingFrameMomentum {
    let (u_bar, w_bar) = match wall {
        Wall::A => (u_tilde, w_tilde),
        Wall::B => (w_tilde, -u_tilde),
    };
    RotatingFrameMomentum {
        u_bar,
        w_bar,
        phi: frame_angle(wall, theta),
    }
}

/// Components of the unit gravity vector `(0, −1)` in the wedge frame.
pub fn gravity_in_wedge(theta: WedgeAngle) -> Vec2 {
    wedge_basis(theta).transpose().apply(Vec2::new(0.0, -1.0))
}
