//! The rotated orthogonal wedge: two perpendicular walls meeting at the
//! origin, with the bisector tilted clockwise from the vertical by `theta`.
//!
//! Wall A (right-hand slope) is the ray `y = x·cot θ, x ≥ 0`; wall B
//! (left-hand slope) is the ray `y = −x·tan θ, x ≤ 0`. The allowed region is
//! the quarter plane above both walls.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use crate::vec2::Vec2;

/// Absolute slack on the signed distance to a wall when testing membership.
pub const BOUNDARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("wedge angle {0} is outside the open interval (0, π/2)")]
    AngleOutOfRange(f64),
    #[error("arclength must be non-negative, got {0}")]
    NegativeArclength(f64),
    #[error("energy must be positive, got {0}")]
    NonPositiveEnergy(f64),
}

/// Tilt of the wedge, measured clockwise from the vertical, in radians.
///
/// Validated once on construction; everything downstream assumes
/// `0 < theta < π/2`. The sine and cosine are cached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WedgeAngle {
    theta: f64,
    sin: f64,
    cos: f64,
}

impl WedgeAngle {
    pub fn new(theta: f64) -> Result<Self, GeometryError> {
        if !(theta > 0.0 && theta < FRAC_PI_2) {
            return Err(GeometryError::AngleOutOfRange(theta));
        }
        Ok(Self {
            theta,
            sin: theta.sin(),
            cos: theta.cos(),
        })
    }

    pub fn from_degrees(degrees: f64) -> Result<Self, GeometryError> {
        Self::new(degrees.to_radians())
    }

    pub fn radians(&self) -> f64 {
        self.theta
    }

    pub fn degrees(&self) -> f64 {
        self.theta.to_degrees()
    }

    pub fn sin(&self) -> f64 {
        self.sin
    }

    pub fn cos(&self) -> f64 {
        self.cos
    }

    pub fn tan(&self) -> f64 {
        self.sin / self.cos
    }

    pub fn cot(&self) -> f64 {
        self.cos / self.sin
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Wall {
    /// Right-hand slope.
    A,
    /// Left-hand slope.
    B,
}

impl Wall {
    pub fn other(self) -> Wall {
        match self {
            Wall::A => Wall::B,
            Wall::B => Wall::A,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Wall::A => "A",
            Wall::B => "B",
        }
    }
}

impl fmt::Display for Wall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Box containing every trajectory of energy `E`, in wall-aligned
/// coordinates: `0 ≤ x̃ ≤ x_tilde_max`, `0 ≤ ỹ ≤ y_tilde_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfigBounds {
    pub x_tilde_max: f64,
    pub y_tilde_max: f64,
}

/// Unit vector along `wall`, pointing away from the vertex.
pub fn wall_direction(wall: Wall, theta: WedgeAngle) -> Vec2 {
    match wall {
        Wall::A => Vec2::new(theta.sin(), theta.cos()),
        Wall::B => Vec2::new(-theta.cos(), theta.sin()),
    }
}

/// Unit normal of `wall` pointing into the allowed region.
///
/// The inward normal of each wall is the direction of the other wall.
pub fn inward_normal(wall: Wall, theta: WedgeAngle) -> Vec2 {
    wall_direction(wall.other(), theta)
}

/// Signed distance from `wall`'s line, positive on the allowed side.
pub fn signed_distance(point: Vec2, wall: Wall, theta: WedgeAngle) -> f64 {
    inward_normal(wall, theta).dot(point)
}

/// Membership in the allowed region, with [`BOUNDARY_TOL`] slack so that
/// points sitting on a wall after a collision count as inside.
pub fn contains(point: Vec2, theta: WedgeAngle) -> bool {
    signed_distance(point, Wall::A, theta) >= -BOUNDARY_TOL
        && signed_distance(point, Wall::B, theta) >= -BOUNDARY_TOL
}

/// Point at arclength `s` from the vertex along `wall`.
pub fn wall_point(wall: Wall, s: f64, theta: WedgeAngle) -> Result<Vec2, GeometryError> {
    if !(s >= 0.0) {
        return Err(GeometryError::NegativeArclength(s));
    }
    Ok(s * wall_direction(wall, theta))
}

/// Tangent/normal pair of the rotating frame attached to `wall`.
///
/// The tangent points away from the vertex and the normal is the tangent
/// turned by +90°. On wall A the normal points into the region; on wall B it
/// points out of it (it is `−inward_normal(B)`).
pub fn wall_frame(wall: Wall, theta: WedgeAngle) -> (Vec2, Vec2) {
    let tangent = wall_direction(wall, theta);
    (tangent, tangent.perp())
}

pub fn config_bounds(energy: f64, theta: WedgeAngle) -> Result<ConfigBounds, GeometryError> {
    if !(energy > 0.0) {
        return Err(GeometryError::NonPositiveEnergy(energy));
    }
    Ok(ConfigBounds {
        x_tilde_max: energy / theta.cos(),
        y_tilde_max: energy / theta.sin(),
    })
}
