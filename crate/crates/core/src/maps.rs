//! Collision maps between successive wall contacts, in rotating-frame
//! momenta `(ū, w̄)`: `ū` along the wall, `w̄` the outgoing normal momentum
//! (always `≥ 0`, pointing into the region).
//!
//! | map | from → to | native orientation of `ū` |
//! |-----|-----------|---------------------------|
//! | F_A | A → A     | away from the vertex      |
//! | G_A | B → B     | toward the vertex         |
//! | F_B | A → B     | away from the vertex      |
//! | G_B | B → A     | toward the vertex         |
//!
//! The closed forms for the G maps hold with the tangent pointing toward the
//! vertex, the F maps with it pointing away. [`MapState`] therefore carries
//! its [`Orientation`]; [`apply_map`] converts its input to the map's
//! native orientation and returns the result in that orientation. The
//! simulator reports states pointing away from the vertex.

use std::fmt;

use crate::dynamics::CollisionEvent;
use crate::frames::RotatingFrameMomentum;
use crate::geometry::{Wall, WedgeAngle};

/// Slack on `2E − w̄²` before it counts as an energy violation.
pub const RADICAND_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MapId {
    FA,
    GA,
    FB,
    GB,
}

impl MapId {
    pub const ALL: [MapId; 4] = [MapId::FA, MapId::GA, MapId::FB, MapId::GB];

    pub fn domain(self) -> Wall {
        match self {
            MapId::FA | MapId::FB => Wall::A,
            MapId::GA | MapId::GB => Wall::B,
        }
    }

    pub fn codomain(self) -> Wall {
        match self {
            MapId::FA | MapId::GB => Wall::A,
            MapId::GA | MapId::FB => Wall::B,
        }
    }

    /// The map taking a contact on `from` to the next contact on `to`.
    pub fn between(from: Wall, to: Wall) -> MapId {
        match (from, to) {
            (Wall::A, Wall::A) => MapId::FA,
            (Wall::B, Wall::B) => MapId::GA,
            (Wall::A, Wall::B) => MapId::FB,
            (Wall::B, Wall::A) => MapId::GB,
        }
    }

    pub fn native_orientation(self) -> Orientation {
        match self {
            MapId::FA | MapId::FB => Orientation::AwayFromVertex,
            MapId::GA | MapId::GB => Orientation::TowardVertex,
        }
    }
}

impl fmt::Display for MapId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MapId::FA => "F_A",
            MapId::GA => "G_A",
            MapId::FB => "F_B",
            MapId::GB => "G_B",
        };
        f.write_str(s)
    }
}

/// Direction along the wall in which `ū` is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    AwayFromVertex,
    TowardVertex,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MapError {
    #[error("invalid map state: {0}")]
    InvalidState(String),
    #[error("w̄² exceeds 2E (2E − w̄² = {radicand:e})")]
    EnergyViolation { radicand: f64 },
    #[error("{0} has no isolated fixed point")]
    NoIsolatedFixedPoint(MapId),
}

/// Post-collision momentum at a wall, with the energy that closes the
/// cross-wall maps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapState {
    pub u_bar: f64,
    pub w_bar: f64,
    pub energy: f64,
    pub orientation: Orientation,
}

impl MapState {
    /// A state with `ū` measured away from the vertex.
    pub fn new(u_bar: f64, w_bar: f64, energy: f64) -> Result<Self, MapError> {
        Self::with_orientation(u_bar, w_bar, energy, Orientation::AwayFromVertex)
    }

    pub fn with_orientation(
        u_bar: f64,
        w_bar: f64,
        energy: f64,
        orientation: Orientation,
    ) -> Result<Self, MapError> {
        let s = Self { u_bar, w_bar, energy, orientation };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<(), MapError> {
        if !(self.u_bar.is_finite() && self.w_bar.is_finite() && self.energy.is_finite()) {
            return Err(MapError::InvalidState("non-finite component".into()));
        }
        if !(self.energy > 0.0) {
            return Err(MapError::InvalidState(format!("energy {} is not positive", self.energy)));
        }
        if self.w_bar < 0.0 {
            return Err(MapError::InvalidState(format!("w̄ = {} is negative", self.w_bar)));
        }
        let radicand = 2.0 * self.energy - self.w_bar * self.w_bar;
        if radicand < -radicand_tol(self.energy) {
            return Err(MapError::EnergyViolation { radicand });
        }
        Ok(())
    }

    /// The same physical state with `ū` measured the other way if needed.
    pub fn oriented(self, orientation: Orientation) -> Self {
        if orientation == self.orientation {
            self
        } else {
            Self { u_bar: -self.u_bar, orientation, ..self }
        }
    }

    /// Converts a rotating-frame momentum taken at `frame_angle(wall, θ)`.
    ///
    /// That frame's `ē_φ` points out of the region on wall B, so the
    /// outgoing normal momentum there is `−w̄`.
    pub fn from_rotating(rfm: &RotatingFrameMomentum, wall: Wall, energy: f64) -> Self {
        let w_bar = match wall {
            Wall::A => rfm.w_bar,
            Wall::B => -rfm.w_bar,
        };
        Self {
            u_bar: rfm.u_bar,
            w_bar,
            energy,
            orientation: Orientation::AwayFromVertex,
        }
    }

    pub fn from_event(event: &CollisionEvent, energy: f64) -> Self {
        Self::from_rotating(&event.rotating_post, event.wall, energy)
    }

    /// Largest component difference after aligning orientations.
    pub fn distance(&self, other: &MapState) -> f64 {
        let o = other.oriented(self.orientation);
        (self.u_bar - o.u_bar).abs().max((self.w_bar - o.w_bar).abs())
    }
}

fn radicand_tol(energy: f64) -> f64 {
    RADICAND_TOL * (2.0 * energy).max(1.0)
}

/// Outgoing normal momentum at the opposite wall, `+√(2E − w̄²)`.
fn opposite_normal(s: &MapState) -> Result<f64, MapError> {
    let radicand = 2.0 * s.energy - s.w_bar * s.w_bar;
    if radicand < -radicand_tol(s.energy) {
        return Err(MapError::EnergyViolation { radicand });
    }
    Ok(radicand.max(0.0).sqrt())
}

/// Applies one collision map. The result is in the map's native
/// orientation; energy is carried unchanged.
pub fn apply_map(id: MapId, s: MapState, theta: WedgeAngle) -> Result<MapState, MapError> {
    s.validate()?;
    let s = s.oriented(id.native_orientation());
    let (u, w) = (s.u_bar, s.w_bar);
    let (u_next, w_next) = match id {
        MapId::FA => (u - 2.0 * w * theta.cot(), w),
        MapId::GA => (u + 2.0 * w * theta.tan(), w),
        MapId::FB => {
            let w_next = opposite_normal(&s)?;
            (w - (u + w_next) * theta.tan(), w_next)
        }
        MapId::GB => {
            let w_next = opposite_normal(&s)?;
            (-w - (u - w_next) * theta.cot(), w_next)
        }
    };
    Ok(MapState { u_bar: u_next, w_bar: w_next, ..s })
}

/// Applies a sequence of maps, returning every intermediate state.
pub fn iterate_maps(
    start: MapState,
    word: &[MapId],
    theta: WedgeAngle,
) -> Result<Vec<MapState>, MapError> {
    let mut out = Vec::with_capacity(word.len());
    let mut s = start;
    for &id in word {
        s = apply_map(id, s, theta)?;
        out.push(s);
    }
    Ok(out)
}

/// The map sequence realised by consecutive events.
pub fn map_word(events: &[CollisionEvent]) -> Vec<MapId> {
    events.windows(2).map(|w| MapId::between(w[0].wall, w[1].wall)).collect()
}

/// The isolated fixed points of the cross-wall maps:
///
/// * F_B: `ū* = √E (1 − tan θ)/(1 + tan θ)`, away from the vertex;
/// * G_B: `ū* = √E (cot θ − 1)/(cot θ + 1)`, toward the vertex;
///
/// both with `w̄* = √E`. The two values coincide for every θ, but they
/// describe mirror-image states unless θ = π/4, where `ū* = 0`.
/// F_A and G_A only have the sliding family `(c, 0)`.
pub fn fixed_point(id: MapId, energy: f64, theta: WedgeAngle) -> Result<MapState, MapError> {
    let root = energy.sqrt();
    let u_bar = match id {
        MapId::FB => root * (1.0 - theta.tan()) / (1.0 + theta.tan()),
        MapId::GB => root * (theta.cot() - 1.0) / (theta.cot() + 1.0),
        MapId::FA | MapId::GA => return Err(MapError::NoIsolatedFixedPoint(id)),
    };
    MapState::with_orientation(u_bar, root, energy, id.native_orientation())
}

/// Tolerance on `|θ − π/4|` for [`reflection_period1_possible`].
pub const SYMMETRIC_TOL: f64 = 1e-12;

/// Whether a single-bounce-per-wall orbit that reverses both momentum
/// components at each contact exists; only in the symmetric wedge.
pub fn reflection_period1_possible(theta: WedgeAngle) -> bool {
    (theta.radians() - std::f64::consts::FRAC_PI_4).abs() <= SYMMETRIC_TOL
}
