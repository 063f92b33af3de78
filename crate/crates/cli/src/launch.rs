//! Turning command-line launch descriptions into initial states.

use wedge_core::dynamics::{arclength_for_energy, hamiltonian, launch_from_wall};
use wedge_core::frames::{rotating_to_cartesian, RotatingFrameMomentum};
use wedge_core::geometry::wall_point;
use wedge_core::{CartesianState, Wall, WedgeAngle};

use crate::error::CliError;

/// Relative tolerance for an `--energy` that must agree with a Cartesian launch.
pub const ENERGY_MATCH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Launch {
    /// Position `(x, y)` and momentum `(u, w)`.
    Cartesian { x: f64, y: f64, u: f64, w: f64 },
    /// Arclength `s` on `wall`. `(ū, w̄)` are along the wall away from the
    /// vertex and along the inward normal, unless `phi` is set, in which case
    /// they are components in the rotating frame at angle `phi`.
    Wall { wall: Wall, s: f64, u_bar: f64, w_bar: f64, phi: Option<f64> },
}

/// Raw launch options as they arrive from the command line.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LaunchOptions {
    pub wall: Option<Wall>,
    pub s: Option<f64>,
    pub u_bar: Option<f64>,
    pub w_bar: Option<f64>,
    pub phi_deg: Option<f64>,
    pub x: Option<f64>,
    pub y: Option<f64>,
    pub u: Option<f64>,
    pub w: Option<f64>,
    pub energy: Option<f64>,
}

pub fn parse_wall(s: &str) -> Result<Wall, String> {
    match s {
        "A" | "a" => Ok(Wall::A),
        "B" | "b" => Ok(Wall::B),
        other => Err(format!("unknown wall '{other}', expected A or B")),
    }
}

fn finite(name: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::invalid(format!("--{name} must be finite, got {v}")))
    }
}

impl LaunchOptions {
    fn any_cartesian(&self) -> bool {
        self.x.is_some() || self.y.is_some() || self.u.is_some() || self.w.is_some()
    }

    fn any_wall(&self) -> bool {
        self.wall.is_some() || self.s.is_some() || self.u_bar.is_some() || self.w_bar.is_some() || self.phi_deg.is_some()
    }

    /// Builds the initial state. Wall launches default to wall A with
    /// `ū = 0`, `w̄ = 1` and `s = 1`; `--energy` replaces `s` by the
    /// arclength that gives that energy.
    pub fn resolve(&self, theta: WedgeAngle) -> Result<CartesianState, CliError> {
        if let Some(e) = self.energy {
            if !(finite("energy", e)? > 0.0) {
                return Err(CliError::invalid(format!("--energy must be positive, got {e}")));
            }
        }
        let launch = self.launch(theta)?;
        let state = launch.state(theta)?;
        if let (Launch::Cartesian { .. }, Some(e)) = (launch, self.energy) {
            let h = hamiltonian(&state);
            if (h - e).abs() > ENERGY_MATCH_TOL * e {
                return Err(CliError::invalid(format!(
                    "--energy {e} disagrees with the Cartesian launch energy {h}"
                )));
            }
        }
        Ok(state)
    }

    fn launch(&self, theta: WedgeAngle) -> Result<Launch, CliError> {
        if self.any_cartesian() {
            if self.any_wall() {
                return Err(CliError::invalid("give either --x/--y/--u/--w or a wall launch, not both"));
            }
            let need = |name: &str, v: Option<f64>| {
                v.ok_or_else(|| CliError::invalid(format!("Cartesian launch is missing --{name}")))
                    .and_then(|v| finite(name, v))
            };
            return Ok(Launch::Cartesian {
                x: need("x", self.x)?,
                y: need("y", self.y)?,
                u: need("u", self.u)?,
                w: need("w", self.w)?,
            });
        }
        let wall = self.wall.unwrap_or(Wall::A);
        let u_bar = finite("u-bar", self.u_bar.unwrap_or(0.0))?;
        let w_bar = finite("w-bar", self.w_bar.unwrap_or(1.0))?;
        let phi = self.phi_deg.map(|d| finite("phi-deg", d).map(f64::to_radians)).transpose()?;
        let s = match (self.s, self.energy) {
            (Some(_), Some(_)) => return Err(CliError::invalid("--s and --energy both fix the launch height; give one")),
            (Some(s), None) => finite("s", s)?,
            (None, Some(e)) => arclength_for_energy(wall, u_bar, w_bar, e, theta).map_err(CliError::invalid)?,
            (None, None) => 1.0,
        };
        Ok(Launch::Wall { wall, s, u_bar, w_bar, phi })
    }
}

impl Launch {
    pub fn state(&self, theta: WedgeAngle) -> Result<CartesianState, CliError> {
        match *self {
            Launch::Cartesian { x, y, u, w } => Ok(CartesianState::new(x, y, u, w)),
            Launch::Wall { wall, s, u_bar, w_bar, phi: None } => {
                launch_from_wall(wall, s, u_bar, w_bar, theta).map_err(CliError::invalid)
            }
            Launch::Wall { wall, s, u_bar, w_bar, phi: Some(phi) } => {
                let q = wall_point(wall, s, theta).map_err(CliError::invalid)?;
                let p = rotating_to_cartesian(&RotatingFrameMomentum { u_bar, w_bar, phi });
                Ok(CartesianState::from_vectors(q, p, 0.0))
            }
        }
    }
}
