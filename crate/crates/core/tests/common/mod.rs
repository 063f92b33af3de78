#![allow(dead_code)]

use rand::Rng;
use wedge_core::frames::{wedge_to_cartesian, WedgeCoords};
use wedge_core::{CartesianState, WedgeAngle};

/// A random launch strictly inside the wedge whose energy is split with at
/// least 10% on each wall-aligned bouncer.
pub fn random_launch<R: Rng>(rng: &mut R) -> (WedgeAngle, CartesianState) {
    loop {
        let theta = WedgeAngle::new(rng.gen_range(0.15..1.42)).unwrap();
        let wc = WedgeCoords {
            x_tilde: rng.gen_range(0.1..2.0),
            y_tilde: rng.gen_range(0.1..2.0),
            u_tilde: rng.gen_range(-1.5..1.5),
            w_tilde: rng.gen_range(-1.5..1.5),
        };
        let hx = 0.5 * wc.u_tilde * wc.u_tilde + wc.x_tilde * theta.cos();
        let hy = 0.5 * wc.w_tilde * wc.w_tilde + wc.y_tilde * theta.sin();
        if hx < 0.1 * (hx + hy) || hy < 0.1 * (hx + hy) {
            continue;
        }
        let (q, p) = wedge_to_cartesian(&wc, theta);
        return (theta, CartesianState::from_vectors(q, p, 0.0));
    }
}
