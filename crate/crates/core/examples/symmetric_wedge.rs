//! The period-two orbit of the symmetric (45°) wedge, and what happens to it
//! when the launch momentum is tilted slightly.

use wedge_core::dynamics::{launch_from_wall, simulate};
use wedge_core::orbits::{classify_orbit, DEFAULT_TOL};
use wedge_core::{Wall, WedgeAngle};

fn main() {
    let theta = WedgeAngle::from_degrees(45.0).unwrap();
    let exact = simulate(launch_from_wall(Wall::A, 2.0f64.sqrt(), 0.0, 2.0f64.sqrt(), theta).unwrap(), theta, 6).unwrap();
    for ev in &exact.events {
        println!("{} at t = {:.6}: ({:+.6}, {:+.6})", ev.wall, ev.t, ev.post.x, ev.post.y);
    }
    println!("{:?}", classify_orbit(&exact, DEFAULT_TOL).unwrap());

    // The smallest tilt drifts too slowly to leave the recurrence tolerance
    // within this horizon.
    for tilt in [1e-6, 1e-3, 0.1] {
        let launch = launch_from_wall(Wall::A, 2.0f64.sqrt(), tilt, 2.0f64.sqrt(), theta).unwrap();
        let traj = simulate(launch, theta, 2000).unwrap();
        println!("u_bar = {tilt:e}: {:?}", classify_orbit(&traj, DEFAULT_TOL).unwrap());
    }
}
