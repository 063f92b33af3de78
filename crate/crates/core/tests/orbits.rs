use std::f64::consts::FRAC_PI_4;

use num_integer::Integer;
use wedge_core::dynamics::{decoupled_simulate, launch_from_wall, simulate};
use wedge_core::maps::{fixed_point, iterate_maps, map_word, MapId, MapState};
use wedge_core::orbits::{
    bounce_times, build_periodic_orbit, build_periodic_orbit_periods, classify_orbit, closure_error,
    coverage_fraction, critical_angle, period_ratio, periodic_initial_condition,
    sensitivity_probe, sweep_half, sweep_periodic_points, OrbitClass, OrbitSpec, DEFAULT_TOL,
};
use wedge_core::{Wall, WedgeAngle};

fn coprime_pairs(max: u32) -> impl Iterator<Item = (u32, u32)> {
    (1..=max).flat_map(move |p| (1..=max).map(move |q| (p, q))).filter(|&(p, q)| p.gcd(&q) == 1)
}

fn sixty_degree_launch() -> (WedgeAngle, wedge_core::CartesianState) {
    let theta = WedgeAngle::from_degrees(60.0).unwrap();
    (theta, launch_from_wall(Wall::A, 1.0, 0.0, 1.0, theta).unwrap())
}

#[test]
fn periodic_orbits_close_with_expected_hit_counts() {
    for (p, q) in coprime_pairs(8) {
        let spec = OrbitSpec::new(p, q, 1.0).unwrap();
        let traj = build_periodic_orbit(&spec).unwrap();
        assert_eq!(traj.events.len(), (p + q) as usize);
        assert_eq!(traj.hits_on(Wall::A), p as usize, "({p},{q})");
        assert_eq!(traj.hits_on(Wall::B), q as usize, "({p},{q})");
        let err = closure_error(&traj).unwrap();
        assert!(err <= 1e-8, "({p},{q}) closure {err:e}");
    }
}

#[test]
fn periodic_orbits_stay_closed_over_many_periods() {
    for (p, q) in [(1, 2), (2, 5), (7, 3)] {
        let spec = OrbitSpec::new(p, q, 2.5).unwrap();
        let traj = build_periodic_orbit_periods(&spec, 20).unwrap();
        let class = classify_orbit(&traj, DEFAULT_TOL).unwrap();
        assert_eq!(class, OrbitClass::Periodic { period: (p + q) as usize, hits_a: p as usize, hits_b: q as usize });
    }
}

#[test]
fn ratio_law_holds_to_rounding() {
    for (p, q) in coprime_pairs(8) {
        let spec = OrbitSpec::new(p, q, 1.0).unwrap();
        let r = p as f64 / q as f64;
        let rel = (period_ratio(critical_angle(&spec)) - r).abs() / r;
        assert!(rel <= 1e-15, "({p},{q}) {rel:e}");
    }
}

#[test]
fn fixed_points_coincide_with_periodic_condition() {
    for (p, q) in coprime_pairs(8) {
        for energy in [0.5, 1.0, 3.0] {
            let spec = OrbitSpec::new(p, q, energy).unwrap();
            let theta = critical_angle(&spec);
            let star = periodic_initial_condition(&spec);
            let fb = fixed_point(MapId::FB, energy, theta).unwrap();
            let gb = fixed_point(MapId::GB, energy, theta).unwrap();
            for fp in [fb, gb] {
                assert!((fp.u_bar - star.u_bar).abs() <= 1e-12);
                assert!((fp.w_bar - star.w_bar).abs() <= 1e-12);
            }
        }
    }
    let theta = WedgeAngle::new(FRAC_PI_4).unwrap();
    for id in [MapId::FB, MapId::GB] {
        let fp = fixed_point(id, 4.0, theta).unwrap();
        assert!(fp.u_bar.abs() <= 1e-12 && (fp.w_bar - 2.0).abs() <= 1e-12);
    }
}

#[test]
fn collision_maps_close_the_periodic_word() {
    for (p, q) in coprime_pairs(6) {
        let spec = OrbitSpec::new(p, q, 1.0).unwrap();
        let theta = critical_angle(&spec);
        let traj = build_periodic_orbit(&spec).unwrap();
        let word = map_word(&traj.events);
        let start = MapState::from_event(traj.events.last().unwrap(), 1.0);
        let images = iterate_maps(start, &word, theta).unwrap();
        let star = periodic_initial_condition(&spec);
        assert!(images.last().unwrap().distance(&star) <= 1e-9, "({p},{q})");
    }
}

#[test]
fn sweep_is_symmetric_under_swap() {
    let points = sweep_periodic_points(25, 25, 1.0);
    assert_eq!(points.len(), coprime_pairs(25).count());
    for a in &points {
        let b = points.iter().find(|b| b.p == a.q && b.q == a.p).unwrap();
        assert!((b.theta - (std::f64::consts::FRAC_PI_2 - a.theta)).abs() <= 1e-13);
        assert!((b.u_bar + a.u_bar).abs() <= 1e-13);
    }
    assert!(points.windows(2).all(|w| w[0].theta <= w[1].theta));
}

#[test]
fn sign_law_links_order_angle_and_momentum() {
    for pt in sweep_periodic_points(12, 12, 1.0) {
        match pt.p.cmp(&pt.q) {
            std::cmp::Ordering::Less => assert!(pt.theta < FRAC_PI_4 && pt.u_bar > 0.0),
            std::cmp::Ordering::Greater => assert!(pt.theta > FRAC_PI_4 && pt.u_bar < 0.0),
            std::cmp::Ordering::Equal => assert!(pt.u_bar == 0.0),
        }
    }
    let half = sweep_half(25, 1.0);
    assert!(half.iter().all(|pt| pt.theta <= FRAC_PI_4 + 1e-15));
}

#[test]
fn sixty_degree_launch_is_dense() {
    let (theta, launch) = sixty_degree_launch();
    let traj = simulate(launch, theta, 10_000).unwrap();
    assert_eq!(classify_orbit(&traj, DEFAULT_TOL).unwrap(), OrbitClass::Dense);
}

#[test]
fn coverage_grows_for_dense_but_not_for_periodic() {
    let (theta, launch) = sixty_degree_launch();
    let short = coverage_fraction(&simulate(launch, theta, 50).unwrap(), 64, 64).unwrap();
    let long = coverage_fraction(&simulate(launch, theta, 5000).unwrap(), 64, 64).unwrap();
    assert!(long > short, "{short} vs {long}");

    let spec = OrbitSpec::new(1, 1, 1.0).unwrap();
    let c10 = coverage_fraction(&build_periodic_orbit_periods(&spec, 5).unwrap(), 64, 64).unwrap();
    let c100 = coverage_fraction(&build_periodic_orbit_periods(&spec, 50).unwrap(), 64, 64).unwrap();
    assert_eq!(c10, c100);

    let one = coverage_fraction(&simulate(launch, theta, 3).unwrap(), 1, 1).unwrap();
    assert_eq!(one, 1.0);
}

#[test]
fn perturbed_periodic_launch_loses_periodicity() {
    for (p, q) in [(1, 2), (2, 3), (1, 1)] {
        let spec = OrbitSpec::new(p, q, 1.0).unwrap();
        assert!(sensitivity_probe(&spec, 0.0).unwrap().is_periodic(), "({p},{q}) eps 0");
        assert_eq!(sensitivity_probe(&spec, 1e-3).unwrap(), OrbitClass::Dense, "({p},{q}) eps 1e-3");
    }
}

#[test]
fn bounce_schedule_matches_decoupled_hit_spacing() {
    let theta = WedgeAngle::new(0.6).unwrap();
    let launch = launch_from_wall(Wall::A, 0.8, 0.3, 1.1, theta).unwrap();
    let traj = decoupled_simulate(launch, theta, 60).unwrap();
    let h = traj.wedge_integrals;
    let sched = bounce_times((2.0 * h.x).sqrt(), (2.0 * h.y).sqrt(), theta, 40).unwrap();
    // Returns of x̃ to zero are wall-B hits, returns of ỹ are wall-A hits.
    for (wall, expected) in [(Wall::B, &sched.a), (Wall::A, &sched.b)] {
        let times: Vec<f64> = traj.events.iter().filter(|e| e.wall == wall).map(|e| e.t).collect();
        assert!(times.len() > 2);
        for (j, t) in times.iter().enumerate().skip(1) {
            assert!((t - times[0] - expected[j - 1]).abs() <= 1e-9, "{wall} hit {j}");
        }
    }
}

#[test]
fn bounce_schedules_first_coincide_at_lcm() {
    for (p, q) in coprime_pairs(6) {
        let theta = critical_angle(&OrbitSpec::new(p, q, 1.0).unwrap());
        let sched = bounce_times(1.0, 1.0, theta, 12).unwrap();
        let first = sched
            .a
            .iter()
            .enumerate()
            .find_map(|(j, ta)| sched.b.iter().position(|tb| (ta - tb).abs() <= 1e-9 * ta).map(|k| (j + 1, k + 1)))
            .unwrap();
        assert_eq!(first, (q as usize, p as usize), "({p},{q})");
    }
}
