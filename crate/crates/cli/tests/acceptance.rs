//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wedge_cli::plot::{render_plot, PlotData};
use wedge_core::dynamics::{
    decoupled_simulate, free_flight, hamiltonian, launch_from_wall, simulate, wedge_hamiltonians,
};
use wedge_core::frames::{wedge_to_cartesian, WedgeCoords};
use wedge_core::geometry::config_bounds;
use wedge_core::maps::{apply_map, fixed_point, map_word, MapId, MapState};
use wedge_core::orbits::{
    build_periodic_orbit, build_periodic_orbit_periods, classify_orbit, closure_error, coverage_fraction,
    critical_angle, periodic_initial_condition, sensitivity_probe, sweep_periodic_points, OrbitClass, OrbitSpec,
};
use wedge_core::{CartesianState, Trajectory, Wall, WedgeAngle};

type Check = Result<String, String>;

const RUNS: usize = 100;
const LONG_RUN: usize = 10_000;

fn euclid(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        euclid(b, a % b)
    }
}

fn coprime_pairs(max: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for p in 1..=max {
        for q in 1..=max {
            if euclid(p, q) == 1 {
                out.push((p, q));
            }
        }
    }
    out
}

/// Random interior launch; each wall-aligned energy carries at least 10%.
fn random_launch(rng: &mut ChaCha8Rng) -> (WedgeAngle, CartesianState) {
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
        if hx >= 0.1 * (hx + hy) && hy >= 0.1 * (hx + hy) {
            let (q, p) = wedge_to_cartesian(&wc, theta);
            return (theta, CartesianState::from_vectors(q, p, 0.0));
        }
    }
}

fn long_runs() -> Result<(Vec<Trajectory>, Duration), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let start = Instant::now();
    let mut runs = Vec::with_capacity(RUNS);
    for i in 0..RUNS {
        let (theta, launch) = random_launch(&mut rng);
        let traj = simulate(launch, theta, LONG_RUN).map_err(|e| format!("run {i}: {e}"))?;
        if let Some(t) = traj.termination {
            return Err(format!("run {i} stopped early: {t}"));
        }
        runs.push(traj);
    }
    Ok((runs, start.elapsed()))
}

fn closure() -> Check {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let pairs = coprime_pairs(8);
    for &(p, q) in &pairs {
        let traj = build_periodic_orbit(&OrbitSpec::new(p, q, 1.0).map_err(|e| e.to_string())?)
            .map_err(|e| format!("({p},{q}): {e}"))?;
        if traj.events.len() != (p + q) as usize {
            return Err(format!("({p},{q}): {} collisions", traj.events.len()));
        }
        if traj.hits_on(Wall::A) != p as usize || traj.hits_on(Wall::B) != q as usize {
            return Err(format!("({p},{q}): hits A={} B={}", traj.hits_on(Wall::A), traj.hits_on(Wall::B)));
        }
        let err = closure_error(&traj).unwrap();
        if !(err <= 1e-8) {
            return Err(format!("({p},{q}): closure error {err:e}"));
        }
        worst = worst.max(err);
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(2) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("{} orbits, worst closure {worst:.2e}, {elapsed:.2?}", pairs.len()))
}

fn closed_orbit_plots(dir: &Path) -> Check {
    let periods = 3;
    for (p, q) in [(1, 2), (1, 3), (3, 1), (2, 3), (2, 5)] {
        let spec = OrbitSpec::new(p, q, 1.0).unwrap();
        let traj = build_periodic_orbit_periods(&spec, periods).map_err(|e| format!("({p},{q}): {e}"))?;
        let one = build_periodic_orbit(&spec).unwrap();
        let err = closure_error(&one).unwrap();
        if !(err <= 1e-8) {
            return Err(format!("({p},{q}): closure error {err:e}"));
        }
        let path = dir.join(format!("orbit_{p}_{q}.svg"));
        render_plot(PlotData::Trajectory(&traj), &path).map_err(|e| e.to_string())?;
        let svg = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
        let arcs = svg.matches(r#"<polyline class="arc""#).count();
        if arcs != periods * (p + q) as usize {
            return Err(format!("({p},{q}): {arcs} arcs over {periods} periods"));
        }
    }
    Ok("5 closed orbits, arcs = p+q per period".into())
}

fn energy(runs: &[Trajectory], elapsed: Duration) -> Check {
    let mut worst = 0.0f64;
    for traj in runs {
        for ev in &traj.events {
            for s in [&ev.pre, &ev.post] {
                worst = worst.max((hamiltonian(s) - traj.energy).abs() / traj.energy);
            }
        }
    }
    if elapsed >= Duration::from_secs(30) {
        return Err(format!("took {elapsed:?}"));
    }
    if worst <= 1e-9 {
        Ok(format!("max relative drift {worst:.2e}, {elapsed:.2?}"))
    } else {
        Err(format!("max relative drift {worst:e}"))
    }
}

fn integrability(runs: &[Trajectory]) -> Check {
    let (mut wx, mut wy) = (0.0f64, 0.0f64);
    for traj in runs {
        let h0 = traj.wedge_integrals;
        for ev in &traj.events {
            for s in [&ev.pre, &ev.post] {
                let h = wedge_hamiltonians(s, traj.theta);
                wx = wx.max((h.x - h0.x).abs() / h0.x);
                wy = wy.max((h.y - h0.y).abs() / h0.y);
            }
        }
    }
    if wx <= 1e-9 && wy <= 1e-9 {
        Ok(format!("max relative drift x {wx:.2e}, y {wy:.2e}"))
    } else {
        Err(format!("max relative drift x {wx:e}, y {wy:e}"))
    }
}

fn oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0dac1e);
    let mut worst = 0.0f64;
    for i in 0..RUNS {
        let (theta, launch) = random_launch(&mut rng);
        let a = simulate(launch, theta, 200).map_err(|e| e.to_string())?;
        let b = decoupled_simulate(launch, theta, 200).map_err(|e| e.to_string())?;
        if a.events.len() != 200 || b.events.len() != 200 {
            return Err(format!("run {i}: {} vs {} events", a.events.len(), b.events.len()));
        }
        for (k, (x, y)) in a.events.iter().zip(&b.events).enumerate() {
            if x.wall != y.wall {
                return Err(format!("run {i} event {k}: wall {} vs {}", x.wall, y.wall));
            }
            let gap = [
                x.t - y.t,
                x.post.x - y.post.x,
                x.post.y - y.post.y,
                x.post.u - y.post.u,
                x.post.w - y.post.w,
            ]
            .iter()
            .fold(0.0f64, |m, d| m.max(d.abs()));
            worst = worst.max(gap);
        }
    }
    if worst <= 1e-9 {
        Ok(format!("worst event gap {worst:.2e}"))
    } else {
        Err(format!("worst event gap {worst:e}"))
    }
}

fn map_equivalence(runs: &[Trajectory]) -> Check {
    let (mut worst, mut one_step, mut against_oracle) = (0.0f64, 0.0f64, 0.0f64);
    let mut failing_runs = 0;
    let mut first_failure: Option<(usize, usize)> = None;
    for (i, traj) in runs.iter().enumerate() {
        let word = map_word(&traj.events);
        let oracle = decoupled_simulate(traj.initial, traj.theta, traj.events.len()).map_err(|e| e.to_string())?;
        let observed: Vec<MapState> = traj.events.iter().map(|e| MapState::from_event(e, traj.energy)).collect();
        let mut state = observed[0];
        let mut from_oracle = MapState::from_event(&oracle.events[0], traj.energy);
        let mut run_failed = false;
        for (k, &id) in word.iter().enumerate() {
            state = apply_map(id, state, traj.theta).map_err(|e| format!("run {i} step {k}: {e}"))?;
            from_oracle = apply_map(id, from_oracle, traj.theta).map_err(|e| e.to_string())?;
            let d = state.distance(&observed[k + 1]);
            worst = worst.max(d);
            if !(d <= 1e-9) && !run_failed {
                run_failed = true;
                failing_runs += 1;
                if first_failure.is_none_or(|(_, step)| k < step) {
                    first_failure = Some((i, k));
                }
            }
            let single = apply_map(id, observed[k], traj.theta).map_err(|e| e.to_string())?;
            one_step = one_step.max(single.distance(&observed[k + 1]));
            against_oracle = against_oracle.max(from_oracle.distance(&MapState::from_event(&oracle.events[k + 1], traj.energy)));
        }
    }
    let detail = format!(
        "worst iterated gap {worst:.2e}; single-step gap {one_step:.2e}; maps iterated against the closed-form oracle {against_oracle:.2e}"
    );
    match first_failure {
        None => Ok(detail),
        Some((run, step)) => Err(format!(
            "{failing_runs}/{} runs exceed 1e-9 (earliest: run {run} at step {step}); {detail}",
            runs.len()
        )),
    }
}

fn bounds(runs: &[Trajectory]) -> Check {
    let mut samples = 0usize;
    for (i, traj) in runs.iter().enumerate() {
        let b = config_bounds(traj.energy, traj.theta).map_err(|e| e.to_string())?;
        for (start, dt) in traj.flights() {
            for k in 0..=8 {
                let wc = free_flight(&start, dt * k as f64 / 8.0).wedge_coords(traj.theta);
                samples += 1;
                if wc.x_tilde < 0.0 - 1e-9
                    || wc.y_tilde < 0.0 - 1e-9
                    || wc.x_tilde > b.x_tilde_max + 1e-9
                    || wc.y_tilde > b.y_tilde_max + 1e-9
                {
                    return Err(format!("run {i}: point ({}, {}) outside box", wc.x_tilde, wc.y_tilde));
                }
            }
        }
    }
    Ok(format!("{samples} sampled points inside the box"))
}

fn density() -> Check {
    let theta = WedgeAngle::from_degrees(60.0).unwrap();
    let launch = launch_from_wall(Wall::A, 1.0, 0.0, 1.0, theta).unwrap();
    let long = simulate(launch, theta, LONG_RUN).map_err(|e| e.to_string())?;
    let class = classify_orbit(&long, 1e-8).map_err(|e| e.to_string())?;
    if class != OrbitClass::Dense {
        return Err(format!("classified as {class:?}"));
    }
    let c50 = coverage_fraction(&simulate(launch, theta, 50).unwrap(), 64, 64).map_err(|e| e.to_string())?;
    let c5000 = coverage_fraction(&simulate(launch, theta, 5000).unwrap(), 64, 64).map_err(|e| e.to_string())?;
    if c5000 > c50 {
        Ok(format!("Dense; coverage {c50:.3} -> {c5000:.3}"))
    } else {
        Err(format!("coverage {c50} -> {c5000}"))
    }
}

fn sensitivity() -> Check {
    for (p, q) in [(1, 2), (2, 3), (1, 1)] {
        let spec = OrbitSpec::new(p, q, 1.0).unwrap();
        let exact = sensitivity_probe(&spec, 0.0).map_err(|e| e.to_string())?;
        if !exact.is_periodic() {
            return Err(format!("({p},{q}) eps=0 gave {exact:?}"));
        }
        let nudged = sensitivity_probe(&spec, 1e-3).map_err(|e| e.to_string())?;
        if nudged != OrbitClass::Dense {
            return Err(format!("({p},{q}) eps=1e-3 gave {nudged:?}"));
        }
    }
    Ok("periodic at eps=0, dense at eps=1e-3".into())
}

fn fixed_points() -> Check {
    let close = |a: &MapState, u: f64, w: f64| (a.u_bar - u).abs() <= 1e-12 && (a.w_bar - w).abs() <= 1e-12;
    for energy in [0.5, 1.0, 2.0] {
        let quarter = WedgeAngle::new(std::f64::consts::FRAC_PI_4).unwrap();
        for id in [MapId::FB, MapId::GB] {
            let fp = fixed_point(id, energy, quarter).map_err(|e| e.to_string())?;
            if !close(&fp, 0.0, energy.sqrt()) {
                return Err(format!("{id} at 45 deg, E={energy}: ({}, {})", fp.u_bar, fp.w_bar));
            }
        }
    }
    for (p, q) in coprime_pairs(8) {
        let spec = OrbitSpec::new(p, q, 1.0).unwrap();
        let theta = critical_angle(&spec);
        let star = periodic_initial_condition(&spec);
        for id in [MapId::FB, MapId::GB] {
            let fp = fixed_point(id, 1.0, theta).map_err(|e| e.to_string())?;
            if !close(&fp, star.u_bar, star.w_bar) {
                return Err(format!("{id} at ({p},{q}): ({}, {})", fp.u_bar, fp.w_bar));
            }
        }
    }
    Ok("45 deg and all coprime p,q <= 8 within 1e-12".into())
}

fn sweep_symmetry() -> Check {
    let points = sweep_periodic_points(25, 25, 1.0);
    let expected = coprime_pairs(25).len();
    if points.len() != expected {
        return Err(format!("{} points, expected {expected}", points.len()));
    }
    let mut worst = 0.0f64;
    for a in &points {
        let b = points
            .iter()
            .find(|b| b.p == a.q && b.q == a.p)
            .ok_or_else(|| format!("({},{}) has no mirror", a.p, a.q))?;
        worst = worst
            .max((b.theta - (std::f64::consts::FRAC_PI_2 - a.theta)).abs())
            .max((b.u_bar + a.u_bar).abs());
    }
    if worst <= 1e-13 {
        Ok(format!("{expected} points, worst asymmetry {worst:.2e}"))
    } else {
        Err(format!("worst asymmetry {worst:e}"))
    }
}

fn determinism(dir: &Path) -> Check {
    let bin = env!("CARGO_BIN_EXE_wedge");
    let commands: [&[&str]; 9] = [
        &["simulate", "--theta-deg", "60", "--wall", "A", "--s", "1", "--u-bar", "0", "--w-bar", "1", "--n", "50", "--out", "{}.csv"],
        &["simulate", "--theta-deg", "50", "--wall", "B", "--s", "0.8", "--u-bar", "-0.2", "--w-bar", "1.1", "--n", "500", "--out", "{}.json"],
        &["simulate", "--theta-deg", "60", "--n", "200", "--out", "{}.svg"],
        &["periodic", "--p", "1", "--q", "2", "--energy", "1", "--periods", "10", "--out", "{}.svg"],
        &["periodic", "--p", "2", "--q", "5", "--energy", "1", "--periods", "4", "--out", "{}.csv"],
        &["sweep", "--max", "25", "--energy", "1", "--out", "{}.csv"],
        &["sweep", "--max", "25", "--energy", "1", "--half", "--out", "{}.svg"],
        &["classify", "--theta-deg", "60", "--wall", "A", "--s", "1", "--u-bar", "0", "--w-bar", "1", "--n", "10000", "--tol", "1e-8"],
        &["fixed-points", "--theta-deg", "30", "--energy", "1"],
    ];
    for (i, args) in commands.iter().enumerate() {
        let mut outputs = Vec::new();
        for run in 0..2 {
            let target = dir.join(format!("det_{i}_{run}"));
            let args: Vec<String> = args
                .iter()
                .map(|a| a.replace("{}", target.to_str().unwrap()))
                .collect();
            let out = Command::new(bin).args(&args).output().map_err(|e| e.to_string())?;
            if !out.status.success() {
                return Err(format!("{args:?} exited with {}", out.status));
            }
            let file = args.iter().position(|a| a == "--out").map(|k| &args[k + 1]);
            let bytes = match file {
                Some(path) => std::fs::read(path).map_err(|e| e.to_string())?,
                None => out.stdout,
            };
            outputs.push(bytes);
        }
        if outputs[0] != outputs[1] || outputs[0].is_empty() {
            return Err(format!("command {} output differs between runs", commands[i][0]));
        }
    }
    Ok(format!("{} commands byte-identical across runs", commands.len()))
}

fn main() -> ExitCode {
    let dir = tempfile::tempdir().expect("temporary directory");
    let long = long_runs();
    let with_runs = |f: &dyn Fn(&[Trajectory]) -> Check| match &long {
        Ok((runs, _)) => f(runs),
        Err(e) => Err(e.clone()),
    };

    let results: Vec<(&str, Check)> = vec![
        ("periodic-orbit closure", closure()),
        ("closed orbits and SVG arc counts", closed_orbit_plots(dir.path())),
        ("energy conservation", with_runs(&|r| energy(r, long.as_ref().unwrap().1))),
        ("integrability", with_runs(&integrability)),
        ("oracle equivalence", oracle()),
        ("map equivalence", with_runs(&map_equivalence)),
        ("bounds", with_runs(&bounds)),
        ("density behaviour", density()),
        ("sensitivity", sensitivity()),
        ("fixed-point identities", fixed_points()),
        ("sweep symmetry", sweep_symmetry()),
        ("determinism", determinism(dir.path())),
    ];

    let mut failed = 0;
    for (i, (name, result)) in results.iter().enumerate() {
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
