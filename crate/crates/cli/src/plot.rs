//! Self-contained SVG plots: configuration-space trajectories and the
//! `(θ*, ū*)` scatter of periodic launch points.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use wedge_core::dynamics::free_flight;
use wedge_core::geometry::{config_bounds, wall_direction};
use wedge_core::orbits::SweepPoint;
use wedge_core::{Trajectory, Vec2, Wall};

use crate::error::CliError;
use crate::export::write_file;

/// Points per flight polyline.
pub const ARC_SAMPLES: usize = 48;
pub const MARGIN: f64 = 0.05;

pub enum PlotData<'a> {
    Trajectory(&'a Trajectory),
    Sweep(&'a [SweepPoint]),
}

pub fn render_plot(data: PlotData<'_>, path: &Path) -> Result<(), CliError> {
    let svg = match data {
        PlotData::Trajectory(t) => trajectory_svg(t)?,
        PlotData::Sweep(p) => sweep_svg(p)?,
    };
    write_file(path, |w| w.write_all(svg.as_bytes()))
}

fn pt(v: Vec2) -> String {
    // SVG's y axis points down.
    format!("{:.6},{:.6}", v.x, -v.y)
}

/// Plot of every completed flight as one `<polyline class="arc">`, with the
/// walls and the box `0 ≤ x̃ ≤ E/cos θ`, `0 ≤ ỹ ≤ E/sin θ`.
pub fn trajectory_svg(traj: &Trajectory) -> Result<String, CliError> {
    if traj.events.is_empty() {
        return Err(CliError::invalid("nothing to plot: trajectory has no collisions"));
    }
    let theta = traj.theta;
    let bounds = config_bounds(traj.energy, theta).map_err(CliError::invalid)?;
    let a_end = bounds.x_tilde_max * wall_direction(Wall::A, theta);
    let b_end = bounds.y_tilde_max * wall_direction(Wall::B, theta);
    let corners = [Vec2::new(0.0, 0.0), a_end, b_end, a_end + b_end];
    let (mut lo, mut hi) = (corners[0], corners[0]);
    for c in &corners[1..] {
        lo = Vec2::new(lo.x.min(c.x), lo.y.min(c.y));
        hi = Vec2::new(hi.x.max(c.x), hi.y.max(c.y));
    }
    let (w, h) = (hi.x - lo.x, hi.y - lo.y);
    let (mx, my) = (MARGIN * w, MARGIN * h);
    let size = w.max(h);
    let stroke = size / 500.0;
    let font = size / 30.0;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.6} {:.6} {:.6} {:.6}">"#,
        lo.x - mx,
        -(hi.y + my),
        w + 2.0 * mx,
        h + 2.0 * my
    );
    let _ = writeln!(
        s,
        "<title>wedge billiard, theta = {:.4} deg, E = {}, {} collisions</title>",
        theta.degrees(),
        traj.energy,
        traj.events.len()
    );
    let _ = writeln!(
        s,
        r#"<style>.axis{{stroke:#999;stroke-width:{stroke:.6}}} .bounds{{fill:none;stroke:#bbb;stroke-dasharray:{d:.6};stroke-width:{stroke:.6}}} .wall{{stroke:#000;stroke-width:{w2:.6}}} .arc{{fill:none;stroke:#1f5fbf;stroke-width:{stroke:.6}}} text{{font-family:sans-serif;font-size:{font:.6}px}}</style>"#,
        d = 4.0 * stroke,
        w2 = 3.0 * stroke,
    );
    let axis = |s: &mut String, from: Vec2, to: Vec2| {
        let _ = writeln!(
            s,
            r#"<line class="axis" x1="{:.6}" y1="{:.6}" x2="{:.6}" y2="{:.6}"/>"#,
            from.x, -from.y, to.x, -to.y
        );
    };
    axis(&mut s, Vec2::new(lo.x - mx, 0.0), Vec2::new(hi.x + mx, 0.0));
    axis(&mut s, Vec2::new(0.0, lo.y - my), Vec2::new(0.0, hi.y + my));
    let _ = writeln!(s, r#"<text x="{:.6}" y="{:.6}">x</text>"#, hi.x + 0.2 * mx, -0.3 * font);
    let _ = writeln!(s, r#"<text x="{:.6}" y="{:.6}">y</text>"#, 0.3 * font, -(hi.y + 0.2 * my));
    let _ = writeln!(
        s,
        r#"<polygon class="bounds" points="{} {} {} {}"/>"#,
        pt(corners[0]),
        pt(a_end),
        pt(a_end + b_end),
        pt(b_end)
    );
    for (label, end) in [("A", a_end), ("B", b_end)] {
        let _ = writeln!(s, r#"<line class="wall" x1="0" y1="0" x2="{:.6}" y2="{:.6}"/>"#, end.x, -end.y);
        let tag = 0.5 * end + Vec2::new(0.0, -1.5 * font);
        let _ = writeln!(s, r#"<text x="{:.6}" y="{:.6}">{label}</text>"#, tag.x, -tag.y);
    }
    for (start, dt) in traj.flights() {
        let points: Vec<String> = (0..ARC_SAMPLES)
            .map(|k| pt(free_flight(&start, dt * k as f64 / (ARC_SAMPLES - 1) as f64).position()))
            .collect();
        let _ = writeln!(s, r#"<polyline class="arc" points="{}"/>"#, points.join(" "));
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// Scatter of `(θ* in degrees, ū*)`.
pub fn sweep_svg(points: &[SweepPoint]) -> Result<String, CliError> {
    if points.is_empty() {
        return Err(CliError::invalid("nothing to plot: sweep is empty"));
    }
    let (width, height, pad) = (640.0, 480.0, 60.0);
    let u_max = points.iter().map(|p| p.u_bar.abs()).fold(0.0, f64::max).max(1e-12);
    let px = |deg: f64| pad + (width - 2.0 * pad) * deg / 90.0;
    let py = |u: f64| height / 2.0 - (height / 2.0 - pad) * u / u_max;

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width} {height}">"#);
    let _ = writeln!(s, "<title>periodic launch points, {} orbits</title>", points.len());
    s.push_str(
        "<style>.axis{stroke:#000;stroke-width:1} .grid{stroke:#ddd;stroke-width:1} .point{fill:#1f5fbf} text{font-family:sans-serif;font-size:13px}</style>\n",
    );
    for deg in [0.0, 15.0, 30.0, 45.0, 60.0, 75.0, 90.0] {
        let x = px(deg);
        let _ = writeln!(s, r#"<line class="grid" x1="{x:.3}" y1="{pad}" x2="{x:.3}" y2="{:.3}"/>"#, height - pad);
        let _ = writeln!(s, r#"<text x="{:.3}" y="{:.3}">{deg}</text>"#, x - 8.0, height - pad + 18.0);
    }
    for u in [-u_max, 0.0, u_max] {
        let y = py(u);
        let _ = writeln!(s, r#"<line class="grid" x1="{pad}" y1="{y:.3}" x2="{:.3}" y2="{y:.3}"/>"#, width - pad);
        let _ = writeln!(s, r#"<text x="6" y="{:.3}">{u:.3}</text>"#, y + 4.0);
    }
    let _ = writeln!(
        s,
        r#"<line class="axis" x1="{pad}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/>"#,
        height - pad,
        width - pad,
        height - pad
    );
    let _ = writeln!(s, r#"<line class="axis" x1="{pad}" y1="{pad}" x2="{pad}" y2="{:.3}"/>"#, height - pad);
    let _ = writeln!(s, r#"<text x="{:.3}" y="{:.3}">theta* (deg)</text>"#, width / 2.0 - 40.0, height - 14.0);
    let _ = writeln!(s, r#"<text x="8" y="{:.3}">u_bar*</text>"#, pad - 16.0);
    for p in points {
        let _ = writeln!(
            s,
            r#"<circle class="point" cx="{:.3}" cy="{:.3}" r="2.5"><title>p={} q={}</title></circle>"#,
            px(p.theta.to_degrees()),
            py(p.u_bar),
            p.p,
            p.q
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}
