//! Static SVG rendering of learning curves and grid trajectories.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::metrics::{read_metrics, MetricsRow};
use super::trajectory::{read_trajectories, TrajectoryRow};
use crate::error::{Error, Result};
use crate::gridnav::DEFAULT_GRID_SIZE;

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn svg_open(width: f64, height: f64) -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">\n\
         <rect width=\"{width}\" height=\"{height}\" fill=\"white\"/>\n"
    )
}

fn points_attr(points: &[(f64, f64)]) -> String {
    points
        .iter()
        .map(|(x, y)| format!("{x:.2},{y:.2}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

struct Series {
    label: String,
    color: &'static str,
    dashed: bool,
    points: Vec<(f64, f64)>,
}

/// Train and eval return curves, two polylines per agent.
pub fn returns_svg(rows: &[MetricsRow]) -> String {
    let agents: Vec<usize> = {
        let mut a: Vec<usize> = rows.iter().map(|r| r.agent).collect();
        a.sort_unstable();
        a.dedup();
        a
    };
    let mut series = Vec::new();
    for &agent in &agents {
        let color = PALETTE[agent % PALETTE.len()];
        let pick = |f: fn(&MetricsRow) -> Option<f64>| {
            rows.iter()
                .filter(|r| r.agent == agent)
                .filter_map(|r| f(r).map(|v| (r.iteration as f64, v)))
                .collect::<Vec<_>>()
        };
        series.push(Series {
            label: format!("agent {} train", agent + 1),
            color,
            dashed: false,
            points: pick(|r| r.train_return),
        });
        series.push(Series {
            label: format!("agent {} eval", agent + 1),
            color,
            dashed: true,
            points: pick(|r| r.eval_return),
        });
    }

    let (width, height) = (800.0, 480.0);
    let (left, right, top, bottom) = (70.0, 170.0, 30.0, 50.0);
    let all = series.iter().flat_map(|s| s.points.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if x0 > x1 {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 - x0 < 1e-12 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 < 1e-12 {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let plot_w = width - left - right;
    let plot_h = height - top - bottom;
    let sx = |x: f64| left + (x - x0) / (x1 - x0) * plot_w;
    let sy = |y: f64| top + (y1 - y) / (y1 - y0) * plot_h;

    let mut svg = svg_open(width, height);
    let _ = writeln!(
        svg,
        "<rect x=\"{left}\" y=\"{top}\" width=\"{plot_w}\" height=\"{plot_h}\" fill=\"none\" stroke=\"#333\"/>"
    );
    for k in 0..=4 {
        let fx = x0 + (x1 - x0) * k as f64 / 4.0;
        let fy = y0 + (y1 - y0) * k as f64 / 4.0;
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"middle\">{:.0}</text>",
            sx(fx),
            top + plot_h + 16.0,
            fx
        );
        let _ = writeln!(
            svg,
            "<line x1=\"{left}\" x2=\"{:.2}\" y1=\"{:.2}\" y2=\"{:.2}\" stroke=\"#ddd\"/>",
            left + plot_w,
            sy(fy),
            sy(fy)
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"end\">{:.2}</text>",
            left - 6.0,
            sy(fy) + 4.0,
            fy
        );
    }
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\">iteration</text>",
        left + plot_w / 2.0,
        height - 12.0
    );
    let _ = writeln!(
        svg,
        "<text x=\"16\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.2})\">return</text>",
        top + plot_h / 2.0,
        top + plot_h / 2.0
    );
    for (k, s) in series.iter().enumerate() {
        let pts: Vec<(f64, f64)> = s.points.iter().map(|&(x, y)| (sx(x), sy(y))).collect();
        let dash = if s.dashed { " stroke-dasharray=\"6 3\"" } else { "" };
        let _ = writeln!(
            svg,
            "<polyline class=\"series\" data-label=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"{dash} points=\"{}\"/>",
            s.label,
            s.color,
            points_attr(&pts)
        );
        let ly = top + 14.0 + 18.0 * k as f64;
        let lx = left + plot_w + 12.0;
        let _ = writeln!(
            svg,
            "<line x1=\"{lx}\" x2=\"{:.2}\" y1=\"{ly}\" y2=\"{ly}\" stroke=\"{}\" stroke-width=\"2\"{dash}/>",
            lx + 24.0,
            s.color
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\">{}</text>",
            lx + 30.0,
            ly + 4.0,
            s.label
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// One episode on the grid: start marker, destination markers and a path
/// polyline per agent. Rows must belong to a single episode.
pub fn trajectory_svg(rows: &[TrajectoryRow], grid_size: usize) -> String {
    let cell = 60.0;
    let margin = 30.0;
    let n = grid_size as f64;
    let side = 2.0 * margin + n * cell;
    let cx = |x: i64| margin + (x as f64 + 0.5) * cell;
    let cy = |y: i64| margin + (n - 1.0 - y as f64 + 0.5) * cell;
    let start = ((grid_size / 2) as i64, 0i64);

    let mut svg = svg_open(side, side);
    for k in 0..=grid_size {
        let off = margin + k as f64 * cell;
        let _ = writeln!(
            svg,
            "<line x1=\"{off}\" y1=\"{margin}\" x2=\"{off}\" y2=\"{:.2}\" stroke=\"#bbb\"/>",
            margin + n * cell
        );
        let _ = writeln!(
            svg,
            "<line x1=\"{margin}\" y1=\"{off}\" x2=\"{:.2}\" y2=\"{off}\" stroke=\"#bbb\"/>",
            margin + n * cell
        );
    }
    let _ = writeln!(
        svg,
        "<rect class=\"start\" x=\"{:.2}\" y=\"{:.2}\" width=\"20\" height=\"20\" fill=\"#2ca02c\"/>",
        cx(start.0) - 10.0,
        cy(start.1) - 10.0
    );

    let mut by_agent: BTreeMap<usize, Vec<&TrajectoryRow>> = BTreeMap::new();
    for row in rows {
        by_agent.entry(row.agent).or_default().push(row);
    }
    for (agent, mut steps) in by_agent {
        steps.sort_by_key(|r| r.step);
        let color = PALETTE[agent % PALETTE.len()];
        let mut pts = vec![(cx(start.0), cy(start.1))];
        pts.extend(steps.iter().map(|r| (cx(r.x), cy(r.y))));
        let _ = writeln!(
            svg,
            "<polyline class=\"path\" data-agent=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"3\" points=\"{}\"/>",
            agent + 1,
            points_attr(&pts)
        );
        let dest = steps[0];
        let _ = writeln!(
            svg,
            "<circle class=\"destination\" data-agent=\"{}\" cx=\"{:.2}\" cy=\"{:.2}\" r=\"14\" fill=\"none\" stroke=\"red\" stroke-width=\"3\"/>",
            agent + 1,
            cx(dest.dest_x),
            cy(dest.dest_y)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Writes `returns.svg` and, when trajectories are given, one
/// `trajectory-<episode>.svg` per episode. Returns the written paths.
pub fn render_plots(
    metrics_path: &Path,
    trajectories_path: Option<&Path>,
    out_dir: &Path,
) -> Result<Vec<PathBuf>> {
    let metrics = read_metrics(metrics_path)?;
    if metrics.is_empty() {
        return Err(Error::format(metrics_path, "no metrics rows"));
    }
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut written = Vec::new();
    let returns = out_dir.join("returns.svg");
    write_file(&returns, &returns_svg(&metrics))?;
    written.push(returns);

    if let Some(path) = trajectories_path {
        let rows = read_trajectories(path)?;
        if rows.is_empty() {
            return Err(Error::format(path, "no trajectory rows"));
        }
        let grid_size = rows
            .iter()
            .flat_map(|r| [r.x, r.y, r.dest_x, r.dest_y])
            .max()
            .map_or(DEFAULT_GRID_SIZE, |m| DEFAULT_GRID_SIZE.max(m as usize + 1));
        let mut episodes: BTreeMap<usize, Vec<TrajectoryRow>> = BTreeMap::new();
        for row in rows {
            episodes.entry(row.episode).or_default().push(row);
        }
        for (episode, rows) in episodes {
            let file = out_dir.join(format!("trajectory-{episode}.svg"));
            write_file(&file, &trajectory_svg(&rows, grid_size))?;
            written.push(file);
        }
    }
    Ok(written)
}
