use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use super::SweepResult;
use crate::error::{Error, Result};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 70.0;

/// Viridis-like color stops.
const STOPS: [(f64, [u8; 3]); 5] = [
    (0.0, [68, 1, 84]),
    (0.25, [59, 82, 139]),
    (0.5, [33, 145, 140]),
    (0.75, [94, 201, 98]),
    (1.0, [253, 231, 37]),
];

fn color(t: f64) -> String {
    let t = t.clamp(0.0, 1.0);
    let i = STOPS.iter().rposition(|s| s.0 <= t).unwrap_or(0).min(STOPS.len() - 2);
    let (t0, c0) = STOPS[i];
    let (t1, c1) = STOPS[i + 1];
    let f = (t - t0) / (t1 - t0);
    let mix = |a: u8, b: u8| (a as f64 + f * (b as f64 - a as f64)).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(c0[0], c1[0]), mix(c0[1], c1[1]), mix(c0[2], c1[2]))
}

/// Key that orders floats totally for the grid axes.
fn key(x: f64) -> u64 {
    let bits = x.to_bits();
    if bits >> 63 == 1 {
        !bits
    } else {
        bits | (1 << 63)
    }
}

/// Largest `log₁₀ proxy` over the seeds of each `(sep·n, count)` cell.
/// `None` when every seed was skipped; infinite proxies stay infinite.
fn aggregate(result: &SweepResult) -> BTreeMap<(u64, usize), (f64, usize, Option<f64>)> {
    let mut cells: BTreeMap<(u64, usize), (f64, usize, Option<f64>)> = BTreeMap::new();
    for row in &result.rows {
        let entry = cells
            .entry((key(row.nominal_sep_n), row.count))
            .or_insert((row.nominal_sep_n, row.count, None));
        if let Some(p) = row.proxy() {
            let v = p.log10();
            entry.2 = Some(entry.2.map_or(v, |old: f64| old.max(v)));
        }
    }
    cells
}

fn header(svg: &mut String, title: &str) {
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{title}</text>"#,
        WIDTH / 2.0
    );
}

fn finite_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if lo > hi {
        (0.0, 1.0)
    } else if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn heatmap(result: &SweepResult) -> String {
    let cells = aggregate(result);
    let mut xs: Vec<(u64, f64)> = cells.values().map(|c| (key(c.0), c.0)).collect();
    xs.sort_by_key(|x| x.0);
    xs.dedup_by_key(|x| x.0);
    let mut ys: Vec<usize> = cells.values().map(|c| c.1).collect();
    ys.sort_unstable();
    ys.dedup();
    let (lo, hi) = finite_range(cells.values().filter_map(|c| c.2));

    let mut svg = String::new();
    header(&mut svg, "log10 condition proxy");
    let plot_w = WIDTH - 2.0 * MARGIN - 40.0;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let cw = plot_w / xs.len() as f64;
    let ch = plot_h / ys.len() as f64;
    for (xi, (xk, xv)) in xs.iter().enumerate() {
        for (yi, &count) in ys.iter().enumerate() {
            let x = MARGIN + xi as f64 * cw;
            let y = MARGIN + (ys.len() - 1 - yi) as f64 * ch;
            let (fill, label) = match cells.get(&(*xk, count)).and_then(|c| c.2) {
                Some(v) if v.is_finite() => (color((v - lo) / (hi - lo)), format!("{v:.3}")),
                Some(_) => ("#b40426".to_string(), "inf".to_string()),
                None => ("#cccccc".to_string(), "skipped".to_string()),
            };
            let _ = writeln!(
                svg,
                r#"<rect x="{x:.2}" y="{y:.2}" width="{cw:.2}" height="{ch:.2}" fill="{fill}"><title>sep*n={xv}, count={count}: {label}</title></rect>"#
            );
        }
    }
    for (xi, (_, xv)) in xs.iter().enumerate() {
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{xv}</text>"#,
            MARGIN + (xi as f64 + 0.5) * cw,
            MARGIN + plot_h + 16.0
        );
    }
    for (yi, count) in ys.iter().enumerate() {
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{count}</text>"#,
            MARGIN - 6.0,
            MARGIN + (ys.len() - 1 - yi) as f64 * ch + ch / 2.0 + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">sep * n</text>"#,
        MARGIN + plot_w / 2.0,
        HEIGHT - MARGIN / 2.0 + 10.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">node count</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    // Color bar.
    let bar_x = WIDTH - MARGIN;
    for i in 0..50 {
        let t = i as f64 / 49.0;
        let _ = writeln!(
            svg,
            r#"<rect x="{bar_x:.2}" y="{:.2}" width="14" height="{:.2}" fill="{}"/>"#,
            MARGIN + (1.0 - t) * (plot_h - plot_h / 50.0),
            plot_h / 50.0 + 0.5,
            color(t)
        );
    }
    let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}">{hi:.2}</text>"#, bar_x + 18.0, MARGIN + 8.0);
    let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}">{lo:.2}</text>"#, bar_x + 18.0, MARGIN + plot_h);
    svg.push_str("</svg>\n");
    svg
}

fn line_plot(result: &SweepResult) -> String {
    let cells = aggregate(result);
    let by_sep = cells.values().map(|c| key(c.0)).collect::<std::collections::BTreeSet<_>>().len() > 1;
    let mut points: Vec<(f64, Option<f64>)> = cells
        .values()
        .map(|c| (if by_sep { c.0 } else { c.1 as f64 }, c.2))
        .collect();
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (x_lo, x_hi) = finite_range(points.iter().map(|p| p.0));
    let (y_lo, y_hi) = finite_range(points.iter().filter_map(|p| p.1));

    let mut svg = String::new();
    header(&mut svg, "log10 condition proxy");
    let plot_w = WIDTH - 2.0 * MARGIN;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let sx = |x: f64| MARGIN + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let sy = |y: f64| MARGIN + (1.0 - (y - y_lo) / (y_hi - y_lo)) * plot_h;
    let _ = writeln!(
        svg,
        r##"<rect x="{MARGIN}" y="{MARGIN}" width="{plot_w}" height="{plot_h}" fill="none" stroke="#444"/>"##
    );
    let path: Vec<String> = points
        .iter()
        .filter_map(|&(x, y)| y.filter(|v| v.is_finite()).map(|v| format!("{:.2},{:.2}", sx(x), sy(v))))
        .collect();
    if !path.is_empty() {
        let _ = writeln!(
            svg,
            r##"<polyline points="{}" fill="none" stroke="#3b528b" stroke-width="2"/>"##,
            path.join(" ")
        );
    }
    for &(x, y) in &points {
        let (cy, fill, label) = match y {
            Some(v) if v.is_finite() => (sy(v), "#3b528b", format!("{v:.3}")),
            Some(_) => (MARGIN, "#b40426", "inf".to_string()),
            None => (MARGIN + plot_h, "#999999", "skipped".to_string()),
        };
        let _ = writeln!(
            svg,
            r#"<circle cx="{:.2}" cy="{cy:.2}" r="3.5" fill="{fill}"><title>{x}: {label}</title></circle>"#,
            sx(x)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        MARGIN + plot_w / 2.0,
        HEIGHT - MARGIN / 2.0 + 10.0,
        if by_sep { "sep * n" } else { "node count" }
    );
    for (v, y) in [(y_hi, MARGIN + 4.0), (y_lo, MARGIN + plot_h)] {
        let _ = writeln!(svg, r#"<text x="{:.2}" y="{y:.2}" text-anchor="end">{v:.2}</text>"#, MARGIN - 6.0);
    }
    for (v, x) in [(x_lo, MARGIN), (x_hi, MARGIN + plot_w)] {
        let _ = writeln!(
            svg,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{v}</text>"#,
            MARGIN + plot_h + 16.0
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Heatmap over `(sep·n, count)` when both vary, otherwise a line plot.
pub fn render_svg(result: &SweepResult) -> String {
    let cells = aggregate(result);
    let seps = cells.values().map(|c| key(c.0)).collect::<std::collections::BTreeSet<_>>();
    let counts = cells.values().map(|c| c.1).collect::<std::collections::BTreeSet<_>>();
    if seps.len() > 1 && counts.len() > 1 {
        heatmap(result)
    } else {
        line_plot(result)
    }
}

pub fn emit_plot(result: &SweepResult, path: &Path) -> Result<()> {
    std::fs::write(path, render_svg(result)).map_err(|e| Error::io(path, e))
}
