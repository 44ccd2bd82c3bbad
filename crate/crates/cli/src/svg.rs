//! SVG figures: the workspace scene with checked edges and the path, and a
//! stacked view of the graph layers.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use sdplan_core::graph::is_sentinel;
use sdplan_core::world::Cell;
use sdplan_core::{CollisionWorld, EdgeKind, EdgeState, LayeredGraph, PlanResult, VertexId};

const SCENE_PX: f64 = 600.0;
const BAND_W: f64 = 600.0;
const BAND_H: f64 = 150.0;
const BAND_GAP: f64 = 30.0;
const MARGIN: f64 = 10.0;
/// Layers with more vertices than this show evaluated edges only.
pub const LAYER_DETAIL_LIMIT: usize = 512;

pub const VALID_COLOR: &str = "black";
pub const INVALID_COLOR: &str = "red";
pub const PATH_COLOR: &str = "blue";

fn header(out: &mut String, w: f64, h: f64) {
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.2} {h:.2}">"#
    );
    let _ = writeln!(
        out,
        r#"<rect x="0" y="0" width="{w:.2}" height="{h:.2}" fill="white"/>"#
    );
}

fn line(out: &mut String, a: (f64, f64), b: (f64, f64), color: &str, width: f64) {
    let _ = writeln!(
        out,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-width="{width}"/>"#,
        a.0, a.1, b.0, b.1
    );
}

fn polyline(out: &mut String, pts: &[(f64, f64)], color: &str, width: f64, class: &str) {
    let mut coords = String::new();
    for (i, p) in pts.iter().enumerate() {
        if i > 0 {
            coords.push(' ');
        }
        let _ = write!(coords, "{:.2},{:.2}", p.0, p.1);
    }
    let _ = writeln!(
        out,
        r#"<polyline class="{class}" points="{coords}" fill="none" stroke="{color}" stroke-width="{width}"/>"#
    );
}

fn circle(out: &mut String, c: (f64, f64), r: f64, fill: &str) {
    let _ = writeln!(
        out,
        r#"<circle cx="{:.2}" cy="{:.2}" r="{r}" fill="{fill}"/>"#,
        c.0, c.1
    );
}

fn state_color(s: EdgeState) -> Option<&'static str> {
    match s {
        EdgeState::Valid => Some(VALID_COLOR),
        EdgeState::Invalid => Some(INVALID_COLOR),
        EdgeState::Unknown => None,
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Workspace view. Obstacles in grey, checked edges black (valid) or red
/// (invalid) between the robot's traced points, and the final path in
/// blue. `graph` supplies the configurations behind the stored edges.
pub fn scene_svg(world: &CollisionWorld, graph: Option<&LayeredGraph>, result: &PlanResult) -> String {
    let frame = world.frame();
    let (ew, eh) = frame.extent();
    let scale = SCENE_PX / ew.max(eh);
    let (w, h) = (ew * scale + 2.0 * MARGIN, eh * scale + 2.0 * MARGIN);
    let to_px = |p: [f64; 2]| (MARGIN + p[0] * scale, MARGIN + (eh - p[1]) * scale);
    let tip = |q: &[f64]| to_px(world.robot().tip(&frame, q));

    let mut out = String::new();
    header(&mut out, w, h);
    let cell = frame.resolution * scale;
    let _ = writeln!(out, r##"<g fill="#888888">"##);
    for y in 0..frame.height {
        // One rectangle per horizontal run of occupied cells.
        let mut x = 0;
        while x < frame.width {
            if !world.grid().is_occupied(Cell::new(x as i32, y as i32)) {
                x += 1;
                continue;
            }
            let run_start = x;
            while x < frame.width && world.grid().is_occupied(Cell::new(x as i32, y as i32)) {
                x += 1;
            }
            let _ = writeln!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}"/>"#,
                MARGIN + run_start as f64 * cell,
                MARGIN + (frame.height - 1 - y) as f64 * cell,
                (x - run_start) as f64 * cell,
                cell
            );
        }
    }
    let _ = writeln!(out, "</g>");

    if let Some(graph) = graph {
        for ((a, b), state) in result.edges.iter() {
            let (Some(qa), Some(qb), Some(color)) = (graph.config(a), graph.config(b), state_color(state)) else {
                continue;
            };
            line(&mut out, tip(qa), tip(qb), color, 1.0);
        }
    }
    if let Some(path) = result.path() {
        let pts: Vec<_> = path.iter().map(|q| tip(q.as_slice())).collect();
        polyline(&mut out, &pts, PATH_COLOR, 2.5, "path");
    }
    if let Some((s, g)) = graph.and_then(|g| g.query()) {
        circle(&mut out, tip(s.as_slice()), 5.0, "green");
        circle(&mut out, tip(g.as_slice()), 5.0, "orange");
    } else if let Some(path) = result.path() {
        circle(&mut out, tip(path[0].as_slice()), 5.0, "green");
        circle(&mut out, tip(path[path.len() - 1].as_slice()), 5.0, "orange");
    }
    out.push_str("</svg>\n");
    out
}

/// Layered view: layer 1 on top, each layer a band with vertices placed by
/// their first two coordinates. Unchecked edges are light grey on layers up
/// to [`LAYER_DETAIL_LIMIT`] vertices, checked edges black or red on every
/// layer, and the vertex path in blue with its zero-cost hops as vertical
/// segments.
pub fn layers_svg(graph: &LayeredGraph, result: &PlanResult) -> String {
    let depth = graph.depth();
    let w = BAND_W + 2.0 * MARGIN;
    let h = depth as f64 * (BAND_H + BAND_GAP) - BAND_GAP + 2.0 * MARGIN;
    let pos = |v: VertexId| {
        let q = graph.config_of(v.node);
        let top = MARGIN + (v.layer - 1) as f64 * (BAND_H + BAND_GAP);
        let y = q.get(1).copied().unwrap_or(0.5);
        (MARGIN + q[0] * BAND_W, top + (1.0 - y) * BAND_H)
    };

    let mut out = String::new();
    header(&mut out, w, h);
    for layer in 1..=depth {
        let top = MARGIN + (layer - 1) as f64 * (BAND_H + BAND_GAP);
        let _ = writeln!(
            out,
            r##"<rect x="{MARGIN}" y="{top:.2}" width="{BAND_W}" height="{BAND_H}" fill="none" stroke="#bbbbbb"/>"##
        );
        let _ = writeln!(
            out,
            r##"<text x="{:.2}" y="{:.2}" font-size="11" fill="#444444">L{layer} (n={})</text>"##,
            MARGIN + 3.0,
            top + 12.0,
            graph.count(layer)
        );
        let detailed = graph.count(layer) <= LAYER_DETAIL_LIMIT;
        let mut grey = String::new();
        let mut checked = String::new();
        for v in graph.layer_vertices(layer) {
            graph.visit_neighbors(v, |u, kind, _| {
                if kind != EdgeKind::WithinLayer || u.node <= v.node {
                    return;
                }
                match state_color(result.edges.get(v.node, u.node)) {
                    Some(color) => line(&mut checked, pos(v), pos(u), color, 1.0),
                    None if detailed => line(&mut grey, pos(v), pos(u), "#dddddd", 0.5),
                    None => {}
                }
            });
            if detailed {
                circle(&mut grey, pos(v), 1.2, "#999999");
            }
        }
        out.push_str(&grey);
        out.push_str(&checked);
    }
    if result.vertices.len() > 1 {
        let pts: Vec<_> = result.vertices.iter().map(|&v| pos(v)).collect();
        polyline(&mut out, &pts, PATH_COLOR, 2.0, "path");
    }
    for v in result.vertices.iter().filter(|v| is_sentinel(v.node)) {
        circle(&mut out, pos(*v), 3.0, "green");
    }
    out.push_str("</svg>\n");
    out
}

pub fn emit_svg_scene(
    world: &CollisionWorld,
    graph: Option<&LayeredGraph>,
    result: &PlanResult,
    path: &Path,
) -> Result<()> {
    write_file(path, &scene_svg(world, graph, result))
}

pub fn emit_svg_layers(graph: &LayeredGraph, result: &PlanResult, path: &Path) -> Result<()> {
    write_file(path, &layers_svg(graph, result))
}

/// A simple line chart. Each series is a name and its (x, y) points.
pub fn line_chart(
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[(String, Vec<(f64, f64)>)],
    log_x: bool,
) -> String {
    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const LEFT: f64 = 60.0;
    const RIGHT: f64 = 130.0;
    const TOP: f64 = 30.0;
    const BOTTOM: f64 = 45.0;
    const PALETTE: [&str; 8] = [
        "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    ];

    let fx = |x: f64| if log_x { x.max(1e-12).log10() } else { x };
    let all: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|(_, p)| p.iter().map(|&(x, y)| (fx(x), y)))
        .collect();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, 0.0f64, f64::NEG_INFINITY);
    for &(x, y) in &all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, x1, y1) = (0.0, 1.0, 1.0);
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    if y1 <= y0 {
        y1 = y0 + 1.0;
    }
    let (pw, ph) = (W - LEFT - RIGHT, H - TOP - BOTTOM);
    let px = |x: f64| LEFT + (fx(x) - x0) / (x1 - x0) * pw;
    let py = |y: f64| TOP + (1.0 - (y - y0) / (y1 - y0)) * ph;

    let mut out = String::new();
    header(&mut out, W, H);
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="18" font-size="14" text-anchor="middle">{}</text>"#,
        W / 2.0,
        escape(title)
    );
    line(&mut out, (LEFT, TOP + ph), (LEFT + pw, TOP + ph), "black", 1.0);
    line(&mut out, (LEFT, TOP), (LEFT, TOP + ph), "black", 1.0);
    for k in 0..=4 {
        let t = k as f64 / 4.0;
        let xv = x0 + t * (x1 - x0);
        let label = if log_x { 10f64.powf(xv) } else { xv };
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-size="10" text-anchor="middle">{}</text>"#,
            LEFT + t * pw,
            TOP + ph + 14.0,
            tick(label)
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-size="10" text-anchor="end">{}</text>"#,
            LEFT - 4.0,
            TOP + (1.0 - t) * ph + 3.0,
            tick(y0 + t * (y1 - y0))
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-size="11" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        H - 8.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="14" y="{:.1}" font-size="11" text-anchor="middle" transform="rotate(-90 14 {:.1})">{}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        escape(y_label)
    );
    for (i, (name, pts)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mapped: Vec<_> = pts.iter().map(|&(x, y)| (px(x), py(y))).collect();
        if !mapped.is_empty() {
            polyline(&mut out, &mapped, color, 1.5, "series");
        }
        let ly = TOP + 14.0 * i as f64 + 8.0;
        line(&mut out, (W - RIGHT + 10.0, ly), (W - RIGHT + 30.0, ly), color, 2.0);
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-size="11">{}</text>"#,
            W - RIGHT + 34.0,
            ly + 4.0,
            escape(name)
        );
    }
    out.push_str("</svg>\n");
    out
}

fn tick(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-2) {
        format!("{v:.1e}")
    } else {
        format!("{v:.3}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn write_svg(path: &Path, svg: &str) -> Result<()> {
    write_file(path, svg)
}
