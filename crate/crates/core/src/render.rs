//! SVG drawings of workspaces, swap graphs and trajectories.
//!
//! Output is plain text built with fixed three-decimal formatting, so equal
//! inputs give byte-identical files.

use std::fmt::Write as _;

use crate::conversion::ConversionResult;
use crate::geometry::{Point2, Workspace};
use crate::scenario::AgentSpec;
use crate::swap_graph::SwapGraph;
use crate::trajectory::{PathShape, TrajectorySet};

/// What to draw on top of the workspace.
#[derive(Debug, Clone, Copy, Default)]
pub struct Layers<'a> {
    pub conversion: Option<&'a ConversionResult>,
    /// Drawn instead of `conversion.graph` when no conversion is given.
    pub graph: Option<&'a SwapGraph>,
    pub trajectories: Option<&'a TrajectorySet>,
    pub agents: Option<&'a [AgentSpec]>,
    pub r: f64,
}

const PIXELS_PER_UNIT: f64 = 12.0;

struct Canvas {
    out: String,
    height: f64,
}

impl Canvas {
    fn new(w: &Workspace, margin: f64) -> Self {
        let b = w.bounds();
        let (x0, y0) = (b.min.x - margin, b.min.y - margin);
        let (ww, hh) = (b.width() + 2.0 * margin, b.height() + 2.0 * margin);
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" viewBox="{:.3} {:.3} {:.3} {:.3}">"#,
            ww * PIXELS_PER_UNIT,
            hh * PIXELS_PER_UNIT,
            x0,
            y0,
            ww,
            hh
        );
        // y grows upwards in the model
        let _ = writeln!(out, r#"<g transform="translate(0 {:.3}) scale(1 -1)">"#, 2.0 * y0 + hh);
        Self { out, height: hh }
    }

    fn finish(mut self) -> String {
        self.out.push_str("</g>\n</svg>\n");
        self.out
    }

    fn stroke(&self) -> f64 {
        self.height / 400.0
    }
}

fn pt(p: Point2) -> String {
    format!("{:.3},{:.3}", p.x, p.y)
}

fn polyline(points: &[Point2]) -> String {
    points.iter().map(|&p| pt(p)).collect::<Vec<_>>().join(" ")
}

/// Distinct hue per agent index.
fn color(k: usize) -> String {
    let hue = (k as f64 * 137.507_764) % 360.0;
    format!("hsl({hue:.1},70%,45%)")
}

fn draw_workspace(c: &mut Canvas, w: &Workspace) {
    let b = w.bounds();
    let s = c.stroke();
    let _ = writeln!(
        c.out,
        r##"<rect class="bounds" x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="#fafafa" stroke="#222" stroke-width="{:.3}"/>"##,
        b.min.x,
        b.min.y,
        b.width(),
        b.height(),
        2.0 * s
    );
    for poly in w.obstacles() {
        let mut d = String::new();
        for ring in poly.rings() {
            let _ = write!(d, "M{}Z", ring.iter().map(|&p| pt(p)).collect::<Vec<_>>().join("L"));
        }
        let _ = writeln!(c.out, r##"<path class="obstacle" d="{d}" fill="#777" fill-rule="evenodd" stroke="#222" stroke-width="{s:.3}"/>"##);
    }
}

/// `curved[e]` marks inter edges drawn elsewhere as polylines.
fn draw_graph(c: &mut Canvas, g: &SwapGraph, r: f64, curved: &[bool]) {
    let s = c.stroke();
    let idx = g.index();
    for cyc in &g.loops {
        let pts: Vec<Point2> = cyc.iter().map(|&v| g.position(v)).collect();
        let _ = writeln!(c.out, r##"<polygon class="loop" points="{}" fill="none" stroke="#3a6ea5" stroke-width="{s:.3}"/>"##, polyline(&pts));
    }
    for (e, &(a, b)) in g.inter_edges.iter().enumerate() {
        if curved.get(e).copied().unwrap_or(false) {
            continue;
        }
        let _ = writeln!(
            c.out,
            r##"<line class="inter" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="#c0392b" stroke-width="{s:.3}" stroke-dasharray="{:.3}"/>"##,
            g.position(a).x,
            g.position(a).y,
            g.position(b).x,
            g.position(b).y,
            4.0 * s
        );
    }
    let dot = if r > 0.0 { 0.25 * r } else { 3.0 * s };
    for v in &g.vertices {
        let shared = idx.membership[v.id].len() > 1;
        let (class, fill) = if shared { ("shared", "#e67e22") } else { ("vertex", "#3a6ea5") };
        let rad = if shared { 1.6 * dot } else { dot };
        let _ = writeln!(c.out, r#"<circle class="{class}" cx="{:.3}" cy="{:.3}" r="{rad:.3}" fill="{fill}"/>"#, v.position.x, v.position.y);
    }
}

fn draw_conversion(c: &mut Canvas, res: &ConversionResult) {
    let s = c.stroke();
    for d in &res.circles {
        let _ = writeln!(
            c.out,
            r##"<circle class="inscribed" cx="{:.3}" cy="{:.3}" r="{:.3}" fill="none" stroke="#999" stroke-width="{s:.3}" stroke-dasharray="{:.3}"/>"##,
            d.center.x,
            d.center.y,
            d.radius,
            3.0 * s
        );
    }
    let curved: Vec<bool> = res.inter_edges.iter().map(|e| e.path.len() > 2).collect();
    for (e, geom) in res.inter_edges.iter().enumerate() {
        if curved[e] {
            let _ = writeln!(
                c.out,
                r##"<polyline class="skeleton-path" data-edge="{e}" points="{}" fill="none" stroke="#27ae60" stroke-width="{s:.3}"/>"##,
                polyline(&geom.path)
            );
        }
    }
    draw_graph(c, &res.graph, res.agent_radius, &curved);
}

/// Path of one agent with arcs flattened to short chords.
fn track_points(ts: &TrajectorySet, k: usize) -> Vec<Point2> {
    let mut pts = vec![ts.tracks[k].start()];
    for seg in &ts.tracks[k].segments {
        match seg.shape {
            PathShape::Hold => {}
            PathShape::Line => pts.push(seg.to),
            PathShape::Arc { center, radius, a0, a1 } => {
                let n = ((a1 - a0).abs() / 0.1).ceil().max(1.0) as usize;
                pts.extend((1..=n).map(|j| Point2::polar(center, radius, a0 + (a1 - a0) * j as f64 / n as f64)));
            }
        }
    }
    pts.dedup();
    pts
}

fn draw_endpoints(c: &mut Canvas, agents: &[AgentSpec], r: f64) {
    let s = c.stroke();
    for a in agents {
        let _ = writeln!(
            c.out,
            r##"<circle class="start" cx="{:.3}" cy="{:.3}" r="{r:.3}" fill="none" stroke="#d62728" stroke-width="{s:.3}"/>"##,
            a.start.x,
            a.start.y
        );
        let _ = writeln!(
            c.out,
            r##"<circle class="goal" cx="{:.3}" cy="{:.3}" r="{r:.3}" fill="none" stroke="#1f77b4" stroke-width="{s:.3}"/>"##,
            a.goal.x,
            a.goal.y
        );
    }
}

pub fn render_svg(w: &Workspace, layers: &Layers) -> String {
    let mut c = Canvas::new(w, 1.0);
    draw_workspace(&mut c, w);
    match (layers.conversion, layers.graph) {
        (Some(res), _) => draw_conversion(&mut c, res),
        (None, Some(g)) => draw_graph(&mut c, g, layers.r, &[]),
        _ => {}
    }
    if let Some(ts) = layers.trajectories {
        let s = c.stroke();
        for k in 0..ts.tracks.len() {
            let _ = writeln!(
                c.out,
                r#"<polyline class="path" data-agent="{}" points="{}" fill="none" stroke="{}" stroke-width="{s:.3}" opacity="0.8"/>"#,
                ts.tracks[k].agent,
                polyline(&track_points(ts, k)),
                color(k)
            );
        }
    }
    if let Some(agents) = layers.agents {
        draw_endpoints(&mut c, agents, layers.r);
    }
    c.finish()
}

/// Agents as filled disks at time `t`, over the workspace and graph.
pub fn render_frame(w: &Workspace, res: Option<&ConversionResult>, ts: &TrajectorySet, r: f64, t: f64) -> String {
    let mut c = Canvas::new(w, 1.0);
    draw_workspace(&mut c, w);
    if let Some(res) = res {
        draw_graph(&mut c, &res.graph, res.agent_radius, &[]);
    }
    for (k, tr) in ts.tracks.iter().enumerate() {
        let p = tr.position(t);
        let _ = writeln!(
            c.out,
            r#"<circle class="agent" data-agent="{}" cx="{:.3}" cy="{:.3}" r="{r:.3}" fill="{}" opacity="0.85"/>"#,
            tr.agent,
            p.x,
            p.y,
            color(k)
        );
    }
    c.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::four_loop_graph;
    use crate::geometry::{Polygon, Rect};

    #[test]
    fn empty_scene_is_outline_only() {
        let w = Workspace::rectangle(10.0, 5.0);
        let svg = render_svg(&w, &Layers::default());
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches("<rect").count(), 1);
        assert!(!svg.contains("<circle") && !svg.contains("<polygon") && !svg.contains("<path"));
    }

    #[test]
    fn obstacles_keep_holes() {
        let mut ring = Polygon::rectangle(Point2::new(2.0, 2.0), Point2::new(8.0, 8.0));
        ring.holes.push(vec![Point2::new(4.0, 4.0), Point2::new(6.0, 4.0), Point2::new(6.0, 6.0), Point2::new(4.0, 6.0)]);
        let w = Workspace::new(Rect::new(Point2::new(0.0, 0.0), Point2::new(10.0, 10.0)), vec![ring]).unwrap();
        let svg = render_svg(&w, &Layers::default());
        assert_eq!(svg.matches("Z").count(), 2);
        assert!(svg.contains("evenodd"));
    }

    #[test]
    fn graph_loops_and_shared_vertices() {
        let w = Workspace::new(Rect::new(Point2::new(-12.0, -12.0), Point2::new(12.0, 12.0)), vec![]).unwrap();
        let g = four_loop_graph();
        let svg = render_svg(&w, &Layers { graph: Some(&g), r: 1.0, ..Default::default() });
        assert_eq!(svg.matches(r#"class="loop""#).count(), 4);
        // 5, 6, 11 and 13 lie on two loops
        assert_eq!(svg.matches(r#"class="shared""#).count(), 4);
        assert_eq!(svg.matches(r#"class="vertex""#).count(), 13);
        assert_eq!(svg.matches(r#"class="inter""#).count(), 1);
        assert_eq!(svg, render_svg(&w, &Layers { graph: Some(&g), r: 1.0, ..Default::default() }));
    }
}
