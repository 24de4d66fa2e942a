//! Artifact files: JSON for scenarios, graphs, plans and reports; CSV for
//! trajectories.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::swap_graph::AgentId;
use crate::trajectory::{MotionSegment, PathShape, Track, TrajectorySet};

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_json(value)?)?;
    Ok(())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// One motion segment per row; arc columns are empty for lines and holds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct SegmentRow {
    agent: AgentId,
    kind: String,
    t0: f64,
    t1: f64,
    from_x: f64,
    from_y: f64,
    to_x: f64,
    to_y: f64,
    center_x: Option<f64>,
    center_y: Option<f64>,
    radius: Option<f64>,
    a0: Option<f64>,
    a1: Option<f64>,
}

impl From<&MotionSegment> for SegmentRow {
    fn from(s: &MotionSegment) -> Self {
        let (kind, arc) = match s.shape {
            PathShape::Hold => ("hold", None),
            PathShape::Line => ("line", None),
            PathShape::Arc { center, radius, a0, a1 } => ("arc", Some((center, radius, a0, a1))),
        };
        SegmentRow {
            agent: s.agent,
            kind: kind.to_string(),
            t0: s.t0,
            t1: s.t1,
            from_x: s.from.x,
            from_y: s.from.y,
            to_x: s.to.x,
            to_y: s.to.y,
            center_x: arc.map(|a| a.0.x),
            center_y: arc.map(|a| a.0.y),
            radius: arc.map(|a| a.1),
            a0: arc.map(|a| a.2),
            a1: arc.map(|a| a.3),
        }
    }
}

impl TryFrom<SegmentRow> for MotionSegment {
    type Error = Error;
    fn try_from(r: SegmentRow) -> Result<Self> {
        let shape = match r.kind.as_str() {
            "hold" => PathShape::Hold,
            "line" => PathShape::Line,
            "arc" => match (r.center_x, r.center_y, r.radius, r.a0, r.a1) {
                (Some(x), Some(y), Some(radius), Some(a0), Some(a1)) => {
                    PathShape::Arc { center: Point2::new(x, y), radius, a0, a1 }
                }
                _ => return Err(Error::InvalidScenario(format!("arc row of agent {} lacks arc columns", r.agent))),
            },
            k => return Err(Error::InvalidScenario(format!("unknown segment kind {k:?}"))),
        };
        Ok(MotionSegment {
            agent: r.agent,
            t0: r.t0,
            t1: r.t1,
            from: Point2::new(r.from_x, r.from_y),
            to: Point2::new(r.to_x, r.to_y),
            shape,
        })
    }
}

pub fn write_trajectories_csv<W: Write>(out: W, ts: &TrajectorySet) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for t in &ts.tracks {
        for s in &t.segments {
            w.serialize(SegmentRow::from(s))?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Rebuilds a trajectory set; the horizon is the latest segment end.
pub fn read_trajectories_csv<R: Read>(input: R) -> Result<TrajectorySet> {
    let mut rd = csv::Reader::from_reader(input);
    let mut tracks: Vec<Track> = Vec::new();
    for row in rd.deserialize::<SegmentRow>() {
        let seg = MotionSegment::try_from(row?)?;
        match tracks.last_mut() {
            Some(t) if t.agent == seg.agent => t.segments.push(seg),
            _ => tracks.push(Track { agent: seg.agent, segments: vec![seg] }),
        }
    }
    tracks.sort_by_key(|t| t.agent);
    if tracks.windows(2).any(|w| w[0].agent == w[1].agent) {
        return Err(Error::InvalidScenario("segments of one agent are not contiguous".into()));
    }
    let horizon = tracks.iter().flat_map(|t| t.segments.last()).map(|s| s.t1).fold(0.0, f64::max);
    Ok(TrajectorySet { tracks, horizon })
}

pub fn save_trajectories(path: &Path, ts: &TrajectorySet) -> Result<()> {
    write_trajectories_csv(fs::File::create(path)?, ts)
}

pub fn load_trajectories(path: &Path) -> Result<TrajectorySet> {
    read_trajectories_csv(fs::File::open(path)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleRow {
    pub t: f64,
    pub agent: AgentId,
    pub x: f64,
    pub y: f64,
}

/// Positions at `0, dt, 2dt, ...` and at the horizon. The first and last
/// times list every agent; in between an agent gets a row only when it moved
/// since its previous row, so readers hold the last value.
pub fn write_samples_csv<W: Write>(out: W, ts: &TrajectorySet, dt: f64) -> Result<usize> {
    let mut w = csv::Writer::from_writer(out);
    let steps = (ts.horizon / dt).ceil() as usize;
    let mut last: Vec<Option<Point2>> = vec![None; ts.tracks.len()];
    let mut rows = 0;
    for k in 0..=steps {
        let t = (k as f64 * dt).min(ts.horizon);
        for (tr, prev) in ts.tracks.iter().zip(&mut last) {
            let p = tr.position(t);
            if k == 0 || k == steps || *prev != Some(p) {
                w.serialize(SampleRow { t, agent: tr.agent, x: p.x, y: p.y })?;
                *prev = Some(p);
                rows += 1;
            }
        }
    }
    w.flush()?;
    Ok(rows)
}
