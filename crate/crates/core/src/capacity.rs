//! Closed-form layer capacities and the four-way classification of
//! intersecting layers.
//!
//! `loop_capacity`, `reduced_capacity` and `residual_capacity` evaluate the
//! published floor formulas verbatim. They are not all achievable packings:
//! for every layer `i >= 2` the ring formula claims one slot more than fits on
//! the centerline. Graph construction therefore sizes layers with
//! [`placeable_loop_capacity`] and [`arc_slots`], which count what can really
//! be placed.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{acos_clamped, norm_angle, Disk};

/// Slack for floors of ratios that are integral in exact arithmetic.
const FLOOR_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LayerRef {
    pub circle: Disk,
    pub layer_index: usize,
}

impl LayerRef {
    pub fn new(circle: Disk, layer_index: usize) -> Self {
        Self { circle, layer_index }
    }

    /// Radius of the layer centerline for agents of radius `r`.
    pub fn centerline(&self, r: f64) -> f64 {
        2.0 * r * self.layer_index as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PairClass {
    CaseI,
    CaseII,
    CaseIII,
    CaseIV,
    Nested,
}

fn floor_slack(x: f64) -> usize {
    if x <= 0.0 {
        0
    } else {
        (x + FLOOR_SLACK).floor() as usize
    }
}

/// Angular spacing of two touching agents on layer `i`.
pub fn slot_angle(i: usize) -> f64 {
    2.0 * (1.0 / (2.0 * i as f64)).asin()
}

/// Half-angle kept clear on each side of the outer endpoint of a radial
/// inter-layer edge on layer `i >= 2`.
pub fn capsule_half_angle(i: usize) -> f64 {
    (1.0 / i as f64).asin()
}

pub fn max_layer_index(circle_radius: f64, r: f64) -> usize {
    floor_slack((circle_radius + r) / (2.0 * r))
}

/// Largest layer whose agent disks stay inside a circle of the given radius.
pub fn fitting_layer_index(circle_radius: f64, r: f64) -> usize {
    floor_slack((circle_radius - r) / (2.0 * r))
}

pub fn loop_capacity(i: usize) -> usize {
    match i {
        0 => 0,
        1 => 6,
        _ => floor_slack((2.0 * PI - 2.0 * capsule_half_angle(i)) / slot_angle(i)) + 3,
    }
}

/// Slots a full layer really holds while keeping a radial capsule to the
/// layer below free: the capsule endpoint plus a closed arc.
pub fn placeable_loop_capacity(i: usize) -> usize {
    match i {
        0 => 0,
        1 => 6,
        _ => floor_slack((2.0 * PI - 2.0 * capsule_half_angle(i)) / slot_angle(i)) + 2,
    }
}

/// Points that fit on a closed arc of angle `theta` of layer `i` with
/// touching spacing.
pub fn arc_slots(theta: f64, i: usize) -> usize {
    if theta < 0.0 {
        0
    } else {
        floor_slack(theta / slot_angle(i)) + 1
    }
}

pub fn classify_pair(a: &LayerRef, b: &LayerRef, d: f64, r: f64) -> Result<PairClass> {
    let (ra, rb) = (a.circle.radius, b.circle.radius);
    if d < ra.max(rb) * (1.0 - FLOOR_SLACK) {
        return Err(Error::CenterContained { d, ra, rb });
    }
    let (i, j) = (a.layer_index as f64, b.layer_index as f64);
    let s = |k: f64| (k * k - 1.0).max(0.0).sqrt();
    let case1 = (s(i) + s(j + 1.0)).max(s(j) + s(i + 1.0)) * 2.0 * r;
    Ok(if d > case1 {
        PairClass::CaseI
    } else if d > (2.0 * i + 2.0 * j) * r {
        PairClass::CaseII
    } else if d > (2.0 * i + 2.0 * j - 2.0) * r {
        PairClass::CaseIII
    } else {
        PairClass::CaseIV
    })
}

pub fn intersection_capacity(cls: PairClass) -> usize {
    match cls {
        PairClass::CaseIII | PairClass::CaseIV => 2,
        PairClass::CaseI | PairClass::CaseII | PairClass::Nested => 0,
    }
}

/// Cosine of the half-angle, seen from the center of layer `i`, of the part of
/// its centerline lying within `reach` of a point at distance `d`.
fn wedge_cos(i: usize, d: f64, reach: f64, r: f64) -> f64 {
    let rho = 2.0 * r * i as f64;
    (d * d + rho * rho - reach * reach) / (2.0 * rho * d)
}

pub fn reduced_capacity(a: &LayerRef, b: &LayerRef, d: f64, r: f64, cls: PairClass) -> usize {
    let i = a.layer_index;
    let j = b.layer_index as f64;
    if i == 0 {
        return 0;
    }
    let phi = slot_angle(i);
    let outer = wedge_cos(i, d, (2.0 * j + 2.0) * r, r);
    if outer >= 1.0 {
        return loop_capacity(i);
    }
    let case1 = floor_slack((2.0 * PI - 2.0 * acos_clamped(outer)) / phi) + 2;
    match cls {
        PairClass::CaseIV => {
            let inner = wedge_cos(i, d, (2.0 * j - 2.0) * r, r);
            floor_slack(2.0 * acos_clamped(inner) / phi) + 1 + case1
        }
        _ => case1,
    }
}

/// Capacity of `a` against the whole of circle `b`.
pub fn reduced_capacity_against_circle(a: &LayerRef, b: &Disk, r: f64) -> Result<usize> {
    let d = a.circle.center.dist(b.center);
    let whole = LayerRef::new(*b, max_layer_index(b.radius, r));
    let cls = classify_pair(a, &whole, d, r)?;
    Ok(reduced_capacity(a, &whole, d, r, cls))
}

pub fn residual_capacity(a: &LayerRef, neighbors: &[Disk], r: f64) -> usize {
    let i = a.layer_index;
    if i == 0 {
        return 0;
    }
    let mut blocked = ArcSet::default();
    for b in neighbors {
        let j = max_layer_index(b.radius, r);
        let d = a.circle.center.dist(b.center);
        let c = wedge_cos(i, d, 2.0 * r * (j as f64 + 1.0), r);
        let dir = (b.center - a.circle.center).angle();
        blocked.add_wedge(dir, c);
    }
    if blocked.is_empty() {
        return loop_capacity(i);
    }
    blocked.gaps().iter().map(|g| arc_slots(g.len, i)).sum()
}

/// Angular interval starting at `start` (radians, normalized) and extending
/// counter-clockwise by `len`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub start: f64,
    pub len: f64,
}

impl Arc {
    pub fn end(&self) -> f64 {
        self.start + self.len
    }

    /// Counter-clockwise offset of `angle` from the arc start.
    pub fn offset(&self, angle: f64) -> f64 {
        norm_angle(angle - self.start)
    }
}

/// Union of open angular intervals on a circle.
#[derive(Debug, Clone, Default)]
pub struct ArcSet {
    arcs: Vec<Arc>,
    full: bool,
}

impl ArcSet {
    pub fn is_empty(&self) -> bool {
        !self.full && self.arcs.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.full
    }

    /// Adds the open interval of half-width `acos(cos_half)` around `dir`.
    /// Arguments at or above 1 add nothing, at or below -1 block everything.
    pub fn add_wedge(&mut self, dir: f64, cos_half: f64) {
        if cos_half >= 1.0 {
            return;
        }
        if cos_half <= -1.0 {
            self.full = true;
            return;
        }
        let half = cos_half.acos();
        self.add(dir - half, 2.0 * half);
    }

    pub fn add(&mut self, start: f64, len: f64) {
        if len <= 0.0 {
            return;
        }
        if len >= 2.0 * PI {
            self.full = true;
            return;
        }
        self.arcs.push(Arc { start: norm_angle(start), len });
    }

    /// Whether `angle` lies strictly inside a blocked interval.
    pub fn contains(&self, angle: f64) -> bool {
        self.full
            || self.arcs.iter().any(|a| {
                let o = a.offset(angle);
                o > 0.0 && o < a.len
            })
    }

    /// Disjoint merged blocked arcs, sorted by start angle.
    pub fn merged(&self) -> Vec<Arc> {
        if self.full {
            return vec![Arc { start: 0.0, len: 2.0 * PI }];
        }
        let mut arcs = self.arcs.clone();
        arcs.sort_by(|x, y| x.start.total_cmp(&y.start));
        let mut out: Vec<Arc> = Vec::new();
        for a in arcs {
            if let Some(last) = out.last_mut() {
                if a.start <= last.end() {
                    let end = last.end().max(a.end());
                    last.len = end - last.start;
                    continue;
                }
            }
            out.push(a);
        }
        // wrap-around merge
        if out.len() > 1 {
            let first = out[0];
            let last = *out.last().unwrap();
            if last.end() >= first.start + 2.0 * PI {
                let end = (first.end() + 2.0 * PI).max(last.end());
                out.remove(0);
                let l = out.last_mut().unwrap();
                l.len = end - l.start;
            }
        }
        if out.iter().any(|a| a.len >= 2.0 * PI) {
            return vec![Arc { start: 0.0, len: 2.0 * PI }];
        }
        out
    }

    /// Closed free gaps between blocked arcs. Empty when fully blocked; a
    /// single full-length gap when nothing is blocked.
    pub fn gaps(&self) -> Vec<Arc> {
        let m = self.merged();
        if self.full || m.first().is_some_and(|a| a.len >= 2.0 * PI) {
            return Vec::new();
        }
        if m.is_empty() {
            return vec![Arc { start: 0.0, len: 2.0 * PI }];
        }
        let k = m.len();
        (0..k)
            .map(|t| {
                let end = m[t].end();
                let next = if t + 1 < k { m[t + 1].start } else { m[0].start + 2.0 * PI };
                Arc { start: norm_angle(end), len: next - end }
            })
            .collect()
    }
}
