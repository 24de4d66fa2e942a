//! Continuous realization of swap operations and a sampling collision oracle.
//!
//! Ops run one after another. A rotation moves every agent of the loop along
//! the loop centerline, all starting and stopping together, so the angular gap
//! between consecutive agents is a blend of the gaps before and after and
//! never drops below the slot spacing. A move into the vacancy follows the
//! loop arc for loop edges and the stored polyline for inter-loop edges.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::conversion::ConversionResult;
use crate::error::{Error, Result};
use crate::geometry::{clearance, norm_angle, Point2, Workspace};
use crate::planner::{Plan, SwapOp};
use crate::swap_graph::{edge_key, AgentId, GraphIndex, Occupancy};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum PathShape {
    Hold,
    Line,
    /// Counter-clockwise for `a1 > a0`.
    Arc { center: Point2, radius: f64, a0: f64, a1: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MotionSegment {
    pub agent: AgentId,
    pub t0: f64,
    pub t1: f64,
    pub from: Point2,
    pub to: Point2,
    pub shape: PathShape,
}

impl MotionSegment {
    pub fn hold(agent: AgentId, t0: f64, t1: f64, p: Point2) -> Self {
        Self { agent, t0, t1, from: p, to: p, shape: PathShape::Hold }
    }

    pub fn line(agent: AgentId, t0: f64, a: Point2, b: Point2) -> Self {
        Self { agent, t0, t1: t0 + a.dist(b), from: a, to: b, shape: PathShape::Line }
    }

    pub fn is_hold(&self) -> bool {
        matches!(self.shape, PathShape::Hold)
    }

    pub fn length(&self) -> f64 {
        match self.shape {
            PathShape::Hold => 0.0,
            PathShape::Line => self.from.dist(self.to),
            PathShape::Arc { radius, a0, a1, .. } => radius * (a1 - a0).abs(),
        }
    }

    pub fn position(&self, t: f64) -> Point2 {
        if t <= self.t0 {
            return self.from;
        }
        if t >= self.t1 {
            return self.to;
        }
        let f = (t - self.t0) / (self.t1 - self.t0);
        match self.shape {
            PathShape::Hold => self.from,
            PathShape::Line => self.from.lerp(self.to, f),
            PathShape::Arc { center, radius, a0, a1 } => Point2::polar(center, radius, a0 + f * (a1 - a0)),
        }
    }

    fn shifted(&self, dt: f64) -> Self {
        Self { t0: self.t0 + dt, t1: self.t1 + dt, ..self.clone() }
    }

    /// The same motion traversed backwards over `[h - t1, h - t0]`.
    fn reversed(&self, h: f64) -> Self {
        let shape = match self.shape {
            PathShape::Arc { center, radius, a0, a1 } => PathShape::Arc { center, radius, a0: a1, a1: a0 },
            ref s => s.clone(),
        };
        Self { agent: self.agent, t0: h - self.t1, t1: h - self.t0, from: self.to, to: self.from, shape }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Track {
    pub agent: AgentId,
    pub segments: Vec<MotionSegment>,
}

impl Track {
    pub fn position(&self, t: f64) -> Point2 {
        let k = self.segments.partition_point(|s| s.t1 < t);
        match self.segments.get(k) {
            Some(s) => s.position(t),
            None => self.segments.last().map(|s| s.to).unwrap_or(Point2::new(f64::NAN, f64::NAN)),
        }
    }

    pub fn start(&self) -> Point2 {
        self.segments[0].from
    }

    pub fn end(&self) -> Point2 {
        self.segments.last().expect("tracks are never empty").to
    }
}

/// Per-agent piecewise paths tiling `[0, horizon]`, sorted by agent id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySet {
    pub tracks: Vec<Track>,
    pub horizon: f64,
}

impl TrajectorySet {
    /// Everyone holds at the given positions for zero time.
    pub fn stationary(positions: &BTreeMap<AgentId, Point2>) -> Self {
        let tracks = positions
            .iter()
            .map(|(&a, &p)| Track { agent: a, segments: vec![MotionSegment::hold(a, 0.0, 0.0, p)] })
            .collect();
        Self { tracks, horizon: 0.0 }
    }

    pub fn final_positions(&self) -> BTreeMap<AgentId, Point2> {
        self.tracks.iter().map(|t| (t.agent, t.end())).collect()
    }

    pub fn initial_positions(&self) -> BTreeMap<AgentId, Point2> {
        self.tracks.iter().map(|t| (t.agent, t.start())).collect()
    }

    /// Appends `next`, which must start where `self` ends, after `self.horizon`.
    pub fn append(&mut self, next: &TrajectorySet) {
        let h = self.horizon;
        let mut by_agent: BTreeMap<AgentId, &Track> = next.tracks.iter().map(|t| (t.agent, t)).collect();
        for track in &mut self.tracks {
            if let Some(n) = by_agent.remove(&track.agent) {
                for s in &n.segments {
                    push_coalesced(&mut track.segments, s.shifted(h));
                }
            }
        }
        self.horizon += next.horizon;
        for track in &mut self.tracks {
            pad_until(track, self.horizon);
        }
    }

    /// The whole motion played backwards.
    pub fn reversed(&self) -> TrajectorySet {
        let h = self.horizon;
        let tracks = self
            .tracks
            .iter()
            .map(|t| {
                let mut segs: Vec<MotionSegment> = Vec::new();
                for s in t.segments.iter().rev() {
                    push_coalesced(&mut segs, s.reversed(h));
                }
                Track { agent: t.agent, segments: segs }
            })
            .collect();
        TrajectorySet { tracks, horizon: h }
    }

    pub fn segment_count(&self) -> usize {
        self.tracks.iter().map(|t| t.segments.len()).sum()
    }
}

/// Appends a segment, merging consecutive holds at one point.
fn push_coalesced(segs: &mut Vec<MotionSegment>, s: MotionSegment) {
    if let Some(last) = segs.last_mut() {
        if last.is_hold() && s.is_hold() && last.to == s.from {
            last.t1 = s.t1;
            return;
        }
        if s.is_hold() && s.t1 <= s.t0 {
            return;
        }
        if last.is_hold() && last.t1 <= last.t0 && last.to == s.from {
            *last = s;
            return;
        }
    }
    segs.push(s);
}

fn pad_until(track: &mut Track, t: f64) {
    let last = track.segments.last().expect("tracks are never empty");
    if last.t1 < t {
        let (agent, t1, p) = (last.agent, last.t1, last.to);
        push_coalesced(&mut track.segments, MotionSegment::hold(agent, t1, t, p));
    }
}

/// Motions of one rotation, timed from 0. Duration is the longest arc.
pub fn realize_type1(res: &ConversionResult, loop_index: usize, steps: i64, occ: &Occupancy) -> Result<Vec<MotionSegment>> {
    let info = res
        .loops
        .get(loop_index)
        .ok_or_else(|| Error::UnrealizableOp(format!("no geometry for loop {loop_index}")))?;
    let cyc = &res.graph.loops[loop_index];
    let k = cyc.len() as i64;
    let s = steps.rem_euclid(k);
    if s == 0 {
        return Ok(Vec::new());
    }
    let pos = |v: usize| res.graph.vertices[v].position;
    let ang = |v: usize| (pos(v) - info.center).angle();
    let ccw = steps > 0;
    let mut out = Vec::new();
    for (idx, &v) in cyc.iter().enumerate() {
        let Some(agent) = occ.slots[v] else { continue };
        let w = cyc[((idx as i64 + steps).rem_euclid(k)) as usize];
        let a0 = ang(v);
        let delta = if ccw { norm_angle(ang(w) - a0) } else { -norm_angle(a0 - ang(w)) };
        out.push(MotionSegment {
            agent,
            t0: 0.0,
            t1: 0.0,
            from: pos(v),
            to: pos(w),
            shape: PathShape::Arc { center: info.center, radius: info.radius, a0, a1: a0 + delta },
        });
    }
    let dur = out.iter().map(MotionSegment::length).fold(0.0, f64::max);
    for m in &mut out {
        m.t1 = dur;
    }
    Ok(out)
}

/// Motions of one move into the vacancy, timed from 0.
pub fn realize_type2(res: &ConversionResult, idx: &GraphIndex, edge: (usize, usize), occ: &Occupancy) -> Result<Vec<MotionSegment>> {
    let (u, v) = edge;
    let (from, to, agent) = match (occ.slots[u], occ.slots[v]) {
        (Some(a), None) => (u, v, a),
        (None, Some(a)) => (v, u, a),
        (None, None) => return Ok(Vec::new()),
        _ => return Err(Error::UnrealizableOp(format!("edge ({u}, {v}) needs exactly one vacant end"))),
    };
    let pos = |x: usize| res.graph.vertices[x].position;
    // loop edge: arc between consecutive loop slots
    for &(l, k) in &idx.membership[from] {
        let cyc = &res.graph.loops[l];
        let n = cyc.len();
        let info = &res.loops[l];
        let a0 = (pos(from) - info.center).angle();
        let a1 = (pos(to) - info.center).angle();
        let delta = if cyc[(k + 1) % n] == to {
            norm_angle(a1 - a0)
        } else if cyc[(k + n - 1) % n] == to {
            -norm_angle(a0 - a1)
        } else {
            continue;
        };
        let mut m = MotionSegment {
            agent,
            t0: 0.0,
            t1: 0.0,
            from: pos(from),
            to: pos(to),
            shape: PathShape::Arc { center: info.center, radius: info.radius, a0, a1: a0 + delta },
        };
        m.t1 = m.length();
        return Ok(vec![m]);
    }
    let e = res
        .graph
        .inter_edges
        .iter()
        .position(|&(a, b)| edge_key(a, b) == edge_key(u, v))
        .ok_or_else(|| Error::UnrealizableOp(format!("({u}, {v}) is not an edge")))?;
    let mut path = res.inter_edges[e].path.clone();
    if res.graph.inter_edges[e].0 != from {
        path.reverse();
    }
    let mut out = Vec::new();
    let mut t = 0.0;
    for w in path.windows(2) {
        let m = MotionSegment::line(agent, t, w[0], w[1]);
        t = m.t1;
        out.push(m);
    }
    Ok(out)
}

/// Sequential realization of a plan on a converted graph.
pub fn realize_plan(res: &ConversionResult, plan: &Plan) -> Result<TrajectorySet> {
    let idx = res.graph.index();
    let mut occ = plan.start.clone();
    let pos = |x: usize| res.graph.vertices[x].position;
    let mut tracks: BTreeMap<AgentId, Vec<MotionSegment>> = BTreeMap::new();
    for (v, a) in occ.slots.iter().enumerate() {
        if let Some(a) = *a {
            tracks.insert(a, vec![MotionSegment::hold(a, 0.0, 0.0, pos(v))]);
        }
    }
    let mut now = 0.0;
    for op in &plan.ops {
        let moves = match *op {
            SwapOp::TypeI { loop_index, steps } => realize_type1(res, loop_index, steps, &occ)?,
            SwapOp::TypeII { edge } => realize_type2(res, &idx, edge, &occ)?,
        };
        let dur = moves.iter().map(|m| m.t1).fold(0.0, f64::max);
        for m in moves {
            let segs = tracks.get_mut(&m.agent).expect("agent present");
            let last = segs.last().expect("nonempty");
            let (a, t1, p) = (last.agent, last.t1, last.to);
            if t1 < now {
                push_coalesced(segs, MotionSegment::hold(a, t1, now, p));
            }
            push_coalesced(segs, m.shifted(now));
        }
        now += dur;
        crate::planner::apply_op_indexed(&mut occ, &res.graph, &idx, op)?;
    }
    let mut set = TrajectorySet {
        tracks: tracks.into_iter().map(|(agent, segments)| Track { agent, segments }).collect(),
        horizon: now,
    };
    for t in &mut set.tracks {
        pad_until(t, now);
    }
    Ok(set)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ViolationKind {
    Collision { a: AgentId, b: AgentId },
    OutsideFreeSpace { agent: AgentId },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub t0: f64,
    pub t1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub samples: usize,
    pub min_pair_distance: f64,
    /// Smallest clearance of an agent center minus `r`.
    pub min_clearance_margin: f64,
    pub violations: Vec<Violation>,
    /// True when more violations occurred than are listed.
    pub truncated: bool,
}

impl VerificationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

const MAX_LISTED: usize = 1000;

struct Recorder {
    open: HashMap<(u8, AgentId, AgentId), (f64, f64)>,
    done: Vec<Violation>,
    dt: f64,
}

impl Recorder {
    fn hit(&mut self, key: (u8, AgentId, AgentId), t: f64) {
        let dt = self.dt;
        match self.open.get_mut(&key) {
            Some(iv) if t - iv.1 <= 1.5 * dt => iv.1 = t,
            _ => {
                if let Some((t0, t1)) = self.open.insert(key, (t, t)) {
                    self.close(key, t0, t1);
                }
            }
        }
    }

    fn close(&mut self, key: (u8, AgentId, AgentId), t0: f64, t1: f64) {
        let kind = if key.0 == 0 {
            ViolationKind::Collision { a: key.1, b: key.2 }
        } else {
            ViolationKind::OutsideFreeSpace { agent: key.1 }
        };
        self.done.push(Violation { kind, t0, t1 });
    }

    fn finish(mut self) -> (Vec<Violation>, bool) {
        let mut open: Vec<_> = self.open.drain().collect();
        open.sort_by(|x, y| x.0.cmp(&y.0));
        for (k, (t0, t1)) in open {
            self.close(k, t0, t1);
        }
        self.done.sort_by(|x, y| x.t0.total_cmp(&y.t0));
        let truncated = self.done.len() > MAX_LISTED;
        self.done.truncate(MAX_LISTED);
        (self.done, truncated)
    }
}

fn cell_of(p: Point2, cell: f64) -> (i64, i64) {
    ((p.x / cell).floor() as i64, (p.y / cell).floor() as i64)
}

struct Buckets {
    cell: f64,
    map: HashMap<(i64, i64), Vec<usize>>,
}

impl Buckets {
    fn clear(&mut self) {
        self.map.values_mut().for_each(Vec::clear);
    }
}

impl Buckets {
    fn new(cell: f64) -> Self {
        Self { cell, map: HashMap::new() }
    }

    fn insert(&mut self, i: usize, p: Point2) {
        self.map.entry(cell_of(p, self.cell)).or_default().push(i);
    }

    fn near(&self, p: Point2) -> impl Iterator<Item = usize> + '_ {
        let (gx, gy) = cell_of(p, self.cell);
        (-1..=1)
            .flat_map(move |dx| (-1..=1).map(move |dy| (gx + dx, gy + dy)))
            .filter_map(|k| self.map.get(&k))
            .flatten()
            .copied()
    }
}

/// Reports pairwise distances below `2r - tol` and agent disks leaving free
/// space, with `tol = 1e-6 r`.
///
/// Time is cut at every segment boundary. Inside a window the stationary
/// agents are bucketed once and only the moving ones are sampled every `dt`,
/// against each other and against the buckets. Every boundary instant is
/// checked for all pairs.
pub fn verify_trajectories(ts: &TrajectorySet, w: &Workspace, r: f64, dt: f64) -> VerificationReport {
    let tol = 1e-6 * r;
    let n = ts.tracks.len();
    let cell = 2.0 * r;
    let mut rec = Recorder { open: HashMap::new(), done: Vec::new(), dt };
    let mut min_pair = f64::INFINITY;
    let mut min_margin = f64::INFINITY;
    let mut samples = 0usize;

    let mut cuts: Vec<f64> = ts
        .tracks
        .iter()
        .flat_map(|t| t.segments.iter().flat_map(|s| [s.t0, s.t1]))
        .chain([0.0, ts.horizon])
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);

    let agent = |i: usize| ts.tracks[i].agent;
    let mut pair = |i: usize, j: usize, d: f64, t: f64, rec: &mut Recorder| {
        min_pair = min_pair.min(d);
        if d < 2.0 * r - tol {
            let (a, b) = (agent(i), agent(j));
            rec.hit((0, a.min(b), a.max(b)), t);
        }
    };
    let mut free = |i: usize, p: Point2, t: f64, rec: &mut Recorder| {
        let c = clearance(p, w).unwrap_or(f64::NEG_INFINITY);
        min_margin = min_margin.min(c - r);
        if c < r - tol {
            rec.hit((1, agent(i), agent(i)), t);
        }
    };

    let mut cursor = vec![0usize; n];
    let seg_at = |i: usize, t: f64, cursor: &mut [usize]| {
        let segs = &ts.tracks[i].segments;
        while cursor[i] + 1 < segs.len() && segs[cursor[i]].t1 <= t {
            cursor[i] += 1;
        }
        &segs[cursor[i]]
    };
    let mut pts = vec![Point2::new(0.0, 0.0); n];
    let mut all = Buckets::new(cell);
    let mut still = Buckets::new(cell);
    let mut moving = Buckets::new(cell);
    for (c, &a) in cuts.iter().enumerate() {
        // every agent at the boundary instant
        samples += 1;
        all.clear();
        for i in 0..n {
            pts[i] = ts.tracks[i].position(a);
            free(i, pts[i], a, &mut rec);
            for j in all.near(pts[i]) {
                pair(j, i, pts[i].dist(pts[j]), a, &mut rec);
            }
            all.insert(i, pts[i]);
        }
        let Some(&b) = cuts.get(c + 1) else { break };
        let mid = 0.5 * (a + b);
        still.clear();
        let mut movers: Vec<&MotionSegment> = Vec::new();
        let mut mover_ids = Vec::new();
        for i in 0..n {
            let s = seg_at(i, mid, &mut cursor);
            if s.is_hold() || s.t1 <= a || s.t0 >= b {
                pts[i] = s.position(mid);
                still.insert(i, pts[i]);
            } else {
                movers.push(s);
                mover_ids.push(i);
            }
        }
        if movers.is_empty() {
            continue;
        }
        let k_max = ((b - a) / dt).ceil() as usize;
        for k in 1..k_max {
            let t = a + k as f64 * dt;
            samples += 1;
            moving.clear();
            for (m, (s, &i)) in movers.iter().zip(&mover_ids).enumerate() {
                let p = s.position(t);
                pts[i] = p;
                free(i, p, t, &mut rec);
                for j in still.near(p) {
                    pair(j, i, p.dist(pts[j]), t, &mut rec);
                }
                for mj in moving.near(p) {
                    let j = mover_ids[mj];
                    pair(j, i, p.dist(pts[j]), t, &mut rec);
                }
                moving.insert(m, p);
            }
        }
    }
    let (violations, truncated) = rec.finish();
    VerificationReport { samples, min_pair_distance: min_pair, min_clearance_margin: min_margin, violations, truncated }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conversion::convert_single_circle;
    use crate::geometry::Disk;
    use crate::planner::{execute, plan_permutation};
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn single() -> (ConversionResult, Workspace) {
        let res = convert_single_circle(Disk::new(Point2::new(10.0, 10.0), 10.0), 1.0).unwrap();
        (res, Workspace::rectangle(20.0, 20.0))
    }

    fn full_occupancy(n: usize, vacant: usize) -> Occupancy {
        Occupancy::new((0..n).map(|v| (v != vacant).then_some(v)).collect())
    }

    #[test]
    fn zero_rotation_is_empty() {
        let (res, _) = single();
        let occ = full_occupancy(res.num_vertices(), 0);
        assert!(realize_type1(&res, 0, 0, &occ).unwrap().is_empty());
        assert!(realize_type1(&res, 0, 6, &occ).unwrap().is_empty());
    }

    #[test]
    fn layer_one_rotation_is_six_sixty_degree_arcs() {
        let (res, _) = single();
        let occ = full_occupancy(res.num_vertices(), res.num_vertices() - 1);
        let moves = realize_type1(&res, 0, 1, &occ).unwrap();
        assert_eq!(moves.len(), 6);
        for m in &moves {
            let PathShape::Arc { a0, a1, .. } = m.shape else { panic!("arc expected") };
            assert!(((a1 - a0) - std::f64::consts::PI / 3.0).abs() < 1e-9);
            assert!(m.position(m.t1).dist(m.to) < 1e-12);
        }
    }

    #[test]
    fn radial_edge_is_one_line() {
        let (res, _) = single();
        let (u, v) = res.graph.inter_edges[0];
        let occ = full_occupancy(res.num_vertices(), v);
        let moves = realize_type2(&res, &res.graph.index(), (u, v), &occ).unwrap();
        assert_eq!(moves.len(), 1);
        assert_eq!(moves[0].shape, PathShape::Line);
        assert!((moves[0].t1 - 2.0).abs() < 1e-9);
    }

    #[test]
    fn empty_plan_holds() {
        let (res, w) = single();
        let occ = full_occupancy(res.num_vertices(), 0);
        let plan = Plan { ops: vec![], start: occ.clone(), goal: occ };
        let ts = realize_plan(&res, &plan).unwrap();
        assert_eq!(ts.horizon, 0.0);
        assert!(verify_trajectories(&ts, &w, 1.0, 0.05).is_clean());
    }

    #[test]
    fn random_permutation_is_collision_free() {
        let (res, w) = single();
        let n = res.num_vertices();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let start = full_occupancy(n, 5);
        let mut goal_slots = start.slots.clone();
        goal_slots.shuffle(&mut rng);
        let goal = Occupancy::new(goal_slots);
        let plan = plan_permutation(&res.graph, &start, &goal).unwrap();
        assert_eq!(execute(&res.graph, &plan.start, &plan.ops).unwrap(), goal);
        let ts = realize_plan(&res, &plan).unwrap();
        let rep = verify_trajectories(&ts, &w, 1.0, 0.05);
        assert!(rep.is_clean(), "{:?}", &rep.violations[..rep.violations.len().min(5)]);
        assert!(rep.min_pair_distance >= 2.0 - 1e-6);
        for (v, a) in goal.slots.iter().enumerate() {
            if let Some(a) = a {
                let t = ts.tracks.iter().find(|t| t.agent == *a).unwrap();
                assert_eq!(t.end(), res.graph.vertices[v].position);
            }
        }
        let dur: f64 = ts.tracks[0].segments.iter().map(|s| s.t1 - s.t0).sum();
        assert!((dur - ts.horizon).abs() < 1e-9);
    }

    fn permute_and_verify(res: &ConversionResult, w: &Workspace, seed: u64) {
        let n = res.num_vertices();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut slots: Vec<Option<usize>> = (0..n - 1).map(Some).collect();
        slots.push(None);
        slots.shuffle(&mut rng);
        let start = Occupancy::new(slots.clone());
        slots.shuffle(&mut rng);
        let goal = Occupancy::new(slots);
        let plan = plan_permutation(&res.graph, &start, &goal).unwrap();
        let ts = realize_plan(res, &plan).unwrap();
        let rep = verify_trajectories(&ts, w, res.agent_radius, 0.05);
        assert!(rep.is_clean(), "seed {seed}: {:?}", &rep.violations[..rep.violations.len().min(5)]);
        assert_eq!(ts.final_positions().len(), n - 1);
    }

    #[test]
    fn converted_workspaces_realize_cleanly() {
        use crate::conversion::{greedy_convert, EdgeKind, GreedyParams};
        use crate::geometry::{Polygon, Rect};
        let wide = Workspace::rectangle(40.0, 20.0);
        let res = greedy_convert(&wide, &GreedyParams::new(1.0), &[]).unwrap();
        assert!(res.loops.len() > 3);
        permute_and_verify(&res, &wide, 11);

        let top = Polygon::rectangle(Point2::new(14.0, 9.0), Point2::new(24.0, 14.0));
        let bottom = Polygon::rectangle(Point2::new(14.0, 0.0), Point2::new(24.0, 5.0));
        let dumbbell = Workspace::new(Rect::new(Point2::new(0.0, 0.0), Point2::new(38.0, 14.0)), vec![top, bottom]).unwrap();
        let res = greedy_convert(&dumbbell, &GreedyParams::new(1.0), &[]).unwrap();
        assert!(res.inter_edges.iter().any(|e| e.kind == EdgeKind::SkeletonPath));
        permute_and_verify(&res, &dumbbell, 12);
    }

    #[test]
    fn crossing_agents_are_flagged() {
        let w = Workspace::rectangle(10.0, 10.0);
        let a = MotionSegment::line(0, 0.0, Point2::new(2.0, 5.0), Point2::new(8.0, 5.0));
        let b = MotionSegment::line(1, 0.0, Point2::new(8.0, 5.0), Point2::new(2.0, 5.0));
        let ts = TrajectorySet {
            tracks: vec![Track { agent: 0, segments: vec![a] }, Track { agent: 1, segments: vec![b] }],
            horizon: 6.0,
        };
        let rep = verify_trajectories(&ts, &w, 1.0, 0.05);
        assert_eq!(rep.violations.len(), 1);
        let v = &rep.violations[0];
        assert!(v.t0 > 1.0 && v.t1 < 5.0 && v.t0 < 3.0 && v.t1 > 3.0);

        let still = TrajectorySet::stationary(&BTreeMap::from([(0, Point2::new(5.0, 5.0))]));
        assert!(verify_trajectories(&still, &w, 1.0, 0.05).is_clean());
    }

    #[test]
    fn reversal_round_trips() {
        let (res, _) = single();
        let occ = full_occupancy(res.num_vertices(), 0);
        let plan = Plan { ops: vec![SwapOp::TypeI { loop_index: 1, steps: 2 }], start: occ.clone(), goal: occ };
        let ts = realize_plan(&res, &plan).unwrap();
        let back = ts.reversed();
        assert_eq!(back.initial_positions(), ts.final_positions());
        assert_eq!(back.final_positions(), ts.initial_positions());
        for t in [0.0, 0.3, 1.7, ts.horizon] {
            for (x, y) in ts.tracks.iter().zip(&back.tracks) {
                assert!(x.position(t).dist(y.position(ts.horizon - t)) < 1e-9);
            }
        }
    }
}
