//! Turning inscribed circles into a swap graph.
//!
//! Every circle hosts concentric layers of agent slots; layer `i` has its
//! centerline at radius `2ri`. Construction keeps one geometric rule that
//! makes every loop rotation safe: a vertex that is not on loop `L` stays at
//! least `2r` from the centerline of `L`. Concretely, the slots a circle owns
//! alone lie outside the outermost loop of every other circle by `2r`, and
//! the only vertices inside another circle are shared ones, placed on the
//! intersection of two centerlines.
//!
//! Consecutive layers of one circle are joined by a radial edge. All layers
//! keep a slot at the same port angle, so these edges are radial segments of
//! length `2r`, and the neighbouring slots on each layer keep clear of the
//! capsule swept along them.

use serde::{Deserialize, Serialize};

use crate::capacity::{classify_pair, fitting_layer_index, slot_angle, ArcSet, LayerRef, PairClass};
use crate::error::{Error, Result};
use crate::geometry::{capsule_free, circle_intersections, norm_angle, Capsule, Disk, Point2, Segment, Workspace};
use crate::medial_axis::{extract_medial_axis, sample_circles, skeleton_path, SkeletonGraph};
use crate::swap_graph::{validate, SwapGraph, Vertex, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeKind {
    /// Radial edge between consecutive layers of one circle.
    IntraCircle,
    /// Straight edge between the outer loops of two nearby circles.
    CaseII,
    /// Edge following a skeleton path between two circles.
    SkeletonPath,
}

/// Motion geometry of one inter-loop edge: the polyline runs from
/// `graph.inter_edges[k].0` to `graph.inter_edges[k].1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterEdge {
    pub kind: EdgeKind,
    pub path: Vec<Point2>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoopInfo {
    pub circle: usize,
    pub layer: usize,
    pub center: Point2,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConversionResult {
    pub graph: SwapGraph,
    pub circles: Vec<Disk>,
    pub agent_radius: f64,
    pub loops: Vec<LoopInfo>,
    /// Layer of each vertex; shared vertices report the first loop listing them.
    pub layer_of_vertex: Vec<LayerRef>,
    /// Parallel to `graph.inter_edges`.
    pub inter_edges: Vec<InterEdge>,
}

impl ConversionResult {
    pub fn empty(r: f64) -> Self {
        Self {
            graph: SwapGraph { vertices: Vec::new(), loops: Vec::new(), inter_edges: Vec::new() },
            circles: Vec::new(),
            agent_radius: r,
            loops: Vec::new(),
            layer_of_vertex: Vec::new(),
            inter_edges: Vec::new(),
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.graph.vertices.len()
    }
}

fn geo_tol(r: f64) -> f64 {
    1e-9 * r
}

/// Angular half-width kept free around the port slot of layer `i`.
fn port_half(i: usize) -> f64 {
    if i == 1 {
        slot_angle(1)
    } else {
        (1.0 / i as f64).asin()
    }
}

/// Bucket grid over vertex positions for neighbourhood queries.
struct PointHash {
    cell: f64,
    map: std::collections::HashMap<(i64, i64), Vec<usize>>,
}

impl PointHash {
    fn new(cell: f64, pts: &[Point2]) -> Self {
        let mut h = Self { cell, map: Default::default() };
        for (k, &p) in pts.iter().enumerate() {
            h.map.entry(h.key(p)).or_default().push(k);
        }
        h
    }

    fn key(&self, p: Point2) -> (i64, i64) {
        ((p.x / self.cell).floor() as i64, (p.y / self.cell).floor() as i64)
    }

    /// Indices of points that may lie within `reach` of segment `ab`.
    fn near_segment(&self, a: Point2, b: Point2, reach: f64) -> Vec<usize> {
        let lo = self.key(Point2::new(a.x.min(b.x) - reach, a.y.min(b.y) - reach));
        let hi = self.key(Point2::new(a.x.max(b.x) + reach, a.y.max(b.y) + reach));
        let mut out = Vec::new();
        for i in lo.0..=hi.0 {
            for j in lo.1..=hi.1 {
                if let Some(v) = self.map.get(&(i, j)) {
                    out.extend_from_slice(v);
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// Checks the two standing assumptions on a circle set: no center lies in
/// another circle and no three circles share a point.
pub fn check_circle_assumptions(circles: &[Disk], r: f64) -> Result<()> {
    let tol = geo_tol(r);
    let k = circles.len();
    for a in 0..k {
        for b in (a + 1)..k {
            let d = circles[a].center.dist(circles[b].center);
            if d < circles[a].radius.max(circles[b].radius) - tol {
                return Err(Error::PreconditionViolated(format!("center of circle {a} or {b} lies inside the other")));
            }
        }
    }
    let meets = |a: usize, b: usize| circles[a].center.dist(circles[b].center) < circles[a].radius + circles[b].radius - tol;
    for a in 0..k {
        for b in (a + 1)..k {
            if !meets(a, b) {
                continue;
            }
            for c in (b + 1)..k {
                if !meets(a, c) || !meets(b, c) {
                    continue;
                }
                let trio = [circles[a], circles[b], circles[c]];
                let mut cands: Vec<Point2> = trio.iter().map(|d| d.center).collect();
                for (x, y) in [(0, 1), (0, 2), (1, 2)] {
                    cands.extend(circle_intersections(trio[x].center, trio[x].radius, trio[y].center, trio[y].radius));
                }
                // a nonempty intersection contains a center or a pairwise boundary crossing
                let common = cands.iter().any(|&p| trio.iter().all(|d| p.dist(d.center) <= d.radius + tol));
                if common {
                    return Err(Error::PreconditionViolated(format!("circles {a}, {b} and {c} share a point")));
                }
            }
        }
    }
    Ok(())
}

struct Shared {
    pos: Point2,
    a: usize,
    i: usize,
    b: usize,
    j: usize,
}

enum Attempt {
    Done(Option<ConversionResult>),
    /// The lowest layer of this circle holds fewer than three slots.
    RaiseLowest(usize),
}

struct Builder<'a> {
    circles: &'a [Disk],
    r: f64,
    w: Option<&'a Workspace>,
    skeleton: Option<&'a SkeletonGraph>,
    top: Vec<usize>,
}

impl<'a> Builder<'a> {
    fn keep_out(&self, b: usize) -> f64 {
        2.0 * self.r * (self.top[b] as f64 + 1.0)
    }

    fn wedges(&self, a: usize, i: usize, set: &mut ArcSet) {
        let ca = self.circles[a].center;
        let rho = 2.0 * self.r * i as f64;
        for (b, cb) in self.circles.iter().enumerate() {
            if b == a {
                continue;
            }
            let d = ca.dist(cb.center);
            let reach = self.keep_out(b);
            let cos = (d * d + rho * rho - reach * reach) / (2.0 * rho * d);
            set.add_wedge((cb.center - ca).angle(), cos);
        }
    }

    fn shared_points(&self, lo: &[usize]) -> Vec<Shared> {
        let tol = geo_tol(self.r);
        let k = self.circles.len();
        let mut out: Vec<Shared> = Vec::new();
        for a in 0..k {
            for b in (a + 1)..k {
                let (ca, cb) = (self.circles[a], self.circles[b]);
                let d = ca.center.dist(cb.center);
                let mut pairs: Vec<(usize, usize)> = (lo[a]..=self.top[a])
                    .flat_map(|i| (lo[b]..=self.top[b]).map(move |j| (i, j)))
                    .collect();
                pairs.sort_by_key(|&(i, j)| (std::cmp::Reverse(i + j), std::cmp::Reverse(i)));
                for (i, j) in pairs {
                    let cls = classify_pair(&LayerRef::new(ca, i), &LayerRef::new(cb, j), d, self.r);
                    if !matches!(cls, Ok(PairClass::CaseIII | PairClass::CaseIV)) {
                        continue;
                    }
                    let pts = circle_intersections(ca.center, 2.0 * self.r * i as f64, cb.center, 2.0 * self.r * j as f64);
                    if pts.len() != 2 || pts[0].dist(pts[1]) < 2.0 * self.r - tol {
                        continue;
                    }
                    let ok = pts.iter().all(|&p| {
                        (0..k).all(|c| c == a || c == b || p.dist(self.circles[c].center) >= self.keep_out(c) - tol)
                            && out.iter().all(|s| s.pos.dist(p) >= 2.0 * self.r - tol)
                    });
                    if ok {
                        for p in pts {
                            out.push(Shared { pos: p, a, i, b, j });
                        }
                    }
                }
            }
        }
        out
    }

    /// Shared points on layer `i` of circle `a`.
    fn shared_on<'s>(&self, shared: &'s [Shared], a: usize, i: usize) -> impl Iterator<Item = (usize, &'s Shared)> {
        shared.iter().enumerate().filter(move |(_, s)| (s.a == a && s.i == i) || (s.b == a && s.j == i))
    }

    fn port_angle(&self, a: usize, lo: usize, shared: &[Shared]) -> Option<f64> {
        let ca = self.circles[a].center;
        let mut blocked = ArcSet::default();
        for i in lo..=self.top[a] {
            self.wedges(a, i, &mut blocked);
            let h = port_half(i);
            for (_, s) in self.shared_on(shared, a, i) {
                blocked.add((s.pos - ca).angle() - h, 2.0 * h);
            }
        }
        if blocked.is_empty() {
            return Some(0.0);
        }
        let gaps = blocked.gaps();
        let best = gaps.iter().fold(None::<crate::capacity::Arc>, |acc, g| match acc {
            Some(b) if b.len >= g.len => Some(b),
            _ => Some(*g),
        })?;
        Some(norm_angle(best.start + best.len / 2.0))
    }

    /// Angles of the slots circle `a` owns alone on layer `i`, port first.
    fn own_slots(&self, a: usize, i: usize, theta: f64, shared: &[Shared]) -> Vec<f64> {
        let ca = self.circles[a].center;
        let phi = slot_angle(i);
        let mut blocked = ArcSet::default();
        self.wedges(a, i, &mut blocked);
        let h = port_half(i);
        blocked.add(theta - h, 2.0 * h);
        for (_, s) in self.shared_on(shared, a, i) {
            blocked.add((s.pos - ca).angle() - phi, 2.0 * phi);
        }
        let mut out = vec![theta];
        let merged = blocked.merged();
        let gaps = blocked.gaps();
        for (k, g) in gaps.iter().enumerate() {
            // the gap follows merged[k]; a thin blocked arc leaves the slots
            // on either side too close, so the gap gives up the difference
            let before = merged[k].len;
            let (mut start, mut len) = (g.start, g.len);
            if before < phi {
                start += phi - before;
                len -= phi - before;
            }
            if len < 0.0 {
                continue;
            }
            let n = (len / phi + 1e-9).floor() as usize + 1;
            if n == 1 {
                out.push(norm_angle(start + len / 2.0));
            } else {
                let step = len / (n - 1) as f64;
                out.extend((0..n).map(|t| norm_angle(start + step * t as f64)));
            }
        }
        out
    }

    fn segment_clear(&self, pts: &[Point2], hash: &PointHash, path: &[Point2], skip: &[usize]) -> bool {
        let r = self.r;
        let tol = geo_tol(r);
        for s in path.windows(2) {
            if let Some(w) = self.w {
                if !capsule_free(&Capsule::new(s[0], s[1], r), w, &[]) {
                    return false;
                }
            }
            let seg = Segment::new(s[0], s[1]);
            for k in hash.near_segment(s[0], s[1], 2.0 * r) {
                if !skip.contains(&k) && seg.dist_to_point(pts[k]) < 2.0 * r - tol {
                    return false;
                }
            }
        }
        true
    }

    fn attempt(&self, lo: &[usize]) -> Attempt {
        let k = self.circles.len();
        let r = self.r;
        let shared = self.shared_points(lo);

        let mut positions: Vec<Point2> = Vec::new();
        let mut layer_of_vertex: Vec<LayerRef> = Vec::new();
        let mut shared_id: Vec<Option<VertexId>> = vec![None; shared.len()];
        let mut loops: Vec<Vec<VertexId>> = Vec::new();
        let mut loop_info: Vec<LoopInfo> = Vec::new();
        let mut ports: Vec<Vec<VertexId>> = vec![Vec::new(); k];
        let mut outer_own: Vec<Vec<VertexId>> = vec![Vec::new(); k];

        for a in 0..k {
            let ca = self.circles[a];
            let Some(theta) = self.port_angle(a, lo[a], &shared) else {
                return Attempt::Done(None);
            };
            for i in lo[a]..=self.top[a] {
                let rho = 2.0 * r * i as f64;
                let layer = LayerRef::new(ca, i);
                // (offset from port, vertex id)
                let mut members: Vec<(f64, VertexId)> = Vec::new();
                for (n, ang) in self.own_slots(a, i, theta, &shared).into_iter().enumerate() {
                    let v = positions.len();
                    positions.push(Point2::polar(ca.center, rho, ang));
                    layer_of_vertex.push(layer);
                    if n == 0 {
                        ports[a].push(v);
                    }
                    if i == self.top[a] {
                        outer_own[a].push(v);
                    }
                    members.push((norm_angle(ang - theta), v));
                }
                for (s_idx, s) in self.shared_on(&shared, a, i) {
                    let v = *shared_id[s_idx].get_or_insert_with(|| {
                        positions.push(s.pos);
                        layer_of_vertex.push(layer);
                        positions.len() - 1
                    });
                    members.push((norm_angle((s.pos - ca.center).angle() - theta), v));
                }
                if members.len() < 3 {
                    return if i == lo[a] && i < self.top[a] { Attempt::RaiseLowest(a) } else { Attempt::Done(None) };
                }
                members.sort_by(|x, y| x.0.total_cmp(&y.0));
                loops.push(members.into_iter().map(|(_, v)| v).collect());
                loop_info.push(LoopInfo { circle: a, layer: i, center: ca.center, radius: rho });
            }
        }

        let tol = geo_tol(r);
        let hash = PointHash::new(2.0 * r, &positions);
        // pairwise spacing of all slots
        for (u, &p) in positions.iter().enumerate() {
            for v in hash.near_segment(p, p, 2.0 * r) {
                if v > u && p.dist(positions[v]) < 2.0 * r - tol {
                    return Attempt::Done(None);
                }
            }
        }

        let mut inter: Vec<(VertexId, VertexId)> = Vec::new();
        let mut inter_geom: Vec<InterEdge> = Vec::new();
        for a in 0..k {
            for t in 1..ports[a].len() {
                let (u, v) = (ports[a][t - 1], ports[a][t]);
                let path = vec![positions[u], positions[v]];
                if !self.segment_clear(&positions, &hash, &path, &[u, v]) {
                    return Attempt::Done(None);
                }
                inter.push((u, v));
                inter_geom.push(InterEdge { kind: EdgeKind::IntraCircle, path });
            }
        }

        let mut uf: Vec<usize> = (0..k).collect();
        fn find(uf: &mut [usize], x: usize) -> usize {
            let mut x = x;
            while uf[x] != x {
                uf[x] = uf[uf[x]];
                x = uf[x];
            }
            x
        }
        let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
        for a in 0..k {
            for b in (a + 1)..k {
                pairs.push((self.circles[a].center.dist(self.circles[b].center), a, b));
            }
        }
        pairs.sort_by(|x, y| x.0.total_cmp(&y.0).then((x.1, x.2).cmp(&(y.1, y.2))));
        for &(d, a, b) in &pairs {
            if shared.iter().any(|s| (s.a, s.b) == (a, b)) {
                let (ra, rb) = (find(&mut uf, a), find(&mut uf, b));
                uf[ra] = rb;
                continue;
            }
            let outer_a = LayerRef::new(self.circles[a], self.top[a]);
            let outer_b = LayerRef::new(self.circles[b], self.top[b]);
            let close = matches!(
                classify_pair(&outer_a, &outer_b, d, r),
                Ok(PairClass::CaseII | PairClass::CaseIII | PairClass::CaseIV)
            );
            let mut linked = false;
            if close {
                if let Some((u, v)) = self.direct_link(&positions, &hash, &outer_own[a], &outer_own[b]) {
                    inter.push((u, v));
                    inter_geom.push(InterEdge { kind: EdgeKind::CaseII, path: vec![positions[u], positions[v]] });
                    linked = true;
                }
            }
            if !linked && find(&mut uf, a) != find(&mut uf, b) {
                if let Some((u, v, path)) = self.skeleton_link(&positions, &hash, a, b, &outer_own[a], &outer_own[b]) {
                    inter.push((u, v));
                    inter_geom.push(InterEdge { kind: EdgeKind::SkeletonPath, path });
                    linked = true;
                }
            }
            if linked {
                let (ra, rb) = (find(&mut uf, a), find(&mut uf, b));
                uf[ra] = rb;
            }
        }
        let root = find(&mut uf, 0);
        if (0..k).any(|a| find(&mut uf, a) != root) {
            return Attempt::Done(None);
        }

        let graph = SwapGraph {
            vertices: positions.iter().enumerate().map(|(id, &position)| Vertex { id, position }).collect(),
            loops,
            inter_edges: inter,
        };
        if !validate(&graph).is_empty() {
            return Attempt::Done(None);
        }
        Attempt::Done(Some(ConversionResult {
            graph,
            circles: self.circles.to_vec(),
            agent_radius: r,
            loops: loop_info,
            layer_of_vertex,
            inter_edges: inter_geom,
        }))
    }

    fn direct_link(
        &self,
        pts: &[Point2],
        hash: &PointHash,
        ua: &[VertexId],
        ub: &[VertexId],
    ) -> Option<(VertexId, VertexId)> {
        let mut cands: Vec<(f64, VertexId, VertexId)> =
            ua.iter().flat_map(|&u| ub.iter().map(move |&v| (pts[u].dist(pts[v]), u, v))).collect();
        cands.sort_by(|x, y| x.0.total_cmp(&y.0).then((x.1, x.2).cmp(&(y.1, y.2))));
        cands
            .into_iter()
            .take(16)
            .find(|&(_, u, v)| self.segment_clear(pts, hash, &[pts[u], pts[v]], &[u, v]))
            .map(|(_, u, v)| (u, v))
    }

    fn skeleton_link(
        &self,
        pts: &[Point2],
        hash: &PointHash,
        a: usize,
        b: usize,
        ua: &[VertexId],
        ub: &[VertexId],
    ) -> Option<(VertexId, VertexId, Vec<Point2>)> {
        let (s, w) = (self.skeleton?, self.w?);
        let r = self.r;
        let tau = skeleton_path(s, self.circles, a, b, r, w)?;
        let (ca, cb) = (self.circles[a].center, self.circles[b].center);
        let ext_a = 2.0 * r * self.top[a] as f64 + r;
        let ext_b = 2.0 * r * self.top[b] as f64 + r;
        let middle: Vec<Point2> = tau.waypoints[1..tau.waypoints.len() - 1]
            .iter()
            .copied()
            .filter(|p| p.dist(ca) > ext_a && p.dist(cb) > ext_b)
            .collect();
        let first = middle.first().copied().unwrap_or(cb);
        let last = middle.last().copied().unwrap_or(ca);
        let near = |list: &[VertexId], to: Point2| {
            let mut l: Vec<VertexId> = list.to_vec();
            l.sort_by(|&x, &y| pts[x].dist(to).total_cmp(&pts[y].dist(to)).then(x.cmp(&y)));
            l.truncate(6);
            l
        };
        for u in near(ua, first) {
            for v in near(ub, last) {
                let mut path = vec![pts[u]];
                path.extend_from_slice(&middle);
                path.push(pts[v]);
                if self.segment_clear(pts, hash, &path, &[u, v]) {
                    return Some((u, v, path));
                }
            }
        }
        None
    }
}

/// Builds a swap graph from a circle set. `skeleton` and `w` enable
/// skeleton-path edges and obstacle checks on edge motions.
///
/// Returns `Ok(None)` when the circles do not yield a valid swap graph.
pub fn convert_circles(
    circles: &[Disk],
    skeleton: Option<&SkeletonGraph>,
    r: f64,
    w: Option<&Workspace>,
) -> Result<Option<ConversionResult>> {
    check_circle_assumptions(circles, r)?;
    if circles.is_empty() {
        return Ok(None);
    }
    let top: Vec<usize> = circles.iter().map(|c| fitting_layer_index(c.radius, r)).collect();
    if top.iter().any(|&m| m == 0) {
        return Ok(None);
    }
    let b = Builder { circles, r, w, skeleton, top };
    let mut lo = vec![1; circles.len()];
    loop {
        match b.attempt(&lo) {
            Attempt::Done(res) => return Ok(res),
            Attempt::RaiseLowest(a) => lo[a] += 1,
        }
    }
}

pub fn convert_single_circle(c: Disk, r: f64) -> Option<ConversionResult> {
    convert_circles(&[c], None, r, None).ok().flatten()
}

pub fn convert_two_circles(a: Disk, b: Disk, r: f64) -> Result<Option<ConversionResult>> {
    convert_circles(&[a, b], None, r, None)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GreedyParams {
    pub agent_radius: f64,
    pub epsilon: f64,
    pub grid_resolution: f64,
    pub k_max: usize,
    /// Stop once the graph has at least this many vertices.
    pub threshold: Option<usize>,
}

impl GreedyParams {
    pub fn new(r: f64) -> Self {
        Self { agent_radius: r, epsilon: 0.5 * r, grid_resolution: 0.25 * r, k_max: 200, threshold: None }
    }
}

/// Greedy conversion of a workspace. Circles are tried by descending radius,
/// those containing a start position first; each is kept when the enlarged
/// set still converts and the vertex count grows.
pub fn greedy_convert(w: &Workspace, params: &GreedyParams, starts: &[Point2]) -> Result<ConversionResult> {
    let r = params.agent_radius;
    let skeleton = match extract_medial_axis(w, params.grid_resolution) {
        Ok(s) => s,
        Err(Error::EmptyFreeSpace(_)) => return Ok(ConversionResult::empty(r)),
        Err(e) => return Err(e),
    };
    Ok(greedy_convert_with(w, &skeleton, params, starts))
}

pub fn greedy_convert_with(w: &Workspace, skeleton: &SkeletonGraph, params: &GreedyParams, starts: &[Point2]) -> ConversionResult {
    let r = params.agent_radius;
    let sampled = sample_circles(skeleton, params.epsilon, params.k_max, r);
    let (mut order, rest): (Vec<Disk>, Vec<Disk>) =
        sampled.into_iter().partition(|c| starts.iter().any(|&p| p.dist(c.center) < c.radius));
    order.extend(rest);

    let mut accepted: Vec<Disk> = Vec::new();
    let mut best = ConversionResult::empty(r);
    // circles that could not stand alone, kept for pairing while nothing is accepted
    let mut lonely: Vec<Disk> = Vec::new();
    let reached = |res: &ConversionResult| params.threshold.is_some_and(|t| res.num_vertices() >= t);
    for c in order {
        if reached(&best) {
            break;
        }
        let mut trials: Vec<Vec<Disk>> = Vec::new();
        let mut with_c = accepted.clone();
        with_c.push(c);
        trials.push(with_c);
        if accepted.is_empty() {
            trials.extend(lonely.iter().map(|&p| vec![p, c]));
        }
        let mut taken = false;
        for trial in trials {
            if check_circle_assumptions(&trial, r).is_err() {
                continue;
            }
            if let Ok(Some(res)) = convert_circles(&trial, Some(skeleton), r, Some(w)) {
                if res.num_vertices() > best.num_vertices() {
                    accepted = trial;
                    best = res;
                    taken = true;
                    break;
                }
            }
        }
        if !taken && accepted.is_empty() {
            lonely.push(c);
        }
    }
    best
}

/// Minimum clearance `r`-disk check, pairwise spacing and loop-centerline
/// separation of a conversion result. Returns the list of violations.
pub fn check_conditions(res: &ConversionResult, w: Option<&Workspace>) -> Vec<String> {
    let r = res.agent_radius;
    let tol = 1e-7 * r;
    let pts: Vec<Point2> = res.graph.vertices.iter().map(|v| v.position).collect();
    let mut out = Vec::new();
    if let Some(w) = w {
        for (k, &p) in pts.iter().enumerate() {
            if !crate::geometry::disk_in_free_space(&Disk::new(p, r), w) {
                out.push(format!("vertex {k} leaves free space"));
            }
        }
    }
    let hash = PointHash::new(2.0 * r, &pts);
    for (u, &p) in pts.iter().enumerate() {
        for v in hash.near_segment(p, p, 2.0 * r) {
            if v > u && p.dist(pts[v]) < 2.0 * r - tol {
                out.push(format!("vertices {u} and {v} closer than 2r"));
            }
        }
    }
    for (l, info) in res.loops.iter().enumerate() {
        let members: std::collections::BTreeSet<_> = res.graph.loops[l].iter().copied().collect();
        for (k, &p) in pts.iter().enumerate() {
            if members.contains(&k) {
                if (p.dist(info.center) - info.radius).abs() > tol {
                    out.push(format!("vertex {k} is off the centerline of loop {l}"));
                }
            } else if (p.dist(info.center) - info.radius).abs() < 2.0 * r - tol {
                out.push(format!("vertex {k} is within 2r of the centerline of loop {l}"));
            }
        }
        if let Some(w) = w {
            let room = crate::geometry::clearance(info.center, w).unwrap_or(0.0);
            if info.radius + r > room + tol {
                out.push(format!("loop {l} sweeps outside free space"));
            }
        }
    }
    for (e, (&(u, v), geom)) in res.graph.inter_edges.iter().zip(&res.inter_edges).enumerate() {
        if geom.path.first() != Some(&pts[u]) || geom.path.last() != Some(&pts[v]) {
            out.push(format!("inter edge {e} path does not join its endpoints"));
        }
        for s in geom.path.windows(2) {
            if let Some(w) = w {
                if !capsule_free(&Capsule::new(s[0], s[1], r), w, &[]) {
                    out.push(format!("inter edge {e} path leaves free space"));
                }
            }
            let seg = Segment::new(s[0], s[1]);
            for (k, &p) in pts.iter().enumerate() {
                if k != u && k != v && seg.dist_to_point(p) < 2.0 * r - tol {
                    out.push(format!("inter edge {e} path passes within 2r of vertex {k}"));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::placeable_loop_capacity;
    use crate::geometry::{Polygon, Rect};

    fn disk(x: f64, y: f64, rad: f64) -> Disk {
        Disk::new(Point2::new(x, y), rad)
    }

    fn layer_sizes(res: &ConversionResult) -> Vec<usize> {
        res.graph.loops.iter().map(Vec::len).collect()
    }

    #[test]
    fn single_circle() {
        let r = 1.0;
        assert!(convert_single_circle(disk(0.0, 0.0, 1.9), r).is_none());
        // a second layer at radius 4r does not fit in a 3r circle
        assert!(convert_single_circle(disk(0.0, 0.0, 3.0), r).is_none());
        let res = convert_single_circle(disk(0.0, 0.0, 5.0), r).unwrap();
        assert_eq!(layer_sizes(&res), vec![6, 12]);
        assert_eq!(res.graph.inter_edges.len(), 1);
        assert!(check_conditions(&res, None).is_empty(), "{:?}", check_conditions(&res, None));

        let big = convert_single_circle(disk(3.0, -2.0, 10.0), r).unwrap();
        let expected: Vec<usize> = (1..=4).map(placeable_loop_capacity).collect();
        assert_eq!(layer_sizes(&big), expected);
        assert_eq!(big.num_vertices(), 61);
        assert_eq!(big.graph.inter_edges.len(), 3);
        assert!(check_conditions(&big, None).is_empty());
    }

    #[test]
    fn far_circles_stay_apart() {
        assert!(convert_two_circles(disk(0.0, 0.0, 5.0), disk(30.0, 0.0, 5.0), 1.0).unwrap().is_none());
    }

    #[test]
    fn case_iii_pair_shares_vertices() {
        let r = 1.0;
        let res = convert_two_circles(disk(0.0, 0.0, 5.0), disk(7.5, 0.0, 5.0), r).unwrap().expect("converts");
        assert!(validate(&res.graph).is_empty());
        assert!(check_conditions(&res, None).is_empty(), "{:?}", check_conditions(&res, None));
        let idx = res.graph.index();
        let dual = (0..res.num_vertices()).filter(|&v| idx.membership[v].len() == 2).count();
        assert!(dual >= 2 && dual % 2 == 0);
    }

    #[test]
    fn case_ii_pair_gets_straight_edge() {
        let r = 1.0;
        let res = convert_two_circles(disk(0.0, 0.0, 5.0), disk(8.5, 0.0, 5.0), r).unwrap().expect("converts");
        assert!(check_conditions(&res, None).is_empty(), "{:?}", check_conditions(&res, None));
        let k = res.inter_edges.iter().position(|e| e.kind == EdgeKind::CaseII).expect("case II edge");
        let (u, v) = res.graph.inter_edges[k];
        let idx = res.graph.index();
        let lu = idx.loops_of(u).next().unwrap();
        let lv = idx.loops_of(v).next().unwrap();
        assert_eq!((res.loops[lu].layer, res.loops[lv].layer), (2, 2));
        assert_ne!(res.loops[lu].circle, res.loops[lv].circle);
    }

    #[test]
    fn three_circles_with_a_common_point_are_rejected() {
        let c = [disk(0.0, 0.0, 5.0), disk(6.0, 0.0, 5.0), disk(3.0, 5.0, 5.0)];
        assert!(matches!(convert_circles(&c, None, 1.0, None), Err(Error::PreconditionViolated(_))));
    }

    fn dumbbell() -> Workspace {
        // two 14x14 rooms joined by a 4-wide corridor of length 10
        let top = Polygon::rectangle(Point2::new(14.0, 9.0), Point2::new(24.0, 14.0));
        let bottom = Polygon::rectangle(Point2::new(14.0, 0.0), Point2::new(24.0, 5.0));
        Workspace::new(Rect::new(Point2::new(0.0, 0.0), Point2::new(38.0, 14.0)), vec![top, bottom]).unwrap()
    }

    #[test]
    fn corridor_joins_rooms_by_skeleton_path() {
        let r = 1.0;
        let w = dumbbell();
        let s = extract_medial_axis(&w, 0.25).unwrap();
        let c = [disk(7.0, 7.0, 7.0), disk(31.0, 7.0, 7.0)];
        let res = convert_circles(&c, Some(&s), r, Some(&w)).unwrap().expect("connected");
        assert!(res.inter_edges.iter().any(|e| e.kind == EdgeKind::SkeletonPath));
        assert!(check_conditions(&res, Some(&w)).is_empty(), "{:?}", check_conditions(&res, Some(&w)));
        assert!(convert_circles(&c, None, r, Some(&w)).unwrap().is_none());
    }

    #[test]
    fn greedy_examples() {
        let r = 1.0;
        let square = Workspace::rectangle(20.0, 20.0);
        let res = greedy_convert(&square, &GreedyParams::new(r), &[]).unwrap();
        assert!(res.num_vertices() >= 19);
        assert!(validate(&res.graph).is_empty());
        assert!(check_conditions(&res, Some(&square)).is_empty());

        let corridor = Workspace::rectangle(60.0, 4.0);
        assert_eq!(greedy_convert(&corridor, &GreedyParams::new(r), &[]).unwrap().num_vertices(), 0);

        let wide = Workspace::rectangle(60.0, 20.0);
        let all = greedy_convert(&wide, &GreedyParams::new(r), &[]).unwrap();
        let mut p = GreedyParams::new(r);
        p.threshold = Some(20);
        let few = greedy_convert(&wide, &p, &[]).unwrap();
        assert!(few.num_vertices() >= 20);
        assert!(few.num_vertices() < all.num_vertices());
        assert!(check_conditions(&all, Some(&wide)).is_empty(), "{:?}", check_conditions(&all, Some(&wide)));
        let again = greedy_convert(&wide, &GreedyParams::new(r), &[]).unwrap();
        assert_eq!(serde_json::to_string(&all).unwrap(), serde_json::to_string(&again).unwrap());
    }
}
