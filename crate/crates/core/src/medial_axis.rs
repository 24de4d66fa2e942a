//! Grid approximation of the medial axis of free space, circle sampling along
//! it, and clearance-checked paths between sampled circles.
//!
//! Each free grid cell stores its exact clearance and the nearest boundary
//! point (its feature). A cell is a ridge candidate when some 4-neighbour with
//! no larger clearance has a feature that is both far away and seen from a
//! clearly different direction. Candidates are thinned and linked through
//! their 8-neighbourhood.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{capsule_free, point_in_free_space, Capsule, Disk, Point2, Workspace};

/// Minimum angle between the feature directions of two neighbouring cells
/// for the pair to straddle a ridge.
const RIDGE_MIN_ANGLE: f64 = 40.0 * std::f64::consts::PI / 180.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SkeletonNode {
    pub position: Point2,
    pub clearance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkeletonGraph {
    pub nodes: Vec<SkeletonNode>,
    pub edges: Vec<(usize, usize)>,
    /// Spacing between neighbouring nodes along a branch.
    pub sample_interval: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkeletonPath {
    pub waypoints: Vec<Point2>,
    pub start_circle: usize,
    pub end_circle: usize,
}

impl SkeletonPath {
    pub fn length(&self) -> f64 {
        self.waypoints.windows(2).map(|w| w[0].dist(w[1])).sum()
    }
}

struct Cell {
    clearance: f64,
    feature: Point2,
}

struct Grid {
    nx: usize,
    ny: usize,
    origin: Point2,
    h: f64,
    cells: Vec<Option<Cell>>,
}

impl Grid {
    fn build(w: &Workspace, h: f64) -> Self {
        let b = w.bounds();
        let nx = (b.width() / h).floor().max(1.0) as usize;
        let ny = (b.height() / h).floor().max(1.0) as usize;
        // centre the lattice inside the bounds
        let origin = Point2::new(
            b.min.x + 0.5 * (b.width() - (nx - 1) as f64 * h),
            b.min.y + 0.5 * (b.height() - (ny - 1) as f64 * h),
        );
        let mut cells = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                let p = Point2::new(origin.x + i as f64 * h, origin.y + j as f64 * h);
                cells.push(if point_in_free_space(p, w) { nearest_feature(p, w) } else { None });
            }
        }
        Self { nx, ny, origin, h, cells }
    }

    fn at(&self, i: i64, j: i64) -> Option<&Cell> {
        if i < 0 || j < 0 || i >= self.nx as i64 || j >= self.ny as i64 {
            return None;
        }
        self.cells[j as usize * self.nx + i as usize].as_ref()
    }

    fn center(&self, i: usize, j: usize) -> Point2 {
        Point2::new(self.origin.x + i as f64 * self.h, self.origin.y + j as f64 * self.h)
    }
}

fn nearest_feature(p: Point2, w: &Workspace) -> Option<Cell> {
    let mut best = f64::INFINITY;
    let mut feature = p;
    for s in w.boundary() {
        let q = s.closest_point(p);
        let d = q.dist(p);
        if d < best {
            best = d;
            feature = q;
        }
    }
    (best > 0.0).then_some(Cell { clearance: best, feature })
}

const N4: [(i64, i64); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];

fn ridge_mask(g: &Grid) -> Vec<bool> {
    let min_cos = RIDGE_MIN_ANGLE.cos();
    let mut mask = vec![false; g.nx * g.ny];
    for j in 0..g.ny {
        for i in 0..g.nx {
            let Some(c) = g.at(i as i64, j as i64) else { continue };
            if c.clearance <= g.h {
                continue;
            }
            let p = g.center(i, j);
            let dp = c.feature - p;
            mask[j * g.nx + i] = N4.iter().any(|&(di, dj)| {
                let Some(q) = g.at(i as i64 + di, j as i64 + dj) else { return false };
                if q.clearance > c.clearance {
                    return false;
                }
                let dq = q.feature - p;
                let cos = dp.dot(dq) / (dp.norm() * dq.norm());
                c.feature.dist(q.feature) > 2.0 * g.h && cos < min_cos
            });
        }
    }
    mask
}

/// Zhang-Suen thinning on an `nx × ny` mask. Cells with only two marked
/// neighbours are kept, which stops tips of two-cell-wide ridges from eroding.
fn thin(mask: &mut [bool], nx: usize, ny: usize) {
    let get = |m: &[bool], i: i64, j: i64| -> bool {
        i >= 0 && j >= 0 && (i as usize) < nx && (j as usize) < ny && m[j as usize * nx + i as usize]
    };
    // P2..P9 clockwise from north
    const NB: [(i64, i64); 8] = [(0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1)];
    loop {
        let mut changed = false;
        for pass in 0..2 {
            let mut remove = Vec::new();
            for j in 0..ny as i64 {
                for i in 0..nx as i64 {
                    if !get(mask, i, j) {
                        continue;
                    }
                    let p: Vec<bool> = NB.iter().map(|&(di, dj)| get(mask, i + di, j + dj)).collect();
                    let b = p.iter().filter(|&&x| x).count();
                    if !(3..=6).contains(&b) {
                        continue;
                    }
                    let a = (0..8).filter(|&k| !p[k] && p[(k + 1) % 8]).count();
                    if a != 1 {
                        continue;
                    }
                    let (n, e, s, wst) = (p[0], p[2], p[4], p[6]);
                    let ok = if pass == 0 { !(n && e && s) && !(e && s && wst) } else { !(n && e && wst) && !(n && s && wst) };
                    if ok {
                        remove.push(j as usize * nx + i as usize);
                    }
                }
            }
            changed |= !remove.is_empty();
            for k in remove {
                mask[k] = false;
            }
        }
        if !changed {
            break;
        }
    }
}

pub fn extract_medial_axis(w: &Workspace, grid_resolution: f64) -> Result<SkeletonGraph> {
    if !(grid_resolution > 0.0) {
        return Err(Error::EmptyFreeSpace(grid_resolution));
    }
    let g = Grid::build(w, grid_resolution);
    if g.cells.iter().all(Option::is_none) {
        return Err(Error::EmptyFreeSpace(grid_resolution));
    }
    let mut mask = ridge_mask(&g);
    thin(&mut mask, g.nx, g.ny);

    let mut id = vec![usize::MAX; g.nx * g.ny];
    let mut nodes = Vec::new();
    for j in 0..g.ny {
        for i in 0..g.nx {
            if mask[j * g.nx + i] {
                id[j * g.nx + i] = nodes.len();
                let c = g.at(i as i64, j as i64).expect("masked cells are free");
                nodes.push(SkeletonNode { position: g.center(i, j), clearance: c.clearance });
            }
        }
    }
    let mut edges = Vec::new();
    for j in 0..g.ny as i64 {
        for i in 0..g.nx as i64 {
            let a = id[j as usize * g.nx + i as usize];
            if a == usize::MAX {
                continue;
            }
            // forward half of the 8-neighbourhood, so each edge appears once
            for (di, dj) in [(1, 0), (1, 1), (0, 1), (-1, 1)] {
                let (u, v) = (i + di, j + dj);
                if u < 0 || v < 0 || u >= g.nx as i64 || v >= g.ny as i64 {
                    continue;
                }
                let b = id[v as usize * g.nx + u as usize];
                if b != usize::MAX {
                    edges.push((a, b));
                }
            }
        }
    }
    Ok(SkeletonGraph { nodes, edges, sample_interval: grid_resolution })
}

/// Greedy circle sampling: nodes by descending clearance, keeping those at
/// least `epsilon` from every kept center.
pub fn sample_circles(s: &SkeletonGraph, epsilon: f64, k_max: usize, r: f64) -> Vec<Disk> {
    let mut order: Vec<usize> = (0..s.nodes.len()).filter(|&k| s.nodes[k].clearance >= 3.0 * r).collect();
    order.sort_by(|&a, &b| {
        s.nodes[b]
            .clearance
            .total_cmp(&s.nodes[a].clearance)
            .then(s.nodes[a].position.x.total_cmp(&s.nodes[b].position.x))
            .then(s.nodes[a].position.y.total_cmp(&s.nodes[b].position.y))
    });
    let mut out: Vec<Disk> = Vec::new();
    for k in order {
        if out.len() >= k_max {
            break;
        }
        let n = s.nodes[k];
        if out.iter().all(|d| d.center.dist(n.position) >= epsilon) {
            out.push(Disk::new(n.position, n.clearance));
        }
    }
    out
}

#[derive(PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Entry {
    fn cmp(&self, o: &Self) -> Ordering {
        o.0.total_cmp(&self.0).then(o.1.cmp(&self.1))
    }
}

/// Shortest skeleton route from circle `a` to circle `b` whose `r`-inflation
/// avoids obstacles and every other circle. Portions inside `a` or `b` are
/// exempt from the circle test.
pub fn skeleton_path(
    s: &SkeletonGraph,
    circles: &[Disk],
    a: usize,
    b: usize,
    r: f64,
    w: &Workspace,
) -> Option<SkeletonPath> {
    let (ca, cb) = (circles[a], circles[b]);
    if ca.center.dist(cb.center) <= ca.radius + cb.radius {
        return Some(SkeletonPath { waypoints: vec![ca.center, cb.center], start_circle: a, end_circle: b });
    }
    let others: Vec<Disk> = circles.iter().enumerate().filter(|&(k, _)| k != a && k != b).map(|(_, d)| *d).collect();
    let inside = |p: Point2, d: &Disk| p.dist(d.center) < d.radius;
    let n = s.nodes.len();
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in &s.edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let edge_ok = |u: usize, v: usize| {
        let (p, q) = (s.nodes[u].position, s.nodes[v].position);
        if (inside(p, &ca) && inside(q, &ca)) || (inside(p, &cb) && inside(q, &cb)) {
            return true;
        }
        capsule_free(&Capsule::new(p, q, r), w, &others)
    };
    let mut dist = vec![f64::INFINITY; n];
    let mut pred = vec![usize::MAX; n];
    let mut heap = BinaryHeap::new();
    for k in 0..n {
        if inside(s.nodes[k].position, &ca) {
            dist[k] = s.nodes[k].position.dist(ca.center);
            heap.push(Entry(dist[k], k));
        }
    }
    let mut goal = None;
    while let Some(Entry(d, u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        if inside(s.nodes[u].position, &cb) {
            goal = Some(u);
            break;
        }
        for &v in &adj[u] {
            let nd = d + s.nodes[u].position.dist(s.nodes[v].position);
            if nd < dist[v] && edge_ok(u, v) {
                dist[v] = nd;
                pred[v] = u;
                heap.push(Entry(nd, v));
            }
        }
    }
    let mut k = goal?;
    let mut pts = vec![cb.center, s.nodes[k].position];
    while pred[k] != usize::MAX {
        k = pred[k];
        pts.push(s.nodes[k].position);
    }
    pts.push(ca.center);
    pts.reverse();
    Some(SkeletonPath { waypoints: pts, start_circle: a, end_circle: b })
}
