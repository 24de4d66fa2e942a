//! Planar primitives and free-space predicates.
//!
//! Free space is the workspace rectangle minus the closed obstacle polygons.
//! The boundary itself is not free, while tangency between a disk and the
//! boundary (or between two disks) is treated as non-penetrating.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance applied to the scene diameter.
pub const REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn polar(center: Point2, radius: f64, angle: f64) -> Self {
        Self::new(center.x + radius * angle.cos(), center.y + radius * angle.sin())
    }

    pub fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point2) -> f64 {
        (self - o).norm()
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn lerp(self, o: Point2, t: f64) -> Point2 {
        self + (o - self) * t
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: Point2,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: Point2, radius: f64) -> Self {
        Self { center, radius }
    }

    pub fn contains(&self, p: Point2) -> bool {
        self.center.dist(p) <= self.radius
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a: Point2,
    pub b: Point2,
}

impl Segment {
    pub fn new(a: Point2, b: Point2) -> Self {
        Self { a, b }
    }

    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }

    /// Closest point on the segment to `p`.
    pub fn closest_point(&self, p: Point2) -> Point2 {
        let d = self.b - self.a;
        let len2 = d.dot(d);
        if len2 == 0.0 {
            return self.a;
        }
        let t = ((p - self.a).dot(d) / len2).clamp(0.0, 1.0);
        self.a + d * t
    }

    pub fn dist_to_point(&self, p: Point2) -> f64 {
        self.closest_point(p).dist(p)
    }

    pub fn intersects(&self, o: &Segment) -> bool {
        let d1 = orient(o.a, o.b, self.a);
        let d2 = orient(o.a, o.b, self.b);
        let d3 = orient(self.a, self.b, o.a);
        let d4 = orient(self.a, self.b, o.b);
        if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
            && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
        {
            return true;
        }
        (d1 == 0.0 && on_segment(o, self.a))
            || (d2 == 0.0 && on_segment(o, self.b))
            || (d3 == 0.0 && on_segment(self, o.a))
            || (d4 == 0.0 && on_segment(self, o.b))
    }

    pub fn dist_to_segment(&self, o: &Segment) -> f64 {
        if self.intersects(o) {
            return 0.0;
        }
        self.dist_to_point(o.a)
            .min(self.dist_to_point(o.b))
            .min(o.dist_to_point(self.a))
            .min(o.dist_to_point(self.b))
    }
}

fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    (b - a).cross(c - a)
}

fn on_segment(s: &Segment, p: Point2) -> bool {
    p.x >= s.a.x.min(s.b.x)
        && p.x <= s.a.x.max(s.b.x)
        && p.y >= s.a.y.min(s.b.y)
        && p.y <= s.a.y.max(s.b.y)
}

/// A simple polygon; `holes` are rings cut out of the polygon (they belong to
/// free space again).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polygon {
    pub vertices: Vec<Point2>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub holes: Vec<Vec<Point2>>,
}

impl Polygon {
    pub fn new(vertices: Vec<Point2>) -> Self {
        Self { vertices, holes: Vec::new() }
    }

    pub fn rectangle(min: Point2, max: Point2) -> Self {
        Self::new(vec![min, Point2::new(max.x, min.y), max, Point2::new(min.x, max.y)])
    }

    /// Regular polygon approximating a disk.
    pub fn regular(center: Point2, radius: f64, sides: usize, phase: f64) -> Self {
        let vertices = (0..sides)
            .map(|k| Point2::polar(center, radius, phase + 2.0 * PI * k as f64 / sides as f64))
            .collect();
        Self::new(vertices)
    }

    pub fn rings(&self) -> impl Iterator<Item = &[Point2]> {
        std::iter::once(self.vertices.as_slice()).chain(self.holes.iter().map(|h| h.as_slice()))
    }

    pub fn edges(&self) -> impl Iterator<Item = Segment> + '_ {
        self.rings().flat_map(|ring| {
            (0..ring.len()).map(move |k| Segment::new(ring[k], ring[(k + 1) % ring.len()]))
        })
    }

    /// Even-odd containment over all rings (boundary handling is left to the caller).
    pub fn contains(&self, p: Point2) -> bool {
        self.rings().filter(|ring| ring_contains(ring, p)).count() % 2 == 1
    }

    pub fn area(&self) -> f64 {
        self.rings().map(|r| signed_area(r).abs()).enumerate().fold(0.0, |acc, (k, a)| {
            if k == 0 {
                acc + a
            } else {
                acc - a
            }
        })
    }

    fn is_simple(&self) -> bool {
        let edges: Vec<Segment> = self.edges().collect();
        for i in 0..edges.len() {
            for j in (i + 1)..edges.len() {
                let touching = edges[i].b == edges[j].a || edges[j].b == edges[i].a;
                if touching {
                    continue;
                }
                if edges[i].intersects(&edges[j]) {
                    return false;
                }
            }
        }
        true
    }
}

pub fn signed_area(ring: &[Point2]) -> f64 {
    let n = ring.len();
    (0..n).map(|k| ring[k].cross(ring[(k + 1) % n])).sum::<f64>() / 2.0
}

fn ring_contains(ring: &[Point2], p: Point2) -> bool {
    let mut inside = false;
    let n = ring.len();
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (ring[i], ring[j]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub min: Point2,
    pub max: Point2,
}

impl Rect {
    pub fn new(min: Point2, max: Point2) -> Self {
        Self { min, max }
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn contains(&self, p: Point2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    pub fn corners(&self) -> [Point2; 4] {
        [
            self.min,
            Point2::new(self.max.x, self.min.y),
            self.max,
            Point2::new(self.min.x, self.max.y),
        ]
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct WorkspaceData {
    bounds: Rect,
    #[serde(default)]
    obstacles: Vec<Polygon>,
}

/// Bounded rectangle with polygonal obstacles.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "WorkspaceData", into = "WorkspaceData")]
pub struct Workspace {
    bounds: Rect,
    obstacles: Vec<Polygon>,
    boundary: Vec<Segment>,
}

impl PartialEq for Workspace {
    fn eq(&self, o: &Self) -> bool {
        self.bounds == o.bounds && self.obstacles == o.obstacles
    }
}

impl TryFrom<WorkspaceData> for Workspace {
    type Error = Error;
    fn try_from(d: WorkspaceData) -> Result<Self> {
        Workspace::new(d.bounds, d.obstacles)
    }
}

impl From<Workspace> for WorkspaceData {
    fn from(w: Workspace) -> Self {
        WorkspaceData { bounds: w.bounds, obstacles: w.obstacles }
    }
}

impl Workspace {
    pub fn new(bounds: Rect, obstacles: Vec<Polygon>) -> Result<Self> {
        if !(bounds.width() > 0.0 && bounds.height() > 0.0) {
            return Err(Error::InvalidWorkspace("bounds must have positive extent".into()));
        }
        for (k, poly) in obstacles.iter().enumerate() {
            if poly.rings().any(|ring| ring.len() < 3) {
                return Err(Error::InvalidWorkspace(format!("obstacle {k} has a ring with < 3 vertices")));
            }
            if poly.rings().flatten().any(|p| !p.is_finite() || !bounds.contains(*p)) {
                return Err(Error::InvalidWorkspace(format!("obstacle {k} leaves the bounds")));
            }
            if !poly.is_simple() {
                return Err(Error::InvalidWorkspace(format!("obstacle {k} is not simple")));
            }
        }
        let mut boundary: Vec<Segment> = {
            let c = bounds.corners();
            (0..4).map(|k| Segment::new(c[k], c[(k + 1) % 4])).collect()
        };
        boundary.extend(obstacles.iter().flat_map(|p| p.edges()));
        let w = Self { bounds, obstacles, boundary };
        if w.free_area() <= 0.0 {
            return Err(Error::InvalidWorkspace("free space is empty".into()));
        }
        Ok(w)
    }

    pub fn rectangle(width: f64, height: f64) -> Self {
        Self::new(Rect::new(Point2::new(0.0, 0.0), Point2::new(width, height)), Vec::new())
            .expect("positive rectangle")
    }

    pub fn bounds(&self) -> Rect {
        self.bounds
    }

    pub fn obstacles(&self) -> &[Polygon] {
        &self.obstacles
    }

    /// All boundary segments of free space (bounds plus obstacle rings).
    pub fn boundary(&self) -> &[Segment] {
        &self.boundary
    }

    pub fn diameter(&self) -> f64 {
        self.bounds.width().hypot(self.bounds.height())
    }

    pub fn tol(&self) -> f64 {
        REL_TOL * self.diameter()
    }

    /// Area of free space, assuming obstacles are pairwise disjoint.
    pub fn free_area(&self) -> f64 {
        self.bounds.width() * self.bounds.height()
            - self.obstacles.iter().map(Polygon::area).sum::<f64>()
    }

    fn boundary_distance(&self, p: Point2) -> f64 {
        self.boundary.iter().map(|s| s.dist_to_point(p)).fold(f64::INFINITY, f64::min)
    }
}

pub fn point_in_free_space(p: Point2, w: &Workspace) -> bool {
    let b = w.bounds;
    if !(p.x > b.min.x && p.x < b.max.x && p.y > b.min.y && p.y < b.max.y) {
        return false;
    }
    if w.obstacles.iter().any(|o| o.contains(p)) {
        return false;
    }
    w.boundary_distance(p) > 0.0
}

pub fn clearance(p: Point2, w: &Workspace) -> Result<f64> {
    if !point_in_free_space(p, w) {
        return Err(Error::NotInFreeSpace(p));
    }
    Ok(w.boundary_distance(p))
}

pub fn disk_in_free_space(d: &Disk, w: &Workspace) -> bool {
    match clearance(d.center, w) {
        Ok(c) => c >= d.radius - w.tol(),
        Err(_) => false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Capsule {
    pub a: Point2,
    pub b: Point2,
    pub radius: f64,
}

impl Capsule {
    pub fn new(a: Point2, b: Point2, radius: f64) -> Self {
        Self { a, b, radius }
    }

    pub fn axis(&self) -> Segment {
        Segment::new(self.a, self.b)
    }
}

pub fn capsule_free(c: &Capsule, w: &Workspace, excluded: &[Disk]) -> bool {
    let tol = w.tol();
    if !point_in_free_space(c.a, w) || !point_in_free_space(c.b, w) {
        return false;
    }
    let axis = c.axis();
    if w.boundary.iter().any(|s| axis.dist_to_segment(s) < c.radius - tol) {
        return false;
    }
    excluded.iter().all(|d| axis.dist_to_point(d.center) >= c.radius + d.radius - tol)
}

/// Intersection points of two circles (empty when disjoint or concentric).
pub fn circle_intersections(c1: Point2, r1: f64, c2: Point2, r2: f64) -> Vec<Point2> {
    let d = c1.dist(c2);
    if d == 0.0 || d > r1 + r2 || d < (r1 - r2).abs() {
        return Vec::new();
    }
    let a = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
    let h = (r1 * r1 - a * a).max(0.0).sqrt();
    let u = (c2 - c1) * (1.0 / d);
    let mid = c1 + u * a;
    let perp = Point2::new(-u.y, u.x);
    if h == 0.0 {
        vec![mid]
    } else {
        vec![mid + perp * h, mid - perp * h]
    }
}

/// Normalizes an angle into `[0, 2π)`.
pub fn norm_angle(a: f64) -> f64 {
    let t = a.rem_euclid(2.0 * PI);
    if t >= 2.0 * PI {
        0.0
    } else {
        t
    }
}

/// `acos` with its argument clamped into `[-1, 1]`.
pub fn acos_clamped(x: f64) -> f64 {
    x.clamp(-1.0, 1.0).acos()
}
