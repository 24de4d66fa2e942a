//! Swap graphs: vertices partitioned into loops with constrained overlaps,
//! plus inter-loop edges, and the loop-change distance used by the planner.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use serde::{Deserialize, Serialize};

use crate::geometry::Point2;

pub type VertexId = usize;
pub type AgentId = usize;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: VertexId,
    pub position: Point2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwapGraph {
    pub vertices: Vec<Vertex>,
    /// Each loop is a vertex cycle; consecutive entries (and last/first) are
    /// the loop's edges.
    pub loops: Vec<Vec<VertexId>>,
    pub inter_edges: Vec<(VertexId, VertexId)>,
}

/// Unordered edge key.
pub fn edge_key(a: VertexId, b: VertexId) -> (VertexId, VertexId) {
    (a.min(b), a.max(b))
}

impl SwapGraph {
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_loops(&self) -> usize {
        self.loops.len()
    }

    pub fn position(&self, v: VertexId) -> Point2 {
        self.vertices[v].position
    }

    pub fn loop_edges(&self, l: usize) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        let cyc = &self.loops[l];
        (0..cyc.len()).map(move |k| edge_key(cyc[k], cyc[(k + 1) % cyc.len()]))
    }

    /// All distinct edges, sorted.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut set = BTreeSet::new();
        for l in 0..self.loops.len() {
            set.extend(self.loop_edges(l));
        }
        set.extend(self.inter_edges.iter().map(|&(a, b)| edge_key(a, b)));
        set.into_iter().collect()
    }

    pub fn index(&self) -> GraphIndex {
        GraphIndex::new(self)
    }
}

/// Adjacency and loop-membership lookups derived from a graph.
#[derive(Debug, Clone)]
pub struct GraphIndex {
    pub adj: Vec<Vec<VertexId>>,
    /// For each vertex, `(loop, position in loop)` pairs, sorted by loop.
    pub membership: Vec<Vec<(usize, usize)>>,
    pub loop_len: Vec<usize>,
    edges: BTreeSet<(VertexId, VertexId)>,
}

impl GraphIndex {
    fn new(g: &SwapGraph) -> Self {
        let n = g.vertices.len();
        let mut adj = vec![Vec::new(); n];
        let mut membership = vec![Vec::new(); n];
        let edges: BTreeSet<_> = g.edges().into_iter().collect();
        for &(a, b) in &edges {
            if a < n && b < n && a != b {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        for (l, cyc) in g.loops.iter().enumerate() {
            for (k, &v) in cyc.iter().enumerate() {
                if v < n {
                    membership[v].push((l, k));
                }
            }
        }
        Self { adj, membership, loop_len: g.loops.iter().map(Vec::len).collect(), edges }
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        self.edges.contains(&edge_key(a, b))
    }

    pub fn loops_of(&self, v: VertexId) -> impl Iterator<Item = usize> + '_ {
        self.membership[v].iter().map(|&(l, _)| l)
    }

    pub fn pos_in_loop(&self, v: VertexId, l: usize) -> Option<usize> {
        self.membership[v].iter().find(|&&(m, _)| m == l).map(|&(_, k)| k)
    }

    pub fn in_loop(&self, v: VertexId, l: usize) -> bool {
        self.pos_in_loop(v, l).is_some()
    }

    /// Loop containing both vertices, smallest index first.
    pub fn common_loop(&self, a: VertexId, b: VertexId) -> Option<usize> {
        self.loops_of(a).find(|&l| self.in_loop(b, l))
    }
}

/// Agent placement: `slots[v]` is the agent on vertex `v`, `None` if vacant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Occupancy {
    pub slots: Vec<Option<AgentId>>,
}

impl Occupancy {
    pub fn new(slots: Vec<Option<AgentId>>) -> Self {
        Self { slots }
    }

    pub fn vacancies(&self) -> Vec<VertexId> {
        (0..self.slots.len()).filter(|&v| self.slots[v].is_none()).collect()
    }

    pub fn agents(&self) -> BTreeSet<AgentId> {
        self.slots.iter().flatten().copied().collect()
    }

    pub fn vertex_of(&self, a: AgentId) -> Option<VertexId> {
        self.slots.iter().position(|&s| s == Some(a))
    }

    /// Agent ids are pairwise distinct.
    pub fn is_consistent(&self) -> bool {
        let n = self.slots.iter().flatten().count();
        self.agents().len() == n
    }
}

pub fn validate(g: &SwapGraph) -> Vec<String> {
    let mut out = Vec::new();
    let n = g.vertices.len();
    for (k, v) in g.vertices.iter().enumerate() {
        if v.id != k {
            out.push(format!("vertex ids: vertex at index {k} has id {}", v.id));
        }
    }
    let bad_ref = |v: VertexId| v >= n;
    if g.loops.iter().flatten().any(|&v| bad_ref(v))
        || g.inter_edges.iter().any(|&(a, b)| bad_ref(a) || bad_ref(b))
    {
        out.push("vertex ids: reference to a missing vertex".into());
        return out;
    }
    if g.loops.len() <= 1 {
        out.push("K>1".into());
    }
    for (l, cyc) in g.loops.iter().enumerate() {
        if cyc.len() < 3 {
            out.push(format!("loop size >= 3: loop {l} has {} vertices", cyc.len()));
        }
        let distinct: BTreeSet<_> = cyc.iter().collect();
        if distinct.len() != cyc.len() {
            out.push(format!("unique cycle: loop {l} repeats a vertex"));
        }
    }
    let loop_sets: Vec<BTreeSet<VertexId>> = g.loops.iter().map(|c| c.iter().copied().collect()).collect();
    let loop_edge_sets: Vec<BTreeSet<(VertexId, VertexId)>> =
        (0..g.loops.len()).map(|l| g.loop_edges(l).collect()).collect();
    for a in 0..g.loops.len() {
        for b in (a + 1)..g.loops.len() {
            let shared = loop_sets[a].intersection(&loop_sets[b]).count();
            if shared != 0 && shared != 2 {
                out.push(format!("overlap in {{0,2}}: loops {a} and {b} share {shared} vertices"));
            }
            let shared_e = loop_edge_sets[a].intersection(&loop_edge_sets[b]).count();
            if shared_e > 1 {
                out.push(format!("shared edges in {{0,1}}: loops {a} and {b} share {shared_e} edges"));
            }
        }
    }
    let all_loop_edges: BTreeSet<_> = loop_edge_sets.iter().flatten().copied().collect();
    let mut seen = BTreeSet::new();
    for &(a, b) in &g.inter_edges {
        if a == b {
            out.push(format!("simple: self-loop at vertex {a}"));
            continue;
        }
        let e = edge_key(a, b);
        if !seen.insert(e) {
            out.push(format!("simple: inter edge {e:?} listed twice"));
        }
        if all_loop_edges.contains(&e) {
            out.push(format!("loop and inter edges disjoint: {e:?} is both"));
        }
    }
    let covered: BTreeSet<_> = loop_sets.iter().flatten().copied().collect();
    if covered.len() != n {
        out.push(format!("vertices covered by loops: {} of {n} vertices lie on a loop", covered.len()));
    }
    if n > 0 && !is_connected(g) {
        out.push("connected".into());
    }
    out
}

fn is_connected(g: &SwapGraph) -> bool {
    let idx = g.index();
    let n = g.vertices.len();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &w in &idx.adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Lexicographic cost of a path in the (vertex, loop) state space: number of
/// loop changes, then the accumulated size of loops left at those changes.
type Cost = (usize, usize);

/// Dijkstra over `(vertex, loop)` states from every loop assignment of
/// `source`. Returns per-state best cost and predecessor, states being
/// indexed by `(v, k)` with `k` the position in `membership[v]`.
struct LoopSearch {
    cost: Vec<Vec<Option<Cost>>>,
    pred: Vec<Vec<Option<(VertexId, usize)>>>,
}

impl LoopSearch {
    fn run(idx: &GraphIndex, source: VertexId) -> Self {
        let n = idx.adj.len();
        let mut cost: Vec<Vec<Option<Cost>>> = idx.membership.iter().map(|m| vec![None; m.len()]).collect();
        let mut pred = idx.membership.iter().map(|m| vec![None; m.len()]).collect::<Vec<_>>();
        let mut heap = BinaryHeap::new();
        for k in 0..idx.membership[source].len() {
            cost[source][k] = Some((0, 0));
            heap.push(Reverse(((0, 0), source, k)));
        }
        while let Some(Reverse((c, v, k))) = heap.pop() {
            if cost[v][k] != Some(c) {
                continue;
            }
            let (lv, _) = idx.membership[v][k];
            for &w in &idx.adj[v] {
                debug_assert!(w < n);
                for (kw, &(lw, _)) in idx.membership[w].iter().enumerate() {
                    let nc = if lw == lv { c } else { (c.0 + 1, c.1 + idx.loop_len[lv]) };
                    if cost[w][kw].map_or(true, |old| nc < old) {
                        cost[w][kw] = Some(nc);
                        pred[w][kw] = Some((v, k));
                        heap.push(Reverse((nc, w, kw)));
                    }
                }
            }
        }
        Self { cost, pred }
    }

    /// Best total cost ending at `v` with final loop restricted by `accept`,
    /// including the final loop size term.
    fn best_at(&self, idx: &GraphIndex, v: VertexId, accept: impl Fn(usize) -> bool) -> Option<(Cost, usize)> {
        let mut best: Option<(Cost, usize)> = None;
        for (k, &(l, _)) in idx.membership[v].iter().enumerate() {
            if !accept(l) {
                continue;
            }
            if let Some((ch, acc)) = self.cost[v][k] {
                let total = (ch, acc + idx.loop_len[l]);
                if best.map_or(true, |(b, _)| total < b) {
                    best = Some((total, k));
                }
            }
        }
        best
    }
}

pub fn vertex_distance(g: &SwapGraph, v: VertexId, v2: VertexId) -> usize {
    vertex_distance_with(&g.index(), v, v2)
}

pub fn vertex_distance_with(idx: &GraphIndex, v: VertexId, v2: VertexId) -> usize {
    if v == v2 {
        return 0;
    }
    let s = LoopSearch::run(idx, v);
    s.best_at(idx, v2, |_| true).map_or(usize::MAX, |((c, _), _)| c)
}

pub fn vertex_loop_distance(g: &SwapGraph, v: VertexId, l: usize) -> usize {
    let idx = g.index();
    if idx.in_loop(v, l) {
        return 0;
    }
    let s = LoopSearch::run(&idx, v);
    (0..g.vertices.len())
        .filter_map(|w| s.best_at(&idx, w, |m| m == l).map(|((c, _), _)| c))
        .min()
        .unwrap_or(usize::MAX)
}

pub fn path_complexity(g: &SwapGraph, v: VertexId, v2: VertexId) -> usize {
    let idx = g.index();
    let s = LoopSearch::run(&idx, v);
    s.best_at(&idx, v2, |_| true).map_or(usize::MAX, |((_, cx), _)| cx)
}

/// A lowest-cost path from `from` to `to` as `(vertex, assigned loop)` steps.
pub fn lowest_cost_path(idx: &GraphIndex, from: VertexId, to: VertexId) -> Option<Vec<(VertexId, usize)>> {
    let s = LoopSearch::run(idx, from);
    let (_, mut k) = s.best_at(idx, to, |_| true)?;
    let mut v = to;
    let mut path = vec![(v, idx.membership[v][k].0)];
    while let Some((pv, pk)) = s.pred[v][k] {
        v = pv;
        k = pk;
        path.push((v, idx.membership[v][k].0));
    }
    path.reverse();
    Some(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{four_loop_graph, four_loop_label, minimal_graph, random_swap_graph};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn four_loop_is_valid_with_golden_distances() {
        let g = four_loop_graph();
        assert!(validate(&g).is_empty(), "{:?}", validate(&g));
        let v = four_loop_label;
        assert_eq!(vertex_distance(&g, v(12), v(14)), 1);
        assert_eq!(vertex_distance(&g, v(11), v(10)), 0);
        assert_eq!(vertex_distance(&g, v(15), v(5)), 1);
        assert_eq!(vertex_loop_distance(&g, v(17), 0), 1);
        assert_eq!(vertex_distance(&g, v(7), v(7)), 0);
        assert_eq!(vertex_loop_distance(&g, v(7), 1), 0);
        assert_eq!(path_complexity(&g, v(12), v(14)), 12);
        assert_eq!(path_complexity(&g, v(10), v(12)), 6);
    }

    #[test]
    fn named_violations() {
        let mut one = minimal_graph();
        one.loops.truncate(1);
        one.inter_edges.clear();
        one.vertices.truncate(3);
        assert!(validate(&one).contains(&"K>1".to_string()));

        let mut three = minimal_graph();
        three.loops[1] = vec![0, 1, 2, 3];
        assert!(validate(&three).iter().any(|m| m.starts_with("overlap in {0,2}")));

        let mut split = minimal_graph();
        split.inter_edges.clear();
        assert!(validate(&split).contains(&"connected".to_string()));

        let mut short = minimal_graph();
        short.loops[0].truncate(2);
        assert!(validate(&short).iter().any(|m| m.starts_with("loop size >= 3")));
    }

    #[test]
    fn random_graphs_are_valid_and_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let g = random_swap_graph(&mut rng, 30);
            assert!(validate(&g).is_empty(), "{:?}", validate(&g));
            let n = g.num_vertices();
            let idx = g.index();
            for a in 0..n {
                let s = LoopSearch::run(&idx, a);
                for b in 0..n {
                    let ((_, cx), _) = s.best_at(&idx, b, |_| true).unwrap();
                    assert!(cx <= 5 * n, "complexity {cx} > 5|V| = {}", 5 * n);
                }
            }
        }
    }

    #[test]
    fn lowest_cost_path_realizes_distance() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let g = random_swap_graph(&mut rng, 25);
            let idx = g.index();
            for a in 0..g.num_vertices() {
                let b = (a * 7 + 3) % g.num_vertices();
                let p = lowest_cost_path(&idx, a, b).unwrap();
                assert_eq!(p.first().unwrap().0, a);
                assert_eq!(p.last().unwrap().0, b);
                let changes = p.windows(2).filter(|w| w[0].1 != w[1].1).count();
                assert_eq!(changes, vertex_distance_with(&idx, a, b));
                for w in p.windows(2) {
                    assert!(idx.has_edge(w[0].0, w[1].0));
                }
                for &(v, l) in &p {
                    assert!(idx.in_loop(v, l));
                }
            }
        }
    }
}
