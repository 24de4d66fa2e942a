//! Hand-built and randomly generated swap graphs shared by tests, benches and
//! the acceptance suite.

use std::f64::consts::PI;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::geometry::Point2;
use crate::swap_graph::{edge_key, Occupancy, SwapGraph, Vertex, VertexId};

fn graph_from(n: usize, loops: Vec<Vec<VertexId>>, inter_edges: Vec<(VertexId, VertexId)>) -> SwapGraph {
    let vertices = (0..n)
        .map(|id| {
            let a = 2.0 * PI * id as f64 / n as f64;
            Vertex { id, position: Point2::new(10.0 * a.cos(), 10.0 * a.sin()) }
        })
        .collect();
    SwapGraph { vertices, loops, inter_edges }
}

/// Vertex id of a one-based label of the four-loop graph.
pub fn four_loop_label(label: usize) -> VertexId {
    label - 1
}

/// The four-loop, seventeen-vertex example graph.
///
/// Loop 1 = {1,2,3,4}, loop 2 = {5,...,9}, loop 3 = {10,11,12,13,6,5},
/// loop 4 = {11,15,16,17,13,14}. Loops 2 and 3 share the edge 5-6. The
/// single inter edge joins vertex 4 of loop 1 to vertex 16 of loop 4; its
/// endpoints were chosen to keep the known loop distances.
pub fn four_loop_graph() -> SwapGraph {
    let l = |xs: &[usize]| xs.iter().map(|&x| four_loop_label(x)).collect::<Vec<_>>();
    let loops = vec![
        l(&[1, 2, 3, 4]),
        l(&[5, 6, 7, 8, 9]),
        l(&[10, 11, 12, 13, 6, 5]),
        l(&[11, 15, 16, 17, 13, 14]),
    ];
    graph_from(17, loops, vec![(four_loop_label(4), four_loop_label(16))])
}

/// Two triangles joined by one inter edge.
pub fn minimal_graph() -> SwapGraph {
    graph_from(6, vec![vec![0, 1, 2], vec![3, 4, 5]], vec![(2, 3)])
}

/// `k` disjoint triangles joined in a line by inter edges.
pub fn triangle_chain(k: usize) -> SwapGraph {
    let loops = (0..k).map(|t| vec![3 * t, 3 * t + 1, 3 * t + 2]).collect();
    let inter = (0..k.saturating_sub(1)).map(|t| (3 * t + 2, 3 * t + 3)).collect();
    graph_from(3 * k, loops, inter)
}

/// Worst-case instance on a triangle chain: the vacancy sits on the first
/// vertex and every triangle's contents move to the mirrored triangle.
pub fn triangle_chain_reversal(k: usize) -> (SwapGraph, Occupancy, Occupancy) {
    let g = triangle_chain(k);
    let n = 3 * k;
    let start: Vec<Option<usize>> = (0..n).map(|v| if v == 0 { None } else { Some(v) }).collect();
    let mut goal = vec![None; n];
    for t in 0..k {
        for q in 0..3 {
            goal[3 * (k - 1 - t) + q] = start[3 * t + q];
        }
    }
    (g, Occupancy::new(start), Occupancy::new(goal))
}

/// Random valid swap graph with at most `max_vertices` vertices (at least 6).
///
/// Loops are attached one at a time, either through an inter edge or by
/// sharing two vertices that so far belong to one loop only.
pub fn random_swap_graph<R: Rng>(rng: &mut R, max_vertices: usize) -> SwapGraph {
    let max_vertices = max_vertices.max(6);
    let mut n = rng.gen_range(3..=6usize.min(max_vertices - 3));
    let mut loops: Vec<Vec<VertexId>> = vec![(0..n).collect()];
    let mut member_count = vec![1usize; n];
    let mut inter: Vec<(VertexId, VertexId)> = Vec::new();
    let target_loops = rng.gen_range(2..=10);
    while loops.len() < target_loops || loops.len() < 2 {
        let room = max_vertices - n;
        if room < 1 {
            break;
        }
        let share_from = loops
            .iter()
            .enumerate()
            .filter(|(_, c)| c.iter().filter(|&&v| member_count[v] == 1).count() >= 2)
            .map(|(l, _)| l)
            .collect::<Vec<_>>();
        if !share_from.is_empty() && rng.gen_bool(0.5) {
            let l = *share_from.choose(rng).unwrap();
            let free: Vec<VertexId> = loops[l].iter().copied().filter(|&v| member_count[v] == 1).collect();
            let pair: Vec<VertexId> = free.choose_multiple(rng, 2).copied().collect();
            let fresh = rng.gen_range(1..=room.min(5));
            let split = rng.gen_range(0..=fresh);
            let mut cyc = vec![pair[0]];
            cyc.extend(n..n + split);
            cyc.push(pair[1]);
            cyc.extend(n + split..n + fresh);
            let new_edge_is_inter = inter.iter().any(|&(a, b)| edge_key(a, b) == edge_key(pair[0], pair[1]));
            if cyc.len() < 3 || (new_edge_is_inter && (split == 0 || split == fresh)) {
                continue;
            }
            n += fresh;
            member_count.extend(std::iter::repeat(1).take(fresh));
            member_count[pair[0]] += 1;
            member_count[pair[1]] += 1;
            loops.push(cyc);
        } else {
            if room < 3 {
                break;
            }
            let size = rng.gen_range(3..=room.min(7));
            let anchor = rng.gen_range(0..n);
            let port = n + rng.gen_range(0..size);
            loops.push((n..n + size).collect());
            member_count.extend(std::iter::repeat(1).take(size));
            inter.push((anchor, port));
            n += size;
        }
    }
    if loops.len() < 2 {
        let size = 3;
        loops.push((n..n + size).collect());
        inter.push((0, n));
        n += size;
    }
    // a few extra inter edges between vertices not yet adjacent
    let extra = rng.gen_range(0..=2);
    let g0 = graph_from(n, loops.clone(), inter.clone());
    let idx = g0.index();
    for _ in 0..extra {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b && !idx.has_edge(a, b) && !inter.iter().any(|&(x, y)| edge_key(x, y) == edge_key(a, b)) {
            inter.push((a, b));
        }
    }
    graph_from(n, loops, inter)
}

/// Random occupancy with exactly one vacancy and a random goal permutation.
pub fn random_instance<R: Rng>(rng: &mut R, g: &SwapGraph) -> (Occupancy, Occupancy) {
    let n = g.num_vertices();
    let mut start: Vec<Option<usize>> = (0..n - 1).map(Some).collect();
    start.push(None);
    start.shuffle(rng);
    let mut goal = start.clone();
    goal.shuffle(rng);
    (Occupancy::new(start), Occupancy::new(goal))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::swap_graph::validate;

    #[test]
    fn fixtures_are_valid() {
        assert!(validate(&four_loop_graph()).is_empty());
        assert!(validate(&minimal_graph()).is_empty());
        for k in 2..8 {
            assert!(validate(&triangle_chain(k)).is_empty());
        }
    }
}
