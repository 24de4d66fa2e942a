//! Constructive permutation planning on swap graphs.
//!
//! Every exchange is built as a conjugate `S · P · S⁻¹`: a setup sequence
//! `S` brings the two tokens next to each other on one loop with the vacancy
//! parked just outside it, the five-operation primitive `P` transposes the two
//! adjacent slots, and the inverse of `S` puts everything else back. Because
//! tokens are tracked by position, the conjugate transposes the original two
//! vertices no matter what `S` disturbed along the way.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::swap_graph::{lowest_cost_path, validate, AgentId, GraphIndex, Occupancy, SwapGraph, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum SwapOp {
    /// Rotate a loop: the content at cycle index `j` moves to `j + steps`.
    TypeI {
        #[serde(rename = "loop")]
        loop_index: usize,
        steps: i64,
    },
    /// Move a token along an edge into the vacant endpoint.
    TypeII { edge: (VertexId, VertexId) },
}

impl SwapOp {
    pub fn inverse(self) -> SwapOp {
        match self {
            SwapOp::TypeI { loop_index, steps } => SwapOp::TypeI { loop_index, steps: -steps },
            op @ SwapOp::TypeII { .. } => op,
        }
    }
}

/// Reversed sequence of inverted operations.
pub fn reverse_ops(ops: &[SwapOp]) -> Vec<SwapOp> {
    ops.iter().rev().map(|op| op.inverse()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Plan {
    pub ops: Vec<SwapOp>,
    pub start: Occupancy,
    pub goal: Occupancy,
}

/// Counters gathered while planning.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PlannerStats {
    pub exchanges: usize,
    /// Exchanges whose setup had to fall back to exhaustive search.
    pub fallbacks: usize,
}

fn rotate_slots<T: Copy>(slots: &mut [T], cyc: &[VertexId], steps: i64) {
    let k = cyc.len() as i64;
    let old: Vec<T> = cyc.iter().map(|&v| slots[v]).collect();
    for (j, &val) in old.iter().enumerate() {
        let to = (j as i64 + steps).rem_euclid(k) as usize;
        slots[cyc[to]] = val;
    }
}

fn check_op<T>(slots: &[Option<T>], g: &SwapGraph, idx: &GraphIndex, op: &SwapOp) -> Result<()> {
    match *op {
        SwapOp::TypeI { loop_index, .. } => {
            if loop_index >= g.loops.len() {
                return Err(Error::IllegalOp(format!("loop {loop_index} does not exist")));
            }
        }
        SwapOp::TypeII { edge: (a, b) } => {
            if a >= slots.len() || b >= slots.len() || !idx.has_edge(a, b) {
                return Err(Error::IllegalOp(format!("edge ({a}, {b}) does not exist")));
            }
            if slots[a].is_some() && slots[b].is_some() {
                return Err(Error::IllegalOp(format!("edge ({a}, {b}) has no vacant endpoint")));
            }
        }
    }
    Ok(())
}

fn apply_slots<T: Copy>(slots: &mut [Option<T>], g: &SwapGraph, idx: &GraphIndex, op: &SwapOp) -> Result<()> {
    check_op(slots, g, idx, op)?;
    match *op {
        SwapOp::TypeI { loop_index, steps } => rotate_slots(slots, &g.loops[loop_index], steps),
        SwapOp::TypeII { edge: (a, b) } => slots.swap(a, b),
    }
    Ok(())
}

pub fn apply_op(occ: &Occupancy, g: &SwapGraph, op: &SwapOp) -> Result<Occupancy> {
    let mut slots = occ.slots.clone();
    apply_slots(&mut slots, g, &g.index(), op)?;
    Ok(Occupancy::new(slots))
}

/// In-place `apply_op` with a prebuilt index.
pub fn apply_op_indexed(occ: &mut Occupancy, g: &SwapGraph, idx: &GraphIndex, op: &SwapOp) -> Result<()> {
    apply_slots(&mut occ.slots, g, idx, op)
}

/// Drops moves between two vacant vertices, which change nothing.
fn drop_idle_moves(g: &SwapGraph, idx: &GraphIndex, start: &Occupancy, ops: Vec<SwapOp>) -> Result<Vec<SwapOp>> {
    let mut slots = start.slots.clone();
    let mut kept = Vec::with_capacity(ops.len());
    for op in ops {
        if let SwapOp::TypeII { edge: (a, b) } = op {
            if slots.get(a).is_some_and(Option::is_none) && slots.get(b).is_some_and(Option::is_none) {
                continue;
            }
        }
        apply_slots(&mut slots, g, idx, &op)?;
        kept.push(op);
    }
    Ok(kept)
}

/// Applies `ops` in order, failing on the first illegal one.
pub fn execute(g: &SwapGraph, start: &Occupancy, ops: &[SwapOp]) -> Result<Occupancy> {
    let idx = g.index();
    let mut slots = start.slots.clone();
    for op in ops {
        apply_slots(&mut slots, g, &idx, op)?;
    }
    Ok(Occupancy::new(slots))
}

/// Mutable planning state. Every vertex except `blank` holds a token; extra
/// vacancies of the input are represented by phantom tokens.
struct Board<'g> {
    g: &'g SwapGraph,
    idx: GraphIndex,
    slot: Vec<Option<usize>>,
    pos: Vec<VertexId>,
    blank: VertexId,
    ops: Vec<SwapOp>,
    stats: PlannerStats,
}

/// Iteration cap of the carrying phase before the exhaustive fallback.
fn carry_cap(n: usize) -> usize {
    4 * n + 16
}

const FALLBACK_STATE_LIMIT: usize = 4_000_000;

impl<'g> Board<'g> {
    /// Builds a board; returns it with the token assigned to each occupied
    /// vertex's agent and the phantom tokens' start vertices.
    fn new(g: &'g SwapGraph, occ: &Occupancy) -> Result<(Self, Vec<Option<AgentId>>)> {
        let vac = occ.vacancies();
        let Some(&blank) = vac.first() else {
            return Err(Error::IllegalOp("occupancy has no vacant vertex".into()));
        };
        let n = g.num_vertices();
        let mut slot = vec![None; n];
        let mut pos = Vec::new();
        let mut agent_of = Vec::new();
        for v in 0..n {
            if v == blank {
                continue;
            }
            slot[v] = Some(pos.len());
            pos.push(v);
            agent_of.push(occ.slots[v]);
        }
        let board = Board { g, idx: g.index(), slot, pos, blank, ops: Vec::new(), stats: PlannerStats::default() };
        Ok((board, agent_of))
    }

    fn loop_len(&self, l: usize) -> usize {
        self.g.loops[l].len()
    }

    fn at(&self, l: usize, i: i64) -> VertexId {
        let cyc = &self.g.loops[l];
        cyc[i.rem_euclid(cyc.len() as i64) as usize]
    }

    fn index_in(&self, v: VertexId, l: usize) -> i64 {
        self.idx.pos_in_loop(v, l).expect("vertex on loop") as i64
    }

    fn push(&mut self, op: SwapOp) {
        match op {
            SwapOp::TypeI { loop_index, steps } => {
                let k = self.loop_len(loop_index) as i64;
                let mut s = steps.rem_euclid(k);
                if s > k / 2 {
                    s -= k;
                }
                if s == 0 {
                    return;
                }
                rotate_slots(&mut self.slot, &self.g.loops[loop_index], s);
                for &v in &self.g.loops[loop_index] {
                    match self.slot[v] {
                        Some(t) => self.pos[t] = v,
                        None => self.blank = v,
                    }
                }
                self.ops.push(SwapOp::TypeI { loop_index, steps: s });
            }
            SwapOp::TypeII { edge: (a, b) } => {
                debug_assert!(self.idx.has_edge(a, b));
                debug_assert!(a == self.blank || b == self.blank);
                self.slot.swap(a, b);
                for v in [a, b] {
                    match self.slot[v] {
                        Some(t) => self.pos[t] = v,
                        None => self.blank = v,
                    }
                }
                self.ops.push(op);
            }
        }
    }

    fn rotate(&mut self, l: usize, steps: i64) {
        self.push(SwapOp::TypeI { loop_index: l, steps });
    }

    fn slide(&mut self, a: VertexId, b: VertexId) {
        self.push(SwapOp::TypeII { edge: (a, b) });
    }

    /// Rotates loop `l` so that the content of `from` lands on `to`.
    fn rotate_to(&mut self, l: usize, from: VertexId, to: VertexId) {
        let s = self.index_in(to, l) - self.index_in(from, l);
        self.rotate(l, s);
    }

    /// Replays the inverse of `ops[mark..end]`.
    fn undo(&mut self, mark: usize, end: usize) {
        let inv = reverse_ops(&self.ops[mark..end]);
        for op in inv {
            self.push(op);
        }
    }

    /// Breadth-first path of the blank to the first vertex satisfying
    /// `target`, never entering `blocked` vertices.
    fn blank_path(&self, target: impl Fn(VertexId) -> bool, blocked: impl Fn(VertexId) -> bool) -> Option<Vec<VertexId>> {
        let n = self.slot.len();
        let mut prev = vec![usize::MAX; n];
        let start = self.blank;
        prev[start] = start;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            if target(v) {
                let mut path = vec![v];
                let mut c = v;
                while c != start {
                    c = prev[c];
                    path.push(c);
                }
                path.reverse();
                return Some(path);
            }
            for &w in &self.idx.adj[v] {
                if prev[w] == usize::MAX && !blocked(w) {
                    prev[w] = v;
                    queue.push_back(w);
                }
            }
        }
        None
    }

    fn walk(&mut self, path: &[VertexId]) {
        for w in path.windows(2) {
            self.slide(w[0], w[1]);
        }
    }

    fn move_blank_to(&mut self, target: VertexId) {
        let path = self.blank_path(|v| v == target, |_| false).expect("swap graphs are connected");
        self.walk(&path);
    }

    /// Exchanges two tokens lying on loop `l`; restores everything else.
    fn same_loop(&mut self, l: usize, tp: usize, tq: usize) {
        let mark = self.ops.len();
        // park the blank on a vertex x outside l next to some y on l
        if self.idx.in_loop(self.blank, l) {
            let k = self.loop_len(l) as i64;
            let ib = self.index_in(self.blank, l);
            let mut best: Option<(i64, VertexId, VertexId)> = None;
            for &y in &self.g.loops[l] {
                let d = (self.index_in(y, l) - ib).rem_euclid(k);
                let cost = d.min(k - d);
                for &x in &self.idx.adj[y] {
                    if !self.idx.in_loop(x, l) && best.map_or(true, |(c, _, _)| cost < c) {
                        best = Some((cost, y, x));
                    }
                }
            }
            let (_, y, x) = best.expect("every loop has a neighbor outside it");
            self.rotate_to(l, self.blank, y);
            self.slide(y, x);
        } else {
            let idx = &self.idx;
            let path = self
                .blank_path(|v| idx.adj[v].iter().any(|&w| idx.in_loop(w, l)), |v| idx.in_loop(v, l))
                .expect("the vacancy can reach the loop");
            self.walk(&path);
        }
        let x = self.blank;
        let y = *self.idx.adj[x].iter().find(|&&w| self.idx.in_loop(w, l)).expect("exit next to loop");
        let k = self.loop_len(l) as i64;
        let e = self.index_in(y, l);
        self.rotate_to(l, self.pos[tp], y);
        let iq = self.index_in(self.pos[tq], l);
        let d = if iq == (e + 1).rem_euclid(k) {
            1
        } else if iq == (e - 1).rem_euclid(k) {
            -1
        } else {
            // pull tp out, bring tq next to its slot, walk the blank home
            self.slide(x, y);
            let up = (iq - e - 1).rem_euclid(k);
            let down = (e - 1 - iq).rem_euclid(k);
            let d = if up <= down { 1 } else { -1 };
            self.rotate(l, e + d - iq);
            let mut b = self.index_in(self.blank, l);
            while b != e {
                let nb = b + d;
                self.slide(self.at(l, b), self.at(l, nb));
                b = nb.rem_euclid(k);
            }
            self.slide(x, y);
            d
        };
        let pre = self.ops.len();
        self.slide(x, y);
        self.rotate(l, -d);
        self.slide(self.at(l, e - d), y);
        self.slide(x, y);
        self.rotate(l, d);
        self.undo(mark, pre);
    }

    /// Moves `tq` one loop closer (in loop changes) to `tp`.
    fn carry_step(&mut self, tq: usize, tp: usize, protect_tp: bool) -> bool {
        let path = lowest_cost_path(&self.idx, self.pos[tq], self.pos[tp]).expect("connected");
        let l0 = path[0].1;
        let Some(c) = path.iter().position(|&(_, l)| l != l0) else {
            return false;
        };
        let (y, _) = path[c - 1];
        let (z, l1) = path[c];
        if self.idx.in_loop(z, l0) {
            self.rotate_to(l0, self.pos[tq], z);
            return true;
        }
        if self.idx.in_loop(y, l1) {
            self.rotate_to(l0, self.pos[tq], y);
            return true;
        }
        self.rotate_to(l0, self.pos[tq], y);
        if self.pos[tp] == z {
            // step tp aside along its loop so tq can take z
            self.rotate(l1, 1);
        }
        let ptp = self.pos[tp];
        let blocked = |v: VertexId| v == y || (protect_tp && v == ptp);
        if let Some(p) = self.blank_path(|v| v == z, blocked) {
            self.walk(&p);
            self.slide(y, z);
            return true;
        }
        let idx = &self.idx;
        if let Some(p) = self.blank_path(|v| v != y && idx.in_loop(v, l0), blocked) {
            self.walk(&p);
            let s = self.index_in(y, l0) - self.index_in(self.blank, l0);
            self.rotate(l0, s);
            self.slide(y, z);
            self.rotate(l0, -s);
            self.slide(y, z);
            return true;
        }
        if let Some(p) = self.blank_path(|v| idx.adj[v].contains(&y), blocked) {
            self.walk(&p);
            let c = self.blank;
            self.rotate(l0, 1);
            self.slide(c, y);
            self.slide(y, z);
            self.rotate(l0, -1);
            self.slide(y, z);
            return true;
        }
        false
    }

    /// Searches positions of (tp, tq, blank) until tp and tq share a loop.
    fn fallback(&mut self, tp: usize, tq: usize) -> Result<()> {
        type State = (VertexId, VertexId, VertexId);
        let start: State = (self.pos[tp], self.pos[tq], self.blank);
        let mut parent: HashMap<State, (State, SwapOp)> = HashMap::new();
        let mut queue = VecDeque::from([start]);
        let mut seen = std::collections::HashSet::from([start]);
        let mut found = None;
        while let Some(s) = queue.pop_front() {
            if self.idx.common_loop(s.0, s.1).is_some() {
                found = Some(s);
                break;
            }
            if seen.len() > FALLBACK_STATE_LIMIT {
                break;
            }
            let mut next = Vec::new();
            for &w in &self.idx.adj[s.2] {
                let mv = |p: VertexId| if p == w { s.2 } else { p };
                next.push(((mv(s.0), mv(s.1), w), SwapOp::TypeII { edge: (s.2, w) }));
            }
            for l in 0..self.g.loops.len() {
                for st in [1i64, -1] {
                    let rot = |p: VertexId| match self.idx.pos_in_loop(p, l) {
                        Some(i) => self.at(l, i as i64 + st),
                        None => p,
                    };
                    next.push(((rot(s.0), rot(s.1), rot(s.2)), SwapOp::TypeI { loop_index: l, steps: st }));
                }
            }
            for (ns, op) in next {
                if seen.insert(ns) {
                    parent.insert(ns, (s, op));
                    queue.push_back(ns);
                }
            }
        }
        let mut s = found.ok_or_else(|| Error::IllegalOp("exchange search exhausted".into()))?;
        let mut seq = Vec::new();
        while s != start {
            let (p, op) = parent[&s];
            seq.push(op);
            s = p;
        }
        for op in seq.into_iter().rev() {
            self.push(op);
        }
        Ok(())
    }

    /// Exchanges the tokens `tp` and `tq`, leaving every other vertex as it was.
    fn exchange_tokens(&mut self, tp: usize, tq: usize) -> Result<()> {
        if tp == tq {
            return Ok(());
        }
        self.stats.exchanges += 1;
        let mark = self.ops.len();
        let cap = carry_cap(self.slot.len());
        let mut steps = 0;
        let mut fell_back = false;
        loop {
            if let Some(l) = self.idx.common_loop(self.pos[tp], self.pos[tq]) {
                let setup_end = self.ops.len();
                self.same_loop(l, tp, tq);
                self.undo(mark, setup_end);
                return Ok(());
            }
            steps += 1;
            if steps > cap {
                if !fell_back {
                    self.stats.fallbacks += 1;
                    fell_back = true;
                }
                self.fallback(tp, tq)?;
                continue;
            }
            if self.carry_step(tq, tp, true) || self.carry_step(tp, tq, true) {
                continue;
            }
            if self.idx.common_loop(self.pos[tp], self.pos[tq]).is_none() && !self.carry_step(tq, tp, false) {
                return Err(Error::IllegalOp("could not bring the tokens together".into()));
            }
        }
    }

    fn exchange_vertices(&mut self, p: VertexId, q: VertexId) -> Result<()> {
        let (Some(tp), Some(tq)) = (self.slot[p], self.slot[q]) else {
            return Err(Error::IllegalOp("exchange needs two occupied vertices".into()));
        };
        self.exchange_tokens(tp, tq)
    }
}

pub fn move_vacancy(g: &SwapGraph, occ: &Occupancy, target: VertexId) -> Result<Vec<SwapOp>> {
    let (mut b, _) = Board::new(g, occ)?;
    b.move_blank_to(target);
    Ok(b.ops)
}

fn exchange_with(g: &SwapGraph, occ: &Occupancy, v: VertexId, v2: VertexId) -> Result<Vec<SwapOp>> {
    if v == v2 {
        return Ok(Vec::new());
    }
    let (mut b, _) = Board::new(g, occ)?;
    if occ.slots[v].is_none() || occ.slots[v2].is_none() {
        return Err(Error::IllegalOp("exchange needs two occupied vertices".into()));
    }
    b.exchange_vertices(v, v2)?;
    Ok(b.ops)
}

pub fn exchange_same_loop(g: &SwapGraph, occ: &Occupancy, v: VertexId, v2: VertexId) -> Result<Vec<SwapOp>> {
    if v != v2 && g.index().common_loop(v, v2).is_none() {
        return Err(Error::IllegalOp(format!("vertices {v} and {v2} share no loop")));
    }
    exchange_with(g, occ, v, v2)
}

pub fn exchange_connected_loops(g: &SwapGraph, occ: &Occupancy, v: VertexId, v2: VertexId) -> Result<Vec<SwapOp>> {
    exchange_with(g, occ, v, v2)
}

pub fn exchange(g: &SwapGraph, occ: &Occupancy, v: VertexId, v2: VertexId) -> Result<Vec<SwapOp>> {
    exchange_with(g, occ, v, v2)
}

pub fn plan_permutation(g: &SwapGraph, start: &Occupancy, goal: &Occupancy) -> Result<Plan> {
    plan_permutation_with_stats(g, start, goal).map(|(p, _)| p)
}

pub fn plan_permutation_with_stats(g: &SwapGraph, start: &Occupancy, goal: &Occupancy) -> Result<(Plan, PlannerStats)> {
    let violations = validate(g);
    if !violations.is_empty() {
        return Err(Error::InvalidGraph(violations));
    }
    let n = g.num_vertices();
    if start.slots.len() != n || goal.slots.len() != n {
        return Err(Error::AssignmentMismatch);
    }
    if !start.is_consistent() || !goal.is_consistent() || start.agents() != goal.agents() {
        return Err(Error::AssignmentMismatch);
    }
    let (mut board, agent_of) = Board::new(g, start)?;
    let blank0 = board.blank;
    let goal_vacant: Vec<VertexId> = goal.vacancies();
    let start_vacant: Vec<VertexId> = start.vacancies();
    let final_blank = if goal_vacant.contains(&blank0) {
        blank0
    } else {
        *goal_vacant.iter().find(|v| !start_vacant.contains(v)).unwrap_or(&goal_vacant[0])
    };

    // goal vertex of every token; phantoms fill the spare goal vacancies
    let mut goal_pos = vec![usize::MAX; agent_of.len()];
    let mut spare: Vec<VertexId> = goal_vacant.iter().copied().filter(|&v| v != final_blank).collect();
    let mut phantoms = Vec::new();
    for (t, a) in agent_of.iter().enumerate() {
        match a {
            Some(a) => goal_pos[t] = goal.vertex_of(*a).expect("same agent set"),
            None => {
                let v = board.pos[t];
                if let Some(k) = spare.iter().position(|&s| s == v) {
                    goal_pos[t] = spare.remove(k);
                } else {
                    phantoms.push(t);
                }
            }
        }
    }
    for (t, v) in phantoms.into_iter().zip(spare) {
        goal_pos[t] = v;
    }

    board.move_blank_to(final_blank);

    let mut visited = vec![false; n];
    let mut cycles: Vec<Vec<VertexId>> = Vec::new();
    for v in 0..n {
        if visited[v] || v == board.blank {
            continue;
        }
        let mut cyc = Vec::new();
        let mut c = v;
        while !visited[c] {
            visited[c] = true;
            cyc.push(c);
            c = goal_pos[board.slot[c].expect("occupied")];
        }
        if cyc.len() > 1 {
            cycles.push(cyc);
        }
    }
    cycles.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    for cyc in cycles {
        let c0 = cyc[0];
        loop {
            let t = board.slot[c0].expect("occupied");
            let dest = goal_pos[t];
            if dest == c0 {
                break;
            }
            board.exchange_vertices(c0, dest)?;
        }
    }
    let reached = execute(g, start, &board.ops)?;
    if reached != *goal {
        return Err(Error::IllegalOp("plan does not reach the goal".into()));
    }
    let stats = board.stats;
    let ops = drop_idle_moves(g, &board.idx, start, board.ops)?;
    Ok((Plan { ops, start: start.clone(), goal: goal.clone() }, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{four_loop_graph, four_loop_label, minimal_graph, random_instance, random_swap_graph, triangle_chain};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn one_vacancy(n: usize, vac: VertexId) -> Occupancy {
        Occupancy::new((0..n).map(|v| if v == vac { None } else { Some(100 + v) }).collect())
    }

    fn assert_exchanged(g: &SwapGraph, occ: &Occupancy, ops: &[SwapOp], v: VertexId, v2: VertexId) {
        let out = execute(g, occ, ops).unwrap();
        for u in 0..g.num_vertices() {
            let expect = if u == v {
                occ.slots[v2]
            } else if u == v2 {
                occ.slots[v]
            } else {
                occ.slots[u]
            };
            assert_eq!(out.slots[u], expect, "vertex {u}");
        }
    }

    #[test]
    fn type_one_full_turn_is_identity() {
        let g = four_loop_graph();
        let occ = one_vacancy(17, 0);
        let op = SwapOp::TypeI { loop_index: 0, steps: 4 };
        assert_eq!(apply_op(&occ, &g, &op).unwrap(), occ);
        let one = apply_op(&occ, &g, &SwapOp::TypeI { loop_index: 0, steps: 1 }).unwrap();
        assert_eq!(one.slots[1], occ.slots[0]);
    }

    #[test]
    fn type_two_needs_a_vacancy() {
        let g = four_loop_graph();
        let occ = one_vacancy(17, 0);
        let moved = apply_op(&occ, &g, &SwapOp::TypeII { edge: (0, 1) }).unwrap();
        assert_eq!(moved.slots[0], occ.slots[1]);
        assert!(moved.slots[1].is_none());
        assert!(matches!(apply_op(&occ, &g, &SwapOp::TypeII { edge: (1, 2) }), Err(Error::IllegalOp(_))));
        assert!(matches!(apply_op(&occ, &g, &SwapOp::TypeII { edge: (0, 2) }), Err(Error::IllegalOp(_))));
    }

    #[test]
    fn vacancy_moves_along_shortest_path() {
        let g = four_loop_graph();
        let occ = one_vacancy(17, four_loop_label(1));
        assert!(move_vacancy(&g, &occ, four_loop_label(1)).unwrap().is_empty());
        let ops = move_vacancy(&g, &occ, four_loop_label(3)).unwrap();
        assert_eq!(ops.len(), 2);
        let out = execute(&g, &occ, &ops).unwrap();
        assert_eq!(out.vacancies(), vec![four_loop_label(3)]);
    }

    #[test]
    fn same_loop_exchange_on_minimal_graph() {
        let g = minimal_graph();
        for vac in 0..6 {
            let occ = one_vacancy(6, vac);
            for v in 0..6 {
                for v2 in 0..6 {
                    if v == vac || v2 == vac || g.index().common_loop(v, v2).is_none() {
                        continue;
                    }
                    let ops = exchange_same_loop(&g, &occ, v, v2).unwrap();
                    assert_exchanged(&g, &occ, &ops, v, v2);
                }
            }
        }
    }

    #[test]
    fn connected_loop_exchange_on_chain_with_far_vacancy() {
        let g = triangle_chain(3);
        let occ = one_vacancy(9, 8);
        let ops = exchange_connected_loops(&g, &occ, 0, 4).unwrap();
        assert_exchanged(&g, &occ, &ops, 0, 4);
    }

    #[test]
    fn four_loop_exchange_two_and_sixteen() {
        let g = four_loop_graph();
        let occ = one_vacancy(17, four_loop_label(1));
        let ops = exchange(&g, &occ, four_loop_label(2), four_loop_label(16)).unwrap();
        assert_exchanged(&g, &occ, &ops, four_loop_label(2), four_loop_label(16));
    }

    #[test]
    fn random_exchanges_restore_everything_else() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let g = random_swap_graph(&mut rng, 30);
            let n = g.num_vertices();
            let vac = rng.gen_range(0..n);
            let occ = one_vacancy(n, vac);
            let v = (vac + 1 + rng.gen_range(0..n - 1)) % n;
            let mut v2 = (vac + 1 + rng.gen_range(0..n - 1)) % n;
            if v2 == v {
                v2 = (0..n).find(|&u| u != v && u != vac).unwrap();
            }
            let ops = exchange(&g, &occ, v, v2).unwrap();
            assert_exchanged(&g, &occ, &ops, v, v2);
            assert!(ops.len() <= 40 * n, "{} ops for |V| = {n}", ops.len());
        }
    }

    #[test]
    fn random_permutations_are_planned() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let g = random_swap_graph(&mut rng, 40);
            let (start, goal) = random_instance(&mut rng, &g);
            let plan = plan_permutation(&g, &start, &goal).unwrap();
            assert_eq!(execute(&g, &start, &plan.ops).unwrap(), goal);
            let back = execute(&g, &goal, &reverse_ops(&plan.ops)).unwrap();
            assert_eq!(back, start);
        }
    }

    #[test]
    fn several_vacancies_are_handled() {
        let g = four_loop_graph();
        let start = Occupancy::new((0..17).map(|v| if v % 5 == 0 { None } else { Some(v) }).collect());
        let mut goal_slots = start.slots.clone();
        goal_slots.rotate_left(3);
        let goal = Occupancy::new(goal_slots);
        let plan = plan_permutation(&g, &start, &goal).unwrap();
        assert_eq!(execute(&g, &start, &plan.ops).unwrap(), goal);
    }

    #[test]
    fn identity_needs_no_exchange() {
        let g = four_loop_graph();
        let occ = one_vacancy(17, 4);
        let plan = plan_permutation(&g, &occ, &occ).unwrap();
        assert!(plan.ops.is_empty());
    }

    #[test]
    fn mismatched_agents_are_rejected() {
        let g = minimal_graph();
        let a = one_vacancy(6, 0);
        let mut b = a.clone();
        b.slots[1] = Some(999);
        assert!(matches!(plan_permutation(&g, &a, &b), Err(Error::AssignmentMismatch)));
        let mut bad = minimal_graph();
        bad.inter_edges.clear();
        assert!(matches!(plan_permutation(&bad, &a, &a), Err(Error::InvalidGraph(_))));
    }
}
