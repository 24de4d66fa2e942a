//! End-to-end run: convert, assign, navigate on, permute, navigate off, verify.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::assignment::{core_vertices, navigate_to_vertices, optimal_assignment, Assignment};
use crate::conversion::{greedy_convert, ConversionResult};
use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::planner::{plan_permutation_with_stats, Plan};
use crate::scenario::Scenario;
use crate::swap_graph::Occupancy;
use crate::trajectory::{realize_plan, verify_trajectories, TrajectorySet, VerificationReport};

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct StageTimings {
    pub convert: f64,
    pub assign: f64,
    pub navigate: f64,
    pub plan: f64,
    pub realize: f64,
    pub verify: f64,
}

impl StageTimings {
    /// Seconds spent producing the motion, verification excluded.
    pub fn planning_total(&self) -> f64 {
        self.convert + self.assign + self.navigate + self.plan + self.realize
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationSummary {
    pub dt: f64,
    pub samples: usize,
    pub min_pair_distance: f64,
    pub min_clearance_margin: f64,
    pub violations: usize,
}

impl From<(&VerificationReport, f64)> for VerificationSummary {
    fn from((r, dt): (&VerificationReport, f64)) -> Self {
        Self {
            dt,
            samples: r.samples,
            min_pair_distance: r.min_pair_distance,
            min_clearance_margin: r.min_clearance_margin,
            violations: r.violations.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub scenario: String,
    pub agents: usize,
    pub density: f64,
    pub circles: usize,
    pub loops: usize,
    pub vertices: usize,
    pub ops: usize,
    pub planner_fallbacks: usize,
    pub retargeted: usize,
    pub horizon: f64,
    pub timings: StageTimings,
    /// Absent when verification was skipped.
    pub verification: Option<VerificationSummary>,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub scenario: Scenario,
    pub conversion: ConversionResult,
    pub plan: Plan,
    pub trajectories: TrajectorySet,
    pub verification: Option<VerificationReport>,
    pub report: RunReport,
}

impl RunOutput {
    /// Fails with a verification error when any sample violated clearance.
    pub fn ensure_clean(&self) -> Result<()> {
        match &self.verification {
            Some(v) if !v.is_clean() => Err(Error::VerificationFailure(format!(
                "{} violation interval(s), min pair distance {:.6}, min clearance margin {:.6}",
                v.violations.len(),
                v.min_pair_distance,
                v.min_clearance_margin
            ))),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineOptions {
    pub verify: bool,
    pub max_agents: Option<usize>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self { verify: true, max_agents: None }
    }
}

/// Slots offered to the assignment per agent.
const CORE_FACTOR: f64 = 1.3;

fn secs(t: Instant) -> f64 {
    t.elapsed().as_secs_f64()
}

/// Conversion only, with start vertices promoted.
pub fn convert_scenario(s: &Scenario) -> Result<ConversionResult> {
    let starts: Vec<Point2> = s.agents.iter().map(|a| a.start).collect();
    greedy_convert(&s.workspace, &s.greedy_params(), &starts)
}

pub fn run_pipeline(scenario: &Scenario, opts: PipelineOptions) -> Result<RunOutput> {
    let s = scenario.resolved(opts.max_agents)?;
    let r = s.r;
    let n = s.agents.len();
    let mut tm = StageTimings::default();

    let t = Instant::now();
    let res = convert_scenario(&s)?;
    tm.convert = secs(t);
    let nv = res.num_vertices();
    if nv < n + 1 {
        return Err(Error::InsufficientCapacity { agents: n, needed: n + 1, available: nv });
    }

    let t = Instant::now();
    let core = core_vertices(&res, n, CORE_FACTOR);
    let slots: Vec<Point2> = core.iter().map(|&v| res.graph.vertices[v].position).collect();
    let starts: Vec<Point2> = s.agents.iter().map(|a| a.start).collect();
    let goals: Vec<Point2> = s.agents.iter().map(|a| a.goal).collect();
    let to_vertices = |mut a: Assignment| {
        a.mapping.iter_mut().for_each(|m| *m = core[*m]);
        a
    };
    let asg_in = to_vertices(optimal_assignment(&starts, &slots).map_err(|e| Error::AssignmentFailure(e.to_string()))?);
    let asg_out = to_vertices(optimal_assignment(&goals, &slots).map_err(|e| Error::AssignmentFailure(e.to_string()))?);
    tm.assign = secs(t);

    let t = Instant::now();
    let nav_in = navigate_to_vertices(&starts, &asg_in, &res, &s.workspace, r);
    let nav_out = navigate_to_vertices(&goals, &asg_out, &res, &s.workspace, r);
    let retargeted = nav_in.retargeted + nav_out.retargeted;
    let (traj_in, map_in) = nav_in.into_result()?;
    let (traj_out, map_out) = nav_out
        .into_result()
        .map_err(|e| Error::NavigationFailure(format!("goal side: {e}")))?;
    tm.navigate = secs(t);

    let t = Instant::now();
    let occupancy = |map: &[usize]| {
        let mut slots = vec![None; nv];
        for (i, &v) in map.iter().enumerate() {
            slots[v] = Some(i);
        }
        Occupancy::new(slots)
    };
    let (plan, stats) = plan_permutation_with_stats(&res.graph, &occupancy(&map_in), &occupancy(&map_out))?;
    tm.plan = secs(t);

    let t = Instant::now();
    let mut traj = traj_in;
    traj.append(&realize_plan(&res, &plan)?);
    traj.append(&traj_out.reversed());
    for track in &mut traj.tracks {
        let id = s.agents[track.agent].id;
        track.agent = id;
        for seg in &mut track.segments {
            seg.agent = id;
        }
    }
    traj.tracks.sort_by_key(|t| t.agent);
    tm.realize = secs(t);

    let verification = opts.verify.then(|| {
        let t = Instant::now();
        let v = verify_trajectories(&traj, &s.workspace, r, s.dt());
        tm.verify = secs(t);
        v
    });

    let report = RunReport {
        scenario: s.name.clone(),
        agents: n,
        density: s.density(),
        circles: res.circles.len(),
        loops: res.graph.loops.len(),
        vertices: nv,
        ops: plan.ops.len(),
        planner_fallbacks: stats.fallbacks,
        retargeted,
        horizon: traj.horizon,
        timings: tm,
        verification: verification.as_ref().map(|v| (v, s.dt()).into()),
    };
    Ok(RunOutput { scenario: s, conversion: res, plan, trajectories: traj, verification, report })
}
