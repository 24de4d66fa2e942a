//! Problem instances: workspace, agent radius, starts, goals and run parameters.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::conversion::GreedyParams;
use crate::error::{Error, Result};
use crate::geometry::{clearance, Point2, Workspace};
use crate::swap_graph::AgentId;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgentSpec {
    pub id: AgentId,
    pub start: Point2,
    pub goal: Point2,
}

/// Run parameters; unset lengths default to multiples of the agent radius.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_resolution: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    #[serde(default)]
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub workspace: Workspace,
    pub r: f64,
    #[serde(default)]
    pub agents: Vec<AgentSpec>,
    /// When `agents` is empty, this many agents are drawn from `params.seed`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random_agents: Option<usize>,
    #[serde(default)]
    pub params: Params,
}

/// Fraction of the agent radius kept as slack when drawing random positions.
const PLACEMENT_MARGIN: f64 = 0.05;
const PLACEMENT_TRIES: usize = 200_000;

impl Scenario {
    pub fn new(name: &str, workspace: Workspace, r: f64) -> Self {
        Self {
            name: name.to_string(),
            description: String::new(),
            workspace,
            r,
            agents: Vec::new(),
            random_agents: None,
            params: Params::default(),
        }
    }

    pub fn greedy_params(&self) -> GreedyParams {
        let mut g = GreedyParams::new(self.r);
        if let Some(e) = self.params.epsilon {
            g.epsilon = e;
        }
        if let Some(h) = self.params.grid_resolution {
            g.grid_resolution = h;
        }
        if let Some(k) = self.params.k_max {
            g.k_max = k;
        }
        g.threshold = self.params.threshold;
        g
    }

    pub fn dt(&self) -> f64 {
        self.params.dt.unwrap_or(0.05 * self.r)
    }

    pub fn seed(&self) -> u64 {
        self.params.seed.unwrap_or(0)
    }

    /// Fraction of free area covered by agent disks.
    pub fn density(&self) -> f64 {
        self.agents.len() as f64 * std::f64::consts::PI * self.r * self.r / self.workspace.free_area()
    }

    /// Fills in random agents if requested and caps the count at `max_agents`.
    pub fn resolved(&self, max_agents: Option<usize>) -> Result<Scenario> {
        let mut s = self.clone();
        if s.agents.is_empty() {
            if let Some(n) = s.random_agents {
                let n = max_agents.map_or(n, |m| n.min(m));
                s.agents = random_agents(&s.workspace, s.r, n, s.seed())?;
            }
        } else if let Some(m) = max_agents {
            s.agents.truncate(m);
        }
        s.random_agents = None;
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidScenario(m));
        if !(self.r > 0.0 && self.r.is_finite()) {
            return bad(format!("agent radius {} is not positive", self.r));
        }
        if self.params.dt.is_some_and(|d| !(d > 0.0)) {
            return bad("dt must be positive".into());
        }
        let tol = 1e-9 * self.r;
        for (k, a) in self.agents.iter().enumerate() {
            if self.agents[..k].iter().any(|b| b.id == a.id) {
                return bad(format!("duplicate agent id {}", a.id));
            }
            for (what, p) in [("start", a.start), ("goal", a.goal)] {
                if !clearance(p, &self.workspace).is_ok_and(|c| c >= self.r - tol) {
                    return bad(format!("{what} of agent {} does not fit in free space", a.id));
                }
            }
            for b in &self.agents[..k] {
                if a.start.dist(b.start) < 2.0 * self.r - tol {
                    return bad(format!("starts of agents {} and {} overlap", b.id, a.id));
                }
                if a.goal.dist(b.goal) < 2.0 * self.r - tol {
                    return bad(format!("goals of agents {} and {} overlap", b.id, a.id));
                }
            }
        }
        Ok(())
    }
}

/// `n` agents with starts and goals drawn uniformly, each set pairwise
/// non-overlapping and inside free space.
pub fn random_agents(w: &Workspace, r: f64, n: usize, seed: u64) -> Result<Vec<AgentSpec>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let starts = random_positions(&mut rng, w, r, n)?;
    let goals = random_positions(&mut rng, w, r, n)?;
    Ok((0..n).map(|id| AgentSpec { id, start: starts[id], goal: goals[id] }).collect())
}

pub fn random_positions<R: Rng>(rng: &mut R, w: &Workspace, r: f64, n: usize) -> Result<Vec<Point2>> {
    let b = w.bounds();
    let m = PLACEMENT_MARGIN * r;
    let mut out: Vec<Point2> = Vec::with_capacity(n);
    let mut tries = 0;
    while out.len() < n {
        tries += 1;
        if tries > PLACEMENT_TRIES {
            return Err(Error::InvalidScenario(format!("could only place {} of {n} random agents", out.len())));
        }
        let p = Point2::new(rng.gen_range(b.min.x..b.max.x), rng.gen_range(b.min.y..b.max.y));
        if clearance(p, w).is_ok_and(|c| c >= r + m) && out.iter().all(|q| q.dist(p) >= 2.0 * r + m) {
            out.push(p);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_and_defaults() {
        let mut s = Scenario::new("box", Workspace::rectangle(20.0, 10.0), 1.0);
        s.random_agents = Some(12);
        s.params.seed = Some(4);
        let text = serde_json::to_string_pretty(&s).unwrap();
        let back: Scenario = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.dt(), 0.05);
        assert_eq!(back.greedy_params().k_max, 200);

        let minimal: Scenario =
            serde_json::from_str(r#"{"workspace":{"bounds":{"min":{"x":0,"y":0},"max":{"x":5,"y":5}}},"r":0.5}"#).unwrap();
        assert!(minimal.agents.is_empty());
        assert_eq!(minimal.greedy_params().epsilon, 0.25);
    }

    #[test]
    fn random_agents_are_valid_and_seeded() {
        let mut s = Scenario::new("box", Workspace::rectangle(20.0, 20.0), 1.0);
        s.random_agents = Some(32);
        let a = s.resolved(None).unwrap();
        assert_eq!(a.agents.len(), 32);
        assert!(a.density() > 0.25);
        assert_eq!(a, s.resolved(None).unwrap());
        assert_eq!(s.resolved(Some(5)).unwrap().agents.len(), 5);
        s.params.seed = Some(1);
        assert_ne!(a.agents, s.resolved(None).unwrap().agents);
    }

    #[test]
    fn invalid_scenarios_are_rejected() {
        let mut s = Scenario::new("box", Workspace::rectangle(10.0, 10.0), 1.0);
        let p = Point2::new(5.0, 5.0);
        s.agents = vec![AgentSpec { id: 0, start: p, goal: p }, AgentSpec { id: 1, start: Point2::new(6.0, 5.0), goal: Point2::new(2.0, 2.0) }];
        assert!(matches!(s.validate(), Err(Error::InvalidScenario(_))));
        s.agents[1].start = Point2::new(9.5, 5.0);
        assert!(s.validate().is_err());
        s.agents[1].start = Point2::new(8.0, 5.0);
        assert!(s.validate().is_ok());
        assert!(random_agents(&s.workspace, 1.0, 40, 0).is_err());
    }
}
