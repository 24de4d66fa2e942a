//! Randomized trials over a scenario suite.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::pipeline::{run_pipeline, PipelineOptions};
use crate::scenario::Scenario;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub scenario: String,
    pub agents: usize,
    pub density: f64,
    pub trials: usize,
    pub successes: usize,
    pub median_seconds: f64,
    pub max_seconds: f64,
    pub median_ops: usize,
    pub max_ops: usize,
    pub vertices: usize,
    /// First error message seen, if any trial failed.
    pub first_error: Option<String>,
}

impl BenchRow {
    pub fn success_rate(&self) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        self.successes as f64 / self.trials as f64
    }
}

fn median<T: Copy + PartialOrd>(xs: &mut [T]) -> Option<T> {
    xs.sort_by(|a, b| a.partial_cmp(b).expect("comparable"));
    xs.get(xs.len() / 2).copied()
}

/// Runs `trials` random start/goal draws per scenario. Trial `k` of every
/// scenario uses seed `seed + k`; the agent count is `random_agents` or the
/// number of listed agents. Times exclude verification.
pub fn run_bench(suite: &[Scenario], trials: usize, seed: u64, opts: PipelineOptions) -> Vec<BenchRow> {
    suite
        .iter()
        .map(|base| {
            let count = base.random_agents.unwrap_or(base.agents.len());
            let count = opts.max_agents.map_or(count, |m| count.min(m));
            let mut times = Vec::new();
            let mut ops = Vec::new();
            let mut density = 0.0;
            let mut vertices = 0;
            let mut first_error = None;
            for k in 0..trials {
                let mut s = base.clone();
                s.agents.clear();
                s.random_agents = Some(count);
                s.params.seed = Some(seed + k as u64);
                let outcome = run_pipeline(&s, opts).and_then(|out| out.ensure_clean().map(|_| out));
                match outcome {
                    Ok(out) => {
                        times.push(out.report.timings.planning_total());
                        ops.push(out.report.ops);
                        density = out.report.density;
                        vertices = out.report.vertices;
                    }
                    Err(e) => {
                        first_error.get_or_insert_with(|| e.to_string());
                    }
                }
            }
            BenchRow {
                scenario: base.name.clone(),
                agents: count,
                density,
                trials,
                successes: times.len(),
                median_seconds: median(&mut times.clone()).unwrap_or(f64::NAN),
                max_seconds: times.iter().copied().fold(f64::NAN, f64::max),
                median_ops: median(&mut ops.clone()).unwrap_or(0),
                max_ops: ops.iter().copied().max().unwrap_or(0),
                vertices,
                first_error,
            }
        })
        .collect()
}

pub fn format_table(rows: &[BenchRow]) -> String {
    let mut out = String::from("scenario              agents  density  |V|  success  median_s  max_s    median_ops  max_ops\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{:<20}  {:>6}  {:>7.3}  {:>4}  {:>3}/{:<3}  {:>8.3}  {:>7.3}  {:>10}  {:>7}",
            r.scenario, r.agents, r.density, r.vertices, r.successes, r.trials, r.median_seconds, r.max_seconds, r.median_ops, r.max_ops
        );
        if let Some(e) = &r.first_error {
            let _ = writeln!(out, "  first failure: {e}");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Workspace;

    #[test]
    fn fixed_seed_rows_repeat() {
        let mut s = Scenario::new("box", Workspace::rectangle(20.0, 20.0), 1.0);
        s.random_agents = Some(8);
        let opts = PipelineOptions { verify: false, max_agents: None };
        let a = run_bench(std::slice::from_ref(&s), 1, 3, opts);
        let b = run_bench(std::slice::from_ref(&s), 1, 3, opts);
        assert_eq!(a[0].successes, 1);
        assert_eq!((a[0].median_ops, a[0].vertices), (b[0].median_ops, b[0].vertices));
        assert!(format_table(&a).contains("box"));
    }
}
