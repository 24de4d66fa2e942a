use std::path::{Path, PathBuf};

use loopswap::conversion::{check_conditions, ConversionResult};
use loopswap::io::{read_json, read_trajectories_csv, to_json, write_trajectories_csv};
use loopswap::pipeline::{convert_scenario, run_pipeline, PipelineOptions, RunReport};
use loopswap::planner::{execute, Plan};
use loopswap::scenario::Scenario;
use loopswap::swap_graph::validate;

fn shipped() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    v.retain(|p| p.extension().is_some_and(|x| x == "json"));
    v.sort();
    v
}

#[test]
fn shipped_graphs_are_valid_and_embedded() {
    for f in shipped() {
        let s: Scenario = read_json(&f).unwrap();
        let s = s.resolved(None).unwrap();
        let res = convert_scenario(&s).unwrap();
        assert!(validate(&res.graph).is_empty(), "{}", f.display());
        assert_eq!(check_conditions(&res, Some(&s.workspace)), Vec::<String>::new(), "{}", f.display());
        assert!(res.num_vertices() > s.agents.len(), "{}", f.display());
        assert!(!s.description.is_empty());
    }
}

#[test]
fn artifacts_round_trip_and_repeat() {
    let s: Scenario = read_json(&shipped().into_iter().find(|p| p.ends_with("obstacles.json")).unwrap()).unwrap();
    let opts = PipelineOptions { verify: false, max_agents: Some(30) };
    let a = run_pipeline(&s, opts).unwrap();
    let b = run_pipeline(&s, opts).unwrap();

    let graph = to_json(&a.conversion).unwrap();
    assert_eq!(graph, to_json(&b.conversion).unwrap());
    assert_eq!(serde_json::from_str::<ConversionResult>(&graph).unwrap(), a.conversion);

    let plan = to_json(&a.plan).unwrap();
    assert_eq!(plan, to_json(&b.plan).unwrap());
    let back: Plan = serde_json::from_str(&plan).unwrap();
    assert_eq!(execute(&a.conversion.graph, &back.start, &back.ops).unwrap(), back.goal);

    let report: RunReport = serde_json::from_str(&to_json(&a.report).unwrap()).unwrap();
    assert_eq!(report.ops, a.report.ops);

    let mut csv_a = Vec::new();
    let mut csv_b = Vec::new();
    write_trajectories_csv(&mut csv_a, &a.trajectories).unwrap();
    write_trajectories_csv(&mut csv_b, &b.trajectories).unwrap();
    assert_eq!(csv_a, csv_b);
    assert_eq!(read_trajectories_csv(csv_a.as_slice()).unwrap(), a.trajectories);

    for (t, ag) in a.trajectories.tracks.iter().zip(&a.scenario.agents) {
        assert_eq!((t.agent, t.start(), t.end()), (ag.id, ag.start, ag.goal));
    }
}
