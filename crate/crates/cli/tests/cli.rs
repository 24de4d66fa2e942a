use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use loopswap::io::write_json;
use loopswap::pipeline::RunReport;
use loopswap::scenario::Scenario;
use loopswap::Workspace;

struct Sandbox(PathBuf);

impl Sandbox {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("loopswap-cli-{tag}-{}", std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        fs::create_dir_all(&dir).unwrap();
        Sandbox(dir)
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.join(name)
    }

    fn scenario(&self, name: &str, w: f64, h: f64, agents: usize) -> PathBuf {
        let mut s = Scenario::new(name, Workspace::rectangle(w, h), 1.0);
        s.random_agents = Some(agents);
        s.params.seed = Some(4);
        let p = self.path(&format!("{name}.json"));
        write_json(&p, &s).unwrap();
        p
    }
}

impl Drop for Sandbox {
    fn drop(&mut self) {
        let _ = fs::remove_dir_all(&self.0);
    }
}

fn run(args: &[&str], scenario: &Path, out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loopswap"))
        .args(args)
        .arg("--scenario")
        .arg(scenario)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn plan_exec_verify_render_round() {
    let sb = Sandbox::new("round");
    let sc = sb.scenario("box", 20.0, 20.0, 10);
    let out = sb.path("out");

    let o = run(&["plan"], &sc, &out);
    assert!(o.status.success(), "{}", stderr(&o));
    for f in ["graph.json", "plan.json", "trajectories.csv", "report.json", "scene.svg"] {
        assert!(out.join(f).exists(), "{f} missing");
    }
    let rep: RunReport = loopswap::io::read_json(&out.join("report.json")).unwrap();
    assert_eq!(rep.agents, 10);
    assert_eq!(rep.verification.unwrap().violations, 0);

    let o = run(&["exec", "--dt", "0.5"], &sc, &out);
    assert!(o.status.success(), "{}", stderr(&o));
    let samples = fs::read_to_string(out.join("samples.csv")).unwrap();
    assert!(samples.starts_with("t,agent,x,y\n"));

    let o = run(&["verify"], &sc, &out);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(String::from_utf8_lossy(&o.stdout).contains("violations 0"));

    let o = run(&["render", "--dt", "100"], &sc, &out);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(out.join("frames/frame_00000.svg").exists());
}

#[test]
fn convert_writes_graph_and_drawing() {
    let sb = Sandbox::new("convert");
    let sc = sb.scenario("box", 20.0, 12.0, 0);
    let out = sb.path("out");
    let o = run(&["convert", "--kmax", "1"], &sc, &out);
    assert!(o.status.success(), "{}", stderr(&o));
    let res: loopswap::conversion::ConversionResult = loopswap::io::read_json(&out.join("graph.json")).unwrap();
    assert_eq!(res.circles.len(), 1);
    assert!(fs::read_to_string(out.join("graph.svg")).unwrap().contains(r#"class="loop""#));
}

#[test]
fn max_agents_caps_the_run() {
    let sb = Sandbox::new("cap");
    let sc = sb.scenario("box", 20.0, 20.0, 12);
    let out = sb.path("out");
    let o = run(&["plan", "--max-agents", "3", "--seed", "9"], &sc, &out);
    assert!(o.status.success(), "{}", stderr(&o));
    let rep: RunReport = loopswap::io::read_json(&out.join("report.json")).unwrap();
    assert_eq!(rep.agents, 3);
}

#[test]
fn failures_name_their_stage() {
    let sb = Sandbox::new("fail");
    let out = sb.path("out");

    let corridor = sb.scenario("corridor", 60.0, 4.0, 3);
    let o = run(&["plan"], &corridor, &out);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("plan: convert: insufficient capacity"), "{}", stderr(&o));

    let o = run(&["plan"], &sb.path("missing.json"), &out);
    assert!(!o.status.success());
    assert!(stderr(&o).starts_with("error: plan: io:"), "{}", stderr(&o));

    let sc = sb.scenario("box", 20.0, 20.0, 4);
    let o = run(&["exec"], &sc, &sb.path("empty"));
    assert!(!o.status.success());
    assert!(stderr(&o).contains("exec: io:"));
}

#[test]
fn verify_rejects_overlapping_tracks() {
    let sb = Sandbox::new("overlap");
    let sc = sb.scenario("box", 20.0, 20.0, 0);
    let out = sb.path("out");
    fs::create_dir_all(&out).unwrap();
    // two agents swap places head on
    let csv = "agent,kind,t0,t1,from_x,from_y,to_x,to_y,center_x,center_y,radius,a0,a1\n\
               0,line,0,6,5,10,11,10,,,,,\n\
               1,line,0,6,11,10,5,10,,,,,\n";
    fs::write(out.join("trajectories.csv"), csv).unwrap();
    let o = run(&["verify"], &sc, &out);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("verify: verify:"), "{}", stderr(&o));
    assert!(String::from_utf8_lossy(&o.stdout).contains("Collision"));
}

#[test]
fn bench_reads_a_directory() {
    let sb = Sandbox::new("bench");
    let suite = sb.path("suite");
    fs::create_dir_all(&suite).unwrap();
    for (name, n) in [("a", 5), ("b", 8)] {
        let mut s = Scenario::new(name, Workspace::rectangle(20.0, 20.0), 1.0);
        s.random_agents = Some(n);
        write_json(&suite.join(format!("{name}.json")), &s).unwrap();
    }
    let out = sb.path("out");
    let o = run(&["bench", "--trials", "2"], &suite, &out);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows: Vec<loopswap::benchmark::BenchRow> = loopswap::io::read_json(&out.join("bench.json")).unwrap();
    assert_eq!(rows.iter().map(|r| (r.scenario.as_str(), r.successes)).collect::<Vec<_>>(), [("a", 2), ("b", 2)]);
}
