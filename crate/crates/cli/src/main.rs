use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use loopswap::benchmark::{format_table, run_bench};
use loopswap::conversion::ConversionResult;
use loopswap::io::{load_trajectories, read_json, save_trajectories, write_json, write_samples_csv};
use loopswap::pipeline::{convert_scenario, run_pipeline, PipelineOptions, VerificationSummary};
use loopswap::planner::{execute, Plan};
use loopswap::render::{render_frame, render_svg, Layers};
use loopswap::scenario::Scenario;
use loopswap::trajectory::{realize_plan, verify_trajectories, TrajectorySet};
use loopswap::Error;

#[derive(Parser)]
#[command(name = "loopswap", version, about = "Disk robot motion planning on swap graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the swap graph of a workspace; writes graph.json and graph.svg
    Convert(Common),
    /// Run the whole pipeline; writes graph.json, plan.json, trajectories.csv, report.json and scene.svg
    Plan(Common),
    /// Replay plan.json on graph.json, check legality and the goal, write samples.csv
    Exec(Common),
    /// Check trajectories.csv for collisions and clearance at time step dt
    Verify(Common),
    /// Draw scene.svg, and frames every dt when --dt is given
    Render(Common),
    /// Randomized trials over one scenario file or a directory of them
    Bench {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 15)]
        trials: usize,
    },
}

#[derive(Args, Clone)]
struct Common {
    /// Scenario JSON file (a directory is accepted by bench)
    #[arg(long)]
    scenario: PathBuf,
    /// Directory for artifacts
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Minimum inscribed circle radius margin over the agent radius
    #[arg(long)]
    epsilon: Option<f64>,
    /// Medial axis grid spacing
    #[arg(long)]
    grid: Option<f64>,
    /// Maximum number of inscribed circles
    #[arg(long)]
    kmax: Option<usize>,
    /// Stop adding circles once the graph has this many vertices
    #[arg(long)]
    threshold: Option<usize>,
    /// Sampling step for verification, samples and frames
    #[arg(long)]
    dt: Option<f64>,
    /// Seed for random agents
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_agents: Option<usize>,
}

/// Frames beyond this count are refused rather than written.
const MAX_FRAMES: usize = 10_000;

impl Common {
    fn apply(&self, s: &mut Scenario) {
        let p = &mut s.params;
        p.epsilon = self.epsilon.or(p.epsilon);
        p.grid_resolution = self.grid.or(p.grid_resolution);
        p.k_max = self.kmax.or(p.k_max);
        p.threshold = self.threshold.or(p.threshold);
        p.dt = self.dt.or(p.dt);
        p.seed = self.seed.or(p.seed);
    }

    fn load(&self) -> Result<Scenario, Error> {
        let mut s: Scenario = read_json(&self.scenario)?;
        if s.name.is_empty() {
            s.name = self.scenario.file_stem().map_or_else(String::new, |n| n.to_string_lossy().into_owned());
        }
        self.apply(&mut s);
        s.resolved(self.max_agents)
    }

    fn out_dir(&self) -> Result<&Path, Error> {
        fs::create_dir_all(&self.out)?;
        Ok(&self.out)
    }

    fn artifact(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }
}

fn convert(c: &Common) -> Result<(), Error> {
    let s = c.load()?;
    let res = convert_scenario(&s)?;
    let out = c.out_dir()?;
    write_json(&out.join("graph.json"), &res)?;
    fs::write(out.join("graph.svg"), render_svg(&s.workspace, &Layers { conversion: Some(&res), r: s.r, ..Default::default() }))?;
    println!("circles {}  loops {}  vertices {}", res.circles.len(), res.graph.loops.len(), res.num_vertices());
    Ok(())
}

fn plan(c: &Common) -> Result<(), Error> {
    let s = c.load()?;
    let run = run_pipeline(&s, PipelineOptions { verify: true, max_agents: None })?;
    let out = c.out_dir()?;
    write_json(&out.join("graph.json"), &run.conversion)?;
    write_json(&out.join("plan.json"), &run.plan)?;
    save_trajectories(&out.join("trajectories.csv"), &run.trajectories)?;
    write_json(&out.join("report.json"), &run.report)?;
    let layers = Layers {
        conversion: Some(&run.conversion),
        trajectories: Some(&run.trajectories),
        agents: Some(&run.scenario.agents),
        r: s.r,
        ..Default::default()
    };
    fs::write(out.join("scene.svg"), render_svg(&s.workspace, &layers))?;
    let rep = &run.report;
    println!(
        "agents {}  density {:.3}  vertices {}  ops {}  horizon {:.1}  planning {:.3}s",
        rep.agents,
        rep.density,
        rep.vertices,
        rep.ops,
        rep.horizon,
        rep.timings.planning_total()
    );
    run.ensure_clean()
}

fn exec(c: &Common) -> Result<(), Error> {
    let s = c.load()?;
    let res: ConversionResult = read_json(&c.artifact("graph.json"))?;
    let plan: Plan = read_json(&c.artifact("plan.json"))?;
    let reached = execute(&res.graph, &plan.start, &plan.ops)?;
    if reached != plan.goal {
        return Err(Error::IllegalOp("replayed plan does not end in its goal occupancy".into()));
    }
    // the full motion when the plan run left it behind, else the on-graph part
    let traj_path = c.artifact("trajectories.csv");
    let ts = if traj_path.exists() { load_trajectories(&traj_path)? } else { realize_plan(&res, &plan)? };
    let rows = write_samples_csv(fs::File::create(c.artifact("samples.csv"))?, &ts, s.dt())?;
    println!("{} ops legal, goal reached; {rows} samples written", plan.ops.len());
    Ok(())
}

fn verify(c: &Common) -> Result<(), Error> {
    let s = c.load()?;
    let ts = load_trajectories(&c.artifact("trajectories.csv"))?;
    let rep = verify_trajectories(&ts, &s.workspace, s.r, s.dt());
    let summary = VerificationSummary::from((&rep, s.dt()));
    write_json(&c.artifact("verification.json"), &summary)?;
    println!(
        "samples {}  min pair distance {:.6}  min clearance margin {:.6}  violations {}{}",
        rep.samples,
        rep.min_pair_distance,
        rep.min_clearance_margin,
        rep.violations.len(),
        if rep.truncated { " (truncated)" } else { "" }
    );
    for v in rep.violations.iter().take(10) {
        println!("  {:?} during [{:.3}, {:.3}]", v.kind, v.t0, v.t1);
    }
    if rep.is_clean() {
        Ok(())
    } else {
        Err(Error::VerificationFailure(format!("{} violation interval(s)", rep.violations.len())))
    }
}

fn render(c: &Common) -> Result<(), Error> {
    let s = c.load()?;
    let graph_path = c.artifact("graph.json");
    let res: ConversionResult = if graph_path.exists() { read_json(&graph_path)? } else { convert_scenario(&s)? };
    let traj_path = c.artifact("trajectories.csv");
    let ts: Option<TrajectorySet> = if traj_path.exists() { Some(load_trajectories(&traj_path)?) } else { None };
    let out = c.out_dir()?;
    let layers = Layers {
        conversion: Some(&res),
        trajectories: ts.as_ref(),
        agents: Some(&s.agents),
        r: s.r,
        ..Default::default()
    };
    fs::write(out.join("scene.svg"), render_svg(&s.workspace, &layers))?;
    let (Some(dt), Some(ts)) = (c.dt, ts.as_ref()) else {
        return Ok(());
    };
    if !(dt > 0.0) {
        return Err(Error::InvalidScenario("dt must be positive".into()));
    }
    let frames = (ts.horizon / dt).ceil() as usize + 1;
    if frames > MAX_FRAMES {
        return Err(Error::InvalidScenario(format!("{frames} frames at dt {dt}; at most {MAX_FRAMES} are written")));
    }
    let dir = out.join("frames");
    fs::create_dir_all(&dir)?;
    for k in 0..frames {
        let t = (k as f64 * dt).min(ts.horizon);
        fs::write(dir.join(format!("frame_{k:05}.svg")), render_frame(&s.workspace, Some(&res), ts, s.r, t))?;
    }
    println!("{frames} frames in {}", dir.display());
    Ok(())
}

fn bench(c: &Common, trials: usize) -> Result<(), Error> {
    let mut files: Vec<PathBuf> = if c.scenario.is_dir() {
        fs::read_dir(&c.scenario)?
            .map(|e| e.map(|e| e.path()))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect()
    } else {
        vec![c.scenario.clone()]
    };
    files.sort();
    let mut suite = Vec::new();
    for f in files {
        let mut s: Scenario = read_json(&f)?;
        if s.name.is_empty() {
            s.name = f.file_stem().map_or_else(String::new, |n| n.to_string_lossy().into_owned());
        }
        c.apply(&mut s);
        suite.push(s);
    }
    let rows = run_bench(&suite, trials, c.seed.unwrap_or(0), PipelineOptions { verify: false, max_agents: c.max_agents });
    print!("{}", format_table(&rows));
    write_json(&c.out_dir()?.join("bench.json"), &rows)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (stage, result) = match &cli.command {
        Command::Convert(c) => ("convert", convert(c)),
        Command::Plan(c) => ("plan", plan(c)),
        Command::Exec(c) => ("exec", exec(c)),
        Command::Verify(c) => ("verify", verify(c)),
        Command::Render(c) => ("render", render(c)),
        Command::Bench { common, trials } => ("bench", bench(common, *trials)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {stage}: {e}");
            ExitCode::FAILURE
        }
    }
}
