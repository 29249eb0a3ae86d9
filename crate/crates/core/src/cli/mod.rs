//! Command-line entry point.
//!
//! Exit codes: 0 success, 1 domain failure (no plan under
//! `--require-solution`, infeasible world, invalid query), 2 usage or
//! configuration error. Flags override values from `--config`, which
//! override built-in defaults.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::bench::{
    dominant_headings, generate_bench_tasks, render_svg, run_benchmark, summarize, write_records_csv,
    BenchmarkSpec, Overlays, PlannerKind,
};
use crate::criticality::{compute_criticality, compute_joint_histograms, gaussian_smooth, save_label, LabelSidecar};
use crate::dataset::{collect_demonstrations, encode_label, generate_tasks, write_dataset};
use crate::error::{Error, Result};
use crate::llp::{build_region_graph, guided_llp_plan, llp_plan, llrm_build, BiasedSampler, LlpParams, SamplingDistribution};
use crate::model::{Predictor, PredictorSource};
use crate::planners::{
    birrt_plan, prm_build, prm_query, rrt_plan, ClockMode, MotionPlan, MotionQuery, RoadmapParams, TreeParams,
    UniformSampler,
};
use crate::workspace::presets::{narrow_passage, random_boxes, PASSAGE_GAP, PASSAGE_ROBOT, PASSAGE_WALL};
use crate::workspace::{Configuration, EnvFile, Environment, RobotModel, RobotSpec, RobotKind};

#[derive(Parser, Debug)]
#[command(name = "critmp", version, about = "Critical-region motion planning toolkit")]
struct Cli {
    /// JSON file of settings for the subcommand; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for parallel stages [default: all cores].
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Planner clock: `virtual` (work-based, reproducible) or `wall` [default: virtual].
    #[arg(long, global = true)]
    clock: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write an environment file.
    GenEnv(GenEnvArgs),
    /// Generate tasks and demonstrations, and write a dataset directory.
    GenData(GenDataArgs),
    /// Compute a label file from demonstration plans.
    Criticality(CriticalityArgs),
    /// Solve one query.
    Plan(PlanArgs),
    /// Run a benchmark and write records, summary and curves.
    Bench(BenchArgs),
    /// Render an environment with optional overlays to SVG.
    Render(RenderArgs),
}

#[derive(Args, Debug, Default)]
struct GenEnvArgs {
    #[arg(long)]
    out: Option<PathBuf>,
    /// `empty`, `narrow_passage` or `random` [default: narrow_passage].
    #[arg(long)]
    preset: Option<String>,
    /// World side in meters [default: 10].
    #[arg(long)]
    size: Option<f64>,
    /// Grid cells per side [default: 64].
    #[arg(long)]
    n_d: Option<usize>,
    /// Tunnel height of the narrow passage in meters [default: 0.25].
    #[arg(long)]
    gap: Option<f64>,
    /// Wall thickness (tunnel length) of the narrow passage in meters [default: 1.0].
    #[arg(long)]
    wall: Option<f64>,
    /// Number of random boxes [default: 8].
    #[arg(long)]
    boxes: Option<usize>,
    /// `se2_rect`, `hinged` or `planar_arm` [default: se2_rect].
    #[arg(long)]
    robot: Option<String>,
    /// Link length in meters [default: 0.3 for se2_rect, 0.5 otherwise].
    #[arg(long)]
    link_length: Option<f64>,
    /// Link width in meters [default: 0.2 for se2_rect, 0.1 otherwise].
    #[arg(long)]
    link_width: Option<f64>,
    /// Links of a planar arm [default: 3].
    #[arg(long)]
    arm_links: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct GenEnvSettings {
    out: Option<PathBuf>,
    preset: Option<String>,
    size: Option<f64>,
    n_d: Option<usize>,
    gap: Option<f64>,
    wall: Option<f64>,
    boxes: Option<usize>,
    robot: Option<String>,
    link_length: Option<f64>,
    link_width: Option<f64>,
    arm_links: Option<usize>,
    seed: Option<u64>,
}

#[derive(Args, Debug, Default)]
struct GenDataArgs {
    #[arg(long)]
    env: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Goals [default: 10].
    #[arg(long)]
    goals: Option<usize>,
    /// Start states per goal [default: 10].
    #[arg(long)]
    starts: Option<usize>,
    /// Histogram bins per joint [default: 10].
    #[arg(long)]
    bins: Option<usize>,
    /// BiRRT budget per demonstration in seconds [default: 5].
    #[arg(long)]
    budget: Option<f64>,
    /// Also write 90°, 180° and 270° rotations.
    #[arg(long)]
    augment: bool,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct GenDataSettings {
    env: Option<PathBuf>,
    out: Option<PathBuf>,
    goals: Option<usize>,
    starts: Option<usize>,
    bins: Option<usize>,
    budget: Option<f64>,
    augment: Option<bool>,
    seed: Option<u64>,
}

#[derive(Args, Debug, Default)]
struct CriticalityArgs {
    #[arg(long)]
    env: Option<PathBuf>,
    /// JSON list of plans.
    #[arg(long)]
    plans: Option<PathBuf>,
    /// Label file to write; the sidecar goes next to it as `.json`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Histogram bins per joint [default: 10].
    #[arg(long)]
    bins: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct CriticalitySettings {
    env: Option<PathBuf>,
    plans: Option<PathBuf>,
    out: Option<PathBuf>,
    bins: Option<usize>,
}

#[derive(Args, Debug, Default)]
struct PlanArgs {
    #[arg(long)]
    env: Option<PathBuf>,
    /// Comma-separated start configuration.
    #[arg(long, allow_hyphen_values = true)]
    start: Option<String>,
    /// Comma-separated goal configuration.
    #[arg(long, allow_hyphen_values = true)]
    goal: Option<String>,
    /// rrt, birrt, prm, llp, llp_uniform, llrm or guided_llp [default: birrt].
    #[arg(long)]
    planner: Option<String>,
    /// Query budget in seconds [default: 5].
    #[arg(long)]
    budget: Option<f64>,
    /// Roadmap build budget in seconds for prm and llrm [default: 1.0].
    #[arg(long)]
    build_budget: Option<f64>,
    /// Label file for llp, llrm and guided_llp.
    #[arg(long)]
    label: Option<PathBuf>,
    /// Planner parameter JSON (N 500, alpha 0.25, steer_step 0.05,
    /// extend_step 0.5, link_radius 1.0, region_threshold 0.3,
    /// link_distance 0.2).
    #[arg(long)]
    params: Option<PathBuf>,
    /// RRT goal bias [default: 0.05].
    #[arg(long)]
    goal_bias: Option<f64>,
    /// PRM neighbours [default: 8].
    #[arg(long)]
    prm_k: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Exit with status 1 when no plan is found.
    #[arg(long)]
    require_solution: bool,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct PlanSettings {
    env: Option<PathBuf>,
    start: Option<Vec<f64>>,
    goal: Option<Vec<f64>>,
    planner: Option<String>,
    budget: Option<f64>,
    build_budget: Option<f64>,
    label: Option<PathBuf>,
    params: Option<PathBuf>,
    goal_bias: Option<f64>,
    prm_k: Option<usize>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    require_solution: Option<bool>,
}

#[derive(Args, Debug, Default)]
struct BenchArgs {
    /// Benchmark spec JSON; other flags override its fields.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long)]
    env: Option<PathBuf>,
    #[arg(long)]
    label: Option<PathBuf>,
    /// Tasks [default: 100].
    #[arg(long)]
    tasks: Option<usize>,
    /// Per-task budget in seconds [default: 10].
    #[arg(long)]
    budget: Option<f64>,
    /// Roadmap build budget in seconds [default: 1.0].
    #[arg(long)]
    build_budget: Option<f64>,
    /// Comma-separated planner names [default: rrt,birrt,prm].
    #[arg(long)]
    planners: Option<String>,
    /// Repetitions per task [default: 1].
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for records.csv, summary.json and curves.svg.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
struct RenderArgs {
    #[arg(long)]
    env: Option<PathBuf>,
    /// Label file for the criticality and heading layers.
    #[arg(long)]
    label: Option<PathBuf>,
    /// Plan JSON for the path layer and markers.
    #[arg(long)]
    plan: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RenderSettings {
    env: Option<PathBuf>,
    label: Option<PathBuf>,
    plan: Option<PathBuf>,
    out: Option<PathBuf>,
}

/// Shared flags after merging.
struct Common {
    jobs: usize,
    clock: ClockMode,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn load_config<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T> {
    match path {
        None => Ok(T::default()),
        Some(p) => serde_json::from_str(&std::fs::read_to_string(p)?).map_err(|e| usage(format!("{}: {e}", p.display()))),
    }
}

fn required<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| usage(format!("missing --{flag}")))
}

fn parse_clock(s: &str) -> Result<ClockMode> {
    match s {
        "virtual" => Ok(ClockMode::Virtual),
        "wall" => Ok(ClockMode::Wall),
        _ => Err(usage(format!("unknown clock '{s}' (virtual or wall)"))),
    }
}

fn parse_config_values(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|_| usage(format!("'{v}' is not a number"))))
        .collect()
}

fn load_env(path: &Path) -> Result<(Environment, RobotModel)> {
    EnvFile::load(path)?.build()
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

/// Runs the command line and returns the process exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .try_init();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::InvalidArgument(_) | Error::Json(_) | Error::Io(_) => 2,
        _ => 1,
    }
}

fn run(cli: Cli) -> Result<i32> {
    let common = Common {
        jobs: cli.jobs.unwrap_or(0),
        clock: cli.clock.as_deref().map(parse_clock).transpose()?.unwrap_or(ClockMode::Virtual),
    };
    let config = cli.config.as_deref();
    if common.jobs > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(common.jobs).build_global();
    }
    match cli.command {
        Command::GenEnv(a) => gen_env(a, load_config(config)?),
        Command::GenData(a) => gen_data(a, load_config(config)?, &common),
        Command::Criticality(a) => criticality(a, load_config(config)?),
        Command::Plan(a) => plan(a, load_config(config)?, &common),
        Command::Bench(a) => bench(a, config, &common),
        Command::Render(a) => render(a, load_config(config)?),
    }
}

fn gen_env(a: GenEnvArgs, c: GenEnvSettings) -> Result<i32> {
    let out = required(a.out.or(c.out), "out")?;
    let size = a.size.or(c.size).unwrap_or(10.0);
    let n_d = a.n_d.or(c.n_d).unwrap_or(64);
    let preset = a.preset.or(c.preset).unwrap_or_else(|| "narrow_passage".into());
    let seed = a.seed.or(c.seed).unwrap_or(0);
    let env = match preset.as_str() {
        "empty" => Environment::empty(size, size, n_d)?,
        "narrow_passage" => narrow_passage(size, n_d, a.wall.or(c.wall).unwrap_or(PASSAGE_WALL), a.gap.or(c.gap).unwrap_or(PASSAGE_GAP))?,
        "random" => random_boxes(size, n_d, a.boxes.or(c.boxes).unwrap_or(8), 0.5, 2.5, seed)?,
        other => return Err(usage(format!("unknown preset '{other}'"))),
    };
    let kind = match a.robot.or(c.robot).as_deref().unwrap_or("se2_rect") {
        "se2_rect" => RobotKind::Se2Rect,
        "hinged" => RobotKind::Hinged,
        "planar_arm" => RobotKind::PlanarArm,
        other => return Err(usage(format!("unknown robot '{other}'"))),
    };
    let (dl, dw) = if kind == RobotKind::Se2Rect { PASSAGE_ROBOT } else { (0.5, 0.1) };
    let link = [a.link_length.or(c.link_length).unwrap_or(dl), a.link_width.or(c.link_width).unwrap_or(dw)];
    let count = match kind {
        RobotKind::Se2Rect => 1,
        RobotKind::Hinged => 2,
        RobotKind::PlanarArm => a.arm_links.or(c.arm_links).unwrap_or(3),
    };
    let spec = RobotSpec {
        kind,
        links: vec![link; count],
        limits: None,
    };
    let robot = spec.build((size, size))?;
    EnvFile::from_parts(&env, &robot).save(&out)?;
    log::info!("wrote {}", out.display());
    Ok(0)
}

fn gen_data(a: GenDataArgs, c: GenDataSettings, common: &Common) -> Result<i32> {
    let env_path = required(a.env.or(c.env), "env")?;
    let out = required(a.out.or(c.out), "out")?;
    let goals = a.goals.or(c.goals).unwrap_or(crate::dataset::DEFAULT_GOALS);
    let starts = a.starts.or(c.starts).unwrap_or(crate::dataset::DEFAULT_STARTS_PER_GOAL);
    let bins = a.bins.or(c.bins).unwrap_or(crate::dataset::DEFAULT_BINS);
    let budget = a.budget.or(c.budget).unwrap_or(crate::dataset::DEFAULT_DEMO_BUDGET_S);
    let augment = a.augment || c.augment.unwrap_or(false);
    let seed = a.seed.or(c.seed).unwrap_or(0);
    if bins < 2 {
        return Err(usage("--bins must be at least 2"));
    }
    let (env, robot) = load_env(&env_path)?;
    let tasks = generate_tasks(&env, &robot, goals, starts, seed)?;
    log::info!("collecting {} demonstrations", goals * starts);
    let params = TreeParams {
        clock: common.clock,
        ..TreeParams::default()
    };
    let demos = collect_demonstrations(&env, &robot, &tasks, budget, &params)?;
    let stats = write_dataset(&out, &env, &robot, &tasks, &demos, bins, augment)?;
    for s in &stats {
        log::info!("goal {}: {}/{} solved", s.goal_index, s.solved, s.attempted);
    }
    Ok(0)
}

fn criticality(a: CriticalityArgs, c: CriticalitySettings) -> Result<i32> {
    let env_path = required(a.env.or(c.env), "env")?;
    let plans_path = required(a.plans.or(c.plans), "plans")?;
    let out = required(a.out.or(c.out), "out")?;
    let bins = a.bins.or(c.bins).unwrap_or(crate::dataset::DEFAULT_BINS);
    let (env, robot) = load_env(&env_path)?;
    let plans: Vec<MotionPlan> = serde_json::from_str(&std::fs::read_to_string(&plans_path)?)?;
    let raw = compute_criticality(&env, &robot, &plans)?;
    let smooth = gaussian_smooth(&raw);
    let hists = compute_joint_histograms(&env, &robot, &plans, bins)?;
    let label = encode_label(&smooth, &hists)?;
    let sidecar = LabelSidecar {
        n_d: env.n_d,
        p: bins,
        joint_count: hists.joints.len(),
        joint_names: hists.joints.iter().map(|j| j.name.clone()).collect(),
        joint_limits: hists.joints.iter().map(|j| [j.limit.lo, j.limit.hi]).collect(),
        reference: "uniform_free".into(),
        plan_count: raw.plan_count,
        free_cells: raw.free_cells,
        mu_max: smooth.max_score(),
        raw_counts: raw.counts.clone(),
        quarter_turns: 0,
        heading_bin_shift: 0,
        heading_shift_exact: true,
    };
    save_label(&out, &label, Some(&sidecar))?;
    log::info!("wrote {}", out.display());
    Ok(0)
}

fn plan(a: PlanArgs, c: PlanSettings, common: &Common) -> Result<i32> {
    let env_path = required(a.env.or(c.env), "env")?;
    let start = match a.start {
        Some(s) => parse_config_values(&s)?,
        None => required(c.start, "start")?,
    };
    let goal = match a.goal {
        Some(s) => parse_config_values(&s)?,
        None => required(c.goal, "goal")?,
    };
    let planner = a.planner.or(c.planner).unwrap_or_else(|| "birrt".into());
    let kind = PlannerKind::parse(&planner)?;
    let budget = a.budget.or(c.budget).unwrap_or(5.0);
    let build_budget = a.build_budget.or(c.build_budget).unwrap_or(1.0);
    let seed = a.seed.or(c.seed).unwrap_or(0);
    let require = a.require_solution || c.require_solution.unwrap_or(false);
    let out = a.out.or(c.out);
    let mut llp = match a.params.or(c.params) {
        Some(p) => LlpParams::load(p)?,
        None => LlpParams::default(),
    };
    llp.clock = common.clock;
    let (env, robot) = load_env(&env_path)?;
    let mut tree = TreeParams {
        clock: common.clock,
        steer_step: llp.steer_step,
        extend_step: llp.extend_step,
        ..TreeParams::default()
    };
    if let Some(b) = a.goal_bias.or(c.goal_bias) {
        tree.goal_bias = b;
    }
    let query = MotionQuery {
        env: &env,
        robot: &robot,
        start: Configuration(start),
        goal: Configuration(goal),
        time_budget: budget,
        seed,
    };
    let label_path = a.label.or(c.label);
    let sampler = || -> Result<(BiasedSampler, SamplingDistribution)> {
        let path = label_path.as_ref().ok_or_else(|| usage(format!("planner '{planner}' needs --label")))?;
        let pred = Predictor::load(path, PredictorSource::External)?;
        let dist = SamplingDistribution::from_predictor(&env, &robot, &pred)?;
        Ok((BiasedSampler::new(dist.clone(), llp.alpha, llp.batch_size)?, dist))
    };
    let roadmap_params = RoadmapParams {
        k: a.prm_k.or(c.prm_k).unwrap_or(crate::planners::DEFAULT_PRM_K),
        steer_step: llp.steer_step,
        budget_s: build_budget,
        max_vertices: None,
        clock: common.clock,
        seed,
    };
    let result = match kind {
        PlannerKind::Rrt => rrt_plan(&query, &tree)?,
        PlannerKind::Birrt => birrt_plan(&query, &tree)?,
        PlannerKind::Prm => {
            let rm = prm_build(&env, &robot, &mut UniformSampler, &roadmap_params)?;
            prm_query(&rm, &query, common.clock)?
        }
        PlannerKind::Llrm => {
            let (s, _) = sampler()?;
            let rm = llrm_build(&env, &robot, &s, &roadmap_params)?;
            prm_query(&rm, &query, common.clock)?
        }
        PlannerKind::Llp => llp_plan(&query, &sampler()?.0, &llp)?,
        PlannerKind::LlpUniform => llp_plan(&query, &BiasedSampler::uniform(llp.batch_size)?, &llp)?,
        PlannerKind::GuidedLlp => {
            let (s, dist) = sampler()?;
            let regions = build_region_graph(&dist.cell_weights, &env, llp.region_threshold, llp.link_distance)?;
            guided_llp_plan(&query, &s, &regions, &llp)?
        }
    };
    match result {
        Some(p) => {
            log::info!("solved in {:.6} s with {} waypoints", p.solve_time, p.waypoints.len());
            match &out {
                Some(path) => p.save(path)?,
                None => println!("{}", serde_json::to_string(&p)?),
            }
            Ok(0)
        }
        None => {
            log::warn!("no plan found within {budget} s");
            Ok(if require { 1 } else { 0 })
        }
    }
}

fn bench(a: BenchArgs, config: Option<&Path>, common: &Common) -> Result<i32> {
    let mut spec: BenchmarkSpec = match a.spec.as_deref().or(config) {
        Some(p) => serde_json::from_str(&std::fs::read_to_string(p)?).map_err(|e| usage(format!("{}: {e}", p.display())))?,
        None => BenchmarkSpec::default(),
    };
    if let Some(v) = a.env {
        spec.env_file = Some(v);
    }
    if let Some(v) = a.label {
        spec.label_file = Some(v);
    }
    if let Some(v) = a.tasks {
        spec.tasks = v;
    }
    if let Some(v) = a.budget {
        spec.budget_s = v;
    }
    if let Some(v) = a.build_budget {
        spec.build_budget_s = v;
    }
    if let Some(v) = a.planners {
        spec.planners = v.split(',').map(|s| s.trim().to_string()).collect();
    }
    if let Some(v) = a.reps {
        spec.repetitions = v;
    }
    if let Some(v) = a.seed {
        spec.seed = v;
    }
    spec.jobs = common.jobs;
    spec.clock = common.clock;
    spec.resolve()?;
    let out = required(a.out, "out")?;
    let env_path = required(spec.env_file.clone(), "env")?;
    let (env, robot) = load_env(&env_path)?;
    let predictor = spec
        .label_file
        .as_ref()
        .map(|p| Predictor::load(p, PredictorSource::External))
        .transpose()?;
    let tasks = generate_bench_tasks(&spec, &env, &robot)?;
    let run = run_benchmark(&spec, &env, &robot, &tasks, predictor.as_ref())?;
    std::fs::create_dir_all(&out)?;
    write_records_csv(out.join("records.csv"), &run.records)?;
    let summary = summarize(&spec, &run.records)?;
    write_json(&out.join("summary.json"), &summary)?;
    std::fs::write(out.join("curves.svg"), crate::bench::render_curves_svg(&summary))?;
    for p in &summary.planners {
        log::info!("{}: {}/{} solved", p.planner, p.solved, p.runs);
    }
    Ok(0)
}

fn render(a: RenderArgs, c: RenderSettings) -> Result<i32> {
    let env_path = required(a.env.or(c.env), "env")?;
    let out = required(a.out.or(c.out), "out")?;
    let (env, robot) = load_env(&env_path)?;
    let mut overlays = Overlays::default();
    if let Some(path) = a.label.or(c.label) {
        let pred = Predictor::load(path, PredictorSource::External)?;
        let probs = pred.probabilities();
        if probs.n() != env.n_d {
            return Err(usage("label grid does not match the environment"));
        }
        overlays.criticality = Some(probs.channel(0));
        let heading = (robot.base_dof_count..robot.dof()).find(|&i| robot.dof_kinds[i] == crate::workspace::DofKind::Heading);
        if let (Some(i), true) = (heading, pred.label.joint_count > 0) {
            overlays.headings = Some(dominant_headings(&probs, pred.label.p, robot.limits[i]));
        }
    }
    if let Some(path) = a.plan.or(c.plan) {
        let p = MotionPlan::load(path)?;
        overlays.start = p.waypoints.first().map(|q| q.position());
        overlays.goal = p.waypoints.last().map(|q| q.position());
        overlays.plan = Some(p.waypoints.iter().map(|q| q.position()).collect());
    }
    std::fs::write(&out, render_svg(&env, &overlays))?;
    log::info!("wrote {}", out.display());
    Ok(0)
}
