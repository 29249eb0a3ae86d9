//! Benchmark harness: shared task sets, per-planner records, solved-fraction
//! curves, CSV/JSON output and SVG renders.

mod render;

use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use render::{dominant_headings, render_curves_svg, render_svg, Overlays};

use crate::error::{invalid, Error, Result};
use crate::llp::{
    build_region_graph, guided_llp_plan, llp_plan, llrm_build, BiasedSampler, LlpParams, RegionGraph,
    SamplingDistribution,
};
use crate::model::Predictor;
use crate::planners::{
    birrt_plan, derive_seed, prm_build, prm_query, rrt_plan, ClockMode, MotionPlan, MotionQuery, PlannerRng,
    Roadmap, RoadmapParams, Space, TreeParams, UniformSampler, DEFAULT_PRM_K, MAX_REJECTION_ATTEMPTS,
};
use crate::workspace::{Configuration, Environment, Rect, RobotModel};

pub const DEFAULT_TASKS: usize = 100;
pub const DEFAULT_TASK_BUDGET_S: f64 = 10.0;
pub const DEFAULT_BUILD_BUDGET_S: f64 = 1.0;
pub const CURVE_POINTS: usize = 50;
pub const CURVE_START_S: f64 = 0.01;

/// Planner names a benchmark can list.
pub const PLANNER_NAMES: [&str; 7] = ["rrt", "birrt", "prm", "llp", "llp_uniform", "llrm", "guided_llp"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlannerKind {
    Rrt,
    Birrt,
    Prm,
    /// LLP with the predictor's biased sampler.
    Llp,
    /// LLP with α = 0.
    LlpUniform,
    Llrm,
    GuidedLlp,
}

impl PlannerKind {
    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "rrt" => PlannerKind::Rrt,
            "birrt" => PlannerKind::Birrt,
            "prm" => PlannerKind::Prm,
            "llp" => PlannerKind::Llp,
            "llp_uniform" => PlannerKind::LlpUniform,
            "llrm" => PlannerKind::Llrm,
            "guided_llp" => PlannerKind::GuidedLlp,
            _ => {
                return Err(Error::Config(format!(
                    "unknown planner '{name}' (known: {})",
                    PLANNER_NAMES.join(", ")
                )))
            }
        })
    }

    pub fn uses_roadmap(self) -> bool {
        matches!(self, PlannerKind::Prm | PlannerKind::Llrm)
    }

    pub fn needs_predictor(self) -> bool {
        matches!(self, PlannerKind::Llp | PlannerKind::Llrm | PlannerKind::GuidedLlp)
    }
}

/// Where benchmark starts and goals come from.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TaskSource {
    /// Every task uses this goal when set.
    pub goal: Option<Configuration>,
    /// Start positions are drawn inside this box when set.
    pub start_box: Option<Rect>,
    /// Goal positions are drawn inside this box when set and `goal` is not.
    pub goal_box: Option<Rect>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BenchmarkSpec {
    pub env_file: Option<PathBuf>,
    /// Label file for planners that need a predictor.
    pub label_file: Option<PathBuf>,
    pub tasks: usize,
    pub budget_s: f64,
    pub build_budget_s: f64,
    pub planners: Vec<String>,
    pub seed: u64,
    pub repetitions: usize,
    pub jobs: usize,
    pub clock: ClockMode,
    pub source: TaskSource,
    pub tree: TreeParams,
    pub llp: LlpParams,
    pub prm_k: usize,
}

impl Default for BenchmarkSpec {
    fn default() -> Self {
        BenchmarkSpec {
            env_file: None,
            label_file: None,
            tasks: DEFAULT_TASKS,
            budget_s: DEFAULT_TASK_BUDGET_S,
            build_budget_s: DEFAULT_BUILD_BUDGET_S,
            planners: vec!["rrt".into(), "birrt".into(), "prm".into()],
            seed: 0,
            repetitions: 1,
            jobs: 0,
            clock: ClockMode::Wall,
            source: TaskSource::default(),
            tree: TreeParams::default(),
            llp: LlpParams::default(),
            prm_k: DEFAULT_PRM_K,
        }
    }
}

impl BenchmarkSpec {
    /// Resolves planner names; fails before anything runs.
    pub fn resolve(&self) -> Result<Vec<(String, PlannerKind)>> {
        if self.tasks == 0 {
            return Err(Error::Config("task count must be at least 1".into()));
        }
        if self.repetitions == 0 {
            return Err(Error::Config("repetitions must be at least 1".into()));
        }
        if self.planners.is_empty() {
            return Err(Error::Config("no planners listed".into()));
        }
        self.planners
            .iter()
            .map(|n| PlannerKind::parse(n).map(|k| (n.clone(), k)))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchTask {
    pub id: usize,
    pub start: Configuration,
    pub goal: Configuration,
}

fn sample_in_box(space: &Space, rng: &mut PlannerRng, area: Option<&Rect>) -> Result<Vec<f64>> {
    let Some(b) = area else {
        return space.sample_free(rng);
    };
    for _ in 0..MAX_REJECTION_ATTEMPTS {
        let mut q = space.sample_uniform(rng);
        q[0] = rng.gen_range(b.xmin..b.xmax);
        q[1] = rng.gen_range(b.ymin..b.ymax);
        if space.free(&q) {
            return Ok(q);
        }
    }
    Err(Error::Infeasible("no free configuration inside the sampling box".into()))
}

/// Task set shared by every planner; depends only on the spec's seed.
pub fn generate_bench_tasks(spec: &BenchmarkSpec, env: &Environment, robot: &RobotModel) -> Result<Vec<BenchTask>> {
    let space = Space::new(env, robot, spec.tree.steer_step);
    let mut rng = PlannerRng::seed_from_u64(derive_seed(spec.seed, &[0x7461_736b]));
    let src = &spec.source;
    if let Some(g) = &src.goal {
        robot.check_dims(g)?;
        if !space.free(&g.0) {
            return Err(Error::InvalidQuery("benchmark goal is in collision".into()));
        }
    }
    (0..spec.tasks)
        .map(|id| {
            let goal = match &src.goal {
                Some(g) => g.clone(),
                None => Configuration(sample_in_box(&space, &mut rng, src.goal_box.as_ref())?),
            };
            let start = Configuration(sample_in_box(&space, &mut rng, src.start_box.as_ref())?);
            Ok(BenchTask { id, start, goal })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRecord {
    pub planner: String,
    pub task_id: usize,
    pub rep: usize,
    pub seed: u64,
    pub solved: bool,
    pub solve_time_s: Option<f64>,
    pub nodes_expanded: Option<u64>,
    /// Roadmap construction time, reported apart from `solve_time_s`.
    pub build_time_s: Option<f64>,
}

/// Records plus the plan behind each solved record.
#[derive(Clone, Debug, Default)]
pub struct BenchmarkRun {
    pub records: Vec<BenchmarkRecord>,
    pub plans: Vec<Option<MotionPlan>>,
}

/// Seed of task `task` in repetition `rep`, identical for every planner.
pub fn run_seed(spec: &BenchmarkSpec, task: usize, rep: usize) -> u64 {
    derive_seed(spec.seed, &[task as u64, rep as u64])
}

fn build_seed(spec: &BenchmarkSpec, rep: usize) -> u64 {
    derive_seed(spec.seed, &[u64::MAX, rep as u64])
}

/// Biased and uniform samplers and the region graph for a predictor.
struct Guidance {
    biased: Option<BiasedSampler>,
    uniform: BiasedSampler,
    regions: Option<RegionGraph>,
}

fn guidance(spec: &BenchmarkSpec, env: &Environment, robot: &RobotModel, predictor: Option<&Predictor>) -> Result<Guidance> {
    let uniform = BiasedSampler::uniform(spec.llp.batch_size)?;
    let Some(pred) = predictor else {
        return Ok(Guidance {
            biased: None,
            uniform,
            regions: None,
        });
    };
    let dist = SamplingDistribution::from_predictor(env, robot, pred)?;
    let regions = build_region_graph(&dist.cell_weights, env, spec.llp.region_threshold, spec.llp.link_distance)?;
    Ok(Guidance {
        biased: Some(BiasedSampler::new(dist, spec.llp.alpha, spec.llp.batch_size)?),
        uniform,
        regions: Some(regions),
    })
}

/// Runs every planner on every task and repetition. Roadmap planners build
/// once per repetition. Output order is `(planner, task, rep)`.
pub fn run_benchmark(
    spec: &BenchmarkSpec,
    env: &Environment,
    robot: &RobotModel,
    tasks: &[BenchTask],
    predictor: Option<&Predictor>,
) -> Result<BenchmarkRun> {
    let planners = spec.resolve()?;
    if let Some((name, _)) = planners.iter().find(|(_, k)| k.needs_predictor() && predictor.is_none()) {
        return Err(Error::Config(format!("planner '{name}' needs a label file")));
    }
    let g = guidance(spec, env, robot, predictor)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    pool.install(|| {
        let builds: Vec<(usize, usize)> = planners
            .iter()
            .enumerate()
            .filter(|(_, (_, k))| k.uses_roadmap())
            .flat_map(|(p, _)| (0..spec.repetitions).map(move |r| (p, r)))
            .collect();
        let roadmaps: Vec<Roadmap> = builds
            .par_iter()
            .map(|&(p, rep)| {
                let params = RoadmapParams {
                    k: spec.prm_k,
                    steer_step: spec.tree.steer_step,
                    budget_s: spec.build_budget_s,
                    max_vertices: None,
                    clock: spec.clock,
                    seed: build_seed(spec, rep),
                };
                match planners[p].1 {
                    PlannerKind::Llrm => llrm_build(env, robot, g.biased.as_ref().expect("checked"), &params),
                    _ => prm_build(env, robot, &mut UniformSampler, &params),
                }
            })
            .collect::<Result<_>>()?;
        let roadmap_of = |p: usize, rep: usize| builds.iter().position(|&b| b == (p, rep)).map(|i| &roadmaps[i]);
        let jobs: Vec<(usize, usize, usize)> = (0..planners.len())
            .flat_map(|p| (0..tasks.len()).flat_map(move |t| (0..spec.repetitions).map(move |r| (p, t, r))))
            .collect();
        let outcomes: Vec<Result<(BenchmarkRecord, Option<MotionPlan>)>> = jobs
            .par_iter()
            .map(|&(p, t, rep)| {
                let (name, kind) = &planners[p];
                let task = &tasks[t];
                let seed = run_seed(spec, t, rep);
                let query = MotionQuery {
                    env,
                    robot,
                    start: task.start.clone(),
                    goal: task.goal.clone(),
                    time_budget: spec.budget_s,
                    seed,
                };
                let tree = TreeParams {
                    clock: spec.clock,
                    ..spec.tree
                };
                let llp = LlpParams {
                    clock: spec.clock,
                    ..spec.llp
                };
                let mut build_time = None;
                let plan = match kind {
                    PlannerKind::Rrt => rrt_plan(&query, &tree)?,
                    PlannerKind::Birrt => birrt_plan(&query, &tree)?,
                    PlannerKind::Prm | PlannerKind::Llrm => {
                        let rm = roadmap_of(p, rep).expect("built above");
                        build_time = Some(rm.build_time);
                        prm_query(rm, &query, spec.clock)?
                    }
                    PlannerKind::Llp => llp_plan(&query, g.biased.as_ref().expect("checked"), &llp)?,
                    PlannerKind::LlpUniform => llp_plan(&query, &g.uniform, &llp)?,
                    PlannerKind::GuidedLlp => guided_llp_plan(
                        &query,
                        g.biased.as_ref().expect("checked"),
                        g.regions.as_ref().expect("checked"),
                        &llp,
                    )?,
                };
                let record = BenchmarkRecord {
                    planner: name.clone(),
                    task_id: task.id,
                    rep,
                    seed,
                    solved: plan.is_some(),
                    solve_time_s: plan.as_ref().map(|p| p.solve_time),
                    nodes_expanded: plan.as_ref().map(|p| p.nodes_expanded),
                    build_time_s: build_time,
                };
                Ok((record, plan))
            })
            .collect();
        let mut run = BenchmarkRun::default();
        for o in outcomes {
            let (r, p) = o?;
            run.records.push(r);
            run.plans.push(p);
        }
        Ok(run)
    })
}

/// `points` log-spaced times from `start` to `budget`.
pub fn log_time_grid(start: f64, budget: f64, points: usize) -> Vec<f64> {
    if points == 0 {
        return Vec::new();
    }
    if points == 1 || !(budget > start) {
        return vec![budget];
    }
    let (a, b) = (start.ln(), budget.ln());
    (0..points)
        .map(|i| {
            if i == 0 {
                start
            } else if i + 1 == points {
                budget
            } else {
                (a + (b - a) * i as f64 / (points - 1) as f64).exp()
            }
        })
        .collect()
}

/// Fraction of a planner's runs solved within each grid time. With
/// `include_build`, roadmap build time counts toward each solve.
pub fn solved_fraction_curve_with(
    records: &[BenchmarkRecord],
    planner: &str,
    time_grid: &[f64],
    include_build: bool,
) -> Result<Vec<(f64, f64)>> {
    if time_grid.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(invalid("time grid must be sorted ascending"));
    }
    let mine: Vec<&BenchmarkRecord> = records.iter().filter(|r| r.planner == planner).collect();
    if mine.is_empty() {
        return Err(invalid(format!("no records for planner '{planner}'")));
    }
    let times: Vec<f64> = mine
        .iter()
        .filter(|r| r.solved)
        .filter_map(|r| {
            let extra = if include_build { r.build_time_s.unwrap_or(0.0) } else { 0.0 };
            r.solve_time_s.map(|t| t + extra)
        })
        .collect();
    let total = mine.len() as f64;
    Ok(time_grid
        .iter()
        .map(|&t| (t, times.iter().filter(|&&s| s <= t).count() as f64 / total))
        .collect())
}

pub fn solved_fraction_curve(records: &[BenchmarkRecord], planner: &str, time_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    solved_fraction_curve_with(records, planner, time_grid, false)
}

pub fn write_records_csv(path: impl AsRef<Path>, records: &[BenchmarkRecord]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn records_to_csv(records: &[BenchmarkRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))
}

pub fn records_from_csv(text: &str) -> Result<Vec<BenchmarkRecord>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    Ok(r.deserialize().collect::<std::result::Result<_, _>>()?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlannerSummary {
    pub planner: String,
    pub runs: usize,
    pub solved: usize,
    pub solved_fraction: f64,
    pub median_solve_time_s: Option<f64>,
    pub mean_build_time_s: Option<f64>,
    pub curve: Vec<(f64, f64)>,
    pub curve_with_build: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkSummary {
    pub budget_s: f64,
    pub time_grid: Vec<f64>,
    pub planners: Vec<PlannerSummary>,
}

pub fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let m = values.len() / 2;
    Some(if values.len() % 2 == 1 {
        values[m]
    } else {
        0.5 * (values[m - 1] + values[m])
    })
}

pub fn summarize(spec: &BenchmarkSpec, records: &[BenchmarkRecord]) -> Result<BenchmarkSummary> {
    let grid = log_time_grid(CURVE_START_S, spec.budget_s, CURVE_POINTS);
    let mut planners = Vec::new();
    for name in &spec.planners {
        let mine: Vec<&BenchmarkRecord> = records.iter().filter(|r| &r.planner == name).collect();
        let mut times: Vec<f64> = mine.iter().filter_map(|r| r.solve_time_s).collect();
        let builds: Vec<f64> = mine.iter().filter_map(|r| r.build_time_s).collect();
        let solved = mine.iter().filter(|r| r.solved).count();
        planners.push(PlannerSummary {
            planner: name.clone(),
            runs: mine.len(),
            solved,
            solved_fraction: if mine.is_empty() { 0.0 } else { solved as f64 / mine.len() as f64 },
            median_solve_time_s: median(&mut times),
            mean_build_time_s: (!builds.is_empty()).then(|| builds.iter().sum::<f64>() / builds.len() as f64),
            curve: solved_fraction_curve_with(records, name, &grid, false)?,
            curve_with_build: solved_fraction_curve_with(records, name, &grid, true)?,
        });
    }
    Ok(BenchmarkSummary {
        budget_s: spec.budget_s,
        time_grid: grid,
        planners,
    })
}
