//! Demonstration corpora and the input/label tensors built from them.

use std::path::Path;

use rand::SeedableRng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criticality::{
    compute_criticality, compute_joint_histograms, gaussian_smooth, save_label, CriticalityMap, JointHistograms,
    LabelSidecar,
};
use crate::error::{invalid, Result};
use crate::planners::{birrt_plan, derive_seed, MotionPlan, MotionQuery, PlannerRng, Space, TreeParams};
use crate::tensor::{write_tensor_file, Tensor3, TensorHeader, INPUT_MAGIC};
use crate::workspace::{Configuration, DofKind, EnvFile, Environment, RobotModel};

pub const DEFAULT_GOALS: usize = 10;
pub const DEFAULT_STARTS_PER_GOAL: usize = 10;
pub const DEFAULT_BINS: usize = 10;
pub const DEFAULT_DEMO_BUDGET_S: f64 = 5.0;

/// `n_d × n_d × (1 + DOF)`: occupancy, then one constant plane per goal DOF.
#[derive(Clone, Debug, PartialEq)]
pub struct InputTensor {
    pub tensor: Tensor3<f32>,
    pub dof: usize,
}

/// `n_d × n_d × (1 + k·p)`: max-normalized criticality, then `p` bins per joint.
#[derive(Clone, Debug, PartialEq)]
pub struct LabelTensor {
    pub tensor: Tensor3<f32>,
    pub p: usize,
    pub joint_count: usize,
}

impl LabelTensor {
    pub fn n(&self) -> usize {
        self.tensor.n()
    }

    /// Channel index of bin `b` of joint `j`.
    pub fn joint_channel(&self, j: usize, b: usize) -> usize {
        1 + j * self.p + b
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaskSet {
    pub goals: Vec<Configuration>,
    /// `starts[g]` are the sub-task initial states for goal `g`.
    pub starts: Vec<Vec<Configuration>>,
    pub seed: u64,
}

/// Random goals and start states, drawn uniformly over free configurations.
pub fn generate_tasks(
    env: &Environment,
    robot: &RobotModel,
    n_goals: usize,
    starts_per_goal: usize,
    seed: u64,
) -> Result<TaskSet> {
    let space = Space::new(env, robot, crate::workspace::DEFAULT_STEER_STEP);
    let mut rng = PlannerRng::seed_from_u64(seed);
    let mut goals = Vec::with_capacity(n_goals);
    let mut starts = Vec::with_capacity(n_goals);
    for _ in 0..n_goals {
        goals.push(Configuration(space.sample_free(&mut rng)?));
        let mut s = Vec::with_capacity(starts_per_goal);
        for _ in 0..starts_per_goal {
            s.push(Configuration(space.sample_free(&mut rng)?));
        }
        starts.push(s);
    }
    Ok(TaskSet { goals, starts, seed })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoalDemonstrations {
    pub goal_index: usize,
    pub goal: Configuration,
    pub plans: Vec<MotionPlan>,
    pub attempted: usize,
    pub failures: usize,
}

/// Seed of sub-task `(goal, start)` within a task set.
pub fn subtask_seed(tasks: &TaskSet, goal: usize, start: usize) -> u64 {
    derive_seed(tasks.seed, &[goal as u64, start as u64])
}

/// Runs BiRRT on every sub-task and groups the solved plans by goal.
/// Queries run in parallel; results are ordered by `(goal, start)`.
pub fn collect_demonstrations(
    env: &Environment,
    robot: &RobotModel,
    tasks: &TaskSet,
    per_query_budget: f64,
    params: &TreeParams,
) -> Result<Vec<GoalDemonstrations>> {
    let jobs: Vec<(usize, usize)> = tasks
        .starts
        .iter()
        .enumerate()
        .flat_map(|(g, s)| (0..s.len()).map(move |i| (g, i)))
        .collect();
    let results: Vec<Result<Option<MotionPlan>>> = jobs
        .par_iter()
        .map(|&(g, i)| {
            let query = MotionQuery {
                env,
                robot,
                start: tasks.starts[g][i].clone(),
                goal: tasks.goals[g].clone(),
                time_budget: per_query_budget,
                seed: subtask_seed(tasks, g, i),
            };
            birrt_plan(&query, params)
        })
        .collect();
    let mut out: Vec<GoalDemonstrations> = tasks
        .goals
        .iter()
        .enumerate()
        .map(|(g, goal)| GoalDemonstrations {
            goal_index: g,
            goal: goal.clone(),
            plans: Vec::new(),
            attempted: tasks.starts[g].len(),
            failures: 0,
        })
        .collect();
    for (&(g, _), res) in jobs.iter().zip(results) {
        match res? {
            Some(plan) => out[g].plans.push(plan),
            None => out[g].failures += 1,
        }
    }
    Ok(out)
}

/// Normalized value of DOF `i`: positions by world extent, angles by the
/// width of their limit interval.
fn normalize_dof(env: &Environment, robot: &RobotModel, i: usize, v: f64) -> f64 {
    match robot.dof_kinds[i] {
        DofKind::Position => {
            let extent = if i == 0 { env.width } else { env.height };
            v / extent
        }
        _ => {
            let l = robot.limits[i];
            (v - l.lo) / l.width()
        }
    }
}

pub fn encode_input(env: &Environment, robot: &RobotModel, goal: &Configuration) -> Result<InputTensor> {
    robot.check_dims(goal)?;
    let n = env.n_d;
    let dof = robot.dof();
    let mut t = Tensor3::zeros(n, 1 + dof);
    let planes: Vec<f32> = (0..dof).map(|i| normalize_dof(env, robot, i, goal.0[i]) as f32).collect();
    for r in 0..n {
        for c in 0..n {
            t.set(r, c, 0, if env.occupied(r, c) { 1.0 } else { 0.0 });
            for (i, v) in planes.iter().enumerate() {
                t.set(r, c, 1 + i, *v);
            }
        }
    }
    Ok(InputTensor { tensor: t, dof })
}

pub fn encode_label(map: &CriticalityMap, hists: &JointHistograms) -> Result<LabelTensor> {
    if map.n_d != hists.n_d {
        return Err(invalid(format!(
            "criticality grid is {}×{}, histograms are {}×{}",
            map.n_d, map.n_d, hists.n_d, hists.n_d
        )));
    }
    let n = map.n_d;
    let p = hists.p;
    let k = hists.joints.len();
    let max = map.max_score();
    let mut t = Tensor3::zeros(n, 1 + k * p);
    for cell in 0..n * n {
        let (r, c) = (cell / n, cell % n);
        let v = if max > 0.0 { map.scores[cell] / max } else { 0.0 };
        t.set(r, c, 0, v as f32);
        for (j, joint) in hists.joints.iter().enumerate() {
            for (b, prob) in joint.cell(cell, p).iter().enumerate() {
                t.set(r, c, 1 + j * p + b, *prob as f32);
            }
        }
    }
    Ok(LabelTensor {
        tensor: t,
        p,
        joint_count: k,
    })
}

/// Heading-bin roll for `quarter_turns` counter-clockwise quarter turns and
/// whether it is exact. Inexact shifts round half to even.
pub fn heading_bin_shift(p: usize, quarter_turns: usize) -> (usize, bool) {
    let num = quarter_turns * p;
    let exact = num % 4 == 0;
    let q = num / 4;
    let rem = num % 4;
    let shift = match rem {
        0 | 1 => q,
        3 => q + 1,
        _ => {
            if q % 2 == 0 {
                q
            } else {
                q + 1
            }
        }
    };
    (shift % p, exact)
}

/// Rotates one cell grid a quarter turn counter-clockwise in the world frame
/// (`y` up): cell `(r, c)` moves to `(c, n-1-r)`.
fn rotate_quarter<T: Copy + Default>(t: &Tensor3<T>) -> Tensor3<T> {
    let n = t.n();
    let mut out = Tensor3::zeros(n, t.channels());
    for r in 0..n {
        for c in 0..n {
            for ch in 0..t.channels() {
                out.set(c, n - 1 - r, ch, t.get(r, c, ch));
            }
        }
    }
    out
}

/// The original pair plus its 90°, 180° and 270° counter-clockwise rotations.
///
/// Spatial channels rotate with the world. Goal planes transform with the
/// rotation (`x' = 1 - y`, `y' = x` in normalized coordinates, heading plus a
/// quarter turn); relative joint planes are unchanged. The heading histogram
/// rolls by [`heading_bin_shift`].
pub fn augment_rotations(input: &InputTensor, label: &LabelTensor) -> Result<Vec<(InputTensor, LabelTensor)>> {
    if input.tensor.n() != label.n() {
        return Err(invalid("input and label grids differ"));
    }
    let mut out = vec![(input.clone(), label.clone())];
    let mut cur_in = input.tensor.clone();
    let mut cur_label = label.tensor.clone();
    for turns in 1..4 {
        cur_in = rotate_quarter(&cur_in);
        cur_label = rotate_quarter(&cur_label);
        let mut inp = cur_in.clone();
        let n = inp.n();
        let has_heading = input.dof >= 3;
        for r in 0..n {
            for c in 0..n {
                // Goal planes are spatially constant; read the unrotated values.
                let x = input.tensor.get(0, 0, 1);
                let y = input.tensor.get(0, 0, 2);
                let (nx, ny) = match turns {
                    1 => (1.0 - y, x),
                    2 => (1.0 - x, 1.0 - y),
                    _ => (y, 1.0 - x),
                };
                inp.set(r, c, 1, nx);
                inp.set(r, c, 2, ny);
                if has_heading {
                    let h = input.tensor.get(0, 0, 3) + 0.25 * turns as f32;
                    inp.set(r, c, 3, h - h.floor());
                }
            }
        }
        let mut lab = cur_label.clone();
        if label.joint_count >= 1 && has_heading {
            let p = label.p;
            let (shift, _) = heading_bin_shift(p, turns);
            for r in 0..n {
                for c in 0..n {
                    for b in 0..p {
                        lab.set(r, c, 1 + (b + shift) % p, cur_label.get(r, c, 1 + b));
                    }
                }
            }
        }
        out.push((
            InputTensor { tensor: inp, dof: input.dof },
            LabelTensor {
                tensor: lab,
                p: label.p,
                joint_count: label.joint_count,
            },
        ));
    }
    Ok(out)
}

/// Builds the smoothed map, histograms, label tensor and sidecar for one goal.
pub fn build_label(
    env: &Environment,
    robot: &RobotModel,
    plans: &[MotionPlan],
    p: usize,
) -> Result<(LabelTensor, LabelSidecar)> {
    let raw = compute_criticality(env, robot, plans)?;
    let smooth = gaussian_smooth(&raw);
    let hists = compute_joint_histograms(env, robot, plans, p)?;
    let label = encode_label(&smooth, &hists)?;
    let sidecar = LabelSidecar {
        n_d: env.n_d,
        p,
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
    Ok((label, sidecar))
}

pub fn save_input(path: impl AsRef<Path>, input: &InputTensor) -> Result<()> {
    let header = TensorHeader {
        magic: INPUT_MAGIC,
        n_d: input.tensor.n() as u32,
        p: 1,
        joint_count: input.dof as u32,
    };
    write_tensor_file(path, header, &input.tensor)
}

pub fn load_input(path: impl AsRef<Path>) -> Result<InputTensor> {
    let (header, tensor) = crate::tensor::read_tensor_file(path)?;
    if header.magic != INPUT_MAGIC || header.p != 1 {
        return Err(crate::Error::Format("not an input tensor file".into()));
    }
    Ok(InputTensor {
        tensor,
        dof: header.joint_count as usize,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoalStats {
    pub goal_index: usize,
    pub goal: Configuration,
    pub attempted: usize,
    pub solved: usize,
    pub failures: usize,
    pub solve_rate: f64,
    pub mean_solve_time: Option<f64>,
    pub label_written: bool,
}

fn write_json<T: Serialize>(path: impl AsRef<Path>, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

/// Writes `env.json`, `tasks.json` and one `goal_NNN/` directory per goal
/// holding `input.bin`, `label.bin` (+ `label.json`), `plans.json` and
/// `stats.json`. With `augment`, rotated copies go to `goal_NNN/rot_DDD/`.
pub fn write_dataset(
    dir: impl AsRef<Path>,
    env: &Environment,
    robot: &RobotModel,
    tasks: &TaskSet,
    demos: &[GoalDemonstrations],
    p: usize,
    augment: bool,
) -> Result<Vec<GoalStats>> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    EnvFile::from_parts(env, robot).save(dir.join("env.json"))?;
    write_json(dir.join("tasks.json"), tasks)?;
    let mut all_stats = Vec::new();
    for demo in demos {
        let gdir = dir.join(format!("goal_{:03}", demo.goal_index));
        std::fs::create_dir_all(&gdir)?;
        let input = encode_input(env, robot, &demo.goal)?;
        save_input(gdir.join("input.bin"), &input)?;
        write_json(gdir.join("plans.json"), &demo.plans)?;
        let label = if demo.plans.is_empty() {
            None
        } else {
            let (label, sidecar) = build_label(env, robot, &demo.plans, p)?;
            save_label(gdir.join("label.bin"), &label, Some(&sidecar))?;
            Some((label, sidecar))
        };
        if augment {
            if let Some((label, sidecar)) = &label {
                for (turns, (inp, lab)) in augment_rotations(&input, label)?.into_iter().enumerate().skip(1) {
                    let rdir = gdir.join(format!("rot_{:03}", turns * 90));
                    std::fs::create_dir_all(&rdir)?;
                    save_input(rdir.join("input.bin"), &inp)?;
                    let (shift, exact) = heading_bin_shift(p, turns);
                    let side = LabelSidecar {
                        quarter_turns: turns as u8,
                        heading_bin_shift: shift,
                        heading_shift_exact: exact,
                        ..sidecar.clone()
                    };
                    save_label(rdir.join("label.bin"), &lab, Some(&side))?;
                }
            }
        }
        let solved = demo.plans.len();
        let stats = GoalStats {
            goal_index: demo.goal_index,
            goal: demo.goal.clone(),
            attempted: demo.attempted,
            solved,
            failures: demo.failures,
            solve_rate: if demo.attempted == 0 { 0.0 } else { solved as f64 / demo.attempted as f64 },
            mean_solve_time: (solved > 0)
                .then(|| demo.plans.iter().map(|p| p.solve_time).sum::<f64>() / solved as f64),
            label_written: label.is_some(),
        };
        write_json(gdir.join("stats.json"), &stats)?;
        all_stats.push(stats);
    }
    Ok(all_stats)
}
