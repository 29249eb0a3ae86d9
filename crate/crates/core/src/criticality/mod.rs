//! Criticality of grid cells from demonstration plans.
//!
//! A cell's score is the fraction of plans whose base trace passes through
//! it, divided by the cell's measure under a uniform density over free
//! cells: `μ(c) = (hits(c) / plans) · free_cells`. The grid cell is the
//! finest set the score is resolved on. Joint values seen along the traces
//! are binned per cell into `p` bins per non-base joint.

mod label_file;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

pub use label_file::{load_label, save_label, LabelSidecar};

use crate::error::{invalid, Result};
use crate::planners::MotionPlan;
use crate::workspace::{CSpaceMetric, DofKind, Environment, JointLimit, RobotModel};

/// 3×3 binomial smoothing kernel, weights over 16.
pub const GAUSSIAN_3X3: [[f64; 3]; 3] = [[1.0, 2.0, 1.0], [2.0, 4.0, 2.0], [1.0, 2.0, 1.0]];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceDensity {
    /// `v(c) = 1 / |free cells|`.
    UniformFree,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriticalityMap {
    pub n_d: usize,
    /// Row-major `μ` per cell, `≥ 0`.
    pub scores: Vec<f64>,
    /// Plans passing through each cell.
    pub counts: Vec<u32>,
    pub plan_count: usize,
    pub free_cells: usize,
    pub reference: ReferenceDensity,
    pub smoothed: bool,
    blocked: Vec<bool>,
}

impl CriticalityMap {
    pub fn score(&self, row: usize, col: usize) -> f64 {
        self.scores[row * self.n_d + col]
    }

    /// Unsmoothed score as an exact fraction `(numerator, denominator)`.
    pub fn rational_score(&self, row: usize, col: usize) -> (u64, u64) {
        let idx = row * self.n_d + col;
        if self.blocked[idx] {
            return (0, self.plan_count as u64);
        }
        (self.counts[idx] as u64 * self.free_cells as u64, self.plan_count as u64)
    }

    pub fn max_score(&self) -> f64 {
        self.scores.iter().copied().fold(0.0, f64::max)
    }

    pub fn blocked_mask(&self) -> &[bool] {
        &self.blocked
    }

    /// Builds a map from raw scores, e.g. for tests or external labels.
    pub fn from_scores(env: &Environment, scores: Vec<f64>) -> Result<Self> {
        if scores.len() != env.cell_count() {
            return Err(invalid("score grid does not match the environment"));
        }
        Ok(CriticalityMap {
            n_d: env.n_d,
            scores,
            counts: vec![0; env.cell_count()],
            plan_count: 0,
            free_cells: env.free_cell_count(),
            reference: ReferenceDensity::UniformFree,
            smoothed: false,
            blocked: env.blocked_mask().to_vec(),
        })
    }
}

/// Per-cell joint-value distributions.
#[derive(Clone, Debug, PartialEq)]
pub struct JointHistograms {
    pub n_d: usize,
    pub p: usize,
    pub joints: Vec<JointChannel>,
    /// Cells that received at least one sample. Others hold the uniform distribution.
    pub visited: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct JointChannel {
    pub dof_index: usize,
    pub name: String,
    pub limit: JointLimit,
    /// `n_d × n_d × p` bin probabilities, row-major with bins innermost.
    pub probs: Vec<f64>,
}

impl JointChannel {
    pub fn bin_edges(&self, p: usize) -> Vec<f64> {
        (0..=p).map(|i| self.limit.lo + self.limit.width() * i as f64 / p as f64).collect()
    }

    pub fn cell(&self, cell: usize, p: usize) -> &[f64] {
        &self.probs[cell * p..(cell + 1) * p]
    }
}

impl JointHistograms {
    pub fn uniform(n_d: usize, p: usize, robot: &RobotModel) -> Self {
        let joints = joint_dofs(robot)
            .map(|i| JointChannel {
                dof_index: i,
                name: robot.dof_names[i].clone(),
                limit: robot.limits[i],
                probs: vec![1.0 / p as f64; n_d * n_d * p],
            })
            .collect();
        JointHistograms {
            n_d,
            p,
            joints,
            visited: vec![false; n_d * n_d],
        }
    }
}

pub(crate) fn joint_dofs(robot: &RobotModel) -> impl Iterator<Item = usize> + '_ {
    (robot.base_dof_count..robot.dof()).filter(|&i| robot.dof_kinds[i] != DofKind::Position)
}

/// Bin of `value` among `p` equal bins over `limit`; left edges are inclusive
/// and the right limit falls in the last bin.
pub fn bin_index(value: f64, limit: JointLimit, p: usize) -> usize {
    let t = (value - limit.lo) / limit.width() * p as f64;
    if !(t > 0.0) {
        0
    } else {
        (t.floor() as usize).min(p - 1)
    }
}

/// Visits every interpolated configuration along a plan, spaced so the base
/// moves at most a quarter of a cell diagonal between samples.
fn trace_plan(env: &Environment, robot: &RobotModel, plan: &MotionPlan, mut visit: impl FnMut(&[f64])) {
    let (cw, ch) = env.cell_size();
    let resolution = 0.25 * cw.hypot(ch);
    let metric = CSpaceMetric::for_robot(robot);
    let Some(first) = plan.waypoints.first() else {
        return;
    };
    visit(&first.0);
    let mut buf = Vec::new();
    for w in plan.waypoints.windows(2) {
        let (a, b) = (&w[0].0, &w[1].0);
        let planar = (b[0] - a[0]).hypot(b[1] - a[1]);
        let n = ((planar / resolution).ceil() as usize).max(1);
        for i in 1..=n {
            metric.interpolate_into(a, b, i as f64 / n as f64, &mut buf);
            visit(&buf);
        }
    }
}

/// Cells touched by the base-position trace of `plan`.
pub fn plan_cells(env: &Environment, robot: &RobotModel, plan: &MotionPlan) -> BTreeSet<(usize, usize)> {
    let mut cells = BTreeSet::new();
    trace_plan(env, robot, plan, |q| {
        if let Ok(c) = env.cell_of(q[0], q[1]) {
            cells.insert(c);
        }
    });
    cells
}

/// Criticality of every cell from a corpus of plans.
pub fn compute_criticality(env: &Environment, robot: &RobotModel, plans: &[MotionPlan]) -> Result<CriticalityMap> {
    if plans.is_empty() {
        return Err(invalid("criticality needs at least one plan"));
    }
    let n = env.n_d;
    let mut counts = vec![0u32; n * n];
    for plan in plans {
        for (r, c) in plan_cells(env, robot, plan) {
            counts[r * n + c] += 1;
        }
    }
    let free = env.free_cell_count();
    let plan_count = plans.len();
    let blocked = env.blocked_mask().to_vec();
    let scores = counts
        .iter()
        .zip(&blocked)
        .map(|(&k, &b)| if b { 0.0 } else { (k as u64 * free as u64) as f64 / plan_count as f64 })
        .collect();
    Ok(CriticalityMap {
        n_d: n,
        scores,
        counts,
        plan_count,
        free_cells: free,
        reference: ReferenceDensity::UniformFree,
        smoothed: false,
        blocked,
    })
}

/// Zero-padded 3×3 Gaussian smoothing; blocked cells are zeroed afterwards.
pub fn gaussian_smooth(map: &CriticalityMap) -> CriticalityMap {
    let n = map.n_d as isize;
    let mut out = vec![0.0; map.scores.len()];
    for r in 0..n {
        for c in 0..n {
            let idx = (r * n + c) as usize;
            if map.blocked[idx] {
                continue;
            }
            let mut acc = 0.0;
            for (dr, row) in GAUSSIAN_3X3.iter().enumerate() {
                for (dc, w) in row.iter().enumerate() {
                    let rr = r + dr as isize - 1;
                    let cc = c + dc as isize - 1;
                    if rr >= 0 && rr < n && cc >= 0 && cc < n {
                        acc += w * map.scores[(rr * n + cc) as usize];
                    }
                }
            }
            out[idx] = acc / 16.0;
        }
    }
    CriticalityMap {
        scores: out,
        smoothed: true,
        ..map.clone()
    }
}

/// Per-cell histograms of each non-base joint over `p` bins.
pub fn compute_joint_histograms(
    env: &Environment,
    robot: &RobotModel,
    plans: &[MotionPlan],
    p: usize,
) -> Result<JointHistograms> {
    if p < 2 {
        return Err(invalid("need at least two bins per joint"));
    }
    let n = env.n_d;
    let mut hist = JointHistograms::uniform(n, p, robot);
    let mut counts: Vec<Vec<u64>> = hist.joints.iter().map(|_| vec![0u64; n * n * p]).collect();
    let mut totals = vec![0u64; n * n];
    for plan in plans {
        trace_plan(env, robot, plan, |q| {
            let Ok((r, c)) = env.cell_of(q[0], q[1]) else {
                return;
            };
            let cell = r * n + c;
            totals[cell] += 1;
            for (j, joint) in hist.joints.iter().enumerate() {
                counts[j][cell * p + bin_index(q[joint.dof_index], joint.limit, p)] += 1;
            }
        });
    }
    for cell in 0..n * n {
        if totals[cell] == 0 {
            continue;
        }
        hist.visited[cell] = true;
        for (j, joint) in hist.joints.iter_mut().enumerate() {
            for b in 0..p {
                joint.probs[cell * p + b] = counts[j][cell * p + b] as f64 / totals[cell] as f64;
            }
        }
    }
    Ok(hist)
}
