//! Baseline sampling-based planners (RRT, BiRRT, PRM) and Dijkstra
//! extraction. BiRRT doubles as the demonstration engine for datasets.

mod dijkstra;
mod nn;
mod prm;
mod space;
mod tree;

use std::path::Path;

use serde::{Deserialize, Serialize};

pub use dijkstra::{dijkstra, shortest_costs, WeightedGraph};
pub use nn::NearestIndex;
pub use prm::{prm_build, prm_query, Roadmap, RoadmapParams};
pub use space::{
    derive_seed, Budget, ClockMode, FreeSampler, PlannerRng, Space, UniformSampler, UnionFind, MAX_REJECTION_ATTEMPTS,
    VIRTUAL_CHECK_NS, VIRTUAL_DISTANCE_NS,
};
pub use tree::{birrt_plan, rrt_plan, TreeParams};

use crate::error::{Error, Result};
use crate::workspace::{Configuration, Environment, RobotModel};

/// Goal-bias fraction for RRT.
pub const DEFAULT_GOAL_BIAS: f64 = 0.05;
/// Tree extension step, ten steer steps.
pub const DEFAULT_EXTEND_STEP: f64 = 0.5;
/// PRM neighbour count.
pub const DEFAULT_PRM_K: usize = 8;

/// One motion-planning problem.
#[derive(Clone, Debug)]
pub struct MotionQuery<'a> {
    pub env: &'a Environment,
    pub robot: &'a RobotModel,
    pub start: Configuration,
    pub goal: Configuration,
    /// Seconds, measured by the planner's [`ClockMode`].
    pub time_budget: f64,
    pub seed: u64,
}

impl MotionQuery<'_> {
    /// Checks dimensions and that both endpoints are collision-free.
    pub fn validate(&self) -> Result<()> {
        for (name, q) in [("start", &self.start), ("goal", &self.goal)] {
            self.robot
                .check_dims(q)
                .map_err(|e| Error::InvalidQuery(format!("{name}: {e}")))?;
            if !crate::workspace::footprint_free(self.env, self.robot, &q.0) {
                return Err(Error::InvalidQuery(format!("{name} configuration is in collision")));
            }
        }
        if !(self.time_budget >= 0.0) {
            return Err(Error::InvalidQuery("time budget must be non-negative".into()));
        }
        Ok(())
    }
}

/// A solved query: consecutive waypoints are joined by successful steers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MotionPlan {
    pub waypoints: Vec<Configuration>,
    pub solve_time: f64,
    pub nodes_expanded: u64,
    pub seed: u64,
}

impl MotionPlan {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut text = serde_json::to_string(self)?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }

    /// C-space length of the waypoint polyline.
    pub fn length(&self, robot: &RobotModel) -> f64 {
        let metric = crate::workspace::CSpaceMetric::for_robot(robot);
        self.waypoints.windows(2).map(|w| metric.distance(&w[0].0, &w[1].0)).sum()
    }
}

/// Re-checks a plan: endpoints, every waypoint and every connecting steer.
pub fn validate_plan(
    env: &Environment,
    robot: &RobotModel,
    plan: &MotionPlan,
    start: &Configuration,
    goal: &Configuration,
    step: f64,
) -> bool {
    if plan.waypoints.first() != Some(start) || plan.waypoints.last() != Some(goal) {
        return false;
    }
    let space = Space::new(env, robot, step);
    plan.waypoints.iter().all(|q| q.len() == robot.dof() && space.free(&q.0))
        && plan.waypoints.windows(2).all(|w| space.segment_free(&w[0].0, &w[1].0))
}

/// Builds a plan from node configurations along `path`.
pub(crate) fn plan_from_nodes(
    nodes: impl Iterator<Item = Vec<f64>>,
    solve_time: f64,
    nodes_expanded: u64,
    seed: u64,
) -> MotionPlan {
    MotionPlan {
        waypoints: nodes.map(Configuration).collect(),
        solve_time,
        nodes_expanded,
        seed,
    }
}
