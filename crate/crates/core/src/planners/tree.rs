use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use super::nn::NearestIndex;
use super::space::{Budget, ClockMode, PlannerRng, Space};
use super::{plan_from_nodes, MotionPlan, MotionQuery, DEFAULT_EXTEND_STEP, DEFAULT_GOAL_BIAS};
use crate::error::Result;
use crate::workspace::DEFAULT_STEER_STEP;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TreeParams {
    pub steer_step: f64,
    pub extend_step: f64,
    pub goal_bias: f64,
    pub clock: ClockMode,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams {
            steer_step: DEFAULT_STEER_STEP,
            extend_step: DEFAULT_EXTEND_STEP,
            goal_bias: DEFAULT_GOAL_BIAS,
            clock: ClockMode::Wall,
        }
    }
}

/// Wall-clock reads happen once per this many iterations.
const CHECK_EVERY: u64 = 64;

struct Tree {
    index: NearestIndex,
    parent: Vec<usize>,
}

impl Tree {
    fn rooted(space: &Space, root: Vec<f64>) -> Self {
        let mut index = NearestIndex::for_space(space);
        index.insert(root);
        Tree {
            index,
            parent: vec![usize::MAX],
        }
    }

    fn add(&mut self, q: Vec<f64>, parent: usize) -> usize {
        self.parent.push(parent);
        self.index.insert(q)
    }

    /// Node configurations from the root down to `id`.
    fn branch(&self, mut id: usize) -> Vec<Vec<f64>> {
        let mut out = vec![self.index.get(id).to_vec()];
        while self.parent[id] != usize::MAX {
            id = self.parent[id];
            out.push(self.index.get(id).to_vec());
        }
        out.reverse();
        out
    }

    /// Extends the nearest node toward `target` by one step. Returns the new node.
    fn extend(&mut self, space: &Space, target: &[f64], step: f64) -> Option<usize> {
        let (near, _) = self.index.nearest(space, target)?;
        self.extend_from(space, near, target, step)
    }

    fn extend_from(&mut self, space: &Space, near: usize, target: &[f64], step: f64) -> Option<usize> {
        let from = self.index.get(near);
        let q_new = space.metric.step_toward(from, target, step);
        if !space.free(&q_new) || !space.segment_free(from, &q_new) {
            return None;
        }
        Some(self.add(q_new, near))
    }
}

/// Reported solve times never exceed the budget.
fn finish(plan: MotionPlan, budget: &Budget, _space: &Space) -> Option<MotionPlan> {
    (plan.solve_time <= budget.limit()).then_some(plan)
}

/// Single-tree RRT with goal biasing.
pub fn rrt_plan(query: &MotionQuery, params: &TreeParams) -> Result<Option<MotionPlan>> {
    query.validate()?;
    let space = Space::new(query.env, query.robot, params.steer_step);
    let budget = Budget::start(&space, params.clock, query.time_budget);
    if budget.exhausted(&space) {
        return Ok(None);
    }
    let mut rng = PlannerRng::seed_from_u64(query.seed);
    let goal = query.goal.0.clone();
    if query.start == query.goal {
        let t = budget.elapsed(&space);
        return Ok(finish(plan_from_nodes(std::iter::once(goal), t, 1, query.seed), &budget, &space));
    }
    let mut tree = Tree::rooted(&space, query.start.0.clone());
    let mut iter: u64 = 0;
    loop {
        if iter % CHECK_EVERY == 0 && budget.exhausted(&space) {
            return Ok(None);
        }
        iter += 1;
        let target = if rng.gen::<f64>() < params.goal_bias {
            goal.clone()
        } else {
            space.sample_uniform(&mut rng)
        };
        let Some(id) = tree.extend(&space, &target, params.extend_step) else {
            continue;
        };
        let q_new = tree.index.get(id);
        if space.distance(q_new, &goal) <= params.extend_step && space.segment_free(q_new, &goal) {
            let goal_id = if q_new == goal.as_slice() { id } else { tree.add(goal.clone(), id) };
            let nodes = tree.branch(goal_id);
            let t = budget.elapsed(&space);
            let plan = plan_from_nodes(nodes.into_iter(), t, tree.index.len() as u64, query.seed);
            return Ok(finish(plan, &budget, &space));
        }
    }
}

/// Bidirectional RRT (RRT-Connect): trees rooted at start and goal take
/// turns extending toward a random sample; the other tree then greedily
/// connects toward the new node.
pub fn birrt_plan(query: &MotionQuery, params: &TreeParams) -> Result<Option<MotionPlan>> {
    query.validate()?;
    let space = Space::new(query.env, query.robot, params.steer_step);
    let budget = Budget::start(&space, params.clock, query.time_budget);
    if budget.exhausted(&space) {
        return Ok(None);
    }
    let mut rng = PlannerRng::seed_from_u64(query.seed);
    if query.start == query.goal {
        let t = budget.elapsed(&space);
        return Ok(finish(
            plan_from_nodes(std::iter::once(query.start.0.clone()), t, 1, query.seed),
            &budget,
            &space,
        ));
    }
    let mut trees = [
        Tree::rooted(&space, query.start.0.clone()),
        Tree::rooted(&space, query.goal.0.clone()),
    ];
    let mut active = 0usize;
    let mut iter: u64 = 0;
    loop {
        if iter % CHECK_EVERY == 0 && budget.exhausted(&space) {
            return Ok(None);
        }
        iter += 1;
        let target = space.sample_uniform(&mut rng);
        let other = 1 - active;
        if let Some(new_id) = trees[active].extend(&space, &target, params.extend_step) {
            let q_new = trees[active].index.get(new_id).to_vec();
            // Connect: repeat extension from the other tree until blocked or joined.
            if let Some((mut cur, _)) = trees[other].index.nearest(&space, &q_new) {
                loop {
                    if trees[other].index.get(cur) == q_new.as_slice() {
                        let mut a = trees[active].branch(new_id);
                        let mut b = trees[other].branch(cur);
                        b.pop();
                        b.reverse();
                        a.extend(b);
                        if active == 1 {
                            a.reverse();
                        }
                        let t = budget.elapsed(&space);
                        let expanded = (trees[0].index.len() + trees[1].index.len()) as u64;
                        return Ok(finish(plan_from_nodes(a.into_iter(), t, expanded, query.seed), &budget, &space));
                    }
                    iter += 1;
                    if iter % CHECK_EVERY == 0 && budget.exhausted(&space) {
                        return Ok(None);
                    }
                    match trees[other].extend_from(&space, cur, &q_new, params.extend_step) {
                        Some(next) => cur = next,
                        None => break,
                    }
                }
            }
        }
        active = other;
    }
}
