//! Learn-and-Link planning over a biased sampling distribution.
//!
//! - [`llp_plan`]: a forest rooted at one sample batch plus start and goal.
//!   Fresh samples extend the nearest node, or root a new tree when that
//!   extension is blocked; every new node tries to link to
//!   the nearest node of each other tree within the link radius. When start
//!   and goal share a tree, Dijkstra extracts the plan.
//! - [`llrm_build`]: a k-nearest roadmap whose vertices come from batches.
//! - [`guided_llp_plan`]: LLP whose biased mass follows a route through the
//!   graph of critical regions.

mod regions;
mod sampler;

use std::collections::{HashSet, VecDeque};
use std::path::Path;

use rand::SeedableRng;
use serde::{Deserialize, Serialize};

pub use regions::{build_region_graph, rect_distance, Region, RegionGraph};
pub use sampler::{biased_count, BatchStream, BiasedSampler, SampleBatch, SamplingDistribution, BIN_FLOOR};

use crate::error::Result;
use crate::planners::{
    dijkstra, prm_build, Budget, ClockMode, MotionPlan, MotionQuery, NearestIndex, PlannerRng, Roadmap,
    RoadmapParams, Space, UnionFind, WeightedGraph, DEFAULT_EXTEND_STEP,
};
use crate::workspace::{Environment, RobotModel, DEFAULT_STEER_STEP};

pub const DEFAULT_BATCH: usize = 500;
pub const DEFAULT_ALPHA: f64 = 0.25;
/// Twice the extend step.
pub const DEFAULT_LINK_RADIUS: f64 = 2.0 * DEFAULT_EXTEND_STEP;
/// Fraction of the maximum criticality a cell needs to join a region.
pub const DEFAULT_REGION_THRESHOLD: f64 = 0.3;
/// Meters between regions that count as adjacent.
pub const DEFAULT_LINK_DISTANCE: f64 = 0.2;
/// Share of biased mass on the active region of a guided route.
pub const ACTIVE_REGION_SHARE: f64 = 0.8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LlpParams {
    #[serde(rename = "N")]
    pub batch_size: usize,
    pub alpha: f64,
    pub steer_step: f64,
    pub extend_step: f64,
    pub link_radius: f64,
    pub region_threshold: f64,
    pub link_distance: f64,
    /// Roadmap build budget in seconds.
    pub budget_s: f64,
    pub clock: ClockMode,
}

impl Default for LlpParams {
    fn default() -> Self {
        LlpParams {
            batch_size: DEFAULT_BATCH,
            alpha: DEFAULT_ALPHA,
            steer_step: DEFAULT_STEER_STEP,
            extend_step: DEFAULT_EXTEND_STEP,
            link_radius: DEFAULT_LINK_RADIUS,
            region_threshold: DEFAULT_REGION_THRESHOLD,
            link_distance: DEFAULT_LINK_DISTANCE,
            budget_s: 1.0,
            clock: ClockMode::Wall,
        }
    }
}

impl LlpParams {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }
}

struct Forest {
    index: NearestIndex,
    graph: WeightedGraph,
    uf: UnionFind,
}

impl Forest {
    fn add(&mut self, q: Vec<f64>) -> usize {
        let id = self.index.insert(q);
        self.graph.add_vertex();
        self.uf.push();
        id
    }

    fn connect(&mut self, a: usize, b: usize, cost: f64) {
        self.graph.add_edge(a, b, cost);
        self.uf.union(a, b);
    }

    /// Tries the nearest node of every other tree within `radius`.
    fn link(&mut self, space: &Space, id: usize, radius: f64) {
        let q = self.index.get(id).to_vec();
        let mut tried = HashSet::new();
        for (j, d) in self.index.within(space, &q, radius) {
            if j == id {
                continue;
            }
            let root = self.uf.find(j);
            if root == self.uf.find(id) || !tried.insert(root) {
                continue;
            }
            if space.segment_free(&q, self.index.get(j)) {
                self.connect(id, j, d);
            }
        }
    }
}

/// Re-weights sampling as trees reach successive regions of a route.
struct Guide<'g> {
    graph: &'g RegionGraph,
    route: Vec<usize>,
    active: usize,
    base: &'g SamplingDistribution,
    template: BiasedSampler,
}

impl Guide<'_> {
    fn sampler(&self) -> Result<BiasedSampler> {
        if self.active >= self.route.len() {
            return Ok(self.template.with_distribution(self.base.clone()));
        }
        let region_mass = |id: usize| -> f64 {
            self.graph.regions[id]
                .cells
                .iter()
                .map(|&(r, c)| self.base.cell_weights[r * self.base.n_d + c])
                .sum()
        };
        let rest: Vec<usize> = self.route[self.active + 1..].to_vec();
        let rest_share = if rest.is_empty() { 0.0 } else { 1.0 - ACTIVE_REGION_SHARE };
        let mut weights = vec![0.0; self.base.cell_weights.len()];
        let mut spread = |ids: &[usize], share: f64| {
            let total: f64 = ids.iter().map(|&id| region_mass(id)).sum();
            let count: usize = ids.iter().map(|&id| self.graph.regions[id].cells.len()).sum();
            for &id in ids {
                for &(r, c) in &self.graph.regions[id].cells {
                    let k = r * self.base.n_d + c;
                    weights[k] += if total > 0.0 {
                        share * self.base.cell_weights[k] / total
                    } else {
                        share / count as f64
                    };
                }
            }
        };
        spread(&[self.route[self.active]], 1.0 - rest_share);
        if !rest.is_empty() {
            spread(&rest, rest_share);
        }
        Ok(self.template.with_distribution(self.base.with_cell_weights(weights)?))
    }

    /// Advances past every route region the start tree already touches.
    fn advance(&mut self, forest: &mut Forest, env: &Environment) -> bool {
        let before = self.active;
        while self.active < self.route.len() {
            let id = self.route[self.active];
            let start_root = forest.uf.find(0);
            let reached = (0..forest.index.len()).any(|v| {
                let q = forest.index.get(v);
                env.cell_of(q[0], q[1])
                    .is_ok_and(|(r, c)| self.graph.cell_region[r * self.graph.n_d + c] == Some(id))
                    && forest.uf.find(v) == start_root
            });
            if !reached {
                break;
            }
            self.active += 1;
        }
        self.active != before
    }
}

fn grow(
    query: &MotionQuery,
    sampler: &BiasedSampler,
    params: &LlpParams,
    mut guide: Option<Guide>,
) -> Result<Option<MotionPlan>> {
    query.validate()?;
    let space = Space::new(query.env, query.robot, params.steer_step);
    let budget = Budget::start(&space, params.clock, query.time_budget);
    if budget.exhausted(&space) {
        return Ok(None);
    }
    if query.start == query.goal {
        let t = budget.elapsed(&space);
        return Ok((t <= query.time_budget).then(|| MotionPlan {
            waypoints: vec![query.start.clone()],
            solve_time: t,
            nodes_expanded: 1,
            seed: query.seed,
        }));
    }
    let mut rng = PlannerRng::seed_from_u64(query.seed);
    let mut forest = Forest {
        index: NearestIndex::for_space(&space),
        graph: WeightedGraph::new(0),
        uf: UnionFind::new(0),
    };
    let mut current = match &guide {
        Some(g) => g.sampler()?,
        None => sampler.clone(),
    };
    let s = forest.add(query.start.0.clone());
    let g = forest.add(query.goal.0.clone());
    forest.link(&space, g, params.link_radius);
    let mut buffer: VecDeque<Vec<f64>> = VecDeque::new();
    let roots = current.sample_batch(&space, &mut rng)?;
    for q in roots.configs {
        if budget.exhausted(&space) {
            return Ok(None);
        }
        let id = forest.add(q);
        forest.link(&space, id, params.link_radius);
    }
    loop {
        if let Some(gd) = guide.as_mut() {
            if gd.advance(&mut forest, query.env) {
                current = gd.sampler()?;
                buffer.clear();
            }
        }
        if forest.uf.find(s) == forest.uf.find(g) {
            let Some((path, _)) = dijkstra(&forest.graph, s, g)? else {
                unreachable!("start and goal share a tree");
            };
            let t = budget.elapsed(&space);
            if t > query.time_budget {
                return Ok(None);
            }
            return Ok(Some(MotionPlan {
                waypoints: path
                    .into_iter()
                    .map(|v| crate::workspace::Configuration(forest.index.get(v).to_vec()))
                    .collect(),
                solve_time: t,
                nodes_expanded: forest.index.len() as u64,
                seed: query.seed,
            }));
        }
        if budget.exhausted(&space) {
            return Ok(None);
        }
        if buffer.is_empty() {
            buffer.extend(current.sample_batch(&space, &mut rng)?.configs);
        }
        let target = buffer.pop_front().expect("batch is non-empty");
        let Some((near, _)) = forest.index.nearest(&space, &target) else {
            continue;
        };
        let from = forest.index.get(near).to_vec();
        let q_new = space.metric.step_toward(&from, &target, params.extend_step);
        if space.segment_free(&from, &q_new) {
            let d = space.distance(&from, &q_new);
            let id = forest.add(q_new);
            forest.connect(near, id, d);
            forest.link(&space, id, params.link_radius);
        } else {
            // A blocked sample seeds a tree of its own.
            let id = forest.add(target);
            forest.link(&space, id, params.link_radius);
        }
    }
}

/// Plans one query with a fresh forest; deterministic in `query.seed`.
pub fn llp_plan(query: &MotionQuery, sampler: &BiasedSampler, params: &LlpParams) -> Result<Option<MotionPlan>> {
    grow(query, sampler, params, None)
}

/// Roadmap whose vertices are drawn batch by batch from `sampler`.
pub fn llrm_build(
    env: &Environment,
    robot: &RobotModel,
    sampler: &BiasedSampler,
    params: &RoadmapParams,
) -> Result<Roadmap> {
    let mut stream = sampler.stream();
    prm_build(env, robot, &mut stream, params)
}

/// LLP steered along the shortest route of critical regions between the
/// regions nearest to start and goal. Without a route this is [`llp_plan`].
pub fn guided_llp_plan(
    query: &MotionQuery,
    sampler: &BiasedSampler,
    regions: &RegionGraph,
    params: &LlpParams,
) -> Result<Option<MotionPlan>> {
    query.validate()?;
    let Some(base) = sampler.dist.as_deref().filter(|d| d.has_mass()) else {
        return llp_plan(query, sampler, params);
    };
    let route = guided_route(query, regions)?;
    let Some(route) = route else {
        return llp_plan(query, sampler, params);
    };
    let guide = Guide {
        graph: regions,
        route,
        active: 0,
        base,
        template: sampler.clone(),
    };
    grow(query, sampler, params, Some(guide))
}

/// The route [`guided_llp_plan`] follows for `query`, if any.
pub fn guided_route(query: &MotionQuery, regions: &RegionGraph) -> Result<Option<Vec<usize>>> {
    let (sx, sy) = query.start.position();
    let (gx, gy) = query.goal.position();
    match (
        regions.nearest_region(query.env, sx, sy),
        regions.nearest_region(query.env, gx, gy),
    ) {
        (Some(a), Some(b)) => regions.route(a, b),
        _ => Ok(None),
    }
}
