use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use super::dijkstra::{dijkstra, WeightedGraph};
use super::nn::NearestIndex;
use super::space::{Budget, ClockMode, FreeSampler, PlannerRng, Space, UnionFind};
use super::{plan_from_nodes, MotionPlan, MotionQuery, DEFAULT_PRM_K};
use crate::error::Result;
use crate::workspace::{Configuration, Environment, RobotModel, DEFAULT_STEER_STEP};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RoadmapParams {
    pub k: usize,
    pub steer_step: f64,
    /// Build time budget in seconds.
    pub budget_s: f64,
    pub max_vertices: Option<usize>,
    pub clock: ClockMode,
    pub seed: u64,
}

impl Default for RoadmapParams {
    fn default() -> Self {
        RoadmapParams {
            k: DEFAULT_PRM_K,
            steer_step: DEFAULT_STEER_STEP,
            budget_s: 1.0,
            max_vertices: None,
            clock: ClockMode::Wall,
            seed: 0,
        }
    }
}

/// Undirected roadmap: every edge passed a steer check when it was added.
#[derive(Clone, Debug)]
pub struct Roadmap {
    pub vertices: Vec<Configuration>,
    /// `(i, j, cost)` with `i < j`; cost is the C-space segment length.
    pub edges: Vec<(usize, usize, f64)>,
    pub build_time: f64,
    pub k: usize,
    pub steer_step: f64,
    index: NearestIndex,
}

impl Roadmap {
    pub fn graph(&self) -> WeightedGraph {
        let mut g = WeightedGraph::new(self.vertices.len());
        for &(i, j, c) in &self.edges {
            g.add_edge(i, j, c);
        }
        g
    }

    pub fn component_count(&self) -> usize {
        let mut uf = UnionFind::new(self.vertices.len());
        for &(i, j, _) in &self.edges {
            uf.union(i, j);
        }
        uf.component_count()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// Grows a k-nearest roadmap from `sampler` until the time or vertex budget
/// runs out.
pub fn prm_build(
    env: &Environment,
    robot: &RobotModel,
    sampler: &mut dyn FreeSampler,
    params: &RoadmapParams,
) -> Result<Roadmap> {
    let space = Space::new(env, robot, params.steer_step);
    let budget = Budget::start(&space, params.clock, params.budget_s);
    let mut rng = PlannerRng::seed_from_u64(params.seed);
    let mut index = NearestIndex::for_space(&space);
    let mut edges = Vec::new();
    loop {
        if budget.exhausted(&space) || params.max_vertices.is_some_and(|m| index.len() >= m) {
            break;
        }
        let q = sampler.next_free(&space, &mut rng)?;
        let neighbors = index.k_nearest(&space, &q, params.k);
        let id = index.len();
        for (j, d) in neighbors {
            if space.segment_free(&q, index.get(j)) {
                edges.push((j, id, d));
            }
        }
        index.insert(q);
    }
    let build_time = budget.elapsed(&space).min(params.budget_s.max(0.0));
    Ok(Roadmap {
        vertices: index.points().iter().cloned().map(Configuration).collect(),
        edges,
        build_time,
        k: params.k,
        steer_step: params.steer_step,
        index,
    })
}

/// Answers one query on a prebuilt roadmap. Start and goal attach to their
/// nearest connectable vertices, then Dijkstra extracts the path. The
/// reported time covers the query only.
pub fn prm_query(roadmap: &Roadmap, query: &MotionQuery, clock: ClockMode) -> Result<Option<MotionPlan>> {
    query.validate()?;
    let space = Space::new(query.env, query.robot, roadmap.steer_step);
    let budget = Budget::start(&space, clock, query.time_budget);
    if budget.exhausted(&space) {
        return Ok(None);
    }
    let n = roadmap.vertices.len();
    if query.start == query.goal {
        let t = budget.elapsed(&space);
        return Ok((t <= query.time_budget).then(|| plan_from_nodes(std::iter::once(query.start.0.clone()), t, 1, query.seed)));
    }
    let mut graph = roadmap.graph();
    let s = graph.add_vertex();
    let g = graph.add_vertex();
    let k = roadmap.k.max(1);
    for (endpoint, q) in [(s, &query.start), (g, &query.goal)] {
        let mut attached = 0;
        for (j, d) in roadmap.index.k_nearest(&space, &q.0, 4 * k) {
            if attached == k || budget.exhausted(&space) {
                break;
            }
            if space.segment_free(&q.0, roadmap.index.get(j)) {
                graph.add_edge(endpoint, j, d);
                attached += 1;
            }
        }
    }
    if space.segment_free(&query.start.0, &query.goal.0) {
        graph.add_edge(s, g, space.distance(&query.start.0, &query.goal.0));
    }
    let Some((path, _)) = dijkstra(&graph, s, g)? else {
        return Ok(None);
    };
    let t = budget.elapsed(&space);
    if t > query.time_budget {
        return Ok(None);
    }
    let nodes = path.into_iter().map(|v| {
        if v == s {
            query.start.0.clone()
        } else if v == g {
            query.goal.0.clone()
        } else {
            roadmap.vertices[v].0.clone()
        }
    });
    Ok(Some(plan_from_nodes(nodes, t, n as u64, query.seed)))
}
