use std::cell::Cell;
use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::workspace::{footprint_free, walk_segment, CSpaceMetric, DofKind, Environment, RobotModel, DEFAULT_STEER_STEP};

/// Deterministic RNG used by every planner; seeded per query.
pub type PlannerRng = rand_chacha::ChaCha8Rng;

/// Mixes a base seed with indices into an independent per-run seed.
pub fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    parts.iter().fold(mix(base), |acc, &p| mix(acc ^ mix(p)))
}

/// Upper bound on rejection attempts for one free configuration.
pub const MAX_REJECTION_ATTEMPTS: usize = 1_000_000;

/// How planners measure elapsed time.
///
/// `Wall` reads the monotonic clock. `Virtual` charges a fixed cost per
/// collision check and per distance evaluation, so budgets and reported
/// solve times are reproducible bit-for-bit.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClockMode {
    #[default]
    Wall,
    Virtual,
}

pub const VIRTUAL_CHECK_NS: u64 = 1_000;
pub const VIRTUAL_DISTANCE_NS: u64 = 10;

/// Environment + robot + metric, counting the work done through it.
pub struct Space<'a> {
    pub env: &'a Environment,
    pub robot: &'a RobotModel,
    pub metric: CSpaceMetric,
    pub step: f64,
    checks: Cell<u64>,
    distances: Cell<u64>,
}

impl<'a> Space<'a> {
    pub fn new(env: &'a Environment, robot: &'a RobotModel, step: f64) -> Self {
        Space {
            env,
            robot,
            metric: CSpaceMetric::for_robot(robot),
            step: if step > 0.0 { step } else { DEFAULT_STEER_STEP },
            checks: Cell::new(0),
            distances: Cell::new(0),
        }
    }

    pub fn collision_checks(&self) -> u64 {
        self.checks.get()
    }

    fn work_ns(&self) -> u64 {
        self.checks.get() * VIRTUAL_CHECK_NS + self.distances.get() * VIRTUAL_DISTANCE_NS
    }

    #[inline]
    pub fn free(&self, q: &[f64]) -> bool {
        self.checks.set(self.checks.get() + 1);
        footprint_free(self.env, self.robot, q)
    }

    pub fn segment_free(&self, a: &[f64], b: &[f64]) -> bool {
        walk_segment(&self.metric, a, b, self.step, |q| self.free(q))
    }

    #[inline]
    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        self.distances.set(self.distances.get() + 1);
        self.metric.distance(a, b)
    }

    /// Uniform draw over the joint-limit box, collision unchecked.
    pub fn sample_uniform(&self, rng: &mut PlannerRng) -> Vec<f64> {
        self.robot
            .limits
            .iter()
            .zip(&self.robot.dof_kinds)
            .map(|(l, k)| match k {
                DofKind::Joint => rng.gen_range(l.lo..=l.hi),
                _ => rng.gen_range(l.lo..l.hi),
            })
            .collect()
    }

    /// Uniform rejection sampling over free configurations.
    pub fn sample_free(&self, rng: &mut PlannerRng) -> Result<Vec<f64>> {
        for _ in 0..MAX_REJECTION_ATTEMPTS {
            let q = self.sample_uniform(rng);
            if self.free(&q) {
                return Ok(q);
            }
        }
        Err(Error::Infeasible(format!(
            "no free configuration after {MAX_REJECTION_ATTEMPTS} uniform draws"
        )))
    }
}

/// Time budget for one planning call.
pub struct Budget {
    mode: ClockMode,
    started: Instant,
    work_at_start: u64,
    limit_s: f64,
}

impl Budget {
    pub fn start(space: &Space, mode: ClockMode, limit_s: f64) -> Self {
        Budget {
            mode,
            started: Instant::now(),
            work_at_start: space.work_ns(),
            limit_s,
        }
    }

    pub fn elapsed(&self, space: &Space) -> f64 {
        match self.mode {
            ClockMode::Wall => self.started.elapsed().as_secs_f64(),
            ClockMode::Virtual => (space.work_ns() - self.work_at_start) as f64 * 1e-9,
        }
    }

    pub fn exhausted(&self, space: &Space) -> bool {
        !(self.elapsed(space) < self.limit_s)
    }

    pub fn limit(&self) -> f64 {
        self.limit_s
    }
}

/// Source of collision-free configurations for roadmap construction.
pub trait FreeSampler {
    fn next_free(&mut self, space: &Space, rng: &mut PlannerRng) -> Result<Vec<f64>>;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct UniformSampler;

impl FreeSampler for UniformSampler {
    fn next_free(&mut self, space: &Space, rng: &mut PlannerRng) -> Result<Vec<f64>> {
        space.sample_free(rng)
    }
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Clone, Debug, Default)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn push(&mut self) -> usize {
        let id = self.parent.len();
        self.parent.push(id);
        self.size.push(1);
        id
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn component_count(&mut self) -> usize {
        (0..self.len()).filter(|&i| self.find(i) == i).count()
    }
}
