//! Worlds, robots, configuration space, collision checks and straight-line
//! steering. Every other module is built on these queries.

mod env;
mod geometry;
pub mod presets;
mod robot;

pub use env::{EnvFile, Environment, ObstacleSpec};
pub use geometry::{Pose2, Rect, Vec2};
pub use robot::{wrap_angle, Configuration, DofKind, JointLimit, Link, RobotKind, RobotModel, RobotSpec};

use crate::error::Result;

/// Default C-space steering resolution (meters, translational-equivalent).
pub const DEFAULT_STEER_STEP: f64 = 0.05;

/// Places every link of `robot` at `q`.
pub fn forward_kinematics(robot: &RobotModel, q: &Configuration) -> Result<Vec<Pose2>> {
    robot.forward_kinematics(q)
}

/// Exact footprint test: every link inside the world and overlapping no obstacle.
pub fn is_collision_free(env: &Environment, robot: &RobotModel, q: &Configuration) -> Result<bool> {
    robot.check_dims(q)?;
    Ok(footprint_free(env, robot, &q.0))
}

pub(crate) fn footprint_free(env: &Environment, robot: &RobotModel, q: &[f64]) -> bool {
    let bounds = env.bounds();
    let mut free = true;
    robot.place_links(q, |link| {
        if !free {
            return;
        }
        if !link.within(&bounds) || env.obstacles.iter().any(|o| link.overlaps_rect(o)) {
            free = false;
        }
    });
    free
}

/// Weighted Euclidean metric on C-space. Angular components are scaled by the
/// robot's longest link so a unit of distance bounds swept displacement.
#[derive(Clone, Debug, PartialEq)]
pub struct CSpaceMetric {
    weights: Vec<f64>,
    kinds: Vec<DofKind>,
}

impl CSpaceMetric {
    pub fn for_robot(robot: &RobotModel) -> Self {
        let arm = robot.longest_link();
        let weights = robot
            .dof_kinds
            .iter()
            .map(|k| if *k == DofKind::Position { 1.0 } else { arm })
            .collect();
        CSpaceMetric {
            weights,
            kinds: robot.dof_kinds.clone(),
        }
    }

    /// Signed per-DOF displacement from `a` to `b`; headings take the short way round.
    #[inline]
    pub fn delta(&self, i: usize, a: f64, b: f64) -> f64 {
        match self.kinds[i] {
            DofKind::Heading => wrap_angle(b - a),
            _ => b - a,
        }
    }

    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        let mut acc = 0.0;
        for i in 0..a.len() {
            let d = self.weights[i] * self.delta(i, a[i], b[i]);
            acc += d * d;
        }
        acc.sqrt()
    }

    /// Point at fraction `t` along the segment from `a` to `b`.
    pub fn interpolate_into(&self, a: &[f64], b: &[f64], t: f64, out: &mut Vec<f64>) {
        out.clear();
        for i in 0..a.len() {
            let v = a[i] + self.delta(i, a[i], b[i]) * t;
            out.push(if self.kinds[i] == DofKind::Heading { wrap_angle(v) } else { v });
        }
    }

    pub fn interpolate(&self, a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(a.len());
        self.interpolate_into(a, b, t, &mut out);
        out
    }

    /// Moves from `a` toward `b` by at most `max_step`.
    pub fn step_toward(&self, a: &[f64], b: &[f64], max_step: f64) -> Vec<f64> {
        let d = self.distance(a, b);
        if d <= max_step {
            b.to_vec()
        } else {
            self.interpolate(a, b, max_step / d)
        }
    }

    pub fn segment_count(&self, a: &[f64], b: &[f64], step: f64) -> usize {
        let d = self.distance(a, b);
        if d == 0.0 {
            0
        } else {
            (d / step).ceil().max(1.0) as usize
        }
    }
}

/// Orders a segment's endpoints canonically so that both traversal
/// directions visit the same sample points.
pub(crate) fn canonical_order<'a>(a: &'a [f64], b: &'a [f64]) -> (&'a [f64], &'a [f64], bool) {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Less => return (a, b, false),
            std::cmp::Ordering::Greater => return (b, a, true),
            std::cmp::Ordering::Equal => {}
        }
    }
    (a, b, false)
}

/// Calls `visit` on each sample of the straight segment `a → b` at spacing
/// `≤ step`, endpoints included, stopping early when it returns `false`.
/// Returns whether every visit returned `true`.
pub(crate) fn walk_segment(
    metric: &CSpaceMetric,
    a: &[f64],
    b: &[f64],
    step: f64,
    mut visit: impl FnMut(&[f64]) -> bool,
) -> bool {
    let (lo, hi, _) = canonical_order(a, b);
    let n = metric.segment_count(lo, hi, step);
    if n == 0 {
        return visit(lo);
    }
    let mut buf = Vec::with_capacity(lo.len());
    for i in 0..=n {
        metric.interpolate_into(lo, hi, i as f64 / n as f64, &mut buf);
        if !visit(&buf) {
            return false;
        }
    }
    true
}

/// Straight-line local planner. Returns the interpolated waypoints from
/// `from` to `to` when every sample is collision-free.
pub fn steer(
    env: &Environment,
    robot: &RobotModel,
    from: &Configuration,
    to: &Configuration,
    step: f64,
) -> Result<Option<Vec<Configuration>>> {
    robot.check_dims(from)?;
    robot.check_dims(to)?;
    if !(step > 0.0) {
        return Err(crate::error::invalid("steer step must be positive"));
    }
    let metric = CSpaceMetric::for_robot(robot);
    if from == to {
        return Ok(footprint_free(env, robot, &from.0).then(|| vec![from.clone()]));
    }
    let (_, _, reversed) = canonical_order(&from.0, &to.0);
    let mut samples = Vec::new();
    let ok = walk_segment(&metric, &from.0, &to.0, step, |q| {
        if footprint_free(env, robot, q) {
            samples.push(Configuration(q.to_vec()));
            true
        } else {
            false
        }
    });
    if !ok {
        return Ok(None);
    }
    if reversed {
        samples.reverse();
    }
    // Exact endpoints rather than their re-interpolated images.
    *samples.first_mut().unwrap() = from.clone();
    *samples.last_mut().unwrap() = to.clone();
    Ok(Some(samples))
}
