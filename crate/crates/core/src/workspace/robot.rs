use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use super::geometry::{Pose2, Vec2};
use crate::error::{invalid, Result};

/// Wraps an angle into `[-π, π)`.
pub fn wrap_angle(a: f64) -> f64 {
    let mut w = a - TAU * ((a + PI) / TAU).floor();
    if w >= PI {
        w -= TAU;
    }
    if w < -PI {
        w = -PI;
    }
    w
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RobotKind {
    Se2Rect,
    Hinged,
    PlanarArm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DofKind {
    /// Workspace position, meters.
    Position,
    /// Base heading, wrapped to `[-π, π)`.
    Heading,
    /// Relative revolute joint, clamped to its limits.
    Joint,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Link {
    pub length: f64,
    pub width: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JointLimit {
    pub lo: f64,
    pub hi: f64,
}

impl JointLimit {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// A robot configuration: one value per DOF, in the robot's `dof_names` order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Configuration(pub Vec<f64>);

impl Configuration {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn position(&self) -> (f64, f64) {
        (self.0[0], self.0[1])
    }
}

impl From<Vec<f64>> for Configuration {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RobotModel {
    pub kind: RobotKind,
    pub links: Vec<Link>,
    pub dof_names: Vec<String>,
    pub dof_kinds: Vec<DofKind>,
    pub limits: Vec<JointLimit>,
    pub base_dof_count: usize,
}

impl RobotModel {
    /// Single rectangle with DOF `(x, y, θ)`.
    pub fn se2_rect(length: f64, width: f64, world: (f64, f64)) -> Self {
        Self::chain(RobotKind::Se2Rect, vec![Link { length, width }], world, FRAC_PI_2)
    }

    /// Two links joined by a hinge `ω ∈ [-π/2, π/2]`; DOF `(x, y, θ, ω)`.
    pub fn hinged(link: Link, world: (f64, f64)) -> Self {
        Self::chain(RobotKind::Hinged, vec![link, link], world, FRAC_PI_2)
    }

    /// Serial chain of `links.len() >= 2` links; DOF `(x, y, θ₁, …, θ_a)`.
    pub fn planar_arm(links: Vec<Link>, world: (f64, f64), joint_range: f64) -> Self {
        Self::chain(RobotKind::PlanarArm, links, world, joint_range)
    }

    fn chain(kind: RobotKind, links: Vec<Link>, world: (f64, f64), joint_range: f64) -> Self {
        let mut dof_names = vec!["x".to_string(), "y".to_string()];
        let mut dof_kinds = vec![DofKind::Position, DofKind::Position];
        let mut limits = vec![
            JointLimit { lo: 0.0, hi: world.0 },
            JointLimit { lo: 0.0, hi: world.1 },
        ];
        for i in 0..links.len() {
            if i == 0 {
                dof_names.push(if kind == RobotKind::PlanarArm { "theta1".into() } else { "theta".into() });
                dof_kinds.push(DofKind::Heading);
                limits.push(JointLimit { lo: -PI, hi: PI });
            } else {
                dof_names.push(match kind {
                    RobotKind::Hinged => "omega".to_string(),
                    _ => format!("theta{}", i + 1),
                });
                dof_kinds.push(DofKind::Joint);
                limits.push(JointLimit {
                    lo: -joint_range,
                    hi: joint_range,
                });
            }
        }
        RobotModel {
            kind,
            links,
            dof_names,
            dof_kinds,
            limits,
            base_dof_count: 2,
        }
    }

    pub fn dof(&self) -> usize {
        self.dof_names.len()
    }

    /// Number of non-base joints `k`.
    pub fn joint_count(&self) -> usize {
        self.dof() - self.base_dof_count
    }

    pub fn longest_link(&self) -> f64 {
        self.links.iter().map(|l| l.length).fold(0.0, f64::max)
    }

    pub fn check_dims(&self, q: &Configuration) -> Result<()> {
        if q.len() != self.dof() {
            return Err(invalid(format!(
                "configuration has {} values, robot has {} DOF",
                q.len(),
                self.dof()
            )));
        }
        if q.0.iter().any(|v| !v.is_finite()) {
            return Err(invalid("configuration contains non-finite values"));
        }
        Ok(())
    }

    /// Wraps headings and clamps joints into their canonical ranges.
    pub fn canonicalize(&self, q: &mut Configuration) {
        for (i, v) in q.0.iter_mut().enumerate() {
            match self.dof_kinds[i] {
                DofKind::Heading => *v = wrap_angle(*v),
                DofKind::Joint => *v = v.clamp(self.limits[i].lo, self.limits[i].hi),
                DofKind::Position => {}
            }
        }
    }

    /// Places every link in the world frame. Link 0 is centered at `(x, y)`
    /// with heading `θ`; link `i > 0` starts at the distal end of link `i-1`,
    /// rotated by its joint value relative to that link.
    pub fn forward_kinematics(&self, q: &Configuration) -> Result<Vec<Pose2>> {
        self.check_dims(q)?;
        let mut out = Vec::with_capacity(self.links.len());
        self.place_links(&q.0, |p| out.push(p));
        Ok(out)
    }

    pub(crate) fn place_links(&self, q: &[f64], mut sink: impl FnMut(Pose2)) {
        let mut heading = q[2];
        let first = self.links[0];
        let center = Vec2::new(q[0], q[1]);
        sink(Pose2::oriented_rect(center, heading, first.length, first.width));
        let (s, c) = heading.sin_cos();
        let mut tip = Vec2::new(center.x + c * first.length * 0.5, center.y + s * first.length * 0.5);
        for (i, link) in self.links.iter().enumerate().skip(1) {
            heading += q[2 + i];
            let (s, c) = heading.sin_cos();
            let half = Vec2::new(c * link.length * 0.5, s * link.length * 0.5);
            let mid = tip.add(half);
            sink(Pose2::oriented_rect(mid, heading, link.length, link.width));
            tip = mid.add(half);
        }
    }
}

/// Robot description as it appears in environment files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RobotSpec {
    pub kind: RobotKind,
    /// `[length, width]` per link, meters.
    pub links: Vec<[f64; 2]>,
    /// `[lo, hi]` per DOF; defaults derive from the world extent and kind.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limits: Option<Vec<[f64; 2]>>,
}

impl RobotSpec {
    pub fn build(&self, world: (f64, f64)) -> Result<RobotModel> {
        let links: Vec<Link> = self
            .links
            .iter()
            .map(|l| Link {
                length: l[0],
                width: l[1],
            })
            .collect();
        if links.iter().any(|l| !(l.length > 0.0 && l.width > 0.0)) {
            return Err(invalid("link dimensions must be positive"));
        }
        let mut robot = match self.kind {
            RobotKind::Se2Rect => {
                if links.len() != 1 {
                    return Err(invalid("se2_rect robot takes exactly one link"));
                }
                RobotModel::se2_rect(links[0].length, links[0].width, world)
            }
            RobotKind::Hinged => {
                if links.len() != 2 {
                    return Err(invalid("hinged robot takes exactly two links"));
                }
                let mut r = RobotModel::hinged(links[0], world);
                r.links = links;
                r
            }
            RobotKind::PlanarArm => {
                if links.len() < 2 {
                    return Err(invalid("planar_arm needs at least two links"));
                }
                RobotModel::planar_arm(links, world, FRAC_PI_2)
            }
        };
        if let Some(limits) = &self.limits {
            if limits.len() != robot.dof() {
                return Err(invalid(format!(
                    "{} limits given for a {}-DOF robot",
                    limits.len(),
                    robot.dof()
                )));
            }
            for (i, l) in limits.iter().enumerate() {
                if !(l[0] < l[1]) {
                    return Err(invalid(format!("limit {i} is empty")));
                }
                robot.limits[i] = JointLimit { lo: l[0], hi: l[1] };
            }
        }
        Ok(robot)
    }

    pub fn from_model(robot: &RobotModel) -> Self {
        RobotSpec {
            kind: robot.kind,
            links: robot.links.iter().map(|l| [l.length, l.width]).collect(),
            limits: Some(robot.limits.iter().map(|l| [l.lo, l.hi]).collect()),
        }
    }
}
