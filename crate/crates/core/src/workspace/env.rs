use std::path::Path;

use serde::{Deserialize, Serialize};

use super::geometry::{Rect, Vec2};
use super::robot::{RobotModel, RobotSpec};
use crate::error::{invalid, Error, Result};

/// The world: a `width × height` rectangle with rectangular obstacles,
/// rasterized onto an `n_d × n_d` grid. Origin is bottom-left and the row
/// index grows with `y`.
#[derive(Clone, Debug, PartialEq)]
pub struct Environment {
    pub width: f64,
    pub height: f64,
    pub n_d: usize,
    pub obstacles: Vec<Rect>,
    occupancy: Vec<bool>,
    blocked: Vec<bool>,
}

impl Environment {
    pub fn new(width: f64, height: f64, n_d: usize, obstacles: Vec<Rect>) -> Result<Self> {
        if !(width > 0.0 && height > 0.0 && width.is_finite() && height.is_finite()) {
            return Err(invalid("world extent must be positive"));
        }
        if n_d == 0 {
            return Err(invalid("n_d must be at least 1"));
        }
        let world = Rect::new(0.0, 0.0, width, height);
        for (i, o) in obstacles.iter().enumerate() {
            if !o.is_valid() || o.xmin < 0.0 || o.ymin < 0.0 || o.xmax > width || o.ymax > height {
                return Err(invalid(format!("obstacle {i} is malformed or outside the world {world:?}")));
            }
        }
        let mut env = Environment {
            width,
            height,
            n_d,
            obstacles,
            occupancy: vec![false; n_d * n_d],
            blocked: vec![false; n_d * n_d],
        };
        for row in 0..n_d {
            for col in 0..n_d {
                let cell = env.cell_rect(row, col);
                let idx = row * n_d + col;
                env.occupancy[idx] = env.obstacles.iter().any(|o| o.intersects_closed(&cell));
                env.blocked[idx] = env.occupancy[idx] && covered_by_union(&cell, &env.obstacles);
            }
        }
        Ok(env)
    }

    pub fn empty(width: f64, height: f64, n_d: usize) -> Result<Self> {
        Self::new(width, height, n_d, Vec::new())
    }

    pub fn bounds(&self) -> Rect {
        Rect::new(0.0, 0.0, self.width, self.height)
    }

    pub fn cell_size(&self) -> (f64, f64) {
        (self.width / self.n_d as f64, self.height / self.n_d as f64)
    }

    pub fn cell_count(&self) -> usize {
        self.n_d * self.n_d
    }

    /// Closed region of cell `(row, col)`.
    pub fn cell_rect(&self, row: usize, col: usize) -> Rect {
        let n = self.n_d as f64;
        Rect::new(
            col as f64 * self.width / n,
            row as f64 * self.height / n,
            (col + 1) as f64 * self.width / n,
            (row + 1) as f64 * self.height / n,
        )
    }

    pub fn cell_center(&self, row: usize, col: usize) -> Vec2 {
        let (cw, ch) = self.cell_size();
        Vec2::new((col as f64 + 0.5) * cw, (row as f64 + 0.5) * ch)
    }

    /// True iff the closed cell intersects any obstacle.
    pub fn occupied(&self, row: usize, col: usize) -> bool {
        self.occupancy[row * self.n_d + col]
    }

    /// True iff the cell is entirely covered by obstacles, so no robot base
    /// can ever stand in it.
    pub fn blocked(&self, row: usize, col: usize) -> bool {
        self.blocked[row * self.n_d + col]
    }

    pub fn occupancy(&self) -> &[bool] {
        &self.occupancy
    }

    pub fn blocked_mask(&self) -> &[bool] {
        &self.blocked
    }

    pub fn free_cell_count(&self) -> usize {
        self.blocked.iter().filter(|b| !**b).count()
    }

    /// Grid cell `(row, col)` holding a world point. Cells are half-open
    /// `[lo, hi)` except the last row and column, which include the max edge.
    pub fn cell_of(&self, x: f64, y: f64) -> Result<(usize, usize)> {
        if !(x >= 0.0 && x <= self.width && y >= 0.0 && y <= self.height) {
            return Err(Error::OutOfRange(format!(
                "({x}, {y}) outside [0, {}] × [0, {}]",
                self.width, self.height
            )));
        }
        Ok((self.index_along(y, self.height), self.index_along(x, self.width)))
    }

    fn index_along(&self, v: f64, extent: f64) -> usize {
        let i = (v * self.n_d as f64 / extent).floor() as usize;
        i.min(self.n_d - 1)
    }
}

/// Exact coverage test of `cell` by a union of rectangles, via coordinate
/// compression on the obstacle edges that fall inside the cell.
fn covered_by_union(cell: &Rect, obstacles: &[Rect]) -> bool {
    let relevant: Vec<&Rect> = obstacles.iter().filter(|o| o.intersects_closed(cell)).collect();
    let mut xs = vec![cell.xmin, cell.xmax];
    let mut ys = vec![cell.ymin, cell.ymax];
    for o in &relevant {
        for x in [o.xmin, o.xmax] {
            if x > cell.xmin && x < cell.xmax {
                xs.push(x);
            }
        }
        for y in [o.ymin, o.ymax] {
            if y > cell.ymin && y < cell.ymax {
                ys.push(y);
            }
        }
    }
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    for wx in xs.windows(2) {
        if wx[1] <= wx[0] {
            continue;
        }
        let cx = 0.5 * (wx[0] + wx[1]);
        for wy in ys.windows(2) {
            if wy[1] <= wy[0] {
                continue;
            }
            let p = Vec2::new(cx, 0.5 * (wy[0] + wy[1]));
            if !relevant.iter().any(|o| o.contains_point(p)) {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObstacleSpec {
    pub xmin: f64,
    pub ymin: f64,
    pub xmax: f64,
    pub ymax: f64,
}

/// On-disk environment fixture:
/// `{"width", "height", "n_d", "obstacles": [...], "robot": {...}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvFile {
    pub width: f64,
    pub height: f64,
    pub n_d: usize,
    pub obstacles: Vec<ObstacleSpec>,
    pub robot: RobotSpec,
}

impl EnvFile {
    pub fn build(&self) -> Result<(Environment, RobotModel)> {
        let obstacles = self
            .obstacles
            .iter()
            .map(|o| Rect::new(o.xmin, o.ymin, o.xmax, o.ymax))
            .collect();
        let env = Environment::new(self.width, self.height, self.n_d, obstacles)?;
        let robot = self.robot.build((self.width, self.height))?;
        Ok((env, robot))
    }

    pub fn from_parts(env: &Environment, robot: &RobotModel) -> Self {
        EnvFile {
            width: env.width,
            height: env.height,
            n_d: env.n_d,
            obstacles: env
                .obstacles
                .iter()
                .map(|o| ObstacleSpec {
                    xmin: o.xmin,
                    ymin: o.ymin,
                    xmax: o.xmax,
                    ymax: o.ymax,
                })
                .collect(),
            robot: RobotSpec::from_model(robot),
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }
}
