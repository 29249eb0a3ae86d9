use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn add(self, other: Vec2) -> Vec2 {
        Vec2::new(self.x + other.x, self.y + other.y)
    }

    pub fn scale(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

/// Axis-aligned rectangle in world coordinates (meters).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub xmin: f64,
    pub ymin: f64,
    pub xmax: f64,
    pub ymax: f64,
}

impl Rect {
    pub const fn new(xmin: f64, ymin: f64, xmax: f64, ymax: f64) -> Self {
        Self {
            xmin,
            ymin,
            xmax,
            ymax,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.xmin.is_finite()
            && self.ymin.is_finite()
            && self.xmax.is_finite()
            && self.ymax.is_finite()
            && self.xmin <= self.xmax
            && self.ymin <= self.ymax
    }

    /// Closed-set intersection: touching edges count.
    pub fn intersects_closed(&self, other: &Rect) -> bool {
        self.xmin <= other.xmax
            && other.xmin <= self.xmax
            && self.ymin <= other.ymax
            && other.ymin <= self.ymax
    }

    pub fn contains_point(&self, p: Vec2) -> bool {
        p.x >= self.xmin && p.x <= self.xmax && p.y >= self.ymin && p.y <= self.ymax
    }
}

/// One rigidly placed robot link: a convex quadrilateral, counter-clockwise.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pose2 {
    pub vertices: [Vec2; 4],
}

impl Pose2 {
    /// Rectangle of `length` along `heading` and `width` across it, centered at `center`.
    pub fn oriented_rect(center: Vec2, heading: f64, length: f64, width: f64) -> Self {
        let (s, c) = heading.sin_cos();
        let along = Vec2::new(c * length * 0.5, s * length * 0.5);
        let across = Vec2::new(-s * width * 0.5, c * width * 0.5);
        let v = |a: f64, b: f64| {
            Vec2::new(
                center.x + a * along.x + b * across.x,
                center.y + a * along.y + b * across.y,
            )
        };
        Pose2 {
            vertices: [v(-1.0, -1.0), v(1.0, -1.0), v(1.0, 1.0), v(-1.0, 1.0)],
        }
    }

    pub fn centroid(&self) -> Vec2 {
        let mut acc = Vec2::new(0.0, 0.0);
        for v in &self.vertices {
            acc = acc.add(*v);
        }
        acc.scale(0.25)
    }

    pub fn bounding_box(&self) -> Rect {
        let mut r = Rect::new(f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for v in &self.vertices {
            r.xmin = r.xmin.min(v.x);
            r.ymin = r.ymin.min(v.y);
            r.xmax = r.xmax.max(v.x);
            r.ymax = r.ymax.max(v.y);
        }
        r
    }

    pub fn within(&self, bounds: &Rect) -> bool {
        self.vertices.iter().all(|v| bounds.contains_point(*v))
    }

    /// Separating-axis test against an axis-aligned rectangle. Interiors must
    /// overlap; shared boundary points do not count as contact.
    pub fn overlaps_rect(&self, rect: &Rect) -> bool {
        let bb = self.bounding_box();
        if bb.xmax <= rect.xmin || rect.xmax <= bb.xmin || bb.ymax <= rect.ymin || rect.ymax <= bb.ymin {
            return false;
        }
        let corners = [
            Vec2::new(rect.xmin, rect.ymin),
            Vec2::new(rect.xmax, rect.ymin),
            Vec2::new(rect.xmax, rect.ymax),
            Vec2::new(rect.xmin, rect.ymax),
        ];
        for i in 0..2 {
            let a = self.vertices[i];
            let b = self.vertices[i + 1];
            let axis = Vec2::new(a.y - b.y, b.x - a.x);
            let (pmin, pmax) = project(&self.vertices, axis);
            let (rmin, rmax) = project(&corners, axis);
            if pmax <= rmin || rmax <= pmin {
                return false;
            }
        }
        true
    }
}

fn project(points: &[Vec2; 4], axis: Vec2) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for p in points {
        let d = p.dot(axis);
        lo = lo.min(d);
        hi = hi.max(d);
    }
    (lo, hi)
}
