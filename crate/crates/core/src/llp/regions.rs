use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::planners::{dijkstra, WeightedGraph};
use crate::workspace::{Environment, Rect};

/// 4-connected cells above the criticality threshold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Region {
    /// `(row, col)` in row-major order.
    pub cells: Vec<(usize, usize)>,
    /// Center of the member cell closest to the region's mean cell center.
    pub representative: (f64, f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionGraph {
    pub n_d: usize,
    pub regions: Vec<Region>,
    /// `(a, b)` with `a < b`, sorted.
    pub edges: Vec<(usize, usize)>,
    /// Region id of each cell, row-major.
    pub cell_region: Vec<Option<usize>>,
}

/// Gap between two axis-aligned rectangles, 0 when they touch or overlap.
pub fn rect_distance(a: &Rect, b: &Rect) -> f64 {
    let dx = (a.xmin - b.xmax).max(b.xmin - a.xmax).max(0.0);
    let dy = (a.ymin - b.ymax).max(b.ymin - a.ymax).max(0.0);
    dx.hypot(dy)
}

fn point_rect_distance(x: f64, y: f64, r: &Rect) -> f64 {
    let dx = (r.xmin - x).max(x - r.xmax).max(0.0);
    let dy = (r.ymin - y).max(y - r.ymax).max(0.0);
    dx.hypot(dy)
}

/// Regions are 4-connected cells whose criticality, relative to the maximum,
/// is at least `threshold`; two regions are linked when some pair of their
/// cells lies within `link_distance` meters.
pub fn build_region_graph(
    criticality: &[f64],
    env: &Environment,
    threshold: f64,
    link_distance: f64,
) -> Result<RegionGraph> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(invalid(format!("region threshold {threshold} outside (0, 1)")));
    }
    if !(link_distance >= 0.0) {
        return Err(invalid("link distance must be non-negative"));
    }
    let n = env.n_d;
    if criticality.len() != n * n {
        return Err(invalid("criticality grid does not match the environment"));
    }
    let max = criticality.iter().copied().filter(|v| v.is_finite()).fold(0.0, f64::max);
    let hot: Vec<bool> = criticality.iter().map(|&v| max > 0.0 && v / max >= threshold).collect();
    let mut cell_region = vec![None; n * n];
    let mut regions = Vec::new();
    for start in 0..n * n {
        if !hot[start] || cell_region[start].is_some() {
            continue;
        }
        let id = regions.len();
        let mut cells = Vec::new();
        let mut queue = VecDeque::from([start]);
        cell_region[start] = Some(id);
        while let Some(c) = queue.pop_front() {
            cells.push(c);
            let (r, col) = (c / n, c % n);
            let mut push = |nr: usize, nc: usize| {
                let k = nr * n + nc;
                if hot[k] && cell_region[k].is_none() {
                    cell_region[k] = Some(id);
                    queue.push_back(k);
                }
            };
            if r > 0 {
                push(r - 1, col);
            }
            if r + 1 < n {
                push(r + 1, col);
            }
            if col > 0 {
                push(r, col - 1);
            }
            if col + 1 < n {
                push(r, col + 1);
            }
        }
        cells.sort_unstable();
        let centers: Vec<_> = cells.iter().map(|&c| env.cell_center(c / n, c % n)).collect();
        let mx = centers.iter().map(|p| p.x).sum::<f64>() / centers.len() as f64;
        let my = centers.iter().map(|p| p.y).sum::<f64>() / centers.len() as f64;
        let rep = centers
            .iter()
            .min_by(|a, b| ((a.x - mx).hypot(a.y - my)).total_cmp(&(b.x - mx).hypot(b.y - my)))
            .expect("region is non-empty");
        regions.push(Region {
            cells: cells.iter().map(|&c| (c / n, c % n)).collect(),
            representative: (rep.x, rep.y),
        });
    }
    let (cw, ch) = env.cell_size();
    let reach_c = (link_distance / cw).ceil() as usize + 1;
    let reach_r = (link_distance / ch).ceil() as usize + 1;
    let mut edges = Vec::new();
    for (a, region) in regions.iter().enumerate() {
        for &(r, c) in &region.cells {
            let ra = env.cell_rect(r, c);
            for nr in r.saturating_sub(reach_r)..(r + reach_r + 1).min(n) {
                for nc in c.saturating_sub(reach_c)..(c + reach_c + 1).min(n) {
                    let Some(b) = cell_region[nr * n + nc] else { continue };
                    if b <= a {
                        continue;
                    }
                    if rect_distance(&ra, &env.cell_rect(nr, nc)) <= link_distance {
                        edges.push((a, b));
                    }
                }
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    Ok(RegionGraph {
        n_d: n,
        regions,
        edges,
        cell_region,
    })
}

impl RegionGraph {
    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }

    /// The region containing `(x, y)`, or else the nearest one by cell
    /// distance (lowest id on ties).
    pub fn nearest_region(&self, env: &Environment, x: f64, y: f64) -> Option<usize> {
        if let Ok((r, c)) = env.cell_of(x, y) {
            if let Some(id) = self.cell_region[r * self.n_d + c] {
                return Some(id);
            }
        }
        let mut best: Option<(f64, usize)> = None;
        for (id, region) in self.regions.iter().enumerate() {
            let d = region
                .cells
                .iter()
                .map(|&(r, c)| point_rect_distance(x, y, &env.cell_rect(r, c)))
                .fold(f64::INFINITY, f64::min);
            if best.map_or(true, |(bd, _)| d < bd) {
                best = Some((d, id));
            }
        }
        best.map(|(_, id)| id)
    }

    /// Shortest region sequence by hop count.
    pub fn route(&self, from: usize, to: usize) -> Result<Option<Vec<usize>>> {
        let mut g = WeightedGraph::new(self.regions.len());
        for &(a, b) in &self.edges {
            g.add_edge(a, b, 1.0);
        }
        Ok(dijkstra(&g, from, to)?.map(|(path, _)| path))
    }
}
