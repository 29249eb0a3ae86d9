use super::space::Space;

/// Nearest-neighbour index over configurations, bucketed on the base
/// position. The C-space metric is never smaller than the planar distance
/// between base positions, which bounds the ring search.
#[derive(Clone, Debug)]
pub struct NearestIndex {
    points: Vec<Vec<f64>>,
    buckets: Vec<Vec<u32>>,
    bucket: f64,
    cols: usize,
    rows: usize,
}

impl NearestIndex {
    pub fn new(width: f64, height: f64, bucket: f64) -> Self {
        let cols = ((width / bucket).ceil() as usize).max(1);
        let rows = ((height / bucket).ceil() as usize).max(1);
        NearestIndex {
            points: Vec::new(),
            buckets: vec![Vec::new(); cols * rows],
            bucket,
            cols,
            rows,
        }
    }

    pub fn for_space(space: &Space) -> Self {
        Self::new(space.env.width, space.env.height, 0.5)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn get(&self, id: usize) -> &[f64] {
        &self.points[id]
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    fn cell(&self, x: f64, y: f64) -> (usize, usize) {
        let c = ((x / self.bucket).floor().max(0.0) as usize).min(self.cols - 1);
        let r = ((y / self.bucket).floor().max(0.0) as usize).min(self.rows - 1);
        (r, c)
    }

    pub fn insert(&mut self, q: Vec<f64>) -> usize {
        let id = self.points.len();
        let (r, c) = self.cell(q[0], q[1]);
        self.buckets[r * self.cols + c].push(id as u32);
        self.points.push(q);
        id
    }

    fn planar_gap(&self, q: &[f64], r: usize, c: usize) -> f64 {
        let x0 = c as f64 * self.bucket;
        let y0 = r as f64 * self.bucket;
        let dx = (x0 - q[0]).max(q[0] - (x0 + self.bucket)).max(0.0);
        let dy = (y0 - q[1]).max(q[1] - (y0 + self.bucket)).max(0.0);
        (dx * dx + dy * dy).sqrt()
    }

    /// Up to `k` nearest points satisfying `keep`, sorted by `(distance, id)`.
    pub fn k_nearest_filtered(
        &self,
        space: &Space,
        q: &[f64],
        k: usize,
        mut keep: impl FnMut(usize) -> bool,
    ) -> Vec<(usize, f64)> {
        let mut best: Vec<(usize, f64)> = Vec::with_capacity(k + 1);
        if k == 0 || self.points.is_empty() {
            return best;
        }
        let (qr, qc) = self.cell(q[0], q[1]);
        let max_ring = self.rows.max(self.cols);
        let worst = |best: &Vec<(usize, f64)>| if best.len() < k { f64::INFINITY } else { best[k - 1].1 };
        for ring in 0..=max_ring {
            if ring >= 1 && (ring as f64 - 1.0) * self.bucket > worst(&best) {
                break;
            }
            let r_lo = qr as isize - ring as isize;
            let r_hi = qr as isize + ring as isize;
            let c_lo = qc as isize - ring as isize;
            let c_hi = qc as isize + ring as isize;
            for r in r_lo..=r_hi {
                if r < 0 || r >= self.rows as isize {
                    continue;
                }
                let edge_row = r == r_lo || r == r_hi;
                let mut c = c_lo;
                while c <= c_hi {
                    if c >= 0 && c < self.cols as isize {
                        let (ru, cu) = (r as usize, c as usize);
                        if self.planar_gap(q, ru, cu) <= worst(&best) {
                            for &id in &self.buckets[ru * self.cols + cu] {
                                let id = id as usize;
                                if !keep(id) {
                                    continue;
                                }
                                let d = space.distance(q, &self.points[id]);
                                let w = worst(&best);
                                if d < w || (d == w && best.len() == k && id < best[k - 1].0) || best.len() < k {
                                    let pos = best
                                        .partition_point(|&(bi, bd)| bd < d || (bd == d && bi < id));
                                    best.insert(pos, (id, d));
                                    best.truncate(k);
                                }
                            }
                        }
                    }
                    // Interior rows only visit the two ring columns.
                    c = if edge_row || c == c_hi { c + 1 } else { c_hi };
                }
            }
        }
        best
    }

    pub fn k_nearest(&self, space: &Space, q: &[f64], k: usize) -> Vec<(usize, f64)> {
        self.k_nearest_filtered(space, q, k, |_| true)
    }

    pub fn nearest(&self, space: &Space, q: &[f64]) -> Option<(usize, f64)> {
        self.k_nearest(space, q, 1).into_iter().next()
    }

    /// Every point within `radius` of `q`, sorted by `(distance, id)`.
    pub fn within(&self, space: &Space, q: &[f64], radius: f64) -> Vec<(usize, f64)> {
        let mut out = Vec::new();
        if self.points.is_empty() {
            return out;
        }
        let (r0, c0) = self.cell(q[0] - radius, q[1] - radius);
        let (r1, c1) = self.cell(q[0] + radius, q[1] + radius);
        for r in r0..=r1 {
            for c in c0..=c1 {
                if self.planar_gap(q, r, c) > radius {
                    continue;
                }
                for &id in &self.buckets[r * self.cols + c] {
                    let d = space.distance(q, &self.points[id as usize]);
                    if d <= radius {
                        out.push((id as usize, d));
                    }
                }
            }
        }
        out.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        out
    }
}
