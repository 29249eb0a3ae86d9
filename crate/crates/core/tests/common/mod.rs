//! Fixtures and independent checkers shared by the integration tests.
//!
//! Nothing here calls the crate's own collision or interpolation code; the
//! plan checker rebuilds link corners and steer samples from first principles.

#![allow(dead_code)]

use std::f64::consts::PI;

use critmp::planners::MotionPlan;
use critmp::workspace::presets::{narrow_passage, PASSAGE_GAP, PASSAGE_ROBOT, PASSAGE_WALL};
use critmp::workspace::{Configuration, DofKind, Environment, Rect, RobotModel};

pub const WORLD: f64 = 10.0;

pub fn passage_env() -> Environment {
    narrow_passage(WORLD, 64, PASSAGE_WALL, PASSAGE_GAP).unwrap()
}

pub fn passage_robot() -> RobotModel {
    RobotModel::se2_rect(PASSAGE_ROBOT.0, PASSAGE_ROBOT.1, (WORLD, WORLD))
}

pub fn passage_goal() -> Configuration {
    Configuration(vec![8.5, 8.0, PI / 2.0])
}

/// Starts are drawn left of the wall.
pub fn passage_start_box() -> Rect {
    Rect::new(0.5, 0.5, 0.5 * (WORLD - PASSAGE_WALL) - 0.5, 9.5)
}

pub type Quad = [(f64, f64); 4];

fn wrap(a: f64) -> f64 {
    let mut v = (a + PI) % (2.0 * PI);
    if v < 0.0 {
        v += 2.0 * PI;
    }
    v - PI
}

/// Link rectangles: link 0 centered on `(x, y)`, each later link hanging
/// off the far end of the previous one.
pub fn link_quads(robot: &RobotModel, q: &[f64]) -> Vec<Quad> {
    let mut out = Vec::new();
    let mut heading = q[2];
    let mut anchor: Option<(f64, f64)> = None;
    for (i, link) in robot.links.iter().enumerate() {
        if i > 0 {
            heading += q[2 + i];
        }
        let (ux, uy) = (heading.cos(), heading.sin());
        let (cx, cy) = match anchor {
            None => (q[0], q[1]),
            Some((ax, ay)) => (ax + ux * link.length / 2.0, ay + uy * link.length / 2.0),
        };
        let (hl, hw) = (link.length / 2.0, link.width / 2.0);
        let corner = |a: f64, b: f64| (cx + a * hl * ux - b * hw * uy, cy + a * hl * uy + b * hw * ux);
        out.push([corner(-1.0, -1.0), corner(1.0, -1.0), corner(1.0, 1.0), corner(-1.0, 1.0)]);
        anchor = Some((cx + ux * hl, cy + uy * hl));
    }
    out
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn strictly_inside_rect(p: (f64, f64), r: &Rect) -> bool {
    p.0 > r.xmin && p.0 < r.xmax && p.1 > r.ymin && p.1 < r.ymax
}

fn strictly_inside_quad(p: (f64, f64), quad: &Quad) -> bool {
    let signs: Vec<f64> = (0..4).map(|i| cross(quad[i], quad[(i + 1) % 4], p)).collect();
    signs.iter().all(|&s| s > 0.0) || signs.iter().all(|&s| s < 0.0)
}

fn segments_cross(a: (f64, f64), b: (f64, f64), c: (f64, f64), d: (f64, f64)) -> bool {
    let d1 = cross(a, b, c);
    let d2 = cross(a, b, d);
    let d3 = cross(c, d, a);
    let d4 = cross(c, d, b);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

/// Interior overlap of a convex quad and a rectangle, by vertex containment
/// and proper edge crossings.
pub fn quad_hits_rect(quad: &Quad, r: &Rect) -> bool {
    let rc = [(r.xmin, r.ymin), (r.xmax, r.ymin), (r.xmax, r.ymax), (r.xmin, r.ymax)];
    if quad.iter().any(|&p| strictly_inside_rect(p, r)) || rc.iter().any(|&p| strictly_inside_quad(p, quad)) {
        return true;
    }
    for i in 0..4 {
        for j in 0..4 {
            if segments_cross(quad[i], quad[(i + 1) % 4], rc[j], rc[(j + 1) % 4]) {
                return true;
            }
        }
    }
    // Identical or nested shapes with coincident corners.
    let qc = quad.iter().fold((0.0, 0.0), |acc, p| (acc.0 + p.0 / 4.0, acc.1 + p.1 / 4.0));
    strictly_inside_rect(qc, r) && strictly_inside_quad(qc, quad)
}

pub fn config_free(env: &Environment, robot: &RobotModel, q: &[f64]) -> bool {
    link_quads(robot, q).iter().all(|quad| {
        quad.iter().all(|&(x, y)| x >= 0.0 && x <= env.width && y >= 0.0 && y <= env.height)
            && env.obstacles.iter().all(|o| !quad_hits_rect(quad, o))
    })
}

fn metric_delta(robot: &RobotModel, i: usize, a: f64, b: f64) -> f64 {
    match robot.dof_kinds[i] {
        DofKind::Heading => wrap(b - a),
        _ => b - a,
    }
}

fn metric_weight(robot: &RobotModel, i: usize) -> f64 {
    match robot.dof_kinds[i] {
        DofKind::Position => 1.0,
        _ => robot.links.iter().map(|l| l.length).fold(0.0, f64::max),
    }
}

/// Straight segment sampled at spacing at most `step`, endpoints included.
pub fn segment_free(env: &Environment, robot: &RobotModel, a: &[f64], b: &[f64], step: f64) -> bool {
    let d = (0..a.len())
        .map(|i| (metric_weight(robot, i) * metric_delta(robot, i, a[i], b[i])).powi(2))
        .sum::<f64>()
        .sqrt();
    let n = (d / step).ceil().max(1.0) as usize;
    (0..=n).all(|k| {
        let t = k as f64 / n as f64;
        let q: Vec<f64> = (0..a.len())
            .map(|i| {
                let v = a[i] + t * metric_delta(robot, i, a[i], b[i]);
                if robot.dof_kinds[i] == DofKind::Heading {
                    wrap(v)
                } else {
                    v
                }
            })
            .collect();
        config_free(env, robot, &q)
    })
}

/// Endpoints match the query and every waypoint and steer re-checks.
pub fn plan_valid(
    env: &Environment,
    robot: &RobotModel,
    plan: &MotionPlan,
    start: &Configuration,
    goal: &Configuration,
    step: f64,
) -> bool {
    let w = &plan.waypoints;
    if w.is_empty() || w[0] != *start || w[w.len() - 1] != *goal {
        return false;
    }
    w.iter().all(|q| q.0.len() == robot.dof() && config_free(env, robot, &q.0))
        && w.windows(2).all(|p| segment_free(env, robot, &p[0].0, &p[1].0, step))
}

/// Obstacle overlap by sampling points on a dense lattice inside each link.
pub fn dense_overlap(env: &Environment, robot: &RobotModel, q: &[f64], per_side: usize) -> bool {
    for quad in link_quads(robot, q) {
        let (o, a, b) = (quad[0], quad[1], quad[3]);
        for i in 1..per_side {
            for j in 1..per_side {
                let s = i as f64 / per_side as f64;
                let t = j as f64 / per_side as f64;
                let p = (o.0 + s * (a.0 - o.0) + t * (b.0 - o.0), o.1 + s * (a.1 - o.1) + t * (b.1 - o.1));
                if env.obstacles.iter().any(|r| strictly_inside_rect(p, r)) {
                    return true;
                }
            }
        }
    }
    false
}

/// Every simple path from `s` to `t`, as `(vertices, cost)`.
pub fn all_simple_paths(n: usize, edges: &[(usize, usize, f64)], s: usize, t: usize) -> Vec<(Vec<usize>, f64)> {
    fn dfs(
        v: usize,
        t: usize,
        adj: &[Vec<(usize, f64)>],
        path: &mut Vec<usize>,
        cost: f64,
        out: &mut Vec<(Vec<usize>, f64)>,
    ) {
        if v == t {
            out.push((path.clone(), cost));
            return;
        }
        for &(u, c) in &adj[v] {
            if !path.contains(&u) {
                path.push(u);
                dfs(u, t, adj, path, cost + c, out);
                path.pop();
            }
        }
    }
    let mut adj = vec![Vec::new(); n];
    for &(a, b, c) in edges {
        adj[a].push((b, c));
        if a != b {
            adj[b].push((a, c));
        }
    }
    let mut out = Vec::new();
    dfs(s, t, &adj, &mut vec![s], 0.0, &mut out);
    out
}

/// Cheapest simple path, lexicographically smallest among exact cost ties.
pub fn brute_force_shortest(n: usize, edges: &[(usize, usize, f64)], s: usize, t: usize) -> Option<(Vec<usize>, f64)> {
    let mut paths = all_simple_paths(n, edges, s, t);
    paths.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    paths.into_iter().next()
}

/// `n × n` world of side `n` meters whose obstacles are whole unit cells.
/// Returns the world and its blocked-cell mask (row-major, row from y).
pub fn cell_aligned_world(n: usize, seed: u64) -> (Environment, Vec<bool>) {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut blocked = vec![false; n * n];
    let mut obstacles = Vec::new();
    for _ in 0..rng.gen_range(0..=n) {
        let (r, c) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let (h, w) = (rng.gen_range(1..=2).min(n - r), rng.gen_range(1..=2).min(n - c));
        obstacles.push(Rect::new(c as f64, r as f64, (c + w) as f64, (r + h) as f64));
        for rr in r..r + h {
            for cc in c..c + w {
                blocked[rr * n + cc] = true;
            }
        }
    }
    (Environment::new(n as f64, n as f64, n, obstacles).unwrap(), blocked)
}

/// A 4-connected walk between free unit cells, waypoints at cell centers,
/// with the cells it visits.
pub fn lattice_walk(n: usize, blocked: &[bool], seed: u64) -> (MotionPlan, std::collections::BTreeSet<(usize, usize)>) {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let free: Vec<usize> = (0..n * n).filter(|&i| !blocked[i]).collect();
    let mut cur = free[rng.gen_range(0..free.len())];
    let mut cells = std::collections::BTreeSet::new();
    let mut waypoints = Vec::new();
    for _ in 0..rng.gen_range(1..12) {
        let (r, c) = (cur / n, cur % n);
        cells.insert((r, c));
        waypoints.push(Configuration(vec![c as f64 + 0.5, r as f64 + 0.5, rng.gen_range(-PI..PI)]));
        let moves: Vec<usize> = [(0i64, 1i64), (0, -1), (1, 0), (-1, 0)]
            .iter()
            .map(|&(dr, dc)| (r as i64 + dr, c as i64 + dc))
            .filter(|&(r, c)| r >= 0 && c >= 0 && (r as usize) < n && (c as usize) < n)
            .map(|(r, c)| r as usize * n + c as usize)
            .filter(|&k| !blocked[k])
            .collect();
        if moves.is_empty() {
            break;
        }
        cur = moves[rng.gen_range(0..moves.len())];
    }
    let plan = MotionPlan {
        waypoints,
        solve_time: 0.0,
        nodes_expanded: 0,
        seed,
    };
    (plan, cells)
}

/// Zero-padded 3×3 binomial filter, blocked cells zeroed afterwards.
pub fn naive_smooth(n: usize, field: &[f64], blocked: &[bool]) -> Vec<f64> {
    let k = [[1.0, 2.0, 1.0], [2.0, 4.0, 2.0], [1.0, 2.0, 1.0]];
    let mut out = vec![0.0; n * n];
    for r in 0..n {
        for c in 0..n {
            if blocked[r * n + c] {
                continue;
            }
            let mut acc = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    let (rr, cc) = (r as i64 + i as i64 - 1, c as i64 + j as i64 - 1);
                    if rr >= 0 && cc >= 0 && (rr as usize) < n && (cc as usize) < n {
                        acc += k[i][j] / 16.0 * field[rr as usize * n + cc as usize];
                    }
                }
            }
            out[r * n + c] = acc;
        }
    }
    out
}

/// Random hinged-shape label and logits: channel 0 in `[0, 1]` with about a
/// quarter of cells at zero, joint groups normalized soft histograms.
pub fn random_label_and_logits(
    n: usize,
    joints: usize,
    p: usize,
    seed: u64,
) -> (critmp::dataset::LabelTensor, critmp::model::PredictionTensor) {
    use critmp::tensor::Tensor3;
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let ch = 1 + joints * p;
    let mut label = Tensor3::<f32>::zeros(n, ch);
    let mut pred = Tensor3::<f64>::zeros(n, ch);
    for r in 0..n {
        for c in 0..n {
            let z: f32 = if rng.gen_bool(0.25) { 0.0 } else { rng.gen_range(0.0..1.0) };
            label.set(r, c, 0, z);
            for j in 0..joints {
                let raw: Vec<f32> = (0..p).map(|_| rng.gen_range(0.0..1.0)).collect();
                let s: f32 = raw.iter().sum();
                for (b, v) in raw.iter().enumerate() {
                    label.set(r, c, 1 + j * p + b, v / s);
                }
            }
            for k in 0..ch {
                pred.set(r, c, k, rng.gen_range(-4.0..4.0));
            }
        }
    }
    (critmp::dataset::LabelTensor { tensor: label, p, joint_count: joints }, pred)
}

/// One cell's share of the direct, unstabilized loss: weighted log loss on
/// channel 0 over `cells`, plus each joint group's cross-entropy over
/// `active` when channel 0 is positive.
pub fn naive_cell_loss(z: f64, logits: &[f64], target: &[f64], p: usize, q: f64, cells: f64, active: f64) -> f64 {
    let s = 1.0 / (1.0 + (-logits[0]).exp());
    let mut out = (-(1.0 - z) * (1.0 - s).ln() - q * z * s.ln()) / cells;
    if z > 0.0 {
        for j in 0..(logits.len() - 1) / p {
            let e: Vec<f64> = (0..p).map(|b| logits[1 + j * p + b].exp()).collect();
            let sum: f64 = e.iter().sum();
            for b in 0..p {
                out -= target[1 + j * p + b] * (e[b] / sum).ln() / active;
            }
        }
    }
    out
}

fn cell_f64(t: &critmp::tensor::Tensor3<f32>, r: usize, c: usize) -> Vec<f64> {
    (0..t.shape().2).map(|k| t.get(r, c, k) as f64).collect()
}

fn active_cells(label: &critmp::dataset::LabelTensor) -> f64 {
    let n = label.tensor.n();
    (0..n * n).filter(|i| label.tensor.get(i / n, i % n, 0) > 0.0).count() as f64
}

/// Direct, unstabilized total loss, summed cell by cell.
pub fn naive_total_loss(label: &critmp::dataset::LabelTensor, pred: &critmp::model::PredictionTensor, q: f64) -> f64 {
    let n = label.tensor.n();
    let (cells, active) = ((n * n) as f64, active_cells(label));
    let mut total = 0.0;
    for r in 0..n {
        for c in 0..n {
            let t = cell_f64(&label.tensor, r, c);
            let x: Vec<f64> = (0..pred.shape().2).map(|k| pred.get(r, c, k)).collect();
            total += naive_cell_loss(t[0], &x, &t, label.p, q, cells, active);
        }
    }
    total
}

/// Worst relative error between analytic gradients and central differences
/// (step `h`) over `samples` random coordinates. Only the perturbed cell's
/// share is differenced, since every other term cancels exactly.
pub fn gradient_check(
    label: &critmp::dataset::LabelTensor,
    pred: &critmp::model::PredictionTensor,
    q: f64,
    h: f64,
    samples: usize,
    seed: u64,
) -> f64 {
    use critmp::model::loss_gradients;
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let grad = loss_gradients(pred, label, q).unwrap();
    let (n, _, ch) = pred.shape();
    let (cells, active) = ((n * n) as f64, active_cells(label));
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let (r, c, k) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..ch));
        let t = cell_f64(&label.tensor, r, c);
        let x: Vec<f64> = (0..ch).map(|i| pred.get(r, c, i)).collect();
        let (mut plus, mut minus) = (x.clone(), x.clone());
        plus[k] += h;
        minus[k] -= h;
        let fd = (naive_cell_loss(t[0], &plus, &t, label.p, q, cells, active)
            - naive_cell_loss(t[0], &minus, &t, label.p, q, cells, active))
            / (2.0 * h);
        worst = worst.max(relative_error(grad.get(r, c, k), fd));
    }
    worst
}

/// `|a - b| / max(|a|, |b|, 1e-7)`; the floor keeps vanishing gradients
/// from turning rounding noise into large ratios.
pub fn relative_error(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-7)
}

/// Queries from the passage start box to the passage goal.
pub fn passage_tasks(count: usize, seed: u64) -> Vec<critmp::bench::BenchTask> {
    let spec = critmp::bench::BenchmarkSpec {
        tasks: count,
        seed,
        source: critmp::bench::TaskSource {
            goal: Some(passage_goal()),
            start_box: Some(passage_start_box()),
            goal_box: None,
        },
        ..Default::default()
    };
    critmp::bench::generate_bench_tasks(&spec, &passage_env(), &passage_robot()).unwrap()
}

/// Tabular oracle built from 20 BiRRT demonstrations on the passage,
/// timed on the virtual clock so the label is machine independent.
pub fn passage_predictor() -> critmp::model::Predictor {
    use critmp::planners::{birrt_plan, ClockMode, MotionQuery, TreeParams};
    let (env, robot) = (passage_env(), passage_robot());
    let params = TreeParams {
        clock: ClockMode::Virtual,
        ..Default::default()
    };
    let plans: Vec<MotionPlan> = passage_tasks(20, 99)
        .iter()
        .filter_map(|t| {
            let q = MotionQuery {
                env: &env,
                robot: &robot,
                start: t.start.clone(),
                goal: t.goal.clone(),
                time_budget: 5.0,
                seed: t.id as u64,
            };
            birrt_plan(&q, &params).unwrap()
        })
        .collect();
    assert!(plans.len() >= 10, "only {} demonstrations", plans.len());
    let (label, _) = critmp::dataset::build_label(&env, &robot, &plans, 10).unwrap();
    critmp::model::Predictor::from_label(label, critmp::model::PredictorSource::TabularOracle)
}

/// Total-variation distance between the base-cell frequencies of `draws`
/// α = 1 draws and a random criticality map on a free 16 × 16 world.
pub fn sampler_tv(draws: usize, seed: u64) -> f64 {
    use critmp::llp::{BiasedSampler, SamplingDistribution};
    use critmp::planners::{PlannerRng, Space};
    use rand::{Rng, SeedableRng};
    let n = 16;
    let env = Environment::empty(16.0, 16.0, n).unwrap();
    let robot = RobotModel::se2_rect(0.05, 0.05, (16.0, 16.0));
    let mut rng = PlannerRng::seed_from_u64(seed);
    let mut probs = critmp::tensor::Tensor3::<f64>::zeros(n, 1 + 10);
    let mut mass = vec![0.0; n * n];
    for (k, m) in mass.iter_mut().enumerate() {
        *m = if rng.gen_bool(0.3) { 0.0 } else { rng.gen::<f64>().powi(2) };
        probs.set(k / n, k % n, 0, *m);
    }
    let total: f64 = mass.iter().sum();
    let dist = SamplingDistribution::from_probabilities(&env, &robot, &probs, 10).unwrap();
    let sampler = BiasedSampler::new(dist, 1.0, draws).unwrap();
    let space = Space::new(&env, &robot, critmp::workspace::DEFAULT_STEER_STEP);
    let batch = sampler.sample_batch(&space, &mut rng).unwrap();
    assert_eq!(batch.biased, draws);
    let mut counts = vec![0usize; n * n];
    for q in &batch.configs {
        let (r, c) = (q[1].floor() as usize, q[0].floor() as usize);
        counts[r.min(n - 1) * n + c.min(n - 1)] += 1;
    }
    0.5 * (0..n * n).map(|k| (counts[k] as f64 / draws as f64 - mass[k] / total).abs()).sum::<f64>()
}

/// Random 16 × 16 criticality map on a 2.4 m world (0.15 m cells), sparse
/// enough to split into several regions.
pub fn random_region_map(seed: u64) -> (Environment, Vec<f64>) {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let env = Environment::empty(2.4, 2.4, 16).unwrap();
    let map = (0..256).map(|_| if rng.gen_bool(0.6) { 0.0 } else { rng.gen_range(0.0..5.0) }).collect();
    (env, map)
}

/// Regions by recursive flood fill over 4-neighbors, each region's cells in
/// row-major order and regions ordered by their first cell.
pub fn flood_regions(map: &[f64], n: usize, threshold: f64) -> Vec<Vec<(usize, usize)>> {
    fn fill(hot: &[bool], seen: &mut [bool], n: usize, r: usize, c: usize, out: &mut Vec<(usize, usize)>) {
        if seen[r * n + c] || !hot[r * n + c] {
            return;
        }
        seen[r * n + c] = true;
        out.push((r, c));
        if r > 0 {
            fill(hot, seen, n, r - 1, c, out);
        }
        if r + 1 < n {
            fill(hot, seen, n, r + 1, c, out);
        }
        if c > 0 {
            fill(hot, seen, n, r, c - 1, out);
        }
        if c + 1 < n {
            fill(hot, seen, n, r, c + 1, out);
        }
    }
    let max = map.iter().copied().fold(0.0, f64::max);
    let hot: Vec<bool> = map.iter().map(|&v| max > 0.0 && v >= threshold * max).collect();
    let mut seen = vec![false; n * n];
    let mut out = Vec::new();
    for k in 0..n * n {
        let mut region = Vec::new();
        fill(&hot, &mut seen, n, k / n, k % n, &mut region);
        if !region.is_empty() {
            region.sort_unstable();
            out.push(region);
        }
    }
    out
}

/// Region pairs whose closest cells are within `link` meters, from integer
/// cell gaps on a square grid of `cell`-meter cells.
pub fn brute_region_edges(regions: &[Vec<(usize, usize)>], cell: f64, link: f64) -> Vec<(usize, usize)> {
    let gap = |a: usize, b: usize| (a.abs_diff(b).saturating_sub(1)) as f64 * cell;
    let mut out = Vec::new();
    for i in 0..regions.len() {
        for j in i + 1..regions.len() {
            let d = regions[i]
                .iter()
                .flat_map(|&(r1, c1)| regions[j].iter().map(move |&(r2, c2)| gap(r1, r2).hypot(gap(c1, c2))))
                .fold(f64::INFINITY, f64::min);
            if d <= link {
                out.push((i, j));
            }
        }
    }
    out
}

/// Every file under `root` keyed by its relative path.
pub fn dir_snapshot(root: &std::path::Path) -> std::collections::BTreeMap<String, Vec<u8>> {
    fn walk(root: &std::path::Path, dir: &std::path::Path, out: &mut std::collections::BTreeMap<String, Vec<u8>>) {
        for entry in std::fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                walk(root, &path, out);
            } else {
                let rel = path.strip_prefix(root).unwrap().to_string_lossy().replace('\\', "/");
                out.insert(rel, std::fs::read(&path).unwrap());
            }
        }
    }
    let mut out = std::collections::BTreeMap::new();
    walk(root, root, &mut out);
    out
}

/// Input and label shapes of the rectangle and hinged robots at `n` cells.
pub fn channel_shapes(n: usize) -> [(usize, usize, usize); 4] {
    use critmp::criticality::{CriticalityMap, JointHistograms};
    use critmp::dataset::{encode_input, encode_label};
    let env = Environment::empty(10.0, 10.0, n).unwrap();
    let se2 = RobotModel::se2_rect(1.0, 0.2, (10.0, 10.0));
    let hinged = RobotModel::hinged(critmp::workspace::Link { length: 0.5, width: 0.1 }, (10.0, 10.0));
    let zero = CriticalityMap::from_scores(&env, vec![0.0; n * n]).unwrap();
    [
        encode_input(&env, &se2, &Configuration(vec![5.0, 5.0, 0.0])).unwrap().tensor.shape(),
        encode_label(&zero, &JointHistograms::uniform(n, 10, &se2)).unwrap().tensor.shape(),
        encode_input(&env, &hinged, &Configuration(vec![5.0, 5.0, 0.0, 0.0])).unwrap().tensor.shape(),
        encode_label(&zero, &JointHistograms::uniform(n, 10, &hinged)).unwrap().tensor.shape(),
    ]
}

/// Runs the binary in `dir` and returns its exit code and stderr.
pub fn run_cli(dir: &std::path::Path, args: &[&str]) -> (i32, String) {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_critmp"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stderr).into_owned())
}

/// Every subcommand chained on a small passage world, relative paths only.
pub fn cli_pipeline(dir: &std::path::Path) {
    let steps: &[&[&str]] = &[
        &["gen-env", "--out", "env.json", "--n-d", "32", "--gap", "0.4", "--seed", "1"],
        &[
            "gen-data", "--env", "env.json", "--out", "data", "--goals", "2", "--starts", "3", "--budget", "1",
            "--bins", "8", "--augment", "--seed", "2",
        ],
        &["criticality", "--env", "env.json", "--plans", "data/goal_000/plans.json", "--out", "crit.bin", "--bins", "8"],
        &[
            "plan", "--env", "env.json", "--planner", "llp", "--label", "data/goal_000/label.bin", "--start",
            "1,1,0", "--goal", "8.5,8,1.5707963267948966", "--budget", "5", "--seed", "3", "--out", "plan.json",
        ],
        &[
            "bench", "--env", "env.json", "--label", "data/goal_000/label.bin", "--tasks", "4", "--budget", "0.5",
            "--build-budget", "0.2", "--planners", "birrt,prm,llp,llp_uniform,llrm,guided_llp", "--seed", "4",
            "--out", "bench",
        ],
        &["render", "--env", "env.json", "--label", "crit.bin", "--plan", "plan.json", "--out", "map.svg"],
    ];
    for args in steps {
        let (code, err) = run_cli(dir, args);
        assert_eq!(code, 0, "{args:?}: {err}");
    }
}
