//! Ready-made worlds for the CLI, tests and benchmarks.

use rand::{Rng, SeedableRng};

use super::{Environment, Rect};
use crate::error::Result;

/// Side of the default square world, meters.
pub const DEFAULT_WORLD_SIZE: f64 = 10.0;
pub const DEFAULT_GRID: usize = 64;
/// Default passage: a 1 m wall with a 0.25 m tunnel, which a
/// [`PASSAGE_ROBOT`] rectangle clears by 5 cm once aligned.
pub const PASSAGE_WALL: f64 = 1.0;
pub const PASSAGE_GAP: f64 = 0.25;
/// Length and width of the rectangle robot paired with the default passage.
pub const PASSAGE_ROBOT: (f64, f64) = (0.3, 0.2);
/// Square world split by a vertical wall of thickness `wall` through its
/// middle, pierced by one horizontal tunnel of height `gap` at mid-height.
pub fn narrow_passage(size: f64, n_d: usize, wall: f64, gap: f64) -> Result<Environment> {
    let x0 = 0.5 * (size - wall);
    let x1 = x0 + wall;
    let y0 = 0.5 * (size - gap);
    let y1 = y0 + gap;
    Environment::new(
        size,
        size,
        n_d,
        vec![Rect::new(x0, 0.0, x1, y0), Rect::new(x0, y1, x1, size)],
    )
}

/// `count` random axis-aligned boxes with sides in `[min_side, max_side]`.
pub fn random_boxes(size: f64, n_d: usize, count: usize, min_side: f64, max_side: f64, seed: u64) -> Result<Environment> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let obstacles = (0..count)
        .map(|_| {
            let w = rng.gen_range(min_side..=max_side).min(size);
            let h = rng.gen_range(min_side..=max_side).min(size);
            let x = rng.gen_range(0.0..=size - w);
            let y = rng.gen_range(0.0..=size - h);
            Rect::new(x, y, x + w, y + h)
        })
        .collect();
    Environment::new(size, size, n_d, obstacles)
}
