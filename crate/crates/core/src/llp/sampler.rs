use std::collections::VecDeque;
use std::sync::Arc;

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;

use crate::criticality::joint_dofs;
use crate::error::{invalid, Error, Result};
use crate::model::Predictor;
use crate::planners::{FreeSampler, PlannerRng, Space, MAX_REJECTION_ATTEMPTS};
use crate::tensor::Tensor3;
use crate::workspace::{Environment, JointLimit, RobotModel};

/// Empty histogram bins get this weight before renormalizing.
pub const BIN_FLOOR: f64 = 1e-6;

/// Cell and joint-bin distributions read from a probability tensor.
#[derive(Clone, Debug)]
pub struct SamplingDistribution {
    pub n_d: usize,
    pub p: usize,
    /// Unnormalized cell weights, row-major.
    pub cell_weights: Vec<f64>,
    cell_index: Option<WeightedIndex<f64>>,
    /// `(dof index, limit)` of each histogram joint.
    joints: Vec<(usize, JointLimit)>,
    /// `[cell][joint][bin]`, floored and normalized.
    bins: Vec<f64>,
    cell_w: f64,
    cell_h: f64,
}

impl SamplingDistribution {
    /// `probs` holds criticality in channel 0 and `p` bins per joint after it.
    pub fn from_probabilities(env: &Environment, robot: &RobotModel, probs: &Tensor3<f64>, p: usize) -> Result<Self> {
        let joints: Vec<(usize, JointLimit)> = joint_dofs(robot).map(|i| (i, robot.limits[i])).collect();
        if probs.n() != env.n_d {
            return Err(invalid(format!("prediction grid {} does not match environment grid {}", probs.n(), env.n_d)));
        }
        if p == 0 || probs.channels() != 1 + joints.len() * p {
            return Err(invalid(format!(
                "prediction has {} channels, robot needs 1 + {}·{p}",
                probs.channels(),
                joints.len()
            )));
        }
        let n = env.n_d;
        let cells = n * n;
        let mut bins = Vec::with_capacity(cells * joints.len() * p);
        for cell in 0..cells {
            let v = probs.cell(cell / n, cell % n);
            for j in 0..joints.len() {
                let group = &v[1 + j * p..1 + (j + 1) * p];
                let floored: Vec<f64> = group.iter().map(|&b| if b.is_finite() { b.max(BIN_FLOOR) } else { BIN_FLOOR }).collect();
                let s: f64 = floored.iter().sum();
                bins.extend(floored.iter().map(|b| b / s));
            }
        }
        let weights: Vec<f64> = probs
            .channel(0)
            .into_iter()
            .map(|w| if w.is_finite() && w > 0.0 { w } else { 0.0 })
            .collect();
        let (cell_w, cell_h) = env.cell_size();
        Ok(SamplingDistribution {
            n_d: n,
            p,
            cell_index: WeightedIndex::new(&weights).ok(),
            cell_weights: weights,
            joints,
            bins,
            cell_w,
            cell_h,
        })
    }

    pub fn from_predictor(env: &Environment, robot: &RobotModel, predictor: &Predictor) -> Result<Self> {
        Self::from_probabilities(env, robot, &predictor.probabilities(), predictor.label.p)
    }

    /// Same joint tables with new cell weights.
    pub fn with_cell_weights(&self, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != self.cell_weights.len() {
            return Err(invalid("cell weight grid does not match"));
        }
        let weights: Vec<f64> = weights.into_iter().map(|w| if w.is_finite() && w > 0.0 { w } else { 0.0 }).collect();
        Ok(SamplingDistribution {
            cell_index: WeightedIndex::new(&weights).ok(),
            cell_weights: weights,
            ..self.clone()
        })
    }

    /// False when every cell weight is zero.
    pub fn has_mass(&self) -> bool {
        self.cell_index.is_some()
    }

    /// Normalized probability of each joint bin in `cell`.
    pub fn bin_probs(&self, cell: usize, joint: usize) -> &[f64] {
        let k = self.joints.len();
        let o = (cell * k + joint) * self.p;
        &self.bins[o..o + self.p]
    }

    /// One draw, collision unchecked: a cell by weight, a uniform point in
    /// it, then each joint uniformly within a bin drawn from the cell.
    pub fn draw(&self, dof: usize, rng: &mut PlannerRng) -> Option<Vec<f64>> {
        let index = self.cell_index.as_ref()?;
        let cell = index.sample(rng);
        let (row, col) = (cell / self.n_d, cell % self.n_d);
        let mut q = vec![0.0; dof];
        q[0] = (col as f64 + rng.gen::<f64>()) * self.cell_w;
        q[1] = (row as f64 + rng.gen::<f64>()) * self.cell_h;
        for (j, &(i, limit)) in self.joints.iter().enumerate() {
            let probs = self.bin_probs(cell, j);
            let mut u = rng.gen::<f64>();
            let mut bin = self.p - 1;
            for (b, &pb) in probs.iter().enumerate() {
                if u < pb {
                    bin = b;
                    break;
                }
                u -= pb;
            }
            let w = limit.width() / self.p as f64;
            q[i] = (limit.lo + (bin as f64 + rng.gen::<f64>()) * w).min(limit.hi);
        }
        Some(q)
    }
}

/// One batch from [`BiasedSampler::sample_batch`]; biased draws come first.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleBatch {
    pub configs: Vec<Vec<f64>>,
    pub biased: usize,
    /// The criticality channel had no mass and the batch is fully uniform.
    pub fell_back: bool,
}

/// α-mixture of the biased distribution and uniform free sampling.
#[derive(Clone, Debug)]
pub struct BiasedSampler {
    pub dist: Option<Arc<SamplingDistribution>>,
    pub alpha: f64,
    pub batch_size: usize,
}

/// `round(α·N)` with ties to even.
pub fn biased_count(alpha: f64, n: usize) -> usize {
    (alpha * n as f64).round_ties_even() as usize
}

impl BiasedSampler {
    pub fn new(dist: SamplingDistribution, alpha: f64, batch_size: usize) -> Result<Self> {
        Self::check(alpha, batch_size)?;
        Ok(BiasedSampler {
            dist: Some(Arc::new(dist)),
            alpha,
            batch_size,
        })
    }

    /// Sampler without a learned component (α = 0).
    pub fn uniform(batch_size: usize) -> Result<Self> {
        Self::check(0.0, batch_size)?;
        Ok(BiasedSampler {
            dist: None,
            alpha: 0.0,
            batch_size,
        })
    }

    fn check(alpha: f64, batch_size: usize) -> Result<()> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(invalid(format!("alpha {alpha} outside [0, 1]")));
        }
        if batch_size == 0 {
            return Err(invalid("batch size must be positive"));
        }
        Ok(())
    }

    pub fn with_distribution(&self, dist: SamplingDistribution) -> Self {
        BiasedSampler {
            dist: Some(Arc::new(dist)),
            ..self.clone()
        }
    }

    /// `round(αN)` biased free draws followed by uniform free draws.
    pub fn sample_batch(&self, space: &Space, rng: &mut PlannerRng) -> Result<SampleBatch> {
        let wanted = biased_count(self.alpha, self.batch_size);
        let dist = self.dist.as_deref().filter(|d| d.has_mass());
        let fell_back = wanted > 0 && dist.is_none();
        if fell_back {
            log::warn!("criticality channel has no mass; sampling uniformly");
        }
        let biased = if dist.is_some() { wanted } else { 0 };
        let mut configs = Vec::with_capacity(self.batch_size);
        if let Some(d) = dist {
            let dof = space.robot.dof();
            for _ in 0..biased {
                let mut found = None;
                for _ in 0..MAX_REJECTION_ATTEMPTS {
                    let q = d.draw(dof, rng).expect("distribution has mass");
                    if space.free(&q) {
                        found = Some(q);
                        break;
                    }
                }
                configs.push(found.ok_or_else(|| {
                    Error::Infeasible(format!("no free biased draw after {MAX_REJECTION_ATTEMPTS} attempts"))
                })?);
            }
        }
        while configs.len() < self.batch_size {
            configs.push(space.sample_free(rng)?);
        }
        Ok(SampleBatch {
            configs,
            biased,
            fell_back,
        })
    }

    /// A stream handing out batch samples one at a time.
    pub fn stream(&self) -> BatchStream<'_> {
        BatchStream {
            sampler: self,
            buffer: VecDeque::new(),
        }
    }
}

/// Buffers whole batches; each call takes the next configuration.
pub struct BatchStream<'s> {
    sampler: &'s BiasedSampler,
    buffer: VecDeque<Vec<f64>>,
}

impl FreeSampler for BatchStream<'_> {
    fn next_free(&mut self, space: &Space, rng: &mut PlannerRng) -> Result<Vec<f64>> {
        if self.buffer.is_empty() {
            self.buffer.extend(self.sampler.sample_batch(space, rng)?.configs);
        }
        Ok(self.buffer.pop_front().expect("batch is non-empty"))
    }
}
