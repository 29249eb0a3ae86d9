//! Training losses for criticality and joint predictions, and the tabular
//! predictor that serves stored labels through the prediction interface.
//!
//! Loss conventions:
//! - criticality, per cell: `(1 - z)·softplus(x) + q·z·softplus(-x)`, which is
//!   `(z - 1)·log(1 - σ(x)) - q·z·log σ(x)` in stable form; mean over cells.
//! - joints: softmax cross-entropy per cell, mean over masked cells. A cell
//!   takes part when its criticality target is positive.
//! - gradients are of the means, so a single-cell grid has unscaled values.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::criticality::{load_label, CriticalityMap, JointHistograms};
use crate::dataset::{encode_label, InputTensor, LabelTensor};
use crate::error::{invalid, Result};
use crate::tensor::Tensor3;

/// Raw scores (logits), shaped like a label tensor.
pub type PredictionTensor = Tensor3<f64>;

/// Targets must sum to one within this tolerance.
pub const TARGET_SUM_TOLERANCE: f64 = 1e-6;

#[inline]
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `log(1 + e^x)` without overflow.
#[inline]
pub fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

fn log_softmax(logits: &[f64], out: &mut Vec<f64>) {
    let m = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lse = m + logits.iter().map(|v| (v - m).exp()).sum::<f64>().ln();
    out.clear();
    out.extend(logits.iter().map(|v| v - lse));
}

/// Weighted log loss on the criticality channel, averaged over cells.
pub fn loss_cr(logits: &[f64], target: &[f64], q: f64) -> Result<f64> {
    if logits.len() != target.len() {
        return Err(invalid(format!("{} logits for {} targets", logits.len(), target.len())));
    }
    if !(q > 0.0) {
        return Err(invalid("positive weight q must be > 0"));
    }
    if logits.is_empty() {
        return Ok(0.0);
    }
    let sum: f64 = logits
        .iter()
        .zip(target)
        .map(|(&x, &z)| (1.0 - z) * softplus(x) + q * z * softplus(-x))
        .sum();
    Ok(sum / logits.len() as f64)
}

fn check_joint_args(logits: &[f64], target: &[f64], p: usize, mask: Option<&[bool]>) -> Result<usize> {
    if p == 0 || logits.len() % p != 0 || logits.len() != target.len() {
        return Err(invalid("joint logits and targets must be equal multiples of p"));
    }
    let cells = logits.len() / p;
    if mask.is_some_and(|m| m.len() != cells) {
        return Err(invalid("joint mask does not match the cell count"));
    }
    for c in 0..cells {
        if mask.map_or(true, |m| m[c]) {
            let s: f64 = target[c * p..(c + 1) * p].iter().sum();
            if (s - 1.0).abs() > TARGET_SUM_TOLERANCE {
                return Err(invalid(format!("joint target of cell {c} sums to {s}")));
            }
        }
    }
    Ok(cells)
}

/// Softmax cross-entropy over `p`-bin groups, averaged over cells where
/// `mask` is true (all cells without a mask). No active cell gives 0.
pub fn loss_joint(logits: &[f64], target: &[f64], p: usize, mask: Option<&[bool]>) -> Result<f64> {
    let cells = check_joint_args(logits, target, p, mask)?;
    let mut ls = Vec::with_capacity(p);
    let mut sum = 0.0;
    let mut active = 0usize;
    for c in 0..cells {
        if !mask.map_or(true, |m| m[c]) {
            continue;
        }
        active += 1;
        log_softmax(&logits[c * p..(c + 1) * p], &mut ls);
        sum -= target[c * p..(c + 1) * p].iter().zip(&ls).map(|(t, l)| t * l).sum::<f64>();
    }
    Ok(if active == 0 { 0.0 } else { sum / active as f64 })
}

/// Default positive weight: negatives over positives at threshold 0.5,
/// clamped to `[1, 100]`.
pub fn default_q(target: &[f64]) -> f64 {
    let pos = target.iter().filter(|&&z| z >= 0.5).count();
    let neg = target.len() - pos;
    if pos == 0 {
        return 100.0;
    }
    (neg as f64 / pos as f64).clamp(1.0, 100.0)
}

struct Split {
    cr_logits: Vec<f64>,
    cr_target: Vec<f64>,
    mask: Vec<bool>,
}

fn split(pred: &PredictionTensor, label: &LabelTensor) -> Result<Split> {
    if pred.shape() != label.tensor.shape() {
        return Err(invalid(format!(
            "prediction shape {:?} does not match label shape {:?}",
            pred.shape(),
            label.tensor.shape()
        )));
    }
    if label.tensor.channels() != 1 + label.joint_count * label.p {
        return Err(invalid("label channel count does not match its joint layout"));
    }
    let cr_logits = pred.channel(0);
    let cr_target: Vec<f64> = label.tensor.channel(0).into_iter().map(f64::from).collect();
    let mask = cr_target.iter().map(|&z| z > 0.0).collect();
    Ok(Split {
        cr_logits,
        cr_target,
        mask,
    })
}

fn joint_group<T: Copy + Default + Into<f64>>(t: &Tensor3<T>, j: usize, p: usize) -> Vec<f64> {
    let n = t.n();
    let mut out = Vec::with_capacity(n * n * p);
    for r in 0..n {
        for c in 0..n {
            out.extend(t.cell(r, c)[1 + j * p..1 + (j + 1) * p].iter().map(|&v| v.into()));
        }
    }
    out
}

/// Criticality loss plus one joint loss per joint group.
pub fn loss_total(pred: &PredictionTensor, label: &LabelTensor, q: f64) -> Result<f64> {
    let s = split(pred, label)?;
    let mut total = loss_cr(&s.cr_logits, &s.cr_target, q)?;
    for j in 0..label.joint_count {
        let lg = joint_group(pred, j, label.p);
        let tg = joint_group(&label.tensor, j, label.p);
        total += loss_joint(&lg, &tg, label.p, Some(&s.mask))?;
    }
    Ok(total)
}

/// `∂ loss_total / ∂ logit` for every entry of `pred`.
pub fn loss_gradients(pred: &PredictionTensor, label: &LabelTensor, q: f64) -> Result<PredictionTensor> {
    let s = split(pred, label)?;
    if !(q > 0.0) {
        return Err(invalid("positive weight q must be > 0"));
    }
    let n = pred.n();
    let cells = n * n;
    let p = label.p;
    let mut grad = Tensor3::zeros(n, pred.channels());
    for cell in 0..cells {
        let (r, c) = (cell / n, cell % n);
        let x = s.cr_logits[cell];
        let z = s.cr_target[cell];
        let sg = sigmoid(x);
        grad.set(r, c, 0, ((1.0 - z) * sg - q * z * (1.0 - sg)) / cells as f64);
    }
    let active = s.mask.iter().filter(|&&m| m).count();
    let mut ls = Vec::with_capacity(p);
    for j in 0..label.joint_count {
        let lg = joint_group(pred, j, p);
        let tg = joint_group(&label.tensor, j, p);
        check_joint_args(&lg, &tg, p, Some(&s.mask))?;
        for cell in 0..cells {
            if !s.mask[cell] {
                continue;
            }
            let (r, c) = (cell / n, cell % n);
            log_softmax(&lg[cell * p..(cell + 1) * p], &mut ls);
            // f32 targets sum to 1 only up to rounding; keep their exact mass.
            let mass: f64 = tg[cell * p..(cell + 1) * p].iter().sum();
            for b in 0..p {
                let g = (ls[b].exp() * mass - tg[cell * p + b]) / active as f64;
                grad.set(r, c, 1 + j * p + b, g);
            }
        }
    }
    Ok(grad)
}

/// Logits pushed toward `label` and clipped to `±bound`.
pub fn saturated_logits(label: &LabelTensor, bound: f64) -> PredictionTensor {
    let p = label.p;
    let mut out = label.tensor.map(|v| v as f64);
    let n = out.n();
    for r in 0..n {
        for c in 0..n {
            let z = out.get(r, c, 0);
            let x = if z >= 1.0 {
                bound
            } else if z <= 0.0 {
                -bound
            } else {
                (z / (1.0 - z)).ln().clamp(-bound, bound)
            };
            out.set(r, c, 0, x);
            for j in 0..label.joint_count {
                for b in 0..p {
                    let ch = 1 + j * p + b;
                    let t = out.get(r, c, ch);
                    out.set(r, c, ch, if t > 0.0 { t.ln().max(-bound) } else { -bound });
                }
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PredictorSource {
    /// Labels computed here from demonstrations.
    TabularOracle,
    /// Label-format files produced elsewhere, e.g. by a trained network.
    External,
}

/// Immutable predictor holding one goal-conditioned label.
#[derive(Clone, Debug, PartialEq)]
pub struct Predictor {
    pub source: PredictorSource,
    pub label: LabelTensor,
}

impl Predictor {
    pub fn tabular(map: &CriticalityMap, hists: &JointHistograms) -> Result<Self> {
        Ok(Predictor {
            source: PredictorSource::TabularOracle,
            label: encode_label(map, hists)?,
        })
    }

    pub fn from_label(label: LabelTensor, source: PredictorSource) -> Self {
        Predictor { source, label }
    }

    pub fn load(path: impl AsRef<Path>, source: PredictorSource) -> Result<Self> {
        let (label, _) = load_label(path)?;
        Ok(Predictor { source, label })
    }

    /// Probability view of the stored label: channel 0 rescaled to `[0, 1]`,
    /// joint groups renormalized per cell. Goal planes of `input` are not
    /// read; the stored label is already goal-specific.
    pub fn predict(&self, input: &InputTensor) -> Result<Tensor3<f64>> {
        let label = &self.label;
        if input.tensor.n() != label.n() {
            return Err(invalid(format!(
                "input grid {} does not match predictor grid {}",
                input.tensor.n(),
                label.n()
            )));
        }
        if input.dof < 2 || input.dof - 2 != label.joint_count {
            return Err(invalid(format!(
                "robot with {} DOF does not match a label with {} joints",
                input.dof, label.joint_count
            )));
        }
        Ok(self.probabilities())
    }

    /// The stored label as probabilities, without input checks.
    pub fn probabilities(&self) -> Tensor3<f64> {
        let label = &self.label;
        let mut out = label.tensor.map(|v| v as f64);
        let n = out.n();
        let max = out.channel(0).into_iter().fold(0.0, f64::max);
        let p = label.p;
        for r in 0..n {
            for c in 0..n {
                let v = out.get(r, c, 0);
                out.set(r, c, 0, if max > 0.0 { (v / max).clamp(0.0, 1.0) } else { 0.0 });
                for j in 0..label.joint_count {
                    let base = 1 + j * p;
                    let s: f64 = (0..p).map(|b| out.get(r, c, base + b).max(0.0)).sum();
                    for b in 0..p {
                        let v = if s > 0.0 { out.get(r, c, base + b).max(0.0) / s } else { 1.0 / p as f64 };
                        out.set(r, c, base + b, v);
                    }
                }
            }
        }
        out
    }
}
