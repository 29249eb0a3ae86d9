use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dataset::LabelTensor;
use crate::error::{Error, Result};
use crate::tensor::{read_tensor_file, write_tensor_file, TensorHeader, LABEL_MAGIC};

/// JSON metadata written next to every `label.bin`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabelSidecar {
    pub n_d: usize,
    pub p: usize,
    pub joint_count: usize,
    pub joint_names: Vec<String>,
    pub joint_limits: Vec<[f64; 2]>,
    pub reference: String,
    pub plan_count: usize,
    pub free_cells: usize,
    /// Channel 0 is the smoothed score divided by this value.
    pub mu_max: f64,
    /// Unsmoothed per-cell plan counts; `μ = count · free_cells / plan_count`.
    pub raw_counts: Vec<u32>,
    #[serde(default)]
    pub quarter_turns: u8,
    /// Heading bins were rolled by this many places during augmentation.
    #[serde(default)]
    pub heading_bin_shift: usize,
    /// False when the rotation is not a whole number of heading bins and the
    /// shift was rounded to the nearest bin.
    #[serde(default = "yes")]
    pub heading_shift_exact: bool,
}

fn yes() -> bool {
    true
}

fn sidecar_path(path: &Path) -> PathBuf {
    path.with_extension("json")
}

pub fn save_label(path: impl AsRef<Path>, label: &LabelTensor, sidecar: Option<&LabelSidecar>) -> Result<()> {
    let path = path.as_ref();
    let header = TensorHeader {
        magic: LABEL_MAGIC,
        n_d: label.tensor.n() as u32,
        p: label.p as u32,
        joint_count: label.joint_count as u32,
    };
    write_tensor_file(path, header, &label.tensor)?;
    if let Some(meta) = sidecar {
        let mut text = serde_json::to_string_pretty(meta)?;
        text.push('\n');
        std::fs::write(sidecar_path(path), text)?;
    }
    Ok(())
}

/// Reads a label file and, when present, its sidecar.
pub fn load_label(path: impl AsRef<Path>) -> Result<(LabelTensor, Option<LabelSidecar>)> {
    let path = path.as_ref();
    let (header, tensor) = read_tensor_file(path)?;
    if header.magic != LABEL_MAGIC {
        return Err(Error::Format(format!("{} is not a label file", path.display())));
    }
    let label = LabelTensor {
        tensor,
        p: header.p as usize,
        joint_count: header.joint_count as usize,
    };
    let side = sidecar_path(path);
    let sidecar = if side.exists() {
        Some(serde_json::from_str(&std::fs::read_to_string(side)?)?)
    } else {
        None
    };
    Ok((label, sidecar))
}
