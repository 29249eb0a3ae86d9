//! Dense `n × n × channels` grids and their little-endian binary form.
//!
//! File layout:
//! - magic: 4 bytes (`CRLB` for labels, `CRIN` for inputs)
//! - n_d, p, joint_count: u32 each
//! - data: f32 × n_d·n_d·(1 + joint_count·p), row-major with channels last
//!
//! Input tensors are stored with `p = 1` and `joint_count = DOF`, so the
//! channel formula `1 + joint_count·p` holds for both kinds.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{invalid, Error, Result};

pub const LABEL_MAGIC: [u8; 4] = *b"CRLB";
pub const INPUT_MAGIC: [u8; 4] = *b"CRIN";

/// Row-major `n × n × channels` tensor, channels innermost.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor3<T> {
    n: usize,
    channels: usize,
    data: Vec<T>,
}

impl<T: Copy + Default> Tensor3<T> {
    pub fn zeros(n: usize, channels: usize) -> Self {
        Tensor3 {
            n,
            channels,
            data: vec![T::default(); n * n * channels],
        }
    }

    pub fn from_vec(n: usize, channels: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != n * n * channels {
            return Err(invalid(format!(
                "{} values for a {n}×{n}×{channels} tensor",
                data.len()
            )));
        }
        Ok(Tensor3 { n, channels, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.n, self.n, self.channels)
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    #[inline]
    pub fn offset(&self, row: usize, col: usize, ch: usize) -> usize {
        (row * self.n + col) * self.channels + ch
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize, ch: usize) -> T {
        self.data[self.offset(row, col, ch)]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, ch: usize, v: T) {
        let o = self.offset(row, col, ch);
        self.data[o] = v;
    }

    /// All channels of one cell.
    pub fn cell(&self, row: usize, col: usize) -> &[T] {
        let o = self.offset(row, col, 0);
        &self.data[o..o + self.channels]
    }

    /// One channel as a row-major `n × n` plane.
    pub fn channel(&self, ch: usize) -> Vec<T> {
        (0..self.n * self.n).map(|i| self.data[i * self.channels + ch]).collect()
    }

    pub fn map<U: Copy + Default>(&self, f: impl Fn(T) -> U) -> Tensor3<U> {
        Tensor3 {
            n: self.n,
            channels: self.channels,
            data: self.data.iter().map(|v| f(*v)).collect(),
        }
    }
}

/// Header fields of a tensor file.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TensorHeader {
    pub magic: [u8; 4],
    pub n_d: u32,
    pub p: u32,
    pub joint_count: u32,
}

impl TensorHeader {
    pub fn channels(&self) -> usize {
        1 + self.joint_count as usize * self.p as usize
    }
}

pub fn encode_tensor(header: TensorHeader, tensor: &Tensor3<f32>) -> Result<Vec<u8>> {
    if tensor.n() != header.n_d as usize || tensor.channels() != header.channels() {
        return Err(invalid(format!(
            "tensor shape {:?} does not match header {header:?}",
            tensor.shape()
        )));
    }
    let mut out = Vec::with_capacity(16 + tensor.data().len() * 4);
    out.extend_from_slice(&header.magic);
    out.extend_from_slice(&header.n_d.to_le_bytes());
    out.extend_from_slice(&header.p.to_le_bytes());
    out.extend_from_slice(&header.joint_count.to_le_bytes());
    for v in tensor.data() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    Ok(out)
}

pub fn decode_tensor(bytes: &[u8]) -> Result<(TensorHeader, Tensor3<f32>)> {
    let mut r = bytes;
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic).map_err(|_| Error::Format("truncated header".into()))?;
    let mut word = || -> Result<u32> {
        let mut b = [0u8; 4];
        r.read_exact(&mut b).map_err(|_| Error::Format("truncated header".into()))?;
        Ok(u32::from_le_bytes(b))
    };
    let header = TensorHeader {
        magic,
        n_d: word()?,
        p: word()?,
        joint_count: word()?,
    };
    if magic != LABEL_MAGIC && magic != INPUT_MAGIC {
        return Err(Error::Format(format!("unknown magic {magic:?}")));
    }
    let n = header.n_d as usize;
    let count = n
        .checked_mul(n)
        .and_then(|v| v.checked_mul(header.channels()))
        .ok_or_else(|| Error::Format("header dimensions overflow".into()))?;
    let body = &bytes[16..];
    if body.len() != count * 4 {
        return Err(Error::Format(format!(
            "expected {} data bytes, found {}",
            count * 4,
            body.len()
        )));
    }
    let data = body
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
        .collect();
    Ok((header, Tensor3::from_vec(n, header.channels(), data)?))
}

pub fn write_tensor_file(path: impl AsRef<Path>, header: TensorHeader, tensor: &Tensor3<f32>) -> Result<()> {
    let bytes = encode_tensor(header, tensor)?;
    let mut f = std::fs::File::create(path)?;
    f.write_all(&bytes)?;
    Ok(())
}

pub fn read_tensor_file(path: impl AsRef<Path>) -> Result<(TensorHeader, Tensor3<f32>)> {
    decode_tensor(&std::fs::read(path)?)
}
