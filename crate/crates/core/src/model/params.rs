use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// An `f32` cell that may be read and written from several threads without
/// locking.
///
/// All accesses are relaxed: concurrent read-modify-write sequences on the
/// same cell may lose updates, but every read observes some value that was
/// written.
#[derive(Default)]
#[repr(transparent)]
pub struct AtomicF32(AtomicU32);

impl AtomicF32 {
    pub fn new(v: f32) -> Self {
        AtomicF32(AtomicU32::new(v.to_bits()))
    }

    #[inline(always)]
    pub fn get(&self) -> f32 {
        f32::from_bits(self.0.load(Ordering::Relaxed))
    }

    #[inline(always)]
    pub fn set(&self, v: f32) {
        self.0.store(v.to_bits(), Ordering::Relaxed)
    }

    #[inline(always)]
    pub fn add(&self, delta: f32) {
        self.set(self.get() + delta)
    }
}

/// Dense row-major matrix that workers update concurrently (Hogwild-style).
pub struct SharedMatrix {
    rows: usize,
    cols: usize,
    data: Box<[AtomicF32]>,
}

impl SharedMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let data = (0..rows * cols).map(|_| AtomicF32::new(0.0)).collect();
        SharedMatrix { rows, cols, data }
    }

    pub fn from_vec(rows: usize, cols: usize, values: Vec<f32>) -> Result<Self> {
        if values.len() != rows * cols {
            return Err(Error::SizeMismatch(format!(
                "{} values for a {rows}x{cols} matrix",
                values.len()
            )));
        }
        Ok(SharedMatrix {
            rows,
            cols,
            data: values.into_iter().map(AtomicF32::new).collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[AtomicF32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn get(&self, r: usize, c: usize) -> f32 {
        self.row(r)[c].get()
    }

    pub fn set(&self, r: usize, c: usize, v: f32) {
        self.row(r)[c].set(v)
    }

    /// Copy row `r` into `out`.
    #[inline]
    pub fn read_row(&self, r: usize, out: &mut [f32]) {
        for (o, cell) in out.iter_mut().zip(self.row(r)) {
            *o = cell.get();
        }
    }

    /// `row[r] += delta`.
    #[inline]
    pub fn add_to_row(&self, r: usize, delta: &[f32]) {
        for (cell, d) in self.row(r).iter().zip(delta) {
            cell.add(*d);
        }
    }

    /// Snapshot of all values in row-major order.
    pub fn to_vec(&self) -> Vec<f32> {
        self.data.iter().map(AtomicF32::get).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = f32> + '_ {
        self.data.iter().map(AtomicF32::get)
    }
}

impl Clone for SharedMatrix {
    fn clone(&self) -> Self {
        SharedMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|c| AtomicF32::new(c.get())).collect(),
        }
    }
}

/// Bitwise equality, so NaN payloads and signed zeros are compared exactly.
impl PartialEq for SharedMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self
                .iter()
                .zip(other.iter())
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

impl fmt::Debug for SharedMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SharedMatrix")
            .field("rows", &self.rows)
            .field("cols", &self.cols)
            .finish_non_exhaustive()
    }
}

/// Trainable parameters: word (input) vectors and inner-node vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelParams {
    /// `V x D` word vectors.
    pub input: SharedMatrix,
    /// `(V - 1) x D` hierarchical-softmax inner-node vectors.
    pub nodes: SharedMatrix,
}

impl ModelParams {
    pub fn from_parts(input: SharedMatrix, nodes: SharedMatrix) -> Result<Self> {
        if input.cols() != nodes.cols() || input.rows() != nodes.rows() + 1 || input.cols() == 0 {
            return Err(Error::SizeMismatch(format!(
                "input {}x{} and node {}x{} matrices do not fit together",
                input.rows(),
                input.cols(),
                nodes.rows(),
                nodes.cols()
            )));
        }
        Ok(ModelParams { input, nodes })
    }

    pub fn vocab_size(&self) -> usize {
        self.input.rows()
    }

    pub fn dim(&self) -> usize {
        self.input.cols()
    }

    pub fn all_finite(&self) -> bool {
        self.input
            .iter()
            .chain(self.nodes.iter())
            .all(f32::is_finite)
    }
}

/// Word vectors uniform on `[-0.5/D, 0.5/D]`, node vectors zero.
pub fn init_params(vocab_size: usize, dim: usize, seed: u64) -> Result<ModelParams> {
    if vocab_size < 2 {
        return Err(Error::VocabularyTooSmall(vocab_size));
    }
    if dim == 0 {
        return Err(Error::InvalidConfig("dimension must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = 1.0 / dim as f32;
    let values = (0..vocab_size * dim)
        .map(|_| (rng.gen::<f32>() - 0.5) * scale)
        .collect();
    Ok(ModelParams {
        input: SharedMatrix::from_vec(vocab_size, dim, values)?,
        nodes: SharedMatrix::zeros(vocab_size - 1, dim),
    })
}
