//! Encoder-only transformer for univariate sequence regression.
//!
//! Each window value is embedded by a learned scalar projection, positions
//! are added with sinusoidal encodings, and a stack of encoder blocks
//! (multi-head self-attention and a ReLU feed-forward layer, each with a
//! residual connection and layer normalization) is followed by average
//! pooling, a ReLU MLP and a linear head. Gradients are computed by hand and
//! the weights trained with Adam on standardized values.

mod check;
mod model;
mod network;
mod params;
mod train;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

pub use check::{gradient_check, GradientCheck};
pub use model::{TransformerModel, CHECKPOINT_FORMAT, CHECKPOINT_VERSION};
pub use params::NamedTensor;
pub use train::{train, TrainingHistory};

/// Architecture and training settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformerConfig {
    pub num_blocks: usize,
    pub d_model: usize,
    /// Width of each head's query, key and value projections.
    pub head_size: usize,
    pub num_heads: usize,
    pub d_ff: usize,
    pub mlp_units: usize,
    pub dropout: f64,
    pub mlp_dropout: f64,
    pub window: usize,
    pub horizon: usize,
    pub batch_size: usize,
    pub max_epochs: usize,
    pub early_stop_patience: usize,
    pub learning_rate: f64,
    /// Share of the windows, taken from the end, held out for early stopping.
    pub validation_fraction: f64,
    pub use_positional_encoding: bool,
    pub seed: u64,
}

impl Default for TransformerConfig {
    fn default() -> Self {
        Self::tuned()
    }
}

impl TransformerConfig {
    /// Two blocks of width 128 with four 32-wide heads, `d_ff = 4`, a 64-unit
    /// MLP, dropout 0.25/0.40, 12-month windows, batch 32 and 100 epochs.
    pub fn tuned() -> Self {
        TransformerConfig {
            num_blocks: 2,
            d_model: 128,
            head_size: 32,
            num_heads: 4,
            d_ff: 4,
            mlp_units: 64,
            dropout: 0.25,
            mlp_dropout: 0.40,
            window: 12,
            horizon: 1,
            batch_size: 32,
            max_epochs: 100,
            early_stop_patience: 10,
            learning_rate: 1e-3,
            validation_fraction: 0.1,
            use_positional_encoding: true,
            seed: 42,
        }
    }

    /// A narrow single-block network that trains in seconds.
    pub fn compact() -> Self {
        TransformerConfig {
            num_blocks: 1,
            d_model: 16,
            head_size: 8,
            num_heads: 2,
            d_ff: 32,
            mlp_units: 16,
            dropout: 0.0,
            mlp_dropout: 0.0,
            ..Self::tuned()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let widths = [
            ("num_blocks", self.num_blocks),
            ("d_model", self.d_model),
            ("head_size", self.head_size),
            ("num_heads", self.num_heads),
            ("d_ff", self.d_ff),
            ("mlp_units", self.mlp_units),
            ("window", self.window),
            ("horizon", self.horizon),
            ("batch_size", self.batch_size),
            ("max_epochs", self.max_epochs),
        ];
        if let Some((name, _)) = widths.iter().find(|(_, v)| *v == 0) {
            return Err(Error::InvalidArgument(format!("{name} must be at least 1")));
        }
        for (name, rate) in [("dropout", self.dropout), ("mlp_dropout", self.mlp_dropout)] {
            if !(0.0..1.0).contains(&rate) {
                return Err(Error::InvalidArgument(format!("{name} must lie in [0, 1), got {rate}")));
            }
        }
        if !(0.0..1.0).contains(&self.validation_fraction) {
            return Err(Error::InvalidArgument(format!(
                "validation_fraction must lie in [0, 1), got {}",
                self.validation_fraction
            )));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::InvalidArgument("learning_rate must be positive".into()));
        }
        if self.use_positional_encoding && self.d_model % 2 != 0 {
            return Err(Error::InvalidArgument("positional encoding needs an even d_model".into()));
        }
        Ok(())
    }
}

/// Sliding-window supervised pairs: `inputs[i]` is followed by `targets[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowDataset<T> {
    pub inputs: Vec<Vec<T>>,
    pub targets: Vec<Vec<T>>,
    pub window: usize,
    pub horizon: usize,
}

impl<T> WindowDataset<T> {
    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }
}

/// All stride-1 windows of `w` inputs followed by `k` targets; there are
/// `N - w - k + 1` of them.
pub fn make_windows<T: Scalar>(series: &[T], w: usize, k: usize) -> Result<WindowDataset<T>> {
    if w == 0 || k == 0 {
        return Err(Error::InvalidArgument("window and horizon must be at least 1".into()));
    }
    let n = series.len();
    if n < w + k {
        return Err(Error::SeriesTooShort { needed: w + k, got: n });
    }
    let m = n - w - k + 1;
    Ok(WindowDataset {
        inputs: (0..m).map(|i| series[i..i + w].to_vec()).collect(),
        targets: (0..m).map(|i| series[i + w..i + w + k].to_vec()).collect(),
        window: w,
        horizon: k,
    })
}

/// Sinusoidal encodings: column `2i` holds `sin(pos / 10000^(2i/d))` and
/// column `2i + 1` the matching cosine.
pub fn positional_encoding<T: Scalar>(length: usize, d_model: usize) -> Result<Matrix<T>> {
    if d_model == 0 || d_model % 2 != 0 {
        return Err(Error::InvalidArgument(format!("d_model must be even and positive, got {d_model}")));
    }
    let mut m = Matrix::zeros(length, d_model);
    for pos in 0..length {
        for i in 0..d_model / 2 {
            let angle = pos as f64 / 10000f64.powf(2.0 * i as f64 / d_model as f64);
            m.set(pos, 2 * i, T::lit(angle.sin()));
            m.set(pos, 2 * i + 1, T::lit(angle.cos()));
        }
    }
    Ok(m)
}

/// Scaled dot-product attention `softmax(Q K^T / sqrt(d_k)) V`. Returns the
/// output and the attention weights.
pub fn scaled_attention<T: Scalar>(q: &Matrix<T>, k: &Matrix<T>, v: &Matrix<T>) -> Result<(Matrix<T>, Matrix<T>)> {
    if q.cols() != k.cols() || k.rows() != v.rows() || k.rows() == 0 {
        return Err(Error::ShapeMismatch(format!(
            "attention with Q {}x{}, K {}x{}, V {}x{}",
            q.rows(),
            q.cols(),
            k.rows(),
            k.cols(),
            v.rows(),
            v.cols()
        )));
    }
    let (lq, lk, dk, dv) = (q.rows(), k.rows(), q.cols(), v.cols());
    let mut weights = Matrix::zeros(lq, lk);
    network::attention_weights(q.as_slice(), k.as_slice(), dk, 0, dk, weights.as_mut_slice());
    let mut out = Matrix::zeros(lq, dv);
    for i in 0..lq {
        for j in 0..lk {
            let a = weights.get(i, j);
            for c in 0..dv {
                let cur = out.get(i, c);
                out.set(i, c, cur + a * v.get(j, c));
            }
        }
    }
    Ok((out, weights))
}
