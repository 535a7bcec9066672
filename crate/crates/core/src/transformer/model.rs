use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{destandardize_values, standardize_values};

use super::network::forward;
use super::params::{NamedTensor, Params};
use super::train::TrainingHistory;
use super::{positional_encoding, TransformerConfig};

pub const CHECKPOINT_FORMAT: &str = "wst-transformer";
pub const CHECKPOINT_VERSION: u32 = 1;

/// A trained (or constructed) encoder with the statistics used to
/// standardize its training data.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformerModel<T> {
    config: TransformerConfig,
    params: Params<T>,
    mean: T,
    std: T,
    pe: Vec<T>,
    pub(crate) history: TrainingHistory,
}

#[derive(Serialize, Deserialize)]
struct Normalization {
    mean: f64,
    std: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Checkpoint {
    format: String,
    version: u32,
    config: TransformerConfig,
    normalization: Normalization,
    #[serde(default)]
    history: TrainingHistory,
    tensors: Vec<NamedTensor>,
}

impl<T: Scalar> TransformerModel<T> {
    pub(crate) fn from_parts(config: TransformerConfig, params: Params<T>, mean: T, std: T) -> Result<Self> {
        config.validate()?;
        params.audit(&config)?;
        if !(mean.is_finite() && std.is_finite() && std > T::zero()) {
            return Err(Error::InvalidArgument("normalization needs a finite mean and a positive std".into()));
        }
        let pe = if config.use_positional_encoding {
            positional_encoding::<T>(config.window, config.d_model)?.into_vec()
        } else {
            Vec::new()
        };
        Ok(TransformerModel {
            config,
            params,
            mean,
            std,
            pe,
            history: TrainingHistory::default(),
        })
    }

    /// Untrained model with seeded Glorot weights.
    pub fn initialize(config: &TransformerConfig, mean: T, std: T) -> Result<Self> {
        config.validate()?;
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(config.seed);
        Self::from_parts(config.clone(), Params::init(config, &mut rng), mean, std)
    }

    /// Builds a model from named tensors in the canonical layout.
    pub fn from_tensors(config: &TransformerConfig, tensors: &[NamedTensor], mean: T, std: T) -> Result<Self> {
        config.validate()?;
        Self::from_parts(config.clone(), Params::from_tensors(config, tensors)?, mean, std)
    }

    pub(crate) fn positional_table(&self) -> Vec<T> {
        self.pe.clone()
    }

    pub fn config(&self) -> &TransformerConfig {
        &self.config
    }

    /// Mean and standard deviation of the training series.
    pub fn normalization(&self) -> (T, T) {
        (self.mean, self.std)
    }

    pub fn history(&self) -> &TrainingHistory {
        &self.history
    }

    pub fn parameter_count(&self) -> usize {
        self.params.parameter_count()
    }

    pub fn tensors(&self) -> Vec<NamedTensor> {
        self.params.to_tensors()
    }

    /// Checks every tensor shape against the configuration and that all
    /// values are finite.
    pub fn audit(&self) -> Result<()> {
        self.params.audit(&self.config)?;
        if !self.params.all_finite() {
            return Err(Error::NonFinite("model parameters".into()));
        }
        Ok(())
    }

    /// One forward pass on standardized inputs; returns standardized outputs.
    pub fn predict_standardized(&self, window: &[T]) -> Result<Vec<T>> {
        if window.len() != self.config.window {
            return Err(Error::ShapeMismatch(format!(
                "window of length {} given, model expects {}",
                window.len(),
                self.config.window
            )));
        }
        let (y, _) = forward(&self.params, &self.config, &self.pe, window, None);
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("encoder output".into()));
        }
        Ok(y)
    }

    /// Predicts the next `horizon` values after `window` (original units).
    pub fn predict(&self, window: &[T]) -> Result<Vec<T>> {
        let z = standardize_values(window, self.mean, self.std)?;
        Ok(destandardize_values(&self.predict_standardized(&z)?, self.mean, self.std))
    }

    /// Attention weights of every block (heads stacked, each `w x w`).
    pub fn attention(&self, window: &[T]) -> Result<Vec<Vec<T>>> {
        let z = standardize_values(window, self.mean, self.std)?;
        if z.len() != self.config.window {
            return Err(Error::ShapeMismatch(format!(
                "window of length {} given, model expects {}",
                z.len(),
                self.config.window
            )));
        }
        let (_, tr) = forward(&self.params, &self.config, &self.pe, &z, None);
        Ok(tr.attention().map(|a| a.to_vec()).collect())
    }

    /// Forecasts `h` values past the end of `history` by feeding predictions
    /// back into the input window.
    pub fn forecast_recursive(&self, history: &[T], h: usize) -> Result<Vec<T>> {
        let w = self.config.window;
        if history.len() < w {
            return Err(Error::SeriesTooShort {
                needed: w,
                got: history.len(),
            });
        }
        if h == 0 {
            return Err(Error::InvalidArgument("forecast horizon must be at least 1".into()));
        }
        let mut buf = standardize_values(&history[history.len() - w..], self.mean, self.std)?;
        let mut out = Vec::with_capacity(h);
        while out.len() < h {
            let y = self.predict_standardized(&buf[buf.len() - w..])?;
            for v in y {
                if out.len() == h {
                    break;
                }
                out.push(v);
                buf.push(v);
            }
        }
        Ok(destandardize_values(&out, self.mean, self.std))
    }

    pub fn to_json(&self) -> Result<String> {
        let ck = Checkpoint {
            format: CHECKPOINT_FORMAT.into(),
            version: CHECKPOINT_VERSION,
            config: self.config.clone(),
            normalization: Normalization {
                mean: self.mean.to_f64_lossy(),
                std: self.std.to_f64_lossy(),
            },
            history: self.history.clone(),
            tensors: self.tensors(),
        };
        Ok(serde_json::to_string(&ck)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let ck: Checkpoint = serde_json::from_str(text).map_err(|e| Error::Checkpoint(e.to_string()))?;
        if ck.format != CHECKPOINT_FORMAT {
            return Err(Error::Checkpoint(format!("unknown format '{}'", ck.format)));
        }
        if ck.version != CHECKPOINT_VERSION {
            return Err(Error::Checkpoint(format!(
                "version {} is not supported (expected {CHECKPOINT_VERSION})",
                ck.version
            )));
        }
        let mut model = Self::from_tensors(
            &ck.config,
            &ck.tensors,
            T::lit(ck.normalization.mean),
            T::lit(ck.normalization.std),
        )?;
        model.history = ck.history;
        Ok(model)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()?).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }
}
