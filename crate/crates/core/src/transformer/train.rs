use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::standardize_values;

use super::model::TransformerModel;
use super::network::{backward, forward};
use super::params::Params;
use super::{make_windows, TransformerConfig, WindowDataset};

/// Per-epoch losses, in standardized units.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainingHistory {
    /// Mean mini-batch loss of each epoch (with dropout active).
    pub train_loss: Vec<f64>,
    /// Validation loss after each epoch; empty without a validation split.
    pub validation_loss: Vec<f64>,
    /// Epoch (0-based) whose weights were kept.
    pub best_epoch: usize,
    pub stopped_early: bool,
}

struct Adam<T> {
    m: Params<T>,
    v: Params<T>,
    step: i32,
    lr: f64,
}

impl<T: Scalar> Adam<T> {
    const BETA1: f64 = 0.9;
    const BETA2: f64 = 0.999;
    const EPS: f64 = 1e-8;

    fn new(p: &Params<T>, lr: f64) -> Self {
        Adam {
            m: p.zeros_like(),
            v: p.zeros_like(),
            step: 0,
            lr,
        }
    }

    fn update(&mut self, p: &mut Params<T>, g: &Params<T>) {
        self.step += 1;
        let (b1, b2) = (T::lit(Self::BETA1), T::lit(Self::BETA2));
        let c1 = T::lit(1.0 - Self::BETA1.powi(self.step));
        let c2 = T::lit(1.0 - Self::BETA2.powi(self.step));
        let (lr, eps) = (T::lit(self.lr), T::lit(Self::EPS));
        let params = p.slices_mut();
        let grads = g.slices();
        let ms = self.m.slices_mut();
        let vs = self.v.slices_mut();
        for (((pt, gt), mt), vt) in params.into_iter().zip(grads).zip(ms).zip(vs) {
            for i in 0..pt.len() {
                let gi = gt[i];
                mt[i] = b1 * mt[i] + (T::one() - b1) * gi;
                vt[i] = b2 * vt[i] + (T::one() - b2) * gi * gi;
                let mhat = mt[i] / c1;
                let vhat = vt[i] / c2;
                pt[i] -= lr * mhat / (vhat.sqrt() + eps);
            }
        }
    }
}

/// Samples per gradient chunk; chunks are summed in index order so results
/// do not depend on the thread count.
const CHUNK: usize = 8;

/// Mean squared error gradient over `batch`, accumulated in a fixed order.
fn batch_gradient<T: Scalar>(
    p: &Params<T>,
    cfg: &TransformerConfig,
    pe: &[T],
    data: &WindowDataset<T>,
    batch: &[usize],
    seeds: &[u64],
) -> (Params<T>, f64) {
    let denom = T::count(batch.len() * cfg.horizon);
    let partial: Vec<(Params<T>, f64)> = batch
        .par_chunks(CHUNK)
        .zip(seeds.par_chunks(CHUNK))
        .map(|(idx, sd)| {
            let mut g = p.zeros_like();
            let mut loss = 0.0;
            for (&i, &seed) in idx.iter().zip(sd) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let (y, tr) = forward(p, cfg, pe, &data.inputs[i], Some(&mut rng));
                let dy: Vec<T> = y
                    .iter()
                    .zip(&data.targets[i])
                    .map(|(&a, &b)| {
                        loss += (a - b).to_f64_lossy().powi(2);
                        T::lit(2.0) * (a - b) / denom
                    })
                    .collect();
                backward(p, cfg, &tr, &dy, &mut g);
            }
            (g, loss)
        })
        .collect();
    let mut iter = partial.into_iter();
    let (mut g, mut loss) = iter.next().expect("batch is non-empty");
    for (gi, li) in iter {
        g.add_assign(&gi);
        loss += li;
    }
    (g, loss / (batch.len() * cfg.horizon) as f64)
}

/// Inference-mode mean squared error over the windows `idx`.
pub(crate) fn evaluate<T: Scalar>(p: &Params<T>, cfg: &TransformerConfig, pe: &[T], data: &WindowDataset<T>, idx: &[usize]) -> f64 {
    let total: f64 = idx
        .par_iter()
        .map(|&i| {
            let (y, _) = forward(p, cfg, pe, &data.inputs[i], None);
            y.iter()
                .zip(&data.targets[i])
                .map(|(&a, &b)| (a - b).to_f64_lossy().powi(2))
                .sum::<f64>()
        })
        .collect::<Vec<f64>>()
        .into_iter()
        .sum();
    total / (idx.len() * cfg.horizon) as f64
}

/// Trains a model on `series` (original units).
///
/// Values are standardized with the series mean and sample standard
/// deviation, windows are built with stride 1, and the chronologically last
/// share of windows is held out to pick the epoch with the lowest validation
/// error; training stops after `early_stop_patience` epochs without
/// improvement and the best weights are restored. Everything random is
/// drawn from `config.seed`.
pub fn train<T: Scalar>(series: &[T], config: &TransformerConfig) -> Result<TransformerModel<T>> {
    config.validate()?;
    if series.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("training series".into()));
    }
    make_windows(series, config.window, config.horizon)?;
    let n = series.len();
    let mean = series.iter().copied().sum::<T>() / T::count(n);
    let std = (series.iter().map(|&v| (v - mean) * (v - mean)).sum::<T>() / T::count(n - 1)).sqrt();
    if !(std > T::zero()) {
        return Err(Error::ZeroVariance);
    }
    let z = standardize_values(series, mean, std)?;
    let data = make_windows(&z, config.window, config.horizon)?;

    let m = data.len();
    let n_val = ((m as f64) * config.validation_fraction).round() as usize;
    let n_val = if m - n_val < 1 { 0 } else { n_val };
    let train_idx: Vec<usize> = (0..m - n_val).collect();
    let val_idx: Vec<usize> = (m - n_val..m).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut params = Params::<T>::init(config, &mut rng);
    let model_shell = TransformerModel::from_parts(config.clone(), params.clone(), mean, std)?;
    let pe = model_shell.positional_table();

    let mut adam = Adam::new(&params, config.learning_rate);
    let mut history = TrainingHistory::default();
    let mut best: Option<(f64, Params<T>, usize)> = None;
    let mut since_best = 0;

    for epoch in 0..config.max_epochs {
        let mut order = train_idx.clone();
        order.shuffle(&mut rng);
        let mut epoch_loss = 0.0;
        let mut batches = 0;
        for (bi, batch) in order.chunks(config.batch_size).enumerate() {
            let seeds: Vec<u64> = (0..batch.len()).map(|_| rand::Rng::random(&mut rng)).collect();
            let (g, loss) = batch_gradient(&params, config, &pe, &data, batch, &seeds);
            if !loss.is_finite() || !g.all_finite() {
                return Err(Error::Divergence { epoch, batch: bi });
            }
            adam.update(&mut params, &g);
            if !params.all_finite() {
                return Err(Error::Divergence { epoch, batch: bi });
            }
            epoch_loss += loss;
            batches += 1;
        }
        history.train_loss.push(epoch_loss / batches as f64);

        if val_idx.is_empty() {
            continue;
        }
        let val = evaluate(&params, config, &pe, &data, &val_idx);
        history.validation_loss.push(val);
        if !val.is_finite() {
            return Err(Error::Divergence { epoch, batch: 0 });
        }
        if best.as_ref().is_none_or(|(b, _, _)| val < *b) {
            best = Some((val, params.clone(), epoch));
            since_best = 0;
        } else {
            since_best += 1;
            if since_best >= config.early_stop_patience {
                history.stopped_early = true;
                break;
            }
        }
    }
    match best {
        Some((_, p, epoch)) => {
            params = p;
            history.best_epoch = epoch;
        }
        None => history.best_epoch = history.train_loss.len().saturating_sub(1),
    }
    let mut model = TransformerModel::from_parts(config.clone(), params, mean, std)?;
    model.history = history;
    Ok(model)
}
