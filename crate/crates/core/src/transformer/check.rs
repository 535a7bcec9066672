//! Backpropagation versus central finite differences.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

use super::network::{backward, forward};
use super::params::Params;
use super::{positional_encoding, TransformerConfig};

/// Outcome of [`gradient_check`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GradientCheck {
    /// Largest `|analytic - numeric| / max(|analytic|, |numeric|, 1e-6)`.
    pub worst_relative_error: f64,
    /// Tensor and flat index of the worst entry, e.g. `blocks.0.wq[3]`.
    pub worst_parameter: String,
    pub parameters_checked: usize,
}

fn loss(p: &Params<f64>, cfg: &TransformerConfig, pe: &[f64], data: &[(Vec<f64>, Vec<f64>)]) -> f64 {
    data.iter()
        .map(|(x, t)| {
            let (y, _) = forward(p, cfg, pe, x, None);
            y.iter().zip(t).map(|(a, b)| (a - b).powi(2)).sum::<f64>()
        })
        .sum::<f64>()
        / (data.len() * cfg.horizon) as f64
}

/// Compares the analytic gradient of the mean squared error with central
/// differences of step `step` for every parameter of a seeded network.
///
/// Layer-norm scales and shifts and the MLP bias are moved away from their
/// initial values so that every gradient path is exercised. The loss is taken
/// over three random windows. Dropout must be zero.
pub fn gradient_check(config: &TransformerConfig, seed: u64, step: f64) -> Result<GradientCheck> {
    config.validate()?;
    if config.dropout != 0.0 || config.mlp_dropout != 0.0 {
        return Err(Error::InvalidArgument("gradient check needs zero dropout".into()));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidArgument(format!("finite-difference step {step} must be positive")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = Params::<f64>::init(config, &mut rng);
    for b in &mut p.blocks {
        for v in b.norm1.gamma.iter_mut().chain(b.norm2.gamma.iter_mut()) {
            *v = rng.random_range(0.5..1.5);
        }
        for v in b.norm1.beta.iter_mut().chain(b.norm2.beta.iter_mut()) {
            *v = rng.random_range(-0.5..0.5);
        }
    }
    for v in p.mlp.b.iter_mut() {
        *v = rng.random_range(0.1..0.5);
    }
    let data: Vec<(Vec<f64>, Vec<f64>)> = (0..3)
        .map(|_| {
            let x = (0..config.window).map(|_| rng.random_range(-1.5..1.5)).collect();
            let t = (0..config.horizon).map(|_| rng.random_range(-1.0..1.0)).collect();
            (x, t)
        })
        .collect();
    let pe = if config.use_positional_encoding {
        positional_encoding::<f64>(config.window, config.d_model)?.into_vec()
    } else {
        Vec::new()
    };

    let mut g = p.zeros_like();
    let n = (data.len() * config.horizon) as f64;
    for (x, t) in &data {
        let (y, tr) = forward(&p, config, &pe, x, None);
        let dy: Vec<f64> = y.iter().zip(t).map(|(a, b)| 2.0 * (a - b) / n).collect();
        backward(&p, config, &tr, &dy, &mut g);
    }
    let analytic: Vec<Vec<f64>> = g.slices().iter().map(|s| s.to_vec()).collect();

    let mut out = GradientCheck {
        worst_relative_error: 0.0,
        worst_parameter: String::new(),
        parameters_checked: 0,
    };
    for (ti, (name, _)) in p.layout().iter().enumerate() {
        for (k, &a) in analytic[ti].iter().enumerate() {
            let orig = p.slices()[ti][k];
            p.slices_mut()[ti][k] = orig + step;
            let up = loss(&p, config, &pe, &data);
            p.slices_mut()[ti][k] = orig - step;
            let down = loss(&p, config, &pe, &data);
            p.slices_mut()[ti][k] = orig;
            let numeric = (up - down) / (2.0 * step);
            let err = (a - numeric).abs() / a.abs().max(numeric.abs()).max(1e-6);
            if !err.is_finite() {
                return Err(Error::NonFinite(format!("gradient of {name}[{k}]")));
            }
            if err > out.worst_relative_error || out.worst_parameter.is_empty() {
                out.worst_relative_error = err;
                out.worst_parameter = format!("{name}[{k}]");
            }
            out.parameters_checked += 1;
        }
    }
    Ok(out)
}
