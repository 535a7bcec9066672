use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::TransformerConfig;

/// A parameter tensor in checkpoint form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedTensor {
    pub name: String,
    pub shape: Vec<usize>,
    pub data: Vec<f64>,
}

/// `y = x W + b` with `W` stored row-major as `fan_in x fan_out`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Linear<T> {
    pub w: Vec<T>,
    pub b: Vec<T>,
    pub fan_in: usize,
    pub fan_out: usize,
}

impl<T: Scalar> Linear<T> {
    fn glorot(fan_in: usize, fan_out: usize, rng: &mut ChaCha8Rng) -> Self {
        let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
        Linear {
            w: (0..fan_in * fan_out)
                .map(|_| T::lit(rng.random_range(-limit..limit)))
                .collect(),
            b: vec![T::zero(); fan_out],
            fan_in,
            fan_out,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Norm<T> {
    pub gamma: Vec<T>,
    pub beta: Vec<T>,
}

impl<T: Scalar> Norm<T> {
    fn identity(d: usize) -> Self {
        Norm {
            gamma: vec![T::one(); d],
            beta: vec![T::zero(); d],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Block<T> {
    pub wq: Linear<T>,
    pub wk: Linear<T>,
    pub wv: Linear<T>,
    pub wo: Linear<T>,
    pub norm1: Norm<T>,
    pub ff1: Linear<T>,
    pub ff2: Linear<T>,
    pub norm2: Norm<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Params<T> {
    pub embed: Linear<T>,
    pub blocks: Vec<Block<T>>,
    pub mlp: Linear<T>,
    pub head: Linear<T>,
}

impl<T: Scalar> Params<T> {
    /// Glorot-uniform weights, zero biases and identity layer norms, drawn
    /// in a fixed order from `rng`.
    pub fn init(cfg: &TransformerConfig, rng: &mut ChaCha8Rng) -> Self {
        let d = cfg.d_model;
        let inner = cfg.num_heads * cfg.head_size;
        let embed = Linear::glorot(1, d, rng);
        let blocks = (0..cfg.num_blocks)
            .map(|_| Block {
                wq: Linear::glorot(d, inner, rng),
                wk: Linear::glorot(d, inner, rng),
                wv: Linear::glorot(d, inner, rng),
                wo: Linear::glorot(inner, d, rng),
                norm1: Norm::identity(d),
                ff1: Linear::glorot(d, cfg.d_ff, rng),
                ff2: Linear::glorot(cfg.d_ff, d, rng),
                norm2: Norm::identity(d),
            })
            .collect();
        let mlp = Linear::glorot(d, cfg.mlp_units, rng);
        let head = Linear::glorot(cfg.mlp_units, cfg.horizon, rng);
        Params {
            embed,
            blocks,
            mlp,
            head,
        }
    }

    /// Names and shapes of every tensor, in the canonical order.
    pub fn layout(&self) -> Vec<(String, Vec<usize>)> {
        let mut out = Vec::new();
        let lin = |out: &mut Vec<(String, Vec<usize>)>, name: &str, l: &Linear<T>| {
            out.push((format!("{name}.weight"), vec![l.fan_in, l.fan_out]));
            out.push((format!("{name}.bias"), vec![l.fan_out]));
        };
        let norm = |out: &mut Vec<(String, Vec<usize>)>, name: &str, n: &Norm<T>| {
            out.push((format!("{name}.gamma"), vec![n.gamma.len()]));
            out.push((format!("{name}.beta"), vec![n.beta.len()]));
        };
        lin(&mut out, "embed", &self.embed);
        for (i, b) in self.blocks.iter().enumerate() {
            lin(&mut out, &format!("block{i}.query"), &b.wq);
            lin(&mut out, &format!("block{i}.key"), &b.wk);
            lin(&mut out, &format!("block{i}.value"), &b.wv);
            lin(&mut out, &format!("block{i}.output"), &b.wo);
            norm(&mut out, &format!("block{i}.norm1"), &b.norm1);
            lin(&mut out, &format!("block{i}.ff1"), &b.ff1);
            lin(&mut out, &format!("block{i}.ff2"), &b.ff2);
            norm(&mut out, &format!("block{i}.norm2"), &b.norm2);
        }
        lin(&mut out, "mlp", &self.mlp);
        lin(&mut out, "head", &self.head);
        out
    }

    /// Every tensor, in the order of [`Params::layout`].
    pub fn slices(&self) -> Vec<&[T]> {
        let mut out: Vec<&[T]> = vec![&self.embed.w, &self.embed.b];
        for b in &self.blocks {
            out.extend([
                &b.wq.w[..],
                &b.wq.b,
                &b.wk.w,
                &b.wk.b,
                &b.wv.w,
                &b.wv.b,
                &b.wo.w,
                &b.wo.b,
                &b.norm1.gamma,
                &b.norm1.beta,
                &b.ff1.w,
                &b.ff1.b,
                &b.ff2.w,
                &b.ff2.b,
                &b.norm2.gamma,
                &b.norm2.beta,
            ]);
        }
        out.extend([&self.mlp.w[..], &self.mlp.b, &self.head.w, &self.head.b]);
        out
    }

    pub fn slices_mut(&mut self) -> Vec<&mut [T]> {
        let mut out: Vec<&mut [T]> = vec![&mut self.embed.w, &mut self.embed.b];
        for b in &mut self.blocks {
            out.extend([
                &mut b.wq.w[..],
                &mut b.wq.b,
                &mut b.wk.w,
                &mut b.wk.b,
                &mut b.wv.w,
                &mut b.wv.b,
                &mut b.wo.w,
                &mut b.wo.b,
                &mut b.norm1.gamma,
                &mut b.norm1.beta,
                &mut b.ff1.w,
                &mut b.ff1.b,
                &mut b.ff2.w,
                &mut b.ff2.b,
                &mut b.norm2.gamma,
                &mut b.norm2.beta,
            ]);
        }
        out.extend([
            &mut self.mlp.w[..],
            &mut self.mlp.b,
            &mut self.head.w,
            &mut self.head.b,
        ]);
        out
    }

    pub fn zeros_like(&self) -> Self {
        let mut z = self.clone();
        for s in z.slices_mut() {
            s.fill(T::zero());
        }
        z
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (a, b) in self.slices_mut().into_iter().zip(other.slices()) {
            for (x, &y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
    }

    pub fn all_finite(&self) -> bool {
        self.slices().iter().all(|s| s.iter().all(|v| v.is_finite()))
    }

    pub fn parameter_count(&self) -> usize {
        self.slices().iter().map(|s| s.len()).sum()
    }

    /// Checks every tensor against the shapes implied by `cfg`.
    pub fn audit(&self, cfg: &TransformerConfig) -> Result<()> {
        let expected = Params::<T>::init(cfg, &mut rand::SeedableRng::seed_from_u64(0)).layout();
        let actual = self.layout();
        if expected != actual {
            return Err(Error::ShapeMismatch("parameter layout does not match the configuration".into()));
        }
        for ((name, shape), data) in actual.iter().zip(self.slices()) {
            if shape.iter().product::<usize>() != data.len() {
                return Err(Error::ShapeMismatch(format!(
                    "{name}: shape {shape:?} but {} values",
                    data.len()
                )));
            }
        }
        Ok(())
    }

    pub fn to_tensors(&self) -> Vec<NamedTensor> {
        self.layout()
            .into_iter()
            .zip(self.slices())
            .map(|((name, shape), data)| NamedTensor {
                name,
                shape,
                data: data.iter().map(|v| v.to_f64_lossy()).collect(),
            })
            .collect()
    }

    /// Rebuilds parameters for `cfg` from checkpoint tensors, which must
    /// appear with the canonical names and shapes.
    pub fn from_tensors(cfg: &TransformerConfig, tensors: &[NamedTensor]) -> Result<Self> {
        let mut p = Params::<T>::init(cfg, &mut rand::SeedableRng::seed_from_u64(0));
        let layout = p.layout();
        if layout.len() != tensors.len() {
            return Err(Error::Checkpoint(format!(
                "expected {} tensors, found {}",
                layout.len(),
                tensors.len()
            )));
        }
        for (((name, shape), slot), t) in layout.iter().zip(p.slices_mut()).zip(tensors) {
            if &t.name != name || &t.shape != shape || t.data.len() != slot.len() {
                return Err(Error::Checkpoint(format!(
                    "tensor '{}' {:?} does not match expected '{name}' {shape:?}",
                    t.name, t.shape
                )));
            }
            for (s, &v) in slot.iter_mut().zip(&t.data) {
                if !v.is_finite() {
                    return Err(Error::Checkpoint(format!("tensor '{name}' holds a non-finite value")));
                }
                *s = T::lit(v);
            }
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn layout_matches_slices() {
        let cfg = TransformerConfig::compact();
        let p = Params::<f64>::init(&cfg, &mut ChaCha8Rng::seed_from_u64(1));
        let layout = p.layout();
        let slices = p.slices();
        assert_eq!(layout.len(), slices.len());
        for ((_, shape), s) in layout.iter().zip(&slices) {
            assert_eq!(shape.iter().product::<usize>(), s.len());
        }
        p.audit(&cfg).unwrap();
    }

    #[test]
    fn glorot_bounds_and_determinism() {
        let cfg = TransformerConfig::compact();
        let a = Params::<f64>::init(&cfg, &mut ChaCha8Rng::seed_from_u64(3));
        let b = Params::<f64>::init(&cfg, &mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(a, b);
        let limit = (6.0f64 / (16 + 16) as f64).sqrt();
        assert!(a.blocks[0].wq.w.iter().all(|v| v.abs() <= limit));
        assert!(a.blocks[0].wq.b.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn tensor_round_trip() {
        let cfg = TransformerConfig::compact();
        let a = Params::<f64>::init(&cfg, &mut ChaCha8Rng::seed_from_u64(4));
        let b = Params::<f64>::from_tensors(&cfg, &a.to_tensors()).unwrap();
        assert_eq!(a, b);
        let mut t = a.to_tensors();
        t[3].shape = vec![1];
        assert!(matches!(Params::<f64>::from_tensors(&cfg, &t), Err(Error::Checkpoint(_))));
    }
}
