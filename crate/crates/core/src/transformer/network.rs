//! Forward pass with recorded intermediates, and the matching backward pass.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::scalar::Scalar;

use super::params::{Block, Linear, Norm, Params};
use super::TransformerConfig;

pub(crate) const NORM_EPS: f64 = 1e-6;

/// Softmax of `q_h k_h^T / sqrt(dk)` for the head occupying columns
/// `offset..offset + dk` of row-major `q` and `k` with row length `stride`.
pub(crate) fn attention_weights<T: Scalar>(q: &[T], k: &[T], stride: usize, offset: usize, dk: usize, out: &mut [T]) {
    let (lq, lk) = (q.len() / stride, k.len() / stride);
    let scale = T::one() / T::count(dk).sqrt();
    for i in 0..lq {
        let qi = &q[i * stride + offset..i * stride + offset + dk];
        let row = &mut out[i * lk..(i + 1) * lk];
        for (j, r) in row.iter_mut().enumerate() {
            let kj = &k[j * stride + offset..j * stride + offset + dk];
            *r = qi.iter().zip(kj).map(|(&a, &b)| a * b).sum::<T>() * scale;
        }
        let max = row.iter().copied().fold(T::neg_infinity(), T::max);
        let mut z = T::zero();
        for r in row.iter_mut() {
            *r = (*r - max).exp();
            z += *r;
        }
        for r in row.iter_mut() {
            *r /= z;
        }
    }
}

fn affine<T: Scalar>(x: &[T], rows: usize, l: &Linear<T>) -> Vec<T> {
    let (fi, fo) = (l.fan_in, l.fan_out);
    let mut out = Vec::with_capacity(rows * fo);
    for r in 0..rows {
        out.extend_from_slice(&l.b);
        let o = &mut out[r * fo..(r + 1) * fo];
        for (i, &xv) in x[r * fi..(r + 1) * fi].iter().enumerate() {
            if xv == T::zero() {
                continue;
            }
            for (oj, &w) in o.iter_mut().zip(&l.w[i * fo..(i + 1) * fo]) {
                *oj += xv * w;
            }
        }
    }
    out
}

/// Accumulates parameter gradients of `y = x W + b` into `g` and, when
/// requested, the input gradient into `dx`.
fn affine_backward<T: Scalar>(x: &[T], rows: usize, l: &Linear<T>, dy: &[T], g: &mut Linear<T>, mut dx: Option<&mut [T]>) {
    let (fi, fo) = (l.fan_in, l.fan_out);
    for r in 0..rows {
        let dyr = &dy[r * fo..(r + 1) * fo];
        for (gb, &d) in g.b.iter_mut().zip(dyr) {
            *gb += d;
        }
        for i in 0..fi {
            let xv = x[r * fi + i];
            let wrow = &l.w[i * fo..(i + 1) * fo];
            let grow = &mut g.w[i * fo..(i + 1) * fo];
            let mut acc = T::zero();
            for j in 0..fo {
                grow[j] += xv * dyr[j];
                acc += wrow[j] * dyr[j];
            }
            if let Some(dx) = dx.as_deref_mut() {
                dx[r * fi + i] += acc;
            }
        }
    }
}

#[derive(Debug, Clone)]
struct NormTrace<T> {
    xhat: Vec<T>,
    sigma: Vec<T>,
}

/// Row-wise `gamma * (x - mean) / (std + eps) + beta`.
fn norm_forward<T: Scalar>(x: &[T], d: usize, n: &Norm<T>) -> (Vec<T>, NormTrace<T>) {
    let rows = x.len() / d;
    let eps = T::lit(NORM_EPS);
    let mut y = vec![T::zero(); x.len()];
    let mut xhat = vec![T::zero(); x.len()];
    let mut sigma = vec![T::zero(); rows];
    for r in 0..rows {
        let xr = &x[r * d..(r + 1) * d];
        let mu = xr.iter().copied().sum::<T>() / T::count(d);
        let var = xr.iter().map(|&v| (v - mu) * (v - mu)).sum::<T>() / T::count(d);
        let sd = var.sqrt();
        sigma[r] = sd;
        let s = sd + eps;
        for c in 0..d {
            let h = (xr[c] - mu) / s;
            xhat[r * d + c] = h;
            y[r * d + c] = n.gamma[c] * h + n.beta[c];
        }
    }
    (y, NormTrace { xhat, sigma })
}

fn norm_backward<T: Scalar>(dy: &[T], d: usize, n: &Norm<T>, tr: &NormTrace<T>, g: &mut Norm<T>) -> Vec<T> {
    let rows = dy.len() / d;
    let eps = T::lit(NORM_EPS);
    let dn = T::count(d);
    let mut dx = vec![T::zero(); dy.len()];
    let mut gh = vec![T::zero(); d];
    for r in 0..rows {
        let dyr = &dy[r * d..(r + 1) * d];
        let xh = &tr.xhat[r * d..(r + 1) * d];
        for c in 0..d {
            g.gamma[c] += dyr[c] * xh[c];
            g.beta[c] += dyr[c];
            gh[c] = dyr[c] * n.gamma[c];
        }
        let sd = tr.sigma[r];
        let s = sd + eps;
        let mean_g = gh.iter().copied().sum::<T>() / dn;
        let proj = if sd > T::zero() {
            gh.iter().zip(xh).map(|(&a, &b)| a * b).sum::<T>() / (dn * sd)
        } else {
            T::zero()
        };
        for c in 0..d {
            dx[r * d + c] = (gh[c] - mean_g) / s - xh[c] * proj;
        }
    }
    dx
}

fn dropout_mask<T: Scalar>(len: usize, rate: f64, rng: Option<&mut ChaCha8Rng>) -> Option<Vec<T>> {
    let rng = rng?;
    if rate <= 0.0 {
        return None;
    }
    let keep = T::lit(1.0 / (1.0 - rate));
    Some(
        (0..len)
            .map(|_| if rng.random::<f64>() < rate { T::zero() } else { keep })
            .collect(),
    )
}

fn apply_mask<T: Scalar>(x: &mut [T], mask: &Option<Vec<T>>) {
    if let Some(m) = mask {
        for (v, &k) in x.iter_mut().zip(m) {
            *v *= k;
        }
    }
}

#[derive(Debug, Clone)]
struct BlockTrace<T> {
    input: Vec<T>,
    q: Vec<T>,
    k: Vec<T>,
    v: Vec<T>,
    attn: Vec<T>,
    z: Vec<T>,
    mask1: Option<Vec<T>>,
    norm1: NormTrace<T>,
    n1: Vec<T>,
    f1_pre: Vec<T>,
    f1: Vec<T>,
    mask2: Option<Vec<T>>,
    norm2: NormTrace<T>,
}

/// Intermediates of one forward pass.
#[derive(Debug, Clone)]
pub(crate) struct Trace<T> {
    x: Vec<T>,
    blocks: Vec<BlockTrace<T>>,
    pooled: Vec<T>,
    m_pre: Vec<T>,
    m_out: Vec<T>,
    mask3: Option<Vec<T>>,
}

impl<T: Scalar> Trace<T> {
    /// Attention weights of every block and head, each `L x L` row-major.
    pub fn attention(&self) -> impl Iterator<Item = &[T]> {
        self.blocks.iter().map(|b| b.attn.as_slice())
    }

    /// Output of the last layer normalization of block `i`.
    #[cfg(test)]
    pub fn block_output(&self, i: usize) -> Option<&[T]> {
        self.blocks.get(i + 1).map(|b| b.input.as_slice())
    }
}

struct Dims {
    len: usize,
    d: usize,
    heads: usize,
    hs: usize,
}

impl Dims {
    fn inner(&self) -> usize {
        self.heads * self.hs
    }
}

fn block_forward<T: Scalar>(
    b: &Block<T>,
    h: Vec<T>,
    dims: &Dims,
    cfg: &TransformerConfig,
    mut rng: Option<&mut ChaCha8Rng>,
) -> (Vec<T>, BlockTrace<T>) {
    let (l, d, inner) = (dims.len, dims.d, dims.inner());
    let q = affine(&h, l, &b.wq);
    let k = affine(&h, l, &b.wk);
    let v = affine(&h, l, &b.wv);
    let mut attn = vec![T::zero(); dims.heads * l * l];
    let mut z = vec![T::zero(); l * inner];
    for head in 0..dims.heads {
        let off = head * dims.hs;
        let a = &mut attn[head * l * l..(head + 1) * l * l];
        attention_weights(&q, &k, inner, off, dims.hs, a);
        for i in 0..l {
            for j in 0..l {
                let w = a[i * l + j];
                for c in 0..dims.hs {
                    z[i * inner + off + c] += w * v[j * inner + off + c];
                }
            }
        }
    }
    let mut o = affine(&z, l, &b.wo);
    let mask1 = dropout_mask(o.len(), cfg.dropout, rng.as_deref_mut());
    apply_mask(&mut o, &mask1);
    let r1: Vec<T> = h.iter().zip(&o).map(|(&a, &b)| a + b).collect();
    let (n1, norm1) = norm_forward(&r1, d, &b.norm1);
    let f1_pre = affine(&n1, l, &b.ff1);
    let f1: Vec<T> = f1_pre.iter().map(|&v| v.max(T::zero())).collect();
    let mut f2 = affine(&f1, l, &b.ff2);
    let mask2 = dropout_mask(f2.len(), cfg.dropout, rng);
    apply_mask(&mut f2, &mask2);
    let r2: Vec<T> = n1.iter().zip(&f2).map(|(&a, &b)| a + b).collect();
    let (n2, norm2) = norm_forward(&r2, d, &b.norm2);
    (
        n2,
        BlockTrace {
            input: h,
            q,
            k,
            v,
            attn,
            z,
            mask1,
            norm1,
            n1,
            f1_pre,
            f1,
            mask2,
            norm2,
        },
    )
}

fn block_backward<T: Scalar>(b: &Block<T>, tr: &BlockTrace<T>, dn2: &[T], dims: &Dims, g: &mut Block<T>) -> Vec<T> {
    let (l, d, inner, hs) = (dims.len, dims.d, dims.inner(), dims.hs);
    let dr2 = norm_backward(dn2, d, &b.norm2, &tr.norm2, &mut g.norm2);
    let mut dn1 = dr2.clone();
    let mut df2 = dr2;
    apply_mask(&mut df2, &tr.mask2);
    let mut df1 = vec![T::zero(); tr.f1.len()];
    affine_backward(&tr.f1, l, &b.ff2, &df2, &mut g.ff2, Some(&mut df1));
    for (g1, &pre) in df1.iter_mut().zip(&tr.f1_pre) {
        if pre <= T::zero() {
            *g1 = T::zero();
        }
    }
    affine_backward(&tr.n1, l, &b.ff1, &df1, &mut g.ff1, Some(&mut dn1));
    let dr1 = norm_backward(&dn1, d, &b.norm1, &tr.norm1, &mut g.norm1);
    let mut dh = dr1.clone();
    let mut d_o = dr1;
    apply_mask(&mut d_o, &tr.mask1);
    let mut dz = vec![T::zero(); l * inner];
    affine_backward(&tr.z, l, &b.wo, &d_o, &mut g.wo, Some(&mut dz));

    let mut dq = vec![T::zero(); l * inner];
    let mut dk = vec![T::zero(); l * inner];
    let mut dv = vec![T::zero(); l * inner];
    let scale = T::one() / T::count(hs).sqrt();
    let mut da = vec![T::zero(); l * l];
    for head in 0..dims.heads {
        let off = head * hs;
        let a = &tr.attn[head * l * l..(head + 1) * l * l];
        for i in 0..l {
            let dzi = &dz[i * inner + off..i * inner + off + hs];
            for j in 0..l {
                let vj = &tr.v[j * inner + off..j * inner + off + hs];
                da[i * l + j] = dzi.iter().zip(vj).map(|(&x, &y)| x * y).sum();
                let aij = a[i * l + j];
                for c in 0..hs {
                    dv[j * inner + off + c] += aij * dzi[c];
                }
            }
        }
        for i in 0..l {
            let row = &a[i * l..(i + 1) * l];
            let dar = &da[i * l..(i + 1) * l];
            let dot: T = row.iter().zip(dar).map(|(&x, &y)| x * y).sum();
            for j in 0..l {
                let ds = row[j] * (dar[j] - dot) * scale;
                if ds == T::zero() {
                    continue;
                }
                for c in 0..hs {
                    dq[i * inner + off + c] += ds * tr.k[j * inner + off + c];
                    dk[j * inner + off + c] += ds * tr.q[i * inner + off + c];
                }
            }
        }
    }
    affine_backward(&tr.input, l, &b.wq, &dq, &mut g.wq, Some(&mut dh));
    affine_backward(&tr.input, l, &b.wk, &dk, &mut g.wk, Some(&mut dh));
    affine_backward(&tr.input, l, &b.wv, &dv, &mut g.wv, Some(&mut dh));
    dh
}

fn dims(cfg: &TransformerConfig, len: usize) -> Dims {
    Dims {
        len,
        d: cfg.d_model,
        heads: cfg.num_heads,
        hs: cfg.head_size,
    }
}

/// Runs the network on one standardized window. `pe` is the `L x d_model`
/// positional table (empty to disable); `rng` enables dropout.
pub(crate) fn forward<T: Scalar>(
    p: &Params<T>,
    cfg: &TransformerConfig,
    pe: &[T],
    x: &[T],
    mut rng: Option<&mut ChaCha8Rng>,
) -> (Vec<T>, Trace<T>) {
    let dm = dims(cfg, x.len());
    let (l, d) = (dm.len, dm.d);
    let mut h = Vec::with_capacity(l * d);
    for (i, &xv) in x.iter().enumerate() {
        for c in 0..d {
            let pos = if pe.is_empty() { T::zero() } else { pe[i * d + c] };
            h.push(xv * p.embed.w[c] + p.embed.b[c] + pos);
        }
    }
    let mut blocks = Vec::with_capacity(p.blocks.len());
    for b in &p.blocks {
        let (next, tr) = block_forward(b, h, &dm, cfg, rng.as_deref_mut());
        blocks.push(tr);
        h = next;
    }
    let mut pooled = vec![T::zero(); d];
    for i in 0..l {
        for c in 0..d {
            pooled[c] += h[i * d + c];
        }
    }
    let inv = T::one() / T::count(l);
    for v in pooled.iter_mut() {
        *v *= inv;
    }
    let m_pre = affine(&pooled, 1, &p.mlp);
    let mut m_out: Vec<T> = m_pre.iter().map(|&v| v.max(T::zero())).collect();
    let mask3 = dropout_mask(m_out.len(), cfg.mlp_dropout, rng);
    apply_mask(&mut m_out, &mask3);
    let y = affine(&m_out, 1, &p.head);
    (
        y,
        Trace {
            x: x.to_vec(),
            blocks,
            pooled,
            m_pre,
            m_out,
            mask3,
        },
    )
}

/// Adds the gradient of a loss with output gradient `dy` to `g`.
pub(crate) fn backward<T: Scalar>(p: &Params<T>, cfg: &TransformerConfig, tr: &Trace<T>, dy: &[T], g: &mut Params<T>) {
    let dm = dims(cfg, tr.x.len());
    let (l, d) = (dm.len, dm.d);
    let mut dm_out = vec![T::zero(); tr.m_out.len()];
    affine_backward(&tr.m_out, 1, &p.head, dy, &mut g.head, Some(&mut dm_out));
    apply_mask(&mut dm_out, &tr.mask3);
    for (v, &pre) in dm_out.iter_mut().zip(&tr.m_pre) {
        if pre <= T::zero() {
            *v = T::zero();
        }
    }
    let mut dpooled = vec![T::zero(); d];
    affine_backward(&tr.pooled, 1, &p.mlp, &dm_out, &mut g.mlp, Some(&mut dpooled));
    let inv = T::one() / T::count(l);
    let mut dh: Vec<T> = (0..l * d).map(|i| dpooled[i % d] * inv).collect();
    for ((b, btr), gb) in p.blocks.iter().zip(&tr.blocks).zip(g.blocks.iter_mut()).rev() {
        dh = block_backward(b, btr, &dh, &dm, gb);
    }
    for (i, &xv) in tr.x.iter().enumerate() {
        for c in 0..d {
            g.embed.w[c] += xv * dh[i * d + c];
            g.embed.b[c] += dh[i * d + c];
        }
    }
}
